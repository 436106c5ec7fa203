"""Verification grid: runs every suite and collects a single report.

Suites run in a fixed order and cases keep their grid order even when
``jobs > 1``; the JSON output is byte-identical for a given config and seed
(wall times are only emitted on request).
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import xop_det
from .classical import DEFAULT_ALPHAS, DEFAULT_BETAS, check_classical_identities
from .report import FAIL, PASS, REFUSED, Case, VerificationReport, timed
from .rootfind import (
    HARD_DEGREE_CAP,
    DegenerateNodesError,
    check_even_partitions,
    check_zero_theorems,
)
from .xop_direct import (
    HERMITE11,
    JACOBI,
    LAG1,
    LAG2,
    LAG3,
    XopSpec,
    build,
    hermite11_derivative_residual,
    methods_for,
    ode_residual,
    type1_derivative_residual,
)

SUITES = ("classical", "zeros", "paths", "ode", "determinantal", "permutations")

ZERO_ALPHAS = (Fraction(-1, 2), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(7, 3), Fraction(7, 2))
ZERO_BETAS = (Fraction(-1, 2), Fraction(1, 2), Fraction(1), Fraction(5, 2))


@dataclass
class RunConfig:
    m_max: int = 3
    n_max: int = 12
    alphas: tuple = DEFAULT_ALPHAS
    betas: tuple = (Fraction(1, 2), Fraction(1), Fraction(3, 2))
    classical_n_max: int = 10
    root_tol: float = 1e-12
    agreement_tol: float = 1e-8
    tight_tol: float = 1e-10
    tight_n: int = 6
    leading_tol: float = 1e-9
    imag_tol: float = 1e-9
    kernel_tol: float = 1e-6
    perm_count: int = 20
    perm_tol: float = 1e-10
    max_partition_weight: int = 8
    fmt: str = "text"
    jobs: int = 1
    seed: int = 0
    timings: bool = False
    suites: tuple = SUITES

    def __post_init__(self):
        self.alphas = tuple(Fraction(a) for a in self.alphas)
        self.betas = tuple(Fraction(b) for b in self.betas)
        self.suites = tuple(self.suites)

    def validate(self) -> "RunConfig":
        tols = ("root_tol", "agreement_tol", "tight_tol", "leading_tol", "imag_tol", "kernel_tol", "perm_tol")
        for name in tols:
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 <= self.n_max <= HARD_DEGREE_CAP:
            raise ValueError(f"n_max must be between 0 and {HARD_DEGREE_CAP}")
        if self.m_max < 1:
            raise ValueError("m_max must be at least 1")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.fmt not in ("json", "csv", "text"):
            raise ValueError(f"unknown format {self.fmt!r}")
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise ValueError(f"unknown suites: {sorted(unknown)}")
        return self

    def to_dict(self) -> dict:
        d = asdict(self)
        d["alphas"] = [str(a) for a in self.alphas]
        d["betas"] = [str(b) for b in self.betas]
        d["suites"] = list(self.suites)
        # neither affects the results, so the report bytes do not depend on them
        d.pop("timings")
        d.pop("jobs")
        return d


# ---------------------------------------------------------------------------
# grids


def family_alphas(family: str, m: int) -> tuple[Fraction, ...]:
    """Default alpha values exercising each family's constraint."""
    if family == LAG1:
        return (Fraction(1, 2), Fraction(1), Fraction(5, 2))
    if family == LAG2:
        return (m - Fraction(1, 2), m + Fraction(1, 3), Fraction(m + 2))
    if family == LAG3:
        return (Fraction(-1, 2), Fraction(-1, 3), Fraction(-3, 4))
    if family == JACOBI:
        return (m - Fraction(2, 3), m + Fraction(3, 4), m + Fraction(7, 3))
    raise ValueError(family)


def xop_grid(config: RunConfig) -> list[XopSpec]:
    out = []
    for fam in (LAG1, LAG2, LAG3):
        for m in range(1, config.m_max + 1):
            for a in family_alphas(fam, m):
                for n in range(config.n_max + 1):
                    s = XopSpec(fam, n, m, a)
                    if s.is_valid():
                        out.append(s)
    for m in range(1, config.m_max + 1):
        for a in family_alphas(JACOBI, m):
            for b in config.betas:
                for n in range(config.n_max + 1):
                    s = XopSpec(JACOBI, n, m, a, b)
                    if s.is_valid():
                        out.append(s)
    out.extend(XopSpec(HERMITE11, n) for n in range(3, config.n_max + 1))
    return out


# ---------------------------------------------------------------------------
# per-spec checks (top level so worker processes can pickle them)


def _paths(spec: XopSpec, config: RunConfig) -> list[Case]:
    methods = methods_for(spec.family)
    base, t0 = timed(build, spec, methods[0])
    cases = [Case(str(spec), "degree", PASS if base.degree == spec.n else FAIL,
                  float(base.degree), float(spec.n), t0)]
    for other in methods[1:]:
        p, t = timed(build, spec, other)
        cases.append(Case.exact(str(spec), f"{methods[0]}_vs_{other}", p - base, t))
    return cases


def _ode(spec: XopSpec, config: RunConfig) -> list[Case]:
    rel, t = timed(ode_residual, spec)
    cases = [Case.exact(str(spec), rel.tag, rel.residual, t)]
    if spec.family == LAG1:
        cases.append(Case.exact(str(spec), "Type1_derivative", type1_derivative_residual(spec)))
    if spec.family == HERMITE11:
        cases.append(Case.exact(str(spec), "Hermite11_derivative", hermite11_derivative_residual(spec.n)))
    return cases


def _refused(spec: XopSpec, check: str, err: Exception) -> Case:
    return Case(str(spec), check, REFUSED, detail=f"{type(err).__name__}: {err}")


def _determinantal(spec: XopSpec, config: RunConfig) -> list[Case]:
    tag = str(spec)
    try:
        det, t = timed(xop_det.det_xop, spec)
    except (xop_det.ConditioningError, DegenerateNodesError) as err:
        return [_refused(spec, "agreement", err)]
    exact = build(spec)
    tol = config.tight_tol if spec.n <= config.tight_n else config.agreement_tol
    lead_err = abs(complex(det.lead()) - complex(exact.lead())) / abs(complex(exact.lead()))
    cases = [
        Case.numeric(tag, "leading_coefficient", lead_err, tol,
                     detail="" if lead_err <= tol else "leading-coefficient mismatch"),
        Case.numeric(tag, "agreement", xop_det.coeff_rel_error(det, exact), tol, t),
        Case.numeric(tag, "imaginary_parts", xop_det.max_imag_ratio(det), config.imag_tol),
    ]
    got, want = xop_det.leading_law(spec)
    cases.append(Case.numeric(tag, "leading_law", abs(got - want) / abs(want), config.leading_tol))
    cases.append(Case.numeric(tag, "kernel_singular", xop_det.kernel_singularity(spec), config.kernel_tol))
    return cases


def _permutations(spec: XopSpec, config: RunConfig, index: int) -> list[Case]:
    rng = np.random.default_rng([config.seed, index])
    try:
        asm = xop_det.assemble(spec)
        base = asm.evaluate()
    except (xop_det.ConditioningError, DegenerateNodesError) as err:
        return [_refused(spec, "permutation_invariance", err)]
    k = len(asm.nodes.points)
    worst = 0.0
    for perm in xop_det.random_permutations(k, config.perm_count, rng):
        worst = max(worst, xop_det.coeff_rel_error(asm.evaluate(perm), base))
    return [Case.numeric(str(spec), "permutation_invariance", worst, config.perm_tol,
                         detail=f"{config.perm_count} permutations of {k} nodes")]


def _zero_theorems(args: tuple, config: RunConfig) -> list[Case]:
    m, a, b = args
    return check_zero_theorems(m, a, b).cases


def _run_task(task: tuple) -> list[Case]:
    fn, item, config, extra = task
    return fn(item, config, *extra)


def _map(tasks: list[tuple], config: RunConfig) -> list[list[Case]]:
    if config.jobs == 1 or len(tasks) < 2:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        # map preserves submission order, so the report order is fixed
        return list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * config.jobs))))


def _suite(name: str, fn: Callable, items: Iterable, config: RunConfig,
           extra: Callable[[int], tuple] = lambda i: ()) -> VerificationReport:
    rep = VerificationReport(name)
    tasks = [(fn, item, config, extra(i)) for i, item in enumerate(items)]
    for cases in _map(tasks, config):
        for c in cases:
            rep.add(c)
    return rep


# ---------------------------------------------------------------------------
# suites


def suite_classical(config: RunConfig) -> VerificationReport:
    return check_classical_identities(config.classical_n_max, config.alphas, DEFAULT_BETAS)


def suite_zeros(config: RunConfig) -> VerificationReport:
    items = [(m, a, b) for m in range(1, config.m_max + 1) for a in ZERO_ALPHAS for b in ZERO_BETAS]
    rep = _suite("zero-theorems", _zero_theorems, items, config)
    rep.extend(check_even_partitions(config.max_partition_weight))
    return rep


def suite_paths(config: RunConfig, specs: Sequence[XopSpec]) -> VerificationReport:
    return _suite("path-agreement", _paths, specs, config)


def suite_ode(config: RunConfig, specs: Sequence[XopSpec]) -> VerificationReport:
    return _suite("ode-relations", _ode, specs, config)


def suite_determinantal(config: RunConfig, specs: Sequence[XopSpec]) -> VerificationReport:
    specs = [s for s in specs if xop_det.supported(s)]
    rep = _suite("determinantal", _determinantal, specs, config)
    lag2 = [s for s in specs if s.family == LAG2]
    if lag2:
        res = xop_det.resolve_type2_constant(lag2, tol=config.leading_tol)
        ok = res["reading"] == xop_det.TYPE2_READING
        worst = res["max_rel_error"][xop_det.TYPE2_READING]
        rep.add(Case("lag2 grid", "type2_constant_resolution", PASS if ok else FAIL,
                     worst, config.leading_tol,
                     detail=f"fitted reading: {res['reading']}, {res['cases']} cases"))
        rep.notes["type2_constant"] = {
            "reading": res["reading"],
            "expression": res["expression"],
            "cases": res["cases"],
            "max_rel_error": {k: float(v) for k, v in res["max_rel_error"].items()},
            "undefined_cases": res["undefined_cases"],
        }
    return rep


def suite_permutations(config: RunConfig, specs: Sequence[XopSpec]) -> VerificationReport:
    specs = [s for s in specs if xop_det.supported(s)]
    return _suite("permutation-invariance", _permutations, specs, config, extra=lambda i: (i,))


def cmd_verify(config: RunConfig | None = None) -> VerificationReport:
    """Run the selected suites over the grid; ``report.ok`` iff nothing failed."""
    config = (config or RunConfig()).validate()
    specs = xop_grid(config)
    report = VerificationReport("xoplab-verify", config=config.to_dict())
    runners = {
        "classical": lambda: suite_classical(config),
        "zeros": lambda: suite_zeros(config),
        "paths": lambda: suite_paths(config, specs),
        "ode": lambda: suite_ode(config, specs),
        "determinantal": lambda: suite_determinantal(config, specs),
        "permutations": lambda: suite_permutations(config, specs),
    }
    for name in SUITES:
        if name in config.suites:
            report.extend(runners[name](), prefix=name)
    return report
