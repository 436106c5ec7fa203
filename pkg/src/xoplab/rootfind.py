"""Polynomial zeros as ordered node sets.

Two independent routes: a general Aberth-Ehrlich all-roots iteration on the
monomial coefficients, and eigenvalues of the symmetric tridiagonal Jacobi
matrix for the classical families (Golub-Welsch).  Node sets are always
kept in canonical order: ascending real part, ties broken by imaginary part.
"""
from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .classical import Partition, even_partitions, generalized_hermite, hermite, jacobi, laguerre
from .poly import Polynomial
from .report import Case, SKIPPED, VerificationReport

MAX_ITER = 200
ABERTH_TOL = 1e-13
NEWTON_POLISH = 3
HARD_DEGREE_CAP = 30
SIMPLICITY_REL = 1e-8


class RootFindError(ArithmeticError):
    """The all-roots iteration did not converge."""


class DegenerateNodesError(ValueError):
    """Two nodes are closer than the simplicity threshold."""


def degree_cap() -> int:
    """Root-finding degree cap; ``XOPLAB_MAX_DEGREE`` may lower it, never above 30."""
    env = os.environ.get("XOPLAB_MAX_DEGREE")
    if env:
        try:
            return max(1, min(int(env), HARD_DEGREE_CAP))
        except ValueError:
            pass
    return HARD_DEGREE_CAP


def simplicity_threshold(points: Sequence[complex]) -> float:
    scale = max((abs(z) for z in points), default=0.0)
    return SIMPLICITY_REL * (1.0 + scale)


def canonical_order(points: Iterable[complex], tie_tol: float = 1e-10) -> list[complex]:
    """Sort by real part; points whose real parts agree within ``tie_tol``
    (relative to their size) are ordered by imaginary part."""
    pts = sorted((complex(z) for z in points), key=lambda z: (z.real, z.imag))
    out: list[complex] = []
    i = 0
    while i < len(pts):
        j = i + 1
        while j < len(pts) and abs(pts[j].real - pts[i].real) <= tie_tol * (1 + abs(pts[i])):
            j += 1
        out.extend(sorted(pts[i:j], key=lambda z: z.imag))
        i = j
    return out


@dataclass(frozen=True)
class NodeSet:
    """Ordered finite set of complex nodes."""

    points: tuple[complex, ...]
    source: str = ""
    tolerance: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(canonical_order(self.points)))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def min_gap(self) -> float:
        p = self.points
        if len(p) < 2:
            return math.inf
        return min(abs(p[i] - p[j]) for i in range(len(p)) for j in range(i + 1, len(p)))

    def is_simple(self) -> bool:
        return self.min_gap() > simplicity_threshold(self.points)

    def require_simple(self) -> "NodeSet":
        if not self.is_simple():
            raise DegenerateNodesError(
                f"nodes of {self.source or 'set'} are not simple: min gap {self.min_gap():.3e}"
            )
        return self

    def negated(self) -> "NodeSet":
        return NodeSet(tuple(-z for z in self.points), f"-({self.source})", self.tolerance)

    def union(self, other: "NodeSet") -> "NodeSet":
        return NodeSet(self.points + other.points, f"{self.source} | {other.source}",
                       max(self.tolerance, other.tolerance))

    def is_real(self, tol: float | None = None) -> bool:
        tol = self.tolerance if tol is None else tol
        return all(abs(z.imag) <= tol * (1 + abs(z)) for z in self.points)

    def real_parts(self) -> list[float]:
        return [z.real for z in self.points]


# ---------------------------------------------------------------------------
# general solver


def _horner_with_derivative(c: np.ndarray, z: complex) -> tuple[complex, complex]:
    # c lowest degree first
    p = 0j
    dp = 0j
    for a in c[::-1]:
        dp = dp * z + p
        p = p * z + a
    return p, dp


def _scale(c: np.ndarray, z: complex) -> float:
    return float(np.max(np.abs(c))) * max(1.0, abs(z)) ** (len(c) - 1)


def _as_complex_coeffs(p: Polynomial) -> np.ndarray:
    return np.array([complex(a) for a in p.coeffs], dtype=complex)


def fujiwara_bound(c: np.ndarray) -> float:
    """Upper bound on the moduli of all zeros (Fujiwara)."""
    n = len(c) - 1
    a = np.abs(c / c[-1])
    terms = [a[n - k] ** (1.0 / k) for k in range(1, n)]
    terms.append((a[0] / 2) ** (1.0 / n))
    return 2.0 * max(terms) if max(terms) > 0 else 1.0


def aberth(coeffs: np.ndarray, max_iter: int = MAX_ITER, tol: float = ABERTH_TOL) -> np.ndarray:
    """Aberth-Ehrlich simultaneous iteration; ``coeffs`` lowest degree first."""
    c = np.asarray(coeffs, dtype=complex)
    n = len(c) - 1
    if n < 1:
        return np.zeros(0, dtype=complex)
    radius = fujiwara_bound(c)
    # angular offset keeps the initial circle away from symmetric root patterns
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    absc = np.abs(c)
    eps = np.finfo(float).eps
    active = np.ones(n, dtype=bool)
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        zk = z[idx]
        pk = np.zeros_like(zk)
        dpk = np.zeros_like(zk)
        bound = np.zeros(len(idx))
        r = np.abs(zk)
        for a in c[::-1]:
            dpk = dpk * zk + pk
            pk = pk * zk + a
        for a in absc[::-1]:
            bound = bound * r + a
        # rounding-error bound of Horner evaluation
        converged = np.abs(pk) <= 4 * n * eps * bound
        diff = zk[:, None] - z[None, :]
        diff[np.arange(len(idx)), idx] = 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(diff == 0, 0.0, 1.0 / diff)
        inv[np.arange(len(idx)), idx] = 0.0
        s = inv.sum(axis=1)
        safe_d = np.where(dpk == 0, 1e-300, dpk)
        ratio = pk / safe_d
        w = ratio / (1 - ratio * s)
        w = np.where(converged, 0.0, w)
        z[idx] = zk - w
        done = converged | (np.abs(w) <= tol * (1 + np.abs(z[idx])))
        active[idx[done]] = False
        if not active.any():
            return z
    raise RootFindError(f"Aberth iteration did not converge in {max_iter} steps (degree {n})")


def _newton_polish(c: np.ndarray, z: complex, steps: int = NEWTON_POLISH) -> complex:
    for _ in range(steps):
        p, dp = _horner_with_derivative(c, z)
        if dp == 0 or p == 0:
            break
        step = p / dp
        if not cmath.isfinite(step):
            break
        z = z - step
    return z


def _integer_coeffs(coeffs: Sequence[Fraction]) -> list[int]:
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return [int(c * den) for c in coeffs]


def _hom_horner(ints: Sequence[int], X: int, Y: int, S: int) -> tuple[int, int]:
    """``S**deg * p((X + iY)/S)`` in exact integer arithmetic."""
    re = im = 0
    scale = 1
    for a in reversed(ints):
        re, im = re * X - im * Y + a * scale, re * Y + im * X
        scale *= S
    return re, im


def _exact_newton_step(ints: Sequence[int], dints: Sequence[int], z: complex) -> complex:
    """Newton correction with ``p(z)`` and ``p'(z)`` evaluated exactly at the float ``z``."""
    xr, xi = Fraction(z.real), Fraction(z.imag)
    S = max(xr.denominator, xi.denominator)
    X, Y = int(xr * S), int(xi * S)
    pr, pi = _hom_horner(ints, X, Y, S)
    dr, di = _hom_horner(dints, X, Y, S)
    den = dr * dr + di * di
    if den == 0:
        return 0j
    # p/p' = (S^n p)/(S^(n-1) p') / S
    nr = pr * dr + pi * di
    ni = pi * dr - pr * di
    return complex(Fraction(nr, den * S), Fraction(ni, den * S))


def _exact_polish(p: Polynomial, z: complex, steps: int = NEWTON_POLISH) -> complex:
    ints = _integer_coeffs(p.coeffs)
    dints = [k * c for k, c in enumerate(ints)][1:]
    for _ in range(steps):
        step = _exact_newton_step(ints, dints, z)
        if step == 0:
            break
        z = z - step
        if abs(step) <= 1e-17 * (1 + abs(z)):
            break
    return z


def _clean(z: complex, real_coeffs: bool, tol: float) -> complex:
    if not real_coeffs:
        return z
    re, im = z.real, z.imag
    if abs(im) <= tol * (1 + abs(z)):
        im = 0.0
    if abs(re) <= tol * (1 + abs(z)):
        re = 0.0
    return complex(re, im)


def zeros(p: Polynomial, tol: float = 1e-12, source: str | None = None) -> NodeSet:
    """All zeros of ``p`` (with multiplicity), Newton polished, canonical order."""
    if p.degree < 1:
        raise ValueError("zeros() needs a polynomial of degree >= 1")
    if p.degree > degree_cap():
        raise ValueError(f"degree {p.degree} exceeds the root-finding cap {degree_cap()}")
    c = _as_complex_coeffs(p)
    real_coeffs = bool(np.all(c.imag == 0))
    z = aberth(c)
    if p.exact:
        z = [_exact_polish(p, complex(zk)) for zk in z]
    else:
        z = [_newton_polish(c, zk) for zk in z]
    z = [_clean(zk, real_coeffs, 1e-13) for zk in z]
    for zk in z:
        val, _ = _horner_with_derivative(c, zk)
        if abs(val) > tol * _scale(c, zk) * max(1, p.degree):
            raise RootFindError(f"residual {abs(val):.3e} too large at {zk}")
    return NodeSet(tuple(z), source or f"zeros({p})", tol)


def newton_fixed_point_defect(p: Polynomial, nodes: NodeSet) -> float:
    """Largest change one further Newton step would make (relative to ``1+|z|``)."""
    c = _as_complex_coeffs(p)
    worst = 0.0
    for zk in nodes:
        val, dval = _horner_with_derivative(c, zk)
        if dval != 0:
            worst = max(worst, abs(val / dval) / (1 + abs(zk)))
    return worst


# ---------------------------------------------------------------------------
# classical fast path


def _laguerre_jacobi_matrix(n: int, a: float):
    k = np.arange(n, dtype=float)
    diag = 2 * k + a + 1
    off = np.sqrt(np.arange(1, n) * (np.arange(1, n) + a))
    return diag, off


def _hermite_jacobi_matrix(n: int):
    return np.zeros(n), np.sqrt(np.arange(1, n) / 2.0)


def _jacobi_jacobi_matrix(n: int, a: float, b: float):
    diag = np.empty(n)
    off = np.empty(max(n - 1, 0))
    s = a + b
    for k in range(n):
        if k == 0:
            diag[k] = (b - a) / (s + 2)
        else:
            diag[k] = (b * b - a * a) / ((2 * k + s) * (2 * k + s + 2))
    for k in range(1, n):
        if k == 1:
            off[0] = math.sqrt(4 * (1 + a) * (1 + b) / ((2 + s) ** 2 * (3 + s)))
        else:
            num = 4 * k * (k + a) * (k + b) * (k + s)
            den = (2 * k + s) ** 2 * (2 * k + s + 1) * (2 * k + s - 1)
            off[k - 1] = math.sqrt(num / den)
    return diag, off


def classical_zeros(family: str, n: int, alpha=None, beta=None, polish: bool = True) -> NodeSet:
    """Zeros of a classical-range Laguerre/Jacobi/Hermite polynomial.

    ``family`` is ``"laguerre"``, ``"jacobi"`` or ``"hermite"``.  Raises
    ``ValueError`` outside the classical parameter range; use :func:`zeros`
    there instead.
    """
    if n < 0:
        raise ValueError("negative degree")
    if n > degree_cap():
        raise ValueError(f"degree {n} exceeds the root-finding cap {degree_cap()}")
    if family == "laguerre":
        if alpha is None or alpha <= -1:
            raise ValueError("classical Laguerre zeros need alpha > -1")
        poly = laguerre(n, alpha)
        src = f"L_{n}^({alpha})"
        d, e = _laguerre_jacobi_matrix(n, float(alpha))
    elif family == "jacobi":
        if alpha is None or beta is None or alpha <= -1 or beta <= -1:
            raise ValueError("classical Jacobi zeros need alpha, beta > -1")
        poly = jacobi(n, alpha, beta)
        src = f"P_{n}^({alpha},{beta})"
        d, e = _jacobi_jacobi_matrix(n, float(alpha), float(beta))
    elif family == "hermite":
        poly = hermite(n)
        src = f"H_{n}"
        d, e = _hermite_jacobi_matrix(n)
    else:
        raise ValueError(f"unknown family {family!r}")
    if n == 0:
        return NodeSet((), src)
    if n == 1:
        ev = np.array(d)
    else:
        ev = eigh_tridiagonal(d, e, eigvals_only=True)
    pts = [complex(v) for v in ev]
    if polish:
        pts = [complex(_exact_polish(poly, z, 1).real, 0.0) for z in pts]
    return NodeSet(tuple(pts), src)


# ---------------------------------------------------------------------------
# exact real-root counting (Sturm), used as an independent check


def sturm_real_root_count(p: Polynomial) -> int:
    """Number of distinct real zeros of an exact polynomial."""
    if not p.exact:
        raise TypeError("Sturm counting needs an exact polynomial")
    if p.degree < 1:
        return 0
    seq = [p, p.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        _, r = seq[-2].divmod(seq[-1])
        seq.append(-r)
    seq = [s for s in seq if not s.is_zero()]

    def changes(signs):
        signs = [s for s in signs if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def sign_at_inf(q: Polynomial, neg: bool) -> int:
        s = 1 if q.lead() > 0 else -1
        return -s if neg and q.degree % 2 else s

    return changes([sign_at_inf(q, True) for q in seq]) - changes([sign_at_inf(q, False) for q in seq])


def sturm_count_in(p: Polynomial, lo: Fraction, hi: Fraction) -> int:
    """Distinct real zeros in the half-open interval ``(lo, hi]``."""
    seq = [p, p.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        _, r = seq[-2].divmod(seq[-1])
        seq.append(-r)
    seq = [s for s in seq if not s.is_zero()]

    def changes(x):
        vals = [s(x) for s in seq]
        signs = [1 if v > 0 else -1 for v in vals if v != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    return changes(Fraction(lo)) - changes(Fraction(hi))


def squarefree_exact(p: Polynomial) -> bool:
    """True when ``gcd(p, p')`` is constant, i.e. all zeros are simple."""
    a, b = p, p.derivative()
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.degree == 0


# ---------------------------------------------------------------------------
# zero-location theorems


def _in_open_interval(z: complex, lo: float, hi: float, tol: float) -> bool:
    return abs(z.imag) <= tol and lo < z.real < hi


def _report_nodes(report: VerificationReport, desc: str, check: str, nodes: NodeSet,
                  interval=None, exclude=None, tol: float = 1e-9) -> None:
    gap = nodes.min_gap()
    thr = simplicity_threshold(nodes.points)
    report.add(Case(desc, f"{check}/simple", "PASS" if gap > thr else "FAIL",
                    gap if math.isfinite(gap) else None, thr))
    if interval is not None:
        lo, hi = interval
        bad = [z for z in nodes if not _in_open_interval(z, lo, hi, tol * (1 + abs(z)))]
        report.add(Case(desc, f"{check}/real_in_interval", "PASS" if not bad else "FAIL",
                        float(len(bad)), 0.0, detail="" if not bad else f"outside: {bad[:3]}"))
    if exclude is not None:
        lo, hi = exclude
        bad = [z for z in nodes if _in_open_interval(z, lo, hi, tol * (1 + abs(z)))]
        report.add(Case(desc, f"{check}/excluded_region", "PASS" if not bad else "FAIL",
                        float(len(bad)), 0.0, detail="" if not bad else f"inside: {bad[:3]}"))


def check_zero_theorems(m: int, alpha, beta) -> VerificationReport:
    """Zero location and simplicity for the classical building blocks.

    Laguerre: zeros of ``L_m^(alpha)`` (alpha > -1) are simple and positive;
    zeros of ``L_m^(-alpha-1)`` (alpha > m-1) are simple and avoid
    ``(0, inf)``.  Jacobi: zeros of ``P_m^(alpha,beta)`` (alpha, beta > -1)
    are simple and in ``(-1, 1)``; ``P_m^(-alpha-1,beta-1)`` has simple zeros
    under the parameter non-degeneracy conditions and none in ``(-1, 1)``
    when ``beta`` and ``alpha+1-m`` are both in ``(-1,0)`` or both positive.
    Hypotheses that do not hold produce SKIPPED cases.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    rep = VerificationReport("zero-theorems")
    tag = f"m={m} alpha={alpha} beta={beta}"

    def skip(check: str, why: str):
        rep.add(Case(tag, check, SKIPPED, detail=why))

    if alpha > -1:
        nodes = classical_zeros("laguerre", m, alpha)
        _report_nodes(rep, tag, "laguerre_classical", nodes, interval=(0.0, math.inf))
        rep.add(_agreement_case(tag, "laguerre_classical/matches_general", laguerre(m, alpha),
                                classical_zeros("laguerre", m, alpha, polish=False)))
    else:
        skip("laguerre_classical", "alpha <= -1")

    if alpha > m - 1:
        p = laguerre(m, -alpha - 1)
        nodes = zeros(p)
        _report_nodes(rep, tag, "laguerre_reflected", nodes, exclude=(0.0, math.inf))
        rep.add(Case(tag, "laguerre_reflected/simple_exact", "PASS" if squarefree_exact(p) else "FAIL"))
        positive = sturm_count_in(p, Fraction(0), _cauchy_bound(p))
        rep.add(Case(tag, "laguerre_reflected/sturm_no_positive", "PASS" if positive == 0 else "FAIL",
                     float(positive), 0.0))
    else:
        skip("laguerre_reflected", "requires alpha > m-1")

    if alpha > -1 and beta > -1:
        nodes = classical_zeros("jacobi", m, alpha, beta)
        _report_nodes(rep, tag, "jacobi_classical", nodes, interval=(-1.0, 1.0))
        rep.add(_agreement_case(tag, "jacobi_classical/matches_general", jacobi(m, alpha, beta),
                                classical_zeros("jacobi", m, alpha, beta, polish=False)))
    else:
        skip("jacobi_classical", "requires alpha, beta > -1")

    a2, b2 = -alpha - 1, beta - 1
    neg_ints = {Fraction(-k) for k in range(1, m + 1)}
    bad_sum = {Fraction(-k) for k in range(m + 1, 2 * m + 1)}
    p = jacobi(m, a2, b2)
    if a2 not in neg_ints and b2 not in neg_ints and (a2 + b2) not in bad_sum and p.degree == m:
        nodes = zeros(p)
        _report_nodes(rep, tag, "jacobi_reflected", nodes)
        rep.add(Case(tag, "jacobi_reflected/simple_exact", "PASS" if squarefree_exact(p) else "FAIL"))
    else:
        skip("jacobi_reflected", "parameter non-degeneracy fails")

    s = alpha + 1 - m
    if (-1 < beta < 0 and -1 < s < 0) or (beta > 0 and s > 0):
        if p.degree >= 1:
            nodes = zeros(p)
            _report_nodes(rep, tag, "jacobi_reflected_location", nodes, exclude=(-1.0, 1.0))
            inside = sturm_count_in(p, Fraction(-1), Fraction(1)) - (1 if p(Fraction(1)) == 0 else 0)
            rep.add(Case(tag, "jacobi_reflected_location/sturm_none_inside",
                         "PASS" if inside == 0 else "FAIL", float(inside), 0.0))
        else:
            rep.add(Case(tag, "jacobi_reflected_location", "PASS", detail="constant polynomial"))
    else:
        skip("jacobi_reflected_location", "beta and alpha+1-m not on the same side of 0")
    return rep


def _cauchy_bound(p: Polynomial) -> Fraction:
    lead = abs(p.lead())
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def _agreement_case(tag: str, check: str, p: Polynomial, fast: NodeSet, tol: float = 1e-10) -> Case:
    if p.degree < 1:
        return Case(tag, check, "PASS", 0.0, tol)
    general = zeros(p)
    err = max(abs(a - b) / (1 + abs(b)) for a, b in zip(general, fast))
    return Case.numeric(tag, check, err, tol)


def check_even_partitions(max_weight: int = 8) -> VerificationReport:
    """Generalized Hermite polynomials of even partitions have no real zeros."""
    rep = VerificationReport("even-partition-zeros")
    for lam in even_partitions(max_weight):
        h = generalized_hermite(lam)
        tag = f"lambda=({lam})"
        rep.add(Case(tag, "degree_is_weight", "PASS" if h.degree == lam.weight else "FAIL",
                     float(h.degree), float(lam.weight)))
        count = sturm_real_root_count(h)
        rep.add(Case(tag, "sturm_no_real_zero", "PASS" if count == 0 else "FAIL", float(count), 0.0))
        nodes = zeros(h)
        min_im = min(abs(z.imag) for z in nodes)
        rep.add(Case(tag, "numeric_no_real_zero", "PASS" if min_im > 1e-6 else "FAIL", min_im, 1e-6))
    return rep


def simplicity_probe(lam: Partition) -> dict:
    """Numeric look at the spacing of the non-zero zeros of ``H_lambda``.

    Reports the minimum pairwise gap among zeros with ``|z| > 1e-8``; makes
    no claim either way.
    """
    h = generalized_hermite(lam)
    nodes = zeros(h)
    nz = [z for z in nodes if abs(z) > 1e-8]
    gap = NodeSet(tuple(nz)).min_gap() if len(nz) > 1 else math.inf
    return {"partition": str(lam), "nonzero_zeros": len(nz), "min_gap": gap,
            "zero_multiplicity_at_origin": len(nodes) - len(nz)}
