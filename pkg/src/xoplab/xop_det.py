"""Vandermonde-type determinantal formulas for the exceptional families.

Every formula has the same shape: a square matrix whose first ``k-1`` rows are
``[1, z, ..., z**(k-1)]`` for nodes ``z`` built from zeros of classical
polynomials, and whose last row holds explicit polynomials.  Expanding along
the last row gives the determinant as a polynomial whose coefficients are
numeric minors of the node rows.  After division by the Vandermonde product
of the nodes and a family specific constant the result is the exceptional
polynomial (plus an additive constant and an extra factor ``x`` for the
type III Laguerre and the (1,1) Hermite families).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .classical import (
    exp_partial_sum,
    generalized_hermite,
    jacobi,
    laguerre,
    pochhammer,
    r_partial_sum,
)
from .poly import FLOAT, Polynomial
from .rootfind import DegenerateNodesError, NodeSet, classical_zeros, simplicity_threshold, zeros
from .xop_direct import (
    HERMITE,
    HERMITE11,
    JACOBI,
    LAG1,
    LAG2,
    LAG3,
    PAIR,
    InvalidSpecError,
    XopSpec,
    build,
    hermite11_constant,
    type3_constant,
)

MINOR_REL_FLOOR = 1e-12
TYPE2_READING = "grouped"


class ConditioningError(ArithmeticError):
    """The node rows are numerically rank deficient."""


def vandermonde_product(nodes: Sequence[complex]) -> complex:
    """``prod_{i<j} (z_j - z_i)`` in the given order."""
    pts = [complex(z) for z in nodes]
    thr = simplicity_threshold(pts)
    v = 1 + 0j
    for j in range(len(pts)):
        for i in range(j):
            d = pts[j] - pts[i]
            if abs(d) <= thr:
                raise DegenerateNodesError(f"nodes {pts[i]} and {pts[j]} coincide")
            v *= d
    return v


def node_matrix(nodes: Sequence[complex], k: int) -> np.ndarray:
    z = np.asarray([complex(p) for p in nodes], dtype=complex)
    return z[:, None] ** np.arange(k)[None, :]


def _minors(a: np.ndarray) -> np.ndarray:
    """Determinants of ``a`` (shape ``(k-1, k)``) with each column deleted in turn."""
    k = a.shape[1]
    if k == 1:
        return np.ones(1, dtype=complex)
    return np.array([np.linalg.det(np.delete(a, j, axis=1)) for j in range(k)])


def _exact_node_poly(nodes: Sequence[complex]) -> tuple[list[tuple[int, int]], int]:
    """Coefficients of ``prod (x - z)`` over the float nodes, accumulated exactly.

    Every double is a dyadic rational, so with ``D`` a common power-of-two
    denominator the nodes become Gaussian integers ``Z = D z``.  Returns the
    integer coefficients ``C_i`` of ``prod (y - Z)`` as ``(re, im)`` pairs and
    ``D``; the coefficient of ``x**i`` in the original product is
    ``C_i * D**(i - N)``.  The only error left is that of the nodes.
    """
    ratios = [t.as_integer_ratio() for z in nodes for t in (z.real, z.imag)]
    d = max((q for _, q in ratios), default=1)
    ints = [(p * (d // q), r * (d // s)) for (p, q), (r, s) in zip(ratios[::2], ratios[1::2])]
    c = [(1, 0)]
    for zr, zi in ints:
        nxt = [(0, 0)] * (len(c) + 1)
        for i, (cr, ci) in enumerate(c):
            hr, hi = nxt[i + 1]
            nxt[i + 1] = (hr + cr, hi + ci)
            lr, li = nxt[i]
            nxt[i] = (lr - (cr * zr - ci * zi), li - (cr * zi + ci * zr))
        c = nxt
    return c, d


def _gauss_div(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    n = b[0] * b[0] + b[1] * b[1]
    re, im = a[0] * b[0] + a[1] * b[1], a[1] * b[0] - a[0] * b[1]
    assert re % n == 0 and im % n == 0, "inexact Bareiss division"
    return re // n, im // n


def _gauss_mul(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    return a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def _bareiss_gauss(rows: list[list[tuple[int, int]]]) -> tuple[int, int]:
    """Determinant of a Gaussian-integer matrix by fraction-free elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, (1, 0)
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if a[i][k] != (0, 0)), None)
        if piv is None:
            return 0, 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                x = _gauss_mul(a[i][j], a[k][k])
                y = _gauss_mul(a[i][k], a[k][j])
                a[i][j] = _gauss_div((x[0] - y[0], x[1] - y[1]), prev)
        prev = a[k][k]
    d = a[n - 1][n - 1] if n else (1, 0)
    return sign * d[0], sign * d[1]


def exact_minors(nodes: Sequence[complex], columns: Sequence[int] | None = None) -> np.ndarray:
    """Column-deleted minors of the float node rows by exact elimination.

    The dyadic nodes are scaled to Gaussian integers; the minor with column
    ``j`` deleted is rescaled by ``D**-(sum of the kept exponents)``.
    """
    pts = [complex(z) for z in nodes]
    k = len(pts) + 1
    if k == 1:
        return np.ones(1 if columns is None else len(columns), dtype=complex)
    ratios = [t.as_integer_ratio() for z in pts for t in (z.real, z.imag)]
    d = max(q for _, q in ratios)
    ints = [(p * (d // q), r * (d // s)) for (p, q), (r, s) in zip(ratios[::2], ratios[1::2])]
    # entry (i, e) is Z_i**e * d**(k-1-e), uniformly scaled by d**(k-1)
    powers = []
    for z in ints:
        row, acc = [], (1, 0)
        for e in range(k):
            row.append((acc[0] * d ** (k - 1 - e), acc[1] * d ** (k - 1 - e)))
            acc = _gauss_mul(acc, z)
        powers.append(row)
    out = []
    for j in range(k) if columns is None else columns:
        re, im = _bareiss_gauss([[r[e] for e in range(k) if e != j] for r in powers])
        total = Fraction(d) ** ((k - 1) * (k - 1))
        out.append(complex(float(Fraction(re) / total), float(Fraction(im) / total)))
    return np.array(out)


def _node_poly_coeff(c: list[tuple[int, int]], d: int, j: int) -> complex:
    scale = Fraction(d) ** (j - (len(c) - 1))
    return complex(float(c[j][0] * scale), float(c[j][1] * scale))


def symmetric_minors(nodes: Sequence[complex]) -> np.ndarray:
    """Column-deleted minors of the node rows from the node polynomial.

    Deleting column ``j`` from the ``(k-1) x k`` power matrix leaves
    ``V * e_{k-1-j}``; with the cofactor sign this is ``(-1)^(k-1+j) V c_j``
    where ``c_j`` is the coefficient of ``x**j`` in ``prod (x - z)``.
    """
    pts = [complex(z) for z in nodes]
    k = len(pts) + 1
    v = vandermonde_product(pts)
    c, d = _exact_node_poly(pts)
    return np.array([(-1) ** (k - 1 + j) * v * _node_poly_coeff(c, d, j) for j in range(k)])


def last_row_det(nodes: Sequence[complex], last_row: Sequence[Polynomial],
                 guard: bool = True, minors: str = "symmetric") -> Polynomial:
    """Determinant of the node rows stacked on a polynomial last row.

    Cofactor expansion along the last row.  With ``minors="lu"`` the minors
    are numeric determinants (LU with partial pivoting) and the expansion is
    summed in floating point; ``"exact"`` computes each minor of the float
    nodes by fraction-free elimination.  The default ``"symmetric"`` uses the
    Vandermonde structure of the minors and sums the expansion exactly over
    the float nodes, which avoids the cancellation that ruins the LU route
    beyond degree ten.  With ``guard`` the call refuses coincident nodes and,
    on the LU route, numerically rank deficient node rows.
    """
    pts = [complex(z) for z in nodes]
    k = len(last_row)
    if len(pts) != k - 1:
        raise ValueError(f"need {k - 1} nodes for a last row of length {k}, got {len(pts)}")
    if guard and len(pts) > 1:
        NodeSet(tuple(pts)).require_simple()
    if minors == "symmetric":
        return _symmetric_det(pts, last_row)
    if minors == "exact":
        ms = exact_minors(pts)
    elif minors == "lu":
        ms = _minors(node_matrix(pts, k))
    else:
        raise ValueError(f"unknown minors method {minors!r}")
    if guard and minors == "lu" and k > 1:
        a = node_matrix(pts, k)
        row_norms = np.linalg.norm(a, axis=1)
        # scale-free rank test on the row-normalised node matrix
        s = np.linalg.svd(a / row_norms[:, None], compute_uv=False)
        if s[-1] < MINOR_REL_FLOOR * s[0]:
            raise ConditioningError(f"node rows are numerically singular (sigma_min/sigma_max = {s[-1] / s[0]:.2e})")
    out = Polynomial.zero(FLOAT)
    for j, (entry, mj) in enumerate(zip(last_row, ms)):
        sign = -1 if (k + 1 + j) % 2 else 1
        out = out + entry.to_float() * complex(sign * mj)
    return out


def _symmetric_det(pts: list[complex], last_row: Sequence[Polynomial]) -> Polynomial:
    c, d = _exact_node_poly(pts)
    n = len(pts)
    if not all(entry.exact for entry in last_row):
        raise ValueError("the exact expansion needs rational last-row entries")
    den = math.lcm(1, *(q.denominator for entry in last_row for q in entry.coeffs))
    width = max((len(entry.coeffs) for entry in last_row), default=0) or 1
    re, im = [0] * width, [0] * width
    # sum_j row_j * C_j * d**j, everything scaled by den * d**n
    for j, ((cr, ci), entry) in enumerate(zip(c, last_row)):
        w = d ** j
        for i, q in enumerate(entry.coeffs):
            r = q.numerator * (den // q.denominator) * w
            re[i] += r * cr
            im[i] += r * ci
    total = den * d ** n
    v = vandermonde_product(pts)
    return Polynomial([v * complex(Fraction(a, total), Fraction(b, total)) for a, b in zip(re, im)], FLOAT)


@dataclass(frozen=True)
class DetAssembly:
    """Everything needed to evaluate one determinantal formula.

    ``scale`` is the prefactor without the Vandermonde product, which is
    recomputed from the same node order the determinant uses.
    """

    formula: str
    nodes: NodeSet
    last_row: tuple[Polynomial, ...]
    scale: complex
    additive_constant: complex = 0j
    times_x: bool = False

    @property
    def size(self) -> int:
        return len(self.last_row)

    def ordered(self, order: Sequence[int] | None = None) -> list[complex]:
        pts = list(self.nodes.points)
        if order is None:
            return pts
        if sorted(order) != list(range(len(pts))):
            raise ValueError("order is not a permutation of the nodes")
        return [pts[i] for i in order]

    def prefactor(self, order: Sequence[int] | None = None) -> complex:
        return self.scale / vandermonde_product(self.ordered(order))

    def determinant(self, order: Sequence[int] | None = None, minors: str = "symmetric") -> Polynomial:
        return last_row_det(self.ordered(order), self.last_row, minors=minors)

    def evaluate(self, order: Sequence[int] | None = None, minors: str = "symmetric") -> Polynomial:
        det = self.determinant(order, minors)
        out = det * self.prefactor(order)
        if self.times_x:
            out = out * Polynomial([0, 1], FLOAT)
        return out + self.additive_constant

    def last_row_lead(self) -> complex:
        return complex(self.last_row[-1].lead())


# ---------------------------------------------------------------------------
# node sets


def _laguerre_nodes(n: int, a: Fraction) -> NodeSet:
    if n <= 0:
        return NodeSet((), f"L_{n}^({a})")
    if a > -1:
        return classical_zeros("laguerre", n, a)
    return zeros(laguerre(n, a), source=f"L_{n}^({a})")


def _jacobi_nodes(n: int, a: Fraction, b: Fraction) -> NodeSet:
    if n <= 0:
        return NodeSet((), f"P_{n}^({a},{b})")
    if a > -1 and b > -1:
        return classical_zeros("jacobi", n, a, b)
    return zeros(jacobi(n, a, b), source=f"P_{n}^({a},{b})")


def _hermite_nodes(n: int) -> NodeSet:
    if n <= 0:
        return NodeSet((), f"H_{n}")
    return classical_zeros("hermite", n)


def _monomial_row(count: int, shift) -> tuple[Polynomial, ...]:
    """``[x**k / (k + shift)]`` for ``k = 0..count-1``."""
    shift = Fraction(shift)
    return tuple(Polynomial.monomial(k, 1 / (k + shift)) for k in range(count))


# ---------------------------------------------------------------------------
# constants


def type2_constant_readings(m: int, n: int, alpha) -> dict[str, Fraction | None]:
    """Candidate readings of the type II normalising constant (without the Vandermonde).

    ``literal`` takes the printed numerator ``(-1)^(n+1) - (m-alpha-1)/(n-m)``
    at face value; ``grouped`` reads it as ``(-1)^(n+1) (1 - (m-alpha-1)/(n-m))``,
    which simplifies to ``(-1)^(n+1) (alpha+n+1-2m) / (m! (n-m)!)`` and stays
    defined at ``n = m``.
    """
    alpha = Fraction(alpha)
    sign = (-1) ** (n + 1)
    out: dict[str, Fraction | None] = {}
    if n > m:
        den = math.factorial(m) * math.factorial(n - m - 1)
        out["literal"] = (sign - (m - alpha - 1) / (n - m)) / den
    else:
        out["literal"] = None
    out["grouped"] = sign * (alpha + n + 1 - 2 * m) / (math.factorial(m) * math.factorial(n - m))
    return out


def jacobi_det_scale(m: int, n: int, alpha, beta) -> Fraction:
    """Prefactor of the Jacobi formula without the Vandermonde product.

    Gamma ratios become rising factorials because their arguments differ by
    integers.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    d = alpha + 1
    num = ((-1) ** m * Fraction(1, 2 ** n) * math.comb(n, m) * (n + d - 2 * m)
           * pochhammer(beta - d + m, m) * pochhammer(d + beta + n - m, n - m) * (n + beta))
    return num / (math.factorial(n) * (d + n - m))


# ---------------------------------------------------------------------------
# assemblies


def assemble(spec: XopSpec) -> DetAssembly:
    """Build the determinantal description of ``spec``."""
    spec.validate()
    f, m, n, a, b = spec.family, spec.m, spec.n, spec.alpha, spec.beta
    if f == LAG1:
        nodes = _laguerre_nodes(m, a - 1).negated().union(_laguerre_nodes(n - m, a - 1))
        scale = Fraction((-1) ** (n - m)) * (a + n) / (math.factorial(m) * math.factorial(n - m))
        return DetAssembly("type-I Laguerre", nodes, _monomial_row(n + 1, a), complex(scale))
    if f == LAG2:
        nodes = _laguerre_nodes(m, -a - 1).union(_laguerre_nodes(n - m, a + 1))
        row = tuple(exp_partial_sum(k) * math.factorial(k) for k in range(n + 1))
        scale = type2_constant_readings(m, n, a)[TYPE2_READING]
        return DetAssembly("type-II Laguerre", nodes, row, complex(scale))
    if f == LAG3:
        if n == 0:
            raise InvalidSpecError("the type III determinantal formula needs n > m")
        nodes = _laguerre_nodes(m, -a - 1).negated().union(_laguerre_nodes(n - m - 1, a + 1))
        scale = Fraction((-1) ** (n - m - 1) * n, math.factorial(m) * math.factorial(n - m - 1))
        return DetAssembly("type-III Laguerre", nodes, _monomial_row(n, 1), complex(scale),
                           complex(type3_constant(m, n, a)), times_x=True)
    if f == JACOBI:
        nodes = _jacobi_nodes(m, -a - 1, b - 1).union(_jacobi_nodes(n - m, a + 1, b - 1))
        row = tuple(
            r_partial_sum(k, b) * (Fraction((-1) ** k * math.factorial(k)) / pochhammer(b, k + 1))
            for k in range(n + 1)
        )
        return DetAssembly("Jacobi", nodes, row, complex(jacobi_det_scale(m, n, a, b)))
    if f == HERMITE11 or (f == HERMITE and spec.partition == PAIR):
        if n < 3:
            raise InvalidSpecError("the (1,1) Hermite determinantal formula needs n >= 3")
        pair = zeros(generalized_hermite(PAIR), source="H_(1,1)")
        nodes = pair.union(_hermite_nodes(n - 3))
        scale = 2 ** (n + 3) * n * (n - 1) * (n - 2)
        return DetAssembly("(1,1) Hermite", nodes, _monomial_row(n, 1), complex(scale),
                           complex(hermite11_constant(n)), times_x=True)
    raise InvalidSpecError(f"no determinantal formula for {spec}")


def det_xop(spec: XopSpec, minors: str = "symmetric") -> Polynomial:
    """Exceptional polynomial from its determinantal formula (complex float coefficients)."""
    return assemble(spec).evaluate(minors=minors)


# ---------------------------------------------------------------------------
# comparisons and structural checks


def coeff_rel_error(approx: Polynomial, exact: Polynomial) -> float:
    """Largest coefficient error, each measured relative to that coefficient.

    Coefficients that vanish exactly are measured against the largest
    coefficient of ``exact`` instead.
    """
    scale = max((abs(complex(c)) for c in exact.coeffs), default=1.0) or 1.0
    worst = 0.0
    for k in range(max(len(approx), len(exact))):
        e = complex(exact.coeff(k))
        d = abs(complex(approx.coeff(k)) - e)
        worst = max(worst, d / (abs(e) if e != 0 else scale))
    return worst


def max_imag_ratio(p: Polynomial) -> float:
    scale = max((abs(c) for c in p.coeffs), default=1.0) or 1.0
    return max((abs(c.imag) for c in p.coeffs), default=0.0) / scale


def leading_law(spec: XopSpec) -> tuple[complex, complex]:
    """``(lead of det, Vandermonde * lead of the last-row corner entry)``.

    The determinant's top coefficient is the corner entry's leading
    coefficient times the minor of the last column, which is computed here by
    elimination on the node rows, so the product formula is checked rather
    than assumed.
    """
    asm = assemble(spec)
    pts = asm.nodes.points
    minor = exact_minors(pts, columns=[len(pts)])[0]
    return minor * asm.last_row_lead(), vandermonde_product(pts) * asm.last_row_lead()


def empirical_type2_scale(spec: XopSpec) -> complex:
    """Normalising constant for type II fitted by matching leading coefficients
    of the determinant against the exact product formula."""
    det_lead, _ = leading_law(spec)
    exact = build(spec, "product")
    nodes = assemble(spec).nodes.points
    return complex(exact.lead()) * vandermonde_product(nodes) / det_lead


def resolve_type2_constant(specs: Sequence[XopSpec], tol: float = 1e-9) -> dict:
    """Which printed reading of the type II constant fits every case.

    The two readings coincide for odd ``n``; the literal one is undefined at
    ``n = m``.  A reading fits when it is defined everywhere and its worst
    relative error is within ``tol``.  Errors are taken over the cases where
    a reading is defined, and the undefined cases are counted separately.
    """
    worst: dict[str, float] = {"literal": 0.0, "grouped": 0.0}
    undefined = {"literal": 0, "grouped": 0}
    for spec in specs:
        emp = empirical_type2_scale(spec)
        for name, val in type2_constant_readings(spec.m, spec.n, spec.alpha).items():
            if val is None:
                undefined[name] += 1
                continue
            worst[name] = max(worst[name], abs(emp - complex(val)) / abs(emp))
    fits = [k for k in worst if undefined[k] == 0 and worst[k] <= tol]
    return {"reading": fits[0] if len(fits) == 1 else (fits or None),
            "max_rel_error": worst, "undefined_cases": undefined, "cases": len(specs),
            "expression": "(-1)^(n+1) (alpha+n+1-2m) / (m! (n-m)!)" if fits == ["grouped"] else None}


def _operator(spec: XopSpec) -> Callable[[int, complex], complex]:
    """Action of the family's first-order operator on ``x**k`` at ``z``."""
    a, b = spec.alpha, spec.beta
    f = spec.family
    if f == LAG1:
        return lambda k, z: (k + float(a)) * z ** k
    if f == LAG2:
        return lambda k, z: (k * z ** (k - 1) if k else 0) - z ** k
    if f == JACOBI:
        return lambda k, z: (k * z ** (k - 1) if k else 0) + (k + float(b)) * z ** k
    return lambda k, z: k * z ** (k - 1)


def kernel_singularity(spec: XopSpec) -> float:
    """Relative smallest singular value of the operator-row matrix at a zero of the target.

    The node rows apply the family's first-order operator to the monomials at
    each node; with last row ``[1, x, ..., x**d]`` the matrix annihilates the
    coefficient vector exactly when ``x`` is a zero of the target (for the
    families with an additive constant: of ``(y - y(0)) / x``).  Returns
    ``sigma_min / sigma_max`` at the zero of largest modulus.
    """
    asm = assemble(spec)
    target = build(spec)
    if asm.times_x:
        target = Polynomial(target.coeffs[1:])
        powers = range(1, spec.n + 1)
    else:
        powers = range(0, spec.n + 1)
    op = _operator(spec)
    rows = [[op(k, z) for k in powers] for z in asm.nodes.points]
    root = max(zeros(target).points, key=abs)
    rows.append([root ** j for j in range(len(powers))])
    s = np.linalg.svd(np.array(rows, dtype=complex), compute_uv=False)
    return float(s[-1] / s[0])


def permutation_invariance(spec: XopSpec, perm: Sequence[int] | None = None,
                           tol: float = 1e-10) -> bool:
    """Re-evaluate with permuted nodes (and Vandermonde in the same order)."""
    asm = assemble(spec)
    base = asm.evaluate()
    other = asm.evaluate(perm)
    return coeff_rel_error(other, base) <= tol


def random_permutations(k: int, count: int, rng: np.random.Generator) -> list[list[int]]:
    return [list(rng.permutation(k)) for _ in range(count)]


def supported(spec: XopSpec) -> bool:
    if spec.family == LAG3:
        return spec.n > spec.m
    if spec.family == HERMITE:
        return spec.partition == PAIR and spec.n >= 3
    return spec.family in (LAG1, LAG2, JACOBI, HERMITE11)

