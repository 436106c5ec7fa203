"""Classical Laguerre, Jacobi and Hermite polynomials with exact coefficients.

All constructors take concrete rational parameters and return exact
:class:`~xoplab.poly.Polynomial` objects.  Negative degrees yield the zero
polynomial, which is what the product formulas for the exceptional families
need when their lowest member is formed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .poly import Polynomial, wronskian
from .report import Case, VerificationReport

Q = Fraction


def _q(a) -> Fraction:
    return a if isinstance(a, Fraction) else Fraction(a)


def pochhammer(a, n: int) -> Fraction:
    """Rising factorial ``a (a+1) ... (a+n-1)``; equals 1 when ``n == 0``."""
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    a = _q(a)
    out = Fraction(1)
    for j in range(n):
        out *= a + j
    return out


def falling(a, k: int) -> Fraction:
    a = _q(a)
    out = Fraction(1)
    for j in range(k):
        out *= a - j
    return out


@dataclass(frozen=True)
class GenBinomialArgs:
    a: Fraction
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("binomial lower index must be non-negative")


def gen_binomial(a, k: int | None = None) -> Fraction:
    """Binomial coefficient with rational upper argument, ``a(a-1)...(a-k+1)/k!``.

    Accepts either ``gen_binomial(a, k)`` or a :class:`GenBinomialArgs`.
    """
    if isinstance(a, GenBinomialArgs):
        a, k = a.a, a.k
    if k is None or k < 0:
        raise ValueError("binomial lower index must be non-negative")
    return falling(a, k) / math.factorial(k)


@dataclass(frozen=True)
class Partition:
    """Non-increasing tuple of positive integers."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise ValueError("empty partition")
        if parts[-1] < 1:
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition must be non-increasing: {parts}")

    @classmethod
    def parse(cls, text: str) -> "Partition":
        return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def is_even(self) -> bool:
        p = self.parts
        return len(p) % 2 == 0 and all(p[2 * j] == p[2 * j + 1] for j in range(len(p) // 2))

    def hermite_indices(self) -> list[int]:
        """Indices of the Hermite polynomials in the defining Wronskian, in order."""
        m = self.length
        return [self.parts[m - 1 - j] + j for j in range(m)]

    def admissible(self, n: int) -> bool:
        """Membership of ``n`` in the set of degrees the exceptional family attains."""
        w, m = self.weight, self.length
        if n < w - m:
            return False
        return all(n != w + lam - j for j, lam in enumerate(self.parts, start=1))

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))


def even_partitions(max_weight: int) -> list[Partition]:
    """All even partitions with weight at most ``max_weight``."""
    out = []

    def pairs(remaining: int, cap: int, acc: list[int]):
        if acc:
            out.append(Partition(tuple(p for v in acc for p in (v, v))))
        for v in range(min(cap, remaining // 2), 0, -1):
            pairs(remaining - 2 * v, v, acc + [v])

    pairs(max_weight, max_weight, [])
    return sorted(out, key=lambda p: (p.weight, p.parts))


@lru_cache(maxsize=None)
def laguerre(n: int, alpha) -> Polynomial:
    """Laguerre polynomial from its explicit sum; defined for every rational ``alpha``."""
    alpha = _q(alpha)
    if n < 0:
        return Polynomial.zero()
    return Polynomial(
        [Q((-1) ** k, math.factorial(k)) * gen_binomial(n + alpha, n - k) for k in range(n + 1)]
    )


@lru_cache(maxsize=None)
def jacobi(n: int, alpha, beta) -> Polynomial:
    """Jacobi polynomial in the ``(x-1)/2`` expansion.

    The gamma ratios are rewritten as rising factorials,
    ``Gamma(a+n+1)/Gamma(a+k+1) = (a+k+1)_(n-k)`` and
    ``Gamma(a+b+n+k+1)/Gamma(a+b+n+1) = (a+b+n+1)_k``, so any rational
    parameters are accepted.  The degree can drop below ``n`` when
    ``a+b+n`` lies in ``{-1, ..., -n}``.
    """
    alpha, beta = _q(alpha), _q(beta)
    if n < 0:
        return Polynomial.zero()
    half = Polynomial([Q(-1, 2), Q(1, 2)])
    coeffs = [
        Q(math.comb(n, k), math.factorial(n))
        * pochhammer(alpha + k + 1, n - k)
        * pochhammer(alpha + beta + n + 1, k)
        for k in range(n + 1)
    ]
    return Polynomial(coeffs).compose(half)


def jacobi_degree_drops(n: int, alpha, beta) -> bool:
    s = _q(alpha) + _q(beta) + n
    return s.denominator == 1 and -n <= s <= -1


@lru_cache(maxsize=None)
def hermite(n: int) -> Polynomial:
    """Physicists' Hermite polynomial via ``H_n = 2x H_{n-1} - H_{n-1}'``."""
    if n < 0:
        return Polynomial.zero()
    h = Polynomial([1])
    two_x = Polynomial([0, 2])
    for _ in range(n):
        h = two_x * h - h.derivative()
    return h


@lru_cache(maxsize=None)
def _generalized_hermite(parts: tuple[int, ...]) -> Polynomial:
    return wronskian([hermite(k) for k in Partition(parts).hermite_indices()])


def generalized_hermite(lam: Partition | Sequence[int]) -> Polynomial:
    """Wronskian of the Hermite polynomials indexed by a partition."""
    if not isinstance(lam, Partition):
        lam = Partition(tuple(lam))
    return _generalized_hermite(lam.parts)


@lru_cache(maxsize=None)
def exp_partial_sum(n: int) -> Polynomial:
    """Taylor partial sum of ``exp(x)`` up to degree ``n``."""
    return Polynomial([Q(1, math.factorial(j)) for j in range(n + 1)])


@lru_cache(maxsize=None)
def r_partial_sum(n: int, beta) -> Polynomial:
    """Taylor partial sum of ``(1+x)**(-beta)`` up to degree ``n``."""
    beta = _q(beta)
    return Polynomial(
        [pochhammer(beta, j) * (-1) ** j / math.factorial(j) for j in range(n + 1)]
    )


# ---------------------------------------------------------------------------
# identity checks

DEFAULT_ALPHAS = (Q(1, 2), Q(1), Q(3, 2), Q(2), Q(7, 3))
DEFAULT_BETAS = (Q(1, 2), Q(1), Q(5, 2))

X = Polynomial([0, 1])


def _laguerre_identities(n: int, a: Fraction) -> Iterable[tuple[str, Polynomial]]:
    yield "laguerre_derivative", laguerre(n, a).derivative() + laguerre(n - 1, a + 1)
    yield "laguerre_alpha_step", laguerre(n, a) - (laguerre(n, a + 1) - laguerre(n - 1, a + 1))
    yield (
        "laguerre_x_multiple",
        X * laguerre(n, a + 1) - (laguerre(n, a) * (n + a + 1) - laguerre(n + 1, a) * (n + 1)),
    )
    y = laguerre(n, a)
    yield (
        "laguerre_ode",
        X * y.derivative(2) + Polynomial([a + 1, -1]) * y.derivative() + y * n,
    )
    yield "laguerre_at_zero", Polynomial.constant(y(0) - gen_binomial(a + n, n))
    yield "laguerre_leading", Polynomial.constant(y.lead() - Q((-1) ** n, math.factorial(n)))


def _hermite_identities(n: int) -> Iterable[tuple[str, Polynomial]]:
    x2 = Polynomial([0, 0, 1])
    k = n // 2
    if n % 2 == 0:
        rhs = laguerre(k, Q(-1, 2)).compose(x2) * ((-4) ** k * math.factorial(k))
        yield "hermite_even_from_laguerre", hermite(n) - rhs
    else:
        rhs = X * laguerre(k, Q(1, 2)).compose(x2) * (2 * (-4) ** k * math.factorial(k))
        yield "hermite_odd_from_laguerre", hermite(n) - rhs
    if n >= 1:
        yield "hermite_derivative", hermite(n).derivative() - hermite(n - 1) * (2 * n)
        yield (
            "hermite_recurrence",
            hermite(n) - (Polynomial([0, 2]) * hermite(n - 1) - hermite(n - 1).derivative()),
        )


def _partial_sum_identities(n: int, b: Fraction | None) -> Iterable[tuple[str, Polynomial]]:
    if b is None:
        yield "exp_sum_from_laguerre", exp_partial_sum(n) - laguerre(n, -n - 1) * (-1) ** n
    else:
        lhs = jacobi(n, -n - 1, b).compose(Polynomial([1, 2])) * (-1) ** n
        yield "r_sum_from_jacobi", r_partial_sum(n, b) - lhs


def check_classical_identities(
    n_max: int = 10,
    alphas: Sequence = DEFAULT_ALPHAS,
    betas: Sequence = DEFAULT_BETAS,
) -> VerificationReport:
    """Exact residual check of the classical identities over a parameter grid."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    report = VerificationReport("classical-identities")
    for a in map(_q, alphas):
        for n in range(n_max + 1):
            for name, res in _laguerre_identities(n, a):
                report.add(Case.exact(f"laguerre n={n} alpha={a}", name, res))
    for n in range(n_max + 1):
        for name, res in _hermite_identities(n):
            report.add(Case.exact(f"hermite n={n}", name, res))
        for name, res in _partial_sum_identities(n, None):
            report.add(Case.exact(f"E n={n}", name, res))
        for b in map(_q, betas):
            for name, res in _partial_sum_identities(n, b):
                report.add(Case.exact(f"R n={n} beta={b}", name, res))
    return report
