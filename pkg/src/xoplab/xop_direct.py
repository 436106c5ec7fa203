"""Exceptional Laguerre, Jacobi and Hermite polynomials in exact arithmetic.

Each family can be built two or three ways: from the product (or Wronskian)
formula, and from closed-form integral representations evaluated by exact
antiderivative manipulation.  The integrals are never done numerically:

* weighted integrals ``x**-a * int_0^x t**(a-1) q(t) dt`` map ``t**k`` to
  ``x**k / (k + a)``;
* ``e**x * int_x^oo e**-t q(t) dt`` equals the sum of all derivatives of ``q``;
* ``(x+1)**-b * int_{-1}^x (t+1)**(b-1) q(t) dt`` maps ``(t+1)**k`` to
  ``(x+1)**k / (k + b)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .classical import (
    Partition,
    gen_binomial,
    generalized_hermite,
    hermite,
    jacobi,
    laguerre,
)
from .poly import Polynomial, from_shifted, shift_basis, wronskian

LAG1 = "lag1"
LAG2 = "lag2"
LAG3 = "lag3"
JACOBI = "jacobi"
HERMITE11 = "hermite11"
HERMITE = "hermite"
FAMILIES = (LAG1, LAG2, LAG3, JACOBI, HERMITE11, HERMITE)

X = Polynomial([0, 1])
ONE = Polynomial([1])
PAIR = Partition((1, 1))


class InvalidSpecError(ValueError):
    """Parameters violate a family's constraints."""


@dataclass(frozen=True)
class XopSpec:
    """One exceptional polynomial: family tag plus parameters."""

    family: str
    n: int
    m: int = 1
    alpha: Optional[Fraction] = None
    beta: Optional[Fraction] = None
    partition: Optional[Partition] = field(default=None)

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if v is not None and not isinstance(v, Fraction):
                object.__setattr__(self, name, Fraction(v))
        if self.family == HERMITE11:
            object.__setattr__(self, "partition", PAIR)
            object.__setattr__(self, "m", 2)
        elif self.partition is not None and not isinstance(self.partition, Partition):
            object.__setattr__(self, "partition", Partition(tuple(self.partition)))

    def __str__(self) -> str:
        if self.family in (HERMITE11, HERMITE):
            return f"{self.family}(lambda=({self.partition}), n={self.n})"
        s = f"{self.family}(m={self.m}, n={self.n}, alpha={self.alpha}"
        if self.family == JACOBI:
            s += f", beta={self.beta}"
        return s + ")"

    @property
    def delta(self) -> Fraction:
        return self.alpha + 1

    def violations(self) -> list[str]:
        """Human readable list of violated constraints (empty when valid)."""
        f, m, n, a, b = self.family, self.m, self.n, self.alpha, self.beta
        out = []
        if f not in FAMILIES:
            return [f"unknown family {f!r}"]
        if f in (LAG1, LAG2, LAG3, JACOBI):
            if m < 1:
                out.append("m must be a positive integer")
            if a is None:
                out.append("alpha is required")
                return out
        if f == LAG1:
            if not a > 0:
                out.append("type I requires alpha > 0")
            if n < m:
                out.append("type I requires n >= m")
        elif f == LAG2:
            if not a > m - 1:
                out.append("type II requires alpha > m - 1")
            if n < m:
                out.append("type II requires n >= m")
        elif f == LAG3:
            if not -1 < a < 0:
                out.append("type III requires -1 < alpha < 0")
            if not (n == 0 or n >= m + 1):
                out.append("type III requires n = 0 or n >= m + 1")
        elif f == JACOBI:
            if b is None:
                out.append("beta is required")
                return out
            if not b > 0:
                out.append("Jacobi requires beta > 0")
            if not a + 1 - m > 0:
                out.append("Jacobi requires alpha + 1 - m > 0")
            d = a + 1 - m - b
            if d.denominator == 1 and 0 <= d <= m - 1:
                out.append("Jacobi requires alpha + 1 - m - beta not in {0, ..., m-1}")
            if n < m:
                out.append("Jacobi requires n >= m")
        elif f == HERMITE11:
            if n < 3:
                out.append("hermite11 requires n >= 3")
        elif f == HERMITE:
            if self.partition is None:
                out.append("partition is required")
            elif not self.partition.admissible(n):
                out.append(f"n={n} is not an admissible degree for partition ({self.partition})")
        if n < 0:
            out.append("n must be non-negative")
        return out

    def validate(self) -> "XopSpec":
        v = self.violations()
        if v:
            raise InvalidSpecError(f"{self}: " + "; ".join(v))
        return self

    def is_valid(self) -> bool:
        return not self.violations()


# ---------------------------------------------------------------------------
# Laguerre


def _lag_product(spec: XopSpec) -> Polynomial:
    m, n, a = spec.m, spec.n, spec.alpha
    if spec.family == LAG1:
        return (laguerre(m, a).reflect() * laguerre(n - m, a - 1)
                + laguerre(m, a - 1).reflect() * laguerre(n - m - 1, a))
    if spec.family == LAG2:
        return (X * laguerre(m, -a - 1) * laguerre(n - m - 1, a + 2)
                + laguerre(m, -a - 2) * laguerre(n - m, a + 1) * (m - a - 1))
    if n == 0:
        return ONE
    return (X * laguerre(n - m - 2, a + 2) * laguerre(m, -a - 1).reflect()
            + laguerre(m + 1, -a - 2).reflect() * laguerre(n - m - 1, a + 1) * (m + 1))


def type3_constant(m: int, n: int, alpha) -> Fraction:
    """Value at 0 of the type III polynomial, ``n > m``."""
    alpha = Fraction(alpha)
    return (m + 1) * gen_binomial(n - m + alpha, n - m - 1) * gen_binomial(m - alpha - 1, m + 1)


def _lag_integral(spec: XopSpec) -> Polynomial:
    m, n, a = spec.m, spec.n, spec.alpha
    if spec.family == LAG1:
        q = laguerre(m, a - 1).reflect() * laguerre(n - m, a - 1)
        return Polynomial([c / (k + a) for k, c in enumerate(q.coeffs)]) * (a + n)
    if spec.family == LAG2:
        q = laguerre(m, -a - 1) * laguerre(n - m, a + 1)
        total = Polynomial.zero()
        while not q.is_zero():
            total = total + q
            q = q.derivative()
        return total * (-(a + n + 1 - 2 * m))
    if n == 0:
        return ONE
    q = laguerre(n - m - 1, a + 1) * laguerre(m, -a - 1).reflect()
    return q.antiderivative() * n + type3_constant(m, n, a)


def xlaguerre(spec: XopSpec, method: str = "product") -> Polynomial:
    """Exceptional Laguerre polynomial of type I, II or III.

    ``method`` is ``"product"`` or ``"integral"``.
    """
    if spec.family not in (LAG1, LAG2, LAG3):
        raise InvalidSpecError(f"{spec.family} is not a Laguerre family")
    spec.validate()
    if method == "product":
        return _lag_product(spec)
    if method == "integral":
        return _lag_integral(spec)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Jacobi


def jacobi_ode_constant(m: int, n: int, alpha, beta) -> Fraction:
    alpha, beta = Fraction(alpha), Fraction(beta)
    return (-1) ** m * (beta + n) * (alpha + n - 2 * m + 1) / (alpha + n - m + 1)


def _jac_product(spec: XopSpec) -> Polynomial:
    m, n, a, b = spec.m, spec.n, spec.alpha, spec.beta
    first = (Polynomial([-1, 1]) * jacobi(m, -a - 1, b - 1) * jacobi(n - m - 1, a + 2, b)
             * ((1 + a + b + n - m) / 2))
    second = jacobi(m, -a - 2, b) * jacobi(n - m, a + 1, b - 1) * (a + 1 - m)
    return (first + second) * (Fraction((-1) ** m) / (a + 1 + n - m))


def _jac_integral(spec: XopSpec) -> Polynomial:
    m, n, a, b = spec.m, spec.n, spec.alpha, spec.beta
    q = jacobi(m, -a - 1, b - 1) * jacobi(n - m, a + 1, b - 1)
    e = shift_basis(q, -1)
    e = [c / (k + b) for k, c in enumerate(e)]
    return from_shifted(e, -1) * jacobi_ode_constant(m, n, a, b)


def xjacobi(spec: XopSpec, method: str = "product") -> Polynomial:
    """Exceptional Jacobi polynomial via the product formula or the weighted integral."""
    if spec.family != JACOBI:
        raise InvalidSpecError(f"{spec.family} is not the Jacobi family")
    spec.validate()
    if method == "product":
        return _jac_product(spec)
    if method == "integral":
        return _jac_integral(spec)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Hermite


def xhermite_wronskian(lam: Partition, n: int) -> Polynomial:
    XopSpec(HERMITE, n, partition=lam).validate()
    polys = [hermite(k) for k in lam.hermite_indices()] + [hermite(n - lam.weight + lam.length)]
    return wronskian(polys)


def hermite11_constant(n: int) -> Fraction:
    return 16 * (n - 1) * (n - 2) * hermite(n - 2)(0)


def xhermite(spec: XopSpec, method: str = "wronskian") -> Polynomial:
    """Exceptional Hermite polynomial.

    ``wronskian`` works for any partition with an admissible degree;
    ``closed_form`` and ``integral`` are specific to the partition (1, 1).
    """
    if spec.family not in (HERMITE11, HERMITE):
        raise InvalidSpecError(f"{spec.family} is not a Hermite family")
    spec.validate()
    n = spec.n
    if method == "wronskian":
        return xhermite_wronskian(spec.partition, n)
    if spec.family != HERMITE11 and spec.partition != PAIR:
        raise InvalidSpecError(f"method {method!r} only exists for the partition (1,1)")
    if n < 3:
        raise InvalidSpecError("closed_form/integral need n >= 3")
    if method == "closed_form":
        inner = (X * hermite(n - 1) * -2
                 + (Polynomial([1, 0, 2]) * n - 2) * hermite(n - 2))
        return inner * (16 * (n - 1))
    if method == "integral":
        q = generalized_hermite(PAIR) * hermite(n - 3)
        return q.antiderivative() * (8 * n * (n - 1) * (n - 2)) + hermite11_constant(n)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# first-order relations


@dataclass(frozen=True)
class OdeRelation:
    tag: str
    residual: Polynomial
    witness: Polynomial

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()


class OdeResidualError(ArithmeticError):
    pass


def ode_residual(spec: XopSpec, strict: bool = False) -> OdeRelation:
    """Exact residual of the first-order relation satisfied by ``spec``.

    For the Hermite families the relation is the divisibility of
    ``2 H' (x y - y') + H'' y`` by ``H = H_lambda``; the quotient is returned
    as the witness and the remainder as the residual.  With ``strict`` a
    nonzero residual raises :class:`OdeResidualError`.
    """
    spec.validate()
    m, n, a, b = spec.m, spec.n, spec.alpha, spec.beta
    if spec.family == LAG1:
        y = xlaguerre(spec)
        w = laguerre(n - m, a - 1) * (a + n)
        rel = OdeRelation("Type1", X * y.derivative() + y * a - w * laguerre(m, a - 1).reflect(), w)
    elif spec.family == LAG2:
        y = xlaguerre(spec)
        w = laguerre(m, -a - 1) * laguerre(n - m, a + 1) * (a + n + 1 - 2 * m)
        rel = OdeRelation("Type2", y.derivative() - y - w, w)
    elif spec.family == LAG3:
        y = xlaguerre(spec)
        w = laguerre(n - m - 1, a + 1) * laguerre(m, -a - 1).reflect() * n if n else Polynomial.zero()
        rel = OdeRelation("Type3", y.derivative() - w, w)
    elif spec.family == JACOBI:
        y = xjacobi(spec)
        w = jacobi(n - m, a + 1, b - 1) * jacobi(m, -a - 1, b - 1) * jacobi_ode_constant(m, n, a, b)
        rel = OdeRelation("JacobiRel", Polynomial([1, 1]) * y.derivative() + y * b - w, w)
    else:
        y = xhermite(spec, "wronskian")
        h = generalized_hermite(spec.partition)
        expr = h.derivative() * (X * y - y.derivative()) * 2 + h.derivative(2) * y
        q, r = expr.divmod(h)
        rel = OdeRelation("HermiteQ", r, q)
    if strict and not rel.ok:
        raise OdeResidualError(f"{spec}: nonzero residual {rel.residual}")
    return rel


def type1_derivative_residual(spec: XopSpec) -> Polynomial:
    """Residual of the closed form for the derivative of a type I polynomial."""
    m, n, a = spec.m, spec.n, spec.alpha
    y = xlaguerre(spec)
    rhs = (-(laguerre(m, a - 1).reflect() * laguerre(n - m - 1, a + 1))
           + laguerre(m - 1, a + 1).reflect() * laguerre(n - m, a - 1))
    return y.derivative() - rhs


def hermite11_derivative_residual(n: int) -> Polynomial:
    y = xhermite(XopSpec(HERMITE11, n), "closed_form")
    rhs = generalized_hermite(PAIR) * hermite(n - 3) * (8 * n * (n - 1) * (n - 2))
    return y.derivative() - rhs


def methods_for(family: str) -> tuple[str, ...]:
    if family in (LAG1, LAG2, LAG3, JACOBI):
        return ("product", "integral")
    if family == HERMITE11:
        return ("wronskian", "closed_form", "integral")
    return ("wronskian",)


def build(spec: XopSpec, method: str | None = None) -> Polynomial:
    """Dispatch to the constructor for ``spec.family``; default method first."""
    spec.validate()
    method = method or methods_for(spec.family)[0]
    if spec.family in (LAG1, LAG2, LAG3):
        return xlaguerre(spec, method)
    if spec.family == JACOBI:
        return xjacobi(spec, method)
    return xhermite(spec, method)
