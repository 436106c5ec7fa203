"""Dense univariate polynomials over exact rationals or complex doubles.

Coefficients are stored lowest degree first.  A polynomial lives in exactly
one scalar domain: ``exact`` (every coefficient a :class:`fractions.Fraction`)
or ``float`` (every coefficient a Python ``complex``).  Exact values promote
to float, never the reverse, and arithmetic between the two domains raises
:class:`DomainError` so that accidental loss of exactness is caught early.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Scalar = Union[Fraction, complex]

EXACT = "exact"
FLOAT = "float"


class DomainError(TypeError):
    """Operands belong to different scalar domains."""


class NonFiniteError(ArithmeticError):
    """A float operation produced NaN or infinity."""


def as_scalar(value) -> Scalar:
    """Coerce ``value`` to a domain scalar (``Fraction`` or ``complex``)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value)
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteError(f"non-finite scalar {value!r}")
    return z


def scalar_domain(value: Scalar) -> str:
    return EXACT if isinstance(value, Fraction) else FLOAT


def _finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


class Polynomial:
    """Immutable dense polynomial.

    ``Polynomial([1, 0, -1])`` is ``1 - x**2``.  The zero polynomial has an
    empty coefficient tuple and ``degree == -1`` (standing in for minus
    infinity).
    """

    __slots__ = ("_c", "_domain")

    def __init__(self, coeffs: Iterable = (), domain: str | None = None):
        cs = [as_scalar(c) for c in coeffs]
        if domain is None:
            domain = FLOAT if any(isinstance(c, complex) for c in cs) else EXACT
        if domain == FLOAT:
            cs = [complex(c) for c in cs]
            for c in cs:
                if not _finite(c):
                    raise NonFiniteError("non-finite coefficient")
        elif domain == EXACT:
            if any(isinstance(c, complex) for c in cs):
                raise DomainError("float coefficient in exact polynomial")
        else:
            raise ValueError(f"unknown domain {domain!r}")
        while cs and cs[-1] == 0:
            cs.pop()
        self._c = tuple(cs)
        self._domain = domain

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, domain: str = EXACT) -> "Polynomial":
        return cls((), domain)

    @classmethod
    def constant(cls, c, domain: str | None = None) -> "Polynomial":
        return cls([c], domain)

    @classmethod
    def x(cls, domain: str = EXACT) -> "Polynomial":
        return cls([0, 1], domain)

    @classmethod
    def monomial(cls, k: int, c=1, domain: str | None = None) -> "Polynomial":
        return cls([0] * k + [c], domain)

    # -- basic properties ---------------------------------------------------

    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def domain(self) -> str:
        return self._domain

    @property
    def exact(self) -> bool:
        return self._domain == EXACT

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def lead(self) -> Scalar:
        """Leading coefficient (0 for the zero polynomial)."""
        if not self._c:
            return Fraction(0) if self.exact else 0j
        return self._c[-1]

    def coeff(self, k: int) -> Scalar:
        if 0 <= k < len(self._c):
            return self._c[k]
        return Fraction(0) if self.exact else 0j

    def to_float(self) -> "Polynomial":
        if not self.exact:
            return self
        return Polynomial([complex(c) for c in self._c], FLOAT)

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._domain == other._domain and self._c == other._c
        if isinstance(other, (int, Fraction, float, complex)):
            return list(self._c) == ([other] if other != 0 else [])
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._domain, self._c))

    def __repr__(self) -> str:
        return f"Polynomial({format_poly(self)!r}, domain={self._domain!r})"

    def __str__(self) -> str:
        return format_poly(self)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other._domain != self._domain:
                raise DomainError(f"cannot combine {self._domain} and {other._domain} polynomials")
            return other
        s = as_scalar(other)
        if scalar_domain(s) != self._domain:
            if self.exact:
                raise DomainError("float scalar combined with exact polynomial")
            s = complex(s)
        return Polynomial([s], self._domain)

    def __add__(self, other) -> "Polynomial":
        q = self._coerce(other)
        a, b = self._c, q._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial(out, self._domain)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self._c], self._domain)

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        q = self._coerce(other)
        a, b = self._c, q._c
        if not a or not b:
            return Polynomial.zero(self._domain)
        zero = Fraction(0) if self.exact else 0j
        out = [zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return Polynomial(out, self._domain)

    def __rmul__(self, other) -> "Polynomial":
        return self.scale(other)

    def scale(self, c) -> "Polynomial":
        s = self._coerce(c).coeff(0)
        return Polynomial([s * a for a in self._c], self._domain)

    def __truediv__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            q, r = self.divmod(other)
            if not r.is_zero():
                raise ArithmeticError("polynomial division is not exact")
            return q
        s = self._coerce(other).coeff(0)
        if s == 0:
            raise ZeroDivisionError("division by zero scalar")
        return Polynomial([a / s for a in self._c], self._domain)

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1, self._domain)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, divisor: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        """Euclidean division: ``self = q * divisor + r`` with ``deg r < deg divisor``."""
        d = self._coerce(divisor)
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self._c)
        dl = d.lead()
        dd = d.degree
        zero = Fraction(0) if self.exact else 0j
        quot = [zero] * max(len(rem) - dd, 0)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k] / dl
            quot[k - dd] = c
            if c == 0:
                continue
            for j, dj in enumerate(d._c):
                rem[k - dd + j] -= c * dj
        rem = rem[:dd]
        return Polynomial(quot, self._domain), Polynomial(rem, self._domain)

    # -- calculus and evaluation --------------------------------------------

    def __call__(self, z):
        return evaluate(self, z)

    def derivative(self, k: int = 1) -> "Polynomial":
        return differentiate(self, k)

    def antiderivative(self) -> "Polynomial":
        return antiderivative(self)

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """``self(inner(x))`` by Horner's scheme."""
        inner = self._coerce(inner)
        result = Polynomial.zero(self._domain)
        for c in reversed(self._c):
            result = result * inner + c
        return result

    def reflect(self) -> "Polynomial":
        """``p(-x)``."""
        return Polynomial([c if k % 2 == 0 else -c for k, c in enumerate(self._c)], self._domain)


def poly_arith(op: str, p: Polynomial, q) -> Polynomial:
    """Dispatch ``add``/``sub``/``mul``/``scale`` by name."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        if not isinstance(q, Polynomial):
            raise TypeError("mul expects a polynomial; use scale for scalars")
        return p * q
    if op == "scale":
        return p.scale(q)
    raise ValueError(f"unknown operation {op!r}")


def differentiate(p: Polynomial, k: int = 1) -> Polynomial:
    if k < 0:
        raise ValueError("derivative order must be non-negative")
    c = list(p.coeffs)
    for _ in range(k):
        c = [j * c[j] for j in range(1, len(c))]
    return Polynomial(c, p.domain)


def antiderivative(p: Polynomial) -> Polynomial:
    """Antiderivative vanishing at 0."""
    zero = Fraction(0) if p.exact else 0j
    return Polynomial([zero] + [c / (j + 1) for j, c in enumerate(p.coeffs)], p.domain)


def evaluate(p: Polynomial, z) -> Scalar:
    """Horner evaluation.  Exact points into float polynomials are promoted."""
    z = as_scalar(z)
    if p.exact and isinstance(z, complex):
        raise DomainError("float point passed to exact polynomial; call to_float() first")
    if not p.exact:
        z = complex(z)
    acc = Fraction(0) if p.exact else 0j
    for c in reversed(p.coeffs):
        acc = acc * z + c
    if isinstance(acc, complex) and not _finite(acc):
        raise NonFiniteError(f"evaluation overflowed at {z!r}")
    return acc


def shift_basis(p: Polynomial, c) -> list:
    """Coefficients ``e`` with ``p(x) = sum e[k] (x - c)**k``.

    Repeated synthetic division by ``x - c``.
    """
    c = as_scalar(c)
    if not p.exact:
        c = complex(c)
    elif isinstance(c, complex):
        raise DomainError("float centre for exact polynomial")
    work = list(p.coeffs)
    out = []
    while work:
        # synthetic division of work by (x - c)
        n = len(work)
        acc = work[-1]
        quot = [acc]
        for k in range(n - 2, -1, -1):
            acc = work[k] + acc * c
            quot.append(acc)
        out.append(quot[-1])
        work = list(reversed(quot[:-1]))
    return out


def from_shifted(e: Sequence, c, domain: str | None = None) -> Polynomial:
    """Inverse of :func:`shift_basis`."""
    c = as_scalar(c)
    base = Polynomial([-c, 1], domain)
    return Polynomial(e, domain).compose(base)


def determinant(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Determinant of a square matrix of polynomials (fraction-free Bareiss).

    Intermediate divisions are exact in the polynomial ring; for float
    polynomials the remainders are rounding noise and are dropped.
    """
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix is not square")
    domain = matrix[0][0].domain
    a = [list(row) for row in matrix]
    sign = 1
    prev = Polynomial.constant(1, domain)
    for k in range(n - 1):
        if a[k][k].is_zero():
            for r in range(k + 1, n):
                if not a[r][k].is_zero():
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Polynomial.zero(domain)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num.divmod(prev)[0]
            a[i][k] = Polynomial.zero(domain)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def wronskian(ps: Sequence[Polynomial]) -> Polynomial:
    """Wronskian determinant; entry ``(i, j)`` is the ``i``-th derivative of ``ps[j]``."""
    ps = list(ps)
    if not ps:
        raise ValueError("wronskian of an empty sequence")
    domain = ps[0].domain
    if any(p.domain != domain for p in ps):
        raise DomainError("mixed domains in wronskian")
    rows = [[differentiate(p, i) for p in ps] for i in range(len(ps))]
    return determinant(rows)


def _fmt_scalar(c) -> str:
    if isinstance(c, Fraction):
        return str(c)
    if c.imag == 0:
        return repr(c.real)
    sign = "-" if c.imag < 0 else "+"
    return f"({c.real!r}{sign}{abs(c.imag)!r}j)"


def format_poly(p: Polynomial, var: str = "x") -> str:
    """Human readable form, highest degree first, e.g. ``128 x^3 + 192 x``."""
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        neg = False
        if isinstance(c, Fraction) and c < 0:
            neg, c = True, -c
        elif isinstance(c, complex) and c.imag == 0 and c.real < 0:
            neg, c = True, -c
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and c == 1:
            body = mono
        else:
            body = _fmt_scalar(c) + (" " + mono if mono else "")
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


def coeffs_to_json(p: Polynomial) -> dict:
    """Serialise coefficients: rationals as ``"p/q"`` strings, floats as ``[re, im]``."""
    if p.exact:
        return {"domain": EXACT, "coeffs": [f"{c.numerator}/{c.denominator}" for c in p.coeffs]}
    return {"domain": FLOAT, "coeffs": [[c.real, c.imag] for c in p.coeffs]}


def coeffs_from_json(obj: dict) -> Polynomial:
    if obj["domain"] == EXACT:
        return Polynomial([Fraction(s) for s in obj["coeffs"]], EXACT)
    return Polynomial([complex(re, im) for re, im in obj["coeffs"]], FLOAT)


def max_abs_coeff(p: Polynomial) -> float:
    return max((abs(complex(c)) for c in p.coeffs), default=0.0)

