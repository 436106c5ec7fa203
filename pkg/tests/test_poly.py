from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xoplab.classical import hermite, laguerre
from xoplab.poly import (
    EXACT,
    FLOAT,
    DomainError,
    NonFiniteError,
    Polynomial,
    antiderivative,
    coeffs_from_json,
    coeffs_to_json,
    determinant,
    differentiate,
    evaluate,
    format_poly,
    from_shifted,
    poly_arith,
    shift_basis,
    wronskian,
)

X = Polynomial([0, 1])

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
exact_polys = st.lists(rationals, max_size=7).map(Polynomial)


def test_zero_polynomial_has_degree_minus_one():
    z = Polynomial([0, 0, 0])
    assert z.is_zero() and z.degree == -1 and z.coeffs == ()


def test_trailing_zeros_are_stripped():
    assert Polynomial([1, 2, 0, 0]).degree == 1


@pytest.mark.parametrize("op,p,q,expected", [
    ("add", Polynomial([1, -1]), X, Polynomial([1])),
    ("mul", Polynomial([1, 1]), Polynomial([-1, 1]), Polynomial([-1, 0, 1])),
    ("scale", Polynomial([-2, 0, 4]), Q(1, 2), Polynomial([-1, 0, 2])),
    ("sub", X, X, Polynomial.zero()),
])
def test_poly_arith_examples(op, p, q, expected):
    assert poly_arith(op, p, q) == expected


def test_mixed_domains_are_rejected():
    with pytest.raises(DomainError):
        Polynomial([1, 2]) + Polynomial([1.0, 2.0], FLOAT)


def test_exact_polynomial_refuses_float_point():
    with pytest.raises(DomainError):
        evaluate(Polynomial([1, 1]), 0.5)


def test_float_overflow_is_reported():
    with pytest.raises(NonFiniteError):
        Polynomial([0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1], FLOAT)(1e300)


def test_derivative_examples():
    l2 = laguerre(2, 0)
    assert l2 == Polynomial([1, -2, Q(1, 2)])
    assert differentiate(l2) == -laguerre(1, 1)
    assert differentiate(Polynomial([7])).is_zero()
    assert differentiate(Polynomial([0, -12, 0, 8]), 3) == Polynomial([48])


def test_antiderivative_examples():
    assert antiderivative(Polynomial([1])) == X
    assert antiderivative(Polynomial([4, 0, 8])) == Polynomial([0, 4, 0, Q(8, 3)])


def test_evaluate_examples():
    assert evaluate(Polynomial([-1, 0, 1]), 1) == 0
    root = 2 + 2 ** 0.5
    assert abs(evaluate(laguerre(2, 0).to_float(), root)) <= 1e-12
    assert evaluate(Polynomial.zero(), Q(3)) == 0


@pytest.mark.parametrize("ps,expected", [
    ([hermite(1), hermite(2)], Polynomial([4, 0, 8])),
    ([Polynomial([3, 1])], Polynomial([3, 1])),
    ([hermite(1), hermite(2), hermite(3)], Polynomial([0, 192, 0, 128])),
])
def test_wronskian_examples(ps, expected):
    assert wronskian(ps) == expected


def test_shift_basis_examples():
    assert shift_basis(Polynomial([0, 0, 1]), -1) == [1, -2, 1]
    assert shift_basis(Polynomial([5]), Q(7, 3)) == [5]


def test_determinant_matches_hand_expansion():
    m = [[X, Polynomial([1])], [Polynomial([2]), X]]
    assert determinant(m) == Polynomial([-2, 0, 1])


def test_format_poly():
    assert format_poly(Polynomial([0, 192, 0, 128])) == "128 x^3 + 192 x"
    assert format_poly(Polynomial([1, -2, Q(1, 2)])) == "1/2 x^2 - 2 x + 1"
    assert format_poly(Polynomial.zero()) == "0"


@given(exact_polys, exact_polys, exact_polys)
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + q == q + p


@given(exact_polys, exact_polys)
def test_product_rule(p, q):
    assert (p * q).derivative() == p.derivative() * q + p * q.derivative()


@given(exact_polys)
def test_antiderivative_inverts_derivative(p):
    assert p.antiderivative().derivative() == p


@settings(max_examples=40)
@given(st.lists(exact_polys, min_size=2, max_size=3), st.data())
def test_wronskian_alternates_under_swap(ps, data):
    i, j = data.draw(st.sampled_from([(a, b) for a in range(len(ps)) for b in range(a + 1, len(ps))]))
    swapped = list(ps)
    swapped[i], swapped[j] = swapped[j], swapped[i]
    assert wronskian(swapped) == -wronskian(ps)


@given(exact_polys, st.fractions(min_value=-3, max_value=3, max_denominator=8))
def test_float_evaluation_tracks_exact(p, z):
    exact = evaluate(p, z)
    approx = evaluate(p.to_float(), z)
    scale = sum(abs(float(c)) * abs(float(z)) ** k for k, c in enumerate(p.coeffs)) or 1.0
    assert abs(approx - float(exact)) <= 1e-12 * scale


@given(exact_polys, rationals)
def test_shift_basis_round_trip(p, c):
    assert from_shifted(shift_basis(p, c), c) == p


@given(exact_polys)
def test_divmod_reconstructs(p):
    d = Polynomial([1, 3, 2])
    q, r = p.divmod(d)
    assert q * d + r == p and r.degree < d.degree


@given(exact_polys)
def test_json_round_trip_exact(p):
    back = coeffs_from_json(coeffs_to_json(p))
    assert back == p and back.domain == EXACT


def test_json_round_trip_float():
    p = Polynomial([0.1 + 2j, -1 / 3, 1e-300], FLOAT)
    assert coeffs_from_json(coeffs_to_json(p)) == p
