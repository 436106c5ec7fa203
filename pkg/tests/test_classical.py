from fractions import Fraction as Q

import pytest

from xoplab.classical import (
    GenBinomialArgs,
    Partition,
    check_classical_identities,
    even_partitions,
    exp_partial_sum,
    gen_binomial,
    generalized_hermite,
    hermite,
    jacobi,
    jacobi_degree_drops,
    laguerre,
    pochhammer,
    r_partial_sum,
)
from xoplab.poly import Polynomial
from xoplab.report import FAIL, PASS

X = Polynomial([0, 1])


@pytest.mark.parametrize("n,alpha,coeffs", [
    (0, Q(5, 3), [1]),
    (1, 0, [1, -1]),
    (2, 1, [3, -3, Q(1, 2)]),
])
def test_laguerre_examples(n, alpha, coeffs):
    assert laguerre(n, alpha) == Polynomial(coeffs)


def test_negative_degree_is_zero_polynomial():
    assert laguerre(-1, 2).is_zero() and jacobi(-1, 1, 1).is_zero() and hermite(-1).is_zero()


@pytest.mark.parametrize("a,b", [(0, 0), (Q(1, 2), Q(3, 2)), (Q(-7, 3), 2)])
def test_jacobi_degree_one(a, b):
    a, b = Q(a), Q(b)
    assert jacobi(1, a, b) == Polynomial([a + 1]) + Polynomial([-1, 1]) * ((a + b + 2) / 2)
    assert jacobi(0, a, b) == Polynomial([1])


def test_legendre_case():
    assert jacobi(1, 0, 0) == X
    assert jacobi(2, 0, 0) == Polynomial([Q(-1, 2), 0, Q(3, 2)])


def test_jacobi_degree_drop_detected():
    # alpha + beta + n = -1 kills the top coefficient
    assert jacobi_degree_drops(2, -2, -1)
    assert jacobi(2, -2, -1).degree < 2
    assert not jacobi_degree_drops(2, Q(1, 2), Q(1, 2))


@pytest.mark.parametrize("n,coeffs", [
    (0, [1]),
    (1, [0, 2]),
    (2, [-2, 0, 4]),
    (3, [0, -12, 0, 8]),
])
def test_hermite_examples(n, coeffs):
    assert hermite(n) == Polynomial(coeffs)


def test_generalized_hermite_examples():
    assert generalized_hermite((1, 1)) == Polynomial([4, 0, 8])
    assert generalized_hermite((1,)) == hermite(1)
    assert generalized_hermite((2, 2)).degree == 4


@pytest.mark.parametrize("lam", [(1,), (2, 1), (2, 2), (3, 1, 1), (3, 3, 2)])
def test_generalized_hermite_degree_is_weight(lam):
    assert generalized_hermite(lam).degree == sum(lam)


def test_partial_sums():
    assert exp_partial_sum(0) == Polynomial([1])
    assert exp_partial_sum(2) == Polynomial([1, 1, Q(1, 2)])
    assert r_partial_sum(0, Q(5, 2)) == Polynomial([1])
    assert r_partial_sum(1, Q(5, 2)) == Polynomial([1, Q(-5, 2)])


def test_pochhammer_and_binomial():
    assert pochhammer(Q(7, 3), 0) == 1
    assert pochhammer(Q(1, 2), 3) == Q(15, 8)
    assert gen_binomial(Q(-1, 2), 2) == Q(3, 8)
    assert gen_binomial(GenBinomialArgs(Q(5), 2)) == 10
    with pytest.raises(ValueError):
        gen_binomial(Q(1, 2), -1)


def test_partition_parsing_and_validation():
    lam = Partition.parse("3, 1,1")
    assert lam.parts == (3, 1, 1) and lam.weight == 5 and lam.length == 3
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))


def test_admissible_degrees_of_pair():
    # (1,1): |lambda| = 2, excluded n = 2 + 1 - 1 = 2 and 2 + 1 - 2 = 1; and n >= 0
    lam = Partition((1, 1))
    assert [n for n in range(6) if lam.admissible(n)] == [0, 3, 4, 5]


def test_even_partitions_up_to_six():
    got = [p.parts for p in even_partitions(6)]
    assert got == [(1, 1), (1, 1, 1, 1), (2, 2), (1, 1, 1, 1, 1, 1), (2, 2, 1, 1), (3, 3)]
    assert all(p.is_even() for p in even_partitions(8))


def test_spot_identities():
    # alpha step at n=2, alpha=0
    assert laguerre(2, 0) - (laguerre(2, 1) - laguerre(1, 1)) == Polynomial.zero()
    assert hermite(1).derivative() - hermite(0) * 2 == Polynomial.zero()
    assert hermite(2) - laguerre(1, Q(-1, 2)).compose(Polynomial([0, 0, 1])) * (-4) == Polynomial.zero()


def test_identity_suite_all_exact():
    rep = check_classical_identities()
    assert rep.ok
    assert all(c.status == PASS and c.residual == "exact-zero" for c in rep.cases)
    names = {c.check for c in rep.cases}
    assert {"laguerre_derivative", "laguerre_alpha_step", "laguerre_x_multiple", "laguerre_ode",
            "hermite_even_from_laguerre", "hermite_odd_from_laguerre", "hermite_derivative",
            "hermite_recurrence", "exp_sum_from_laguerre", "r_sum_from_jacobi"} <= names


def test_identity_suite_reports_failure(monkeypatch):
    import xoplab.classical as cl

    real = cl.hermite

    def broken(n):
        return real(n) + (Polynomial([1]) if n == 4 else Polynomial.zero())

    monkeypatch.setattr(cl, "hermite", broken)
    rep = cl.check_classical_identities(n_max=5, alphas=(Q(1),), betas=(Q(1),))
    first = rep.first_failure()
    assert first is not None and first.status == FAIL and "n=4" in first.spec
