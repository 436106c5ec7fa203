import math
from fractions import Fraction as Q

import numpy as np
import pytest

from xoplab import xop_det
from xoplab.poly import Polynomial
from xoplab.rootfind import DegenerateNodesError
from xoplab.verify import RunConfig, xop_grid
from xoplab.xop_det import (
    ConditioningError,
    assemble,
    coeff_rel_error,
    det_xop,
    exact_minors,
    jacobi_det_scale,
    kernel_singularity,
    last_row_det,
    leading_law,
    max_imag_ratio,
    permutation_invariance,
    random_permutations,
    resolve_type2_constant,
    supported,
    symmetric_minors,
    type2_constant_readings,
    vandermonde_product,
    _minors,
    node_matrix,
)
from xoplab.xop_direct import HERMITE11, JACOBI, LAG1, LAG2, LAG3, InvalidSpecError, XopSpec, build

R2 = math.sqrt(2)
X = Polynomial([0, 1])
GRID = [s for s in xop_grid(RunConfig()) if supported(s)]


def cpoly_close(p, coeffs, tol=1e-12):
    assert len(p.coeffs) == len(coeffs)
    for a, b in zip(p.coeffs, coeffs):
        assert abs(a - b) <= tol * (1 + abs(b)), (p, coeffs)


def test_vandermonde_examples():
    assert vandermonde_product([1.0]) == 1
    v = vandermonde_product([-1j / R2, 1j / R2])
    assert abs(v - 1j * R2) < 1e-15
    assert abs(vandermonde_product([1j / R2, -1j / R2]) + v) < 1e-15
    with pytest.raises(DegenerateNodesError):
        vandermonde_product([0.5, 0.5])


def test_last_row_det_two_by_two():
    cpoly_close(last_row_det([3.0], [Polynomial([1]), X]), [-3, 1])
    cpoly_close(last_row_det([-1.0], [Polynomial([1]), X / 2]), [1, 0.5])


@pytest.mark.parametrize("minors", ["symmetric", "lu", "exact"])
def test_last_row_det_pair_nodes(minors):
    row = [Polynomial([1]), X / 2, Polynomial([0, 0, Q(1, 3)])]
    # node order fixes the sign; canonical order (-i, +i)/sqrt2 gives +i sqrt2
    canon = last_row_det([-1j / R2, 1j / R2], row, minors=minors)
    cpoly_close(canon, [1j * R2 / 2, 0, 1j * R2 / 3])
    flipped = last_row_det([1j / R2, -1j / R2], row, minors=minors)
    cpoly_close(flipped, [-1j * R2 / 2, 0, -1j * R2 / 3])


def test_last_row_det_size_mismatch():
    with pytest.raises(ValueError):
        last_row_det([1.0, 2.0], [Polynomial([1]), X])


def test_minor_routes_agree_on_small_sets():
    rng = np.random.default_rng(3)
    for k in range(2, 8):
        pts = list(rng.normal(size=k - 1) + 1j * rng.normal(size=k - 1))
        lu = _minors(node_matrix(pts, k))
        sym = symmetric_minors(pts)
        ex = exact_minors(pts)
        assert np.allclose(lu, sym, rtol=1e-10, atol=0)
        assert np.allclose(ex, sym, rtol=1e-13, atol=0)


def test_lu_route_refuses_rank_deficient_rows():
    pts = list(np.linspace(0, 1, 24))
    with pytest.raises(ConditioningError):
        last_row_det(pts, xop_det._monomial_row(25, 1), minors="lu")


def test_duplicate_nodes_refused():
    with pytest.raises(DegenerateNodesError):
        last_row_det([1.0, 1.0 + 1e-12], [Polynomial([1]), X, X * X])


def test_type1_smallest():
    p = det_xop(XopSpec(LAG1, 1, 1, 1))
    cpoly_close(p, [2, 1])
    asm = assemble(XopSpec(LAG1, 1, 1, 1))
    assert asm.nodes.points == (-1,)
    assert abs(asm.prefactor() - 2) < 1e-15


def test_pair_hermite_degree_three():
    p = det_xop(XopSpec(HERMITE11, 3))
    cpoly_close(p, [0, 192, 0, 128], tol=1e-12)
    assert xop_det.coeff_rel_error(p, build(XopSpec(HERMITE11, 3))) <= 1e-12


@pytest.mark.parametrize("n", range(2, 11))
def test_type3_m1(n):
    spec = XopSpec(LAG3, n, 1, Q(-1, 2))
    assert coeff_rel_error(det_xop(spec), build(spec)) <= 1e-8


def test_type3_degree_zero_has_no_formula():
    with pytest.raises(InvalidSpecError):
        assemble(XopSpec(LAG3, 0, 1, Q(-1, 2)))
    assert not supported(XopSpec(LAG3, 0, 1, Q(-1, 2)))


@pytest.mark.parametrize("spec", GRID, ids=str)
def test_agreement_with_exact_path(spec):
    det = det_xop(spec)
    tol = 1e-10 if spec.n <= 6 else 1e-8
    assert coeff_rel_error(det, build(spec)) <= tol
    assert max_imag_ratio(det) <= 1e-9


@pytest.mark.parametrize("spec", [s for s in GRID if s.n <= 10], ids=str)
def test_leading_coefficient_law(spec):
    got, want = leading_law(spec)
    assert abs(got - want) <= 1e-9 * abs(want)


def test_leading_law_type1_value():
    # corner entry x^n/(n+alpha): lead of det = Vandermonde / (alpha + n)
    spec = XopSpec(LAG1, 5, 2, Q(5, 2))
    got, _ = leading_law(spec)
    v = vandermonde_product(assemble(spec).nodes.points)
    assert abs(got - v / (Q(5, 2) + 5)) <= 1e-12 * abs(v)


def test_lu_route_is_fine_at_low_degree():
    for spec in [XopSpec(LAG1, 5, 2, 1), XopSpec(LAG2, 4, 1, 2), XopSpec(HERMITE11, 6)]:
        assert coeff_rel_error(det_xop(spec, minors="lu"), build(spec)) <= 1e-10


def test_jacobi_scale_against_gamma_functions():
    for m, n, a, b in [(1, 3, Q(7, 4), Q(1, 2)), (2, 5, Q(13, 3), Q(3, 2)), (3, 4, Q(15, 4), Q(1))]:
        d = float(a + 1)
        bf = float(b)
        g = (math.gamma(bf - d + 2 * m) * math.gamma(d + bf + 2 * (n - m))
             / (math.gamma(bf - d + m) * math.gamma(d + bf + n - m)))
        ref = ((-1) ** m * 2.0 ** -n * math.comb(n, m) * (n + d - 2 * m) * g * (n + bf)
               / (math.factorial(n) * (d + n - m)))
        assert abs(float(jacobi_det_scale(m, n, a, b)) - ref) <= 1e-12 * abs(ref)


def test_type2_readings():
    r = type2_constant_readings(1, 1, 2)
    assert r["literal"] is None and r["grouped"] == Q(2, 1)
    # the readings coincide for odd n and differ for even n > m
    r = type2_constant_readings(1, 3, Q(5, 2))
    assert r["literal"] == r["grouped"] == Q(3 + 1 - 2 + Q(5, 2), 2)
    r = type2_constant_readings(1, 4, Q(5, 2))
    assert r["literal"] != r["grouped"]


def test_type2_constant_resolves_to_grouped_reading():
    lag2 = [s for s in GRID if s.family == LAG2]
    res = resolve_type2_constant(lag2)
    assert res["reading"] == "grouped"
    assert res["max_rel_error"]["grouped"] <= 1e-9
    assert res["undefined_cases"]["literal"] > 0
    assert res["max_rel_error"]["literal"] > 1e-3


@pytest.mark.parametrize("spec", [XopSpec(LAG1, 6, 2, 1), XopSpec(LAG2, 5, 2, Q(3, 2)),
                                  XopSpec(LAG3, 6, 2, Q(-1, 3)), XopSpec(JACOBI, 5, 1, Q(7, 4), Q(1, 2)),
                                  XopSpec(HERMITE11, 7)], ids=str)
def test_kernel_argument(spec):
    assert kernel_singularity(spec) <= 1e-6


def test_permutation_examples():
    spec = XopSpec(LAG1, 3, 1, 1)
    assert permutation_invariance(spec, [0, 1, 2])
    for i in range(3):
        for j in range(i + 1, 3):
            perm = [0, 1, 2]
            perm[i], perm[j] = perm[j], perm[i]
            assert permutation_invariance(spec, perm)
    rng = np.random.default_rng(11)
    spec = XopSpec(HERMITE11, 6)
    for perm in random_permutations(5, 20, rng):
        assert permutation_invariance(spec, perm)


def test_bad_permutation_rejected():
    with pytest.raises(ValueError):
        assemble(XopSpec(LAG1, 3, 1, 1)).evaluate([0, 0, 1])


def test_corrupted_prefactor_is_caught(monkeypatch):
    real = xop_det.assemble

    def corrupted(spec):
        asm = real(spec)
        if spec.family == LAG1:
            from dataclasses import replace
            return replace(asm, scale=asm.scale * 1.001)
        return asm

    monkeypatch.setattr(xop_det, "assemble", corrupted)
    spec = XopSpec(LAG1, 4, 1, 1)
    assert coeff_rel_error(xop_det.det_xop(spec), build(spec)) > 1e-4
