import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonstat import (
    CancellationError,
    CancellationWarning,
    MomentLadder,
    NumberDistribution,
    Ordering,
    StateModification,
    UndefinedStateError,
    added_factorial_moment,
    antinormal_ladder,
    build_coherent,
    build_fock,
    build_thermal,
    ladder_sums_exact,
    modified_moment,
    modified_moment_sequence,
    normal_ladder,
    reorder_coefficients,
    subtracted_factorial_moment,
)


def brute_falling_moment(dist, k):
    return math.fsum(
        p * math.prod(range(n - k + 1, n + 1))
        for n, p in enumerate(dist.probs))


# ---------------------------------------------------------------- ladders

def test_normal_ladder_fock():
    ladder = normal_ladder(build_fock(2), 4)
    np.testing.assert_array_equal(ladder.values, [1.0, 2.0, 2.0, 0.0, 0.0])
    assert ladder.ordering is Ordering.NORMAL


def test_normal_ladder_coherent():
    ladder = normal_ladder(build_coherent(1.0), 3)
    np.testing.assert_allclose(ladder.values, [1.0, 1.0, 1.0, 1.0],
                               rtol=1e-10)


def test_normal_ladder_thermal():
    # analytic k! nbar^k, cross-checked against the direct pmf sum
    dist = build_thermal(0.5)
    ladder = normal_ladder(dist, 3)
    np.testing.assert_allclose(ladder.values, [1.0, 0.5, 0.5, 0.75],
                               rtol=1e-10)
    brute = [brute_falling_moment(dist, k) for k in range(4)]
    np.testing.assert_allclose(ladder.values, brute, rtol=1e-13)


def test_antinormal_ladder_vacuum():
    ladder = antinormal_ladder(build_fock(0), 3)
    np.testing.assert_array_equal(ladder.values, [1.0, 1.0, 2.0, 6.0])
    assert ladder.ordering is Ordering.ANTINORMAL


def test_antinormal_ladder_fock1():
    ladder = antinormal_ladder(build_fock(1), 2)
    np.testing.assert_array_equal(ladder.values, [1.0, 2.0, 6.0])


def test_antinormal_ladder_coherent_commutator_shift():
    ladder = antinormal_ladder(build_coherent(1.0), 1)
    assert math.isclose(ladder.values[1], 2.0, rel_tol=1e-12)


def test_antinormal_ladder_monotone():
    for dist in (build_fock(0), build_thermal(1.0), build_coherent(0.5)):
        values = antinormal_ladder(dist, 6).values
        assert np.all(np.diff(values) >= 0)
        assert np.all(np.diff(values[1:]) > 0)


def test_ladder_unit_norm_head():
    for dist in (build_thermal(2.0), build_coherent(3.0)):
        assert abs(normal_ladder(dist, 2).values[0] - 1.0) <= 1e-13


def test_ladder_float_matches_exact_rational():
    dist = build_thermal(1.2)
    for rising in (False, True):
        got = (antinormal_ladder if rising else normal_ladder)(dist, 8).values
        want = [float(v) for v in ladder_sums_exact(dist.probs, 8, rising)]
        np.testing.assert_allclose(got, want, rtol=1e-12)


def test_ladder_overflow_raises():
    probs = np.zeros(401)
    probs[400] = 1.0
    dist = NumberDistribution(probs)
    with pytest.raises(OverflowError):
        normal_ladder(dist, 400)


# ----------------------------------------------------- subtracted moments

def test_subtracted_moment_coherent_is_eigenstate():
    ladder = normal_ladder(build_coherent(2.0), 6)
    for n in range(3):
        for x in range(4):
            assert math.isclose(subtracted_factorial_moment(ladder, n, x),
                                2.0 ** x, rel_tol=1e-10)


def test_subtracted_moment_fock():
    ladder = normal_ladder(build_fock(2), 3)
    assert subtracted_factorial_moment(ladder, 1, 1) == 1.0


def test_subtracted_moment_thermal():
    # subtracting one photon from a thermal state doubles the mean
    ladder = normal_ladder(build_thermal(0.5), 2)
    assert math.isclose(subtracted_factorial_moment(ladder, 1, 1), 1.0,
                        rel_tol=1e-10)


def test_subtracted_moment_order_zero_is_one():
    ladder = normal_ladder(build_thermal(1.0), 3)
    assert subtracted_factorial_moment(ladder, 2, 0) == 1.0


def test_oversubtraction_is_undefined():
    ladder = normal_ladder(build_fock(2), 4)
    with pytest.raises(UndefinedStateError):
        subtracted_factorial_moment(ladder, 3, 1)


def test_subtracted_moment_requires_normal_ordering():
    ladder = antinormal_ladder(build_fock(1), 3)
    with pytest.raises(ValueError):
        subtracted_factorial_moment(ladder, 1, 1)


def test_ladder_coverage_checked():
    ladder = normal_ladder(build_fock(3), 2)
    with pytest.raises(ValueError):
        subtracted_factorial_moment(ladder, 1, 2)


# -------------------------------------------------- reordering coefficients

def test_reorder_coefficients_base_cases():
    assert reorder_coefficients(0) == [1]
    assert reorder_coefficients(1) == [1, -1]
    assert reorder_coefficients(2) == [1, -4, 2]


def test_reorder_coefficients_are_ints():
    assert all(isinstance(c, int) for c in reorder_coefficients(7))


def _matpow(mat, power, dim):
    out = np.array([[int(i == j) for j in range(dim)] for i in range(dim)],
                   dtype=object)
    for _ in range(power):
        out = out @ mat
    return out


@pytest.mark.parametrize("x", range(7))
def test_reordering_identity_exact_on_truncated_basis(x):
    # Exact integer check on the monomial ladder-operator representation
    # (lowering L[n-1,n] = n, raising R[n+1,n] = 1, [L, R] = 1):
    # R^x L^x must equal sum_k coeff[k] L^(x-k) R^(x-k) away from the
    # truncation edge.
    dim = 14
    lower = np.zeros((dim, dim), dtype=object)
    raise_ = np.zeros((dim, dim), dtype=object)
    for n in range(1, dim):
        lower[n - 1, n] = n
        raise_[n, n - 1] = 1
    lhs = _matpow(raise_, x, dim) @ _matpow(lower, x, dim)
    rhs = np.zeros((dim, dim), dtype=object)
    for k, coeff in enumerate(reorder_coefficients(x)):
        rhs = rhs + coeff * (_matpow(lower, x - k, dim)
                             @ _matpow(raise_, x - k, dim))
    interior = dim - x
    assert (lhs[:interior, :interior] == rhs[:interior, :interior]).all()


# --------------------------------------------------------- added moments

def test_added_moment_vacuum():
    ladder = antinormal_ladder(build_fock(0), 2)
    assert added_factorial_moment(ladder, 1, 1) == 1.0


def test_added_moment_fock1():
    ladder = antinormal_ladder(build_fock(1), 2)
    assert added_factorial_moment(ladder, 1, 1) == 2.0


def test_added_moment_thermal():
    ladder = antinormal_ladder(build_thermal(1.0), 2)
    assert math.isclose(added_factorial_moment(ladder, 1, 1), 3.0,
                        rel_tol=1e-10)


def test_added_moment_order_zero_is_one():
    ladder = antinormal_ladder(build_thermal(0.7), 4)
    assert added_factorial_moment(ladder, 4, 0) == 1.0


def test_added_moment_requires_antinormal_ordering():
    ladder = normal_ladder(build_fock(1), 3)
    with pytest.raises(ValueError):
        added_factorial_moment(ladder, 1, 1)


def test_added_moment_total_cancellation_is_flagged():
    # adding one photon to vacuum gives |1>, whose second factorial moment
    # vanishes by exact cancellation of the alternating sum
    ladder = antinormal_ladder(build_fock(0), 3)
    with pytest.warns(CancellationWarning):
        value = added_factorial_moment(ladder, 1, 2)
    assert value == 0.0


def test_added_moment_negative_sum_raises():
    bogus = MomentLadder(np.array([2.0, 1.0]), Ordering.ANTINORMAL,
                         build_fock(0))
    with pytest.raises(CancellationError):
        added_factorial_moment(bogus, 0, 1)


# ------------------------------------------------------------- dispatcher

def test_modified_moment_identity_count():
    dist = build_thermal(1.0)
    for kind in (StateModification.subtract(0), StateModification.add(0)):
        assert math.isclose(modified_moment(dist, kind, 2), 2.0,
                            rel_tol=1e-10)


def test_modified_moment_examples():
    assert math.isclose(
        modified_moment(build_coherent(1.0), StateModification.subtract(2), 3),
        1.0, rel_tol=1e-10)
    with pytest.raises(UndefinedStateError):
        modified_moment(build_fock(2), StateModification.subtract(3), 1)
    assert modified_moment(build_fock(0), StateModification.add(2), 2) == 2.0


def test_modified_moment_sequence_matches_scalar():
    dist = build_thermal(0.8)
    mod = StateModification.add(2)
    seq = modified_moment_sequence(dist, mod, 3)
    for x in range(4):
        assert math.isclose(seq[x], modified_moment(dist, mod, x),
                            rel_tol=1e-14)


def test_modification_validation():
    with pytest.raises(ValueError):
        StateModification.subtract(-1)
    with pytest.raises(ValueError):
        StateModification.add(1.5)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.05, max_value=5.0),
       st.integers(min_value=0, max_value=3),
       st.integers(min_value=0, max_value=5))
def test_coherent_moments_invariant_under_subtraction(alpha_sq, n, x):
    # coherent states are annihilation-operator eigenstates
    ladder = normal_ladder(build_coherent(alpha_sq), n + x)
    got = subtracted_factorial_moment(ladder, n, x)
    assert math.isclose(got, alpha_sq ** x, rel_tol=1e-9)
