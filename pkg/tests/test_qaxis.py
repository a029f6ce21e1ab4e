import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dexterity.bounds import ConditionCeiling, ManipulabilityFloor, SymmetricFactor, TransmissionInterval
from dexterity.qaxis import (
    chi_from_p,
    chi_from_rho,
    chi_range_for_bound,
    chi_range_for_condition,
    chi_range_for_manipulability,
    chi_range_for_transmission,
    condition_number,
    manipulability,
    p_from_chi,
    p_from_rho,
    qaxis_design,
    qaxis_eigenvalues,
    qaxis_inverse_jacobian,
    rho_from_chi,
    qaxis_landmarks,
)
from kinematics.errors import InvalidBoundError, OutOfRangeError, ParallelSingularityError
from kinematics.geometry import Geometry
from kinematics.orthoglide import inverse_jacobian, inverse_jacobian_det, inverse_kinematics

chis = st.floats(min_value=-0.49, max_value=0.99, allow_nan=False)


# ---------------------------------------------------------------------
# Parameterisation
# ---------------------------------------------------------------------

def test_isotropic_point():
    assert chi_from_p(0.0) == 0.0
    assert rho_from_chi(0.0) == 1.0
    assert p_from_rho(1.0) == pytest.approx(0.0, abs=1e-15)


def test_flat_singularity_end():
    assert rho_from_chi(-0.5) == pytest.approx(math.sqrt(1.5))
    assert p_from_chi(-0.5) == pytest.approx(math.sqrt(1.0 / 6.0))


@given(chis)
def test_chi_p_rho_round_trip(chi):
    p = p_from_chi(chi)
    assert chi_from_p(p) == pytest.approx(chi, abs=1e-12)
    assert chi_from_rho(rho_from_chi(chi)) == pytest.approx(chi, abs=1e-9)
    assert p_from_rho(rho_from_chi(chi)) == pytest.approx(p, abs=1e-12)


@given(chis)
def test_qaxis_matrix_matches_general_jacobian(chi):
    p = p_from_chi(chi)
    r = inverse_kinematics((p, p, p))
    np.testing.assert_allclose(inverse_jacobian((p, p, p), r), qaxis_inverse_jacobian(chi), atol=1e-9)
    assert inverse_jacobian_det((p, p, p), r) == pytest.approx(manipulability(chi), abs=1e-9)


def test_conversions_reject_out_of_range():
    with pytest.raises(OutOfRangeError):
        chi_from_p(0.8)
    with pytest.raises(OutOfRangeError):
        p_from_rho(1.3)
    with pytest.raises(OutOfRangeError):
        p_from_rho(0.0)


def test_geometry_scales_lengths_only():
    g = Geometry(300.0)
    assert rho_from_chi(0.5, g) == pytest.approx(300.0 * rho_from_chi(0.5))
    assert chi_from_p(p_from_chi(0.3, g), g) == pytest.approx(0.3)


# ---------------------------------------------------------------------
# Indices
# ---------------------------------------------------------------------

def test_indices_at_known_points():
    assert qaxis_eigenvalues(0.25) == (1.5, 0.75, 0.75)
    assert manipulability(0.0) == 1.0
    assert manipulability(-0.5) == 0.0
    assert condition_number(0.0) == 1.0
    assert condition_number(0.5) == pytest.approx(4.0)
    assert condition_number(-0.25) == pytest.approx(2.5)


@pytest.mark.parametrize("chi", [-0.5, 1.0, 1.5])
def test_condition_number_singular(chi):
    with pytest.raises(ParallelSingularityError):
        condition_number(chi)


# ---------------------------------------------------------------------
# Joint-limit solvers
# ---------------------------------------------------------------------

def test_manipulability_range_half():
    chi1, chi2 = chi_range_for_manipulability(0.5)
    assert chi1 == pytest.approx((1.0 - math.sqrt(3.0)) / 2.0, abs=1e-12)
    assert chi2 == pytest.approx(0.5, abs=1e-12)


@given(st.floats(min_value=0.01, max_value=0.99))
def test_manipulability_range_roots_hit_floor(delta):
    chi1, chi2 = chi_range_for_manipulability(delta)
    assert -0.5 <= chi1 <= 0.0 <= chi2 < 1.0
    assert manipulability(chi1) == pytest.approx(delta, abs=1e-9)
    assert manipulability(chi2) == pytest.approx(delta, abs=1e-9)


def test_condition_range():
    assert chi_range_for_condition(2.0) == pytest.approx((-0.2, 0.25))
    assert chi_range_for_condition(1.0) == (0.0, 0.0)
    assert chi_range_for_condition(math.inf) == (-0.5, 1.0)


@given(st.floats(min_value=1.01, max_value=50.0))
def test_condition_range_endpoints_reach_ceiling(delta):
    chi1, chi2 = chi_range_for_condition(delta)
    assert condition_number(chi1) == pytest.approx(delta)
    assert condition_number(chi2) == pytest.approx(delta)


def test_transmission_range_symmetric_half():
    assert chi_range_for_transmission(0.5, 2.0) == pytest.approx((-0.25, 0.5))
    assert chi_range_for_bound(SymmetricFactor(0.5)) == pytest.approx((-0.25, 0.5))


def test_qaxis_design_half():
    q = qaxis_design(SymmetricFactor(0.5))
    assert q.rho_min == pytest.approx(0.4082, abs=5e-4)
    assert q.rho_max == pytest.approx(1.1785, abs=5e-4)
    assert q.p_min == pytest.approx(-0.4082, abs=5e-4)
    assert q.p_max == pytest.approx(0.2357, abs=5e-4)
    assert q.rho_max - q.rho_min == pytest.approx(0.7703, abs=5e-4)
    assert q.p_max - q.p_min == pytest.approx(0.6440, abs=5e-4)
    assert q.q_plus.chi == q.chi1 and q.q_minus.chi == q.chi2


@pytest.mark.parametrize(
    "build",
    [
        lambda: SymmetricFactor(1.5),
        lambda: SymmetricFactor(0.0),
        lambda: ConditionCeiling(0.5),
        lambda: ConditionCeiling(math.inf),
        lambda: ManipulabilityFloor(1.0),
        lambda: TransmissionInterval(1.2, 2.0),
        lambda: TransmissionInterval(0.5, 0.9),
        lambda: SymmetricFactor(True),
    ],
)
def test_invalid_bounds(build):
    with pytest.raises(InvalidBoundError):
        build()


def test_bounds_accept_singular_value_stacks():
    sigma = np.array([[1.0, 1.0, 1.0], [2.5, 1.0, 0.9], [1.2, 1.0, 0.3]])
    np.testing.assert_array_equal(SymmetricFactor(0.5).accepts(sigma), [True, False, False])
    np.testing.assert_array_equal(TransmissionInterval(0.0, 3.0).accepts(sigma), [True, True, False])
    np.testing.assert_array_equal(TransmissionInterval(1 / 3, math.inf).accepts(sigma), [True, True, True])
    np.testing.assert_array_equal(ConditionCeiling(3.0).accepts(sigma), [True, True, False])


# ---------------------------------------------------------------------
# Landmarks
# ---------------------------------------------------------------------

def test_landmarks_exact_values():
    by_name = {lm.name: lm for lm in qaxis_landmarks()}
    assert list(by_name) == ["P1", "O", "P2", "P3", "P4"]

    assert by_name["P1"].p == pytest.approx(-1 / math.sqrt(3), abs=1e-12)
    assert by_name["P2"].rho == pytest.approx(math.sqrt(1.5), abs=1e-12)
    assert by_name["P3"].rho == pytest.approx(2 / math.sqrt(3), abs=1e-12)
    assert by_name["P4"].chi_infinite and by_name["P4"].det_j == 0.0
    assert by_name["O"].det_j == 1.0

    for lm in by_name.values():
        if lm.chi is not None:
            assert p_from_chi(lm.chi) == pytest.approx(lm.p, abs=1e-12)
            assert rho_from_chi(lm.chi) == pytest.approx(lm.rho, abs=1e-12)
