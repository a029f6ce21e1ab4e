import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from kinematics.errors import (
    InvalidBoundError,
    NoSolutionError,
    OutOfRangeError,
    OutOfReachError,
    ParallelSingularityError,
    SerialSingularityError,
)
from kinematics.geometry import ConfigIndices, Geometry, PointClass
from kinematics.orthoglide import (
    branch_index,
    classify_cartesian_point,
    direct_kinematics,
    direct_kinematics_batch,
    ik_solution,
    inverse_jacobian,
    inverse_jacobian_det,
    inverse_kinematics,
    inverse_kinematics_batch,
    joint_space_feasible,
    joints_within_limits,
    transmission_factor,
)

coord = st.floats(min_value=-0.55, max_value=0.55, allow_nan=False)


def _regular(p):
    """Inside the ball, joints positive, below the flat singularity."""
    p = np.asarray(p)
    if np.linalg.norm(p) >= 0.9:
        return None
    r = np.asarray(inverse_kinematics(p))
    if np.any(r < 0.05) or (p / r).sum() > 0.95:
        return None
    return r


# ---------------------------------------------------------------------
# Inverse kinematics
# ---------------------------------------------------------------------

def test_ik_isotropic_point():
    assert inverse_kinematics((0.0, 0.0, 0.0)) == pytest.approx((1.0, 1.0, 1.0))


def test_ik_scales_with_link_length():
    assert inverse_kinematics((0.0, 0.0, 0.0), g=Geometry(2.0)) == pytest.approx((2.0, 2.0, 2.0))


def test_ik_out_of_reach():
    with pytest.raises(OutOfReachError):
        inverse_kinematics((0.8, 0.8, 0.0))


def test_ik_serial_singularity():
    with pytest.raises(SerialSingularityError):
        inverse_kinematics((0.0, 1.0, 0.0))


def test_ik_branch_signs_and_joint_limit_flag():
    sol = ik_solution((0.0, 0.0, 0.0), ConfigIndices(sx=-1))
    assert sol.joints == pytest.approx((-1.0, 1.0, 1.0))
    assert not sol.within_joint_limits
    assert not joints_within_limits(sol.joints)


def test_ik_batch_marks_unreachable_rows():
    R = inverse_kinematics_batch(np.array([[0.0, 0.0, 0.0], [0.8, 0.8, 0.0]]))
    np.testing.assert_allclose(R[0], [1.0, 1.0, 1.0])
    assert np.all(np.isnan(R[1]))


def test_config_indices_reject_zero():
    with pytest.raises(InvalidBoundError):
        ConfigIndices(sx=0)


@pytest.mark.parametrize("length", [0.0, -1.0, math.inf])
def test_geometry_rejects_bad_length(length):
    with pytest.raises(InvalidBoundError):
        Geometry(length)


# ---------------------------------------------------------------------
# Direct kinematics
# ---------------------------------------------------------------------

def test_dk_both_branches_at_unit_joints():
    assert direct_kinematics((1.0, 1.0, 1.0), m=-1) == pytest.approx((0.0, 0.0, 0.0), abs=1e-12)
    assert direct_kinematics((1.0, 1.0, 1.0), m=1) == pytest.approx((2 / 3, 2 / 3, 2 / 3))


def test_branch_index_matches_dk_branch():
    assert branch_index((1.0, 1.0, 1.0), (0.0, 0.0, 0.0)) == -1
    assert branch_index((1.0, 1.0, 1.0), (2 / 3, 2 / 3, 2 / 3)) == 1


def test_dk_no_assembly():
    assert not joint_space_feasible((0.1, 0.1, 2.0)).feasible
    with pytest.raises(NoSolutionError):
        direct_kinematics((0.1, 0.1, 2.0))


def test_dk_flat_singularity():
    rho = math.sqrt(1.5)
    assert joint_space_feasible((rho, rho, rho)).expression == pytest.approx(1.0)
    with pytest.raises(ParallelSingularityError):
        direct_kinematics((rho, rho, rho))


def test_dk_rejects_non_positive_joints():
    with pytest.raises(OutOfRangeError):
        direct_kinematics((0.0, 1.0, 1.0))


def test_dk_batch_marks_infeasible_rows():
    P = direct_kinematics_batch(np.array([[1.0, 1.0, 1.0], [0.1, 0.1, 2.0]]))
    np.testing.assert_allclose(P[0], 0.0, atol=1e-12)
    assert np.all(np.isnan(P[1]))


@settings(max_examples=200, deadline=None)
@given(coord, coord, coord)
def test_ik_dk_round_trip(px, py, pz):
    r = _regular((px, py, pz))
    assume(r is not None)
    back = direct_kinematics(r, m=-1)
    np.testing.assert_allclose(back, (px, py, pz), atol=1e-10)


def test_feasibility_agrees_with_discriminant():
    rng = np.random.default_rng(7)
    for r in rng.uniform(0.05, 2.0, size=(500, 3)):
        check = joint_space_feasible(r)
        if abs(1.0 - check.expression) > 1e-9:
            assert check.feasible == (check.discriminant >= 0.0)


# ---------------------------------------------------------------------
# Inverse Jacobian
# ---------------------------------------------------------------------

def test_inverse_jacobian_identity_at_isotropic_point():
    np.testing.assert_allclose(inverse_jacobian((0, 0, 0), (1, 1, 1)), np.eye(3))
    assert inverse_jacobian_det((0, 0, 0), (1, 1, 1)) == pytest.approx(1.0)


def test_inverse_jacobian_serial_singular():
    with pytest.raises(SerialSingularityError):
        inverse_jacobian((0.0, 1.0, 0.0), (0.0, 1.0, 1.0))


@pytest.mark.parametrize("fn", [inverse_jacobian, inverse_jacobian_det])
def test_serial_singularity_checked_per_leg(fn):
    # one leg within 1e-9 of orthogonal, the other two far from it
    with pytest.raises(SerialSingularityError):
        fn((0.0, 0.5, 0.0), (1.0, 0.5 + 1e-9, 1.0))


@settings(max_examples=200, deadline=None)
@given(coord, coord, coord)
def test_inverse_jacobian_matches_finite_differences(px, py, pz):
    p = np.array([px, py, pz])
    r = _regular(p)
    assume(r is not None)
    h = 1e-6
    fd = np.column_stack([
        (np.asarray(inverse_kinematics(p + h * e)) - np.asarray(inverse_kinematics(p - h * e))) / (2 * h)
        for e in np.eye(3)
    ])
    M = inverse_jacobian(p, r)
    np.testing.assert_allclose(M, fd, atol=1e-5)
    assert inverse_jacobian_det(p, r) == pytest.approx(np.linalg.det(M), abs=1e-10)


def test_transmission_factor_isotropic():
    for direction in [(1, 0, 0), (1, 1, 0), (1, -2, 3)]:
        assert transmission_factor((0, 0, 0), (1, 1, 1), direction) == pytest.approx(1.0)


def test_transmission_factor_within_singular_value_range():
    p = np.array([0.2, -0.1, 0.3])
    r = inverse_kinematics(p)
    s = np.linalg.svd(inverse_jacobian(p, r), compute_uv=False)
    for direction in np.random.default_rng(3).normal(size=(50, 3)):
        f = transmission_factor(p, r, direction)
        assert 1.0 / s[0] - 1e-12 <= f <= 1.0 / s[-1] + 1e-12


# ---------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------

@pytest.mark.parametrize(
    "point, expected",
    [
        ((0.0, 0.0, 0.0), PointClass.UNIQUE_IK),
        ((0.6, 0.6, 0.6), PointClass.EIGHT_IK),
        ((0.8, 0.8, 0.8), PointClass.OUTSIDE_WORKSPACE),
        ((1.0, 0.0, 0.0), PointClass.SERIAL_SINGULAR),
        ((-0.6, -0.6, -0.6), PointClass.OUTSIDE_WORKSPACE),
    ],
)
def test_classify_cartesian_point(point, expected):
    assert classify_cartesian_point(point) == expected
