"""
orthoglide.py

Exact kinematics of the Orthoglide simplified model.

Each leg is a bar of length L between the tool centre point p and the
carriage of a prismatic joint moving along one coordinate axis:

    (px - rx)^2 + py^2 + pz^2 = L^2      (and cyclic for y, z)

Provided here:
  1) inverse kinematics (scalar and batch) with branch signs s
  2) direct kinematics (scalar and batch) with branch index m
  3) inverse Jacobian J^-1 = d(rho)/d(p) and its closed-form determinant
  4) point classification and joint-space feasibility
  5) directional velocity transmission factor

Batch variants work on (N, 3) arrays and return NaN rows instead of raising,
so the explorer can sweep large grids without try/except per point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence
import logging

import numpy as np

from kinematics.errors import (
    NoSolutionError,
    OutOfRangeError,
    OutOfReachError,
    ParallelSingularityError,
    SerialSingularityError,
)
from kinematics.geometry import (
    DEFAULT_CONFIG,
    SING_TOL,
    UNIT_GEOMETRY,
    CartesianPoint,
    ConfigIndices,
    Geometry,
    JointVector,
    PointClass,
)

logger = logging.getLogger(__name__)

ArrayLike3 = CartesianPoint | JointVector | Sequence[float] | np.ndarray


def _vec3(v: ArrayLike3, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector, got shape {arr.shape}.")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {arr.tolist()}.")
    return arr


def _ik_radicands(p: np.ndarray, L: float) -> np.ndarray:
    """L^2 minus the sum of the two *other* squared coordinates, per axis (works on (..., 3))."""
    sq = p * p
    return L * L - (sq.sum(axis=-1, keepdims=True) - sq)


# ---------------------------------------------------------------------
# 1) Inverse kinematics
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class IKSolution:
    joints: JointVector
    serial_singular: bool
    within_joint_limits: bool


def ik_solution(
    p: ArrayLike3,
    s: ConfigIndices = DEFAULT_CONFIG,
    g: Geometry = UNIT_GEOMETRY,
) -> IKSolution:
    """
    Inverse kinematics with flags instead of exceptions for the soft conditions.

    Raises OutOfReachError only when a radicand is genuinely negative; a
    radicand within eps_sing^2 of zero is reported as serial_singular.
    """
    pv = _vec3(p, "p")
    L = float(g.link_length)

    rad = _ik_radicands(pv, L)
    if np.any(rad < -g.eps_kin**2):
        axes = [a for a, r in zip("xyz", rad) if r < 0]
        raise OutOfReachError(f"Point {pv.tolist()} is out of reach for leg(s) {axes} (L={L}).")

    rad = np.clip(rad, 0.0, None)
    rho = pv + s.signs * np.sqrt(rad)

    serial = bool(np.any(rad < g.eps_sing**2))
    within = bool(np.all(rho > 0.0) and np.all(rho <= 2.0 * L + g.eps_kin))
    return IKSolution(JointVector(*rho.tolist()), serial_singular=serial, within_joint_limits=within)


def inverse_kinematics(
    p: ArrayLike3,
    s: ConfigIndices = DEFAULT_CONFIG,
    g: Geometry = UNIT_GEOMETRY,
) -> JointVector:
    """
    Joint coordinates for Cartesian point p on branch s.

    rho_a = p_a + s_a * sqrt(L^2 - p_b^2 - p_c^2)

    Raises
    ------
    OutOfReachError
        any radicand < 0
    SerialSingularityError
        any radicand < eps_sing^2 (a link orthogonal to its axis)
    """
    sol = ik_solution(p, s, g)
    if sol.serial_singular:
        raise SerialSingularityError(f"Point {list(map(float, p))} is at a serial singularity.")
    if not sol.within_joint_limits:
        logger.debug("IK solution %s violates 0 < rho <= 2L", sol.joints)
    return sol.joints


def inverse_kinematics_batch(
    points: np.ndarray,
    g: Geometry = UNIT_GEOMETRY,
    signs: Sequence[int] = (1, 1, 1),
) -> np.ndarray:
    """(N, 3) Cartesian points -> (N, 3) joints; rows out of reach are NaN."""
    P = np.asarray(points, dtype=float).reshape(-1, 3)
    rad = _ik_radicands(P, float(g.link_length))
    out = P + np.asarray(signs, dtype=float) * np.sqrt(np.clip(rad, 0.0, None))
    out[np.any(rad < 0.0, axis=1)] = np.nan
    return out


def joints_within_limits(r: ArrayLike3, g: Geometry = UNIT_GEOMETRY) -> bool:
    """Hardware joint constraint 0 < rho_a <= 2L on every axis."""
    rv = _vec3(r, "r")
    return bool(np.all(rv > 0.0) and np.all(rv <= 2.0 * g.link_length + g.eps_kin))


# ---------------------------------------------------------------------
# 2) Direct kinematics
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class JointSpaceCheck:
    feasible: bool
    expression: float       # (sum rho^2 - 4L^2) * sum rho^-2, feasible iff <= 1
    discriminant: float     # B^2 - 4AC of the direct-kinematics quadratic


def _dk_coefficients(R: np.ndarray, L: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rx, ry, rz = R[..., 0], R[..., 1], R[..., 2]
    prod2 = (rx * ry * rz) ** 2
    A = (rx * ry) ** 2 + (rx * rz) ** 2 + (ry * rz) ** 2
    B = prod2
    C = ((R * R).sum(axis=-1) - 4.0 * L * L) * prod2 / 4.0
    return A, B, C


def joint_space_feasible(r: ArrayLike3, g: Geometry = UNIT_GEOMETRY) -> JointSpaceCheck:
    """Whether the direct kinematics has a real solution for joints r."""
    rv = _vec3(r, "r")
    if np.any(rv <= 0.0):
        raise OutOfRangeError(f"Joint coordinates must be positive, got {rv.tolist()}.")
    L = float(g.link_length)

    expression = float(((rv * rv).sum() - 4.0 * L * L) * (1.0 / (rv * rv)).sum())
    A, B, C = _dk_coefficients(rv, L)
    disc = float(B * B - 4.0 * A * C)
    return JointSpaceCheck(feasible=expression <= 1.0, expression=expression, discriminant=disc)


def direct_kinematics(
    r: ArrayLike3,
    m: int = -1,
    g: Geometry = UNIT_GEOMETRY,
) -> CartesianPoint:
    """
    Tool position for joints r on branch m.

        p_a = rho_a / 2 + t / rho_a,   t = (-B + m * sqrt(B^2 - 4AC)) / (2A)

    Raises
    ------
    OutOfRangeError            any rho <= 0
    NoSolutionError            negative discriminant
    ParallelSingularityError   both branches coincide (discriminant ~ 0)
    """
    if m not in (-1, 1):
        raise ValueError(f"m must be -1 or +1, got {m!r}.")
    check = joint_space_feasible(r, g)
    rv = np.asarray(r, dtype=float)

    # 1 - expression is the discriminant normalised by B^2
    ratio = 1.0 - check.expression
    if ratio < -SING_TOL:
        raise NoSolutionError(f"Joints {rv.tolist()} admit no assembly (expression={check.expression:.6g}).")
    if abs(ratio) < SING_TOL:
        raise ParallelSingularityError(f"Joints {rv.tolist()} are at a parallel singularity.")

    A, B, _ = _dk_coefficients(rv, float(g.link_length))
    t = (-B + m * np.sqrt(max(check.discriminant, 0.0))) / (2.0 * A)
    p = rv / 2.0 + t / rv
    return CartesianPoint(*p.tolist())


def direct_kinematics_batch(
    joints: np.ndarray,
    m: int = -1,
    g: Geometry = UNIT_GEOMETRY,
) -> np.ndarray:
    """(N, 3) joints -> (N, 3) points; infeasible or non-positive rows are NaN."""
    R = np.asarray(joints, dtype=float).reshape(-1, 3)
    A, B, C = _dk_coefficients(R, float(g.link_length))
    disc = B * B - 4.0 * A * C
    bad = (disc < 0.0) | np.any(R <= 0.0, axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = (-B + m * np.sqrt(np.clip(disc, 0.0, None))) / (2.0 * A)
        P = R / 2.0 + t[:, None] / R
    P[bad] = np.nan
    return P


def branch_index(r: ArrayLike3, p: ArrayLike3) -> int:
    """sgn(px/rx + py/ry + pz/rz - 1); zero means the flat parallel singularity."""
    rv = _vec3(r, "r")
    pv = _vec3(p, "p")
    value = float((pv / rv).sum() - 1.0)
    if abs(value) < SING_TOL:
        raise ParallelSingularityError("Point lies on the flat singularity surface; branch index undefined.")
    return 1 if value > 0 else -1


# ---------------------------------------------------------------------
# 3) Inverse Jacobian
# ---------------------------------------------------------------------

def inverse_jacobian(p: ArrayLike3, r: ArrayLike3) -> np.ndarray:
    """
    J^-1 = d(rho)/d(p): ones on the diagonal, p_b / (p_a - rho_a) off the diagonal of row a.
    """
    pv = _vec3(p, "p")
    rv = _vec3(r, "r")
    d = pv - rv
    if np.any(np.abs(d) < SING_TOL):
        raise SerialSingularityError(f"Link orthogonal to its axis at p={pv.tolist()}.")
    M = np.tile(pv, (3, 1)) / d[:, None]
    np.fill_diagonal(M, 1.0)
    return M


def inverse_jacobian_batch(points: np.ndarray, joints: np.ndarray) -> np.ndarray:
    """Stacked inverse Jacobians, shape (N, 3, 3). Serial-singular rows come out inf/NaN."""
    P = np.asarray(points, dtype=float).reshape(-1, 3)
    R = np.asarray(joints, dtype=float).reshape(-1, 3)
    with np.errstate(divide="ignore", invalid="ignore"):
        M = P[:, None, :] / (P - R)[:, :, None]
    idx = np.arange(3)
    M[:, idx, idx] = 1.0
    return M


def inverse_jacobian_det(p: ArrayLike3, r: ArrayLike3) -> float:
    """
    Closed-form det(J^-1):

        (px ry rz + rx py rz + rx ry pz - rx ry rz) / ((px-rx)(py-ry)(pz-rz))
    """
    pv = _vec3(p, "p")
    rv = _vec3(r, "r")
    d = pv - rv
    if np.any(np.abs(d) < SING_TOL):
        raise SerialSingularityError(f"det(J^-1) undefined at a serial singularity, p={pv.tolist()}.")
    px, py, pz = pv
    rx, ry, rz = rv
    den = d[0] * d[1] * d[2]
    return float((px * ry * rz + rx * py * rz + rx * ry * pz - rx * ry * rz) / den)


def transmission_factor(p: ArrayLike3, r: ArrayLike3, direction: ArrayLike3) -> float:
    """Velocity transmission factor along a Cartesian direction: 1 / ||J^-1 e||, e normalised."""
    e = _vec3(direction, "direction")
    n = np.linalg.norm(e)
    if n == 0.0:
        raise ValueError("direction must be non-zero.")
    v = inverse_jacobian(p, r) @ (e / n)
    speed = float(np.linalg.norm(v))
    if speed < SING_TOL:
        raise ParallelSingularityError("Direction is in the null space of J^-1.")
    return 1.0 / speed


# ---------------------------------------------------------------------
# 4) Classification
# ---------------------------------------------------------------------

def classify_cartesian_point(p: ArrayLike3, g: Geometry = UNIT_GEOMETRY) -> PointClass:
    """
    Number of inverse kinematic solutions with every rho in (0, 2L]:

      - inside the sphere of radius L           -> UniqueIK
      - on that sphere (within eps_sing)        -> SerialSingular
      - outside it, inside all three cylinders,
        strictly in the first octant            -> EightIK
      - anything else                           -> OutsideWorkspace
    """
    pv = _vec3(p, "p")
    L = float(g.link_length)

    if np.any(_ik_radicands(pv, L) < -g.eps_kin**2):
        return PointClass.OUTSIDE_WORKSPACE

    norm = float(np.linalg.norm(pv))
    if abs(norm - L) <= g.eps_sing:
        return PointClass.SERIAL_SINGULAR
    if norm < L:
        return PointClass.UNIQUE_IK
    if np.all(pv > 0.0):
        return PointClass.EIGHT_IK
    return PointClass.OUTSIDE_WORKSPACE
