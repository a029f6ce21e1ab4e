"""
scans.py

Grid-based evaluations:

  - grid_scan_mu       : factor extremes over W_rho on a joint-space grid (DK branch m = -1)
  - contour_data       : closed-form global factors over the (rho_min, rho_max) rectangle,
                         plus the region-boundary and symmetric-design loci
  - joint_limit_curves : joint limits against the factor bound, symmetric and one-sided
  - cube_factor_range  : factor extremes over a design's cube
  - offset_sensitivity : the same with a joint encoder offset applied
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence
import logging
import math

import numpy as np
import pandas as pd

from dexterity.bounds import SymmetricFactor
from dexterity.critical_points import (
    JointLimitPair,
    global_mu_max,
    global_mu_min,
    joint_limits_for_bounds,
    joint_limits_symmetric,
    phi_qq_parametric,
    phi_rq_parametric,
)
from dexterity.qaxis import qaxis_design
from explorer.factors import FactorRange, factor_extremes, singular_values_batch
from kinematics.errors import InvalidBoundError, ParallelSingularityError
from kinematics.orthoglide import direct_kinematics_batch, inverse_kinematics_batch
from synthesis.strategies import DesignResult

logger = logging.getLogger(__name__)

SQRT_1_5 = math.sqrt(1.5)
CONTOUR_COLUMNS = ["rho_min", "rho_max", "mu_min", "mu_max", "kind_min", "kind_max"]


@dataclass(frozen=True)
class GridScan:
    factors: FactorRange
    argmin_joints: tuple[float, float, float]
    argmin_point: tuple[float, float, float]
    argmax_joints: tuple[float, float, float]
    argmax_point: tuple[float, float, float]
    nodes: int


def grid_scan_mu(limits: JointLimitPair, resolution: int = 41) -> GridScan:
    """Dense SVD scan of W_rho: every node of a resolution^3 joint grid, mapped through DK."""
    if not isinstance(resolution, int) or resolution < 21:
        raise InvalidBoundError(f"resolution must be an integer >= 21, got {resolution!r}.")

    axis = np.linspace(limits.rho_min, limits.rho_max, resolution)
    R = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)
    P = direct_kinematics_batch(R, m=-1)
    sigma = singular_values_batch(P, R)

    finite = np.all(np.isfinite(sigma), axis=1)
    if not finite.all():
        logger.warning("grid scan: %d of %d nodes skipped (no regular DK solution)",
                       int((~finite).sum()), len(R))

    factors = factor_extremes(sigma)
    s_max = np.where(finite, sigma[:, 0], -np.inf)
    s_min = np.where(finite, sigma[:, -1], np.inf)
    i_lo = int(np.argmax(s_max))     # smallest factor
    i_hi = int(np.argmin(s_min))     # largest factor

    return GridScan(
        factors=factors,
        argmin_joints=tuple(R[i_lo].tolist()),
        argmin_point=tuple(P[i_lo].tolist()),
        argmax_joints=tuple(R[i_hi].tolist()),
        argmax_point=tuple(P[i_hi].tolist()),
        nodes=len(R),
    )


# ---------------------------------------------------------------------
# Contour tables
# ---------------------------------------------------------------------

def _closed_form_row(rho_min: float, rho_max: float, locus: str) -> dict:
    row = {"rho_min": rho_min, "rho_max": rho_max, "locus": locus}
    try:
        limits = JointLimitPair(rho_min, rho_max)
    except InvalidBoundError:
        return {**row, "mu_min": math.nan, "mu_max": math.nan, "kind_min": "", "kind_max": ""}
    mu_lo, kind_lo = global_mu_min(limits)
    mu_hi, kind_hi = global_mu_max(limits)
    return {**row, "mu_min": mu_lo, "mu_max": mu_hi, "kind_min": kind_lo, "kind_max": kind_hi}


def contour_data(grid_n: int = 50) -> pd.DataFrame:
    """
    Closed-form global factors on a grid_n x grid_n grid of (0, 1] x [1, sqrt(1.5)),
    followed by rows flagged in column 'locus' for phi_QQ, phi_RQ and the symmetric
    designs (whole W_rho and Q-axis only).
    """
    if not isinstance(grid_n, int) or grid_n < 2:
        raise InvalidBoundError(f"grid_n must be an integer >= 2, got {grid_n!r}.")

    rho_mins = np.linspace(0.0, 1.0, grid_n + 1)[1:]
    rho_maxs = np.linspace(1.0, SQRT_1_5, grid_n + 1)[:-1]
    rows = [_closed_form_row(float(a), float(b), "grid") for b in rho_maxs for a in rho_mins]

    for chi in np.linspace(0.0, 0.25, grid_n, endpoint=False):
        rows.append(_closed_form_row(*phi_qq_parametric(float(chi)), "phi_qq"))
    for chi in np.linspace(0.0, -0.5, grid_n, endpoint=False):
        rows.append(_closed_form_row(*phi_rq_parametric(float(chi)), "phi_rq"))
    for mu in np.linspace(0.1, 0.99, grid_n):
        limits = joint_limits_symmetric(float(mu))
        rows.append(_closed_form_row(limits.rho_min, limits.rho_max, "symmetric"))
        q = qaxis_design(SymmetricFactor(float(mu)))
        rows.append(_closed_form_row(q.rho_min, q.rho_max, "qaxis_symmetric"))

    return pd.DataFrame(rows, columns=CONTOUR_COLUMNS + ["locus"])


def joint_limit_curves(mu_values: Sequence[float]) -> pd.DataFrame:
    """
    Joint limits against mu for:
      - symmetric bounds [mu, 1/mu] over W_rho and along the Q-axis only
      - a lower bound mu alone and an upper bound 1/mu alone (the other side left loose)
    """
    rows = []
    for mu in mu_values:
        mu = float(mu)
        whole = joint_limits_symmetric(mu)
        q = qaxis_design(SymmetricFactor(mu))
        lower_only = joint_limits_for_bounds(mu, 1e6)
        upper_only = joint_limits_for_bounds(1e-6, 1.0 / mu)
        rows.append({
            "mu": mu,
            "rho_min_symmetric": whole.rho_min,
            "rho_max_symmetric": whole.rho_max,
            "rho_min_qaxis": q.rho_min,
            "rho_max_qaxis": q.rho_max,
            "rho_min_lower_only": lower_only.rho_min,
            "rho_max_lower_only": lower_only.rho_max,
            "rho_min_upper_only": upper_only.rho_min,
            "rho_max_upper_only": upper_only.rho_max,
        })
    return pd.DataFrame(rows)


# ---------------------------------------------------------------------
# Cube evaluations
# ---------------------------------------------------------------------

def _cube_points(design: DesignResult, samples_per_axis: int) -> np.ndarray:
    axis = np.linspace(design.p_min, design.p_max, samples_per_axis) / design.link_length
    return np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)


def offset_sensitivity(
    design: DesignResult,
    offset: float | Sequence[float],
    samples_per_axis: int = 11,
) -> FactorRange:
    """
    Factor range over the commanded cube when every encoder reads `offset` too low.

    Commanded points go through IK; the actuators then sit at rho + offset, so the
    tool really is at DK(rho + offset). A scalar offset is applied to all three
    joints; a 3-vector gives per-axis offsets. Units are those of the design.
    """
    delta = np.broadcast_to(np.asarray(offset, dtype=float), (3,))
    if np.any(delta < 0) and np.ndim(offset) == 0:
        raise InvalidBoundError(f"offset must be >= 0, got {offset!r}.")
    if not isinstance(samples_per_axis, int) or samples_per_axis < 2:
        raise InvalidBoundError("samples_per_axis must be an integer >= 2.")

    P_cmd = _cube_points(design, samples_per_axis)
    R = inverse_kinematics_batch(P_cmd) + delta / design.link_length
    P = direct_kinematics_batch(R, m=-1)

    if not np.all(np.isfinite(P)):
        raise ParallelSingularityError(f"offset {offset!r} pushes part of the cube past a singularity.")
    sigma = singular_values_batch(P, R)
    if not np.all(np.isfinite(sigma)):
        raise ParallelSingularityError(f"offset {offset!r} reaches a serial singularity.")
    return factor_extremes(sigma)


def cube_factor_range(design: DesignResult, samples_per_axis: int = 21) -> FactorRange:
    """Factor range over a dense grid of the design's cube."""
    return offset_sensitivity(design, 0.0, samples_per_axis)
