"""
factors.py

Numerical velocity transmission factors: 1 / singular values of J^-1,
evaluated with numpy's SVD. This is the independent oracle the closed forms
of the dexterity package are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from kinematics.errors import InvalidBoundError, ParallelSingularityError
from kinematics.geometry import SING_TOL, UNIT_GEOMETRY, Geometry
from kinematics.orthoglide import ArrayLike3, inverse_jacobian, inverse_jacobian_batch, inverse_kinematics


@dataclass(frozen=True)
class FactorRange:
    mu_min: float
    mu_max: float

    def __post_init__(self) -> None:
        if not (0.0 < self.mu_min <= self.mu_max * (1.0 + 1e-12)):
            raise InvalidBoundError(f"invalid factor range [{self.mu_min}, {self.mu_max}].")

    def as_tuple(self) -> tuple[float, float]:
        return self.mu_min, self.mu_max

    def within(self, lo: float, hi: float, tol: float = 0.0) -> bool:
        return self.mu_min >= lo - tol and self.mu_max <= hi + tol


def factor_range_at(p: ArrayLike3, g: Geometry = UNIT_GEOMETRY) -> FactorRange:
    """Factor range at one Cartesian point on the default IK branch."""
    r = inverse_kinematics(p, g=g)
    sigma = np.linalg.svd(inverse_jacobian(p, r), compute_uv=False)
    if sigma[-1] < SING_TOL:
        raise ParallelSingularityError(f"J^-1 is singular at p={list(map(float, p))}.")
    return FactorRange(1.0 / sigma[0], 1.0 / sigma[-1])


def singular_values_batch(points: np.ndarray, joints: np.ndarray) -> np.ndarray:
    """
    Singular values (descending) of J^-1 for each (point, joints) row.

    Rows with NaN inputs or a serial singularity come back as NaN.
    """
    P = np.asarray(points, dtype=float).reshape(-1, 3)
    R = np.asarray(joints, dtype=float).reshape(-1, 3)
    out = np.full(P.shape, np.nan)

    valid = np.all(np.isfinite(P), axis=1) & np.all(np.isfinite(R), axis=1)
    valid &= np.all(np.abs(P - R) >= SING_TOL, axis=1)
    if valid.any():
        out[valid] = np.linalg.svd(inverse_jacobian_batch(P[valid], R[valid]), compute_uv=False)
    return out


def factor_extremes(sigma: np.ndarray) -> FactorRange:
    """Overall factor range of a stack of singular values (NaN rows ignored)."""
    finite = np.all(np.isfinite(sigma), axis=1)
    if not finite.any():
        raise ParallelSingularityError("no regular configuration in the sample.")
    s = sigma[finite]
    if s[:, -1].min() < SING_TOL:
        raise ParallelSingularityError("sample reaches a parallel singularity.")
    return FactorRange(float(1.0 / s[:, 0].max()), float(1.0 / s[:, -1].min()))
