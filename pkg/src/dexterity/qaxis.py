"""
qaxis.py

Closed-form dexterity along the Q-axis (the first-octant bisector px = py = pz).

On this line the inverse Jacobian is symmetric and depends on one
dimensionless parameter

    chi = -p / sqrt(L^2 - 2 p^2),   p = -chi L / sqrt(1 + 2 chi^2),
                                    rho = (1 - chi) L / sqrt(1 + 2 chi^2)

so J^-1 has ones on the diagonal and chi elsewhere, with eigenvalues
1 + 2chi and (twice) 1 - chi. The singularity-free stretch of the axis is
chi in (-0.5, 1). The joint-limit solvers below turn a dexterity bound into
an interval [chi1, chi2] around the isotropic point chi = 0; the Q-axis
points at its ends are Q+ (chi1, nearer the flat singularity) and Q- (chi2).
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from dexterity.bounds import (
    ConditionCeiling,
    DexterityBound,
    ManipulabilityFloor,
    SymmetricFactor,
    TransmissionInterval,
)
from kinematics.errors import InvalidBoundError, OutOfRangeError, ParallelSingularityError
from kinematics.geometry import UNIT_GEOMETRY, Geometry

CHI_LOWER = -0.5    # P2, flat parallel singularity
CHI_UPPER = 1.0     # P1, rho = 0


# ---------------------------------------------------------------------
# Parameterisation
# ---------------------------------------------------------------------

def chi_from_p(p: float, g: Geometry = UNIT_GEOMETRY) -> float:
    L = float(g.link_length)
    if abs(p) >= L / math.sqrt(2.0):
        raise OutOfRangeError(f"|p| must be < L/sqrt(2) on the Q-axis (serial singularity), got p={p}.")
    return -p / math.sqrt(L * L - 2.0 * p * p)


def p_from_chi(chi: float, g: Geometry = UNIT_GEOMETRY) -> float:
    if not math.isfinite(chi):
        raise OutOfRangeError("chi must be finite.")
    return -chi * g.link_length / math.sqrt(1.0 + 2.0 * chi * chi)


def rho_from_chi(chi: float, g: Geometry = UNIT_GEOMETRY) -> float:
    if not math.isfinite(chi):
        raise OutOfRangeError("chi must be finite.")
    return (1.0 - chi) * g.link_length / math.sqrt(1.0 + 2.0 * chi * chi)


def p_from_rho(rho: float, g: Geometry = UNIT_GEOMETRY) -> float:
    """Common Cartesian coordinate of the Q-axis point whose three joints all equal rho."""
    L = float(g.link_length)
    if not 0.0 < rho < math.sqrt(1.5) * L:
        raise OutOfRangeError(f"rho must lie in (0, sqrt(1.5) L) on the Q-axis, got {rho}.")
    return (rho - math.sqrt(3.0 * L * L - 2.0 * rho * rho)) / 3.0


def chi_from_rho(rho: float, g: Geometry = UNIT_GEOMETRY) -> float:
    return chi_from_p(p_from_rho(rho, g), g)


@dataclass(frozen=True)
class QAxisPoint:
    chi: float
    p: float
    rho: float


# ---------------------------------------------------------------------
# Dexterity indices
# ---------------------------------------------------------------------

def qaxis_inverse_jacobian(chi: float) -> np.ndarray:
    M = np.full((3, 3), float(chi))
    np.fill_diagonal(M, 1.0)
    return M


def qaxis_eigenvalues(chi: float) -> tuple[float, float, float]:
    return 1.0 + 2.0 * chi, 1.0 - chi, 1.0 - chi


def manipulability(chi: float) -> float:
    """w = (1 - chi)^2 |1 + 2 chi|; equals |det J^-1| on the Q-axis."""
    return (1.0 - chi) ** 2 * abs(1.0 + 2.0 * chi)


def condition_number(chi: float) -> float:
    if not CHI_LOWER < chi < CHI_UPPER:
        raise ParallelSingularityError(f"condition number is unbounded for chi={chi} outside (-0.5, 1).")
    if chi > 0.0:
        return (1.0 + 2.0 * chi) / (1.0 - chi)
    return (1.0 - chi) / (1.0 + 2.0 * chi)


# ---------------------------------------------------------------------
# Joint-limit solvers: bound -> [chi1, chi2]
# ---------------------------------------------------------------------

def chi_range_for_manipulability(delta: float) -> tuple[float, float]:
    """
    Roots of 2 chi^3 - 3 chi^2 + (1 - delta) = 0 on either side of zero.

    The cubic always has three real roots for 0 < delta < 1, so the
    trigonometric form applies: chi = 0.5 + cos(phi/3 - 2 pi k / 3) with
    phi = arccos(2 delta - 1). One root sits above 1 and is discarded.
    """
    ManipulabilityFloor(delta)  # validates
    phi = math.acos(2.0 * delta - 1.0)
    roots = sorted(0.5 + math.cos(phi / 3.0 - 2.0 * math.pi * k / 3.0) for k in range(3))

    # roots[0] in [-0.5, 0], roots[1] in [0, 1), roots[2] in (1, 1.5]
    chi1, chi2 = min(roots[0], 0.0), max(roots[1], 0.0)
    if not (CHI_LOWER <= chi1 and chi2 < CHI_UPPER):
        raise ArithmeticError(f"cubic root selection failed for delta={delta}: roots={roots}")
    return chi1, chi2


def chi_range_for_condition(delta: float) -> tuple[float, float]:
    if isinstance(delta, (int, float)) and math.isinf(delta) and delta > 0:
        return CHI_LOWER, CHI_UPPER
    ConditionCeiling(delta)
    return -(delta - 1.0) / (2.0 * delta + 1.0), (delta - 1.0) / (delta + 2.0)


def chi_range_for_transmission(lam_min: float, lam_max: float) -> tuple[float, float]:
    """
    Bounds both eigenvalue families 1 + 2chi and 1 - chi of J^-1 to [lam_min, lam_max].

    For a symmetric interval [mu, 1/mu] this is the same as bounding the
    transmission factors (their reciprocals).
    """
    TransmissionInterval(lam_min, lam_max)
    chi1 = max(1.0 - lam_max, (lam_min - 1.0) / 2.0)
    chi2 = min(1.0 - lam_min, (lam_max - 1.0) / 2.0)
    return chi1, chi2


def chi_range_for_bound(bound: DexterityBound) -> tuple[float, float]:
    if isinstance(bound, ManipulabilityFloor):
        return chi_range_for_manipulability(bound.delta)
    if isinstance(bound, ConditionCeiling):
        return chi_range_for_condition(bound.delta)
    if isinstance(bound, TransmissionInterval):
        return chi_range_for_transmission(bound.lam_min, bound.lam_max)
    if isinstance(bound, SymmetricFactor):
        return chi_range_for_transmission(bound.mu, 1.0 / bound.mu)
    raise InvalidBoundError(f"unsupported dexterity bound: {bound!r}")


@dataclass(frozen=True)
class QAxisDesign:
    """Q-axis joint limits and the matching Cartesian interval for one bound."""

    chi1: float
    chi2: float
    rho_min: float
    rho_max: float
    p_min: float
    p_max: float

    @property
    def q_plus(self) -> QAxisPoint:
        return QAxisPoint(self.chi1, self.p_max, self.rho_max)

    @property
    def q_minus(self) -> QAxisPoint:
        return QAxisPoint(self.chi2, self.p_min, self.rho_min)


def qaxis_design(bound: DexterityBound, g: Geometry = UNIT_GEOMETRY) -> QAxisDesign:
    """rho_min = rho(chi2), rho_max = rho(chi1), p_min = p(chi2), p_max = p(chi1)."""
    chi1, chi2 = chi_range_for_bound(bound)
    return QAxisDesign(
        chi1=chi1,
        chi2=chi2,
        rho_min=rho_from_chi(chi2, g),
        rho_max=rho_from_chi(chi1, g),
        p_min=p_from_chi(chi2, g),
        p_max=p_from_chi(chi1, g),
    )


# ---------------------------------------------------------------------
# Landmarks
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class QAxisLandmark:
    name: str
    p: float
    rho: float
    chi: float | None           # None when infinite
    chi_infinite: bool
    det_j: float | None         # det(J), None when infinite
    det_j_infinite: bool


def qaxis_landmarks(g: Geometry = UNIT_GEOMETRY) -> list[QAxisLandmark]:
    """Singular and isotropic points of the Q-axis, scaled by L."""
    L = float(g.link_length)
    return [
        QAxisLandmark("P1", -math.sqrt(1.0 / 3.0) * L, 0.0, 1.0, False, None, True),
        QAxisLandmark("O", 0.0, L, 0.0, False, 1.0, False),
        QAxisLandmark("P2", math.sqrt(1.0 / 6.0) * L, math.sqrt(1.5) * L, -0.5, False, None, True),
        QAxisLandmark("P3", math.sqrt(1.0 / 3.0) * L, math.sqrt(4.0 / 3.0) * L, -1.0, False, None, True),
        QAxisLandmark("P4", math.sqrt(0.5) * L, math.sqrt(0.5) * L, None, True, 0.0, False),
    ]
