"""
critical_points.py

Global velocity transmission factors over the joint-bounded workspace W_rho
(all three joints in [rho_min, rho_max]) of the unit manipulator.

Extremes of the factors over W_rho are taken at a handful of boundary points
(on some faces the true minimum lies slightly below, within 1%), named by
where they sit on the boundary:

  - Q (vertex) : on the Q-axis, all joints equal rho
  - R (edge)   : two joints equal rho, the point lies in a coordinate plane
  - S (face)   : one joint equals rho, the point lies on a coordinate axis

with "-" for rho = rho_min and "+" for rho = rho_max. The global minimum
factor is bound by S-, R-, Q- or Q+; the global maximum by R- or Q+.

This module provides:
  1) the critical points with closed-form singular values
  2) global_mu_min / global_mu_max for a joint-limit pair
  3) the region boundary curves phi_QQ, phi_RQ and constants rho_SR, rho_RQ, mu*
  4) joint limits from factor bounds (general and symmetric)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal
import logging
import math

import numpy as np
from scipy.optimize import brentq

from dexterity.qaxis import p_from_rho, rho_from_chi
from kinematics.errors import InvalidBoundError, OutOfRangeError
from kinematics.geometry import CartesianPoint, JointVector

logger = logging.getLogger(__name__)

SQRT_1_5 = math.sqrt(1.5)
SQRT_0_5 = math.sqrt(0.5)

CriticalKind = Literal["S-", "R-", "Q-", "Q+"]


# ---------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalPoint:
    kind: Literal["Q", "R", "S"]
    sign: Literal["+", "-"]
    chi: float
    cartesian: CartesianPoint
    joints: JointVector
    singular_values: tuple[float, float, float]

    @property
    def factors(self) -> tuple[float, float, float]:
        return tuple(1.0 / s for s in self.singular_values)  # type: ignore[return-value]

    @property
    def mu_min(self) -> float:
        return 1.0 / max(self.singular_values)

    @property
    def mu_max(self) -> float:
        return 1.0 / min(self.singular_values)

    @property
    def label(self) -> str:
        return f"{self.kind}{self.sign}"


@dataclass(frozen=True)
class JointLimitPair:
    rho_min: float
    rho_max: float

    def __post_init__(self) -> None:
        for name in ("rho_min", "rho_max"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise InvalidBoundError(f"{name} must be a finite real number, got {v!r}.")
        if not 0.0 < self.rho_min <= 1.0:
            raise InvalidBoundError(f"rho_min must lie in (0, 1], got {self.rho_min}.")
        if not 1.0 <= self.rho_max < SQRT_1_5:
            raise InvalidBoundError(f"rho_max must lie in [1, sqrt(1.5)), got {self.rho_max}.")

    @property
    def delta_rho(self) -> float:
        return self.rho_max - self.rho_min


def _sign_for(rho: float) -> Literal["+", "-"]:
    return "-" if rho < 1.0 else "+"


# ---------------------------------------------------------------------
# 1) Critical points
# ---------------------------------------------------------------------

def q_vertex(rho: float) -> CriticalPoint:
    """Q-axis point with all joints equal to rho; singular values 1+2chi, 1-chi, 1-chi."""
    if not 0.0 < rho < SQRT_1_5:
        raise OutOfRangeError(f"Q vertex needs rho in (0, sqrt(1.5)), got {rho}.")
    p = p_from_rho(rho)
    chi = -p / math.sqrt(1.0 - 2.0 * p * p)
    return CriticalPoint(
        kind="Q",
        sign=_sign_for(rho),
        chi=chi,
        cartesian=CartesianPoint(p, p, p),
        joints=JointVector(rho, rho, rho),
        singular_values=(abs(1.0 + 2.0 * chi), abs(1.0 - chi), abs(1.0 - chi)),
    )


def r_edge(rho: float) -> CriticalPoint:
    """
    Edge point (p, p, 0) with joints (rho, rho, rho').

    J^-1 rows are [1, chi, 0], [chi, 1, 0], [c, c, 1] with c = chi / sqrt(1 - chi^2).
    One singular value is 1 - chi; the other two come from the symmetric 2x2 block
    of J^-1 J^-T with trace A = (1+chi)^2 + (1+chi^2)/(1-chi^2) and determinant B = (1+chi)^2.
    """
    if not 0.0 < rho < math.sqrt(2.0):
        raise OutOfRangeError(f"R edge needs rho in (0, sqrt(2)), got {rho}.")
    p = (rho - math.sqrt(2.0 - rho * rho)) / 2.0
    chi = -p / math.sqrt(1.0 - p * p)
    rho3 = (rho * rho * (2.0 - rho * rho)) ** 0.25

    A = (1.0 + chi) ** 2 + (1.0 + chi * chi) / (1.0 - chi * chi)
    B = (1.0 + chi) ** 2
    root = math.sqrt(max(A * A - 4.0 * B, 0.0))
    lam2 = math.sqrt((A + root) / 2.0)
    lam3 = math.sqrt(max((A - root) / 2.0, 0.0))

    return CriticalPoint(
        kind="R",
        sign=_sign_for(rho),
        chi=chi,
        cartesian=CartesianPoint(p, p, 0.0),
        joints=JointVector(rho, rho, rho3),
        singular_values=(abs(1.0 - chi), lam2, lam3),
    )


def s_face(rho: float) -> CriticalPoint:
    """
    Face point (rho - 1, 0, 0) with joints (rho, rho', rho'), rho' = sqrt(rho (2 - rho)).

    Singular values 1 and sqrt((1 + chi^2) +- |chi| sqrt(2 + chi^2)), whose product is 1.
    """
    if not 0.0 < rho < 2.0:
        raise OutOfRangeError(f"S face needs rho in (0, 2), got {rho}.")
    p = rho - 1.0
    chi = -p / math.sqrt(1.0 - p * p)
    other = math.sqrt(rho * (2.0 - rho))

    a = 1.0 + chi * chi
    b = abs(chi) * math.sqrt(2.0 + chi * chi)
    lam2 = math.sqrt(a + b)
    lam3 = 1.0 / lam2

    return CriticalPoint(
        kind="S",
        sign=_sign_for(rho),
        chi=chi,
        cartesian=CartesianPoint(p, 0.0, 0.0),
        joints=JointVector(rho, other, other),
        singular_values=(1.0, lam2, lam3),
    )


# ---------------------------------------------------------------------
# 2) Global factors over W_rho
# ---------------------------------------------------------------------

def q_factor_reciprocal_first(rho: float) -> float:
    """
    1 / (1 + 2 chi) at the Q vertex, in closed form:

        1/3 + 2 rho / (3 sqrt(3 - 2 rho^2))

    This is the minimum factor at Q- (rho < 1) and the maximum factor at Q+ (rho > 1).
    """
    return 1.0 / 3.0 + 2.0 * rho / (3.0 * math.sqrt(3.0 - 2.0 * rho * rho))


def q_plus_mu_min(rho_max: float) -> float:
    """1 / (1 - chi) at Q+: 2/3 + sqrt(3 - 2 rho^2) / (3 rho)."""
    return 2.0 / 3.0 + math.sqrt(3.0 - 2.0 * rho_max * rho_max) / (3.0 * rho_max)


def r_minus_mu_max(rho_min: float) -> float:
    """1 / (1 - chi) at R-: 1/2 + sqrt(2 - rho^2) / (2 rho)."""
    return 0.5 + math.sqrt(2.0 - rho_min * rho_min) / (2.0 * rho_min)


def global_mu_min(limits: JointLimitPair) -> tuple[float, CriticalKind]:
    """Smallest transmission factor over W_rho and the critical point attaining it."""
    candidates: list[tuple[float, CriticalKind]] = [
        (q_factor_reciprocal_first(limits.rho_min), "Q-"),
        (r_edge(limits.rho_min).mu_min, "R-"),
        (s_face(limits.rho_min).mu_min, "S-"),
        (q_plus_mu_min(limits.rho_max), "Q+"),
    ]
    value, kind = min(candidates, key=lambda c: c[0])
    return min(value, 1.0), kind


def global_mu_max(limits: JointLimitPair) -> tuple[float, CriticalKind]:
    """Largest transmission factor over W_rho and the critical point attaining it."""
    candidates: list[tuple[float, CriticalKind]] = [
        (r_minus_mu_max(limits.rho_min), "R-"),
        (q_factor_reciprocal_first(limits.rho_max), "Q+"),
    ]
    value, kind = max(candidates, key=lambda c: c[0])
    return max(value, 1.0), kind


# ---------------------------------------------------------------------
# 3) Region boundaries
# ---------------------------------------------------------------------

def _qaxis_chi_for_rho(rho: float) -> float:
    # (rho sqrt(3 - 2 rho^2) - 1) / (2 rho^2 - 1), pole-free for rho >= 1
    return (rho * math.sqrt(max(3.0 - 2.0 * rho * rho, 0.0)) - 1.0) / (2.0 * rho * rho - 1.0)


def _check_upper_limit(rho_max: float) -> None:
    if not 1.0 <= rho_max <= SQRT_1_5:
        raise OutOfRangeError(f"rho_max must lie in [1, sqrt(1.5)], got {rho_max}.")


def phi_qq_parametric(chi: float) -> tuple[float, float]:
    """(rho_min, rho_max) on the curve where Q- and Q+ give the same minimum factor, chi in [0, 1/4]."""
    if not 0.0 <= chi <= 0.25:
        raise OutOfRangeError(f"phi_QQ parameter must lie in [0, 0.25], got {chi}.")
    return (1.0 - chi) / math.sqrt(1.0 + 2.0 * chi * chi), (1.0 + 2.0 * chi) / math.sqrt(1.0 + 8.0 * chi * chi)


def phi_qq_explicit(rho_min: float) -> float:
    """rho_max on phi_QQ as an explicit function of rho_min in [sqrt(0.5), 1]."""
    if not SQRT_0_5 - 1e-12 <= rho_min <= 1.0:
        raise OutOfRangeError(f"phi_QQ explicit form needs rho_min in [sqrt(0.5), 1], got {rho_min}.")
    s = math.sqrt(3.0 - 2.0 * rho_min * rho_min)
    return math.sqrt(3.0 * s * s / ((9.0 - 2.0 * rho_min * rho_min) - 4.0 * rho_min * s))


def phi_qq(rho_max: float) -> float:
    """rho_min on phi_QQ for a given rho_max in [1, sqrt(1.5)]."""
    _check_upper_limit(rho_max)
    chi_plus = _qaxis_chi_for_rho(rho_max)
    return rho_from_chi(-chi_plus / 2.0)


def phi_rq_parametric(chi: float) -> tuple[float, float]:
    """(rho_min, rho_max) where R- and Q+ give the same maximum factor, chi in [-1/2, 0]."""
    if not -0.5 <= chi <= 0.0:
        raise OutOfRangeError(f"phi_RQ parameter must lie in [-0.5, 0], got {chi}.")
    return (1.0 + 2.0 * chi) / math.sqrt(1.0 + 4.0 * chi * chi), (1.0 - chi) / math.sqrt(1.0 + 2.0 * chi * chi)


def phi_rq_explicit(rho_max: float) -> float:
    _check_upper_limit(rho_max)
    s = math.sqrt(max(3.0 - 2.0 * rho_max * rho_max, 0.0))
    return math.sqrt(9.0 * s * s / ((15.0 - 2.0 * rho_max * rho_max) - 4.0 * rho_max * s))


def phi_rq(rho_max: float) -> float:
    """rho_min on phi_RQ; R- binds the maximum factor for rho_min below it."""
    _check_upper_limit(rho_max)
    chi = _qaxis_chi_for_rho(rho_max)
    return (1.0 + 2.0 * chi) / math.sqrt(1.0 + 4.0 * chi * chi)


@dataclass(frozen=True)
class RegionConstants:
    rho_sr: float
    rho_rq: float
    mu_at_sr: float
    mu_at_rq: float
    mu_star: float
    rho_min_at_mu_star: float
    rho_max_at_mu_star: float


def _symmetric_rho_min_q(mu: float) -> float:
    return (3.0 * mu - 1.0) / math.sqrt(6.0 * mu * mu - 4.0 * mu + 2.0)


def _symmetric_rho_min_r(mu: float) -> float:
    return mu / math.sqrt(mu * mu - 2.0 * mu + 2.0)


def _symmetric_rho_max(mu: float) -> float:
    return (3.0 - mu) / math.sqrt(2.0 * mu * mu - 4.0 * mu + 6.0)


@lru_cache(maxsize=1)
def critical_region_boundaries() -> RegionConstants:
    """
    Switch points of the binding critical point, solved to 1e-12:

      - rho_SR: S- and R- give the same minimum factor
      - rho_RQ: R- and Q- give the same minimum factor
      - mu*:    the two symmetric lower-limit branches coincide
    """
    xtol = 1e-12
    rho_sr = brentq(lambda r: s_face(r).mu_min - r_edge(r).mu_min, 0.05, 0.2, xtol=xtol)
    rho_rq = brentq(lambda r: r_edge(r).mu_min - q_factor_reciprocal_first(r), 0.15, 0.35, xtol=xtol)
    mu_star = brentq(lambda m: _symmetric_rho_min_q(m) - _symmetric_rho_min_r(m), 0.4, 0.7, xtol=xtol)

    constants = RegionConstants(
        rho_sr=rho_sr,
        rho_rq=rho_rq,
        mu_at_sr=s_face(rho_sr).mu_min,
        mu_at_rq=q_factor_reciprocal_first(rho_rq),
        mu_star=mu_star,
        rho_min_at_mu_star=_symmetric_rho_min_q(mu_star),
        rho_max_at_mu_star=_symmetric_rho_max(mu_star),
    )
    logger.debug("region constants: %s", constants)
    return constants


# ---------------------------------------------------------------------
# 4) Joint limits from factor bounds
# ---------------------------------------------------------------------

_RHO_FLOOR = 1e-9


def _invert_increasing(f, target: float) -> float:
    """Smallest rho in (0, 1] with f(rho) >= target, for f increasing to f(1) = 1."""
    if f(_RHO_FLOOR) >= target:
        return _RHO_FLOOR
    return brentq(lambda r: f(r) - target, _RHO_FLOOR, 1.0, xtol=1e-14, rtol=4 * np.finfo(float).eps)


def joint_limits_for_bounds(mu_min: float, mu_max: float) -> JointLimitPair:
    """
    Loosest joint limits with global_mu_min >= mu_min and global_mu_max <= mu_max.

    Each critical factor depends on one limit only, so the constraints separate:
    rho_min is the largest of the lower-limit roots and rho_max the smallest of
    the upper-limit roots. Q-vertex and R-maximum roots are closed-form; the
    S- and R- minimum-factor roots are solved numerically.
    """
    for name, v in (("mu_min", mu_min), ("mu_max", mu_max)):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise InvalidBoundError(f"{name} must be a finite real number, got {v!r}.")
    if not 0.0 < mu_min < 1.0 < mu_max:
        raise InvalidBoundError(f"need 0 < mu_min < 1 < mu_max, got ({mu_min}, {mu_max}).")

    lower = {
        "S- (mu_min)": _invert_increasing(lambda r: s_face(r).mu_min, mu_min),
        "R- (mu_min)": _invert_increasing(lambda r: r_edge(r).mu_min, mu_min),
        "R- (mu_max)": 1.0 / math.sqrt(2.0 * mu_max * mu_max - 2.0 * mu_max + 1.0),
    }
    if mu_min > 1.0 / 3.0:
        lower["Q- (mu_min)"] = _symmetric_rho_min_q(mu_min)

    upper = {
        "Q+ (mu_max)": (3.0 * mu_max - 1.0) / math.sqrt(6.0 * mu_max * mu_max - 4.0 * mu_max + 2.0),
    }
    if mu_min > 2.0 / 3.0:
        upper["Q+ (mu_min)"] = 1.0 / math.sqrt(3.0 * mu_min * mu_min - 4.0 * mu_min + 2.0)

    lo_name, rho_min = max(lower.items(), key=lambda kv: kv[1])
    hi_name, rho_max = min(upper.items(), key=lambda kv: kv[1])
    logger.debug("joint limits for [%g, %g]: rho_min=%s by %s, rho_max=%s by %s",
                 mu_min, mu_max, rho_min, lo_name, rho_max, hi_name)

    return JointLimitPair(min(rho_min, 1.0), max(rho_max, 1.0))


def joint_limits_symmetric(mu: float) -> JointLimitPair:
    """
    Joint limits keeping every factor of W_rho inside [mu, 1/mu].

        rho_max = (3 - mu) / sqrt(2 mu^2 - 4 mu + 6)
        rho_min = (3 mu - 1) / sqrt(6 mu^2 - 4 mu + 2)   if mu >= mu*  (Q- binds)
                  mu / sqrt(mu^2 - 2 mu + 2)             otherwise     (R- binds)
    """
    if isinstance(mu, bool) or not isinstance(mu, (int, float)) or not 0.0 < mu < 1.0:
        raise InvalidBoundError(f"mu must lie in (0, 1), got {mu!r}.")
    mu_star = critical_region_boundaries().mu_star
    rho_min = _symmetric_rho_min_q(mu) if mu >= mu_star else _symmetric_rho_min_r(mu)
    return JointLimitPair(min(rho_min, 1.0), max(_symmetric_rho_max(mu), 1.0))


def cube_q_minus_rho(mu: float) -> float:
    """
    Lower joint limit at Q- for the cube bounded by its Q-axis vertices:

        max{ (3mu - 1)/sqrt(6mu^2 - 4mu + 2),  mu/sqrt(2mu^2 - 4mu + 3) }
    """
    if isinstance(mu, bool) or not isinstance(mu, (int, float)) or not 0.0 < mu < 1.0:
        raise InvalidBoundError(f"mu must lie in (0, 1), got {mu!r}.")
    return max(_symmetric_rho_min_q(mu), mu / math.sqrt(2.0 * mu * mu - 4.0 * mu + 3.0))
