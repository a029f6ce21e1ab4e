"""
strategies.py

Design synthesis for the Orthoglide: from a cube size c and a dexterity bound
to link length, joint limits and cube placement.

Two stages:
  1) joint limits and cube bounds for the unit manipulator (L = 1), by one of
     three strategies
  2) scaling by eta = c / dp so the cube edge becomes c

Strategies (each is Pareto-optimal in (L, mu_min, mu_max)):
  #1  cube vertices at the Q-axis points Q+, Q-; upper joint limit enlarged to
      1 + p(Q+) so the whole cube is reachable (may admit singularities)
  #2  Q-axis joint limits kept; largest cube inscribed in W_rho
  #3  joint limits that honour the bound over all of W_rho; largest cube inscribed
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable
import logging
import math

from dexterity.bounds import DexterityBound, SymmetricFactor
from dexterity.critical_points import (
    JointLimitPair,
    global_mu_max,
    global_mu_min,
    joint_limits_symmetric,
)
from dexterity.qaxis import QAxisDesign, chi_from_p, p_from_rho, qaxis_design
from kinematics.errors import InvalidBoundError, NotApplicableError

logger = logging.getLogger(__name__)

SQRT_1_5 = math.sqrt(1.5)
NORMALIZED = "normalized"
STRATEGY_IDS = (1, 2, 3)


@dataclass(frozen=True)
class DesignResult:
    strategy_id: int
    link_length: float
    rho_min: float
    rho_max: float
    p_min: float
    p_max: float
    rho_q_plus: float                           # Q-axis joint value at Q+
    mu_cube: tuple[float, float]
    mu_joint: tuple[float, float] | None        # None: W_rho contains singularities
    software_constraint: float | None = None    # threshold on rho_x + rho_y + rho_z
    unit: str = NORMALIZED
    criterion: str = ""
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def delta_rho(self) -> float:
        return self.rho_max - self.rho_min

    @property
    def delta_p(self) -> float:
        return self.p_max - self.p_min

    @property
    def cube_edge(self) -> float:
        return self.delta_p

    @property
    def rho_to_cube_ratio(self) -> float:
        """c / drho; scale-free."""
        return self.delta_p / self.delta_rho

    @property
    def joint_singular(self) -> bool:
        return self.mu_joint is None

    def with_notes(self, *notes: str) -> "DesignResult":
        return replace(self, notes=self.notes + tuple(notes))


@dataclass(frozen=True)
class DesignSpec:
    cube_edge: float
    bound: DexterityBound
    strategies: tuple[int, ...] = STRATEGY_IDS
    unit: str = NORMALIZED

    def __post_init__(self) -> None:
        if isinstance(self.cube_edge, bool) or not isinstance(self.cube_edge, (int, float)):
            raise InvalidBoundError("cube_edge must be a real number.")
        if not math.isfinite(self.cube_edge) or self.cube_edge <= 0:
            raise InvalidBoundError(f"cube_edge must be positive, got {self.cube_edge}.")
        if not self.strategies:
            raise InvalidBoundError("at least one strategy must be requested.")
        unknown = set(self.strategies) - set(STRATEGY_IDS)
        if unknown:
            raise InvalidBoundError(f"unknown strategies {sorted(unknown)}; choose from {STRATEGY_IDS}.")


# ---------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------

def _factor_range_at_chis(*chis: float) -> tuple[float, float]:
    """Transmission factors at Q-axis points: reciprocals of 1 + 2chi and 1 - chi."""
    factors = [f for chi in chis for f in (1.0 / (1.0 + 2.0 * chi), 1.0 / (1.0 - chi))]
    return min(factors), max(factors)


def _global_range(rho_min: float, rho_max: float) -> tuple[float, float] | None:
    """Global factor range over W_rho; None once rho_max reaches the singular value sqrt(1.5)."""
    if rho_max >= SQRT_1_5:
        return None
    limits = JointLimitPair(rho_min, rho_max)
    return global_mu_min(limits)[0], global_mu_max(limits)[0]


def _check_mu(mu: float) -> SymmetricFactor:
    if isinstance(mu, bool) or not isinstance(mu, (int, float)):
        raise InvalidBoundError(f"mu must be a real number, got {mu!r}.")
    return SymmetricFactor(mu)


# ---------------------------------------------------------------------
# 1) Strategies on the unit manipulator
# ---------------------------------------------------------------------

def _strategy1_from(q: QAxisDesign, criterion: str) -> DesignResult:
    rho_max = 1.0 + q.p_max
    singular = rho_max >= SQRT_1_5

    notes: list[str] = []
    software = None
    if singular:
        software = 3.0 * q.rho_max
        mu_joint = None
        restored = _global_range(q.rho_min, q.rho_max)
        if restored is not None:
            notes.append(
                "W_rho contains parallel singularities; rho_x + rho_y + rho_z <= 3 rho(Q+) "
                f"restores factors [{restored[0]:.4f}, {restored[1]:.4f}]"
            )
        else:
            notes.append("W_rho contains parallel singularities; Q+ itself is singular")
    else:
        mu_joint = _global_range(q.rho_min, rho_max)

    return DesignResult(
        strategy_id=1,
        link_length=1.0,
        rho_min=q.rho_min,
        rho_max=rho_max,
        p_min=q.p_min,
        p_max=q.p_max,
        rho_q_plus=q.rho_max,
        mu_cube=_factor_range_at_chis(q.chi1, q.chi2),
        mu_joint=mu_joint,
        software_constraint=software,
        criterion=criterion,
        notes=tuple(notes),
    )


def _strategy2_from(q: QAxisDesign, criterion: str) -> DesignResult:
    p_max = q.rho_max - 1.0
    return DesignResult(
        strategy_id=2,
        link_length=1.0,
        rho_min=q.rho_min,
        rho_max=q.rho_max,
        p_min=q.p_min,
        p_max=p_max,
        rho_q_plus=q.rho_max,
        mu_cube=_factor_range_at_chis(q.chi2, chi_from_p(p_max)),
        mu_joint=_global_range(q.rho_min, q.rho_max),
        criterion=criterion,
    )


def strategy1(mu: float) -> DesignResult:
    """Cube on the Q-axis points Q+, Q-; joint range enlarged to [rho(Q-), 1 + p(Q+)]."""
    bound = _check_mu(mu)
    return _strategy1_from(qaxis_design(bound), bound.describe())


def strategy2(mu: float) -> DesignResult:
    """Q-axis joint limits; cube [p(Q-), rho(Q+) - 1] inscribed in W_rho."""
    bound = _check_mu(mu)
    return _strategy2_from(qaxis_design(bound), bound.describe())


def strategy3(mu: float) -> DesignResult:
    """Whole-workspace symmetric joint limits; cube [p(Q-), rho(Q+) - 1] inscribed in W_rho."""
    bound = _check_mu(mu)
    limits = joint_limits_symmetric(mu)

    p_min = p_from_rho(limits.rho_min)
    p_max = limits.rho_max - 1.0
    return DesignResult(
        strategy_id=3,
        link_length=1.0,
        rho_min=limits.rho_min,
        rho_max=limits.rho_max,
        p_min=p_min,
        p_max=p_max,
        rho_q_plus=limits.rho_max,
        mu_cube=_factor_range_at_chis(chi_from_p(p_min), chi_from_p(p_max)),
        mu_joint=_global_range(limits.rho_min, limits.rho_max),
        criterion=bound.describe(),
    )


# ---------------------------------------------------------------------
# 2) Scaling and post-processing
# ---------------------------------------------------------------------

def scale(result: DesignResult, cube_edge: float, unit: str | None = None) -> DesignResult:
    """
    Multiply every length by eta = cube_edge / dp so the cube edge becomes cube_edge.

    Factor ranges and ratios are unchanged. Scaling an already scaled result works
    the same way (eta is taken relative to its current dp).
    """
    if isinstance(cube_edge, bool) or not isinstance(cube_edge, (int, float)) or not cube_edge > 0:
        raise InvalidBoundError(f"cube_edge must be positive, got {cube_edge!r}.")
    if result.delta_p <= 0.0:
        raise InvalidBoundError("cannot scale a degenerate cube (dp = 0).")

    eta = cube_edge / result.delta_p
    software = None if result.software_constraint is None else result.software_constraint * eta
    return replace(
        result,
        link_length=result.link_length * eta,
        rho_min=result.rho_min * eta,
        rho_max=result.rho_max * eta,
        p_min=result.p_min * eta,
        p_max=result.p_max * eta,
        rho_q_plus=result.rho_q_plus * eta,
        software_constraint=software,
        unit=unit if unit is not None else result.unit,
    )


def software_joint_constraint(result: DesignResult) -> float:
    """Threshold 3 rho(Q+) for rho_x + rho_y + rho_z that removes the singularities of strategy #1."""
    if result.strategy_id != 1:
        raise NotApplicableError(
            f"software joint constraint applies to strategy 1 only, got strategy {result.strategy_id}."
        )
    return 3.0 * result.rho_q_plus


# ---------------------------------------------------------------------
# 3) Orchestration
# ---------------------------------------------------------------------

def _normalized_results(bound: DexterityBound, strategies: Iterable[int]) -> list[DesignResult]:
    wanted = sorted(set(strategies))
    if isinstance(bound, SymmetricFactor):
        by_id = {1: strategy1, 2: strategy2, 3: strategy3}
        return [by_id[s](bound.mu) for s in wanted]

    if 3 in wanted:
        raise NotApplicableError(
            "strategy 3 needs a symmetric transmission bound (--mu); "
            f"got {bound.describe()}."
        )
    q = qaxis_design(bound)
    builders = {1: _strategy1_from, 2: _strategy2_from}
    return [builders[s](q, bound.describe()) for s in wanted]


def synthesize(spec: DesignSpec) -> list[DesignResult]:
    """
    One scaled DesignResult per requested strategy, ordered by strategy id.

    Non-symmetric bounds place Q+ and Q- from their own Q-axis interval; strategy #3
    is only defined for a symmetric transmission bound.
    """
    normalized = _normalized_results(spec.bound, spec.strategies)

    results: list[DesignResult] = []
    for r in normalized:
        eta = spec.cube_edge / r.delta_p
        scaled = scale(r, spec.cube_edge, unit=spec.unit)
        results.append(scaled.with_notes(f"scaling factor eta = c/dp = {eta:.4f}"))

    lengths = [r.link_length for r in results]
    if any(b < a for a, b in zip(lengths, lengths[1:])):
        logger.warning("link lengths are not ordered by strategy: %s", lengths)

    by_id = {r.strategy_id: r for r in results}
    if 1 in by_id and 3 in by_id:
        saving = 1.0 - by_id[1].link_length / by_id[3].link_length
        by_id[1] = by_id[1].with_notes(f"link length {100.0 * saving:.1f}% shorter than strategy 3")
        results = [by_id[r.strategy_id] for r in results]

    return results
