"""
bounds.py

Dexterity criteria a design can be asked to satisfy, as a small tagged union:

  - ManipulabilityFloor(delta)         |det J^-1| >= delta,          0 < delta < 1
  - ConditionCeiling(delta)            cond(J^-1) <= delta,          delta >= 1
  - TransmissionInterval(lo, hi)       every factor 1/sigma in [lo, hi], lo < 1 < hi
  - SymmetricFactor(mu)                every factor in [mu, 1/mu],    0 < mu < 1

Each bound can test stacks of singular values of J^-1, which is what the
workspace explorer feeds it.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from kinematics.errors import InvalidBoundError


def _check_real(value: float, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidBoundError(f"{name} must be a real number, got {value!r}.")
    if math.isnan(value):
        raise InvalidBoundError(f"{name} must not be NaN.")
    return float(value)


@dataclass(frozen=True)
class ManipulabilityFloor:
    delta: float
    tag = "manipulability"

    def __post_init__(self) -> None:
        d = _check_real(self.delta, "manipulability floor")
        if not 0.0 < d < 1.0:
            raise InvalidBoundError(f"manipulability floor must lie in (0, 1), got {d}.")

    def accepts(self, sigma: np.ndarray) -> np.ndarray:
        return np.prod(sigma, axis=-1) >= self.delta

    def describe(self) -> str:
        return f"|det J^-1| >= {self.delta:g}"


@dataclass(frozen=True)
class ConditionCeiling:
    delta: float
    tag = "condition"

    def __post_init__(self) -> None:
        d = _check_real(self.delta, "condition ceiling")
        if not 1.0 <= d < math.inf:
            raise InvalidBoundError(f"condition ceiling must be finite and >= 1, got {d}.")

    def accepts(self, sigma: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return sigma.max(axis=-1) / sigma.min(axis=-1) <= self.delta

    def describe(self) -> str:
        return f"cond(J^-1) <= {self.delta:g}"


@dataclass(frozen=True)
class TransmissionInterval:
    lam_min: float
    lam_max: float
    tag = "transmission"

    def __post_init__(self) -> None:
        lo = _check_real(self.lam_min, "lam_min")
        hi = _check_real(self.lam_max, "lam_max")
        if not 0.0 <= lo < 1.0 < hi:
            raise InvalidBoundError(f"transmission interval needs 0 <= lam_min < 1 < lam_max, got [{lo}, {hi}].")

    @property
    def factor_interval(self) -> tuple[float, float]:
        return self.lam_min, self.lam_max

    def accepts(self, sigma: np.ndarray) -> np.ndarray:
        lo, hi = self.factor_interval
        s_max = sigma.max(axis=-1)
        s_min = sigma.min(axis=-1)
        ok = np.ones(s_max.shape, dtype=bool)
        if lo > 0.0:
            ok &= s_max <= 1.0 / lo
        if math.isfinite(hi):
            ok &= s_min >= 1.0 / hi
        return ok

    def describe(self) -> str:
        return f"transmission factors in [{self.lam_min:g}, {self.lam_max:g}]"


@dataclass(frozen=True)
class SymmetricFactor:
    mu: float
    tag = "symmetric"

    def __post_init__(self) -> None:
        m = _check_real(self.mu, "mu")
        if not 0.0 < m < 1.0:
            raise InvalidBoundError(f"mu must lie in (0, 1), got {m}.")

    @property
    def factor_interval(self) -> tuple[float, float]:
        return self.mu, 1.0 / self.mu

    def as_interval(self) -> TransmissionInterval:
        return TransmissionInterval(self.mu, 1.0 / self.mu)

    def accepts(self, sigma: np.ndarray) -> np.ndarray:
        return self.as_interval().accepts(sigma)

    def describe(self) -> str:
        return f"transmission factors in [{self.mu:g}, {1.0 / self.mu:g}]"


DexterityBound = ManipulabilityFloor | ConditionCeiling | TransmissionInterval | SymmetricFactor
