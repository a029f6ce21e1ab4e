"""
geometry.py

Value types for the Orthoglide simplified model:

  - Geometry        : link length L (the only physical parameter) + tolerances
  - CartesianPoint  : tool centre point p = (px, py, pz)
  - JointVector     : actuated prismatic coordinates rho = (rx, ry, rz)
  - ConfigIndices   : IK branch signs (sx, sy, sz) and DK branch index m
  - PointClass      : number of IK solutions for a Cartesian point

Everything downstream works on the normalized manipulator (L = 1); physical
units only enter at the synthesis scaling stage.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from kinematics.errors import InvalidBoundError


# Relative tolerances (multiplied by L)
KIN_TOL = 1e-9
SING_TOL = 1e-8


@dataclass(frozen=True)
class Geometry:
    link_length: float = 1.0

    def __post_init__(self) -> None:
        if not isinstance(self.link_length, (int, float)) or isinstance(self.link_length, bool):
            raise TypeError("link_length must be a real number.")
        if not np.isfinite(self.link_length) or self.link_length <= 0:
            raise InvalidBoundError(f"link_length must be positive and finite, got {self.link_length!r}.")

    @property
    def eps_kin(self) -> float:
        return KIN_TOL * self.link_length

    @property
    def eps_sing(self) -> float:
        return SING_TOL * self.link_length


UNIT_GEOMETRY = Geometry(1.0)


class CartesianPoint(NamedTuple):
    px: float
    py: float
    pz: float


class JointVector(NamedTuple):
    rx: float
    ry: float
    rz: float


@dataclass(frozen=True)
class ConfigIndices:
    """
    Branch selectors.

    sx, sy, sz are the signs of (rho_a - p_a); +1 means the link makes an
    obtuse angle with its prismatic axis. m picks one of the two direct
    kinematics solutions (m = -1 is the one containing the isotropic point).
    """

    sx: int = 1
    sy: int = 1
    sz: int = 1
    m: int = -1

    def __post_init__(self) -> None:
        for name in ("sx", "sy", "sz", "m"):
            if getattr(self, name) not in (-1, 1):
                raise InvalidBoundError(f"{name} must be -1 or +1, got {getattr(self, name)!r}.")

    @property
    def signs(self) -> np.ndarray:
        return np.array([self.sx, self.sy, self.sz], dtype=float)


DEFAULT_CONFIG = ConfigIndices()


class PointClass(str, Enum):
    OUTSIDE_WORKSPACE = "OutsideWorkspace"
    UNIQUE_IK = "UniqueIK"
    EIGHT_IK = "EightIK"
    SERIAL_SINGULAR = "SerialSingular"
