"""
errors.py

Domain exceptions shared by every package in the toolkit.

The CLI maps these onto exit statuses (see pipeline.cli), so library code
raises them instead of printing and carrying on.
"""

from __future__ import annotations


class OrthoglideError(Exception):
    """Base class for all toolkit errors."""


class OutOfReachError(OrthoglideError, ValueError):
    """Cartesian point is outside the reach of at least one leg (negative IK radicand)."""


class NoSolutionError(OrthoglideError, ValueError):
    """Joint vector has no direct-kinematics solution (negative discriminant)."""


class OutOfRangeError(OrthoglideError, ValueError):
    """Parameter outside the domain of an operation."""


class InvalidBoundError(OrthoglideError, ValueError):
    """Malformed dexterity bound, transmission factor or joint-limit pair."""


class NotApplicableError(OrthoglideError, ValueError):
    """Operation is not defined for the given design strategy / bound."""


class SingularityError(OrthoglideError, ArithmeticError):
    """Configuration is at (or within tolerance of) a kinematic singularity."""


class SerialSingularityError(SingularityError):
    """A link is orthogonal to its prismatic axis: det(J) = 0."""


class ParallelSingularityError(SingularityError):
    """det(J^-1) = 0: the platform can move with locked joints."""
