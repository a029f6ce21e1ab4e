"""
verify.py

Closed forms against the numerical explorer. Each check returns a CheckResult;
the CLI turns any failure into exit status 2.

Checks:
  1) IK/DK round trip on random points
  2) analytic J^-1 against central differences of IK; closed-form det against numpy
  3) critical-point singular values against numpy SVD
  4) phi_QQ / phi_RQ parametric against explicit forms
  5) global factors against the dense joint-grid scan on sampled limit pairs
  6) strategy cubes: bound honoured (strategy 1), containment in W_rho (2, 3)
  7) strategy-1 singularity threshold
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable
import logging
import math

import numpy as np

from config.settings import SEED
from dexterity.critical_points import (
    JointLimitPair,
    global_mu_max,
    global_mu_min,
    phi_qq_explicit,
    phi_qq_parametric,
    phi_rq_explicit,
    phi_rq_parametric,
    q_vertex,
    r_edge,
    s_face,
)
from explorer.factors import singular_values_batch
from explorer.scans import cube_factor_range, grid_scan_mu
from kinematics.orthoglide import (
    direct_kinematics_batch,
    inverse_jacobian,
    inverse_jacobian_det,
    inverse_kinematics,
    inverse_kinematics_batch,
)
from synthesis.strategies import DesignResult, strategy1, strategy2, strategy3

logger = logging.getLogger(__name__)

SINGULAR_MU_THRESHOLD = 1.0 - math.sqrt(math.sqrt(1.5) - 1.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{status}  {self.name}: worst {self.worst:.3e} <= {self.tolerance:.0e}{extra}"


def _check(name: str, errors: np.ndarray | list[float], tolerance: float, detail: str = "") -> CheckResult:
    worst = float(np.max(np.abs(errors))) if len(errors) else 0.0
    return CheckResult(name, bool(worst <= tolerance), worst, tolerance, detail)


def _interior_points(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random regular points: inside the ball of radius 0.9, below the flat singularity."""
    out: list[np.ndarray] = []
    while sum(len(o) for o in out) < n:
        v = rng.uniform(-0.6, 0.6, size=(4 * n, 3))
        v = v[np.linalg.norm(v, axis=1) < 0.9]
        R = inverse_kinematics_batch(v)
        keep = np.all(R > 0.05, axis=1)
        v, R = v[keep], R[keep]
        v = v[(v / R).sum(axis=1) < 0.9]
        out.append(v)
    return np.concatenate(out)[:n]


# ---------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------

def check_round_trip(rng: np.random.Generator, n: int = 1000) -> CheckResult:
    P = _interior_points(rng, n)
    back = direct_kinematics_batch(inverse_kinematics_batch(P), m=-1)
    return _check("IK/DK round trip", (back - P).ravel(), 1e-10, f"{n} points")


def check_jacobian(rng: np.random.Generator, n: int = 1000) -> list[CheckResult]:
    P = _interior_points(rng, n)
    h = 1e-6
    jac_err, det_err = [], []
    for p in P:
        r = np.asarray(inverse_kinematics(p))
        M = inverse_jacobian(p, r)
        fd = np.column_stack([
            (np.asarray(inverse_kinematics(p + h * e)) - np.asarray(inverse_kinematics(p - h * e))) / (2.0 * h)
            for e in np.eye(3)
        ])
        jac_err.append(float(np.max(np.abs(M - fd))))
        det_err.append(inverse_jacobian_det(p, r) - float(np.linalg.det(M)))
    return [
        _check("J^-1 vs finite differences", jac_err, 1e-5, f"{n} points"),
        _check("det(J^-1) closed form vs numeric", det_err, 1e-10, f"{n} points"),
    ]


def check_critical_points() -> CheckResult:
    errors = []
    for rho in np.linspace(0.15, 1.2, 22):
        for build in (q_vertex, r_edge, s_face):
            cp = build(float(rho))
            numeric = singular_values_batch(np.array([cp.cartesian]), np.array([cp.joints]))[0]
            errors.extend(np.sort(cp.singular_values) - np.sort(numeric))
    return _check("critical-point singular values vs SVD", errors, 1e-10, "Q, R, S at 22 joint values")


def check_region_curves() -> CheckResult:
    errors = []
    for chi in np.linspace(0.0, 0.25, 26)[:-1]:
        rho_min, rho_max = phi_qq_parametric(float(chi))
        if rho_min >= math.sqrt(0.5):
            errors.append(phi_qq_explicit(rho_min) - rho_max)
    for chi in np.linspace(-0.5, 0.0, 26)[1:]:
        rho_min, rho_max = phi_rq_parametric(float(chi))
        errors.append(phi_rq_explicit(rho_max) - rho_min)
    return _check("phi parametric vs explicit", errors, 1e-10)


def check_global_factors(rng: np.random.Generator, pairs: int = 20, resolution: int = 41) -> CheckResult:
    """Grid values lie inside W_rho, so they are compared relative to max(1, closed form)."""
    errors = []
    for rho_min, rho_max in zip(rng.uniform(0.1, 0.95, pairs), rng.uniform(1.02, 1.2, pairs)):
        limits = JointLimitPair(float(rho_min), float(rho_max))
        scan = grid_scan_mu(limits, resolution=resolution)
        lo, hi = global_mu_min(limits)[0], global_mu_max(limits)[0]
        errors.append((scan.factors.mu_min - lo) / max(1.0, lo))
        errors.append((scan.factors.mu_max - hi) / max(1.0, hi))
        logger.debug("limits %s: closed [%.5f, %.5f] grid [%.5f, %.5f]", limits, lo, hi, *scan.factors.as_tuple())
    return _check("global factors vs grid scan", errors, 0.01, f"{pairs} pairs, resolution {resolution}")


def _cube_in_joint_limits(design: DesignResult, samples: int = 21) -> float:
    axis = np.linspace(design.p_min, design.p_max, samples)
    P = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)
    R = inverse_kinematics_batch(P)
    below = np.clip(design.rho_min - R, 0.0, None)
    above = np.clip(R - design.rho_max, 0.0, None)
    return float(np.nanmax(np.maximum(below, above)))


def check_strategies(mus: tuple[float, ...] = (0.5, 0.6, 0.8)) -> list[CheckResult]:
    honour, contained, dual = [], [], []
    for mu in mus:
        factors = cube_factor_range(strategy1(mu))
        honour += [min(0.0, factors.mu_min - mu), max(0.0, factors.mu_max - 1.0 / mu)]

        for design in (strategy2(mu), strategy3(mu)):
            contained.append(_cube_in_joint_limits(design))

        s3 = strategy3(mu)
        lo, hi = s3.mu_joint
        dual += [min(0.0, lo - mu), max(0.0, hi - 1.0 / mu)]
    tag = f"mu in {list(mus)}"
    return [
        _check("strategy-1 cube honours [mu, 1/mu]", honour, 1e-9, tag),
        _check("strategy-2/3 cubes inside W_rho", contained, 1e-9, tag),
        _check("strategy-3 W_rho honours [mu, 1/mu]", dual, 1e-9, tag),
    ]


def check_singular_threshold() -> CheckResult:
    t = SINGULAR_MU_THRESHOLD
    errors = [
        0.0 if strategy1(t - 1e-6).joint_singular else 1.0,
        0.0 if not strategy1(t + 1e-6).joint_singular else 1.0,
    ]
    return _check("strategy-1 singular iff mu <= 1 - sqrt(sqrt(1.5) - 1)", errors, 0.0, f"threshold {t:.6f}")


def run_all_checks(pairs: int = 20, resolution: int = 41, seed: int | None = None) -> list[CheckResult]:
    rng = np.random.default_rng(SEED if seed is None else seed)
    steps: list[Callable[[], CheckResult | list[CheckResult]]] = [
        lambda: check_round_trip(rng),
        lambda: check_jacobian(rng),
        check_critical_points,
        check_region_curves,
        lambda: check_global_factors(rng, pairs=pairs, resolution=resolution),
        check_strategies,
        check_singular_threshold,
    ]
    results: list[CheckResult] = []
    for step in steps:
        out = step()
        results.extend(out if isinstance(out, list) else [out])
    return results
