"""
report.py

Emitters for synthesis results and explorer tables:

  - text : fixed-width table, 4 decimals (display only)
  - json : one record per strategy, full float precision, readable back into DesignResult
  - csv  : contour grid rows via pandas (decimal point, LF line endings)
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Iterable
import json
import math

import pandas as pd

from dexterity.qaxis import QAxisLandmark
from explorer.scans import CONTOUR_COLUMNS
from synthesis.strategies import DesignResult

SINGULAR = "singular"

TEXT_COLUMNS = [
    ("strategy", "#"),
    ("link_length", "L"),
    ("rho_min", "rho_min"),
    ("rho_max", "rho_max"),
    ("delta_rho", "d_rho"),
    ("p_min", "p_min"),
    ("p_max", "p_max"),
    ("rho_to_cube_ratio", "c/d_rho"),
    ("mu_cube", "mu(Wp)"),
    ("mu_joint", "mu(W_rho)"),
]


# ---------------------------------------------------------------------
# JSON records
# ---------------------------------------------------------------------

def design_to_record(result: DesignResult) -> dict[str, Any]:
    return {
        "strategy": result.strategy_id,
        "link_length": result.link_length,
        "rho_min": result.rho_min,
        "rho_max": result.rho_max,
        "delta_rho": result.delta_rho,
        "p_min": result.p_min,
        "p_max": result.p_max,
        "cube_edge": result.cube_edge,
        "unit": result.unit,
        "mu_cube": list(result.mu_cube),
        "mu_joint": SINGULAR if result.mu_joint is None else list(result.mu_joint),
        "software_constraint": result.software_constraint,
        "rho_to_cube_ratio": result.rho_to_cube_ratio,
        "notes": list(result.notes),
        # needed to rebuild the DesignResult
        "rho_q_plus": result.rho_q_plus,
        "criterion": result.criterion,
    }


def design_from_record(record: dict[str, Any]) -> DesignResult:
    """Inverse of design_to_record; derived keys (delta_rho, cube_edge, ratio) are ignored."""
    mu_joint = record["mu_joint"]
    return DesignResult(
        strategy_id=int(record["strategy"]),
        link_length=record["link_length"],
        rho_min=record["rho_min"],
        rho_max=record["rho_max"],
        p_min=record["p_min"],
        p_max=record["p_max"],
        rho_q_plus=record["rho_q_plus"],
        mu_cube=tuple(record["mu_cube"]),
        mu_joint=None if mu_joint == SINGULAR else tuple(mu_joint),
        software_constraint=record["software_constraint"],
        unit=record["unit"],
        criterion=record.get("criterion", ""),
        notes=tuple(record["notes"]),
    )


def designs_to_json(results: Iterable[DesignResult]) -> str:
    return json.dumps([design_to_record(r) for r in results], indent=2) + "\n"


def designs_from_json(text: str) -> list[DesignResult]:
    records = json.loads(text)
    if not isinstance(records, list):
        raise ValueError("design report must be a JSON array of records.")
    return [design_from_record(r) for r in records]


# ---------------------------------------------------------------------
# Text
# ---------------------------------------------------------------------

def _fmt(value: Any) -> str:
    if value is None:
        return SINGULAR
    if isinstance(value, tuple):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    if isinstance(value, float):
        return "inf" if math.isinf(value) else f"{value:.4f}"
    return str(value)


def format_design_table(results: list[DesignResult]) -> str:
    if not results:
        return "(no designs)\n"

    rows = []
    for r in results:
        values = {
            "strategy": r.strategy_id,
            "link_length": r.link_length,
            "rho_min": r.rho_min,
            "rho_max": r.rho_max,
            "delta_rho": r.delta_rho,
            "p_min": r.p_min,
            "p_max": r.p_max,
            "rho_to_cube_ratio": r.rho_to_cube_ratio,
            "mu_cube": r.mu_cube,
            "mu_joint": r.mu_joint,
        }
        rows.append([_fmt(values[key]) for key, _ in TEXT_COLUMNS])

    headers = [label for _, label in TEXT_COLUMNS]
    widths = [max(len(h), *(len(row[i]) for row in rows)) for i, h in enumerate(headers)]

    lines = [
        f"criterion: {results[0].criterion}   cube edge: {_fmt(results[0].cube_edge)} {results[0].unit}",
        "  ".join(h.rjust(w) for h, w in zip(headers, widths)),
        "  ".join("-" * w for w in widths),
    ]
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in rows]

    for r in results:
        if r.software_constraint is not None:
            lines.append(
                f"strategy {r.strategy_id}: software constraint rho_x + rho_y + rho_z <= "
                f"{r.software_constraint:.4f} {r.unit}"
            )
        for note in r.notes:
            lines.append(f"strategy {r.strategy_id}: {note}")
    return "\n".join(lines) + "\n"


def format_landmarks(landmarks: list[QAxisLandmark]) -> str:
    def cell(value: float | None, infinite: bool) -> str:
        return "inf" if infinite else _fmt(value)

    lines = [f"{'point':>5}  {'p':>8}  {'rho':>8}  {'chi':>8}  {'det J':>8}"]
    for lm in landmarks:
        lines.append(
            f"{lm.name:>5}  {lm.p:8.4f}  {lm.rho:8.4f}  "
            f"{cell(lm.chi, lm.chi_infinite):>8}  {cell(lm.det_j, lm.det_j_infinite):>8}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------

def write_contour_csv(df: pd.DataFrame, out_path: Path) -> dict:
    """
    Grid rows go to out_path with the fixed contour header; the locus rows
    (phi_QQ, phi_RQ, symmetric designs) go to a '<stem>_loci.csv' companion.
    """
    missing = [c for c in CONTOUR_COLUMNS + ["locus"] if c not in df.columns]
    if missing:
        raise ValueError(f"contour dataframe is missing required columns: {missing}")

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    loci_path = out_path.with_name(f"{out_path.stem}_loci.csv")

    grid = df[df["locus"] == "grid"]
    loci = df[df["locus"] != "grid"]
    grid[CONTOUR_COLUMNS].to_csv(out_path, index=False, lineterminator="\n", float_format="%.10g")
    loci[["locus"] + CONTOUR_COLUMNS].to_csv(loci_path, index=False, lineterminator="\n", float_format="%.10g")

    return {"rows": int(len(grid)), "out_path": str(out_path), "loci_rows": int(len(loci)), "loci_path": str(loci_path)}
