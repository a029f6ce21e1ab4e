"""
export_contour_parquet.py

Exports explorer tables (contour grid + loci, joint-limit curves) to
dashboard-friendly Parquet files.

Columns are passed through unchanged; a generated_at_utc stamp is added and
rows are sorted so repeated exports diff cleanly.
"""

from __future__ import annotations

from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import pandas as pd

from config.settings import OUTPUT_DIR
from explorer.scans import contour_data, joint_limit_curves

SORT_KEYS = {
    "contour": ["locus", "rho_max", "rho_min"],
    "joint_limit_curves": ["mu"],
}


def export_table_parquet(
    df: pd.DataFrame,
    out_path: str | Path | None = None,
    table_name: str = "contour",
) -> dict:
    """
    Write one explorer table to Parquet.

    Parameters
    ----------
    df : pd.DataFrame
        Table from explorer.scans.
    out_path : str | Path | None
        Output path. Defaults to OUTPUT_DIR/dashboard/<table_name>.parquet
    table_name : str
        'contour' or 'joint_limit_curves'; picks the sort order.
    """
    if df is None or df.empty:
        raise ValueError(f"{table_name}: nothing to export (empty table).")
    if table_name not in SORT_KEYS:
        raise ValueError(f"unknown table_name {table_name!r}; choose from {sorted(SORT_KEYS)}.")

    if out_path is None:
        out_path = OUTPUT_DIR / "dashboard" / f"{table_name}.parquet"
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)

    df = df.copy()
    df["generated_at_utc"] = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    keys = [k for k in SORT_KEYS[table_name] if k in df.columns]
    df = df.sort_values(keys).reset_index(drop=True)

    df.to_parquet(out_path, index=False)

    summary = {
        "rows": int(len(df)),
        "out_path": str(out_path),
        "table": table_name,
        "columns": list(df.columns),
    }

    print("[dashboard_export] Parquet export complete:")
    print(summary)

    return summary


def main() -> None:
    export_table_parquet(contour_data(50), table_name="contour")
    export_table_parquet(joint_limit_curves(np.linspace(0.1, 0.99, 50)), table_name="joint_limit_curves")


if __name__ == "__main__":
    main()
