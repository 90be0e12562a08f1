"""
Tabular export of reach tables.
"""
from typing import Any, Dict, List

import pandas as pd

from cfx.reach import ReachTable
from cfx.regex import canonical_key, re_nullable, sorted_canonical
from cfx.syntax import render

REACH_FIELDS = [
    "subterm",
    "state",
    "reach",
    "size",
    "all_nullable",
]


def merge_states(states: Any) -> str:
    """Join rendered states one per line, in canonical order."""
    if not states:
        return ""
    return "\n".join(render(s) for s in sorted_canonical(states))


def build_rows(table: ReachTable) -> List[Dict[str, Any]]:
    rows: List[Dict[str, Any]] = []
    for (subterm, state), states in table.items():
        rows.append({
            "subterm": render(subterm),
            "state": render(state),
            "reach": merge_states(states),
            "size": len(states),
            "all_nullable": all(re_nullable(s) for s in states),
            "_order": canonical_key(state),
        })
    rows.sort(key=lambda row: (row["subterm"], row["_order"]))
    for row in rows:
        row.pop("_order")
    return rows


def reach_frame(table: ReachTable) -> pd.DataFrame:
    return pd.DataFrame(build_rows(table), columns=REACH_FIELDS)


def export_reach_csv(table: ReachTable, output_path: str) -> int:
    """Write the table as CSV; returns the number of rows written."""
    df = reach_frame(table)
    df.to_csv(output_path, index=False, encoding="utf-8")
    return len(df)
