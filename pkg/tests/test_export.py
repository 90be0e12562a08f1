import pandas as pd

from cfx.export import REACH_FIELDS, build_rows, export_reach_csv, merge_states, reach_frame
from cfx.reach import reach_table
from cfx.regex import PHI

from tests.corpus import XNYN, E, R


def test_merge_states_is_canonical():
    assert merge_states({R("x*.y*"), R("y*")}) == "y*\nx*.y*"
    assert merge_states(set()) == ""
    assert merge_states({PHI}) == "0"


def test_frame_has_one_row_per_entry():
    table = reach_table(E(XNYN), R("x*.y*"))
    frame = reach_frame(table)
    assert list(frame.columns) == REACH_FIELDS
    assert len(frame) == len(table)
    top = frame[(frame["subterm"] == "mu a. x.a.y+1") & (frame["state"] == "x*.y*")]
    assert top.iloc[0]["reach"] == "y*\nx*.y*"
    assert bool(top.iloc[0]["all_nullable"])


def test_rows_are_sorted():
    rows = build_rows(reach_table(E(XNYN), R("x*.y*")))
    subterms = [row["subterm"] for row in rows]
    assert subterms == sorted(subterms)


def test_csv_export(tmp_path):
    table = reach_table(E(XNYN), R("x*.y*"))
    path = tmp_path / "reach.csv"
    count = export_reach_csv(table, str(path))
    loaded = pd.read_csv(path, keep_default_na=False)
    assert count == len(loaded) == len(table)
    assert list(loaded.columns) == REACH_FIELDS
