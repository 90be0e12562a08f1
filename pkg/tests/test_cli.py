import json

import pytest

from cfx.codec import load_coercion, tree_from_dict
from cfx.trees import flatten

from tests.corpus import LEFT_REC, XNYN


def read(fixtures_dir, name):
    return (fixtures_dir / name).read_text(encoding="utf-8")


def read_json(fixtures_dir, name):
    return json.loads(read(fixtures_dir, name))


# ============================================================
# Regex commands
# ============================================================

def test_derive_canonical(cli, fixtures_dir):
    code, out, _ = cli("derive", "-r", "(x+y)*", "-x", "x")
    assert code == 0
    assert out == read(fixtures_dir, "derive_canonical.txt")


def test_derive_raw(cli, fixtures_dir):
    code, out, _ = cli("derive", "-r", "(x+y)*", "-x", "x", "--raw")
    assert code == 0
    assert out == read(fixtures_dir, "derive_raw.txt")


def test_derive_needs_one_symbol(cli):
    code, _, err = cli("derive", "-r", "(x+y)*", "-x", "xy")
    assert code == 2
    assert err.startswith("error: -x")


def test_canon(cli):
    assert cli("canon", "-r", "(1+0).(x+y)*")[:2] == (0, "(x+y)*\n")


def test_descendants(cli):
    code, out, _ = cli("descendants", "-r", "x*.y*", "--alphabet", "xy")
    assert code == 0
    assert out == "0\ny*\nx*.y*\n"


def test_matches(cli):
    assert cli("matches", "-r", "x*.y*", "--word", "xy")[:2] == (0, "true\n")
    assert cli("matches", "-r", "x*", "--word", "xy")[:2] == (1, "false\n")
    assert cli("matches", "-r", "x*", "--word", "1")[:2] == (0, "true\n")


# ============================================================
# Reachability and containment
# ============================================================

def test_reach_golden(cli, fixtures_dir):
    code, out, _ = cli("reach", "-e", XNYN, "-r", "x*.y*")
    assert code == 0
    assert out == read(fixtures_dir, "xnyn_reach.txt")


def test_reach_output_is_deterministic(cli):
    first = cli("reach", "-e", "mu a. x.(a.(y.a))+1", "-r", "x*.y*")
    second = cli("reach", "-e", "mu a. x.(a.(y.a))+1", "-r", "x*.y*")
    assert first == second


def test_reach_table_export(cli, tmp_path):
    path = tmp_path / "table.csv"
    code, _, _ = cli("reach", "-e", XNYN, "-r", "x*.y*", "--table", str(path))
    assert code == 0
    header = path.read_text(encoding="utf-8").splitlines()[0]
    assert header == "subterm,state,reach,size,all_nullable"


def test_contains(cli):
    assert cli("contains", "-e", XNYN, "-r", "x*.y*")[:2] == (0, "true\n")
    assert cli("contains", "-e", XNYN, "-r", "x*")[:2] == (1, "false\n")


def test_syntax_error(cli):
    code, out, err = cli("contains", "-e", "mu a. x.(a.y", "-r", "x*")
    assert code == 2
    assert out == ""
    assert err.startswith("error: cannot parse")


def test_unbound_placeholder(cli):
    code, _, err = cli("contains", "-e", "x.abc", "-r", "x*")
    assert code == 2
    assert "abc" in err


def test_bad_alphabet(cli):
    code, _, err = cli("descendants", "-r", "x*", "--alphabet", "x1")
    assert code == 2
    assert err.startswith("error: --alphabet")


# ============================================================
# Coercions
# ============================================================

def test_downcast_golden(cli, fixtures_dir):
    tree_path = fixtures_dir / "xnyn_input_tree.json"
    code, out, _ = cli("downcast", "-e", XNYN, "-r", "x*.y*", "--tree", str(tree_path))
    assert code == 0
    result = json.loads(out)
    assert result["tree"] == read_json(fixtures_dir, "xnyn_parse_tree.json")
    assert flatten(tree_from_dict(result["residue"])) == ""


def test_downcast_of_unguarded_expression_needs_fuel(cli, fixtures_dir):
    tree_path = fixtures_dir / "xnyn_input_tree.json"
    code, _, err = cli("downcast", "-e", LEFT_REC, "-r", "x*.y*", "--tree", str(tree_path))
    assert code == 2
    assert "--fuel" in err


def test_downcast_reports_divergence(cli, fixtures_dir):
    tree_path = fixtures_dir / "xnyn_input_tree.json"
    code, out, _ = cli("downcast", "-e", LEFT_REC, "-r", "x*.y*", "--tree", str(tree_path),
                       "--fuel", "10000")
    assert code == 1
    assert out.startswith("Diverged after")


def test_downcast_rejects_tree_of_another_regex(cli, fixtures_dir):
    tree_path = fixtures_dir / "xnyn_input_tree.json"
    code, _, err = cli("downcast", "-e", XNYN, "-r", "(x+y)*", "--tree", str(tree_path))
    assert code == 2
    assert err.startswith("error: --tree")


def test_upcast_golden(cli, fixtures_dir):
    tree_path = fixtures_dir / "xnyn_parse_tree.json"
    code, out, _ = cli("upcast", "-e", XNYN, "-r", "x*.y*", "--tree", str(tree_path))
    assert code == 0
    assert json.loads(out) == read_json(fixtures_dir, "xnyn_input_tree.json")


def test_upcast_to_file(cli, fixtures_dir, tmp_path):
    tree_path = fixtures_dir / "xnyn_parse_tree.json"
    output = tmp_path / "out.json"
    code, out, _ = cli("upcast", "-e", XNYN, "-r", "x*.y*", "--tree", str(tree_path), "-o", str(output))
    assert code == 0
    assert out == f"wrote {output}\n"
    assert json.loads(output.read_text(encoding="utf-8")) == read_json(fixtures_dir, "xnyn_input_tree.json")


def test_upcast_not_contained(cli, fixtures_dir):
    tree_path = fixtures_dir / "xnyn_parse_tree.json"
    code, out, _ = cli("upcast", "-e", XNYN, "-r", "x*", "--tree", str(tree_path))
    assert code == 1
    assert out.startswith("not contained")


def test_missing_tree_file(cli, tmp_path):
    code, _, err = cli("upcast", "-e", XNYN, "-r", "x*.y*", "--tree", str(tmp_path / "nope.json"))
    assert code == 2
    assert "file not found" in err


@pytest.mark.parametrize("direction", ["up", "down"])
def test_emit_coercion(cli, tmp_path, direction):
    output = tmp_path / f"{direction}.json"
    code, _, _ = cli("emit-coercion", direction, "-e", XNYN, "-r", "x*.y*", "-o", str(output))
    assert code == 0
    coercion = load_coercion(str(output))
    assert coercion.direction == direction


# ============================================================
# Parsing and enumeration
# ============================================================

def test_parse(cli, fixtures_dir):
    code, out, _ = cli("parse", "-e", XNYN, "--word", "xy")
    assert code == 0
    assert json.loads(out) == read_json(fixtures_dir, "xnyn_parse_tree.json")


def test_parse_failure(cli, fixtures_dir):
    code, out, _ = cli("parse", "-e", XNYN, "--word", "xx")
    assert code == 1
    assert out == read(fixtures_dir, "xnyn_parse_xx.txt")


def test_parse_empty_word(cli):
    code, out, _ = cli("parse", "-e", XNYN, "--word", "1")
    assert code == 0
    assert json.loads(out) == {"tag": "Fold", "child": {"tag": "Inr", "child": {"tag": "Eps"}}}


def test_parse_refuses_unguarded_expression(cli):
    code, _, err = cli("parse", "-e", LEFT_REC, "--word", "xx")
    assert code == 2
    assert "not guarded" in err


def test_parse_checks_word_against_alphabet(cli):
    code, _, err = cli("parse", "-e", XNYN, "--word", "xz", "--alphabet", "xy")
    assert code == 2
    assert err.startswith("error: --word")


def test_enumerate(cli):
    assert cli("enumerate", "-e", XNYN, "--max-len", "4")[:2] == (0, "1\nxy\nxxyy\n")


def test_enumerate_default_from_env_file(cli, tmp_path):
    env_path = tmp_path / ".env"
    env_path.write_text("CFX_ENUM_MAX_LEN=2\n", encoding="utf-8")
    assert cli("--env", str(env_path), "enumerate", "-e", XNYN)[:2] == (0, "1\nxy\n")


def test_invalid_setting(cli, tmp_path):
    env_path = tmp_path / ".env"
    env_path.write_text("CFX_FUEL=lots\n", encoding="utf-8")
    code, _, err = cli("--env", str(env_path), "canon", "-r", "x")
    assert code == 2
    assert "CFX_FUEL" in err


def test_usage_errors(cli):
    assert cli()[0] == 2
    assert cli("frobnicate")[0] == 2
    assert cli("contains", "-e", XNYN)[0] == 2
