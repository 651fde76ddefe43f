import json
import sys
from pathlib import Path

import pytest

from delcoh import cli
from delcoh.workspace import (
    EXIT_INVALID, EXIT_MATH, EXIT_UNKNOWN, WorkspaceError, load_workspace, parse_rational,
)

ROOT = Path(__file__).resolve().parent.parent
EXAMPLE = str(ROOT / "docs" / "equator.jsonl")
GOLDEN = ROOT / "tests" / "golden" / "sample_character_seed0.json"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, *lines):
    p = tmp_path / "ws.jsonl"
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(p)


# -- workspace loading ------------------------------------------------------------

def test_example_workspace_loads():
    ws = load_workspace(EXAMPLE)
    assert set(ws.characters) == {"quarter_face", "quarter_face_gauged", "trivial", "half_edge", "flat_circle"}
    assert set(ws.cycles) == {"cap", "edge01", "loop"}


def test_parse_rational():
    assert parse_rational("3/4") == parse_rational("6/8")
    for bad in ("1/0", "x", 0.5, True):
        with pytest.raises(WorkspaceError):
            parse_rational(bad)


@pytest.mark.parametrize("line, code, needle", [
    ("not json", EXIT_INVALID, "malformed JSON"),
    ('{"kind": "complex", "name": "K"}', EXIT_INVALID, "simplices"),
    ('{"kind": "widget", "name": "K"}', EXIT_INVALID, "unknown entry kind"),
    ('{"kind": "complex", "name": "@x", "simplices": [[0]]}', EXIT_INVALID, "name"),
    ('{"kind": "map", "name": "m", "source": "@pt", "target": "nowhere", "vertex_map": [[0, 0]]}',
     EXIT_UNKNOWN, "unknown complex"),
    ('{"kind": "map", "name": "m", "source": "@S1", "target": "@interval", "vertex_map": [[0, "a"], [1, "b"], [2, "c"]]}',
     EXIT_INVALID, "not a simplex of the target"),
    ('{"kind": "character", "name": "c", "complex": "@S1", "degree": 1, "T": [[[0, 1, 2], "1/2"]]}',
     EXIT_INVALID, "wrong dimension"),
    ('{"kind": "character", "name": "c", "complex": "@S1", "degree": 0, "T": [], "c": [[[0, 1], "1/2"]]}',
     EXIT_INVALID, "non-integer"),
    ('{"kind": "character", "name": "c", "complex": "@sphere", "degree": 0, "T": [], "c": [[[0, 1], 1]]}',
     EXIT_INVALID, "not a cocycle"),
    ('{"kind": "character", "name": "c", "map": "@equator", "degree": 1, "T_X": [[[0, 1], "1/2"]], "type": "I"}',
     EXIT_INVALID, "type I needs"),
    ('{"kind": "cycle", "name": "z", "map": "@equator", "degree": 1, "C": [[[0, 1], 1]], "C_prime": []}',
     EXIT_MATH, "invalid relative cycle"),
    ('{"kind": "cycle", "name": "z", "map": "@nope", "degree": 1}', EXIT_UNKNOWN, "unknown map"),
])
def test_workspace_errors(tmp_path, line, code, needle):
    path = write(tmp_path, "# a comment", line)
    with pytest.raises(WorkspaceError) as e:
        load_workspace(path)
    assert e.value.code == code
    assert needle in str(e.value) and ":2:" in str(e.value)


def test_duplicate_names(tmp_path):
    line = '{"kind": "complex", "name": "K", "simplices": [[0, 1]]}'
    with pytest.raises(WorkspaceError, match="duplicate"):
        load_workspace(write(tmp_path, line, line))


def test_missing_file(tmp_path):
    with pytest.raises(WorkspaceError) as e:
        load_workspace(tmp_path / "absent.jsonl")
    assert e.value.code == EXIT_INVALID


def test_unsorted_simplex_sign(tmp_path):
    path = write(tmp_path, '{"kind": "character", "name": "c", "complex": "@S1", "degree": 1, '
                           '"T": [[[1, 0], "1/3"]]}')
    assert load_workspace(path).characters["c"].T == (-parse_rational("1/3"), 0, 0)


# -- commands ------------------------------------------------------------------------

@pytest.mark.parametrize("char, cycle, expected", [
    ("quarter_face", "cap", "1/4"),
    ("quarter_face_gauged", "cap", "1/4"),
    ("trivial", "cap", "0/1"),
    ("half_edge", "edge01", "1/2"),
    ("flat_circle", "loop", "5/6"),
])
def test_holonomy_command(capsys, char, cycle, expected):
    code, out, _ = run(capsys, "holonomy", EXAMPLE, char, cycle)
    assert code == 0 and out.strip() == expected


def test_holonomy_mismatch(capsys):
    code, _, err = run(capsys, "holonomy", EXAMPLE, "quarter_face", "edge01")
    assert code == EXIT_MATH and "degree mismatch" in err
    code, _, _ = run(capsys, "holonomy", EXAMPLE, "flat_circle", "cap")
    assert code == EXIT_MATH
    code, _, err = run(capsys, "holonomy", EXAMPLE, "nope", "cap")
    assert code == EXIT_UNKNOWN and "unknown character" in err


def test_cohomology_commands(capsys):
    assert run(capsys, "cohomology", EXAMPLE, "sphere", 2)[:2] == (0, "Z\n")
    assert run(capsys, "cohomology", EXAMPLE, "@rp2", 1, "--coeff", "RZ")[1] == "Z/2\n"
    assert run(capsys, "cohomology", EXAMPLE, "sphere", 7)[1] == "0\n"
    assert run(capsys, "relative", EXAMPLE, "equator", 2)[1] == "Z^2\n"
    assert run(capsys, "relative", EXAMPLE, "@pt_in_S1", 1)[1] == "Z\n"
    assert run(capsys, "relative", EXAMPLE, "@identity", 2)[1] == "0\n"
    assert run(capsys, "relative", EXAMPLE, "unknown_map", 1)[0] == EXIT_UNKNOWN


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["verify", EXAMPLE])
    assert e.value.code == EXIT_INVALID
    with pytest.raises(SystemExit) as e:
        cli.main(["cohomology", EXAMPLE, "sphere", "two"])
    assert e.value.code == EXIT_INVALID


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", EXAMPLE, "equator", 1, "--which", "les2", "--samples", 4, "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [r["status"] for r in data["reports"]] == ["PASS"]
    assert data["reports"][0]["seed"] == 0


def test_verify_text_and_p0(capsys):
    code, out, _ = run(capsys, "verify", EXAMPLE, "@doubling", 2, "--which", "les4", "--samples", 3, "--witnesses")
    assert code == 0 and "PASS" in out
    assert run(capsys, "verify", EXAMPLE, "equator", 0)[0] == EXIT_MATH


def test_verify_seed_env(capsys, monkeypatch):
    args = ("verify", EXAMPLE, "equator", 2, "--which", "les1", "--samples", 3, "--format", "json")
    monkeypatch.setenv("DELCOH_SEED", "17")
    out = json.loads(run(capsys, *args)[1])
    assert out["reports"][0]["seed"] == 17
    monkeypatch.setenv("DELCOH_SEED", "x")
    assert run(capsys, *args)[0] == EXIT_INVALID


def test_verify_is_deterministic(capsys):
    args = ("verify", EXAMPLE, "equator", 2, "--samples", 4, "--format", "json")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_golden_samples():
    sys.path.insert(0, str(ROOT / "scripts"))
    try:
        from make_golden import golden
    finally:
        sys.path.pop(0)
    frozen = json.loads(GOLDEN.read_text(encoding="utf-8"))
    assert golden() == frozen
