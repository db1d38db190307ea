from __future__ import annotations

import json
from fractions import Fraction as F

import pytest

from souslin.bidirected import DAPoint
from souslin.checks import CheckResult
from souslin.cli import run
from souslin.diagonalizer import trace_from_json, verify_trace
from souslin.serialize import branch_from_json


def call(capsys, *argv: str) -> tuple[int, str]:
    code = run(list(argv))
    return code, capsys.readouterr().out


def test_encode_example(capsys):
    code, out = call(capsys, "encode", "--x", "3/4", "--depth", "4")
    assert code == 0 and out.strip() == "⟨0,2,0,0⟩"


def test_encode_json_roundtrip(capsys):
    # hand walk: -7/5 sits in cell [-2,-1) (index 3) at relative position 3/5
    code, out = call(capsys, "encode", "--x=-7/5", "--depth", "5", "--json")
    assert code == 0
    assert json.loads(out)["code"] == [3, 1, 0, 2, 0]


def test_decode(capsys):
    code, out = call(capsys, "decode", "--branch", "0|const:1", "--json")
    assert code == 0 and json.loads(out)["value"] == "2/3"


def test_axioms_example(capsys):
    code, out = call(capsys, "axioms", "--entry-bound", "3", "--depth", "4", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["verdict"] == "holds_to_depth" and data["depth"] == 4
    assert CheckResult.from_json(data).to_json() == data


def test_cut(capsys):
    code, out = call(capsys, "cut", "--point", "3/4", "--level", "2")
    assert code == 0 and "(3/4, 7/8)" in out


def test_scheme_dump_both_spellings(capsys):
    _, a = call(capsys, "scheme", "dump", "--depth", "2", "--children", "3", "--json")
    _, b = call(capsys, "scheme-dump", "--depth", "2", "--children", "3", "--json")
    rows = json.loads(a)
    assert a == b
    assert {"node": [0, 2], "interval": {"lo": "3/4", "hi": "7/8"}} in rows


def test_sigma_member_exit_codes(capsys):
    assert call(capsys, "sigma-member", "--z", "1,5", "--p", "1,2", "--n", "1")[0] == 0
    assert call(capsys, "sigma-member", "--z", "0,9", "--p", "1,2", "--n", "1")[0] == 1


def test_doublearrow_check(capsys):
    code, out = call(capsys, "doublearrow", "check", "--relation", "constructed", "--json")
    data = json.loads(out)
    assert code == 0 and data["verdict"]["verdict"] == "holds_to_depth"
    assert len(data["reports"]) == 22
    code, out = call(capsys, "doublearrow-check", "--assignment", "flipped", "--json")
    data = json.loads(out)
    assert code == 1 and data["verdict"]["witness"]["point"] == {"x": "0/1", "side": 1}


def test_diagonalize_example_and_verify(capsys, tmp_path):
    path = tmp_path / "trace.json"
    code, out = call(capsys, "diagonalize", "--oracle", "double-arrow-w", "--steps", "4", "--out", str(path))
    assert code == 1 and "status: s1_failure" in out
    saved = json.loads(path.read_text())
    assert saved["status"] == "s1_failure" and len(saved["certificates"]) == 1
    assert verify_trace(trace_from_json(saved)).ok
    code, out = call(capsys, "verify-trace", str(path), "--json")
    assert code == 0 and json.loads(out)["verdict"] == "holds_to_depth"


def test_verify_trace_detects_tampering(capsys, tmp_path):
    path = tmp_path / "trace.json"
    call(capsys, "diagonalize", "--steps", "4", "--out", str(path))
    data = json.loads(path.read_text())
    data["steps"][0]["x_n"] = DAPoint(F(1, 3), 1).to_json()
    path.write_text(json.dumps(data))
    assert call(capsys, "verify-trace", str(path))[0] == 1


def test_diagonalize_budget_exit_code(capsys):
    assert call(capsys, "diagonalize", "--steps", "2", "--budget", "2")[0] == 2


def test_branch_json_roundtrip(capsys):
    code, out = call(capsys, "decode", "--branch", '{"prefix": [0], "tail": {"kind": "const", "k": 1}}', "--json")
    data = json.loads(out)
    assert code == 0 and data["value"] == "2/3" and data["exact"] is True
    assert branch_from_json(data["branch"]).restrict(4) == (0, 1, 1, 1)


@pytest.mark.parametrize(
    "argv",
    [
        ["encode", "--x", "3/0", "--depth", "2"],
        ["encode", "--x", "0.5", "--depth", "2"],
        ["encode", "--x", "1/2", "--depth", "-1"],
        ["encode", "--x", "1/2", "--depth", "2", "--bogus"],
        ["frobnicate"],
        [],
        ["verify-trace", "/nonexistent/trace.json"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(argv) == 64
