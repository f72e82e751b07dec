from __future__ import annotations

import json
import pathlib

import pytest

from ngonstab.cli import main, run

HERE = pathlib.Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"


def data(name: str) -> str:
    return str(DATA / name)


GOLDEN_CASES = [
    ("phase_classes_6.txt", ["phase-classes", "6"]),
    ("cusps_4.txt", ["cusps", "4"]),
    ("reduce_12.txt", ["reduce", "12", "--slope", "7/10"]),
    ("classify_6.txt", ["classify", "6", "--slope", "1/2"]),
    ("check_compat_iota3.txt", ["check-compat", data("iota3.json")]),
    ("hn_chain_plus_point.txt", ["hn", data("chain_plus_point.json")]),
    (
        "charge_table.txt",
        ["charge", data("chain_plus_point.json"), "--format", "table"],
    ),
]


@pytest.mark.parametrize("golden_name,argv", GOLDEN_CASES)
def test_golden_outputs(golden_name, argv):
    code, text = run(argv)
    assert code == 0
    assert text == (GOLDEN / golden_name).read_text()


def test_scalar_payload_prints_bare():
    code, text = run(["phase-classes", "6"])
    assert (code, text) == (0, "4\n")


def test_runs_are_deterministic():
    assert run(["classify", "12", "--slope", "5/6"]) == run(
        ["classify", "12", "--slope", "5/6"]
    )


# ---------------------------------------------------------------------------
# verbs with oracles


def test_phase_classes_oracle_agrees():
    code, text = run(["phase-classes", "8", "--oracle"])
    assert code == 0
    payload = json.loads(text)
    assert payload["closed_form"] == payload["brute_force"] == 4


def test_check_compat_oracle_section():
    code, text = run(
        ["check-compat", data("iota3.json"), "--oracle", "--box", "10", "--seed", "3"]
    )
    assert code == 0
    oracle = json.loads(text)["order_oracle"]
    assert oracle["shortcut"] is True
    assert oracle["cyclic_box_search"] is True
    assert oracle["sampled_pairs"]["violations"] == 0
    assert oracle["sampled_pairs"]["box"] == 10


def test_semistable_with_oracle():
    code, text = run(["semistable", data("chain_plus_point.json"), "--oracle"])
    assert code == 0
    rows = json.loads(text)["verdicts"]
    assert [r["verdict"] for r in rows] == ["Stable", "StrictlySemistable"]
    assert all(r["oracle_verdict"] == r["verdict"] for r in rows)


def test_hn_oracle_polygon_agrees():
    code, text = run(["hn", data("chain_plus_point.json"), "--oracle"])
    assert code == 0
    payload = json.loads(text)
    assert payload["polygon"] == payload["polygon_oracle"]


def test_lift_round_trips_through_files():
    code, text = run(["lift", "4", data("gamma0_4.json")])
    assert code == 0
    payload = json.loads(text)
    assert payload["n"] == 4
    assert payload["amplitude_M"] == 1
    # the lifted matrix descends to the input
    assert [row[:2] for row in payload["matrix"][:1]] == [[1, 1]]


def test_rigid_verb():
    code, text = run(["rigid", "2", "--slope", "inf"])
    assert code == 0
    points = json.loads(text)["rigid_points"]
    assert len(points) == 2
    assert {p["start"] for p in points} == {0, 1}


# ---------------------------------------------------------------------------
# failure modes


def test_domain_error_exits_one():
    code, text = run(["lift", "3", data("gamma0_4.json")])
    assert code == 1
    assert text.startswith("error:")


def test_unstable_hn_exits_one():
    code, text = run(["hn", data("unstable_chain.json")])
    assert code == 1
    assert "refine" in text


def test_malformed_json_exits_two_with_position():
    code, text = run(["charge", data("broken.json")])
    assert code == 2
    assert "malformed JSON at line 3, column 1" in text


def test_missing_file_exits_two():
    code, text = run(["charge", data("no_such_file.json")])
    assert code == 2
    assert "error:" in text


def test_schema_error_exits_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "summands": [{"type": "chain"}]}')
    code, text = run(["charge", str(bad)])
    assert code == 2
    assert "missing field" in text


def test_bad_slope_exits_two():
    code, text = run(["reduce", "6", "--slope", "sideways"])
    assert code == 2


def test_bad_arguments_exit_two(capsys):
    assert run(["no-such-verb"])[0] == 2
    assert run(["phase-classes", "0"])[0] == 2
    assert run([])[0] == 2
    capsys.readouterr()  # argparse wrote usage text; swallow it


def test_main_writes_to_streams(capsys):
    assert main(["phase-classes", "4"]) == 0
    out = capsys.readouterr()
    assert out.out == "3\n" and out.err == ""
    assert main(["lift", "3", data("gamma0_4.json")]) == 1
    out = capsys.readouterr()
    assert out.out == "" and out.err.startswith("error:")
