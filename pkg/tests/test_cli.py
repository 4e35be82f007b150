"""Command-line dispatch: golden outputs, exit codes, JSON mode, errors."""

import json
from pathlib import Path

import pytest

from modalkit.cli import dispatch

GOLDEN = Path(__file__).parent / "golden"

F1_JSON = {"worlds": 1, "rel": [[0, 0]]}
F2_JSON = {"worlds": 2, "rel": [[0, 1]]}
U2_JSON = {"worlds": 2, "rel": [[0, 0], [0, 1], [1, 0], [1, 1]]}


@pytest.fixture
def write(tmp_path):
    def _write(name, payload):
        path = tmp_path / name
        if isinstance(payload, str):
            path.write_text(payload, encoding="utf-8")
        else:
            path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    return _write


def run(capsys, argv):
    code = dispatch(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_golden_check(write, capsys):
    frame = write("f2.json", F2_JSON)
    code, out, err = run(capsys, ["check", "--frame", frame,
                                  "--formula", "[]p0 -> p0"])
    assert code == 1
    assert out == (GOLDEN / "check_f2.txt").read_text()
    assert err == ""


def test_golden_duality(write, capsys):
    frame = write("f2.json", F2_JSON)
    code, out, err = run(capsys, ["duality", "--frame", frame])
    assert code == 0
    assert out == (GOLDEN / "duality_f2.txt").read_text()


def test_golden_translate(capsys):
    code, out, err = run(capsys, ["translate", "--formula", "[]p0"])
    assert code == 0
    assert out == (GOLDEN / "translate_box.txt").read_text()


def test_check_valid_formula(write, capsys):
    frame = write("f2.json", F2_JSON)
    code, out, _ = run(capsys, ["check", "--frame", frame,
                                "--formula", "p0 -> p0"])
    assert code == 0 and out == "valid\n"


def test_outputs_are_deterministic(write, capsys):
    frame = write("f2.json", F2_JSON)
    first = run(capsys, ["check", "--frame", frame, "--formula", "[]p0 -> p0"])
    second = run(capsys, ["check", "--frame", frame, "--formula", "[]p0 -> p0"])
    assert first == second


def test_json_mode(write, capsys):
    frame = write("f2.json", F2_JSON)
    code, out, _ = run(capsys, ["--json", "check", "--frame", frame,
                                "--formula", "[]p0 -> p0"])
    assert code == 1
    payload = json.loads(out)
    assert payload == {
        "valid": False,
        "countermodel": {"valuation": {"p0": []}, "world": 1},
    }


def test_usage_error_is_exit_2(capsys):
    code, out, err = run(capsys, ["check", "--frame", "x.json", "--bogus"])
    assert code == 2
    assert err.startswith("error:")


def test_parse_error_is_exit_2(write, capsys):
    frame = write("f2.json", F2_JSON)
    code, _, err = run(capsys, ["check", "--frame", frame, "--formula", "p0 ->"])
    assert code == 2
    assert err.startswith("error:")


def test_missing_file_is_exit_2(capsys):
    code, _, err = run(capsys, ["check", "--frame", "/nonexistent.json",
                                "--formula", "p0"])
    assert code == 2
    assert err.startswith("error:")


def test_validates_command(write, capsys):
    frame = write("f1.json", F1_JSON)
    axioms = write("ax.txt", "# reflexive logic\n[]p0 -> p0\n[]p0 -> [][]p0\n")
    code, out, _ = run(capsys, ["validates", "--frame", frame, "--axioms", axioms])
    assert code == 0 and "validates all 2 axiom(s)" in out

    frame2 = write("f2.json", F2_JSON)
    code, out, _ = run(capsys, ["validates", "--frame", frame2, "--axioms", axioms])
    assert code == 1 and "countermodel" in out


def test_cm_cf_em_round_trip(write, capsys):
    frame = write("f2.json", F2_JSON)
    code, out, _ = run(capsys, ["cm", "--frame", frame])
    assert code == 0
    algebra = json.loads(out)
    assert algebra == {"atoms": 2, "diamond": [[], [0]]}

    algebra_path = write("a.json", algebra)
    code, out, _ = run(capsys, ["cf", "--algebra", algebra_path])
    assert code == 0
    assert json.loads(out) == {"rel": [[0, 1]], "worlds": 2}

    code, out, _ = run(capsys, ["em", "--algebra", algebra_path])
    assert code == 0
    assert json.loads(out) == algebra


def test_free_and_canonicity_commands(write, capsys):
    axioms = write("ax.txt", "[]p0 -> p0\np0 -> []<>p0\n")
    pres = write("pres.json", {"frames": [U2_JSON], "axioms_file": "ax.txt"})
    code, out, _ = run(capsys, ["free", "--presentation", pres, "--n", "1"])
    assert code == 0 and "free algebra on 1 generator(s)" in out

    code, out, _ = run(capsys, ["canonicity", "--presentation", pres, "--n", "1"])
    assert code == 0
    assert "verdict: canonical at level 1" in out

    code, out, _ = run(capsys, ["--json", "probe-power", "--presentation", pres,
                                "--n", "1", "--i-count", "2"])
    assert code == 0
    assert json.loads(out)["isomorphic"] is True


def test_fo_and_qm_commands(write, capsys):
    frame = write("f1.json", F1_JSON)
    code, out, _ = run(capsys, ["fo-check", "--frame", frame,
                                "--fo", "forall x (x R x)"])
    assert code == 0 and out == "satisfied\n"

    frame2 = write("f2.json", F2_JSON)
    code, out, _ = run(capsys, ["fo-check", "--frame", frame2,
                                "--fo", "forall x (x R x)"])
    assert code == 1 and out == "not satisfied\n"

    code, out, _ = run(capsys, ["qm-check", "--fo", "forall x (x R x)"])
    assert code == 0 and out == "quasi-modal\n"

    code, out, _ = run(capsys, ["qm-check", "--fo", "forall x exists y (y R x)"])
    assert code == 1 and out.startswith("not quasi-modal:")


def test_morphisms_iso_union_subframe(write, capsys):
    f1 = write("f1.json", F1_JSON)
    f2 = write("f2.json", F2_JSON)
    code, out, _ = run(capsys, ["morphisms", "--source", f2, "--target", f2])
    assert code == 0 and "[0, 1]" in out

    code, out, _ = run(capsys, ["morphisms", "--source", f1, "--target", f2])
    assert code == 1 and out == "no bounded morphisms\n"

    flipped = write("flip.json", {"worlds": 2, "rel": [[1, 0]]})
    code, out, _ = run(capsys, ["iso", "--left", f2, "--right", flipped])
    assert code == 0 and out == "isomorphic: [1, 0]\n"
    code, out, _ = run(capsys, ["iso", "--left", f1, "--right", f2])
    assert code == 1 and out == "not isomorphic\n"

    code, out, _ = run(capsys, ["union", "--frames", f1, f1])
    assert code == 0
    assert json.loads(out) == {"rel": [[0, 0], [1, 1]], "worlds": 2}

    code, out, _ = run(capsys, ["subframe", "--frame", f2, "--seeds", "1"])
    assert code == 0
    lines = out.splitlines()
    assert json.loads(lines[0]) == {"rel": [], "worlds": 1}
    assert lines[1] == "worlds: [1]"


def test_ultraproduct_command(write, capsys):
    f1 = write("f1.json", F1_JSON)
    f2 = write("f2.json", F2_JSON)
    code, out, _ = run(capsys, ["ultraproduct", "--frames", f1, f2, "--at", "1"])
    assert code == 0
    assert json.loads(out.splitlines()[0]) == {"rel": [[0, 1]], "worlds": 2}

    code, _, err = run(capsys, ["ultraproduct", "--frames", f1, f2,
                                "--nonprincipal"])
    assert code == 2 and "principal" in err


def test_gt_commands(write, capsys):
    cls = write("cls.json", {"fo": "forall x (x R x)", "bound": 3})
    code, out, _ = run(capsys, ["gt-closure", "--class", cls, "--bound", "3"])
    assert code == 0 and "verdict: closed within bound 3" in out

    singleton = write("single.json", {"frames": [F1_JSON]})
    code, out, _ = run(capsys, ["gt-closure", "--class", singleton, "--bound", "2"])
    assert code == 1 and "NOT closed" in out

    code, out, _ = run(capsys, ["gt-search", "--class", cls,
                                "--universe-bound", "3", "--depth", "1",
                                "--vars", "1"])
    assert code == 0 and out == "[]p0 -> p0\n"

    code, out, _ = run(capsys, ["gt-search", "--class", singleton,
                                "--universe-bound", "2", "--depth", "1",
                                "--vars", "1"])
    assert code == 1 and out == "none\n"


def test_config_and_env_override_caps(write, capsys, monkeypatch):
    big = write("big.json", {"worlds": 20, "rel": []})
    code, _, err = run(capsys, ["duality", "--frame", big])
    assert code == 2 and "cap" in err

    config = write("config.json", {"max_worlds": 32})
    code, _, _ = run(capsys, ["--config", config, "duality", "--frame", big])
    assert code == 0

    monkeypatch.setenv("MODALKIT_MAX_WORLDS", "32")
    code, _, _ = run(capsys, ["duality", "--frame", big])
    assert code == 0
    monkeypatch.setenv("MODALKIT_MAX_WORLDS", "bogus")
    code, _, err = run(capsys, ["duality", "--frame", big])
    assert code == 2

    bad_config = write("bad.json", {"max_wrlds": 32})
    code, _, err = run(capsys, ["--config", bad_config, "duality", "--frame", big])
    assert code == 2 and "unknown config keys" in err
