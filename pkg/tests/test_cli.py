import json

import pytest

from families import FIXTURES
from solenoid_homology.cli import main


def run(capsys, *args):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", ["f", "g", "h", "k"])
def test_analyze_matches_golden(capsys, name):
    code, out, _ = run(capsys, "analyze", "--format", "json", FIXTURES / f"{name}.sol")
    assert code == 0
    golden = json.loads((FIXTURES / f"{name}.golden.json").read_text())
    assert json.loads(out) == golden


def test_output_is_deterministic(capsys):
    args = ("analyze", "--format", "json", FIXTURES / "h.sol", FIXTURES / "f.sol")
    first = run(capsys, *args)[1]
    second = run(capsys, *args)[1]
    assert first == second
    doc = json.loads(first)
    assert [d["path"] for d in doc] == [str(FIXTURES / "h.sol"), str(FIXTURES / "f.sol")]


def test_text_output(capsys):
    code, out, _ = run(capsys, "analyze", FIXTURES / "h.sol")
    assert code == 0
    assert "H^u_1 = Z_2" in out and "w = [-1, 1]" in out


@pytest.mark.parametrize(
    "name, code, failure",
    [
        ("f", 0, None),
        ("fold", 1, "nonfolding"),
        ("rotation", 1, "expansion_surrogate"),
        ("split", 1, "mixing"),
    ],
)
def test_validate_exit_codes(capsys, name, code, failure):
    got, out, _ = run(capsys, "validate", "--format", "json", FIXTURES / f"{name}.sol")
    assert got == code
    if failure:
        assert failure in json.loads(out)["failures"]


def test_validate_text_names_fold_position(capsys):
    _, out, _ = run(capsys, "validate", FIXTURES / "fold.sol")
    assert "fold in word of a at position 1" in out


def test_analyze_invalid_rule(capsys):
    code, out, _ = run(capsys, "analyze", "--format", "json", FIXTURES / "rotation.sol")
    assert code == 1 and json.loads(out)["error"] == "validation failed"


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", tmp_path / "nope.sol")
    assert code == 2 and "error" in err


def test_parse_error_reports_location(capsys, tmp_path):
    p = tmp_path / "bad.sol"
    p.write_text("edges: a\na -> a^2\n")
    code, _, err = run(capsys, "validate", p)
    assert code == 2 and ":2:" in err and "malformed exponent" in err


def test_worst_exit_code_wins(capsys, tmp_path):
    code, _, _ = run(capsys, "validate", "--quiet", FIXTURES / "f.sol", FIXTURES / "fold.sol")
    assert code == 1
    code, out, _ = run(capsys, "validate", "--quiet", FIXTURES / "f.sol", tmp_path / "missing.sol")
    assert code == 2 and out == ""


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["analyze"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["analyze", "--power", "0", str(FIXTURES / "f.sol")])
    assert info.value.code == 2


def test_power_flag(capsys):
    _, out, _ = run(capsys, "dimgroup", "--format", "json", "--power", "2", FIXTURES / "f.sol")
    assert json.loads(out)["dim_s"]["abs_det"] == 9


def test_cech_command(capsys):
    code, out, _ = run(capsys, "cech", "--format", "json", FIXTURES / "h.sol")
    data = json.loads(out)
    assert code == 0 and data["h1"]["abs_det"] == 1 and data["matches_h_u0"] is None


def test_selfcheck_command(capsys):
    code, out, _ = run(capsys, "selfcheck", "--format", "json", FIXTURES / "k.sol")
    assert code == 0 and json.loads(out)["passed"] is True


def test_replay_negative_control(capsys):
    code, out, _ = run(
        capsys, "selfcheck", "--format", "json", "--replay", FIXTURES / "h_corrupt.json", FIXTURES / "h.sol"
    )
    assert code == 1
    failed = [c["name"] for c in json.loads(out)["checks"] if not c["passed"]]
    assert "gamma_s_fixes_w" in failed


def test_replay_of_genuine_golden(capsys):
    code, _, _ = run(capsys, "selfcheck", "--quiet", "--replay", FIXTURES / "h.golden.json", FIXTURES / "h.sol")
    assert code == 0
