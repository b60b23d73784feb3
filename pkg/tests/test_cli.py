import json
from fractions import Fraction

import pytest

from polyprime import cli


def _run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def test_stephens_text(capsys):
    code, out = _run(capsys, ["stephens", "--nu", "8",
                              "--prime-bound", "1000"])
    assert code == 0
    assert "certified_digits" in out
    assert "0.375" in out


def test_stephens_json(capsys):
    code, out = _run(capsys, ["--format", "json", "stephens", "--nu", "8",
                              "--prime-bound", "1000"])
    assert code == 0
    env = json.loads(out)
    assert env["schema"] == "polyprime-output v1"
    assert env["command"] == "stephens"
    assert env["numeric"]["value"].startswith("0.375")


def test_format_after_subcommand(capsys):
    code, out = _run(capsys, ["stephens", "--format", "json", "--nu", "1",
                              "--prime-bound", "100"])
    assert code == 0
    json.loads(out)


def test_density_full_json(capsys):
    code, out = _run(capsys, ["--format", "json", "density",
                              "--a", "2", "--b", "3"])
    assert code == 0
    env = json.loads(out)
    assert env["exact"]["coefficient"] == "921/920"
    assert len(env["table"]) == 4
    num, den = env["exact"]["coefficient"].split("/")
    assert Fraction(int(num), int(den)) == Fraction(921, 920)


def test_density_limit(capsys):
    code, out = _run(capsys, ["--format", "json", "density",
                              "--limit", "2,2", "--nu", "1"])
    assert code == 0
    env = json.loads(out)
    assert env["exact"]["coefficient"] == "6/5"


def test_density_validation_exit_code(capsys):
    code, _ = _run(capsys, ["density", "--a", "2", "--b", "4"])
    assert code == 3
    code, _ = _run(capsys, ["density"])
    assert code == 3


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        cli.main(["stephens"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        cli.main(["nosuchcommand"])
    assert err.value.code == 2


def test_e8_enumerate_json(capsys):
    code, out = _run(capsys, ["--format", "json", "e8", "enumerate"])
    assert code == 0
    env = json.loads(out)
    assert env["numeric"]["total"] == 132462
    counts = {row["type"]: row["count"] for row in env["table"]}
    assert counts["E8"] == 1 and counts["D8"] == 135


def test_e8_table5_csv(capsys):
    code, out = _run(capsys, ["--format", "csv", "e8", "table5"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split(",")[0] == "type"
    assert len(lines) == 20


def test_e8_containment(capsys):
    code, out = _run(capsys, ["--format", "json", "e8", "containment"])
    assert code == 0
    env = json.loads(out)
    assert {"sub": "E7+A1", "super": "E8", "multiplicity": 1} in env["table"]


def test_polyhedral_compare(capsys):
    code, out = _run(capsys, ["--format", "json", "polyhedral",
                              "--compare-paper"])
    assert code == 0
    env = json.loads(out)
    assert env["exact"]["aggregate_coefficient"] == \
        "45917201977683407/23712195741520320"
    verdicts = {(r["type"], r["quotient"]): r for r in env["table"]}
    assert verdicts[("D8", "Z/6")]["value_verdict"] == "match"
