import json

import pytest

from sparse10adic import records
from sparse10adic.cli import RunConfig, build_parser, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def record_path(tmp_path, capsys):
    path = tmp_path / "run.json"
    code, _, _ = run_cli(capsys, "run", "--digits", "40", "-q", "-o", str(path))
    assert code == 0
    return path


def test_run_writes_record(record_path):
    r = records.load(record_path)
    assert len(r.digits) == 40
    assert r.chosen_exponents[:4] == [3, 103, 2103, 607414603]
    assert not r.incomplete
    assert r.config["target_digits"] == 40


def test_run_to_stdout_is_byte_identical(capsys):
    _, a, _ = run_cli(capsys, "run", "--digits", "30", "-q", "-o", "-")
    _, b, _ = run_cli(capsys, "run", "--digits", "30", "-q", "-o", "-")
    assert a == b
    assert records.loads(a).digits[:2] == [(8, 0), (3, 3)]


def test_record_round_trip(record_path):
    text = record_path.read_text()
    assert records.dumps(records.loads(text)) == text


def test_seed_sweep(tmp_path, capsys):
    template = str(tmp_path / "r-{p1}.json")
    code, _, _ = run_cli(capsys, "run", "--seed-p1", "3", "903", "--digits", "10", "-q", "-o", template)
    assert code == 0
    a, b = records.load(tmp_path / "r-3.json"), records.load(tmp_path / "r-903.json")
    assert a.digits == b.digits and b.chosen_exponents[0] == 903


def test_seed_sweep_needs_placeholder(tmp_path, capsys):
    code, _, err = run_cli(capsys, "run", "--seed-p1", "3", "4", "--digits", "5", "-q",
                           "-o", str(tmp_path / "x.json"))
    assert code == 2 and "{p1}" in err


@pytest.mark.parametrize("fmt", ["text", "csv", "json"])
def test_stats_formats(record_path, capsys, fmt):
    code, out, _ = run_cli(capsys, "stats", str(record_path), "--format", fmt)
    assert code == 0
    if fmt == "json":
        tables = json.loads(out)
        assert [t["table"] for t in tables] == [
            "gaps-q1", "gaps-q2", "gaps-q3", "gaps-q4", "digits", "matrix", "probabilities"]
    else:
        assert "Gap Size" in out


def test_stats_options(record_path, tmp_path, capsys):
    out_path = tmp_path / "t.csv"
    code, _, _ = run_cli(capsys, "stats", str(record_path), "--table", "digits", "--prefix", "10",
                         "--include-seed", "--format", "csv", "-o", str(out_path))
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0].startswith("Digit,1,3,5,7,8,9")
    assert lines[1].endswith(",10")


def test_stats_bad_record(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{\"schema_version\": 1}")
    code, _, err = run_cli(capsys, "stats", str(bad))
    assert code == 2 and "malformed" in err
    code, _, _ = run_cli(capsys, "stats", str(tmp_path / "missing.json"))
    assert code == 2


def test_verify_record(record_path, capsys):
    code, out, _ = run_cli(capsys, "verify", str(record_path))
    summary = json.loads(out)
    assert code == 0 and summary["passed"]
    assert all(c["passed"] for c in summary["runs"][0]["checks"])


def test_verify_catches_corrupted_record(record_path, capsys):
    obj = json.loads(record_path.read_text())
    obj["digits"][7]["b"] = 4
    record_path.write_text(json.dumps(obj))
    code, out, err = run_cli(capsys, "verify", str(record_path))
    assert code == 1
    failed = {c["name"] for c in json.loads(out)["runs"][0]["checks"] if not c["passed"]}
    assert "theorem 1: b_i odd for i >= 2" in failed
    assert "b_8 = 4" in err


def test_verify_fresh(capsys):
    code, out, _ = run_cli(capsys, "verify", "--fresh", "--digits", "25", "--seed-p1", "1", "2")
    assert code == 0
    assert [r["p1"] for r in json.loads(out)["runs"]] == [1, 2]


def test_verify_needs_input(capsys):
    code, _, _ = run_cli(capsys, "verify")
    assert code == 2


def test_oracle_command(capsys):
    code, out, _ = run_cli(capsys, "oracle", "--bound", "100", "--prefix-depth", "3")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert report["scope"]["bound"] == 100


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(p1=0)
    with pytest.raises(ValueError):
        RunConfig(target_digits=0)


def test_parser_defaults():
    args = build_parser().parse_args(["run"])
    assert args.digits == 1014 and args.p1 == 3 and args.output == "run-p{p1}.json"


def test_interrupt_keeps_partial_record(tmp_path, capsys, monkeypatch):
    from sparse10adic.greedy_engine import GreedyEngine

    real = GreedyEngine.iter_run

    def interrupted(self, p1):
        for i, s in enumerate(real(self, p1)):
            if i == 5:
                raise KeyboardInterrupt
            yield s

    monkeypatch.setattr(GreedyEngine, "iter_run", interrupted)
    path = tmp_path / "partial.json"
    code, _, err = run_cli(capsys, "run", "--digits", "50", "-q", "-o", str(path))
    assert code == 130 and "incomplete" in err
    r = records.load(path)
    assert r.incomplete and len(r.digits) == 5
