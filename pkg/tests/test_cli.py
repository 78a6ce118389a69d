"""Tests for the command-line interface."""

import json

import pytest

from trisort.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_stabilize_worked_example(capsys):
    code, out, _ = run_cli(capsys, "stabilize", "--three", "--input-string", "0122102")
    assert code == 0
    payload = json.loads(out)
    assert payload["result"] == {"T": 6, "final": "2221100"}
    assert payload["invocation"]["input_string"] == "0122102"
    assert payload["schema_version"] == 1


def test_landmarks_example(capsys):
    code, out, _ = run_cli(capsys, "landmarks", "--input-string", "2010")
    assert code == 0
    result = json.loads(out)["result"]
    assert {k: result[k] for k in ("L", "R", "U", "K", "M")} == {
        "L": 1,
        "R": 3,
        "U": 3,
        "K": 3,
        "M": None,
    }


def test_enumerate_example(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "--n", "2", "--p", "0.5")
    assert code == 0
    excess = json.loads(out)["result"]["excess"]
    assert excess == {"P(E=0)": 0.875, "P(E=1)": 0.125}


def test_evolve_steps(capsys):
    code, out, _ = run_cli(
        capsys, "evolve", "--three", "--input-string", "0122102", "--steps", "2"
    )
    assert code == 0
    assert json.loads(out)["result"]["trajectory"] == ["0122102", "0212120", "2021210"]


def test_invalid_string_exits_1(capsys):
    code, _, err = run_cli(capsys, "stabilize", "--input-string", "0x2")
    assert code == 1
    assert "error" in json.loads(err)


def test_oversized_enumeration_exits_1(capsys):
    code, _, err = run_cli(capsys, "enumerate", "--n", "20", "--p", "0.5")
    assert code == 1
    assert "error" in json.loads(err)


def test_out_of_range_density_exits_1(capsys):
    code, _, err = run_cli(
        capsys, "sample", "--n", "5", "--p", "1.5", "--seed", "1"
    )
    assert code == 1
    assert "error" in json.loads(err)


def test_artifact_written_atomically(tmp_path, capsys):
    path = tmp_path / "out.json"
    code, _, _ = run_cli(
        capsys, "--output", str(path), "rw", "--p", "0.4", "--escape"
    )
    assert code == 0
    payload = json.loads(path.read_text())
    assert payload["result"]["escape_probability"] == pytest.approx(1 / 3, abs=1e-12)
    # failure leaves no artifact behind
    bad = tmp_path / "bad.json"
    code, _, _ = run_cli(capsys, "--output", str(bad), "rw", "--p", "1.5", "--escape")
    assert code == 1
    assert not bad.exists()
    assert list(tmp_path.glob("*.tmp")) == []


def test_probabilities_print_12_significant_digits(capsys):
    code, out, _ = run_cli(capsys, "rw", "--p", "0.4", "--gf", "1.0")
    assert code == 0
    assert "0.666666666667" in out


def test_config_file_defaults_and_flag_priority(tmp_path, capsys):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("n=100\np=0.5\nseed=1\nsamples=200\n")
    code, out, _ = run_cli(
        capsys, "--config", str(cfg), "mc-excess", "--samples", "300"
    )
    assert code == 0
    invocation = json.loads(out)["invocation"]
    assert invocation["n"] == 100 and invocation["seed"] == 1
    assert invocation["samples"] == 300  # flag wins over config


def test_unknown_config_key_exits_1(tmp_path, capsys):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("bogus=1\n")
    code, _, err = run_cli(capsys, "--config", str(cfg), "rw", "--p", "0.4", "--escape")
    assert code == 1
    assert "bogus" in json.loads(err)["error"]


def test_missing_required_after_config_exits_1(capsys):
    code, _, err = run_cli(capsys, "mc-excess", "--samples", "10")
    assert code == 1
    assert "--n" in json.loads(err)["error"] or "--seed" in json.loads(err)["error"]


def test_sample_roundtrip_file(tmp_path, capsys):
    path = tmp_path / "samples.txt"
    code, _, _ = run_cli(
        capsys, "sample", "--n", "16", "--p", "0.5", "--seed", "8",
        "--count", "3", "--three", "--out", str(path),
    )
    assert code == 0
    lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    assert len(lines) == 3
    for line in lines:
        s, u = line.split()
        assert s.count("1") == 1 and s.index("1") + 1 == int(u)


def test_threads_flag_does_not_change_results(capsys):
    args = ["mc-excess", "--n", "100", "--p", "0.5", "--samples", "500", "--seed", "4"]
    _, out1, _ = run_cli(capsys, *args)
    _, out4, _ = run_cli(capsys, "--threads", "4", *args)
    r1 = json.loads(out1)["result"]["estimates"]
    r4 = json.loads(out4)["result"]["estimates"]
    assert r1 == r4


def test_rw_excursion_chain(capsys):
    code, out, _ = run_cli(
        capsys, "rw", "--p", "0.5", "--excursion-horizon", "200", "--seed", "6"
    )
    assert code == 0
    exc = json.loads(out)["result"]["excursion"]
    assert exc["total"] == exc["tau"][exc["N"] + 1] - exc["tau"][1]


def test_mc_t2_samples_csv(tmp_path, capsys):
    path = tmp_path / "t2.csv"
    code, out, _ = run_cli(
        capsys, "mc-t2", "--n", "100", "--p", "0.7", "--samples", "50",
        "--seed", "2", "--samples-out", str(path),
    )
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "value" and len(lines) == 51
