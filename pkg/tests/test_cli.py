import io
import json

from amcc.analysis import classify
from amcc.catalog import ghz_model, pr_box
from amcc.cli import main
from amcc.empirical import model_from_dict, model_to_dict


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_cli_stdin(capsys, monkeypatch, payload, *argv):
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(payload)))
    return run_cli(capsys, *argv)


def test_catalog_emit_then_classify_roundtrip(capsys, tmp_path):
    path = tmp_path / "pr.json"
    code, out, err = run_cli(
        capsys, "catalog", "pr-box", "--alpha", "0", "--beta", "0",
        "--gamma", "0", "--emit", str(path),
    )
    assert code == 0 and out == ""
    assert "wrote" in err

    code, out, _ = run_cli(capsys, "classify", str(path))
    assert code == 0
    report = json.loads(out)
    in_process = classify(pr_box(0, 0, 0)).to_dict()
    assert report == in_process
    assert report["amcc"] is True and report["cf"] == "1"


def test_classify_reads_stdin(capsys, monkeypatch):
    payload = model_to_dict(ghz_model())
    code, out, _ = run_cli_stdin(capsys, monkeypatch, payload, "classify", "--no-avn")
    assert code == 0
    report = json.loads(out)
    assert report["amcc"] is True
    assert "avn" not in report["witness"]


def test_cf_subcommand(capsys, monkeypatch, tmp_path):
    payload = model_to_dict(pr_box(1, 0, 1))
    code, out, _ = run_cli_stdin(capsys, monkeypatch, payload, "cf")
    assert (code, out.strip()) == (0, "1")

    # A deterministic model has CF = 0.
    from amcc.empirical import deterministic_model
    from amcc.scenario import bell_scenario

    det = model_to_dict(deterministic_model(bell_scenario(2, 2), (0, 0, 0, 0)))
    path = tmp_path / "det.json"
    path.write_text(json.dumps(det))
    code, out, _ = run_cli(capsys, "cf", str(path))
    assert (code, out.strip()) == (0, "0")


def test_catalog_stdout_and_unknown_name(capsys):
    code, out, _ = run_cli(capsys, "catalog", "ghz")
    assert code == 0
    assert model_from_dict(json.loads(out)).tables == ghz_model().tables

    code, _, err = run_cli(capsys, "catalog", "nope")
    assert code == 1 and "unknown catalog model" in err


def test_parity_subcommand_consistency_and_classification(capsys):
    code, out, _ = run_cli(
        capsys, "parity", "--scenario", "bell-2-2-2", "--parities", "0001",
        "--classify",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["consistent"] is False
    assert payload["certificate"] == [0, 1, 2, 3]
    assert payload["classification"]["amcc"] is True


def test_parity_scenario_inferred_from_length(capsys):
    code, out, _ = run_cli(capsys, "parity", "--parities", "01111111")
    assert code == 0
    payload = json.loads(out)
    assert payload["scenario"] == "bell-3-2-2"
    assert payload["consistent"] is False


def test_parity_emit_lift(capsys, tmp_path):
    path = tmp_path / "lift.json"
    code, _, _ = run_cli(
        capsys, "parity", "--scenario", "bell-2-2-2", "--parities", "0001",
        "--emit", str(path),
    )
    assert code == 0
    lifted = model_from_dict(json.loads(path.read_text()))
    assert lifted.tables == pr_box(0, 0, 0).tables


def test_parity_preset_file(capsys, tmp_path):
    preset = {"scenario": "bell-2-2-2", "parities": [0, 0, 0, 1]}
    path = tmp_path / "preset.json"
    path.write_text(json.dumps(preset))
    code, out, _ = run_cli(capsys, "parity", "--preset-file", str(path))
    assert code == 0
    assert json.loads(out)["consistent"] is False


def test_enumerate_parity_counts(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "parity", "--scenario", "bell-2-2-2")
    assert code == 0
    assert json.loads(out) == {"total": 16, "consistent": 8, "amcc": 8}


def test_enumerate_parity_stream(capsys):
    code, out, _ = run_cli(
        capsys, "enumerate", "parity", "--scenario", "bell-2-2-2", "--stream"
    )
    assert code == 0
    lines = [json.loads(line) for line in out.strip().splitlines()]
    assert len(lines) == 17  # 16 verdicts + summary
    assert lines[0]["parities"] == [0, 0, 0, 0]
    assert lines[0]["consistent"] is True
    assert lines[-1]["amcc"] == 8


def test_scan_eight_param(capsys):
    code, out, _ = run_cli(
        capsys, "scan", "eight-param", "--grid", "0,1/4", "--fix", "1=1/4",
        "--fix", "2=0", "--fix", "3=0", "--fix", "4=0", "--fix", "5=0",
        "--fix", "6=0",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["points"] == 4
    assert sum(payload["histogram"].values()) == 4


def test_entropy_subcommand(capsys, monkeypatch):
    payload = model_to_dict(ghz_model())
    code, out, _ = run_cli_stdin(
        capsys, monkeypatch, payload,
        "entropy", "--context", "000", "--subset", "X1,X2",
    )
    assert code == 0
    report = json.loads(out)
    assert report == {
        "guess_probability": "1/4",
        "min_entropy_bits": 2.0,
        "subset_size": 2,
    }


def test_entropy_unknown_context_is_validation_error(capsys, monkeypatch):
    payload = model_to_dict(pr_box(0, 0, 0))
    code, _, err = run_cli_stdin(
        capsys, monkeypatch, payload,
        "entropy", "--context", "000", "--subset", "X1",
    )
    assert code == 2 and "no context" in err


def test_secret_share_transcript(capsys):
    args = (
        "secret-share", "--parities", "01111111", "--rounds", "50",
        "--test-fraction", "1/5", "--seed", "42", "--secret", "a5",
    )
    code, first, _ = run_cli(capsys, *args)
    assert code == 0
    code, second, _ = run_cli(capsys, *args)
    assert first == second
    lines = first.strip().splitlines()
    header = json.loads(lines[0])["header"]
    assert header["seed"] == 42 and header["rng"] == "python-random-mt19937"
    result = json.loads(lines[-1])["result"]
    assert result["success"] is True


def test_signaling_model_exits_2_with_witness(capsys, monkeypatch):
    payload = model_to_dict(pr_box(0, 0, 0))
    payload["tables"]["X1|X2"] = ["1", "0", "0", "0"]
    code, _, err = run_cli_stdin(capsys, monkeypatch, payload, "classify")
    assert code == 2
    assert "disagree" in err


def test_unnormalized_model_exits_2(capsys, monkeypatch):
    payload = model_to_dict(pr_box(0, 0, 0))
    payload["tables"]["X1|X2"] = ["1/2", "0", "0", "1/4"]
    code, _, err = run_cli_stdin(capsys, monkeypatch, payload, "cf")
    assert code == 2 and "sums to" in err


def test_usage_errors_exit_1(capsys):
    code, _, err = run_cli(capsys, "classify", "--bogus-flag")
    assert code == 1
    code, _, err = run_cli(capsys, "parity")
    assert code == 1 and "need --parities" in err


def test_missing_file_exits_2(capsys):
    code, _, err = run_cli(capsys, "classify", "/nonexistent/model.json")
    assert code == 2


def test_enumerate_csp_small_smoke(capsys):
    # Full preset run is covered by the acceptance suite; smoke the plumbing.
    code, out, _ = run_cli(capsys, "enumerate", "csp", "--preset", "eq40", "--jobs", "2")
    assert code == 0
    assert json.loads(out) == {"candidates": 65536, "ns_and_unsat": 2401}
