import json

import pytest

from mertenslab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run_cli(capsys, *argv)
    return code, json.loads(out)


def test_identity_bilinear_example(capsys):
    code, payload = run_json(capsys, "identity", "--mode", "bilinear", "--N", "2")
    assert code == 0
    assert payload["schema"] == 1
    assert payload["results"]["value"] == -1
    assert payload["results"]["oracle"] == -1
    assert payload["results"]["match"] is True


def test_identity_flexible(capsys):
    code, payload = run_json(
        capsys, "identity", "--mode", "flexible", "--K", "11", "--ranges", "3,2"
    )
    assert code == 0
    assert payload["results"]["value"] == -2


def test_identity_hypothesis_error_exit2(capsys):
    code = main(["identity", "--mode", "uniform", "--d", "2", "--K", "10", "--N", "2"])
    assert code == 2
    err = capsys.readouterr().err
    assert "(N+1)^d > K" in err


def test_meissel_example(capsys):
    code, payload = run_json(capsys, "meissel", "--x", "0.5")
    assert code == 0
    assert payload["results"]["value"] == 0
    code, payload = run_json(capsys, "meissel", "--x", "3.7")
    assert payload["results"]["value"] == 1


def test_cardinal_verify(capsys):
    code, payload = run_json(capsys, "cardinal", "--n", "4", "--verify")
    assert code == 0
    assert payload["results"]["identity_verified"] is True
    assert payload["results"]["mertens"] == -1


def test_mobius_cmd(capsys):
    code, payload = run_json(capsys, "mobius", "--K", "6", "--ranges", "2,3")
    assert code == 0
    assert payload["results"]["value"] == 1


def test_constants_cmd(capsys):
    code, payload = run_json(capsys, "constants")
    assert code == 0
    vals = payload["results"]["values"]
    assert abs(vals["alpha"] - 1 - 0.4603545) < 1e-6
    theta = payload["results"]["window_theta_example"]["theta"]
    assert 0 < theta < 1


def test_byte_identical_reruns(capsys):
    args = ("identity", "--mode", "flexible", "--K", "30", "--ranges", "5,5")
    _, out1 = run_cli(capsys, *args)
    _, out2 = run_cli(capsys, *args)
    assert out1 == out2


def test_seeded_inclusion_exclusion(capsys):
    args = (
        "--seed", "42", "identity", "--mode", "inclusion-exclusion",
        "--K", "8", "--ranges", "2,3", "--trials", "20",
    )
    code, payload = run_json(capsys, *args)
    assert code == 0
    assert payload["results"]["all_trials_zero"] is True


def test_spectrum_csv(capsys):
    code, out = run_cli(capsys, "--format", "csv", "spectrum", "--N", "5")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "N,k,lambda,residual"
    assert len(lines) == 6


def test_spectrum_json_residual_contract(capsys):
    code, payload = run_json(capsys, "spectrum", "--N", "40")
    assert code == 0
    assert payload["results"]["residual_contract"] is True


def test_scan_csv(capsys):
    code, out = run_cli(
        capsys, "--format", "csv", "scan", "--k-values", "1,-1", "--N-values", "60"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("k,N,index,lambda_over_n")
    assert len(lines) == 3


def test_stats_text(capsys):
    code, out = run_cli(capsys, "--format", "text", "stats", "--N", "10")
    assert code == 0
    # Tr(A(10)) = sum floor(100/n^2) = 100+25+11+6+4+2+2+1+1+1
    assert "trace_a = 153" in out


def test_quadform_trace_z2(capsys):
    code, payload = run_json(capsys, "quadform", "--route", "trace-z2", "--N", "2")
    assert code == 0
    assert payload["results"]["ratio"] == pytest.approx(0.25)


def test_quadform_ranksplit(capsys):
    code, payload = run_json(capsys, "quadform", "--route", "ranksplit", "--N", "20")
    assert code == 0
    assert payload["results"]["m_quadform"] == payload["results"]["n"] ** 2 * 0 + (
        payload["results"]["m_quadform"]
    )


def test_quadform_spectral(capsys):
    code, payload = run_json(
        capsys, "quadform", "--route", "spectral", "--N", "30", "--K-list", "1,30"
    )
    assert code == 0
    assert len(payload["results"]["reports"]) == 2


def test_mertens_weights(capsys):
    code, payload = run_json(capsys, "mertens", "--x", "4", "--g", "principal")
    assert payload["results"]["value"] == -1
    code, payload = run_json(
        capsys, "mertens", "--x", "2", "--g", "power", "--s", "1"
    )
    assert payload["results"]["value"]["re"] == pytest.approx(0.5)


def test_slow_guard():
    with pytest.raises(SystemExit):
        main(["stats", "--N", "5000"])


def test_pi_check_cmd(capsys):
    code, payload = run_json(capsys, "pi-check", "--N", "10")
    assert code == 0
    assert payload["results"]["lhs"] == 25


def test_terms_csv(capsys):
    code, out = run_cli(
        capsys, "--format", "csv", "terms", "--d", "2", "--N-list", "10,20"
    )
    assert code == 0
    assert out.splitlines()[0] == "N,term_count,ratio"


def test_output_file(tmp_path, capsys, monkeypatch):
    target = tmp_path / "out.json"
    code = main(["--output", str(target), "meissel", "--x", "2"])
    assert code == 0
    payload = json.loads(target.read_text())
    assert payload["results"]["value"] == 1
    # env-var default directory for relative paths
    monkeypatch.setenv("MERTENSLAB_OUT_DIR", str(tmp_path))
    code = main(["--output", "rel.json", "meissel", "--x", "2"])
    assert (tmp_path / "rel.json").exists()
