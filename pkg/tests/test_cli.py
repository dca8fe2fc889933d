import json

import numpy as np
import pytest

from chainqec.cli import main


def test_transfer_check(capsys):
    assert main(["transfer-check", "--pst", "6"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["is_perfect"] is True
    np.testing.assert_allclose(payload["transfer_time"], np.pi / 2, rtol=1e-10)
    np.testing.assert_allclose(payload["spectral_bound"], 5.0, atol=1e-10)


def test_transfer_check_config_file(tmp_path, capsys):
    cfg = tmp_path / "chain.cfg"
    cfg.write_text("n_sites = 2\ncouplings = 1.0\nfields = 0.0, 0.0\n")
    assert main(["transfer-check", "--config", str(cfg)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["n_sites"] == 2
    assert payload["is_perfect"] is True


def test_code_info(capsys):
    assert main(["code-info", "--code", "shor:4"]) == 0
    out = capsys.readouterr().out
    assert "# n_qubits 16" in out
    assert "# parity_condition True" in out
    assert "# logical_qubits 1" in out


def test_error_json_on_failure(capsys):
    rc = main(["code-info", "--code", "nonsense"])
    assert rc != 0
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ValueError"
    assert "nonsense" in err["message"]


def test_single_z_cli_json(tmp_path, capsys, warm_cache15):
    rc = main([
        "single-z", "--samples", "4", "--seed", "2",
        "--out", str(tmp_path), "--format", "json",
    ])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["min_success"] >= 1 - 1e-8
    assert (tmp_path / "single_z.csv").exists()
    assert (tmp_path / "manifest.json").exists()


def test_dephasing_cli(tmp_path, capsys):
    rc = main([
        "dephasing", "--pst", "4", "--gammas", "0.05",
        "--out", str(tmp_path), "--format", "json",
    ])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["max_deviation"] < 1e-6


def test_timing_cli_grid_parsing(capsys, warm_cache15):
    rc = main(["timing-sweep", "--grid", "0:0.01:3", "--format", "json"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["points"] == 3
    assert payload["success_at_zero"] == pytest.approx(1.0, abs=1e-9)
