import json

import pytest

from stencilkit.cli import run


def test_analyze_prints_series(capsys):
    assert run(["analyze", "--p", "2", "--q", "2", "--style", "centered"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "({1, 0, 1/12, ...}, beta=2)"


def test_stability_builtin_json(capsys):
    assert run(["stability", "--builtin", "dx-dx-dxx"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["alpha"] == pytest.approx(0.84375, rel=1e-9)
    assert d["alpha_exact"] == "27/32"
    assert d["support"] == [-3, 3]


def test_stability_writes_growth_csv(tmp_path, capsys):
    assert run(["stability", "--builtin", "dxx", "--sign", "+", "--output-dir", str(tmp_path)]) == 0
    assert (tmp_path / "growth_factor.csv").read_text().startswith("theta,abs_xi\n")
    assert json.loads((tmp_path / "stability.json").read_text())["alpha_exact"] == "1/2"


def test_make_and_compose(tmp_path, capsys):
    assert run(["make", "--p", "1", "--q", "2", "--output-dir", str(tmp_path)]) == 0
    ref = str(tmp_path / "stencil.json")
    assert run(["compose", "--inner", ref, "--outer", ref]) == 0
    out = capsys.readouterr().out
    assert "({1, 0, 1/3, ...}, beta=2)" in out


def test_converge_1d_csv_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(["converge-1d", "--output-dir", str(a)]) == 0
    assert run(["converge-1d", "--output-dir", str(b)]) == 0
    assert (a / "converge_1d.csv").read_bytes() == (b / "converge_1d.csv").read_bytes()
    assert "slope=" in capsys.readouterr().out


def test_sparsity_and_spectrum(capsys):
    assert run(["sparsity", "--n", "25"]) == 0
    assert "nnz=3125" in capsys.readouterr().out
    assert run(["spectrum", "--n", "8", "--h", "4", "--dt", "1"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["spectral_radius"] == pytest.approx(0.25)
    assert d["shifted_condition"] == pytest.approx(1.25)


def test_assemble_writes_matrix(tmp_path, capsys):
    assert run(["assemble", "--stencil", "laplacian-2d", "--n", "5", "--output-dir", str(tmp_path)]) == 0
    assert (tmp_path / "matrix.mtx").exists()


def test_config_file_json_and_toml(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"p": 2, "q": 4}))
    assert run(["analyze", "--config", str(cfg)]) == 0
    assert "accuracy=4" in capsys.readouterr().out
    toml = tmp_path / "c.toml"
    toml.write_text('[analyze]\np = 1\nq = 2\n')
    # command-line flags override the file
    assert run(["analyze", "--config", str(toml), "--q", "4"]) == 0
    assert "accuracy=4" in capsys.readouterr().out


def test_cahn_hilliard_small_run(tmp_path, capsys):
    args = ["cahn-hilliard", "--n", "16", "--t-end", "0.5", "--dt", "0.1", "--binary"]
    assert run(args + ["--output-dir", str(tmp_path)]) == 0
    for name in ("energy.csv", "field.csv", "field.bin", "field.bin.json"):
        assert (tmp_path / name).exists()
    assert "mass_drift" in capsys.readouterr().out


def test_usage_errors_exit_2(tmp_path, capsys):
    assert run(["nonsense"]) == 2
    assert run(["make", "--p", "2"]) == 2
    assert run(["analyze"]) == 2
    assert run(["stability", "--builtin", "dx"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"unknown_key": 1}')
    assert run(["analyze", "--config", str(bad)]) == 2
    assert "unknown config key" in capsys.readouterr().err


def test_computational_failure_exits_1(capsys):
    # the one-sided first derivative has a complex symbol
    assert run(["stability", "--stencil", "1:1:forward", "--sign", "+"]) == 1
    assert "NotDissipativeError" in capsys.readouterr().err


def test_thread_cap_env(monkeypatch, capsys):
    monkeypatch.setenv("STENCILKIT_THREADS", "1")
    assert run(["analyze", "--p", "1", "--q", "2"]) == 0
