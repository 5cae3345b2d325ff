import numpy as np
import pytest

from weylcalc.cli import main, parse_backend, parse_symbol, UsageError
from weylcalc.fileio import read_field, read_matrix, write_field
from weylcalc.pairs import HermiteBackend, SkewedBackend
from weylcalc.symbols import GaussianSymbolParams


def test_verify_pass_exit_zero(capsys, tmp_path):
    out = tmp_path / "r.txt"
    assert main(["verify", "sectorial", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "verdict = pass" in text
    assert out.read_text() == text


def test_verify_failure_exit_one(capsys):
    assert main(["verify", "domination"]) == 1
    assert "domination.C_spread" in capsys.readouterr().err


def test_verify_unknown_suite_exit_two(capsys):
    assert main(["verify", "nope"]) == 2
    assert "unknown suite" in capsys.readouterr().err


def test_verify_bad_profile_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "ccr", "--profile", "huge"])
    assert exc.value.code == 2


def test_verify_config_overrides(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[verify]\nseed = 3\n\n[ccr]\nN = 16\n")
    assert main(["verify", "ccr", "--config", str(cfg)]) == 0
    assert "verdict = pass" in capsys.readouterr().out


def test_verify_config_errors(tmp_path, capsys):
    assert main(["verify", "ccr", "--config", str(tmp_path / "missing.ini")]) == 2
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[verify]\nN = not a number(\n")
    assert main(["verify", "ccr", "--config", str(cfg)]) == 2


def test_verify_is_deterministic(capsys):
    main(["verify", "sigma"])
    first = capsys.readouterr().out
    main(["verify", "sigma"])
    assert capsys.readouterr().out == first


def test_quantize_writes_matrix(tmp_path, capsys):
    out = tmp_path / "m.bin"
    assert main(["quantize", "--symbol", "mehler:1,1", "--backend", "grid:32", "--out", str(out)]) == 0
    M = read_matrix(out)
    assert M.shape == (32, 32)
    assert "rows = 32" in capsys.readouterr().out


def test_quantize_from_field_file(tmp_path):
    field = tmp_path / "a.bin"
    write_field(field, np.ones((16, 16)), 1, 16)
    out = tmp_path / "m.bin"
    assert main(["quantize", "--symbol", str(field), "--backend", "grid:16", "--out", str(out)]) == 0
    assert np.allclose(read_matrix(out), np.eye(16), atol=1e-13)


def test_quantize_bad_inputs(capsys):
    assert main(["quantize", "--symbol", "/no/such/file", "--backend", "grid:32"]) == 2
    assert main(["quantize", "--symbol", "gaussian:1,0.5", "--backend", "grid:7"]) == 2
    assert main(["quantize", "--symbol", "gaussian:1,-1", "--backend", "grid:32"]) == 2
    assert main(["quantize", "--symbol", "gaussian:1", "--backend", "grid:32"]) == 2
    assert main(["quantize", "--symbol", "gaussian:1,1", "--backend", "warp:3"]) == 2


def test_moyal_methods(tmp_path, capsys):
    assert main(["moyal", "--a", "mehler:1,1", "--b", "mehler:2,1", "--method", "exact-gaussian"]) == 0
    out = capsys.readouterr().out
    target = GaussianSymbolParams(1.0, 0.0 + np.tanh(1.5))
    assert f"lambda = {target.lam:.6e}" in out
    path = tmp_path / "p.bin"
    assert main(["moyal", "--a", "gaussian:1,0.5", "--b", "gaussian:1,1", "--method", "fft",
                 "--N", "32", "--out", str(path)]) == 0
    values, d, N = read_field(path)
    assert (d, N) == (1, 32)
    assert main(["moyal", "--a", "gaussian:1,0.5", "--b", "gaussian:1,1", "--method", "expansion:2"]) == 0
    assert main(["moyal", "--a", "gaussian:1,0.5", "--b", "gaussian:1,1", "--method", "expansion:9"]) == 2
    assert main(["moyal", "--a", "gaussian:1,0.5", "--b", "gaussian:1,1", "--method", "magic"]) == 2


def test_report_kinds(capsys):
    assert main(["report", "seminorms", "--symbol", "gaussian:1,0.5", "--m", "2"]) == 0
    assert main(["report", "spectrum", "--backend", "hermite:12"]) == 0
    assert main(["report", "constants", "--suite", "domination", "--theta", "0.5"]) == 0
    assert "C_single_power" in capsys.readouterr().out
    assert main(["report", "constants", "--theta", "2.0"]) == 2
    assert main(["report", "seminorms"]) == 2


def test_parse_helpers():
    assert isinstance(parse_backend("hermite:10"), HermiteBackend)
    assert isinstance(parse_backend("skew:1:grid:16"), SkewedBackend)
    a, pg = parse_symbol("gaussian:2,0.5")
    assert pg is None and a.c == 2.0
    with pytest.raises(UsageError):
        parse_symbol("mehler:1,2")
