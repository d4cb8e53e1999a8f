"""Tests for the config model and the command-line entry point."""

import json

import pytest

from berrydet import ConfigError
from berrydet.cli import (
    CSV_HEADER,
    DEMO_CONFIG,
    RunConfig,
    config_hash,
    main,
)


def write_config(tmp_path, raw, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(raw))
    return str(path)


def gamma_from_stdout(text, method="holonomy"):
    for line in text.splitlines():
        if line.startswith(f"gamma[{method}]"):
            return float(line.split("=")[1])
    raise AssertionError(f"no gamma[{method}] line in output:\n{text}")


def test_config_defaults_roundtrip():
    cfg = RunConfig.from_dict({})
    assert set(cfg.to_dict()) == set(DEMO_CONFIG)
    again = RunConfig.from_dict(cfg.to_dict())
    assert again.to_dict() == cfg.to_dict()
    assert cfg.m_list == [2.0, 4.0, 8.0, 16.0]


@pytest.mark.parametrize("raw,fragment", [
    ({"bogus": 1}, "unknown config keys"),
    ({"family": "spin"}, "family"),
    ({"family": {"type": "warp_drive"}}, "family"),
    ({"level": "zero"}, "level"),
    ({"gauge_steps": 8}, "gauge_steps"),
    ({"gauge_steps": True}, "gauge_steps"),
    ({"det_steps": 4}, "det_steps"),
    ({"wilson_points": 8}, "wilson_points"),
    ({"m_list": []}, "m_list"),
    ({"m_list": [2.0, -1.0]}, "m_list"),
    ({"m_list": [4.0, 2.0]}, "m_list"),
    ({"s_list": []}, "s_list"),
    ({"s_list": [float("nan")]}, "s_list"),
    ({"sweep_m": 0}, "sweep_m"),
    ({"gamma_method": "magic"}, "gamma_method"),
    ({"seed": "zero"}, "seed"),
])
def test_config_rejects_bad_fields(raw, fragment):
    with pytest.raises(ConfigError, match=fragment):
        RunConfig.from_dict(raw)


def test_config_hash_stable_and_sensitive():
    h0 = config_hash(RunConfig.from_dict({}))
    assert h0 == config_hash(RunConfig.from_dict({}))
    assert len(h0) == 64 and set(h0) <= set("0123456789abcdef")
    assert h0 != config_hash(RunConfig.from_dict({"level": 0.5}))


def test_demo_csv_is_deterministic(tmp_path, capsys):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    # demo ignores --config entirely, even a path that does not exist
    assert main(["demo", "--config", str(tmp_path / "missing.json"),
                 "--out", str(out1), "--quiet"]) == 0
    assert main(["demo", "--out", str(out2), "--quiet"]) == 0
    assert capsys.readouterr().out == ""
    text = out1.read_text()
    lines = text.splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + len(DEMO_CONFIG["m_list"])
    assert out1.read_bytes() == out2.read_bytes()


def test_berry_reports_all_methods_and_passes(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "family": {"type": "spin_half", "theta": 1.0471975511965976},
        "gauge_steps": 1024,
    })
    assert main(["berry", "--config", cfg]) == 0
    out = capsys.readouterr().out
    for method in ("holonomy", "trace", "wilson", "exterior"):
        assert f"gamma[{method}]" in out
    assert "check berry_methods_agree: PASS" in out
    # closed form for this family pins the value
    assert abs(gamma_from_stdout(out) - 1.5707963) < 1e-4


def test_det_command_single_row_and_overrides(tmp_path):
    out = tmp_path / "det.csv"
    assert main(["det", "--m", "1,3", "--steps", "512",
                 "--out", str(out), "--quiet"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 2  # det keeps only the largest m
    assert lines[1].startswith("3,")


def test_seed_flag_overrides_random_family(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "family": {"type": "random_gapped", "n": 4, "nminus": 2, "seed": 0},
    })
    gammas = []
    for seed in (1, 2):
        assert main(["berry", "--config", cfg, "--seed", str(seed)]) == 0
        gammas.append(gamma_from_stdout(capsys.readouterr().out))
    assert gammas[0] != gammas[1]


def test_sweep_command_checks_endpoints(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "family": {"type": "spin_half", "theta": 1.0471975511965976},
        "s_list": [0.0, 1.0],
        "sweep_m": 4.0,
    })
    assert main(["sweep", "--config", cfg]) == 0
    out = capsys.readouterr().out
    assert "check sweep_start_matches_blocks: PASS" in out
    assert "check sweep_endpoint_matches_direct: PASS" in out


def test_failed_check_exits_one(tmp_path, capsys):
    # 64 Wilson points is far too coarse: the methods disagree beyond 1e-4
    cfg = write_config(tmp_path, {
        "family": {"type": "spin_half", "theta": 1.0471975511965976},
        "wilson_points": 64,
    })
    assert main(["berry", "--config", cfg]) == 1
    assert "check berry_methods_agree: FAIL" in capsys.readouterr().out


@pytest.mark.parametrize("raw,fragment", [
    ({"family": {"type": "diag_const", "energies": [0.0, 0.0]}}, "GapViolation"),
    ({"nonsense": True}, "unknown config keys"),
])
def test_bad_run_exits_two(tmp_path, capsys, raw, fragment):
    cfg = write_config(tmp_path, raw)
    assert main(["berry", "--config", cfg, "--quiet"]) == 2
    assert fragment in capsys.readouterr().err


def test_invalid_json_exits_two(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{oops")
    assert main(["berry", "--config", str(path)]) == 2
    err = capsys.readouterr().err
    assert "line 1" in err and "column" in err


def test_unparsable_m_flag_exits_two(capsys):
    assert main(["det", "--m", "a,b", "--quiet"]) == 2
    assert "--m" in capsys.readouterr().err


def test_unwritable_out_exits_two(tmp_path, capsys):
    target = tmp_path / "no_such_dir" / "rows.csv"
    assert main(["det", "--m", "2", "--out", str(target), "--quiet"]) == 2
    assert "Error" in capsys.readouterr().err
