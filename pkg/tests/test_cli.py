import json
import time

import pytest

from brownian_snake.cli import EXIT_INPUT, EXIT_OK, EXIT_USAGE, main


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def sampled(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    for name in ("a", "b"):
        assert run("sample", "--target", "N0_MIN_BELOW", "--replicas", 6, "--seed", 1,
                   "--grid-ds", 1e-3, "--out", root / name) == EXIT_OK
    return root


def test_sample_is_byte_identical(sampled):
    a, b = sampled / "a", sampled / "b"
    names = sorted(p.name for p in a.iterdir() if p.name != "timings.json")
    assert names == sorted(p.name for p in b.iterdir() if p.name != "timings.json")
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()
    manifest = json.loads((a / "manifest.json").read_text())
    assert manifest["target"] == "N0_MIN_BELOW" and manifest["replicas"] == 6
    assert "config_hash" in manifest and "git_revision" in manifest


def test_pipeline_outputs_reproducible(sampled, tmp_path):
    outs = []
    for name in ("x", "y"):
        out = tmp_path / name
        assert run("excursions", "--in", sampled / "a", "--grid-ds", 1e-3, "--delta", 0.2,
                   "--beta", 0.1, "--out", out) == EXIT_OK
        assert run("exitprofile", "--in", sampled / "a", "--grid-ds", 1e-3,
                   "--levels", "0.2:1.0:0.1", "--out", out) == EXIT_OK
        assert run("verify", "--suite", "excursions", "--seed", 1, "--replicas", 16,
                   "--grid-ds", 1e-2, "--report", out / "report.json") in (0, 1)
        outs.append(out)
    for n in ("records.csv", "profile.csv", "report.json", "manifest.json"):
        assert (outs[0] / n).read_bytes() == (outs[1] / n).read_bytes()
    header = (outs[0] / "records.csv").read_text().splitlines()[:2]
    assert header[0].startswith("# config_hash=")
    assert header[1] == "replica,level,height,sigma,boundary_size"


def test_missing_input_directory(tmp_path, capsys):
    assert run("excursions", "--in", tmp_path / "nothing", "--out", tmp_path) == EXIT_INPUT
    assert "not found" in capsys.readouterr().err


def test_bad_config_is_usage_error(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("delta = 0.01\n")
    assert run("csbp", "--mode", "roundtrip", "--config", cfg) == EXIT_USAGE
    assert "eps_boundary" in capsys.readouterr().err


def test_bad_levels_is_usage_error(sampled, tmp_path):
    assert run("exitprofile", "--in", sampled / "a", "--levels", "1:0.5:0.1",
               "--out", tmp_path) == EXIT_USAGE


def test_unknown_subcommand():
    with pytest.raises(SystemExit):
        run("frobnicate")


def test_reroot_check(sampled, tmp_path):
    assert run("reroot-check", "--in", sampled / "a", "--out", tmp_path) == EXIT_OK
    assert json.loads((tmp_path / "reroot_report.json").read_text())["passed"]


@pytest.mark.parametrize("mode", ["levy", "csbp", "roundtrip"])
def test_csbp_modes(tmp_path, mode):
    assert run("csbp", "--mode", mode, "--replicas", 2, "--horizon", 0.5,
               "--out", tmp_path) == EXIT_OK
    assert (tmp_path / "csbp_report.json").exists()


def test_verify_properties_passes(tmp_path):
    assert run("verify", "--suite", "properties", "--out", tmp_path) == EXIT_OK


def test_laws_smoke_budget(tmp_path):
    t0 = time.perf_counter()
    run("verify", "--suite", "laws", "--replicas", 64, "--seed", 1, "--out", tmp_path)
    assert time.perf_counter() - t0 < 60
