import json
import subprocess
import sys
from dataclasses import replace

import numpy as np
import pytest

from jetbm import ConfigError
from jetbm.harness import parse_config, parse_grid, run_verify, sweep
from jetbm.harness.checks import check_names, sweep_csv

MINIMAL = """
[time_metric]
family = constant
c = 1

[tensor]
kind = berwald_moor
"""

CUSTOM_BM = """
[time_metric]
family = constant
c = 1

[tensor]
kind = custom
components =
    1 2 3 4 = 0.041666666666666664
"""

CUSTOM_OTHER = """
[time_metric]
family = exponential
c = 1
lam = 1

[tensor]
kind = custom
components =
    1 2 3 4 = 0.041666666666666664
    1 1 2 2 = 0.01
"""

KNOWN_DISCREPANCIES = {
    "ricci/contraction-vs-field-diag",
    "ricci/divergence-contraction",
    "ricci/scalar-vs-field",
}


# -- config parsing ------------------------------------------------------------


def test_minimal_document_gets_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.seed == 42
    assert cfg.samples == 1000
    assert (cfg.y_min, cfg.y_max) == (0.1, 10.0)
    assert (cfg.t_min, cfg.t_max) == (-1.0, 1.0)
    assert cfg.einstein_k == 1.0
    assert (cfg.rel_tol, cfg.abs_tol, cfg.fd_step) == (1e-9, 1e-10, 1e-5)
    assert cfg.tensor.is_berwald_moor
    assert cfg.time_metric.family == "constant"


def test_negative_y_min_names_the_field():
    doc = MINIMAL + "\n[sampling]\ny_min = -1\n"
    with pytest.raises(ConfigError, match="sampling.y_min"):
        parse_config(doc)


@pytest.mark.parametrize(
    "section,line,path",
    [
        ("sampling", "samples = 0", "sampling.samples"),
        ("sampling", "seed = -3", "sampling.seed"),
        ("constants", "einstein_k = 0", "constants.einstein_k"),
        ("tolerances", "rel = 0", "tolerances.rel"),
        ("tolerances", "abs = -1e-9", "tolerances.abs"),
        ("tolerances", "fd = 0", "tolerances.fd"),
    ],
)
def test_violations_are_reported_with_field_paths(section, line, path):
    doc = MINIMAL + f"\n[{section}]\n{line}\n"
    with pytest.raises(ConfigError, match=path.replace(".", r"\.")):
        parse_config(doc)


def test_bad_family_and_kind_named():
    with pytest.raises(ConfigError, match=r"time_metric\.family"):
        parse_config(MINIMAL.replace("family = constant", "family = fourier"))
    with pytest.raises(ConfigError, match=r"tensor\.kind"):
        parse_config(MINIMAL.replace("kind = berwald_moor", "kind = dense"))


def test_all_violations_reported_at_once():
    doc = MINIMAL + "\n[sampling]\ny_min = -1\nsamples = 0\n[constants]\neinstein_k = 0\n"
    with pytest.raises(ConfigError) as exc:
        parse_config(doc)
    msg = str(exc.value)
    assert "sampling.y_min" in msg and "sampling.samples" in msg and "constants.einstein_k" in msg


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError, match="sampling.smaples"):
        parse_config(MINIMAL + "\n[sampling]\nsmaples = 10\n")


def test_custom_single_quadruple_is_bm_equivalent():
    cfg = parse_config(CUSTOM_BM)
    assert cfg.tensor.is_berwald_moor


def test_custom_components_parse_errors():
    with pytest.raises(ConfigError, match="tensor.components"):
        parse_config(CUSTOM_BM.replace("1 2 3 4 = 0.041666666666666664", "1 2 3 = 0.5"))
    with pytest.raises(ConfigError, match="tensor.components"):
        parse_config(CUSTOM_BM.replace("1 2 3 4 = 0.041666666666666664", "junk"))
    conflicting = CUSTOM_BM.replace(
        "    1 2 3 4 = 0.041666666666666664",
        "    1 2 3 4 = 0.041666666666666664\n    4 3 2 1 = 0.05",
    )
    with pytest.raises(ConfigError, match="tensor.components"):
        parse_config(conflicting)


# -- suite runner ---------------------------------------------------------------


@pytest.fixture(scope="module")
def small_bm_result():
    cfg = replace(parse_config(MINIMAL), samples=60)
    return run_verify(cfg)


def test_known_failures_are_exactly_the_bridge_checks(small_bm_result):
    fails = {r.check_name for r in small_bm_result.reports if not r.passed}
    assert fails == KNOWN_DISCREPANCIES
    assert small_bm_result.overall_pass is False


def test_report_order_matches_catalog(small_bm_result):
    assert [r.check_name for r in small_bm_result.reports] == check_names()


def test_custom_bm_equivalent_runs_full_suite():
    cfg = replace(parse_config(CUSTOM_BM), samples=40)
    res = run_verify(cfg)
    assert not any(r.skipped for r in res.reports)
    fails = {r.check_name for r in res.reports if not r.passed}
    assert fails == KNOWN_DISCREPANCIES


def test_custom_tensor_skips_closed_form_checks():
    cfg = replace(parse_config(CUSTOM_OTHER), samples=30, y_min=0.7, y_max=1.4)
    res = run_verify(cfg)
    skipped = {r.check_name for r in res.reports if r.skipped}
    assert "metric/closed-form-oracle" in skipped
    assert "curvature/vertical-oracle" in skipped
    assert "cartan/vertical-trace" in skipped
    ran = {r.check_name for r in res.reports if not r.skipped}
    assert "gscalars/euler-identities" in ran
    assert "metric/inverse-pair" in ran
    assert "em/two-form-zero" in ran
    # generic identities hold, so a custom run can pass overall
    assert all(r.passed for r in res.reports)
    assert res.overall_pass is True


def test_determinism_byte_identical():
    cfg = replace(parse_config(MINIMAL), samples=50)
    a = run_verify(cfg).to_json()
    b = run_verify(cfg).to_json()
    assert a == b
    assert run_verify(cfg).to_csv() == run_verify(cfg).to_csv()


def test_seed_changes_errors():
    cfg = replace(parse_config(MINIMAL), samples=50)
    a = run_verify(cfg)
    b = run_verify(replace(cfg, seed=7))
    assert a.to_json() != b.to_json()


# -- sweeps -----------------------------------------------------------------------


def test_sweep_scalar_curvature_ray():
    cfg = parse_config(MINIMAL)
    rows = sweep(cfg, "Sc", "s=1:4:3")
    np.testing.assert_allclose([r["s"] for r in rows], [1.0, 2.0, 4.0], rtol=1e-12)
    np.testing.assert_allclose([r["Sc"] for r in rows], [-9.0, -2.25, -0.5625], rtol=1e-12)


def test_sweep_g1111_point():
    cfg = parse_config(MINIMAL)
    rows = sweep(cfg, "G1111", "y1=1:1:1,y2=2:2:1,y3=3:3:1,y4=4:4:1")
    assert len(rows) == 1
    assert rows[0]["G1111"] == pytest.approx(24.0, rel=1e-14)


def test_sweep_xi_constant_across_grid():
    cfg = parse_config(MINIMAL)
    rows = sweep(cfg, "xi11", "t=-1:1:5,s=1:10:3")
    assert len(rows) == 15
    assert all(r["xi11"] == pytest.approx(4.5) for r in rows)


def test_sweep_rows_lexicographic():
    cfg = parse_config(MINIMAL)
    rows = sweep(cfg, "G1111", "t=0:1:2,s=1:2:2")
    coords = [(r["t"], r["s"]) for r in rows]
    assert coords == sorted(coords)


def test_sweep_rejects_unknown_field_and_axis():
    cfg = parse_config(MINIMAL)
    with pytest.raises(ConfigError):
        sweep(cfg, "Scc", "s=1:2:2")
    with pytest.raises(ConfigError):
        parse_grid("z=1:2:2")
    with pytest.raises(ConfigError):
        parse_grid("s=1:2")
    with pytest.raises(ConfigError):
        parse_grid("s=-1:2:2")


def test_sweep_csv_roundtrip():
    cfg = parse_config(MINIMAL)
    rows = sweep(cfg, "Tyi", "s=1:4:3")
    text = sweep_csv(rows, "Tyi", ["s"])
    lines = text.strip().splitlines()
    assert lines[0] == "s,Tyi"
    assert float(lines[1].split(",")[1]) == pytest.approx(0.75)


# -- CLI --------------------------------------------------------------------------


def _cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "jetbm.harness.cli", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


def test_cli_eval(tmp_path):
    out = _cli("eval", "--y", "1,2,3,4", "--t", "0", "--x", "0,0,1,2")
    assert out.returncode == 0
    doc = json.loads(out.stdout)
    assert doc["point"]["x"] == [0.0, 0.0, 1.0, 2.0]
    assert doc["g_scalars"]["G1111"] == pytest.approx(24.0)
    assert doc["ricci"]["Sc_field"] == pytest.approx(-9 / np.sqrt(24))
    assert doc["einstein"]["xi11"] == pytest.approx(4.5)


def test_cli_eval_rejects_bad_point():
    out = _cli("eval", "--y", "1,2,-3,4")
    assert out.returncode == 2
    assert "error" in out.stderr


def test_cli_verify_bm_exits_one_and_is_deterministic(tmp_path):
    cfg = tmp_path / "cfg.ini"
    cfg.write_text(MINIMAL)
    a = _cli("verify", "--config", str(cfg), "--samples", "40", "--format", "json")
    b = _cli("verify", "--config", str(cfg), "--samples", "40", "--format", "json")
    assert a.returncode == 1  # the three known discrepancies fail the run
    assert a.stdout == b.stdout
    doc = json.loads(a.stdout)
    fails = {r["check_name"] for r in doc["reports"] if not r["pass"]}
    assert fails == KNOWN_DISCREPANCIES


def test_cli_verify_custom_passes(tmp_path):
    cfg = tmp_path / "cfg.ini"
    cfg.write_text(CUSTOM_OTHER + "\n[sampling]\ny_min = 0.7\ny_max = 1.4\n")
    out = _cli("verify", "--config", str(cfg), "--samples", "30")
    assert out.returncode == 0


def test_cli_verify_bad_config_exits_two(tmp_path):
    cfg = tmp_path / "cfg.ini"
    cfg.write_text(MINIMAL + "\n[sampling]\ny_min = -1\n")
    out = _cli("verify", "--config", str(cfg))
    assert out.returncode == 2
    assert "sampling.y_min" in out.stderr


def test_cli_verify_csv_output(tmp_path):
    cfg = tmp_path / "cfg.ini"
    cfg.write_text(MINIMAL)
    target = tmp_path / "report.csv"
    out = _cli("verify", "--config", str(cfg), "--samples", "30", "--format", "csv", "--output", str(target))
    assert out.returncode == 1
    header = target.read_text().splitlines()[0]
    assert header == "check_name,samples,max_abs_err,max_rel_err,pass,seed,skipped"


def test_cli_sweep_and_report(tmp_path):
    out = _cli("sweep", "--field", "Sc", "--grid", "s=1:4:3")
    assert out.returncode == 0
    lines = out.stdout.strip().splitlines()
    assert lines[0] == "s,Sc"
    assert float(lines[1].split(",")[1]) == pytest.approx(-9.0)

    cfg = tmp_path / "cfg.ini"
    cfg.write_text(MINIMAL)
    report_path = tmp_path / "r.json"
    _cli("verify", "--config", str(cfg), "--samples", "30", "--output", str(report_path))
    shown = _cli("report", "--input", str(report_path))
    assert shown.returncode == 0
    assert "overall: FAIL" in shown.stdout
    assert "[FAIL] ricci/contraction-vs-field-diag" in shown.stdout


def test_cli_report_missing_file():
    out = _cli("report", "--input", "/nonexistent/report.json")
    assert out.returncode == 2
