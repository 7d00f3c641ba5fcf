"""Command-line interface.

Subcommands:
  eval    -- evaluate every geometric object at one point, dump as JSON
  verify  -- run the verification suite; report to stdout or --output
  sweep   -- tabulate one scalar field over a (t, y) grid
  report  -- human-readable summary of a previously written verify JSON

Exit codes: 0 pass, 1 verification failure, 2 invalid input.
The verify/sweep documents are byte-deterministic for a fixed config and
seed; human-readable progress goes to stderr.
"""

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .. import __version__, connection, curvature, fieldtheory, metric
from ..errors import ConfigError, JetBMError
from ..jetcore import JetPoint
from .checks import SWEEP_FIELDS, parse_grid, run_verify, sweep, sweep_csv
from .config import RunConfig, default_config, parse_config


def _load_config(path: str | None) -> RunConfig:
    if path is None:
        return default_config()
    return parse_config(Path(path).read_text())


def _eval_point(cfg: RunConfig, p: JetPoint) -> dict:
    tm = cfg.time_metric
    v = tm.eval(p.t)
    ct = connection.christoffel_time(tm, p.t)
    s = metric.g_scalars(cfg.tensor, p.y)
    mp = metric.metric_pair(cfg.tensor, tm, p)
    can = connection.canonical_nlc(tm, p)
    apr = connection.apriori_nlc(tm, p)
    cart = connection.cartan_connection(cfg.tensor, tm, p)
    tor = curvature.torsions(cfg.tensor, tm, p)
    cur = curvature.curvatures(cfg.tensor, tm, p)
    ric = curvature.ricci_scalar(cfg.tensor, tm, p)
    pot = fieldtheory.grav_potential(cfg.tensor, tm, p)
    ein = fieldtheory.einstein_blocks(cfg.tensor, tm, p, cfg.einstein_k)
    cons = fieldtheory.conservation_residuals(cfg.tensor, tm, p, cfg.einstein_k)
    em = fieldtheory.em_form(cfg.tensor, tm, p)
    doc = {
        "point": {"t": p.t, "x": p.x.tolist(), "y": p.y.tolist()},
        "time_metric": {
            "h11": v.h11,
            "h11_inv": v.h11_inv,
            "dh11": v.dh11,
            "d2h11": v.d2h11,
            "kappa": ct.kappa,
            "dkappa": ct.dkappa,
        },
        "g_scalars": {
            "G1111": s.g1111,
            "Gi111": s.gi111.tolist(),
            "Gij11": s.gij11.tolist(),
            "Gij11_inv": s.gij11_inv.tolist(),
            "det_Gij11": s.det_gij11,
            "G_script": s.g_script,
            "Gj_up": s.gj_up.tolist(),
        },
        "metric": {"g_lo": mp.g_lo.tolist(), "g_up": mp.g_up.tolist()},
        "nonlinear_connection": {
            "canonical": {"M": can.m.tolist(), "N": can.n.tolist()},
            "apriori": {"M": apr.m.tolist(), "N": apr.n.tolist()},
        },
        "cartan": {"kappa": cart.kappa, "Gk": cart.gk.tolist(), "L": cart.l.tolist(), "C": cart.c.tolist()},
        "torsions": {
            "P_mixed": tor.p_mixed.tolist(),
            "P_vert": tor.p_vert.tolist(),
            "R_time": tor.r_time.tolist(),
        },
        "curvatures": {"R": cur.r.tolist(), "P": cur.p.tolist(), "S": cur.s.tolist()},
        "ricci": {
            "R_ij": ric.r_ij.tolist(),
            "P_ricci": ric.p_ricci.tolist(),
            "S_ricci": ric.s_ricci.tolist(),
            "S_raised": ric.s_raised.tolist(),
            "Sc": ric.sc,
            "S_ricci_field": curvature.bm_s_ricci_field(p.y).tolist() if cfg.tensor.is_berwald_moor else None,
            "Sc_field": curvature.scalar_curvature_field(tm, p.t, p.y) if cfg.tensor.is_berwald_moor else None,
        },
        "grav_potential": {
            "tt_block": pot.tt_block,
            "xx_block": pot.xx_block.tolist(),
            "yy_block": pot.yy_block.tolist(),
        },
        "einstein": {
            "K": ein.k,
            "xi11": ein.xi11,
            "T_11": ein.t_11,
            "T_ij": ein.t_ij.tolist(),
            "T_yy": ein.t_yy.tolist(),
            "T_i_yj": ein.t_i_yj.tolist(),
            "T_yi_j": ein.t_yi_j.tolist(),
            "zero_blocks": ein.zero_blocks,
            "raised": {
                "T1_1": ein.raised_t11,
                "Tm_i": ein.raised_h.tolist(),
                "Tm_1i_mixed_t": ein.raised_mixed_t.tolist(),
                "Tm_i_mixed_v": ein.raised_mixed_v.tolist(),
                "Tm_i_vv": ein.raised_vv.tolist(),
            },
        },
        "conservation": {
            "T1": cons.t1,
            "Ti": cons.ti.tolist(),
            "Tyi": cons.tyi.tolist(),
            "closed_T1": cons.closed_t1,
            "closed_Ti": cons.closed_ti.tolist(),
            "closed_Tyi": cons.closed_tyi.tolist(),
        },
        "em_form": {"F": em.f.tolist()},
    }
    return doc


def _parse_vec(raw: str, name: str) -> np.ndarray:
    try:
        vals = [float(tok) for tok in raw.replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"{name}: cannot parse {raw!r}") from exc
    if len(vals) != 4:
        raise ConfigError(f"{name}: expected four components, got {len(vals)}")
    return np.array(vals)


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_eval(args) -> int:
    cfg = _load_config(args.config)
    y = _parse_vec(args.y, "--y")
    x = _parse_vec(args.x, "--x") if args.x else None
    p = JetPoint.from_y(y, t=args.t, x=x)
    doc = _eval_point(cfg, p)
    _emit(json.dumps(doc, indent=2) + "\n", args.output)
    return 0


def _cmd_verify(args) -> int:
    cfg = _load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.samples is not None:
        overrides["samples"] = args.samples
    if overrides:
        cfg = replace(cfg, **overrides)
        if cfg.seed < 0 or cfg.samples < 1:
            raise ConfigError("sampling.seed must be >= 0 and sampling.samples >= 1")
    result = run_verify(cfg)
    for r in result.reports:
        status = "SKIP" if r.skipped else ("PASS" if r.passed else "FAIL")
        if r.skipped:
            print(f"[{status}] {r.check_name}", file=sys.stderr)
        else:
            print(
                f"[{status}] {r.check_name}  samples={r.samples} abs={r.max_abs_err:.3e} rel={r.max_rel_err:.3e}",
                file=sys.stderr,
            )
    n_skip = sum(r.skipped for r in result.reports)
    n_fail = sum((not r.passed) for r in result.reports)
    n_pass = len(result.reports) - n_skip - n_fail
    print(f"{n_pass} passed, {n_fail} failed, {n_skip} skipped", file=sys.stderr)
    text = result.to_json() if args.format == "json" else result.to_csv()
    _emit(text, args.output)
    return 0 if result.overall_pass else 1


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    axes = parse_grid(args.grid)
    rows = sweep(cfg, args.field, axes)
    names = [name for name, _ in axes]
    if args.format == "json":
        _emit(json.dumps(rows, indent=2) + "\n", args.output)
    else:
        _emit(sweep_csv(rows, args.field, names), args.output)
    return 0


def _cmd_report(args) -> int:
    try:
        doc = json.loads(Path(args.input).read_text())
        reports = doc["reports"]
        overall = doc["overall_pass"]
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"cannot read report: {exc}", file=sys.stderr)
        return 2
    width = max((len(r["check_name"]) for r in reports), default=10)
    for r in reports:
        status = "SKIP" if r.get("skipped") else ("PASS" if r["pass"] else "FAIL")
        abs_e = r["max_abs_err"]
        rel_e = r["max_rel_err"]
        errs = "" if abs_e is None else f"  abs={abs_e:.3e} rel={rel_e:.3e} samples={r['samples']}"
        print(f"[{status}] {r['check_name']:<{width}}{errs}")
    print(f"overall: {'PASS' if overall else 'FAIL'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jetbm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"jetbm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate all geometric objects at one point")
    p_eval.add_argument("--config", help="configuration file")
    p_eval.add_argument("--t", type=float, default=0.0, help="time coordinate")
    p_eval.add_argument("--x", help="base coordinates, four comma-separated values")
    p_eval.add_argument("--y", required=True, help="fiber coordinates, four comma-separated positive values")
    p_eval.add_argument("--output", help="write JSON here instead of stdout")
    p_eval.set_defaults(fn=_cmd_eval)

    p_verify = sub.add_parser("verify", help="run the verification suite")
    p_verify.add_argument("--config", help="configuration file")
    p_verify.add_argument("--seed", type=int, help="override sampling.seed")
    p_verify.add_argument("--samples", type=int, help="override sampling.samples")
    p_verify.add_argument("--format", choices=("json", "csv"), default="json")
    p_verify.add_argument("--output", help="write the report document here instead of stdout")
    p_verify.set_defaults(fn=_cmd_verify)

    p_sweep = sub.add_parser("sweep", help="tabulate a scalar field over a grid")
    p_sweep.add_argument("--config", help="configuration file")
    p_sweep.add_argument("--field", required=True, choices=SWEEP_FIELDS)
    p_sweep.add_argument("--grid", required=True, help="axis=start:stop:count[,axis=...]; axes t, s, y1..y4")
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.add_argument("--output", help="write the table here instead of stdout")
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_report = sub.add_parser("report", help="summarize a previously written verify JSON")
    p_report.add_argument("--input", required=True, help="path to a verify JSON document")
    p_report.set_defaults(fn=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except JetBMError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
