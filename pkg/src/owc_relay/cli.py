"""Command line: ``owc-relay {metrics,sweep,simulate,validate}``.

Exit codes: 0 ok, 1 invariant failure, 2 configuration error, 3 numerical
non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from . import __version__
from .config import SWEEP_VARS, OutputSpec, RunConfig, SweepSpec, load_config
from .errors import ConfigError, DomainError, EvaluationFailure, NonConvergence, OWCError
from .montecarlo import simulate
from .relay import MetricReport, direct_metrics, relay_metrics

EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

METHOD_SUFFIX = {"closed_form": "cf", "quadrature": "quad", "monte_carlo": "mc"}
UNITS = {
    "outage": "probability",
    "outage_cf_approx": "probability (incomplete-Gamma approximation, midpoint relay only)",
    "mc_lo": "probability (Wilson 95% lower)",
    "mc_hi": "probability (Wilson 95% upper)",
    "avg_snr_db": "dB (10 log10)",
    "rate": "bits per channel use",
    "pt_dbm": "dBm", "d_km": "km", "d_r_km": "km", "gamma_th_db": "dB",
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON run configuration (a sweep sidecar also works)")
    p.add_argument("--out", help="output file (stdout when omitted)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--seed", type=int, help="Monte Carlo master seed (u64)")
    p.add_argument("--trials", type=int, help="Monte Carlo trials")
    p.add_argument("--mode", choices=("direct", "relay-min", "relay-harmonic", "relay-true"))
    p.add_argument("--sweep", help="var:lo:hi:n with var in " + ",".join(SWEEP_VARS))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="owc-relay", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("metrics", "metrics at one operating point"),
                            ("sweep", "metric curves over one parameter"),
                            ("simulate", "Monte Carlo run at one operating point"),
                            ("validate", "invariant suite")):
        p = sub.add_parser(name, help=help_text)
        _common(p)
        if name == "validate":
            p.add_argument("--rel-tol", type=float, default=1e-9, help="quadrature tolerance for the checks")
    return parser


def apply_overrides(run: RunConfig, args) -> RunConfig:
    sim = run.sim
    if args.seed is not None:
        if not 0 <= args.seed < 2 ** 64:
            raise ConfigError(f"--seed must fit in 64 unsigned bits, got {args.seed}")
        sim = replace(sim, master_seed=args.seed)
    if args.trials is not None:
        if args.trials < 1:
            raise ConfigError(f"--trials must be >= 1, got {args.trials}")
        sim = replace(sim, trials=args.trials)
    if args.mode is not None:
        sim = replace(sim, mode=args.mode.replace("-", "_"))
    out = run.output
    if args.out is not None or args.format is not None:
        out = OutputSpec(args.out if args.out is not None else out.path,
                         args.format if args.format is not None else out.format)
    sweep = SweepSpec.parse(args.sweep) if args.sweep else run.sweep
    return replace(run, sim=sim, output=out, sweep=sweep)


def _relay_mc_mode(run: RunConfig) -> str:
    return run.sim.mode if run.sim.mode != "direct" else "relay_true"


def point_reports(run: RunConfig) -> dict:
    """{'relay': {method: MetricReport}, 'direct': {...}} at one operating point."""
    cfg = run.relay_config()
    gth = run.gamma_th
    out = {"relay": {}, "direct": {}}
    link = run.direct_link() if run.baseline else None
    for method in run.methods:
        if method == "monte_carlo":
            out["relay"][method] = simulate(run.sim.spec(gth, _relay_mc_mode(run)), cfg).to_report()
            if link is not None:
                out["direct"][method] = simulate(run.sim.spec(gth, "direct"), link).to_report()
        else:
            out["relay"][method] = relay_metrics(cfg, gth, method)
            if link is not None:
                out["direct"][method] = direct_metrics(link, gth, method)
    if not out["direct"]:
        del out["direct"]
    return out


def _rel_dev(value, ref):
    if value is None or ref is None or ref == 0:
        return None
    return value / ref - 1.0


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        if not math.isfinite(x):
            return ""
        return repr(x)
    return str(x)


def cmd_metrics(run: RunConfig) -> int:
    reports = point_reports(run)
    lines = []
    payload = {"config": run.to_dict(), "units": UNITS, "results": {}}
    rows = []
    for link_name, by_method in reports.items():
        ref = by_method.get("quadrature")
        payload["results"][link_name] = {}
        lines.append(f"[{link_name}]")
        lines.append(f"{'method':<12} {'outage':>14} {'avg_snr_db':>12} {'rate':>10}  dev(outage, avg_snr, rate) vs quadrature")
        for method, rep in by_method.items():
            devs = None
            if ref is not None and method != "quadrature":
                devs = [_rel_dev(rep.outage, ref.outage), _rel_dev(rep.avg_snr, ref.avg_snr),
                        _rel_dev(rep.ergodic_rate, ref.ergodic_rate)]
            entry = rep.as_dict()
            entry["relative_deviation_vs_quadrature"] = devs
            payload["results"][link_name][method] = entry
            dev_txt = "" if devs is None else ", ".join("-" if d is None else f"{d:+.3%}" for d in devs)
            lines.append(f"{method:<12} {_fmt_num(rep.outage, '.6g'):>14} {_fmt_num(rep.avg_snr_db, '.3f'):>12} "
                         f"{_fmt_num(rep.ergodic_rate, '.4f'):>10}  {dev_txt}")
            if "outage_approx" in rep.extras:
                approx = rep.extras["outage_approx"]
                dev = "" if ref is None else f" ({_rel_dev(approx, ref.outage):+.3%} vs quadrature)"
                lines.append(f"    outage, incomplete-Gamma approximation: {approx:.6g}{dev}")
            for note in rep.notes:
                lines.append(f"    note: {note}")
            rows.append([link_name, method, rep.outage, rep.avg_snr_db, rep.ergodic_rate,
                         rep.uncertainty.get("outage"), rep.bound_invalid, "; ".join(rep.notes)])
    print("\n".join(lines))
    path = run.output.path
    if path:
        if run.output.format == "json":
            _write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
        else:
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["link", "method", "outage", "avg_snr_db", "rate", "outage_uncertainty",
                        "bound_invalid", "notes"])
            for r in rows:
                w.writerow([_fmt(v) for v in r])
            _write(path, buf.getvalue())
            _write(path + ".json", json.dumps({"config": run.to_dict(), "units": UNITS},
                                              indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _fmt_num(x, spec):
    return "-" if x is None else format(x, spec)


def sweep_columns(run: RunConfig) -> list[str]:
    block = ["outage_cf", "outage_quad", "outage_mc", "mc_lo", "mc_hi",
             "avg_snr_db_cf", "avg_snr_db_quad", "avg_snr_db_mc", "rate_cf", "rate_quad", "rate_mc"]
    cols = [run.sweep.column] + block
    if run.baseline:
        cols += ["direct_" + c for c in block]
    return cols + ["outage_cf_approx", "bound_invalid", "status", "reason"]


def _fill(row: dict, prefix: str, by_method: dict) -> None:
    for method, rep in by_method.items():
        suf = METHOD_SUFFIX[method]
        row[f"{prefix}outage_{suf}"] = rep.outage
        row[f"{prefix}avg_snr_db_{suf}"] = rep.avg_snr_db
        row[f"{prefix}rate_{suf}"] = rep.ergodic_rate
        if method == "monte_carlo":
            row[f"{prefix}mc_lo"], row[f"{prefix}mc_hi"] = rep.uncertainty["outage_ci"]
        if "outage_approx" in rep.extras:
            row[f"{prefix}outage_cf_approx"] = rep.extras["outage_approx"]


def sweep_row(run: RunConfig, value: float) -> dict:
    """One grid point; numerical and domain failures become error rows."""
    row = {run.sweep.column: value, "status": "ok", "reason": "", "bound_invalid": False}
    try:
        point = run.with_value(run.sweep.var, value)
        reports = point_reports(point)
    except NonConvergence as exc:
        row.update(status="nonconvergence", reason=str(exc))
        return row
    except (OWCError, ValueError, ArithmeticError) as exc:
        row.update(status="error", reason=str(exc))
        return row
    _fill(row, "", reports["relay"])
    if "direct" in reports:
        _fill(row, "direct_", reports["direct"])
    row["bound_invalid"] = any(r.bound_invalid for r in reports["relay"].values())
    return row


def run_sweep(run: RunConfig) -> list[dict]:
    grid = run.sweep.grid()
    if run.sim.workers > 1:
        with ProcessPoolExecutor(max_workers=run.sim.workers) as pool:
            return list(pool.map(sweep_row, [run] * len(grid), grid))
    return [sweep_row(run, v) for v in grid]


def render_sweep(run: RunConfig, rows: list[dict]) -> str:
    cols = sweep_columns(run)
    if run.output.format == "json":
        doc = {"config": run.to_dict(), "units": UNITS, "columns": cols,
               "rows": [{c: row.get(c) for c in cols} for row in rows]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([_fmt(row.get(c)) for c in cols])
    return buf.getvalue()


def cmd_sweep(run: RunConfig) -> int:
    if run.sweep is None:
        raise ConfigError("sweep needs --sweep var:lo:hi:n or a 'sweep' config section")
    rows = run_sweep(run)
    text = render_sweep(run, rows)
    if run.output.path:
        _write(run.output.path, text)
        if run.output.format == "csv":
            _write(run.output.path + ".json",
                   json.dumps({"config": run.to_dict(), "units": UNITS}, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)
    failed = [r for r in rows if r["status"] == "nonconvergence"]
    for r in rows:
        if r["status"] != "ok":
            print(f"warning: {run.sweep.column}={r[run.sweep.column]!r}: {r['reason']}", file=sys.stderr)
    return EXIT_NUMERIC if failed else EXIT_OK


def cmd_simulate(run: RunConfig) -> int:
    mode = run.sim.mode
    target = run.direct_link() if mode == "direct" else run.relay_config()
    res = simulate(run.sim.spec(run.gamma_th, mode), target)
    doc = {"mode": mode, "trials": res.trials_used, "master_seed": run.sim.master_seed,
           "gamma_th_db": run.gamma_th_db, "outage": res.outage_hat,
           "outage_ci95": [res.outage_lo, res.outage_hi], "avg_snr": res.avg_snr_hat,
           "avg_snr_se": res.avg_snr_se, "rate": res.rate_hat, "rate_se": res.rate_se}
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if run.output.path:
        _write(run.output.path, text)
    print(text, end="")
    return EXIT_OK


def cmd_validate(run: RunConfig, rel_tol: float) -> int:
    from .validation import run_checks

    if not rel_tol > 0:
        raise ConfigError(f"--rel-tol must be positive, got {rel_tol}")
    checks = run_checks(run, rel_tol=rel_tol)
    width = max(len(c.name) for c in checks)
    for c in checks:
        meas = f"{c.measured:.3g}" if isinstance(c.measured, float) else str(c.measured)
        tol = f"{c.tolerance:.3g}" if isinstance(c.tolerance, float) else str(c.tolerance)
        line = f"{c.status}  {c.name:<{width}}  measured={meas}  tol={tol}"
        if c.detail:
            line += f"  ({c.detail})"
        print(line)
    failures = sum(c.passed is False for c in checks)
    print(f"{len(checks) - failures} of {len(checks)} checks without failure")
    if run.output.path:
        _write(run.output.path, json.dumps(
            [{"name": c.name, "status": c.status, "measured": c.measured, "tolerance": c.tolerance,
              "detail": c.detail} for c in checks], indent=2) + "\n")
    return EXIT_INVARIANT if failures else EXIT_OK


def _write(path: str, text: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run = apply_overrides(load_config(args.config), args)
        if args.command == "metrics":
            return cmd_metrics(run)
        if args.command == "sweep":
            return cmd_sweep(run)
        if args.command == "simulate":
            return cmd_simulate(run)
        return cmd_validate(run, args.rel_tol)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonConvergence as exc:
        print(f"numerical non-convergence in {exc.label}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except EvaluationFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
