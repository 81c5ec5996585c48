"""Command-line interface.

Four subcommands: ``theory`` evaluates closed forms, ``simulate`` runs
replicated shortest-path experiments, ``sweep`` compares disorder values,
``validate`` executes the acceptance suites. Run directories contain the
delimited records, a manifest, and rendered figures; data files are byte
identical across reruns of the same configuration, and wall-clock
timestamps appear only inside the manifest's metadata block.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import numerics, plotting, simulate, stats, theory, validation
from .errors import DomainError


@dataclass(frozen=True)
class RunConfig:
    s_values: tuple = (0.5,)
    n_values: tuple = (1000,)
    replications: int = 100
    master_seed: int = validation.MASTER_SEED
    output_path: str = "runs"
    quadrature: numerics.QuadratureSpec = field(
        default_factory=lambda: numerics.DEFAULT_SPEC)
    file_format: str = "csv"
    jobs: int = 1
    plots: bool = True

    def __post_init__(self):
        if not self.s_values:
            raise DomainError("need at least one disorder value")
        for s in self.s_values:
            if not (isinstance(s, (int, float)) and s > 0):
                raise DomainError(f"disorder must be positive, got {s!r}")
        if not self.n_values:
            raise DomainError("need at least one graph size")
        for n in self.n_values:
            if not (isinstance(n, int) and n >= 3):
                raise DomainError(
                    f"graph size must be an integer >= 3, got {n!r}")
        if not (isinstance(self.replications, int)
                and self.replications >= 1):
            raise DomainError("replications must be a positive integer")
        if self.file_format not in ("csv", "json"):
            raise DomainError(
                f"format must be csv or json, got {self.file_format!r}")
        if not (isinstance(self.jobs, int) and self.jobs >= 1):
            raise DomainError("jobs must be a positive integer")

    def to_dict(self) -> dict:
        return {
            "s_values": list(self.s_values),
            "n_values": list(self.n_values),
            "replications": self.replications,
            "master_seed": self.master_seed,
            "output_path": self.output_path,
            "quadrature": {
                "node_count": self.quadrature.node_count,
                "tolerance": self.quadrature.tolerance,
                "transform": self.quadrature.transform,
            },
            "file_format": self.file_format,
            "jobs": self.jobs,
            "plots": self.plots,
        }


def _values(raw, cast):
    out = []
    for chunk in raw or []:
        for piece in str(chunk).split(","):
            piece = piece.strip()
            if piece:
                out.append(cast(piece))
    return out


def _load_config_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise DomainError("config file must hold a JSON object")
    return data


def _build_config(args) -> RunConfig:
    """Merge config file and flags; flags win. Raises before any write."""
    base = _load_config_file(args.config) if args.config else {}
    qdict = base.get("quadrature", {})
    quad = numerics.QuadratureSpec(
        node_count=qdict.get("node_count",
                             numerics.DEFAULT_SPEC.node_count),
        tolerance=qdict.get("tolerance", numerics.DEFAULT_SPEC.tolerance),
        transform=qdict.get("transform", numerics.DEFAULT_SPEC.transform),
    )
    s_vals = _values(args.s, float) or [float(x) for x in
                                        base.get("s_values", [])]
    n_vals = _values(args.n, int) or [int(x) for x in
                                      base.get("n_values", [])]
    return RunConfig(
        s_values=tuple(s_vals) or (0.5,),
        n_values=tuple(n_vals) or (1000,),
        replications=(args.reps if args.reps is not None
                      else int(base.get("replications", 100))),
        master_seed=(args.seed if args.seed is not None
                     else int(base.get("master_seed",
                                       validation.MASTER_SEED))),
        output_path=(args.out if args.out is not None
                     else str(base.get("output_path", "runs"))),
        quadrature=quad,
        file_format=(args.format if args.format is not None
                     else str(base.get("file_format", "csv"))),
        jobs=(args.jobs if args.jobs is not None
              else int(base.get("jobs", 1))),
        plots=(not args.no_plots) and bool(base.get("plots", True)),
    )


def _run_dir(cfg: RunConfig, tag: str) -> Path:
    blob = json.dumps(cfg.to_dict(), sort_keys=True).encode()
    digest = hashlib.sha256(blob).hexdigest()[:10]
    return Path(cfg.output_path) / f"{tag}_{digest}"


def _manifest(path: Path, cfg: RunConfig, files: dict) -> None:
    doc = {
        "config": cfg.to_dict(),
        "files": files,
        "metadata": {
            "created_at": datetime.now(timezone.utc).isoformat(),
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------- theory ----------------

def cmd_theory(args) -> int:
    if args.special is not None:
        j = args.special
        sj = theory.tie_point(j)
        if args.format == "json":
            print(json.dumps({"j": j, "tie_point": sj}, sort_keys=True))
        else:
            print(f"tie point j={j}: s_{j} = {sj:.12f}")
        return 0
    svals = _values(args.s, float) or [1.0]
    s = svals[0]
    kmax = args.kmax
    if kmax < 1:
        print("error: --kmax must be at least 1", file=sys.stderr)
        return 2
    k_star = theory.limit_hops(s)
    rows = [(k, theory.weight_scale(s, k)) for k in range(1, kmax + 1)]
    tie = theory.near_tie(s)
    if args.format == "json":
        doc = {
            "s": s,
            "limit_hops": k_star,
            "scale": {str(k): (g if math.isfinite(g) else None)
                      for k, g in rows},
            "near_tie": tie,
        }
        print(json.dumps(doc, sort_keys=True))
        return 0
    print(f"s = {s:g}  (exponent p = {1.0 / s:.6g})")
    print(f"{'k':>4}  {'scale g_s(k)':>18}")
    for k, g in rows:
        mark = "  <- minimizer" if k == k_star else ""
        print(f"{k:>4}  {g:>18.10g}{mark}")
    print(f"limit hopcount: {k_star}")
    if tie is not None:
        print(f"note: s sits at the j={tie} tie point; "
              f"hopcounts {tie} and {tie + 1} both occur in the limit")
    return 0


# ---------------- simulate ----------------

def _collect_records(cfg: RunConfig):
    records = []
    for s in cfg.s_values:
        for n in cfg.n_values:
            argslist = [(cfg.master_seed, r, n, s)
                        for r in range(cfg.replications)]
            rows = validation._fanout(validation._rep_path, argslist,
                                      cfg.jobs)
            for r, w, h in rows:
                records.append(stats.make_record(
                    n=n, s=s, seed=simulate.replication_seed(
                        cfg.master_seed, r),
                    weight=w, hopcount=h))
    return records


def _write_records_csv(path: Path, records) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["s", "n", "seed", "weight", "hopcount",
                         "standardized_t"])
        for rec in records:
            writer.writerow([repr(rec.s), rec.n, rec.seed,
                             repr(rec.weight), rec.hopcount,
                             repr(rec.standardized_t)])


def _write_records_json(path: Path, records) -> None:
    doc = [{"s": rec.s, "n": rec.n, "seed": rec.seed,
            "weight": rec.weight, "hopcount": rec.hopcount,
            "standardized_t": rec.standardized_t} for rec in records]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True)
        fh.write("\n")


def cmd_simulate(args) -> int:
    try:
        cfg = _build_config(args)
    except (DomainError, ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    run_dir = _run_dir(cfg, "simulate")
    run_dir.mkdir(parents=True, exist_ok=True)
    records = _collect_records(cfg)
    files = {}
    if cfg.file_format == "csv":
        _write_records_csv(run_dir / "records.csv", records)
        files["records"] = "records.csv"
    else:
        _write_records_json(run_dir / "records.json", records)
        files["records"] = "records.json"
    if cfg.plots:
        figdir = run_dir / "figures"
        figdir.mkdir(exist_ok=True)
        fignames = []
        for s in cfg.s_values:
            for n in cfg.n_values:
                sel = [r for r in records if r.s == s and r.n == n]
                hist = stats.hop_histogram(sel)
                name = f"hops_s{s:g}_n{n}.png"
                plotting.hop_bars(hist, str(figdir / name),
                                  title=f"s={s:g}, n={n}")
                fignames.append(f"figures/{name}")
                k_star = theory.limit_hops(s)
                t_on_mode = [r.standardized_t for r in sel
                             if r.hopcount == k_star]
                if len(t_on_mode) >= 10:
                    name = f"ecdf_s{s:g}_n{n}.png"
                    plotting.ecdf_vs_limit(t_on_mode, s, k_star,
                                           str(figdir / name),
                                           title=f"s={s:g}, n={n}")
                    fignames.append(f"figures/{name}")
        files["figures"] = fignames
    _manifest(run_dir / "manifest.json", cfg, files)
    print(f"wrote {len(records)} records to {run_dir}")
    for s in cfg.s_values:
        for n in cfg.n_values:
            sel = [r for r in records if r.s == s and r.n == n]
            hist = stats.hop_histogram(sel)
            modal = max(hist, key=lambda k: (hist[k], -k))
            mean_w = sum(r.weight for r in sel) / len(sel)
            print(f"  s={s:g} n={n}: modal hopcount {modal}, "
                  f"mean weight {mean_w:.6g}")
    return 0


# ---------------- sweep ----------------

def cmd_sweep(args) -> int:
    try:
        cfg = _build_config(args)
    except (DomainError, ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    run_dir = _run_dir(cfg, "sweep")
    run_dir.mkdir(parents=True, exist_ok=True)
    summary = []
    for s in cfg.s_values:
        k_star = theory.limit_hops(s)
        for n in cfg.n_values:
            argslist = [(cfg.master_seed, r, n, s)
                        for r in range(cfg.replications)]
            rows = validation._fanout(validation._rep_path, argslist,
                                      cfg.jobs)
            hops = [h for _, _, h in rows]
            weights = [w for _, w, _ in rows]
            hist = {}
            for h in hops:
                hist[h] = hist.get(h, 0) + 1
            modal = max(hist, key=lambda k: (hist[k], -k))
            tvals = [theory.standardize_weight(s, k_star, math.log(n), w)
                     for w in weights]
            summary.append({
                "s": s,
                "n": n,
                "replications": cfg.replications,
                "modal_hopcount": modal,
                "modal_frequency": hist[modal] / len(hops),
                "predicted_hopcount": k_star,
                "predicted_hop_frequency":
                    hist.get(k_star, 0) / len(hops),
                "mean_weight": sum(weights) / len(weights),
                "mean_standardized_t": sum(tvals) / len(tvals),
            })
    files = {}
    if cfg.file_format == "csv":
        with open(run_dir / "sweep.csv", "w", encoding="utf-8",
                  newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["s", "n", "replications", "modal_hopcount",
                             "modal_frequency", "predicted_hopcount",
                             "predicted_hop_frequency", "mean_weight",
                             "mean_standardized_t"])
            for row in summary:
                writer.writerow([repr(row["s"]), row["n"],
                                 row["replications"],
                                 row["modal_hopcount"],
                                 repr(row["modal_frequency"]),
                                 row["predicted_hopcount"],
                                 repr(row["predicted_hop_frequency"]),
                                 repr(row["mean_weight"]),
                                 repr(row["mean_standardized_t"])])
        files["summary"] = "sweep.csv"
    else:
        with open(run_dir / "sweep.json", "w", encoding="utf-8") as fh:
            json.dump(summary, fh, sort_keys=True)
            fh.write("\n")
        files["summary"] = "sweep.json"
    if cfg.plots and len(cfg.s_values) >= 2:
        figdir = run_dir / "figures"
        figdir.mkdir(exist_ok=True)
        n_big = max(cfg.n_values)
        slice_big = [row for row in summary if row["n"] == n_big]
        plotting.sweep_modal_hops(
            [row["s"] for row in slice_big],
            [row["modal_hopcount"] for row in slice_big],
            str(figdir / "sweep_modal_hops.png"),
            title=f"n={n_big}, {cfg.replications} replications per point")
        files["figures"] = ["figures/sweep_modal_hops.png"]
    _manifest(run_dir / "manifest.json", cfg, files)
    for row in summary:
        print(f"s={row['s']:g} n={row['n']}: modal hopcount "
              f"{row['modal_hopcount']} "
              f"(predicted {row['predicted_hopcount']}), "
              f"predicted-hop frequency "
              f"{row['predicted_hop_frequency']:.3f}")
    print(f"wrote sweep summary to {run_dir}")
    return 0


# ---------------- validate ----------------

def cmd_validate(args) -> int:
    suites = args.suite or sorted(validation.SUITES)
    for name in suites:
        if name not in validation.SUITES:
            print(f"error: unknown suite {name!r}; choose from "
                  f"{sorted(validation.SUITES)}", file=sys.stderr)
            return 2
    try:
        cfg = _build_config(args)
    except (DomainError, ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    all_pass = True
    suite_reports = {}
    for name in suites:
        reports = validation.run_suite(name, spec=cfg.quadrature,
                                       master_seed=cfg.master_seed,
                                       jobs=cfg.jobs)
        suite_reports[name] = reports
        for rep in reports:
            flag = "PASS" if rep.passed else "FAIL"
            print(f"[{flag}] {rep.test_name}: statistic "
                  f"{rep.statistic:.6g} vs threshold "
                  f"{rep.threshold:.6g} (sample size {rep.sample_size})")
            all_pass = all_pass and rep.passed
    if args.out is not None:
        run_dir = _run_dir(cfg, "validate")
        run_dir.mkdir(parents=True, exist_ok=True)
        doc = {name: [{
            "test_name": r.test_name,
            "statistic": r.statistic,
            "threshold": r.threshold,
            "sample_size": r.sample_size,
            "passed": r.passed,
        } for r in reports] for name, reports in suite_reports.items()}
        with open(run_dir / "reports.json", "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        files = {"reports": "reports.json"}
        if cfg.plots:
            figdir = run_dir / "figures"
            figdir.mkdir(exist_ok=True)
            fignames = []
            for name, reports in suite_reports.items():
                fig = f"validate_{name}.png"
                plotting.report_bars(reports, str(figdir / fig),
                                     title=f"suite: {name}")
                fignames.append(f"figures/{fig}")
            files["figures"] = fignames
        _manifest(run_dir / "manifest.json", cfg, files)
        print(f"wrote reports to {run_dir}")
    print("all suites passed" if all_pass else "some checks failed")
    return 0 if all_pass else 1


# ---------------- parser ----------------

def _add_common(sub):
    sub.add_argument("--s", action="append",
                     help="disorder value(s), repeatable or comma list")
    sub.add_argument("--n", action="append",
                     help="graph size(s), repeatable or comma list")
    sub.add_argument("--reps", type=int, default=None,
                     help="replications per (s, n) cell")
    sub.add_argument("--seed", type=int, default=None,
                     help="master seed")
    sub.add_argument("--jobs", type=int, default=None,
                     help="worker processes")
    sub.add_argument("--format", choices=("csv", "json"), default=None,
                     help="data file format")
    sub.add_argument("--out", default=None, help="output directory")
    sub.add_argument("--config", default=None,
                     help="JSON config file; flags override its values")
    sub.add_argument("--no-plots", action="store_true",
                     help="skip figure rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpplab",
        description="shortest-path experiments on the complete graph "
                    "with heavy-tailed edge weights")
    subs = parser.add_subparsers(dest="command", required=True)

    t = subs.add_parser("theory", help="evaluate closed-form quantities")
    t.add_argument("--s", action="append", help="disorder value")
    t.add_argument("--kmax", type=int, default=6,
                   help="largest path length to tabulate")
    t.add_argument("--special", type=int, default=None,
                   help="print the tie point for this index")
    t.add_argument("--format", choices=("csv", "json"), default=None)
    t.set_defaults(func=cmd_theory)

    sim = subs.add_parser("simulate",
                          help="replicated shortest-path runs")
    _add_common(sim)
    sim.set_defaults(func=cmd_simulate)

    sw = subs.add_parser("sweep",
                         help="compare disorder values at one size")
    _add_common(sw)
    sw.set_defaults(func=cmd_sweep)

    v = subs.add_parser("validate", help="run acceptance suites")
    v.add_argument("--suite", action="append",
                   choices=sorted(validation.SUITES),
                   help="suite name, repeatable; default all")
    _add_common(v)
    v.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
