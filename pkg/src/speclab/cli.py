"""Command-line front end.

speclab <command> --config <file> [--out <dir>] [--jobs N]

Commands: eig, torsion, asym, verify, sweep, sharpness. The config is a
TOML file; outputs are records.csv, records.json, plots/*.svg, and
run-manifest.json in the output directory. A fixed config produces
byte-identical records.csv (the solver RNG seed is fixed at module
level; the config seed is echoed into the manifest). Exit status is
nonzero iff a known-constant inequality is violated or a solve fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # py310
    import tomli as tomllib

from . import corpus as corpus_mod
from . import reference, sharpness, svgplot
from .asymmetry import fraenkel1, fraenkel2
from .errors import InvalidConfigError, SpecLabError
from .families import FAMILY_RANGES, SHAPE_BUILDERS, DomainSpec, build_domain
from .inequalities import (
    DEFAULT_K_MAX,
    InequalityRecord,
    SweepReport,
    aggregate,
    records_to_csv,
    report_to_json,
    run_domain,
    sweep,
)
from .operators import (
    extrapolate_spectra,
    extrapolate_torsion,
    spectrum,
    torsion,
)

COMMANDS = ("eig", "torsion", "asym", "verify", "sweep", "sharpness")

DEFAULT_H_LADDER = (1.0 / 48.0, 1.0 / 96.0)
DEFAULT_SEED = 20250214

# standard quartet for the doubling probe: distinct from the ball but
# cheap to resolve
DOUBLING_QUARTET = (
    DomainSpec("ellipse", {"aspect": 1.2}),
    DomainSpec("rectangle", {"aspect": 1.0}),
    DomainSpec("stadium", {"aspect": 1.5}),
    DomainSpec("half_disk", {}),
)


@dataclass
class RunConfig:
    command: str
    domains: list[DomainSpec] = field(default_factory=list)
    h_ladder: tuple[float, ...] = DEFAULT_H_LADDER
    k_max: int = DEFAULT_K_MAX
    seed: int = DEFAULT_SEED
    out_dir: Path = Path("out")
    jobs: int = 1
    corpus_name: str | None = None
    families: tuple[str, ...] = tuple(FAMILY_RANGES)
    t_grid: tuple[float, ...] | None = None  # None: per-family default
    with_doubling: bool = False

    def echo(self) -> dict:
        return {
            "command": self.command,
            "domains": [
                {"kind": d.kind, "params": d.params, "label": d.label}
                for d in self.domains
            ],
            "h_ladder": list(self.h_ladder),
            "k_max": self.k_max,
            "seed": self.seed,
            "jobs": self.jobs,
            "corpus": self.corpus_name,
            "families": list(self.families),
            "t_grid": None if self.t_grid is None else list(self.t_grid),
            "with_doubling": self.with_doubling,
        }


def _require(cond: bool, fieldname: str, msg: str) -> None:
    if not cond:
        raise InvalidConfigError(f"{fieldname}: {msg}")


def parse_config(path: Path, command: str) -> RunConfig:
    try:
        with open(path, "rb") as f:
            raw = tomllib.load(f)
    except FileNotFoundError:
        raise InvalidConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise InvalidConfigError(f"config parse error in {path}: {exc}")

    cfg = RunConfig(command=command)

    known = {
        "command", "domain", "h_ladder", "k_max", "seed", "out",
        "sweep", "sharpness",
    }
    for key in raw:
        _require(key in known, key, "unknown config key")

    ladder = raw.get("h_ladder", list(DEFAULT_H_LADDER))
    _require(isinstance(ladder, list) and len(ladder) >= 1, "h_ladder",
             "must be a non-empty list of spacings")
    _require(all(isinstance(x, (int, float)) and x > 0 for x in ladder),
             "h_ladder", "spacings must be positive numbers")
    _require(all(b < a for a, b in zip(ladder, ladder[1:])), "h_ladder",
             "must be strictly decreasing")
    cfg.h_ladder = tuple(float(x) for x in ladder)

    k_max = raw.get("k_max", DEFAULT_K_MAX)
    _require(isinstance(k_max, int) and k_max >= 1, "k_max",
             "must be an integer >= 1")
    cfg.k_max = k_max

    seed = raw.get("seed", DEFAULT_SEED)
    _require(isinstance(seed, int), "seed", "must be an integer")
    cfg.seed = seed

    if "out" in raw:
        _require(isinstance(raw["out"], str), "out", "must be a path string")
        cfg.out_dir = Path(raw["out"])

    for i, tab in enumerate(raw.get("domain", [])):
        _require(isinstance(tab, dict), f"domain[{i}]", "must be a table")
        kind = tab.get("kind")
        _require(isinstance(kind, str), f"domain[{i}].kind",
                 "must name a shape kind")
        _require(kind in SHAPE_BUILDERS, f"domain[{i}].kind",
                 f"unknown kind {kind!r}; known: {sorted(SHAPE_BUILDERS)}")
        params = {k: v for k, v in tab.items() if k not in ("kind", "label")}
        try:
            spec = DomainSpec(kind, params, tab.get("label", ""))
            build_domain(spec, cfg.h_ladder[0])  # fail fast on bad params
        except (TypeError, ValueError, InvalidConfigError) as exc:
            raise InvalidConfigError(f"domain[{i}]: {exc}")
        cfg.domains.append(spec)

    sw = raw.get("sweep", {})
    _require(isinstance(sw, dict), "sweep", "must be a table")
    if "corpus" in sw:
        _require(sw["corpus"] in ("default", "connected"), "sweep.corpus",
                 "must be 'default' or 'connected'")
        cfg.corpus_name = sw["corpus"]

    sh = raw.get("sharpness", {})
    _require(isinstance(sh, dict), "sharpness", "must be a table")
    if "families" in sh:
        fams = sh["families"]
        _require(isinstance(fams, list) and fams, "sharpness.families",
                 "must be a non-empty list")
        for fam in fams:
            _require(fam in FAMILY_RANGES, "sharpness.families",
                     f"unknown family {fam!r}; known: {sorted(FAMILY_RANGES)}")
        cfg.families = tuple(fams)
    if "t_grid" in sh:
        tg = sh["t_grid"]
        _require(isinstance(tg, list) and len(tg) >= 4, "sharpness.t_grid",
                 "need at least 4 snapshot values")
        _require(all(isinstance(t, (int, float)) and t > 0 for t in tg),
                 "sharpness.t_grid", "values must be positive")
        cfg.t_grid = tuple(float(t) for t in tg)
    if "doubling" in sh:
        _require(isinstance(sh["doubling"], bool), "sharpness.doubling",
                 "must be a boolean")
        cfg.with_doubling = sh["doubling"]

    if command in ("eig", "torsion", "asym", "verify"):
        _require(bool(cfg.domains), "domain",
                 f"command {command!r} needs at least one [[domain]] table")
    return cfg


# ----------------------------------------------------------------------
# artifact helpers


def _num(x, fmt="%.10g") -> str:
    if x is None:
        return ""
    if isinstance(x, float) and not math.isfinite(x):
        return ""
    return fmt % x


def _csv_text(columns: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def _write_outputs(
    out_dir: Path,
    cfg: RunConfig,
    csv_text: str,
    json_text: str,
    plots: dict[str, str],
) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "plots").mkdir(exist_ok=True)
    (out_dir / "records.csv").write_text(csv_text)
    (out_dir / "records.json").write_text(json_text)
    for name, svg in plots.items():
        (out_dir / "plots" / f"{name}.svg").write_text(svg)
    manifest = {
        "config": cfg.echo(),
        "seed": cfg.seed,
        "versions": _versions(),
    }
    (out_dir / "run-manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )


def _versions() -> dict:
    import numpy
    import scipy

    from . import __version__

    return {
        "python": sys.version.split()[0],
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "speclab": __version__,
    }


# ----------------------------------------------------------------------
# commands


def _ladder_solves(cfg: RunConfig, solve, extrapolate):
    """Run solve on each (domain, rung); extrapolate the finest pair."""
    results = []
    for spec in cfg.domains:
        per_rung = [(h, solve(build_domain(spec, h))) for h in cfg.h_ladder]
        extra = None
        if len(per_rung) >= 2:
            extra = extrapolate(per_rung[-2][1], per_rung[-1][1])
        results.append((spec, per_rung, extra))
    return results


def cmd_eig(cfg: RunConfig) -> tuple[str, str, dict[str, str], int]:
    cols = ["domain", "k", "h", "eigenvalue", "error_estimate", "extrapolated"]
    rows: list[list[str]] = []
    payload = []
    results = _ladder_solves(
        cfg,
        lambda dom: spectrum(dom, cfg.k_max),
        extrapolate_spectra,
    )
    plots: dict[str, str] = {}
    for spec, per_rung, extra in results:
        for h, res in per_rung:
            for i, lam in enumerate(res.eigenvalues):
                rows.append(
                    [spec.label, str(i + 1), _num(h), _num(lam), "", "0"]
                )
        if extra is not None:
            for i, lam in enumerate(extra.eigenvalues):
                rows.append(
                    [
                        spec.label, str(i + 1), _num(extra.h), _num(lam),
                        _num(extra.error_for(i)), "1",
                    ]
                )
            payload.append(
                {"domain": spec.label, "spectrum": extra.to_record()}
            )
            if len(per_rung) >= 2:
                pts = [
                    (h, abs(float(r.eigenvalues[0]) - float(extra.eigenvalues[0])))
                    for h, r in per_rung
                ]
                plots[f"eig-convergence-{_slug(spec.label)}"] = (
                    svgplot.render_scatter(
                        pts,
                        title=f"lambda_1 ladder: {spec.label}",
                        xlabel="h",
                        ylabel="|lambda_1(h) - extrapolated|",
                    )
                )
        else:
            payload.append(
                {"domain": spec.label, "spectrum": per_rung[0][1].to_record()}
            )
    json_text = json.dumps({"rows": payload}, indent=2, sort_keys=True)
    return _csv_text(cols, rows), json_text, plots, 0


def cmd_torsion(cfg: RunConfig) -> tuple[str, str, dict[str, str], int]:
    cols = [
        "domain", "h", "torsion", "torsion_error", "sup_w", "sup_w_error",
        "boundary_grad_max", "extrapolated",
    ]
    rows: list[list[str]] = []
    payload = []
    results = _ladder_solves(cfg, torsion, extrapolate_torsion)
    for spec, per_rung, extra in results:
        for h, res in per_rung:
            rows.append(
                [
                    spec.label, _num(h), _num(res.torsion), "",
                    _num(res.sup_w), "", _num(res.boundary_grad_max), "0",
                ]
            )
        final = extra if extra is not None else per_rung[-1][1]
        if extra is not None:
            rows.append(
                [
                    spec.label, _num(extra.h), _num(extra.torsion),
                    _num(extra.torsion_error), _num(extra.sup_w),
                    _num(extra.sup_w_error), _num(extra.boundary_grad_max),
                    "1",
                ]
            )
        payload.append({"domain": spec.label, "torsion": final.to_record()})
    json_text = json.dumps({"rows": payload}, indent=2, sort_keys=True)
    return _csv_text(cols, rows), json_text, {}, 0


def cmd_asym(cfg: RunConfig) -> tuple[str, str, dict[str, str], int]:
    cols = [
        "domain", "h", "order", "value", "value_error", "hit_search_bounds",
        "witness",
    ]
    rows: list[list[str]] = []
    payload = []
    h = cfg.h_ladder[-1]
    for spec in cfg.domains:
        dom = build_domain(spec, h)
        for order, fn in ((1, fraenkel1), (2, fraenkel2)):
            res = fn(dom)
            rows.append(
                [
                    spec.label, _num(h), str(order), _num(res.value),
                    _num(res.value_error),
                    "1" if res.hit_search_bounds else "0",
                    _witness_str(res.witness_record()),
                ]
            )
            payload.append(
                {
                    "domain": spec.label,
                    "order": order,
                    "value": res.value,
                    "value_error": res.value_error,
                    "hit_search_bounds": res.hit_search_bounds,
                    "witness": res.witness_record(),
                }
            )
    json_text = json.dumps({"rows": payload}, indent=2, sort_keys=True)
    return _csv_text(cols, rows), json_text, {}, 0


def _witness_str(rec: dict) -> str:
    if "center" in rec:
        c = " ".join(_num(v, "%.8g") for v in rec["center"])
        return f"ball {c} r={_num(rec['radius'], '%.8g')}"
    c1 = " ".join(_num(v, "%.8g") for v in rec["center1"])
    c2 = " ".join(_num(v, "%.8g") for v in rec["center2"])
    return f"pair {c1} | {c2} r={_num(rec['radius'], '%.8g')}"


def _inequality_outputs(
    report: SweepReport,
) -> tuple[str, str, dict[str, str], int]:
    plots: dict[str, str] = {}
    by_id: dict[str, list[InequalityRecord]] = {}
    for rec in report.records:
        by_id.setdefault(rec.inequality_id, []).append(rec)
    for iid, recs in sorted(by_id.items()):
        pts = [
            (r.rhs_constant_free, r.lhs)
            for r in recs
            if r.rhs_constant_free > 0 and r.lhs > 0
        ]
        if len(pts) >= 3:
            plots[f"ratio-{iid}"] = svgplot.render_scatter(
                pts,
                title=f"{iid}: lhs vs constant-free rhs",
                xlabel="rhs (constant-free)",
                ylabel="lhs",
                unit_diagonal=True,
            )
    status = 1 if (report.violation_count or report.failures) else 0
    return records_to_csv(report.records), report_to_json(report), plots, status


def cmd_verify(cfg: RunConfig) -> tuple[str, str, dict[str, str], int]:
    records: list[InequalityRecord] = []
    failures: list[dict] = []
    provenance: dict[str, dict] = {}
    for spec in cfg.domains:
        try:
            recs, prov = run_domain(spec, cfg.h_ladder[0], cfg.k_max)
            records.extend(recs)
            provenance[spec.label] = prov
        except (SpecLabError, ValueError) as exc:
            failures.append({"domain": spec.label, "error": str(exc)})
    records.sort(key=lambda r: (r.inequality_id, r.domain, r.k or 0))
    report = SweepReport(records, failures, aggregate(records), provenance)
    return _inequality_outputs(report)


def cmd_sweep(cfg: RunConfig) -> tuple[str, str, dict[str, str], int]:
    if cfg.corpus_name == "connected":
        specs = corpus_mod.connected_corpus()
    elif cfg.corpus_name == "default" or not cfg.domains:
        specs = corpus_mod.default_corpus()
    else:
        specs = cfg.domains
    report = sweep(specs, cfg.k_max, cfg.h_ladder[0], jobs=cfg.jobs)
    return _inequality_outputs(report)


def cmd_sharpness(cfg: RunConfig) -> tuple[str, str, dict[str, str], int]:
    cols = ["family", "k", "slope", "r_squared", "n_points"]
    rows: list[list[str]] = []
    payload: dict = {"fits": [], "doubling": []}
    plots: dict[str, str] = {}
    status = 0
    for fam in cfg.families:
        grid = cfg.t_grid or sharpness.FAMILY_T_GRIDS.get(
            fam, sharpness.DEFAULT_T_GRID
        )
        fits = sharpness.fit_all_exponents(
            fam, grid, cfg.h_ladder[0], cfg.k_max
        )
        for k in sorted(fits):
            fit = fits[k]
            if fit is None:
                rows.append([fam, str(k), "", "", "0"])
                continue
            rows.append(
                [
                    fam, str(k), _num(fit.slope), _num(fit.r_squared),
                    str(len(fit.samples)),
                ]
            )
            payload["fits"].append(fit.to_record())
            if f"exponent-{fam}" not in plots:
                plots[f"exponent-{fam}"] = svgplot.render_scatter(
                    list(fit.samples),
                    title=f"{fam}: gap_{k} vs gap_2 "
                    f"(slope {fit.slope:.3f})",
                    xlabel="lambda_2 gap",
                    ylabel=f"|lambda_{k} gap|",
                    power_line=(fit.slope, fit.intercept),
                )
    if cfg.with_doubling:
        h = cfg.h_ladder[0]
        recs = []
        for spec in DOUBLING_QUARTET:
            rec = sharpness.doubling_check(
                build_domain(spec, h), build_domain(spec, h / 2.0), k=1
            )
            recs.append(rec)
            payload["doubling"].append(rec.to_record())
        power, r2 = sharpness.doubling_power_fit(recs)
        payload["doubling_power"] = power
        payload["doubling_r_squared"] = r2
    json_text = json.dumps(payload, indent=2, sort_keys=True)
    return _csv_text(cols, rows), json_text, plots, status


def _slug(s: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "-" for c in s)


# ----------------------------------------------------------------------
# entry point


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="speclab",
        description="spectral geometry lab: eigenvalues, torsion, "
        "asymmetry, inequality sweeps",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, type=Path)
    parser.add_argument("--out", type=Path, default=None)
    parser.add_argument("--jobs", type=int, default=None)
    args = parser.parse_args(argv)

    try:
        cfg = parse_config(args.config, args.command)
        if args.out is not None:
            cfg.out_dir = args.out
        if args.jobs is not None:
            if args.jobs < 1:
                raise InvalidConfigError("jobs: must be >= 1")
            cfg.jobs = args.jobs
        handler = {
            "eig": cmd_eig,
            "torsion": cmd_torsion,
            "asym": cmd_asym,
            "verify": cmd_verify,
            "sweep": cmd_sweep,
            "sharpness": cmd_sharpness,
        }[cfg.command]
        csv_text, json_text, plots, status = handler(cfg)
        _write_outputs(cfg.out_dir, cfg, csv_text, json_text, plots)
    except InvalidConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SpecLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if status != 0:
        print("verification failures detected; see records.json",
              file=sys.stderr)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
