"""Batch harness and command line interface.

Subcommands:
  run --config cfg.json [--jobs N]    sweep shapes x p_grid x beta_grid,
                                      write results.csv / rows.json /
                                      summary.json plus report figures;
                                      exit 1 on any certified violation
  shape --spec regular:6 --out f.json generate a polygon file
  radial --n 2 --p 2 --beta 1 --R 1   print one disk eigenpair
  report --run DIR --format csv|json  re-emit a run's rows, re-render figures

Config JSON fields: shapes (polygon-file paths or generator specs regular:k,
rect:a:b, random:m), p_grid, beta_grid, fem_level, checks (subset of T1, T2,
T3, weak_remark, lemmas, radial_suite), seed, tolerances, output. Checks are
routed by sign: T1 consumes the positive beta grid entries, T2/T3/weak_remark
the negative ones, lemmas is parameter-free (one row per shape), radial_suite
runs on every grid point. One ResultRow per routed (shape, p, beta, check);
per-row solver failures become "skipped" rows, never aborting the sweep.

Determinism: identical config and seed give byte-identical reports. Rows are
sorted by (shape, check, p, beta) and every float is printed with 12
significant digits; the CSV column order is versioned in a leading comment.
The ROBINWEB_CACHE environment variable, when set, backs the radial
subcommand's eigenpair cache.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .bounds import (
    VIOLATED,
    check_T1,
    check_T2,
    check_T3,
    check_fuglede_lemma,
    check_weak_remark,
    isoperimetric_deficit,
    polygon_eigenvalue_oracle,
)
from .geometry import (
    ConvexPolygon,
    PolygonError,
    random_convex_polygon,
    rectangle,
    regular_polygon,
)
from .radial import RadialCache, constant_C, dirichlet_radial, solve_radial, weak_form_residuals
from .transplant import transplant_quotient

CHECKS = ("T1", "T2", "T3", "weak_remark", "lemmas", "radial_suite")
THEOREM_CHECKS = ("T1", "T2", "T3", "weak_remark")
ROW_STATUSES = ("holds", "trivial", "one-sided", "skipped", "violated")

CSV_VERSION = "robinweb.results.v1"
ROW_COLUMNS = (
    "shape", "n", "p", "beta", "check", "rho", "area", "deficit",
    "lambda_ball", "lambda_oracle", "transplant_quotient", "constant_C",
    "slack", "status",
)


class ConfigError(ValueError):
    """Configuration, shape-spec, or report-file problem with context."""


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


# ---------------------------------------------------------------------------
# configuration and shapes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    shapes: tuple
    p_grid: tuple
    beta_grid: tuple
    fem_level: int = 4
    checks: tuple = ("T1", "T2")
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    output: str = "reports"

    def __post_init__(self):
        if not self.shapes:
            raise ConfigError("config needs at least one shape")
        if not all(p > 1.0 and math.isfinite(p) for p in self.p_grid):
            raise ConfigError("p_grid entries must be finite and larger than 1")
        if not self.p_grid or not self.beta_grid:
            raise ConfigError("p_grid and beta_grid must be nonempty")
        bad = [c for c in self.checks if c not in CHECKS]
        if bad or not self.checks:
            raise ConfigError(f"checks must be a nonempty subset of {CHECKS}, got {bad or self.checks}")
        signed = set(self.checks) & {"T1", "T2", "T3", "weak_remark"}
        if signed and any(b == 0.0 or not math.isfinite(b) for b in self.beta_grid):
            raise ConfigError("beta_grid entries must be finite and nonzero for the theorem checks")
        if self.fem_level < 2:
            raise ConfigError("fem_level must be at least 2")

    @property
    def fem_levels(self) -> tuple:
        lo = max(1, self.fem_level - 2)
        return tuple(range(lo, self.fem_level + 1))

    @classmethod
    def from_json(cls, obj: dict, source: str = "<config>") -> "RunConfig":
        if not isinstance(obj, dict):
            raise ConfigError(f"{source}: config must be a JSON object")
        known = {"shapes", "p_grid", "beta_grid", "fem_level", "checks",
                 "seed", "tolerances", "output"}
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"{source}: unknown config keys {sorted(unknown)}")
        missing = {"shapes", "p_grid", "beta_grid"} - set(obj)
        if missing:
            raise ConfigError(f"{source}: missing config keys {sorted(missing)}")
        try:
            return cls(
                shapes=tuple(str(s) for s in obj["shapes"]),
                p_grid=tuple(float(p) for p in obj["p_grid"]),
                beta_grid=tuple(float(b) for b in obj["beta_grid"]),
                fem_level=int(obj.get("fem_level", 4)),
                checks=tuple(obj.get("checks", ("T1", "T2"))),
                seed=int(obj.get("seed", 0)),
                tolerances=dict(obj.get("tolerances", {})),
                output=str(obj.get("output", "reports")),
            )
        except (TypeError, ValueError) as err:
            if isinstance(err, ConfigError):
                raise
            raise ConfigError(f"{source}: {err}") from err

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        try:
            with open(path) as fh:
                obj = json.load(fh)
        except OSError as err:
            raise ConfigError(f"{path}: {err.strerror or err}") from err
        except json.JSONDecodeError as err:
            raise ConfigError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from err
        return cls.from_json(obj, source=path)

    def to_json(self) -> dict:
        return {
            "shapes": list(self.shapes),
            "p_grid": list(self.p_grid),
            "beta_grid": list(self.beta_grid),
            "fem_level": self.fem_level,
            "checks": list(self.checks),
            "seed": self.seed,
            "tolerances": dict(self.tolerances),
            "output": self.output,
        }


def generate_shape(spec: str, seed: int = 0) -> ConvexPolygon:
    """Polygon from a generator spec: regular:k, rect:a:b, or random:m."""
    parts = spec.split(":")
    try:
        if parts[0] == "regular" and len(parts) == 2:
            return regular_polygon(int(parts[1]), 1.0)
        if parts[0] == "rect" and len(parts) == 3:
            return rectangle(float(parts[1]), float(parts[2]))
        if parts[0] == "random" and len(parts) == 2:
            return random_convex_polygon(int(parts[1]), np.random.default_rng(seed))
    except (ValueError, PolygonError) as err:
        raise ConfigError(f"shape spec {spec!r}: {err}") from err
    raise ConfigError(
        f"cannot parse shape spec {spec!r} (want regular:k, rect:a:b, random:m, or a polygon file)")


def _looks_like_spec(entry: str) -> bool:
    return entry.split(":")[0] in ("regular", "rect", "random")


def load_shape(entry: str, seed: int = 0) -> ConvexPolygon:
    """Polygon from a generator spec or a polygon JSON file."""
    if _looks_like_spec(entry):
        return generate_shape(entry, seed)
    try:
        with open(entry) as fh:
            obj = json.load(fh)
        return ConvexPolygon.from_json(obj)
    except OSError as err:
        raise ConfigError(f"{entry}: {err.strerror or err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"{entry}:{err.lineno}:{err.colno}: {err.msg}") from err
    except (PolygonError, KeyError, TypeError, ValueError) as err:
        raise ConfigError(f"{entry}: not a valid polygon file ({err})") from err


def _load_corpus(config: RunConfig) -> list:
    """Shapes in config order with unique names (suffix on collision)."""
    polys = []
    seen = {}
    for idx, entry in enumerate(config.shapes):
        poly = load_shape(entry, seed=config.seed + idx)
        seen[poly.name] = seen.get(poly.name, 0) + 1
        if seen[poly.name] > 1:
            poly = ConvexPolygon(poly.vertices, name=f"{poly.name}-{seen[poly.name]}")
        polys.append(poly)
    return polys


# ---------------------------------------------------------------------------
# rows
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResultRow:
    shape: str
    n: int
    p: float
    beta: float
    check: str
    rho: float
    area: float
    deficit: float
    lambda_ball: float
    lambda_oracle: float
    transplant_quotient: float
    constant_C: float
    slack: float
    status: str
    note: str = ""

    @property
    def sort_key(self):
        return (self.shape, self.check, self.p, self.beta)

    def csv_row(self) -> str:
        return ",".join(_fmt(getattr(self, name)) for name in ROW_COLUMNS)

    def to_json(self) -> dict:
        out = {name: getattr(self, name) for name in ROW_COLUMNS}
        out["note"] = self.note
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ResultRow":
        kwargs = {name: obj[name] for name in ROW_COLUMNS}
        kwargs["note"] = obj.get("note", "")
        return cls(**kwargs)


def _finite(x: float) -> float:
    return float(x) if math.isfinite(x) else 0.0


def _row_status(report) -> str:
    if report.status == VIOLATED:
        return "violated"
    if not report.applicable:
        return "skipped"
    if report.trivial_regime:
        return "trivial"
    if report.details.get("resolution") == "one_sided_only":
        return "one-sided"
    return "holds"


_THEOREM_FN = {
    "T1": check_T1,
    "T2": check_T2,
    "T3": check_T3,
    "weak_remark": check_weak_remark,
}


def _theorem_row(poly, p, beta, check, config, quotient_cache) -> tuple:
    """(ResultRow, TheoremReport) for one routed theorem check."""
    kwargs = {"levels": config.fem_levels}
    if check == "T3" and "t3_delta0" in config.tolerances:
        kwargs["delta0"] = float(config.tolerances["t3_delta0"])
    report = _THEOREM_FN[check](poly, p, beta, **kwargs)
    key = (poly.name, p, beta)
    if key not in quotient_cache:
        pair = solve_radial(2, p, beta, poly.perimeter / (2.0 * math.pi))
        quotient_cache[key] = transplant_quotient(poly, pair).quotient
    row = ResultRow(
        shape=poly.name, n=2, p=float(p), beta=float(beta), check=check,
        rho=poly.perimeter, area=poly.area,
        deficit=isoperimetric_deficit(poly),
        lambda_ball=_finite(report.details["lambda_star"]),
        lambda_oracle=_finite(report.details["lambda_oracle"]),
        transplant_quotient=_finite(quotient_cache[key]),
        constant_C=_finite(report.constant_used),
        slack=_finite(report.slack),
        status=_row_status(report),
    )
    return row, report


def _lemmas_row(poly) -> tuple:
    report = check_fuglede_lemma(poly)
    row = ResultRow(
        shape=poly.name, n=2, p=0.0, beta=0.0, check="lemmas",
        rho=poly.perimeter, area=poly.area,
        deficit=isoperimetric_deficit(poly),
        lambda_ball=0.0, lambda_oracle=0.0, transplant_quotient=0.0,
        constant_C=_finite(report.constant_used),
        slack=_finite(report.slack),
        status="skipped" if not report.applicable else _row_status(report),
    )
    return row, report


def _radial_row(poly, p, beta, config) -> tuple:
    pair = solve_radial(2, p, beta, poly.perimeter / (2.0 * math.pi))
    worst = float(np.max(np.abs(weak_form_residuals(pair))))
    tol = float(config.tolerances.get("radial_residual", 1e-6))
    row = ResultRow(
        shape=poly.name, n=2, p=float(p), beta=float(beta), check="radial_suite",
        rho=poly.perimeter, area=poly.area,
        deficit=isoperimetric_deficit(poly),
        lambda_ball=pair.eigenvalue, lambda_oracle=0.0,
        transplant_quotient=0.0, constant_C=_finite(constant_C(pair)),
        slack=tol - worst,
        status="holds" if worst <= tol else "violated",
    )
    return row, None


def _skipped_row(poly, p, beta, check, err) -> ResultRow:
    return ResultRow(
        shape=poly.name, n=2, p=float(p), beta=float(beta), check=check,
        rho=poly.perimeter, area=poly.area,
        deficit=isoperimetric_deficit(poly),
        lambda_ball=0.0, lambda_oracle=0.0, transplant_quotient=0.0,
        constant_C=0.0, slack=0.0, status="skipped",
        note=f"{type(err).__name__}: {err}",
    )


def _route_tasks(config: RunConfig, polys: list) -> list:
    """(poly, p, beta, check) cells, one per emitted row."""
    tasks = []
    for poly in polys:
        for check in config.checks:
            if check == "lemmas":
                tasks.append((poly, 0.0, 0.0, check))
            elif check == "radial_suite":
                tasks.extend((poly, p, b, check)
                             for p in config.p_grid for b in config.beta_grid)
            elif check == "T1":
                tasks.extend((poly, p, b, check)
                             for p in config.p_grid for b in config.beta_grid if b > 0.0)
            else:
                tasks.extend((poly, p, b, check)
                             for p in config.p_grid for b in config.beta_grid if b < 0.0)
    return tasks


# ---------------------------------------------------------------------------
# the sweep
# ---------------------------------------------------------------------------

@dataclass
class RunResult:
    rows: list
    summary: dict
    files: list
    exit_code: int


def _evaluate(task, config, quotient_cache):
    poly, p, beta, check = task
    try:
        if check == "lemmas":
            return _lemmas_row(poly)
        if check == "radial_suite":
            return _radial_row(poly, p, beta, config)
        return _theorem_row(poly, p, beta, check, config, quotient_cache)
    except Exception as err:  # per-row failures never abort the sweep
        return _skipped_row(poly, p, beta, check, err), None


def _empirical_summary(reports: list) -> dict:
    """Corpus min/max of the bounds' unknown-constant ratios."""
    gather = {
        "m_over_g": [],
        "deficit_over_alpha_sq": [],
        "trombetti_empirical": [],
        "gamma_empirical": [],
    }
    for report in reports:
        if report is None:
            continue
        for key, values in gather.items():
            val = report.details.get(key)
            if isinstance(val, float) and math.isfinite(val):
                values.append(val)
        if report.theorem_id == "fuglede_lemma" and math.isfinite(report.constant_used):
            gather["m_over_g"].append(report.constant_used)
    out = {}
    for key, values in gather.items():
        if values:
            out[key] = {"min": min(values), "max": max(values), "count": len(values)}
    return out


def run(config: RunConfig, jobs: int = 1, render: bool = True) -> RunResult:
    """Execute the sweep, write the report files, return rows and exit code."""
    polys = _load_corpus(config)
    tasks = _route_tasks(config, polys)
    quotient_cache = {}
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(lambda t: _evaluate(t, config, quotient_cache), tasks))
    else:
        outcomes = [_evaluate(t, config, quotient_cache) for t in tasks]
    rows = sorted((row for row, _ in outcomes), key=lambda r: r.sort_key)
    reports = [rep for _, rep in outcomes]

    counts = {status: 0 for status in ROW_STATUSES}
    for row in rows:
        counts[row.status] += 1
    exit_code = 1 if counts["violated"] else 0
    summary = {
        "schema": "robinweb.summary.v1",
        "config": config.to_json(),
        "row_count": len(rows),
        "status_counts": counts,
        "empirical_constants": _empirical_summary(reports),
        "skipped_notes": [
            {"shape": r.shape, "check": r.check, "p": r.p, "beta": r.beta, "note": r.note}
            for r in rows if r.status == "skipped" and r.note
        ],
        "exit_code": exit_code,
    }

    outdir = config.output
    os.makedirs(outdir, exist_ok=True)
    files = []

    csv_path = os.path.join(outdir, "results.csv")
    with open(csv_path, "w") as fh:
        fh.write(csv_text(rows))
    files.append(csv_path)

    rows_path = os.path.join(outdir, "rows.json")
    with open(rows_path, "w") as fh:
        json.dump({"schema": "robinweb.rows.v1", "config": config.to_json(),
                   "rows": [r.to_json() for r in rows]}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    files.append(rows_path)

    summary_path = os.path.join(outdir, "summary.json")
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    files.append(summary_path)

    if render:
        files.extend(render_figures(rows, outdir))
    return RunResult(rows=rows, summary=summary, files=files, exit_code=exit_code)


def csv_text(rows: list) -> str:
    lines = [f"# {CSV_VERSION} columns: {','.join(ROW_COLUMNS)}"]
    lines.append(",".join(ROW_COLUMNS))
    lines.extend(row.csv_row() for row in rows)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

_STATUS_COLORS = {
    "holds": "tab:green",
    "trivial": "tab:olive",
    "one-sided": "tab:orange",
    "skipped": "tab:gray",
    "violated": "tab:red",
}
_CHECK_MARKERS = {"T1": "o", "T2": "s", "T3": "^", "weak_remark": "D"}


def render_figures(rows: list, outdir: str) -> list:
    """Slack-vs-deficit and oracle-vs-ball eigenvalue figures next to the CSV."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    paths = []
    theorem_rows = [r for r in rows if r.check in THEOREM_CHECKS and r.status != "skipped"]

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for check, marker in _CHECK_MARKERS.items():
        sub = [r for r in theorem_rows if r.check == check]
        if not sub:
            continue
        ax.scatter([r.deficit for r in sub], [r.slack for r in sub],
                   marker=marker, s=42,
                   c=[_STATUS_COLORS[r.status] for r in sub],
                   edgecolors="k", linewidths=0.4, label=check)
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("isoperimetric deficit 1 - 4 pi |K| / P^2")
    ax.set_ylabel("certified slack")
    ax.set_title("bound slack across the corpus (color = row status)")
    if theorem_rows:
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    slack_path = os.path.join(outdir, "fig_slack_vs_deficit.png")
    fig.savefig(slack_path, dpi=150)
    plt.close(fig)
    paths.append(slack_path)

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    pos = [r for r in theorem_rows if r.beta > 0.0]
    neg = [r for r in theorem_rows if r.beta < 0.0]
    if pos:
        ax.scatter([r.lambda_ball for r in pos], [r.lambda_oracle for r in pos],
                   marker="o", s=42, c="tab:blue", edgecolors="k",
                   linewidths=0.4, label="beta > 0")
    if neg:
        ax.scatter([r.lambda_ball for r in neg], [r.lambda_oracle for r in neg],
                   marker="s", s=42, c="tab:red", edgecolors="k",
                   linewidths=0.4, label="beta < 0")
    both = [r.lambda_ball for r in theorem_rows] + [r.lambda_oracle for r in theorem_rows]
    if both:
        lo, hi = min(both), max(both)
        pad = 0.05 * (hi - lo + 1e-12)
        ax.plot([lo - pad, hi + pad], [lo - pad, hi + pad], "k--", lw=0.8,
                label="equality (disk)")
        ax.legend(loc="best", fontsize=8)
    ax.set_xlabel("lambda(matched disk)")
    ax.set_ylabel("lambda(polygon oracle)")
    ax.set_title("polygon eigenvalue vs perimeter-matched disk")
    fig.tight_layout()
    eig_path = os.path.join(outdir, "fig_eigenvalues.png")
    fig.savefig(eig_path, dpi=150)
    plt.close(fig)
    paths.append(eig_path)
    return paths


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_run(args) -> int:
    config = RunConfig.load(args.config)
    result = run(config, jobs=args.jobs)
    counts = result.summary["status_counts"]
    print(f"wrote {len(result.rows)} rows to {config.output} "
          f"({', '.join(f'{k}={v}' for k, v in counts.items() if v)})")
    for path in result.files:
        print(f"  {path}")
    for note in result.summary["skipped_notes"]:
        print(f"skipped {note['shape']}/{note['check']}: {note['note']}", file=sys.stderr)
    if result.exit_code:
        bad = [r for r in result.rows if r.status == "violated"]
        for r in bad:
            print(f"VIOLATED {r.shape} {r.check} p={_fmt(r.p)} beta={_fmt(r.beta)} "
                  f"slack={_fmt(r.slack)}", file=sys.stderr)
    return result.exit_code


def _cmd_shape(args) -> int:
    poly = generate_shape(args.spec, seed=args.seed)
    with open(args.out, "w") as fh:
        json.dump(poly.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {poly.name} ({len(poly.vertices)} vertices) to {args.out}")
    return 0


def _parse_beta(text: str) -> float:
    if text.lower() in ("inf", "+inf", "infinity", "dirichlet"):
        return math.inf
    return float(text)


def _cmd_radial(args) -> int:
    beta = _parse_beta(args.beta)
    cache = RadialCache(args.cache) if args.cache or os.environ.get("ROBINWEB_CACHE") else None
    if math.isinf(beta):
        pair = dirichlet_radial(args.n, args.p, args.R, cache=cache)
    else:
        pair = solve_radial(args.n, args.p, beta, args.R, cache=cache)
    payload = {
        "n": pair.dim, "p": pair.p, "beta": pair.beta, "R": pair.radius,
        "lambda": pair.eigenvalue,
        "constant_C": constant_C(pair),
        "boundary_value": pair.boundary_value,
        "boundary_residual": pair.boundary_residual,
    }
    if args.json:
        print(json.dumps({k: _fmt(v) if isinstance(v, float) else v
                          for k, v in payload.items()}, indent=2, sort_keys=True))
    else:
        for key in ("lambda", "constant_C", "boundary_value", "boundary_residual"):
            print(f"{key} = {_fmt(payload[key])}")
    return 0


def _cmd_report(args) -> int:
    rows_path = os.path.join(args.run, "rows.json")
    try:
        with open(rows_path) as fh:
            obj = json.load(fh)
    except OSError as err:
        raise ConfigError(f"{rows_path}: {err.strerror or err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"{rows_path}:{err.lineno}:{err.colno}: {err.msg}") from err
    try:
        rows = [ResultRow.from_json(r) for r in obj["rows"]]
    except (KeyError, TypeError) as err:
        raise ConfigError(f"{rows_path}: not a rows file ({err})") from err
    if args.format == "csv":
        sys.stdout.write(csv_text(rows))
    else:
        print(json.dumps({"schema": obj.get("schema", "robinweb.rows.v1"),
                          "rows": [r.to_json() for r in rows]},
                         indent=2, sort_keys=True))
    render_figures(rows, args.run)
    return 1 if any(r.status == "violated" for r in rows) else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="robinweb",
        description="certified Robin eigenvalue bounds on convex polygons")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a config sweep and write reports")
    p_run.add_argument("--config", required=True, help="JSON config path")
    p_run.add_argument("--jobs", type=int, default=1, help="parallel row workers")

    p_shape = sub.add_parser("shape", help="generate a polygon file")
    p_shape.add_argument("--spec", required=True, help="regular:k | rect:a:b | random:m")
    p_shape.add_argument("--out", required=True, help="output polygon JSON path")
    p_shape.add_argument("--seed", type=int, default=0)

    p_rad = sub.add_parser("radial", help="solve one disk eigenpair")
    p_rad.add_argument("--n", type=int, default=2)
    p_rad.add_argument("--p", type=float, default=2.0)
    p_rad.add_argument("--beta", required=True, help="boundary parameter (or 'inf')")
    p_rad.add_argument("--R", type=float, default=1.0)
    p_rad.add_argument("--cache", default=None, help="eigenpair cache dir (or ROBINWEB_CACHE)")
    p_rad.add_argument("--json", action="store_true")

    p_rep = sub.add_parser("report", help="re-emit a run's rows")
    p_rep.add_argument("--run", required=True, help="directory written by `run`")
    p_rep.add_argument("--format", choices=("csv", "json"), default="csv")

    args = parser.parse_args(argv)
    handler = {"run": _cmd_run, "shape": _cmd_shape,
               "radial": _cmd_radial, "report": _cmd_report}[args.command]
    try:
        return handler(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
