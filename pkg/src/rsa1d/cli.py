"""Command-line front end: evaluate, simulate, cross-check, emit tables.

Subcommands
-----------
density      occupied-site density from the closed form, Monte Carlo, or the
             small-window oracle
correlation  pair correlations C_s, same three sources
gamma        vacancy-vacancy-occupation probability at an even gap
oracle       small-window brute-force evaluation (density or gamma)
verify       the named cross-check suite (quick or full)
sweep        plot-ready curves over a time grid

Records are emitted as CSV (header ``quantity,s,t,value,stderr,source``,
floats at 17 significant digits) or JSON, to stdout or ``--out``.  A JSON
config file may pre-set any flag (``--config``); explicit flags win.  Exit
codes: 0 success, 1 verification failure, 2 usage error, 3 resource guard.

The ``RSA1D_THREADS`` environment variable sets the Monte Carlo worker count
(results never depend on it); ``--threads`` overrides the variable.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import analytic, montecarlo, oracle, verify
from .errors import ResourceLimitError

__all__ = [
    "OutputRecord",
    "records_to_csv",
    "records_to_json",
    "records_from_json",
    "main",
]

QUANTITIES = ("density", "correlation", "gamma", "p_pair", "identity")
SOURCES = ("exact", "mc", "oracle")
CSV_HEADER = "quantity,s,t,value,stderr,source"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


@dataclass(frozen=True)
class OutputRecord:
    """One emitted value; ``stderr`` is present exactly for Monte Carlo rows."""

    quantity: str
    s: int | None
    t: float
    value: float
    stderr: float | None
    source: str

    def __post_init__(self) -> None:
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}")
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        if (self.stderr is not None) != (self.source == "mc"):
            raise ValueError("stderr must be present iff source is 'mc'")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def records_to_csv(records) -> str:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            ",".join(
                (
                    r.quantity,
                    "" if r.s is None else str(r.s),
                    _fmt(r.t),
                    _fmt(r.value),
                    "" if r.stderr is None else _fmt(r.stderr),
                    r.source,
                )
            )
        )
    return "\n".join(lines) + "\n"


def records_to_json(records) -> str:
    payload = [
        {
            "quantity": r.quantity,
            "s": r.s,
            "t": r.t,
            "value": r.value,
            "stderr": r.stderr,
            "source": r.source,
        }
        for r in records
    ]
    return json.dumps(payload, indent=2) + "\n"


def records_from_json(text: str) -> list[OutputRecord]:
    return [
        OutputRecord(
            quantity=item["quantity"],
            s=item["s"],
            t=item["t"],
            value=item["value"],
            stderr=item["stderr"],
            source=item["source"],
        )
        for item in json.loads(text)
    ]


def _emit(records, fmt: str, out: str) -> None:
    text = records_to_csv(records) if fmt == "csv" else records_to_json(records)
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_t_grid(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ValueError(f"could not parse time grid {text!r}") from exc
    if not values:
        raise ValueError("time grid is empty")
    for t in values:
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"time {t} outside [0, 1]")
    return values


_DEFAULT_T = ",".join(str(t) for t in montecarlo.DEFAULT_T_GRID)


def _add_common(parser: argparse.ArgumentParser, with_mc: bool = True) -> None:
    parser.add_argument("--t", help=f"comma-separated times in [0,1] (default {_DEFAULT_T})")
    parser.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    parser.add_argument("--out", help="output path, '-' for stdout (default)")
    parser.add_argument("--config", help="JSON file presetting any flag; explicit flags win")
    if with_mc:
        parser.add_argument("--sites", type=int, help="ring length for Monte Carlo (default 1000000)")
        parser.add_argument("--replicas", type=int, help="independent replicas (default 32)")
        parser.add_argument("--seed", type=int, help="master seed (default 42)")
        parser.add_argument("--boundary", choices=montecarlo.BOUNDARY_MODES, help="lattice boundary (default ring)")
        parser.add_argument("--threads", type=int, help="worker threads (default: RSA1D_THREADS or 1)")


_COMMON_DEFAULTS = {
    "t": _DEFAULT_T,
    "format": "csv",
    "out": "-",
    "sites": 1_000_000,
    "replicas": 32,
    "seed": 42,
    "boundary": "ring",
    "threads": None,
}


def _resolve(args: argparse.Namespace, defaults: dict) -> dict:
    """Layer flag values over config-file values over defaults."""
    merged = dict(defaults)
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
        # one config file may serve several subcommands; keys a command does
        # not understand are simply ignored
        merged.update({k: v for k, v in loaded.items() if k in merged})
    for key in merged:
        cli_value = getattr(args, key, None)
        if cli_value is not None:
            merged[key] = cli_value
    return merged


def _mc_config(opts: dict, s_max: int = 0) -> montecarlo.SimConfig:
    return montecarlo.SimConfig(
        sites=opts["sites"],
        replicas=opts["replicas"],
        seed=opts["seed"],
        t_grid=_parse_t_grid(opts["t"]),
        s_max=s_max,
        boundary=opts["boundary"],
    )


def _cmd_density(args) -> int:
    opts = _resolve(args, {**_COMMON_DEFAULTS, "source": "exact", "radius": 4})
    grid = _parse_t_grid(opts["t"])
    records = []
    if opts["source"] == "exact":
        for t in grid:
            records.append(OutputRecord("density", None, t, analytic.density_exact(t), None, "exact"))
    elif opts["source"] == "oracle":
        for t in grid:
            value = oracle.exact_center_density(opts["radius"], t)
            records.append(OutputRecord("density", None, t, value, None, "oracle"))
    else:
        table = montecarlo.run_density_mc(_mc_config(opts), threads=opts["threads"])
        for t in grid:
            est = table[t]
            records.append(OutputRecord("density", None, t, est.mean, est.stderr, "mc"))
    _emit(records, opts["format"], opts["out"])
    return EXIT_OK


def _oracle_correlation(s: int, t: float, radius: int) -> float:
    """Window covariance of the occupation indicators at distance s."""
    n = s + 1 + 2 * radius
    both = oracle.exact_pattern_prob(
        n, t, oracle.PatternSpec([(radius, oracle.OCCUPIED), (radius + s, oracle.OCCUPIED)])
    )
    left = oracle.exact_pattern_prob(n, t, oracle.PatternSpec([(radius, oracle.OCCUPIED)]))
    right = oracle.exact_pattern_prob(n, t, oracle.PatternSpec([(radius + s, oracle.OCCUPIED)]))
    return both - left * right


def _cmd_correlation(args) -> int:
    opts = _resolve(
        args,
        {**_COMMON_DEFAULTS, "source": "exact", "radius": None, "s_max": 4, "tol": 1e-12},
    )
    grid = _parse_t_grid(opts["t"])
    s_values = list(range(opts["s_max"] + 1))
    records = []
    if opts["source"] == "exact":
        for t in grid:
            for s in s_values:
                value = analytic.correlation_exact(s, t, opts["tol"]).value
                records.append(OutputRecord("correlation", s, t, value, None, "exact"))
    elif opts["source"] == "oracle":
        for t in grid:
            for s in s_values:
                radius = opts["radius"] if opts["radius"] is not None else (oracle.MAX_WINDOW - s - 1) // 2
                value = _oracle_correlation(s, t, radius)
                records.append(OutputRecord("correlation", s, t, value, None, "oracle"))
    else:
        table = montecarlo.run_correlation_mc(_mc_config(opts, s_max=opts["s_max"]), threads=opts["threads"])
        for t in grid:
            for s in s_values:
                est = table[(s, t)]
                records.append(OutputRecord("correlation", s, t, est.mean, est.stderr, "mc"))
    _emit(records, opts["format"], opts["out"])
    return EXIT_OK


def _cmd_gamma(args) -> int:
    opts = _resolve(args, {**_COMMON_DEFAULTS, "source": "exact", "radius": None, "s": 2})
    grid = _parse_t_grid(opts["t"])
    s = opts["s"]
    records = []
    if opts["source"] == "exact":
        for t in grid:
            records.append(OutputRecord("gamma", s, t, analytic.gamma_even_exact(s, t), None, "exact"))
    elif opts["source"] == "oracle":
        radius = opts["radius"] if opts["radius"] is not None else (oracle.MAX_WINDOW - s - 2) // 2
        for t in grid:
            records.append(OutputRecord("gamma", s, t, oracle.exact_gamma(radius, s, t), None, "oracle"))
    else:
        table = montecarlo.run_gamma_mc(_mc_config(opts, s_max=0), s, threads=opts["threads"])
        for t in grid:
            est = table[t]
            records.append(OutputRecord("gamma", s, t, est.gamma.mean, est.gamma.stderr, "mc"))
            records.append(OutputRecord("p_pair", s, t, est.pair_s.mean, est.pair_s.stderr, "mc"))
            records.append(
                OutputRecord("p_pair", s + 1, t, est.pair_s_next.mean, est.pair_s_next.stderr, "mc")
            )
            records.append(OutputRecord("density", None, t, est.density.mean, est.density.stderr, "mc"))
    _emit(records, opts["format"], opts["out"])
    return EXIT_OK


def _cmd_oracle(args) -> int:
    defaults = {**_COMMON_DEFAULTS, "radius": None, "s": 2}
    for key in ("sites", "replicas", "seed", "boundary", "threads"):
        defaults.pop(key)
    opts = _resolve(args, defaults)
    grid = _parse_t_grid(opts["t"])
    records = []
    if args.quantity == "density":
        radius = opts["radius"] if opts["radius"] is not None else 4
        for t in grid:
            records.append(
                OutputRecord("density", None, t, oracle.exact_center_density(radius, t), None, "oracle")
            )
    else:
        s = opts["s"]
        radius = opts["radius"] if opts["radius"] is not None else (oracle.MAX_WINDOW - s - 2) // 2
        for t in grid:
            records.append(OutputRecord("gamma", s, t, oracle.exact_gamma(radius, s, t), None, "oracle"))
    _emit(records, opts["format"], opts["out"])
    return EXIT_OK


def _cmd_verify(args) -> int:
    opts = _resolve(
        args,
        {
            "level": "quick",
            "seed": 42,
            "sites": 1_000_000,
            "replicas": 32,
            "threads": None,
            "corrupt": None,
            "config": None,
        },
    )
    results = verify.run_checks(
        level=opts["level"],
        seed=opts["seed"],
        sites=opts["sites"],
        replicas=opts["replicas"],
        corrupt=opts["corrupt"],
        threads=opts["threads"],
    )
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name:<{width}}  residual {r.residual:.3e} (tol {r.tolerance:.3e})  {r.detail}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"FAILED: {', '.join(failed)}")
        return EXIT_VERIFY_FAILED
    print(f"all {len(results)} checks passed")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    opts = _resolve(
        args,
        {
            **_COMMON_DEFAULTS,
            "source": "exact",
            "s_max": 4,
            "t_min": 0.05,
            "t_max": 1.0,
            "t_points": 20,
        },
    )
    pts = int(opts["t_points"])
    if pts < 2:
        raise ValueError("t_points must be >= 2")
    lo, hi = float(opts["t_min"]), float(opts["t_max"])
    if not 0.0 <= lo < hi <= 1.0:
        raise ValueError("need 0 <= t_min < t_max <= 1")
    grid = tuple(lo + (hi - lo) * i / (pts - 1) for i in range(pts))
    s_values = list(range(opts["s_max"] + 1))
    records = []
    want = ("exact", "mc") if opts["source"] == "both" else (opts["source"],)
    if "exact" in want:
        for t in grid:
            records.append(OutputRecord("density", None, t, analytic.density_exact(t), None, "exact"))
            for s in s_values:
                value = analytic.correlation_exact(s, t, 1e-12).value
                records.append(OutputRecord("correlation", s, t, value, None, "exact"))
            for s in range(2, opts["s_max"] + 1, 2):
                records.append(OutputRecord("gamma", s, t, analytic.gamma_even_exact(s, t), None, "exact"))
    if "mc" in want:
        mc_opts = dict(opts)
        mc_opts["t"] = ",".join(str(t) for t in grid)
        table = montecarlo.run_correlation_mc(_mc_config(mc_opts, s_max=opts["s_max"]), threads=opts["threads"])
        dens = montecarlo.run_density_mc(_mc_config(mc_opts), threads=opts["threads"])
        for t in grid:
            est = dens[t]
            records.append(OutputRecord("density", None, t, est.mean, est.stderr, "mc"))
            for s in s_values:
                c = table[(s, t)]
                records.append(OutputRecord("correlation", s, t, c.mean, c.stderr, "mc"))
    _emit(records, opts["format"], opts["out"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rsa1d",
        description="Exact results and simulation for 1-D deposition with nearest-neighbor exclusion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="occupied-site density")
    _add_common(p)
    p.add_argument("--source", choices=SOURCES, help="evaluation route (default exact)")
    p.add_argument("--radius", type=int, help="oracle window radius (default 4)")
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("correlation", help="pair correlation C_s")
    _add_common(p)
    p.add_argument("--source", choices=SOURCES, help="evaluation route (default exact)")
    p.add_argument("--radius", type=int, help="oracle window margin (default: widest feasible)")
    p.add_argument("--s-max", dest="s_max", type=int, help="largest distance (default 4)")
    p.add_argument("--tol", type=float, help="series truncation tolerance (default 1e-12)")
    p.set_defaults(func=_cmd_correlation)

    p = sub.add_parser("gamma", help="vacancy-vacancy-occupation probability")
    _add_common(p)
    p.add_argument("--source", choices=SOURCES, help="evaluation route (default exact)")
    p.add_argument("--radius", type=int, help="oracle window margin (default: widest feasible)")
    p.add_argument("--s", type=int, help="even gap (default 2)")
    p.set_defaults(func=_cmd_gamma)

    p = sub.add_parser("oracle", help="small-window brute-force evaluation")
    p.add_argument("quantity", choices=("density", "gamma"))
    _add_common(p, with_mc=False)
    p.add_argument("--radius", type=int, help="window margin (default: widest feasible)")
    p.add_argument("--s", type=int, help="even gap for gamma (default 2)")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("verify", help="run the cross-check suite")
    p.add_argument("--level", choices=("quick", "full"), help="quick: identities + small oracle; full: adds Monte Carlo")
    p.add_argument("--seed", type=int, help="master seed (default 42)")
    p.add_argument("--sites", type=int, help="Monte Carlo ring length (default 1000000)")
    p.add_argument("--replicas", type=int, help="Monte Carlo replicas (default 32)")
    p.add_argument("--threads", type=int, help="worker threads")
    p.add_argument("--config", help="JSON file presetting any flag")
    p.add_argument("--corrupt", help=argparse.SUPPRESS)  # falsifiability hook for the test harness
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sweep", help="plot-ready curves over a time grid")
    _add_common(p)
    p.add_argument("--source", choices=("exact", "mc", "both"), help="curve sources (default exact)")
    p.add_argument("--s-max", dest="s_max", type=int, help="largest distance (default 4)")
    p.add_argument("--t-min", dest="t_min", type=float, help="grid start (default 0.05)")
    p.add_argument("--t-max", dest="t_max", type=float, help="grid end (default 1.0)")
    p.add_argument("--t-points", dest="t_points", type=int, help="grid size (default 20)")
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
