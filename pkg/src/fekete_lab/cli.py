"""Batch experiment harness over the library.

Subcommands: check, limit, entropy, levelset, counterexamples.  Every
run is reproducible from its flags (or --config JSON mirroring them)
plus the package version: all randomness flows from the single seed and
outputs are written atomically with deterministic formatting.  SVG
files embed a generation timestamp unless --no-timestamp is given;
JSON and CSV never contain one.

Exit codes: 0 success, 2 usage/config error, 3 violations found,
4 internal error.  Divergent or inconclusive limit statuses are
findings, not failures, and exit 0.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .checks import (
    check_componentwise,
    check_four_term,
    check_joint,
    check_monoid_sign,
    check_set_union,
    check_shifted_subadditivity,
)
from .domain import ConfigError, FeketeLabError, GridSchedule, Point
from .ioutil import csv_text, write_json_atomic, write_text_atomic
from .levelset import check_levelset_lemma, rubin_unboundedness_demo
from .limits import (
    CONVERGED,
    DIVERGING_PLUS,
    INCONCLUSIVE,
    diagonal_limit,
    iterated_limit,
    ray_limit,
    simultaneous_limit,
)
from .registry import builtin, builtin_names, load_set_family, load_tabulated
from .sampling import SampleBudget
from .subshift import CapExceededError, builtin_sft, builtin_sft_names, entropy_bounds, load_sft_spec
from .svgplot import PlotSeries, line_plot_svg

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VIOLATIONS = 3
EXIT_INTERNAL = 4


# ---------------------------------------------------------------------------
# Configuration plumbing
# ---------------------------------------------------------------------------

def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise ConfigError("config file must hold a JSON object")
    return obj


def _resolve(ns: argparse.Namespace, config: dict, key: str, default):
    value = getattr(ns, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return default


def _resolve_threads(ns: argparse.Namespace, config: dict) -> int:
    raw = _resolve(ns, config, "threads", None)
    if raw is None:
        raw = os.environ.get("FEKETE_LAB_THREADS", "1")
    try:
        threads = int(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"thread count must be an integer, got {raw!r}") from None
    if threads < 1:
        raise ConfigError(f"thread count must be >= 1, got {threads}")
    return threads


def _parse_point(text: str) -> Point:
    try:
        return Point(tuple(float(c) for c in str(text).split(",")))
    except (ValueError, FeketeLabError) as exc:
        raise ConfigError(f"cannot parse point {text!r}: {exc}") from exc


def _parse_order(text: str, dim: int) -> tuple[int, ...]:
    try:
        order = tuple(int(c) - 1 for c in str(text).split(","))
    except ValueError as exc:
        raise ConfigError(f"cannot parse axis order {text!r}: {exc}") from exc
    if sorted(order) != list(range(dim)):
        raise ConfigError(f"axis order {text!r} is not a permutation of 1..{dim}")
    return order


def _get_oracle(name: str | None, table: str | None):
    if table is not None:
        return load_tabulated(table)
    if name is None:
        raise ConfigError("give an oracle with --fn NAME or --table FILE")
    return builtin(name)


def _meta(ns_command: str, seed: int) -> dict:
    return {"command": ns_command, "seed": seed, "version": __version__}


class _Run:
    """Resolved common options for one command invocation."""

    def __init__(self, ns: argparse.Namespace):
        config = _load_config(ns.config)
        self.config = config
        self.out = Path(_resolve(ns, config, "out", "fekete_results"))
        self.seed = int(_resolve(ns, config, "seed", 2024))
        self.threads = _resolve_threads(ns, config)
        no_ts = bool(getattr(ns, "no_timestamp", False) or config.get("no_timestamp", False))
        self.timestamp = None if no_ts else datetime.now(timezone.utc).isoformat()


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

_CHECK_MODES = ("joint", "componentwise", "four_term", "monoid", "shift", "set_union", "all")


def _cmd_check(ns: argparse.Namespace) -> int:
    run = _Run(ns)
    mode = _resolve(ns, run.config, "mode", "all")
    if mode not in _CHECK_MODES:
        raise ConfigError(f"unknown mode {mode!r}; choose from {', '.join(_CHECK_MODES)}")
    count = int(_resolve(ns, run.config, "count", 10_000))

    reports = []
    if mode == "set_union":
        sets_path = _resolve(ns, run.config, "sets", None)
        if sets_path is None:
            raise ConfigError("set_union mode needs --sets FILE")
        g, family = load_set_family(sets_path)
        reports.append(check_set_union(g, family))
    else:
        oracle = _get_oracle(_resolve(ns, run.config, "fn", None),
                             _resolve(ns, run.config, "table", None))
        budget = SampleBudget(count=count, seed=run.seed)
        if mode in ("joint", "all"):
            reports.append(check_joint(oracle, budget))
        if mode in ("componentwise", "all"):
            reports.append(check_componentwise(oracle, budget))
        if mode in ("four_term", "all"):
            reports.append(check_four_term(oracle, budget))
        if mode == "monoid" or (mode == "all" and oracle.domain.orthant is None
                                and oracle.domain.grid_axes is None):
            reports.append(check_monoid_sign(oracle, budget))
        if mode == "shift":
            shift = int(_resolve(ns, run.config, "shift", 1))
            reports.append(check_shifted_subadditivity(oracle, shift, budget))

    total = 0
    for report in reports:
        stem = f"check_{report.kind}"
        payload = {"meta": _meta("check", run.seed), **report.to_json_dict()}
        write_json_atomic(run.out / f"{stem}.json", payload)
        write_text_atomic(run.out / f"{stem}.csv", csv_text(report.to_csv_rows()))
        total += len(report.violations)
        print(f"{report.kind}: {len(report.violations)} violation(s) "
              f"over {report.samples_checked} samples -> {run.out / (stem + '.json')}")
    return EXIT_VIOLATIONS if total else EXIT_OK


# ---------------------------------------------------------------------------
# limit
# ---------------------------------------------------------------------------

def _bracket_outputs(run: _Run, stem: str, bracket) -> None:
    payload = {"meta": _meta("limit", run.seed), **bracket.to_json_dict()}
    write_json_atomic(run.out / f"{stem}.json", payload)
    write_text_atomic(run.out / f"{stem}.csv", csv_text(bracket.samples_csv_rows()))
    per_shell: dict[int, float] = {}
    fold = min if bracket.sense == "inf" else max
    for s in bracket.samples:
        per_shell[s.shell] = fold(per_shell.get(s.shell, s.ratio), s.ratio)
    series = [
        PlotSeries(name="shell extreme",
                   points=tuple((float(k), v) for k, v in sorted(per_shell.items()))),
        PlotSeries(name="running bound", dashed=True,
                   points=tuple((float(k), v) for k, v in bracket.running_bound_by_shell())),
    ]
    svg = line_plot_svg(series, title=stem, xlabel="shell",
                        ylabel="ratio", timestamp=run.timestamp)
    write_text_atomic(run.out / f"{stem}.svg", svg)


def _cmd_limit(ns: argparse.Namespace) -> int:
    run = _Run(ns)
    oracle = _get_oracle(_resolve(ns, run.config, "fn", None),
                         _resolve(ns, run.config, "table", None))
    delta = float(_resolve(ns, run.config, "delta", 0.01))
    growth = float(_resolve(ns, run.config, "growth", 2.0))
    levels = int(_resolve(ns, run.config, "levels", 40))
    base_text = _resolve(ns, run.config, "base", None)
    iterated = _resolve(ns, run.config, "iterated", None)
    direction = _resolve(ns, run.config, "direction", None)
    diagonal = _resolve(ns, run.config, "diagonal", None)
    d = oracle.domain.dim

    if iterated is not None:
        order = _parse_order(iterated, d)
        base = _parse_point(base_text) if base_text else Point((1.0,) * d)
        schedule = GridSchedule(base=base, growth=growth, levels=levels)
        result = iterated_limit(oracle, order, schedule, delta)
        payload = {"meta": _meta("limit", run.seed), **result.to_json_dict()}
        write_json_atomic(run.out / "iterated.json", payload)
        value = "+inf" if result.value == math.inf else (
            "-inf" if result.value == -math.inf else repr(result.value))
        print(f"iterated order {iterated}: value {value}, status {result.status} "
              f"-> {run.out / 'iterated.json'}")
        return EXIT_OK

    if direction is not None:
        dirp = _parse_point(direction)
        schedule = GridSchedule(base=Point((1.0,)), growth=growth, levels=levels)
        bracket = ray_limit(oracle, dirp, schedule, delta)
        _bracket_outputs(run, "ray", bracket)
        print(f"ray {direction}: status {bracket.status}, best_upper {bracket.best_upper!r}")
        return EXIT_OK

    if diagonal is not None:
        try:
            powers = [float(p) for p in str(diagonal).split(",")]
        except ValueError as exc:
            raise ConfigError(f"cannot parse diagonal powers {diagonal!r}: {exc}") from exc
        if len(powers) != d:
            raise ConfigError(f"{len(powers)} powers for {d} axes")
        paths = [(lambda t, p=p: t ** p) for p in powers]
        schedule = GridSchedule(base=Point((1.0,)), growth=growth, levels=levels)
        bracket = diagonal_limit(oracle, paths, schedule, delta)
        _bracket_outputs(run, "diagonal", bracket)
        print(f"diagonal t^{powers}: status {bracket.status}, "
              f"best_upper {bracket.best_upper!r}")
        return EXIT_OK

    base = _parse_point(base_text) if base_text else Point((1.0,) * d)
    schedule = GridSchedule(base=base, growth=growth, levels=levels)
    bracket = simultaneous_limit(oracle, schedule, delta)
    _bracket_outputs(run, "bracket", bracket)
    print(f"simultaneous: status {bracket.status}, best_upper {bracket.best_upper!r}, "
          f"evaluations {bracket.evaluations}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entropy
# ---------------------------------------------------------------------------

def _cmd_entropy(ns: argparse.Namespace) -> int:
    run = _Run(ns)
    name = _resolve(ns, run.config, "sft", None)
    if name is None:
        raise ConfigError("give a subshift with --sft NAME or --sft FILE")
    if name in builtin_sft_names():
        sft = builtin_sft(name)
    elif Path(name).exists():
        sft = load_sft_spec(name)
    else:
        raise ConfigError(f"unknown subshift {name!r}: not a fixture "
                          f"({', '.join(builtin_sft_names())}) and not a file")
    max_side = int(_resolve(ns, run.config, "max_side", 12))
    bracket = entropy_bounds(sft, max_side)
    payload = {"meta": _meta("entropy", run.seed), "sft": name, **bracket.to_json_dict()}
    write_json_atomic(run.out / "entropy.json", payload)
    write_text_atomic(run.out / "entropy.csv", csv_text(bracket.to_csv_rows()))
    pts_ratio = tuple((float(e.sides[0]), e.ratio) for e in bracket.entries)
    pts_min = tuple((float(e.sides[0]), e.running_min) for e in bracket.entries)
    series = [PlotSeries(name="ratio", points=pts_ratio),
              PlotSeries(name="running min", points=pts_min, dashed=True)]
    svg = line_plot_svg(series, title=f"entropy bounds: {name}", xlabel="side",
                        ylabel="log_a(count)/volume", timestamp=run.timestamp)
    write_text_atomic(run.out / "entropy.svg", svg)
    note = " (truncated at cap)" if bracket.truncated else ""
    print(f"entropy '{name}': best_upper {bracket.best_upper!r}{note} "
          f"-> {run.out / 'entropy.json'}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# levelset
# ---------------------------------------------------------------------------

def _cmd_levelset(ns: argparse.Namespace) -> int:
    run = _Run(ns)
    oracle = _get_oracle(_resolve(ns, run.config, "fn", None),
                         _resolve(ns, run.config, "table", None))
    anchors_text = _resolve(ns, run.config, "anchors", None)
    if anchors_text is None:
        raise ConfigError("give anchors with --anchors \"t1,t2[;u1,u2...]\"")
    anchors = [_parse_point(chunk) for chunk in str(anchors_text).split(";")]
    method = _resolve(ns, run.config, "method", "grid")
    cells = int(_resolve(ns, run.config, "cells", 400))
    samples = int(_resolve(ns, run.config, "samples", 20_000))
    rows = check_levelset_lemma(oracle, anchors, method, cells=cells,
                                samples=samples, seed=run.seed)
    payload = {"meta": _meta("levelset", run.seed), "oracle": oracle.name,
               "rows": [r.to_json_dict() for r in rows]}
    write_json_atomic(run.out / "levelset.json", payload)
    csv_rows = [["anchor", "k", "mu_estimate", "error", "bound", "margin", "holds"]]
    for r in rows:
        csv_rows.append([
            " ".join(repr(c) for c in r.anchor), repr(r.k), repr(r.estimate.value),
            repr(r.estimate.error_bound), repr(r.bound), repr(r.margin), str(r.holds),
        ])
    write_text_atomic(run.out / "levelset.csv", csv_text(csv_rows))
    failures = [r for r in rows if not r.holds]
    for r in rows:
        print(f"anchor {r.anchor}: margin {r.margin!r} "
              f"({'holds' if r.holds else 'FAILS'})")
    return EXIT_VIOLATIONS if failures else EXIT_OK


# ---------------------------------------------------------------------------
# counterexamples
# ---------------------------------------------------------------------------

def _replay_sqrt_product(seed: int) -> dict:
    oracle = builtin("sqrt_prod")
    budget = SampleBudget(count=2000, seed=seed)
    joint = check_joint(oracle, budget)
    witness = joint.find(((1.0, 2.0), (2.0, 1.0)))
    expected_margin = 3.0 - 2.0 * math.sqrt(2.0)
    margin_ok = witness is not None and abs(witness.margin - expected_margin) <= 1e-12
    componentwise = check_componentwise(oracle, budget)
    return {
        "name": "sqrt_product_joint_vs_componentwise",
        "detail": "componentwise subadditive yet jointly violated at (1,2)+(2,1)",
        "reproduced": bool(margin_ok and componentwise.clean),
        "joint_margin": None if witness is None else witness.margin,
        "componentwise_clean": componentwise.clean,
    }


def _replay_min_denominator() -> dict:
    demo = rubin_unboundedness_demo(100)
    values_ok = all(v == p[0].denominator for p, v in demo.diagonal)
    return {
        "name": "min_denominator_unbounded_box",
        "detail": "bounded on every axis line, unbounded on the box",
        "reproduced": bool(values_ok and demo.ok),
        "max_diagonal_value": max(v for _, v in demo.diagonal),
    }


def _replay_mixed_curvature() -> dict:
    oracle = builtin("x1sq_sqrt_x2")
    schedule = GridSchedule(base=Point((1.0, 1.0)), levels=40)
    lo = iterated_limit(oracle, (0, 1), schedule, 0.01)
    hi = iterated_limit(oracle, (1, 0), schedule, 0.01)
    sim = simultaneous_limit(oracle, schedule, 0.01)
    ok = (lo.status == CONVERGED and abs(lo.value) <= 0.01
          and hi.status == DIVERGING_PLUS and hi.value == math.inf
          and sim.status == INCONCLUSIVE)
    return {
        "name": "mixed_curvature_order_dependence",
        "detail": "iterated limits 0 vs +inf depending on order; no simultaneous limit",
        "reproduced": bool(ok),
        "order_1_2": lo.value,
        "order_2_1": hi.value,
        "simultaneous_status": sim.status,
    }


def _replay_parity_set_lift(seed: int) -> dict:
    oracle = builtin("nmod2")
    from .registry import set_function_from_integer
    g = set_function_from_integer(oracle)
    union = check_set_union(g, [[1, 2], [2, 3]])
    union_hit = union.find(((1, 2), (2, 3)))
    budget = SampleBudget(count=2000, seed=seed)
    shifted = check_shifted_subadditivity(oracle, 1, budget)
    shift_hit = shifted.find(((1.0,), (1.0,)))
    unshifted = check_shifted_subadditivity(oracle, 0, budget)
    ok = (union_hit is not None and union_hit.lhs == 1.0 and union_hit.rhs == 0.0
          and shift_hit is not None and shift_hit.lhs == 1.0 and shift_hit.rhs == 0.0
          and unshifted.clean)
    return {
        "name": "parity_set_lift_and_shift",
        "detail": "cardinality lift breaks union subadditivity; shift by 1 breaks it on Z",
        "reproduced": bool(ok),
        "union_margin": None if union_hit is None else union_hit.margin,
        "shift_margin": None if shift_hit is None else shift_hit.margin,
        "unshifted_clean": unshifted.clean,
    }


def _cmd_counterexamples(ns: argparse.Namespace) -> int:
    run = _Run(ns)
    results = [
        _replay_sqrt_product(run.seed),
        _replay_min_denominator(),
        _replay_mixed_curvature(),
        _replay_parity_set_lift(run.seed),
    ]
    payload = {"meta": _meta("counterexamples", run.seed), "results": results}
    write_json_atomic(run.out / "counterexamples.json", payload)
    all_ok = True
    for r in results:
        status = "PASS" if r["reproduced"] else "FAIL"
        all_ok &= bool(r["reproduced"])
        print(f"{status} {r['name']}: {r['detail']}")
    print(f"{sum(r['reproduced'] for r in results)}/{len(results)} reproduced "
          f"-> {run.out / 'counterexamples.json'}")
    return EXIT_OK if all_ok else EXIT_VIOLATIONS


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fekete-lab",
        description="Experiments on componentwise subadditive functions: "
                    "subadditivity checks, limit brackets, level-set bounds, "
                    "and subshift entropy bounds.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", help="output directory (default fekete_results)")
        p.add_argument("--seed", type=int, help="seed for all sampling (default 2024)")
        p.add_argument("--threads", help="worker cap, or env FEKETE_LAB_THREADS")
        p.add_argument("--no-timestamp", action="store_true",
                       help="omit the generation timestamp from SVG output")
        p.add_argument("--config", help="JSON config file mirroring the flags")

    p = sub.add_parser("check", help="run subadditivity checks on an oracle")
    p.add_argument("--fn", help=f"builtin oracle: {', '.join(builtin_names())}")
    p.add_argument("--table", help="tabulated-function JSON file")
    p.add_argument("--mode", help=f"one of {', '.join(_CHECK_MODES)} (default all)")
    p.add_argument("--count", type=int, help="random sample count (default 10000)")
    p.add_argument("--shift", type=int, help="shift amount for shift mode (default 1)")
    p.add_argument("--sets", help="set-family JSON file for set_union mode")
    common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("limit", help="estimate ratio-net limits")
    p.add_argument("--fn", help="builtin oracle name")
    p.add_argument("--table", help="tabulated-function JSON file")
    p.add_argument("--delta", type=float, help="convergence tolerance (default 0.01)")
    p.add_argument("--base", help="schedule base point, e.g. 1,1")
    p.add_argument("--growth", type=float, help="schedule growth factor (default 2)")
    p.add_argument("--levels", type=int, help="schedule level count (default 40)")
    p.add_argument("--iterated", help="1-based axis order for nested limits, e.g. 2,1")
    p.add_argument("--direction", help="ray direction, e.g. 1,1")
    p.add_argument("--diagonal", help="per-axis powers of t for a diagonal path, e.g. 1,2")
    common(p)
    p.set_defaults(func=_cmd_limit)

    p = sub.add_parser("entropy", help="pattern-count entropy bounds for a subshift")
    p.add_argument("--sft", help=f"fixture ({', '.join(builtin_sft_names())}) or JSON file")
    p.add_argument("--max-side", dest="max_side", type=int,
                   help="largest cube side (default 12)")
    common(p)
    p.set_defaults(func=_cmd_entropy)

    p = sub.add_parser("levelset", help="level-set measure lemma margins")
    p.add_argument("--fn", help="builtin oracle name")
    p.add_argument("--table", help="tabulated-function JSON file")
    p.add_argument("--anchors", help="semicolon-separated anchor points, e.g. 1,1;2,3")
    p.add_argument("--method", help="grid or mc (default grid)")
    p.add_argument("--cells", type=int, help="quadrature cells per axis (default 400)")
    p.add_argument("--samples", type=int, help="Monte Carlo samples (default 20000)")
    common(p)
    p.set_defaults(func=_cmd_levelset)

    p = sub.add_parser("counterexamples",
                       help="replay the gallery of counterexamples end to end")
    common(p)
    p.set_defaults(func=_cmd_counterexamples)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return ns.func(ns)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FeketeLabError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # no exit codes beyond the documented four
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
