"""Command-line interface: compare, toy, benchmark, error-analysis.

Exit codes: 0 success, 1 usage (bad flags, unsupported model/input
combinations), 2 validation (malformed matrices or files), 3 numerical
(degenerate adjustment or non-convergent fit).

FUZZYRAND_SEED and FUZZYRAND_WORKERS override the corresponding flags
when those are not given.  Without either, a fresh entropy seed is drawn
and printed to stderr so the run can be reproduced.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .adjust import ModelFamily, RandomModel, Sided, adjusted_batch, adjusted_index
from .errors import FuzzyRandError, NumericalError, UsageError, ValidationError
from .expectation import DEFAULT_SAMPLES, McConfig
from .indices import IndexKind
from .membership import read_csv, write_csv
from .synth import FactorialParams, generate_pair, toy_allocations

ERROR_GRID = {
    "clusters": [2, 50],
    "points": [100, 1000],
    "imbalance": [0.8, 0.2],
    "randomize": [0.5, 1.0],
    "precision": [0.1, 1.0, 1.5],
}
DIRICHLET_MODEL_NAMES = ("fit", "sym", "flat")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p):
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                   help="Monte-Carlo samples per expectation (default 10^7)")
    p.add_argument("--seed", type=int, default=None,
                   help="base seed; defaults to FUZZYRAND_SEED or fresh entropy")
    p.add_argument("--workers", type=int, default=None,
                   help="worker substreams; defaults to FUZZYRAND_WORKERS or 1")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="output format (default csv)")
    p.add_argument("--out", type=Path, default=None,
                   help="write results to this path instead of stdout")


def _add_kind(p):
    p.add_argument("--kind", choices=("ndc", "brouwer"), default="ndc",
                   help="agreement/concordance family (default ndc)")


def build_parser() -> _Parser:
    parser = _Parser(prog="fuzzyrand",
                     description="Chance-adjusted fuzzy Rand indices.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    c = sub.add_parser("compare", parents=[], help="compare two membership CSVs")
    c.add_argument("first", type=Path)
    c.add_argument("second", type=Path)
    c.add_argument("--models", default="perm,fit,sym,flat",
                   help="comma list from perm,cat,num,all,fit,sym,flat")
    _add_kind(c)
    c.add_argument("--one-sided", action="store_true",
                   help="hold the second allocation fixed")
    c.add_argument("--approx", action="store_true",
                   help="prefer approximations over hard closed forms")
    c.add_argument("--header", action="store_true",
                   help="input files start with a header row")
    _add_common(c)
    c.set_defaults(func=cmd_compare)

    t = sub.add_parser("toy",
                       help="write the five toy matrices and run the 10 comparisons")
    t.add_argument("--out-dir", type=Path, default=Path("."),
                   help="directory for the matrix CSVs (default .)")
    t.add_argument("--models", default="perm,fit,sym,flat")
    _add_kind(t)
    _add_common(t)
    t.set_defaults(func=cmd_toy)

    b = sub.add_parser("benchmark", help="run a factorial grid of synthetic pairs")
    b.add_argument("--grid", type=Path, required=True,
                   help="JSON file with clusters/points/imbalance/precision/"
                        "randomize lists")
    b.add_argument("--replicates", type=int, default=None,
                   help="pairs generated per setting (default from grid or 5)")
    _add_kind(b)
    b.add_argument("--scale", type=float, default=1.0,
                   help="shrink samples, replicates and grid for quick runs")
    _add_common(b)
    b.set_defaults(func=cmd_benchmark)

    e = sub.add_parser("error-analysis",
                       help="replicate spread of the Dirichlet-model estimates")
    e.add_argument("--reps", type=int, default=100,
                   help="repeated computations per comparison (default 100)")
    e.add_argument("--pairs", type=int, default=10,
                   help="generated pairs per grid setting (default 10)")
    _add_kind(e)
    e.add_argument("--scale", type=float, default=1.0,
                   help="shrink samples, reps, pairs and grid for quick runs")
    _add_common(e)
    e.set_defaults(func=cmd_error_analysis)

    return parser


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return int(args.seed)
    env = os.environ.get("FUZZYRAND_SEED")
    if env:
        return int(env)
    seed = np.random.SeedSequence().entropy
    print(f"seed: {seed}", file=sys.stderr)
    return seed


def _resolve_workers(args) -> int:
    if args.workers is not None:
        return int(args.workers)
    env = os.environ.get("FUZZYRAND_WORKERS")
    return int(env) if env else 1


def _parse_models(text: str, sided: Sided, exact_hint: bool = True):
    models = []
    for name in text.split(","):
        name = name.strip().lower()
        if not name:
            continue
        try:
            family = ModelFamily(name)
        except ValueError:
            raise UsageError(f"unknown model: {name!r}")
        models.append(RandomModel(family, sided=sided, exact_hint=exact_hint))
    if not models:
        raise UsageError("no models given")
    return models


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def _emit(records, fieldnames, args):
    if args.format == "json":
        text = json.dumps(records, indent=2) + "\n"
    else:
        from io import StringIO

        buf = StringIO()
        writer = csv.DictWriter(buf, fieldnames=fieldnames)
        writer.writeheader()
        for rec in records:
            writer.writerow({k: _fmt(rec.get(k)) for k in fieldnames})
        text = buf.getvalue()
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _result_fields(result):
    prov = result.provenance
    return {
        "raw": result.raw,
        "expected": result.expected,
        "adjusted": result.adjusted,
        "std_error": prov.get("std_error"),
        "samples": prov.get("samples"),
        "seed": prov.get("seed"),
        "flags": ";".join(prov.get("degenerate_flags", ())),
    }


_EMPTY_RESULT = {"raw": None, "expected": None, "adjusted": None,
                 "std_error": None, "samples": None, "seed": None, "flags": ""}


def cmd_compare(args):
    seed = _resolve_seed(args)
    workers = _resolve_workers(args)
    kind = IndexKind(args.kind)
    sided = Sided.ONE if args.one_sided else Sided.TWO
    models = _parse_models(args.models, sided, exact_hint=not args.approx)
    c1 = read_csv(args.first, has_header=args.header)
    c2 = read_csv(args.second, has_header=args.header)
    cfg = McConfig(seed=seed, samples=args.samples, workers=workers)
    records = []
    for model in models:
        result = adjusted_index(c1, c2, model, kind, cfg)
        rec = {"model": model.family.value, "sided": model.sided.value,
               "kind": kind.value}
        rec.update(_result_fields(result))
        records.append(rec)
    fields = ["model", "sided", "kind", "raw", "expected", "adjusted",
              "std_error", "samples", "seed", "flags"]
    _emit(records, fields, args)


def cmd_toy(args):
    seed = _resolve_seed(args)
    workers = _resolve_workers(args)
    kind = IndexKind(args.kind)
    models = _parse_models(args.models, Sided.TWO)
    toys = toy_allocations()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for name in ("uneven_low_fuzzy", "even_low_fuzzy", "high_fuzzy",
                 "uneven_hard", "even_hard"):
        write_csv(toys.matrix(name), args.out_dir / f"{name}.csv")

    cfg = McConfig(seed=seed, samples=args.samples, workers=workers)
    pair_list = toys.pairs()
    cells = adjusted_batch([(m1, m2) for _, _, _, m1, m2 in pair_list],
                           models, kind, cfg)
    records = []
    for cell in cells:
        cid, first, second = (pair_list[cell.pair_index][0],
                              pair_list[cell.pair_index][1],
                              pair_list[cell.pair_index][2])
        rec = {"comparison": cid, "first": first, "second": second,
               "model": cell.model.family.value, "sided": cell.model.sided.value,
               "kind": kind.value, "error": cell.error or ""}
        rec.update(_result_fields(cell.result) if cell.result else _EMPTY_RESULT)
        records.append(rec)
    fields = ["comparison", "first", "second", "model", "sided", "kind", "raw",
              "expected", "adjusted", "std_error", "samples", "seed", "flags",
              "error"]
    _emit(records, fields, args)


def _scaled(value: int, scale: float, floor: int) -> int:
    return max(floor, int(round(value * scale)))


def _stride(values, scale: float):
    if scale >= 1.0:
        return list(values)
    step = max(1, int(round(1.0 / scale)))
    return list(values)[::step]


def _grid_settings(grid: dict, scale: float):
    required = ("clusters", "points", "imbalance", "precision", "randomize")
    for key in required:
        if key not in grid:
            raise UsageError(f"grid file is missing {key!r}")
        if not isinstance(grid[key], (list, tuple)) or not grid[key]:
            raise UsageError(f"grid entry {key!r} must be a nonempty list")
    axes = [_stride(grid[key], scale) for key in required]
    return [dict(zip(required, combo)) for combo in itertools.product(*axes)]


def cmd_benchmark(args):
    seed = _resolve_seed(args)
    workers = _resolve_workers(args)
    kind = IndexKind(args.kind)
    try:
        grid = json.loads(args.grid.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"grid file is not valid JSON: {exc}")
    if not isinstance(grid, dict):
        raise ValidationError("grid file must hold a JSON object")

    sided = Sided(grid.get("sided", "two"))
    replicates = args.replicates or int(grid.get("replicates", 5))
    replicates = _scaled(replicates, args.scale, 1)
    samples = _scaled(args.samples, args.scale, 1000)
    models = _parse_models(",".join(grid.get("models", ["perm", "fit", "sym",
                                                        "flat"])), sided)
    settings = _grid_settings(grid, args.scale)

    records = []
    for si, setting in enumerate(settings):
        for rep in range(replicates):
            pair_seed = int(np.random.SeedSequence(
                seed, spawn_key=(si, rep)).generate_state(1, np.uint64)[0])
            params = FactorialParams(
                n_clusters=setting["clusters"], n_points=setting["points"],
                imbalance=setting["imbalance"], precision=setting["precision"],
                randomize_rate=setting["randomize"], sided=sided.value,
                seed=pair_seed,
            )
            pair = generate_pair(params)
            cfg = McConfig(seed=pair_seed, samples=samples, workers=workers)
            for cell in adjusted_batch([pair], models, kind, cfg):
                rec = {"clusters": setting["clusters"],
                       "points": setting["points"],
                       "imbalance": setting["imbalance"],
                       "precision": setting["precision"],
                       "randomize": setting["randomize"],
                       "sided": sided.value, "replicate": rep,
                       "model": cell.model.family.value, "kind": kind.value,
                       "error": cell.error or ""}
                rec.update(_result_fields(cell.result) if cell.result
                           else _EMPTY_RESULT)
                records.append(rec)
    fields = ["clusters", "points", "imbalance", "precision", "randomize",
              "sided", "replicate", "model", "kind", "raw", "expected",
              "adjusted", "std_error", "samples", "seed", "flags", "error"]
    _emit(records, fields, args)


def cmd_error_analysis(args):
    seed = _resolve_seed(args)
    workers = _resolve_workers(args)
    kind = IndexKind(args.kind)
    reps = _scaled(args.reps, args.scale, 2)
    pairs = _scaled(args.pairs, args.scale, 1)
    samples = _scaled(args.samples, args.scale, 1000)
    models = _parse_models(",".join(DIRICHLET_MODEL_NAMES), Sided.TWO)

    keys = ("clusters", "points", "imbalance", "randomize", "precision")
    axes = [_stride(ERROR_GRID[k], args.scale) for k in keys]
    settings = [dict(zip(keys, combo)) for combo in itertools.product(*axes)]

    series = {name: [] for name in DIRICHLET_MODEL_NAMES}
    for si, setting in enumerate(settings):
        for pi in range(pairs):
            pair_seed = int(np.random.SeedSequence(
                seed, spawn_key=(si, pi)).generate_state(1, np.uint64)[0])
            params = FactorialParams(
                n_clusters=setting["clusters"], n_points=setting["points"],
                imbalance=setting["imbalance"], precision=setting["precision"],
                randomize_rate=setting["randomize"], sided="two",
                seed=pair_seed,
            )
            pair = generate_pair(params)
            cfg = McConfig(seed=pair_seed, samples=samples, workers=workers)
            cells = adjusted_batch([pair] * reps, models, kind, cfg)
            by_model = {name: [] for name in DIRICHLET_MODEL_NAMES}
            for cell in cells:
                if cell.error is None:
                    by_model[cell.model.family.value].append(
                        cell.result.adjusted)
            for name, values in by_model.items():
                if len(values) == reps:
                    series[name].append(values)

    records = []
    for name in DIRICHLET_MODEL_NAMES:
        kept, dropped, devs = 0, 0, []
        for values in series[name]:
            if max(values) < 0.0:  # all replicates negative: excluded
                dropped += 1
                continue
            kept += 1
            center = math.fsum(values) / len(values)
            devs.extend(abs(v - center) for v in values)
        within = sum(1 for d in devs if d < 0.01)
        records.append({
            "model": name, "reps": reps, "samples": samples,
            "comparisons_kept": kept, "comparisons_dropped": dropped,
            "computations": len(devs),
            "frac_within_0.01": (within / len(devs)) if devs else None,
            "max_abs_error": max(devs) if devs else None,
        })
    fields = ["model", "reps", "samples", "comparisons_kept",
              "comparisons_dropped", "computations", "frac_within_0.01",
              "max_abs_error"]
    _emit(records, fields, args)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not hasattr(args, "func"):
            raise UsageError("a subcommand is required (see --help)")
        args.func(args)
        return 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FuzzyRandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
