"""Command-line front end.

Subcommands: region (sample the rate region and export its hull), check
(run the per-distribution vertex equivalence check), awgn (sweep the
Gaussian closed forms), simulate (Monte Carlo error estimation).  Every
command is deterministic given its full flag set including the seed.

Exit codes: 0 success, 1 internal failure or failed check, 2 input
validation, 3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import awgn as awgn_mod
from . import regions as regions_mod
from . import simulator as sim_mod
from .channel import load_channel, mi_vector, random_aux
from .polytope import write_vertices_csv
from .regions import RateTriple

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _dump_json(obj, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _apply_config(args: argparse.Namespace) -> argparse.Namespace:
    """Optional JSON config supplies defaults; explicit flags win."""
    if not getattr(args, "config", None):
        return args
    with open(args.config) as f:
        cfg = json.load(f)
    for key, val in cfg.items():
        if not hasattr(args, key):
            raise ValueError(f"unknown config key {key!r}")
        if getattr(args, key) is None:
            setattr(args, key, val)
    return args


def cmd_region(args) -> int:
    if args.samples is None or args.samples < 1:
        raise ValueError("samples must be >= 1")
    ch = load_channel(args.channel)
    cards = tuple(args.cards) if args.cards else None
    approx = regions_mod.sample_region(
        ch, args.c1, args.samples, cards=cards, seed=args.seed
    )
    write_vertices_csv(approx.hull, args.out)
    report_path = args.report or str(Path(args.out).with_suffix(".report.json"))
    _dump_json(regions_mod.region_report(approx, seed=args.seed), report_path)
    return EXIT_OK


def cmd_check(args) -> int:
    if args.samples is None or args.samples < 1:
        raise ValueError("samples must be >= 1")
    ch = load_channel(args.channel)
    cards = tuple(args.cards) if args.cards else (ch.x_size + 1, ch.x_size + 1)
    rng = np.random.default_rng(args.seed)
    failures = 0
    for i in range(args.samples):
        aux = random_aux(rng, cards[0], cards[1], ch.x_size)
        report = regions_mod.check_equivalence(mi_vector(aux, ch), args.c1)
        if not report.passed:
            failures += 1
            print(
                f"sample {i}: equivalence check failed at vertex "
                f"{report.failing_vertex}"
            )
    print(f"checked {args.samples} distributions, {failures} failure(s)")
    return EXIT_OK if failures == 0 else EXIT_INTERNAL


def cmd_awgn(args) -> int:
    params = awgn_mod.AwgnParams(args.power, args.n1, args.n2, args.c1)
    if args.grid is None or args.grid < 2:
        raise ValueError("grid must be >= 2")
    region = awgn_mod.awgn_region(params, args.grid)
    awgn_mod.write_boundary_csv(region, args.out)
    if args.hull_out:
        write_vertices_csv(region.hull, args.hull_out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    ch = load_channel(args.channel)
    if args.cards:
        cards = tuple(args.cards)
    else:
        cards = (2, 2)
    rng = np.random.default_rng(args.aux_seed)
    aux = random_aux(rng, cards[0], cards[1], ch.x_size)
    rates = RateTriple(*args.rates)
    params = sim_mod.CodeParams(
        n=args.n,
        rates=rates,
        c1=args.c1,
        aux=aux,
        ch=ch,
        eps=args.eps,
        seed=args.seed,
    )
    stats = sim_mod.estimate_errors(
        params, args.trials, threads=args.threads or 1
    )
    _dump_json(sim_mod.stats_report(params, stats), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bcconf",
        description="Rate regions and coding simulations for the "
        "conference-aided broadcast channel",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file; flags override")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("region", help="sample the rate region, export hull CSV")
    common(p)
    p.add_argument("--channel", required=True, help="channel spec JSON")
    p.add_argument("--c1", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--cards", type=int, nargs=2, metavar=("U", "V"))
    p.add_argument("--out", required=True, help="hull CSV path")
    p.add_argument("--report", help="report JSON path (default: out stem)")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("check", help="vertex-level equivalence check")
    common(p)
    p.add_argument("--channel", required=True)
    p.add_argument("--c1", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--cards", type=int, nargs=2, metavar=("U", "V"))
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("awgn", help="Gaussian region sweep, boundary CSV")
    common(p)
    p.add_argument("--power", type=float, required=True)
    p.add_argument("--n1", type=float, required=True)
    p.add_argument("--n2", type=float, required=True)
    p.add_argument("--c1", type=float, default=0.0)
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--out", required=True, help="boundary CSV path")
    p.add_argument("--hull-out", help="optional hull CSV path")
    p.set_defaults(func=cmd_awgn)

    p = sub.add_parser("simulate", help="Monte Carlo error estimation")
    common(p)
    p.add_argument("--channel", required=True)
    p.add_argument("--c1", type=float, default=0.0)
    p.add_argument(
        "--rates", type=float, nargs=3, metavar=("R0", "R0P", "R1"), required=True
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--cards", type=int, nargs=2, metavar=("U", "V"))
    p.add_argument("--aux-seed", type=int, default=0)
    p.add_argument("--out", required=True, help="report JSON path")
    p.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args = _apply_config(args)
        return args.func(args)
    except (ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except sim_mod.ResourceBudgetError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
