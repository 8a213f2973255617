"""Command-line front end: verification, bounds, pairings, periods,
embeddings and the naive-vs-series benchmark.

Values print as digit expansions with explicit O(p^N) tags; ``--out`` writes
a machine-readable mirror (JSON for single computations, CSV for benchmarks).
Exit codes: 0 ok, 1 input error, 2 verification failure, 3 budget refusal.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from pathlib import Path
from typing import List, Optional

from .bounds import compute_bounds
from .fast import (
    canonical_embedding,
    pair_truncation,
    period_matrix,
    theta_pair,
    worst_case_nu,
)
from .localfield import LocalFieldElement
from .naive import DEFAULT_WORD_BUDGET, BudgetExceededError, theta_naive_auto
from .projline import Divisor0
from .schottky import SchottkyGroup, divisor_from_json, load_group

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2
EXIT_BUDGET = 3

DEFAULT_PREC = 60
FINGERPRINT_DIGITS = 8


def _fingerprint(value: LocalFieldElement, m: int) -> str:
    """valuation:leading-digits, comparable across algorithms at matched m."""
    if value.is_zero():
        return "0"
    digits = min(m, FINGERPRINT_DIGITS)
    mantissa = value.unit % value.desc.p ** digits
    return f"{value.kexp}:{mantissa}"


def _load_divisor(text: str, group: SchottkyGroup) -> Divisor0:
    """A divisor argument: a JSON literal or the path of a JSON file."""
    if text.lstrip().startswith("["):
        data = json.loads(text)
    else:
        with open(text, encoding="utf-8") as fh:
            data = json.load(fh)
    return divisor_from_json(data, group.desc, group.nprec)


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _timed(fn):
    """(median wall time in ns over three runs, first result)."""
    result = None
    times = []
    for run in range(3):
        t0 = time.perf_counter_ns()
        out = fn()
        times.append(time.perf_counter_ns() - t0)
        if run == 0:
            result = out
    return int(statistics.median(times)), result


# -- subcommands --------------------------------------------------------------


def cmd_check(args) -> int:
    group = load_group(args.group, args.prec, verify=False)
    report = group.verify_good_position()
    print(report)
    print(f"good position: {'PASS' if report.ok else 'FAIL'}")
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_bounds(args) -> int:
    group = load_group(args.group, args.prec)
    # contraction data lives on the presentation with infinity interior, and
    # the worst-case truncation scans that presentation's anchors
    conj = group.conjugated_to_normalize_infinity()
    bounds = compute_bounds(conj)
    nu = worst_case_nu(conj, bounds, args.digits)
    print(f"n_gamma = {bounds.n_gamma}")
    print(f"v_rho = {bounds.rho_val}")
    print(f"v_C = {bounds.c_val}")
    print(f"nu(m={args.digits}) = {nu}")
    if args.out:
        _write_json(
            args.out,
            {
                "n_gamma": bounds.n_gamma,
                "v_rho": str(bounds.rho_val),
                "v_C": str(bounds.c_val),
                "m": args.digits,
                "nu": nu,
            },
        )
    return EXIT_OK


def cmd_theta(args) -> int:
    group = load_group(args.group, args.prec)
    D = _load_divisor(args.divisor_d, group)
    E = _load_divisor(args.divisor_e, group)
    if args.naive:
        algo = "naive"
        elapsed, got = _timed(
            lambda: theta_naive_auto(group, D, E, args.digits, budget=args.budget)
        )
        value, nu = got.value, got.nu
    else:
        algo = "fast"
        nu = pair_truncation(group, D, args.digits)
        elapsed, value = _timed(
            lambda: theta_pair(group, D, E, args.digits, parallel=args.parallel)
        )
    print(f"theta = {value}")
    print(f"algorithm = {algo}")
    print(f"nu = {nu}")
    print(f"time_ns = {elapsed}")
    if args.out:
        _write_json(
            args.out,
            {
                "value": str(value),
                "algorithm": algo,
                "m": args.digits,
                "nu": nu,
                "time_ns": elapsed,
                "fingerprint": _fingerprint(value, args.digits),
            },
        )
    return EXIT_OK


def cmd_periods(args) -> int:
    group = load_group(args.group, args.prec)
    elapsed, P = _timed(
        lambda: period_matrix(group, args.digits, parallel=args.parallel)
    )
    for i in range(P.genus):
        for j in range(P.genus):
            print(f"Q[{i + 1}][{j + 1}] = {P.entries[i][j]}")
    print(f"asymmetry_valuation = {P.asymmetry_valuation()}")
    print(f"time_ns = {elapsed}")
    if args.out:
        _write_json(
            args.out,
            {
                "genus": P.genus,
                "entries": [[str(q) for q in row] for row in P.entries],
                "asymmetry_valuation": str(P.asymmetry_valuation()),
                "m": args.digits,
                "time_ns": elapsed,
            },
        )
    return EXIT_OK


def cmd_embed(args) -> int:
    group = load_group(args.group, args.prec)
    z = group.desc.parse(args.point, group.nprec)
    elapsed, coords = _timed(lambda: canonical_embedding(group, z, args.digits))
    for i, x in enumerate(coords, start=1):
        print(f"x[{i}] = {x}")
    print(f"time_ns = {elapsed}")
    if args.out:
        _write_json(
            args.out,
            {
                "point": args.point,
                "coordinates": [str(x) for x in coords],
                "m": args.digits,
                "time_ns": elapsed,
            },
        )
    return EXIT_OK


def _bench_divisors(group: SchottkyGroup, seed: int):
    """Two disjoint two-point divisors on the domain closure, seed-determined."""
    import random

    rng = random.Random(seed)
    desc = group.desc
    candidates = []
    for n in range(1, 2000):
        z = desc.from_int(n, group.nprec)
        if group.ball_containing(z) is None:
            candidates.append(n)
        if len(candidates) >= 40:
            break
    if len(candidates) < 4:
        raise ValueError("could not find enough domain points for benchmark divisors")
    a, b, c, d = rng.sample(candidates, 4)
    mk = lambda x: desc.from_int(x, group.nprec)
    D = Divisor0([(mk(a), 1), (mk(b), -1)])
    E = Divisor0([(mk(c), 1), (mk(d), -1)])
    return D, E


def cmd_bench(args) -> int:
    import csv

    ms = list(range(args.m_start, args.m_end, args.m_step))
    prec = args.prec if args.prec is not None else (max(ms) if ms else 30) + 30
    group = load_group(args.group, prec)
    group_id = Path(args.group).stem
    if args.naive:
        algos = ["naive"]
    elif args.fast:
        algos = ["fast"]
    else:
        algos = ["naive", "fast"]
    D, E = _bench_divisors(group, args.seed)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["group", "algo", "m", "nu", "time_ns", "fingerprint"])
        for m in ms:
            for algo in algos:
                if algo == "naive":
                    try:
                        elapsed, got = _timed(
                            lambda: theta_naive_auto(group, D, E, m, budget=args.budget)
                        )
                    except BudgetExceededError:
                        continue
                    value, nu = got.value, got.nu
                else:
                    nu = pair_truncation(group, D, m)
                    elapsed, value = _timed(
                        lambda: theta_pair(group, D, E, m, parallel=args.parallel)
                    )
                writer.writerow([group_id, algo, m, nu, elapsed, _fingerprint(value, m)])
    return EXIT_OK


# -- argument wiring ----------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schottky-theta",
        description="Theta pairings of p-adic Schottky groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, prec_default: Optional[int] = DEFAULT_PREC):
        sp.add_argument("group", help="group JSON file")
        sp.add_argument(
            "--prec",
            type=int,
            default=prec_default,
            help="loaded precision in digits",
        )

    sp = sub.add_parser("check", help="verify the good-position conditions")
    common(sp)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("bounds", help="contraction data and truncation length")
    common(sp)
    sp.add_argument("-m", "--digits", type=int, default=10, help="target digits")
    sp.add_argument("--out", help="write a JSON mirror here")
    sp.set_defaults(fn=cmd_bounds)

    sp = sub.add_parser("theta", help="pairing (D, E) to m digits")
    common(sp)
    sp.add_argument("-D", "--divisor-d", required=True, help="JSON file or literal")
    sp.add_argument("-E", "--divisor-e", required=True, help="JSON file or literal")
    sp.add_argument("-m", "--digits", type=int, default=10)
    alg = sp.add_mutually_exclusive_group()
    alg.add_argument("--naive", action="store_true", help="word-product algorithm")
    alg.add_argument("--fast", action="store_true", help="series algorithm (default)")
    sp.add_argument("--budget", type=int, default=DEFAULT_WORD_BUDGET)
    sp.add_argument("--parallel", action="store_true")
    sp.add_argument("--out", help="write a JSON mirror here")
    sp.set_defaults(fn=cmd_theta)

    sp = sub.add_parser("periods", help="period matrix to m digits")
    common(sp)
    sp.add_argument("-m", "--digits", type=int, default=10)
    sp.add_argument("--parallel", action="store_true")
    sp.add_argument("--out", help="write a JSON mirror here")
    sp.set_defaults(fn=cmd_periods)

    sp = sub.add_parser("embed", help="canonical embedding coordinates at a point")
    common(sp)
    sp.add_argument("-z", "--point", required=True, help="rational literal")
    sp.add_argument("-m", "--digits", type=int, default=10)
    sp.add_argument("--out", help="write a JSON mirror here")
    sp.set_defaults(fn=cmd_embed)

    sp = sub.add_parser("bench", help="naive-vs-series timing CSV")
    common(sp, prec_default=None)
    sp.add_argument("--m-start", type=int, required=True)
    sp.add_argument("--m-end", type=int, required=True)
    sp.add_argument("--m-step", type=int, default=5)
    alg = sp.add_mutually_exclusive_group()
    alg.add_argument("--naive", action="store_true", help="naive rows only")
    alg.add_argument("--fast", action="store_true", help="series rows only")
    sp.add_argument("--seed", type=int, default=0, help="divisor choice seed")
    sp.add_argument("--budget", type=int, default=DEFAULT_WORD_BUDGET)
    sp.add_argument("--parallel", action="store_true")
    sp.add_argument("--out", required=True, help="CSV output path")
    sp.set_defaults(fn=cmd_bench)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, KeyError, OSError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
