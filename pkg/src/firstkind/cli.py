"""Command-line front end: decode, generate, verify, bench."""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .core import EPS_VAL, ExtendedCoordinates, ObtuseSuperbasis, quad_norm
from .decoder import closest_point, phi, step
from .errors import DimensionMismatch, LatticeError
from .generator import random_first_kind
from .lattice_io import load_lattice, save_lattice
from .mincut import BinaryQuadraticForm, minimize_form
from .oracle import MAX_BOX_DIM, MAX_ENUM_DIM, brute_binary_min, brute_closest


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="firstkind",
        description="Closest-point decoding for lattices of Voronoi's first kind.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decode", help="decode targets against a lattice file")
    p.add_argument("lattice", help="lattice JSON file")
    p.add_argument("--targets", help="file with one whitespace-separated target per line")
    p.add_argument("--target", action="append", default=[], metavar="ROW",
                   help="inline target row, e.g. '4 3.5' (repeatable)")
    p.add_argument("--gram", action="store_true",
                   help="targets are extended coordinates of length n+1")
    p.add_argument("--trace", action="store_true", help="include per-iteration distances")
    p.add_argument("--tolerance", type=float, default=None,
                   help="override validation and termination tolerance")
    p.add_argument("-o", "--out", help="write records here instead of stdout")

    p = sub.add_parser("generate", help="generate a random first-kind lattice file")
    p.add_argument("-n", type=int, required=True, help="lattice dimension")
    p.add_argument("--density", type=float, default=1.0, help="edge density in (0,1]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", required=True, help="output lattice file")

    p = sub.add_parser("verify", help="run decoder-vs-oracle verification suites")
    p.add_argument("lattice", nargs="?", help="lattice JSON file")
    p.add_argument("--random", type=int, default=None, metavar="N",
                   help="verify a random lattice of this dimension instead")
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("bench", help="benchmark decode scaling over dimensions")
    p.add_argument("--sizes", default="16,32,64,128,256",
                   help="comma-separated dimensions")
    p.add_argument("--trials", type=int, default=5, help="targets per dimension")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", help="write the CSV table here")
    return parser


def _parse_rows(args):
    rows = []
    if args.targets:
        with open(args.targets, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    rows.append(line)
    rows.extend(args.target)
    return [[float(tok) for tok in row.split()] for row in rows]


def _record(result, want_trace):
    rec = {
        "coefficients": [int(x) for x in result.coefficients],
        "point": None if result.point is None else [float(x) for x in result.point],
        "squared_distance": float(result.squared_distance),
        "iterations": int(result.iterations),
        "residual_sq": float(result.residual_sq),
    }
    if want_trace:
        rec["trace"] = [[int(k), float(d)] for k, d in result.trace]
    return rec


def _cmd_decode(args):
    tol = args.tolerance if args.tolerance is not None else EPS_VAL
    lattice = load_lattice(args.lattice, tol)
    rows = _parse_rows(args)
    gram = args.gram or not isinstance(lattice, ObtuseSuperbasis)
    n = lattice.n
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for row in rows:
            target = np.asarray(row, dtype=float)
            if gram:
                if target.size != n + 1:
                    raise DimensionMismatch(
                        f"target row has {target.size} entries, expected {n + 1}"
                    )
                target = ExtendedCoordinates(z=target)
            elif target.size != lattice.m:
                raise DimensionMismatch(
                    f"target row has {target.size} entries, expected {lattice.m}"
                )
            result = closest_point(lattice, target, term_rtol=tol)
            out.write(json.dumps(_record(result, args.trace)) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_generate(args):
    lattice = random_first_kind(args.n, args.density, args.seed)
    save_lattice(args.out, lattice, name=f"random-n{args.n}-seed{args.seed}")
    return 0


def _identity_checks(q, gen, trials):
    """Increment/decrement identities between quad_norm differences and phi."""
    k = q.n + 1
    ok = 0
    for _ in range(trials):
        p = gen.uniform(-3.0, 3.0, k)
        s_set = frozenset(int(i) for i in np.flatnonzero(gen.random(k) < 0.5))
        t_set = frozenset(int(i) for i in np.flatnonzero(gen.random(k) < 0.5))
        comp_t = frozenset(range(k)) - t_set
        a = np.zeros(k)
        a[list(s_set)] = 1.0
        b = np.zeros(k)
        b[list(t_set)] = 1.0
        lhs1 = quad_norm(q, p) - quad_norm(q, p + a)
        lhs2 = quad_norm(q, p) - quad_norm(q, p - a)
        lhs3 = quad_norm(q, p) - quad_norm(q, p + a - b)
        cross = float(a @ q.q @ b)
        good = (
            _close(lhs1, phi(q, s_set, p))
            and _close(lhs2, phi(q, frozenset(range(k)) - s_set, p))
            and _close(lhs3, phi(q, s_set, p) + phi(q, comp_t, p) + 2.0 * cross)
        )
        ok += bool(good)
    return ok


def _close(a, b):
    return abs(a - b) <= 1e-12 + 1e-9 * max(abs(a), abs(b), 1.0)


def _cmd_verify(args):
    if args.random is not None:
        lattice = random_first_kind(args.random, args.density, args.seed)
    elif args.lattice:
        lattice = load_lattice(args.lattice)
    else:
        print("verify: need a lattice file or --random N", file=sys.stderr)
        return 2
    if args.trials < 1:
        print("verify: --trials must be positive", file=sys.stderr)
        return 2
    q = lattice.selling if isinstance(lattice, ObtuseSuperbasis) else lattice
    n = q.n
    gen = np.random.Generator(np.random.PCG64(args.seed + 1))
    failures = 0

    if n <= 10:
        ok = 0
        for _ in range(args.trials):
            p = gen.uniform(-2.0, 2.0, n + 1)
            form = BinaryQuadraticForm(-2.0 * (q.q @ p), q)
            _, got = minimize_form(form)
            _, want = brute_binary_min(form)
            ok += _close(got, want)
        print(f"step_vs_brute: {ok}/{args.trials} ok")
        failures += args.trials - ok
    else:
        print(f"step_vs_brute: skipped (n > {MAX_ENUM_DIM // 2})")

    if n <= MAX_BOX_DIM:
        ok = 0
        for _ in range(args.trials):
            z = ExtendedCoordinates(z=gen.uniform(-4.0, 4.0, n + 1))
            res = closest_point(q, z)
            _, want = brute_closest(q, z)
            ok += _close(res.squared_distance, want)
        print(f"decode_vs_brute: {ok}/{args.trials} ok")
        failures += args.trials - ok
    else:
        print(f"decode_vs_brute: skipped (n > {MAX_BOX_DIM})")

    ok = _identity_checks(q, gen, args.trials)
    print(f"norm_identities: {ok}/{args.trials} ok")
    failures += args.trials - ok

    ok = 0
    for _ in range(args.trials):
        z = ExtendedCoordinates(z=gen.uniform(-4.0, 4.0, n + 1))
        res = closest_point(q, z)
        descent = all(b[1] < a[1] for a, b in zip(res.trace, res.trace[1:]))
        _, gain = step(q, z.z - np.asarray(res.coefficients, dtype=float))
        settled = gain <= 1e-9 * max(1.0, res.trace[0][1])
        ok += res.iterations <= n and descent and settled
    print(f"decode_properties: {ok}/{args.trials} ok")
    failures += args.trials - ok

    if failures:
        print(f"FAILED: {failures} check(s)", file=sys.stderr)
        return 1
    print("all checks passed")
    return 0


def _cmd_bench(args):
    try:
        sizes = [int(tok) for tok in args.sizes.split(",") if tok.strip()]
    except ValueError:
        print("bench: --sizes must be comma-separated integers", file=sys.stderr)
        return 2
    if not sizes or min(sizes) < 1 or args.trials < 1:
        print("bench: need sizes >= 1 and --trials >= 1", file=sys.stderr)
        return 2

    # Warm up the JIT-compiled cut kernel outside the timed region.
    warm = random_first_kind(2, 1.0, 0)
    closest_point(warm, np.zeros(2))

    lines = ["n,trials,median_seconds,mean_iterations,max_iterations"]
    medians = []
    for n in sizes:
        lattice = random_first_kind(n, 1.0, args.seed)
        q = lattice.selling
        gen = np.random.Generator(np.random.PCG64(args.seed + n))
        times = []
        iters = []
        for _ in range(args.trials):
            z = ExtendedCoordinates(z=gen.uniform(-4.0, 4.0, n + 1))
            t0 = time.perf_counter()
            res = closest_point(q, z)
            times.append(time.perf_counter() - t0)
            iters.append(res.iterations)
        med = float(np.median(times))
        medians.append(med)
        lines.append(
            f"{n},{args.trials},{med:.9f},{np.mean(iters):.6f},{max(iters)}"
        )
    table = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(table)
    else:
        sys.stdout.write(table)
    if len(sizes) >= 2:
        slope = float(np.polyfit(np.log(sizes), np.log(medians), 1)[0])
        print(f"loglog_slope {slope:.4f}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "decode": _cmd_decode,
        "generate": _cmd_generate,
        "verify": _cmd_verify,
        "bench": _cmd_bench,
    }
    try:
        return handlers[args.command](args)
    except DimensionMismatch as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (LatticeError, OSError, json.JSONDecodeError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
