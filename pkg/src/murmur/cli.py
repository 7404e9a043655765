"""Command line front end.

Exit codes: 0 success, 1 bad input or runtime failure, 2 usage or config
error, 3 a self-check (voronoi-check, local-factors --check-bruteforce)
missed its tolerance.

Every option can also come from an INI file given with --config: keys in the
section named after the subcommand (dashes or underscores, same spelling as
the long option) become defaults, and flags on the command line win.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import logging
import math
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

log = logging.getLogger("murmur")

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EXIT_CHECK = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- parsing helpers


def parse_P(text) -> float | int:
    if isinstance(text, (int, float)):
        return text
    t = str(text).strip().lower()
    if t in ("inf", "infinity", "oo"):
        return math.inf
    v = int(t)
    if v < 1:
        raise argparse.ArgumentTypeError(f"P must be >= 1 or inf, got {text}")
    return v


def parse_int(text) -> int:
    """Integers with optional 2^k or 10^k shorthand."""
    t = str(text).strip().replace(" ", "")
    if "^" in t:
        base, exp = t.split("^", 1)
        return int(base) ** int(exp)
    if "e" in t.lower() and t.lower().replace("e", "").isdigit():
        mant, exp = t.lower().split("e")
        return int(mant) * 10 ** int(exp)
    return int(t)


def parse_list(conv):
    def inner(text):
        if isinstance(text, list):
            return text
        return [conv(x) for x in str(text).replace(";", ",").split(",") if x.strip()]

    return inner


def parse_shard(text) -> tuple[int, int]:
    try:
        i, k = (int(x) for x in str(text).split("/"))
    except ValueError:
        raise argparse.ArgumentTypeError("shard must look like i/k") from None
    if not 0 <= i < k:
        raise argparse.ArgumentTypeError("shard i/k needs 0 <= i < k")
    return i, k


def _fmt_P(P) -> str:
    return "inf" if P == math.inf else str(P)


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline=""), True


def _write_csv(path, header, rows) -> None:
    fh, close = _open_out(path)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    finally:
        if close:
            fh.close()


def _write_json(path, obj) -> None:
    fh, close = _open_out(path)
    try:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
    finally:
        if close:
            fh.close()


def _read_vector_csv(path) -> tuple[list[float], list[float]]:
    us, vals = [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"j", "u_mid", "value"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: expected columns j,u_mid,value")
        for row in reader:
            us.append(float(row["u_mid"]))
            vals.append(float(row["value"]))
    return us, vals


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


# ---------------------------------------------------------------- subcommands


def cmd_enumerate(args) -> int:
    from .curves import count_curves, enumerate_curves, naive_height

    _need(args, "height_bound")
    X = args.height_bound
    if args.count_only:
        print(count_curves(X))
        return EXIT_OK
    rows = ((c.A, c.B, naive_height(c.A, c.B)) for c in enumerate_curves(X))
    _write_csv(args.out, ["A", "B", "H"], rows)
    return EXIT_OK


def _seed(args):
    from .curves import CurveSeed

    _need(args, "A", "B")
    return CurveSeed(args.A, args.B)


def cmd_ap(args) -> int:
    from . import frobenius as F

    seed = _seed(args)
    _need(args, "p")
    method = {"naive": F.ap_naive, "bsgs": F.ap_bsgs, "auto": F.ap}[args.method]
    print(method(seed, args.p))
    return EXIT_OK


def cmd_an(args) -> int:
    from .frobenius import CoefficientStreamSpec, an_stream
    from .reduction import global_invariants

    seed = _seed(args)
    _need(args, "nmax")
    spec = CoefficientStreamSpec(args.nmax, args.mode, args.P)
    rows = []
    an_stream(seed, global_invariants(seed), spec, lambda n, a: rows.append((n, a)))
    _write_csv(args.out, ["n", "a_n"], rows)
    return EXIT_OK


def cmd_reduce(args) -> int:
    from .curves import naive_height
    from .reduction import global_invariants

    seed = _seed(args)
    inv = global_invariants(seed)
    _write_json(args.out, {
        "A": seed.A,
        "B": seed.B,
        "H": naive_height(seed.A, seed.B),
        "N": inv.N,
        "eps": inv.eps,
        "locals": [
            {"p": loc.p, "kind": loc.kind, "exponent": loc.conductor_exponent,
             "kodaira": loc.kodaira, "w": loc.local_root_number}
            for loc in inv.locals
        ],
    })
    return EXIT_OK


def _compute_records(X, grid, P_list, shard=(0, 1), resume_from=None, checkpoint=None, every=200):
    from .curves import enumerate_curves
    from .lhs import CurveRecordFile, accumulate_sums, merge_records, write_records
    from .reduction import global_invariants

    i, k = shard
    done = set()
    previous = None
    if resume_from is not None:
        previous = resume_from
        done = set(zip(previous.A.tolist(), previous.B.tolist()))
    pending = []
    parts = [previous] if previous is not None and len(previous) else []
    t0 = time.time()
    todo = [c for idx, c in enumerate(enumerate_curves(X)) if idx % k == i and (c.A, c.B) not in done]
    log.info("shard %d/%d: %d curves to process (%d already done)", i, k, len(todo), len(done))

    def flush():
        if pending:
            parts.append(CurveRecordFile.from_rows(grid, P_list, X, pending))
            pending.clear()
        merged = merge_records(parts) if parts else CurveRecordFile(grid.u_max, grid.r, P_list, X)
        parts[:] = [merged] if len(merged) else []
        return merged

    for count, seed in enumerate(todo, 1):
        inv = global_invariants(seed)
        pending.append((seed, inv, accumulate_sums(seed, inv, grid, P_list)))
        if count % every == 0:
            merged = flush()
            if checkpoint is not None:
                write_records(checkpoint, merged)
            log.info("%d/%d curves, %.1f s", count, len(todo), time.time() - t0)
    return flush()


def cmd_sums(args) -> int:
    from .grid import WindowGrid
    from .lhs import read_records, write_records

    _need(args, "height_bound", "out")
    grid = WindowGrid(Fraction(args.umax), args.r)
    previous = None
    if args.resume and os.path.exists(args.out):
        previous = read_records(args.out, expect_grid=grid, expect_P_list=args.plist)
        if previous.X != args.height_bound:
            raise ValueError(f"{args.out} was built for X={previous.X}")
    rec = _compute_records(args.height_bound, grid, args.plist, args.shard, previous, args.out, args.checkpoint_every)
    write_records(args.out, rec)
    log.info("wrote %d records to %s", len(rec), args.out)
    return EXIT_OK


def cmd_merge(args) -> int:
    from .lhs import merge_records, read_records, write_records

    _need(args, "out")
    rec = merge_records([read_records(p) for p in args.inputs])
    write_records(args.out, rec)
    log.info("merged %d files into %d records", len(args.inputs), len(rec))
    return EXIT_OK


def _load_records(paths):
    from .lhs import merge_records, read_records

    return merge_records([read_records(p) for p in paths])


def cmd_lhs(args) -> int:
    from .lhs import lhs_aggregate

    _need(args, "records")
    rec = _load_records(args.records)
    X = args.X if args.X is not None else rec.X
    vals = lhs_aggregate(rec, args.P, X, args.prime_conductor, args.good_below_P)
    us = rec.grid.midpoints()
    _write_csv(args.out, ["j", "u_mid", "value"], ((j, repr(float(u)), repr(float(v))) for j, (u, v) in enumerate(zip(us, vals))))
    return EXIT_OK


def cmd_rhs(args) -> int:
    from .grid import WindowGrid
    from .rhs import rhs_vector

    _need(args, "B")
    grid = WindowGrid(Fraction(args.umax), args.r)
    dens = rhs_vector(grid, args.P, args.B, args.variant, window_exact=args.window_exact)
    _write_csv(args.out, ["j", "u_mid", "value"],
               ((j, repr(float(u)), repr(float(v))) for j, (u, v) in enumerate(zip(dens.midpoints, dens.values))))
    return EXIT_OK


def compare_vectors(lhs_vals, rhs_vals) -> dict:
    """Mean and max |LHS - RHS'| with RHS' the block average of RHS onto the LHS grid."""
    import numpy as np

    lv = np.asarray(lhs_vals, dtype=float)
    rv = np.asarray(rhs_vals, dtype=float)
    if len(lv) == 0 or len(rv) % len(lv):
        raise ValueError(f"RHS length {len(rv)} is not a multiple of LHS length {len(lv)}")
    factor = len(rv) // len(lv)
    coarse = rv.reshape(len(lv), factor).mean(axis=1)
    diff = np.abs(lv - coarse)
    return {"r_lhs": len(lv), "r_rhs": len(rv), "factor": factor,
            "mean_abs_diff": float(diff.mean()), "max_abs_diff": float(diff.max()),
            "rhs_coarse": coarse}


def _write_compare(path, us, lv, summary) -> None:
    coarse = summary["rhs_coarse"]
    _write_csv(path, ["j", "u_mid", "lhs", "rhs_coarse", "diff"],
               ((j, repr(float(u)), repr(float(a)), repr(float(b)), repr(float(abs(a - b))))
                for j, (u, a, b) in enumerate(zip(us, lv, coarse))))


def _summary(d: dict) -> dict:
    return {k: v for k, v in d.items() if k != "rhs_coarse"}


def cmd_compare(args) -> int:
    from .lhs import lhs_aggregate

    _need(args, "rhs")
    if (args.lhs is None) == (args.records is None):
        raise UsageError("give exactly one of --lhs or --records")
    if args.lhs is not None:
        us, lv = _read_vector_csv(args.lhs)
    else:
        rec = _load_records(args.records)
        X = args.X if args.X is not None else rec.X
        lv = lhs_aggregate(rec, args.P, X, args.prime_conductor, args.good_below_P)
        us = rec.grid.midpoints()
    _, rv = _read_vector_csv(args.rhs)
    res = compare_vectors(lv, rv)
    if args.per_j:
        _write_compare(args.per_j, us, lv, res)
    _write_json(args.out, _summary(res))
    return EXIT_OK


def cmd_tables(args) -> int:
    from .rhs import convergence_in_B, convergence_in_P, interpolation_residual

    rows = []
    if args.which == 1:
        header = ["B", "P", "value"]
        for B in args.B:
            for P in args.plist:
                rows.append((B, _fmt_P(P), f"{convergence_in_B(P, B, args.r, args.variant):.4f}"))
    elif args.which == 2:
        header = ["r", "P", "value"]
        for r in args.rlist or [args.r]:
            for P in args.plist:
                rows.append((r, _fmt_P(P), f"{interpolation_residual(r, P, args.B[-1], args.variant):.4f}"))
    else:
        header = ["B", "P", "value"]
        for B in args.B:
            for P in args.plist:
                rows.append((B, _fmt_P(P), f"{convergence_in_P(P, B, args.r, args.variant):.4f}"))
    _write_csv(args.out, header, rows)
    return EXIT_OK


def cmd_local_factors(args) -> int:
    from .localfactors import FLAVORS
    from .localfactors import bruteforce as bf

    _need(args, "p", "nu")
    val = FLAVORS[args.flavor](args.p, args.nu)
    out = {"p": args.p, "nu": args.nu, "flavor": args.flavor,
           "value": f"{val.numerator}/{val.denominator}", "float": float(val)}
    code = EXIT_OK
    if args.check_bruteforce:
        oracle = {"plain": bf.ell_bruteforce, "hat": bf.ell_hat_bruteforce, "tilde": bf.ell_tilde_bruteforce}[args.flavor]
        ref = oracle(args.p, args.nu)
        out["bruteforce"] = f"{ref.numerator}/{ref.denominator}"
        out["match"] = ref == val
        code = EXIT_OK if ref == val else EXIT_CHECK
    _write_json(args.out, out)
    return code


def cmd_voronoi_check(args) -> int:
    from .rhs.voronoi import BumpWindow, voronoi_check

    seed = _seed(args)
    res = voronoi_check(seed, args.q, args.a, BumpWindow(args.ua, args.ub), args.n_lhs, args.n_rhs)
    ok = res.diff < args.tol
    _write_json(args.out, {"A": seed.A, "B": seed.B, "q": args.q, "a": args.a,
                           "lhs": res.lhs, "rhs": res.rhs, "diff": res.diff, "tol": args.tol, "pass": ok})
    return EXIT_OK if ok else EXIT_CHECK


def cmd_run(args) -> int:
    """sums -> lhs -> rhs -> compare for every P, files under --out-dir."""
    from .grid import WindowGrid
    from .lhs import lhs_aggregate, read_records, write_records
    from .rhs import rhs_vector

    _need(args, "height_bound", "B", "out_dir")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = WindowGrid(Fraction(args.umax), args.r)
    if args.r_rhs % args.r:
        raise ValueError("r-rhs must be a multiple of r")
    rec_path = out / "records.npz"
    previous = read_records(rec_path, grid, args.plist) if rec_path.exists() else None
    if previous is not None and previous.X != args.height_bound:
        raise ValueError(f"{rec_path} was built for X={previous.X}")
    rec = _compute_records(args.height_bound, grid, args.plist, (0, 1), previous, rec_path, args.checkpoint_every)
    write_records(rec_path, rec)
    summary = {"X": args.height_bound, "curves": len(rec), "B": args.B, "r": args.r, "r_rhs": args.r_rhs,
               "variant": args.variant, "window_exact": args.window_exact, "P": {}}
    rgrid = WindowGrid(Fraction(args.umax), args.r_rhs)
    for P in rec.P_list:
        tag = _fmt_P(P)
        lv = lhs_aggregate(rec, P, args.height_bound, args.prime_conductor)
        rv = rhs_vector(rgrid, P, args.B, args.variant, window_exact=args.window_exact).values
        _write_csv(out / f"lhs_P{tag}.csv", ["j", "u_mid", "value"],
                   ((j, repr(float(u)), repr(float(v))) for j, (u, v) in enumerate(zip(grid.midpoints(), lv))))
        _write_csv(out / f"rhs_P{tag}.csv", ["j", "u_mid", "value"],
                   ((j, repr(float(u)), repr(float(v))) for j, (u, v) in enumerate(zip(rgrid.midpoints(), rv))))
        res = compare_vectors(lv, rv)
        _write_compare(out / f"compare_P{tag}.csv", grid.midpoints(), lv, res)
        summary["P"][tag] = _summary(res)
        log.info("P=%s mean |LHS-RHS'| = %.4f", tag, summary["P"][tag]["mean_abs_diff"])
    _write_json(out / "summary.json", summary)
    _write_json(None, summary)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="murmur", description=__doc__.splitlines()[0], allow_abbrev=False)
    top.add_argument("--config", help="INI file with per-subcommand defaults")
    top.add_argument("--threads", type=int, default=None, help="numba worker threads (env MURMUR_THREADS)")
    top.add_argument("-v", "--verbose", action="store_true")
    sub = top.add_subparsers(dest="command", required=True)

    def curve(p):
        p.add_argument("--A", type=int)
        p.add_argument("--B", type=int)

    def out(p):
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("enumerate", allow_abbrev=False, help="list or count curves with H <= X")
    p.add_argument("--height-bound", "-X", type=parse_int)
    p.add_argument("--count-only", action="store_true")
    out(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("ap", allow_abbrev=False, help="trace of Frobenius a_p")
    curve(p)
    p.add_argument("--p", type=int)
    p.add_argument("--method", choices=["naive", "bsgs", "auto"], default="auto")
    p.set_defaults(func=cmd_ap)

    p = sub.add_parser("an", allow_abbrev=False, help="coefficients a_n as CSV")
    curve(p)
    p.add_argument("--nmax", type=parse_int)
    p.add_argument("--mode", choices=["all", "coprime", "prime"], default="all")
    p.add_argument("--P", type=int, default=1, help="cutoff for --mode coprime")
    out(p)
    p.set_defaults(func=cmd_an)

    p = sub.add_parser("reduce", allow_abbrev=False, help="conductor, root number and local data as JSON")
    curve(p)
    out(p)
    p.set_defaults(func=cmd_reduce)

    def sums_opts(p):
        p.add_argument("--height-bound", "-X", type=parse_int)
        p.add_argument("--umax", default="1")
        p.add_argument("--r", type=int, default=2000)
        p.add_argument("--plist", type=parse_list(parse_P), default="1,2,4,8,16,32,64,128,inf")
        p.add_argument("--checkpoint-every", type=int, default=200)

    p = sub.add_parser("sums", allow_abbrev=False, help="per-curve windowed sums into a record file")
    sums_opts(p)
    p.add_argument("--out")
    p.add_argument("--shard", type=parse_shard, default=(0, 1), help="i/k: process curves with index = i mod k")
    p.add_argument("--resume", action="store_true", help="skip curves already present in --out")
    p.set_defaults(func=cmd_sums)

    p = sub.add_parser("merge", allow_abbrev=False, help="merge record files from disjoint shards")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--out")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("lhs", allow_abbrev=False, help="LHS(j, P, X) from record files")
    p.add_argument("--records", nargs="+")
    p.add_argument("--P", type=parse_P, default=1)
    p.add_argument("--X", type=parse_int, default=None, help="height bound (default: the records' bound)")
    p.add_argument("--prime-conductor", action="store_true")
    p.add_argument("--good-below-P", action="store_true", help="average over curves with good reduction at p <= P")
    out(p)
    p.set_defaults(func=cmd_lhs)

    def rhs_opts(p):
        p.add_argument("--B", type=parse_int)
        p.add_argument("--variant", choices=["hat", "tilde"], default="hat")
        p.add_argument("--window-exact", action="store_true", help="average over each window instead of the midpoint")

    p = sub.add_parser("rhs", allow_abbrev=False, help="RHS(j, P, B) at the window midpoints")
    p.add_argument("--umax", default="1")
    p.add_argument("--r", type=int, default=100)
    p.add_argument("--P", type=parse_P, default=math.inf)
    rhs_opts(p)
    out(p)
    p.set_defaults(func=cmd_rhs)

    p = sub.add_parser("compare", allow_abbrev=False, help="mean |LHS - RHS'| against a j,u_mid,value RHS file")
    p.add_argument("--lhs", help="LHS vector file (alternative to --records)")
    p.add_argument("--records", nargs="+")
    p.add_argument("--P", type=parse_P, default=1)
    p.add_argument("--X", type=parse_int, default=None)
    p.add_argument("--prime-conductor", action="store_true")
    p.add_argument("--good-below-P", action="store_true")
    p.add_argument("--rhs")
    p.add_argument("--per-j", help="also write j,u_mid,lhs,rhs_coarse,diff rows here")
    out(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("tables", allow_abbrev=False, help="convergence tables (1: in B, 2: interpolation in r, 3: in P)")
    p.add_argument("--which", type=int, choices=[1, 2, 3], default=1)
    p.add_argument("--B", type=parse_list(parse_int), default="1024,2048,4096")
    p.add_argument("--r", type=int, default=100)
    p.add_argument("--rlist", type=parse_list(parse_int), default=None)
    p.add_argument("--plist", type=parse_list(parse_P), default="2,4,1024")
    p.add_argument("--variant", choices=["hat", "tilde"], default="hat")
    out(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("local-factors", allow_abbrev=False, help="exact local factor l_{p,nu}")
    p.add_argument("--p", type=int)
    p.add_argument("--nu", type=int)
    p.add_argument("--flavor", choices=["plain", "hat", "tilde"], default="plain")
    p.add_argument("--check-bruteforce", action="store_true")
    out(p)
    p.set_defaults(func=cmd_local_factors)

    p = sub.add_parser("voronoi-check", allow_abbrev=False, help="both sides of the twisted Voronoi identity")
    curve(p)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--ua", type=float, default=0.1, help="bump support start")
    p.add_argument("--ub", type=float, default=1.0, help="bump support end")
    p.add_argument("--n-lhs", type=int, default=None)
    p.add_argument("--n-rhs", type=int, default=None)
    out(p)
    p.set_defaults(func=cmd_voronoi_check)

    p = sub.add_parser("run", allow_abbrev=False, help="full pipeline from a config")
    sums_opts(p)
    rhs_opts(p)
    p.add_argument("--r-rhs", type=int, default=2000)
    p.add_argument("--prime-conductor", action="store_true")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_run)
    return top


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = configparser.ConfigParser()
    cfg.optionxform = str  # keep B and P distinct from b and p
    if not cfg.read(known.config):
        raise UsageError(f"cannot read config {known.config}")
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for name, sp in subparsers.choices.items():
        if not cfg.has_section(name):
            continue
        dests = {a.dest: a for a in sp._actions}
        defaults = {}
        for key, value in cfg.items(name):
            dest = key.replace("-", "_")
            action = dests.get(dest)
            if action is None:
                raise UsageError(f"unknown key {key!r} in section [{name}] of {known.config}")
            if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
                defaults[dest] = cfg.getboolean(name, key)
            elif action.nargs in ("+", "*"):
                conv = action.type or str
                defaults[dest] = [conv(x) for x in value.replace(",", " ").split()]
            elif action.type is not None:
                defaults[dest] = action.type(value)
            else:
                defaults[dest] = value
        sp.set_defaults(**defaults)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (UsageError, argparse.ArgumentTypeError, ValueError) as exc:
        print(f"murmur: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(message)s", stream=sys.stderr)
    threads = args.threads or (int(os.environ["MURMUR_THREADS"]) if os.environ.get("MURMUR_THREADS") else None)
    if threads:
        import numba

        numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"murmur {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError, OSError, KeyError) as exc:
        print(f"murmur {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
