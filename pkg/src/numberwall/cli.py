"""Command line entry point.

Exit status: 0 when every verdict passes, 1 when a mismatch or violation is
found, 2 on usage errors.  Every JSON report carries the run configuration
that produced it, and identical configurations give byte-identical output.
"""
import argparse
import json
import sys

import numpy as np

from . import census as cz
from .errors import NumberWallError, OverlappingPortions
from .ffield import parse_field
from .littlewood import equivalence_audit, parse_growth, transfer, window_check
from .polylaurent import parse_poly
from .seqgen import SeqRecipe, literal, materialize, parse_seq_file, parse_values
from .wall import wall_frame, wall_naive

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(obj):
    return json.dumps(obj, sort_keys=True, default=str)


def _emit(out, obj):
    out.write(_dump(obj) + "\n")


def _config(args):
    """The reproducible part of the invocation."""
    skip = {"func", "config", "out", "jobs"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _field(args):
    if not args.field:
        raise UsageError("--field is required (e.g. 3^1 or 2^2)")
    try:
        return parse_field(args.field)
    except (ValueError, NumberWallError) as e:
        raise UsageError(f"bad --field {args.field!r}: {e}") from None


def _sequence(args, F):
    given = [x for x in ("seq", "seq_file", "pf", "random") if getattr(args, x, None) is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --seq, --seq-file, --pf, --random")
    if args.seq is not None:
        try:
            vals = parse_values(args.seq)
        except ValueError:
            raise UsageError(f"--seq must be comma-separated integers, got {args.seq!r}") from None
        if not vals:
            raise UsageError("--seq is empty")
        return literal(F, vals)
    if args.seq_file is not None:
        try:
            with open(args.seq_file) as fh:
                F2, vals = parse_seq_file(fh.read())
        except OSError as e:
            raise UsageError(f"cannot read {args.seq_file}: {e}") from None
        if not vals:
            raise UsageError(f"{args.seq_file} holds no values")
        return literal(F2 or F, vals)
    length = args.length
    if args.pf is not None:
        level, _, ln = str(args.pf).partition(":")
        try:
            level = int(level)
            length = int(ln) if ln else length
        except ValueError:
            raise UsageError(f"--pf takes LEVEL or LEVEL:LENGTH, got {args.pf!r}") from None
    if not length or length < 1:
        raise UsageError("a length (>= 1) is required with --pf/--random")
    if args.pf is not None:
        return materialize(SeqRecipe("paper_folding", length, F, level=level))
    return materialize(SeqRecipe("random", length, F, seed=args.random))


def _params(text):
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise UsageError(f"--params entries are key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = int(v)
        except ValueError:
            raise UsageError(f"--params value for {k} must be an integer") from None
    return out


def _need(params, *keys):
    missing = [k for k in keys if k not in params]
    if missing:
        raise UsageError(f"--params is missing {', '.join(missing)}")
    return [params[k] for k in keys]


def _write(path, data, binary=False):
    with open(path, "wb" if binary else "w") as fh:
        fh.write(data)


# --- subcommands -----------------------------------------------------------------------

def cmd_wall(args, out):
    F = _field(args)
    S = _sequence(args, F)
    W = wall_naive(S, F) if args.engine == "naive" else wall_frame(S, F)
    if args.csv:
        _write(args.csv, W.to_csv())
    if args.windows:
        _write(args.windows, W.windows_json() + "\n")
    if args.render:
        _write(args.render, W.to_ppm(), binary=True)
    _emit(out, {"config": _config(args), "r": W.r, "depth": W.depth,
                "windows": [w.to_json() for w in W.windows],
                "zeros": int(sum(1 for m, n in W.cells() if m >= 0 and W[m, n] == 0))})
    return EXIT_OK


def cmd_render(args, out):
    F = _field(args)
    S = _sequence(args, F)
    W = wall_frame(S, F)
    if not args.output:
        raise UsageError("render needs --output PATH")
    _write(args.output, W.to_ppm(), binary=True)
    _emit(out, {"config": _config(args), "r": W.r, "image": args.output})
    return EXIT_OK


def cmd_check_lc(args, out):
    F = _field(args)
    S = _sequence(args, F)
    f = parse_growth(args.growth)
    rep = window_check(S, args.l, f, addressing=args.addressing)
    rep = {"config": _config(args), **rep}
    status = EXIT_FAIL if rep["verdict"] != "pass" else EXIT_OK
    depth = args.audit_depth or (args.deg or 4 if args.audit else None)
    if depth:
        a = equivalence_audit(S, args.l, f, D=depth)
        rep["audit"] = a
        if a["verdict"] != "match":
            status = EXIT_FAIL
    _emit(out, rep)
    return status


def cmd_transfer(args, out):
    F = _field(args)
    S = _sequence(args, F)
    try:
        p = parse_poly(F, args.p)
    except ValueError as e:
        raise UsageError(f"bad --p: {e}") from None
    rep = transfer(list(S.values), p, args.D, args.K, args.prec, parse_growth(args.growth))
    _emit(out, {"config": _config(args), **rep})
    return EXIT_FAIL if rep["verdict"] == "mismatch" else EXIT_OK


def _census_reports(args):
    F = _field(args)
    P = _params(args.params)
    exp = args.experiment
    jobs = args.jobs
    if exp == "contain-full":
        (r,) = _need(P, "r")
        portions = None
        if "l" in P:
            l, n, m = _need(P, "l", "n", "m")
            portions = [cz.SquarePortion(l, n, m)]
        return cz.contain_full(F, r, portions, jobs)
    if exp == "rect":
        (r,) = _need(P, "r")
        cases = [tuple(_need(P, "l", "d", "n", "m"))] if "l" in P else None
        return cz.rect_census(F, r, cases, jobs)
    if exp == "q-table":
        return cz.q_table(F, P.get("mmax", 3), P.get("seeds", 20))
    if exp == "tree-diagrams":
        return cz.tree_diagrams(F, P.get("seeds", 20))
    if exp == "two-window":
        (r,) = _need(P, "r")
        C = P.get("C", 2)
        if "l1" in P:
            l1, n1, m1, l2, n2, m2 = _need(P, "l1", "n1", "m1", "l2", "n2", "m2")
            pair = (cz.SquarePortion(l1, n1, m1), cz.SquarePortion(l2, n2, m2))
            try:
                return cz.two_window_census(F, r, [pair], C, jobs)
            except OverlappingPortions:
                return [cz.overlap_redirect(F, r, *pair, jobs)]
        rng = np.random.Generator(np.random.PCG64(P.get("seed", 0)))
        pairs = cz.random_pairs(r, P.get("pairs", 20), rng)
        return cz.two_window_census(F, r, pairs, C, jobs)
    if exp == "window-continue":
        k, i, m, l = _need(P, "k", "i", "m", "l")
        return [cz.window_continue(F, k, i, m, l)]
    raise UsageError(f"unknown experiment {exp!r}")


def cmd_census(args, out):
    reps = _census_reports(args)
    cfg = _config(args)
    bad = False
    for rep in reps:
        d = rep.to_json()
        d["config"] = cfg
        _emit(out, d)
        bad |= rep.verdict == "mismatch"
    return EXIT_FAIL if bad else EXIT_OK


def cmd_search(args, out):
    F = _field(args)
    if args.target_window < 1 or args.max_len < 1:
        raise UsageError("--target-window and --max-len must be positive")
    rep = cz.min_window_search(F, args.max_len, args.target_window)
    _emit(out, {"config": _config(args), **rep})
    return EXIT_OK


def selftest_checks():
    """Small-scale invariant suite; yields (name, ok, detail)."""
    from .ffield import field_make
    from .seqgen import random_seq
    F2, F3 = field_make(2), field_make(3)

    for q, F in ((2, F2), (3, F3)):
        bad = 0
        for seed in range(30):
            S = random_seq(F, 14, seed)
            bad += not wall_frame(S, F).same_entries(wall_naive(S, F))
        yield f"frame engine equals determinants (q={q})", bad == 0, f"{bad} differing walls"
    reps = cz.contain_full(F2, 7)
    yield "containment count q^(r-l), q=2 r=7", all(x.verdict == "match" for x in reps), f"{len(reps)} portions"
    reps = cz.rect_census(F3, 6)
    yield "rectangle counts, q=3 r=6", all(x.verdict == "match" for x in reps), f"{len(reps)} rectangles"
    reps = cz.q_table(F3, mmax=2, nseeds=5)
    yield "blade transition table, q=3 m<=2", all(x.verdict == "match" for x in reps), f"{len(reps)} entries"
    reps = cz.tree_diagrams(F3, nseeds=5)
    yield "two-step blade transitions, q=3", all(x.verdict == "match" for x in reps), f"{len(reps)} sources"
    S = random_seq(F3, 40, 1)
    a = equivalence_audit(S, 1, D=4)
    yield "windows vs Diophantine solutions, q=3 r=40", a["verdict"] == "match", f"{a['pairs']} pairs"
    t = transfer(list(random_seq(F3, 40, 2).values), parse_poly(F3, "t^2 + 1"), 2, 1, 24)
    yield "exponent scaling under t -> t^2+1", t["verdict"] == "match", f"{t['l_base']} -> {t['l_trans']}"


def cmd_selftest(args, out):
    ok = True
    for name, good, detail in selftest_checks():
        out.write(f"{'PASS' if good else 'FAIL'}  {name}  ({detail})\n")
        ok &= good
    return EXIT_OK if ok else EXIT_FAIL


# --- parser --------------------------------------------------------------------------

def _seq_args(p):
    p.add_argument("--field", help="field as p^k or p^k/modulus-code")
    p.add_argument("--seq", help="comma-separated element codes")
    p.add_argument("--seq-file", "--coeffs", dest="seq_file",
                   help="file of element codes; optional '# field: p^k' line")
    p.add_argument("--pf", help="paper-folding LEVEL or LEVEL:LENGTH")
    p.add_argument("--random", type=int, help="seed for a uniform random sequence")
    p.add_argument("--length", type=int, help="length for --pf/--random")


def build_parser():
    ap = argparse.ArgumentParser(prog="numberwall", description="Number walls over finite fields.")
    ap.add_argument("--config", help="JSON file of option defaults (a previous run's config block)")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for enumeration")
    sub = ap.add_subparsers(dest="command")

    p = sub.add_parser("wall", help="build a wall and export it")
    _seq_args(p)
    p.add_argument("--engine", choices=["frame", "naive"], default="frame")
    p.add_argument("--csv")
    p.add_argument("--windows", help="window list as JSON")
    p.add_argument("--render", help="PPM image path")
    p.set_defaults(func=cmd_wall)

    p = sub.add_parser("render", help="write the wall as a PPM image")
    _seq_args(p)
    p.add_argument("--output")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("check-lc", help="window-size test for a quality bound q^-l")
    _seq_args(p)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--growth", default="const:1", help="const:C, log2, loglog or table:v0,v1,...")
    p.add_argument("--addressing", choices=["column", "diagonal"], default="column")
    p.add_argument("--audit", action="store_true", help="also run the two-sided audit")
    p.add_argument("--deg", type=int, help="degree bound for --audit (default 4)")
    p.add_argument("--audit-depth", type=int, help="same as --audit --deg N")
    p.set_defaults(func=cmd_check_lc)

    p = sub.add_parser("transfer", help="truncated infimum before and after t -> p(t)")
    _seq_args(p)
    p.add_argument("--p", "--pt", dest="p", required=True, help='irreducible polynomial, e.g. "t^2 + 1"')
    p.add_argument("--D", "--deg", dest="D", type=int, default=3)
    p.add_argument("--K", "--pow", dest="K", type=int, default=1)
    p.add_argument("--prec", type=int, default=60)
    p.add_argument("--growth", default="const:1")
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("census", help="enumeration against closed-form counts")
    p.add_argument("--experiment", required=True,
                   choices=["contain-full", "rect", "q-table", "tree-diagrams", "two-window",
                            "window-continue"])
    p.add_argument("--field")
    p.add_argument("--params", default="", help="k=v,... integers")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("search", help="longest sequence with every window below a size")
    p.add_argument("--field")
    p.add_argument("--target-window", type=int, required=True)
    p.add_argument("--max-len", type=int, required=True)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("selftest", help="small invariant suite")
    p.set_defaults(func=cmd_selftest)
    return ap


def _parse(argv):
    """Parse argv; a --config file supplies flags that explicit ones override."""
    ap = build_parser()
    args, _ = ap.parse_known_args(argv)
    if not args.config:
        return ap.parse_args(argv)
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, ValueError) as e:
        raise UsageError(f"cannot load --config: {e}") from None
    cfg = dict(cfg.get("config", cfg))
    cmd = cfg.pop("command", None) or args.command
    if cmd is None:
        raise UsageError("the config names no subcommand")
    if args.command is not None:
        i = argv.index(args.command)
        pre, post = argv[:i], argv[i + 1:]
    else:
        pre, post = list(argv), []
    flags = []
    for k, v in cfg.items():
        flag = f"--{k.replace('_', '-')}"
        if isinstance(v, bool):
            flags += [flag] if v else []
        else:
            flags += [flag, str(v)]
    return ap.parse_args(pre + [cmd] + flags + post)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = _parse(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if not getattr(args, "func", None):
        build_parser().print_help(sys.stderr)
        return EXIT_USAGE
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        return args.func(args, out)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NumberWallError as e:
        print(f"error ({type(e).__name__}) in {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if args.out:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
