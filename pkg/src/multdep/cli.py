"""multdep command line."""

from __future__ import annotations

import argparse
import os
import sys
import time

from .arith import ArithmeticInputError, format_rational, parse_rational
from .dependence import (
    DEFAULT_MAX_CANDIDATES,
    CertificationError,
    SearchSpaceError,
    bounded_field_dependence,
    generates_power_linear_fractional,
    mult_indep_mod_constants,
    rational_dependence,
)
from .dynamics import (
    PreconditionError,
    SearchReport,
    check_archimedean_growth,
    consecutive_dependence_search,
    grid_size,
    hypothesis_report,
    is_preperiodic,
    orbit,
    places_S_f,
    preperiodic_points,
    scan_fixed_alpha,
    search_dependent_pairs,
    valuation_escape_check,
)
from .numberfield import FieldMismatchError, ReducibleModulusError, parse_element, parse_elements, parse_field
from .poly import CompositionError, ParseError, SizeLimitError, parse_poly, parse_rational_function
from .regression import run_all
from .report import canonical_json, emit_report, load_checkpoint, params_hash, save_checkpoint
from .roots import DEFAULT_PRECISION, PrecisionError
from .special import is_special

EXIT_OK, EXIT_INPUT, EXIT_PARTIAL = 0, 1, 2
SHARD_SIZE = 256

INPUT_ERRORS = (
    ArithmeticInputError,
    ParseError,
    PreconditionError,
    FieldMismatchError,
    ReducibleModulusError,
    CompositionError,
    ValueError,
    ZeroDivisionError,
)


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--out", help="report file (default: stdout)")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl", help="search report format")
    p.add_argument("--workers", type=int, default=1, help="worker processes for grid searches")
    p.add_argument("--checkpoint", help="checkpoint file for resumable grid searches")
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="starting interval precision (bits)")
    p.add_argument("--max-candidates", type=int, default=DEFAULT_MAX_CANDIDATES, help="cap on bounded search candidates")
    p.add_argument("--budget", type=int, help="scan at most this many grid points in this run")
    p.add_argument("--dry-run", action="store_true", help="validate inputs and print hypothesis flags only")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="multdep", description="Multiplicative dependence in polynomial orbits.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    p = add("rel", "dependence of nonzero rationals")
    p.add_argument("--values", required=True, help="comma-separated rationals, e.g. 4,16")

    p = add("rel-field", "bounded dependence search in a number field")
    p.add_argument("--field", required=True, help="cyclotomic:n, Q, or JSON {\"modulus\": [...]}")
    p.add_argument("--values", required=True, help="';'-separated expressions in x, or a JSON list of coordinate arrays")
    p.add_argument("--bound", type=int, required=True)

    p = add("indep-mod-const", "independence of rational functions modulo constants")
    p.add_argument("--funcs", required=True, help="';'-separated rational functions in X")

    p = add("gen-linfrac", "does the family generate a power of a linear fractional map")
    p.add_argument("--funcs", required=True)

    p = add("special", "affine conjugacy to +-X^d or +-T_d")
    p.add_argument("--f", required=True)

    p = add("preperiodic", "preperiodic points over Q, or a single decision with --alpha")
    p.add_argument("--f", required=True)
    p.add_argument("--alpha")

    p = add("orbit", "orbit of alpha under phi")
    p.add_argument("--phi", "--f", dest="phi", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--field")

    for name, help_ in (("search-pairs", "dependent orbit pairs over a height grid"),
                        ("consecutive", "dependent windows of s consecutive iterates")):
        p = add(name, help_)
        p.add_argument("--f", required=True)
        p.add_argument("--height-num", type=int, default=10)
        p.add_argument("--depth", type=int, default=4)
        p.add_argument("--bound", type=int)
        if name == "consecutive":
            p.add_argument("--s", type=int, required=True)

    p = add("scan", "dependence of alpha with its iterates")
    p.add_argument("--phi", "--f", dest="phi", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--bound", type=int)
    p.add_argument("--field")

    p = add("valuation-check", "v_p(f^(m)(alpha)) = d^m v_p(alpha)")
    p.add_argument("--f", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--depth", type=int, default=4)

    p = add("growth-check", "strict growth of |f^(n)(alpha)| at every embedding")
    p.add_argument("--f", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--field")

    add("verify-paper-examples", "built-in regression of the worked examples")
    return parser


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------

def _print_json(obj, args) -> None:
    text = canonical_json(obj) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _alpha(text: str, field_spec: str | None):
    if field_spec:
        return parse_element(parse_field(field_spec), text)
    return parse_rational(text)


def _funcs(text: str) -> list:
    funcs = [parse_rational_function(part) for part in text.split(";") if part.strip()]
    if not funcs:
        raise ArithmeticInputError("no functions given")
    return funcs


def _dry(args, f=None, **extra) -> int:
    out = {"dry_run": True, "command": args.command, "valid": True, **extra}
    if f is not None:
        out["hypotheses"] = hypothesis_report(f)
    _print_json(out, args)
    return EXIT_OK


def _warn(hyp: dict) -> None:
    for w in hyp.get("warnings", []):
        print(f"warning: {w}", file=sys.stderr)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_rel(args) -> int:
    vals = [parse_rational(v) for v in args.values.split(",") if v.strip()]
    if args.dry_run:
        return _dry(args, values=[format_rational(v) for v in vals])
    _print_json(rational_dependence(vals).to_json(), args)
    return EXIT_OK


def cmd_rel_field(args) -> int:
    K = parse_field(args.field)
    vals = parse_elements(K, args.values)
    if args.bound < 1:
        raise ValueError("--bound must be positive")
    if args.dry_run:
        return _dry(args, field=K.to_json(), values=[v.to_json() for v in vals])
    _print_json(bounded_field_dependence(vals, args.bound, args.max_candidates).to_json(), args)
    return EXIT_OK


def cmd_indep(args) -> int:
    funcs = _funcs(args.funcs)
    if args.dry_run:
        return _dry(args, funcs=[str(f) for f in funcs])
    v = mult_indep_mod_constants(funcs)
    out = v.to_json()
    out["independent_mod_constants"] = not v.dependent
    _print_json(out, args)
    return EXIT_OK


def cmd_gen(args) -> int:
    funcs = _funcs(args.funcs)
    if args.dry_run:
        return _dry(args, funcs=[str(f) for f in funcs])
    ok, w = generates_power_linear_fractional(funcs)
    _print_json({"generates": ok, "witness": w.to_json() if w else None}, args)
    return EXIT_OK


def cmd_special(args) -> int:
    f = parse_poly(args.f)
    if args.dry_run:
        return _dry(args, f)
    w = is_special(f)
    _print_json(w.to_json() if w else {"special": False}, args)
    return EXIT_OK


def cmd_preperiodic(args) -> int:
    f = parse_poly(args.f)
    if args.dry_run:
        return _dry(args, f)
    if args.alpha is not None:
        _print_json(is_preperiodic(f, parse_rational(args.alpha)).to_json(), args)
    else:
        pts = preperiodic_points(f)
        _print_json({"f": str(f), "preperiodic_points": [format_rational(p) for p in pts]}, args)
    return EXIT_OK


def cmd_orbit(args) -> int:
    phi = parse_rational_function(args.phi)
    alpha = _alpha(args.alpha, args.field)
    if args.depth < 0:
        raise ValueError("--depth must be nonnegative")
    if args.dry_run:
        return _dry(args, phi)
    _print_json(orbit(phi, alpha, args.depth).to_json(), args)
    return EXIT_OK


def _emit(rep: SearchReport, args) -> None:
    rep.sort()
    text = emit_report(rep, args.out, args.format)
    if not args.out:
        sys.stdout.write(text)
    print(f"wall_time {rep.wall_time:.3f}s scanned {rep.scanned_count}", file=sys.stderr)


def cmd_grid(args) -> int:
    f = parse_poly(args.f)
    if args.height_num < 1 or args.depth < 0:
        raise ValueError("--height-num must be >= 1 and --depth >= 0")
    if args.workers < 1:
        raise ValueError("--workers must be >= 1")
    hyp = hypothesis_report(f)
    if args.dry_run:
        return _dry(args, f, grid_size=grid_size(args.height_num))
    _warn(hyp)

    if args.command == "search-pairs":
        def run(start, budget):
            return search_dependent_pairs(f, args.height_num, args.depth, args.bound,
                                          start=start, budget=budget, workers=args.workers)
        params = {"kind": "search-pairs", "f": str(f), "height_num": args.height_num,
                  "depth": args.depth, "bound": args.bound}
    else:
        def run(start, budget):
            return consecutive_dependence_search(f, args.s, args.height_num, args.depth, args.bound,
                                                 start=start, budget=budget, workers=args.workers)
        params = {"kind": "consecutive", "f": str(f), "s": args.s, "height_num": args.height_num,
                  "depth": args.depth, "bound": args.bound}

    phash = params_hash(params)
    total = grid_size(args.height_num)
    cursor, hits = 0, []
    if args.checkpoint:
        ck = load_checkpoint(args.checkpoint)
        if ck is not None:
            if ck["params_hash"] != phash:
                raise ValueError("checkpoint belongs to a different parameter set")
            cursor, hits = ck["grid_cursor"], ck["hits"]
    stop = total if args.budget is None else min(total, cursor + args.budget)

    t0 = time.time()
    first = cursor
    while cursor < stop:
        shard = min(SHARD_SIZE, stop - cursor)
        part = run(cursor, shard)
        hits += part.hits
        cursor = part.next_cursor
        if args.checkpoint:
            save_checkpoint(args.checkpoint, cursor, phash, hits)

    rep = SearchReport(
        parameters=params,
        hits=hits,
        scanned_count=cursor,
        complete=cursor >= total,
        next_cursor=cursor,
        hypotheses=hyp,
    )
    rep.wall_time = time.time() - t0
    if args.checkpoint and cursor == first:
        save_checkpoint(args.checkpoint, cursor, phash, hits)
    _emit(rep, args)
    return EXIT_OK if rep.complete else EXIT_PARTIAL


def cmd_scan(args) -> int:
    phi = parse_rational_function(args.phi)
    alpha = _alpha(args.alpha, args.field)
    if args.depth < 0:
        raise ValueError("--depth must be nonnegative")
    if args.dry_run:
        return _dry(args, phi)
    rep = scan_fixed_alpha(phi, alpha, args.depth, args.bound)
    _warn(rep.hypotheses)
    _emit(rep, args)
    return EXIT_OK


def cmd_valuation(args) -> int:
    f = parse_poly(args.f)
    alpha = parse_rational(args.alpha)
    if args.dry_run:
        return _dry(args, f, S_f=places_S_f(f))
    _print_json(valuation_escape_check(f, alpha, args.p, args.depth).to_json(), args)
    return EXIT_OK


def cmd_growth(args) -> int:
    f = parse_poly(args.f)
    alpha = _alpha(args.alpha, args.field)
    if args.dry_run:
        return _dry(args, f)
    _print_json(check_archimedean_growth(f, alpha, args.depth, args.precision).to_json(), args)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.dry_run:
        return _dry(args)
    results = run_all()
    lines = [r.line() for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} passed")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_OK if not failed else EXIT_INPUT


COMMANDS = {
    "rel": cmd_rel,
    "rel-field": cmd_rel_field,
    "indep-mod-const": cmd_indep,
    "gen-linfrac": cmd_gen,
    "special": cmd_special,
    "preperiodic": cmd_preperiodic,
    "orbit": cmd_orbit,
    "search-pairs": cmd_grid,
    "consecutive": cmd_grid,
    "scan": cmd_scan,
    "valuation-check": cmd_valuation,
    "growth-check": cmd_growth,
    "verify-paper-examples": cmd_verify,
}


def _apply_memory_cap() -> None:
    cap = os.environ.get("MULTDEP_MAX_MEMORY")
    if not cap:
        return
    import resource

    limit = int(cap)
    _, hard = resource.getrlimit(resource.RLIMIT_AS)
    if hard != resource.RLIM_INFINITY:
        limit = min(limit, hard)
    resource.setrlimit(resource.RLIMIT_AS, (limit, hard))


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _apply_memory_cap()
        return COMMANDS[args.command](args)
    except (SearchSpaceError, SizeLimitError, PrecisionError) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_PARTIAL
    except MemoryError:
        print("budget exceeded: memory cap reached", file=sys.stderr)
        return EXIT_PARTIAL
    except CertificationError:
        raise
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
