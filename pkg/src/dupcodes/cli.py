"""Command-line front end.

Words travel one per line on stdin/stdout: a digit string when ``q <= 10``,
space-separated symbols otherwise.  Exit codes: 0 success, 1 a ``verify``
check failed, 2 usage error, 3 budget exceeded, 4 internal invariant broken.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import re
import sys
from typing import Iterable, List, Optional, Sequence

import mpmath

from .capacity import (
    CAPACITY_COLUMNS, CW_COLUMNS, DEFAULT_TOL, capacity_table, cw_capacity, omega_star, row_values,
)
from .channel import MODELS, ZERO_INSERTION, sample_output
from .codebook import (
    CodePrime, Codebook, block_lengths, count, enumerate_codewords, greedy_block_construction,
)
from .core import (
    INF, BudgetExceeded, ChannelParams, InvariantViolation, format_r, format_word, iter_space,
    parse_r, parse_word,
)
from .decoder import decode, decode_prime
from .oracle import brute_zero_error_check, build_graph, max_independent_set
from .transform import phi, phi_inverse

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET, EXIT_INVARIANT = 0, 1, 2, 3, 4

FIG3_ELLS = (1, 2, 3, 4)
FIG3_RS = tuple(range(1, 11))
FIGURE_TOL = 1e-30


class UsageError(ValueError):
    pass


def _int_list(text: str) -> List[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _r_list(text: str) -> list:
    return [parse_r(t) for t in text.split(",") if t.strip()]


def _params(args, allow_inf: bool = True) -> ChannelParams:
    r = parse_r(args.r)
    if r == INF and not allow_inf:
        raise UsageError(f"'{args.command}' needs a finite --r")
    return ChannelParams(args.q, args.ell, r)


def _read_words(stream, q: int) -> Iterable:
    for line in stream:
        line = line.strip()
        if line and not line.startswith("#"):
            yield parse_word(line, q)


def _emit_rows(out, fmt: str, columns: Sequence[str], rows: Sequence[Sequence]):
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)
    elif fmt == "json":
        json.dump([dict(zip(columns, r)) for r in rows], out, indent=1)
        out.write("\n")
    else:
        for r in rows:
            out.write(" ".join(f"{c}={v}" for c, v in zip(columns, r)) + "\n")


def _codebook(args, params) -> Codebook:
    if args.n is None:
        raise UsageError("--n is required")
    return Codebook(params, args.n, args.w)


# subcommands ---------------------------------------------------------------

def cmd_blocks(args, out):
    params = _params(args)
    rows = [(L, i, j, L - 1) for L, i, j in block_lengths(params, args.n)]
    _emit_rows(out, args.format, ("length", "i", "j", "run"), rows)


def cmd_enumerate(args, out):
    params = _params(args)
    cb = _codebook(args, params)
    words = enumerate_codewords(cb, budget=args.budget)
    lines = [cb.header()] + [format_word(w, params.q) for w in words]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_count(args, out):
    params = _params(args)
    table = count(params, args.n, max_weight=args.w)
    out.write(f"{table.size(args.n, args.w)}\n")


def cmd_rank(args, out):
    params = _params(args)
    cb = _codebook(args, params)
    for w in _read_words(sys.stdin, params.q):
        out.write(f"{cb.rank(w)}\n")


def _indices(values: Optional[Sequence[int]]):
    if values:
        return list(values)
    return [int(line) for line in sys.stdin if line.strip()]


def cmd_unrank(args, out):
    params = _params(args)
    cb = _codebook(args, params)
    for k in _indices(args.index):
        try:
            w = cb.unrank(k)
        except IndexError as e:
            raise UsageError(str(e)) from None
        out.write(format_word(w, params.q) + "\n")


def cmd_decode(args, out):
    params = _params(args)
    dec = decode_prime if args.prefixed else decode
    for z in _read_words(sys.stdin, params.q):
        out.write(format_word(dec(params, z), params.q) + "\n")


def cmd_transform(args, out):
    params = _params(args)
    f = phi_inverse if args.inverse else phi
    for w in _read_words(sys.stdin, params.q):
        out.write(format_word(f(params, w), params.q) + "\n")


def cmd_simulate(args, out):
    params = _params(args)
    if not params.bounded and args.cap is None:
        raise UsageError("--cap is required when r is inf")
    probs = [float(p) for p in args.probs.split(",")] if args.probs else None
    rng = random.Random(args.seed)
    for x in _read_words(sys.stdin, params.q):
        z = sample_output(params, x, args.model, rng=rng, probs=probs, cap=args.cap)
        out.write(format_word(z, params.q) + "\n")


def _grid(args):
    return [(q, ell, r) for q in _int_list(args.q) for ell in _int_list(args.ell)
            for r in _r_list(args.r)]


def cmd_capacity(args, out):
    rows = capacity_table(_grid(args), args.tol)
    _emit_rows(out, args.format, CAPACITY_COLUMNS,
               [row_values(r, args.digits) for r in rows])


def cmd_cw_capacity(args, out):
    rows = []
    for q, ell, r in _grid(args):
        params = ChannelParams(q, ell, r)
        if args.omega is None:
            star = omega_star(params, args.tol)
            omegas = [star.omega]
        else:
            omegas = [mpmath.mpf(w) for w in args.omega.split(",")]
        for om in omegas:
            res = cw_capacity(params, om, args.tol)
            rows.append([q, ell, format_r(r)]
                        + [mpmath.nstr(v, args.digits) for v in (res.omega, res.rho_omega, res.c0_omega)])
    _emit_rows(out, args.format, CW_COLUMNS, rows)


_HEADER = re.compile(r"(\w+)=(\S+)")


def _read_code_file(path: str):
    header = {}
    lines = []
    with open(path) as fh:
        for line in fh:
            s = line.strip()
            if s.startswith("#"):
                header.update(_HEADER.findall(s))
            elif s:
                lines.append(s)
    return header, lines


def cmd_verify(args, out):
    if args.check == "zero-error":
        if not args.code:
            raise UsageError("verify zero-error needs --code FILE")
        header, lines = _read_code_file(args.code)
        q = args.q if args.q is not None else int(header.get("q", 0))
        ell = args.ell if args.ell is not None else int(header.get("ell", 0))
        r = args.r if args.r is not None else header.get("r")
        if not q or not ell or r is None:
            raise UsageError("channel parameters missing from both flags and file header")
        params = ChannelParams(q, ell, parse_r(r))
        code = [parse_word(s, q) for s in lines]
        ok, bad = brute_zero_error_check(params, code, args.model)
        if ok:
            out.write(f"zero-error: ok ({len(set(code))} words, {params}, {args.model})\n")
            return EXIT_OK
        out.write(f"zero-error: FAIL {format_word(bad[0], q)} and {format_word(bad[1], q)} "
                  f"share an output\n")
        return EXIT_FAIL
    if args.n is None:
        raise UsageError("verify optimal needs --n N")
    for name in ("q", "ell", "r"):
        if getattr(args, name) is None:
            raise UsageError(f"verify optimal needs --{name}")
    params = ChannelParams(args.q, args.ell, parse_r(args.r))
    if args.model == ZERO_INSERTION:
        vertices = None
        dp = count(params, args.n).size()
    else:
        vertices = list(iter_space(params.q, args.n, min_length=params.ell, leading_zero=True))
        dp = CodePrime(params, args.n).size
    g = build_graph(params, args.n, args.model, vertices=vertices)
    mis, _ = max_independent_set(g)
    ok = mis == dp
    out.write(f"mis={mis} dp={dp} {'ok' if ok else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_figure(args, out):
    w = csv.writer(out, lineterminator="\n")
    if args.fig == 1:
        params = _params(args, allow_inf=False)
        picks = greedy_block_construction(params, args.max_length)
        w.writerow(("sigma", "i", "length", "run"))
        for (sigma, i), lengths in sorted(picks.items()):
            for L in lengths:
                w.writerow((sigma, i, L, L - 1))
    elif args.fig == 2:
        # all weight-2 words of length <= n starting with 1, marked by membership
        params = _params(args)
        cb = Codebook(params, args.n, 2)
        w.writerow(("run1", "run2", "in_code"))
        for u1 in range(args.n - 1):
            for u2 in range(args.n - 1 - u1):
                word = (1,) + (0,) * u1 + (1,) + (0,) * u2
                w.writerow((u1, u2, int(word in cb)))
    else:
        qs = _int_list(args.q) if args.q else [2]
        grid = [(q, ell, r) for q in qs for ell in FIG3_ELLS for r in FIG3_RS]
        rows = capacity_table(grid, args.tol)
        w.writerow(CAPACITY_COLUMNS)
        w.writerows(row_values(r, args.digits) for r in rows)


# parser ---------------------------------------------------------------------

def _add_params(p, defaults: bool = True):
    if defaults:
        p.add_argument("--q", type=int, required=True, help="alphabet size")
        p.add_argument("--ell", type=int, required=True, help="duplication length")
        p.add_argument("--r", required=True, help="max repetitions per position, or 'inf'")
    else:
        p.add_argument("--q", type=int)
        p.add_argument("--ell", type=int)
        p.add_argument("--r")


def _add_code(p, need_n: bool = True):
    p.add_argument("--n", type=int, required=need_n, help="maximum codeword length")
    p.add_argument("--w", type=int, default=None, help="number of blocks (constant weight)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dupcodes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("blocks", help="admissible block lengths up to n")
    _add_params(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("text", "csv", "json"), default="csv")
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("enumerate", help="list the codebook in canonical order")
    _add_params(p)
    _add_code(p)
    p.add_argument("--out", help="write to FILE instead of stdout")
    p.add_argument("--budget", type=int, default=10**6)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("count", help="codebook size")
    _add_params(p)
    _add_code(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("rank", help="index of each stdin codeword")
    _add_params(p)
    _add_code(p)
    p.set_defaults(func=cmd_rank)

    for name, help_text in (("unrank", "codeword at each index"),
                            ("encode", "map message indices to codewords")):
        p = sub.add_parser(name, help=help_text)
        _add_params(p)
        _add_code(p)
        p.add_argument("index", type=int, nargs="*", help="indices (default: read stdin)")
        p.set_defaults(func=cmd_unrank)

    p = sub.add_parser("decode", help="decode received words from stdin")
    _add_params(p)
    p.add_argument("--prefixed", action="store_true",
                   help="decode the prefixed code (first ell symbols kept verbatim)")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("transform", help="apply the difference map to stdin words")
    _add_params(p)
    p.add_argument("--inverse", action="store_true")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("simulate", help="pass stdin words through the channel")
    _add_params(p)
    p.add_argument("--model", choices=MODELS, default=ZERO_INSERTION)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, help="max insertions per position when r is inf")
    p.add_argument("--probs", help="comma-separated weights for counts 0..r")
    p.set_defaults(func=cmd_simulate)

    for name, func in (("capacity", cmd_capacity), ("cw-capacity", cmd_cw_capacity)):
        p = sub.add_parser(name, help="zero-error capacity" if name == "capacity"
                           else "constant-weight capacity (default: at the optimal weight)")
        p.add_argument("--q", required=True, help="comma-separated alphabet sizes")
        p.add_argument("--ell", required=True, help="comma-separated duplication lengths")
        p.add_argument("--r", required=True, help="comma-separated r values ('inf' allowed)")
        if name == "cw-capacity":
            p.add_argument("--omega", help="comma-separated relative weights")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--digits", type=int, default=12)
        p.add_argument("--format", choices=("text", "csv", "json"), default="text")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="brute-force checks on small instances")
    p.add_argument("check", choices=("zero-error", "optimal"))
    _add_params(p, defaults=False)
    p.add_argument("--code", help="code file (header line may carry q, ell, r)")
    p.add_argument("--n", type=int)
    p.add_argument("--model", choices=MODELS, default=ZERO_INSERTION)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figure", help="regenerate figure data as CSV")
    p.add_argument("--fig", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--q", default="2")
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--r", default="1")
    p.add_argument("--n", type=int, default=19, help="length bound (figure 2)")
    p.add_argument("--max-length", type=int, default=30, help="largest block length (figure 1)")
    # curves for large r differ by far less than the default tolerance
    p.add_argument("--tol", type=float, default=FIGURE_TOL)
    p.add_argument("--digits", type=int, default=20)
    p.set_defaults(func=cmd_figure)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "figure" and args.fig != 3:
        args.q = int(args.q)
    try:
        code = args.func(args, out)
    except BudgetExceeded as e:
        print(f"dupcodes: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolation as e:
        print(f"dupcodes: internal invariant violated: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, OSError) as e:
        print(f"dupcodes: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if code is None else code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        return run(argv)
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
