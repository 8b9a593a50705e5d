"""Command-line entry point.

Every subcommand prints rationals as ``num/den``. Sweeps stream JSONL and
tables are CSV. Exit codes: 0 on success, 1 on usage or input errors,
2 when a computed identity or bound fails.

Options may also come from a ``key=value`` file given by ``--config``;
flags on the command line take precedence. The default worker count is
read from ``DEDEKIND_TODD_WORKERS``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from . import congruence, cones, dedekind, expsum, laurent, toddcore
from .exactnum import format_rational

WORKERS_ENV = "DEDEKIND_TODD_WORKERS"
EXIT_OK, EXIT_USAGE, EXIT_FALSIFIED = 0, 1, 2


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


def _ints(text: Optional[str], flag: str) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(t) for t in str(text).replace(" ", "").split(",") if t != ""]
    except ValueError:
        raise UsageError(flag, f"expected comma-separated integers, got {text!r}") from None


def _require(value, flag: str):
    if value is None:
        raise UsageError(flag, "is required")
    return value


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _read_config(path: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError("--config", f"line {lineno} is not key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("_", "-")] = value
    return out


def _config_argv(cfg: Dict[str, str], sub: argparse.ArgumentParser) -> List[str]:
    """Turn config entries into flags placed before the real ones, so real flags win."""
    known = {}
    for action in sub._actions:
        for opt in action.option_strings:
            known[opt] = action
    argv: List[str] = []
    for key, value in cfg.items():
        action = known.get("--" + key)
        if action is None or key in ("config", "selftest", "help"):
            continue
        if isinstance(action, argparse._StoreTrueAction):
            if value.lower() in ("1", "true", "yes", "on"):
                argv.append("--" + key)
        else:
            argv += ["--" + key, value]
    return argv


def _write(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _ring(name: str, modulus: Optional[int]) -> laurent.Ring:
    if name in ("ZZ", "QQ"):
        return laurent.ZZ if name == "ZZ" else laurent.QQ
    if name in ("ZZ/q", "mod"):
        return laurent.Ring.mod(_require(modulus, "--modulus"))
    raise UsageError("--ring", f"unknown ring {name!r}")


def _dims(args) -> Tuple[List[int], int, List[int]]:
    r = _require(_ints(args.r, "--r"), "--r")
    n = args.n if args.n is not None else len(r)
    if len(r) != n:
        raise UsageError("--r", f"has {len(r)} entries but --n is {n}")
    p = _ints(args.p, "--p") or []
    if len(p) != n - 1:
        raise UsageError("--p", f"needs {n - 1} entries")
    return r, _require(args.q, "--q"), p


def _cone_arg(args) -> cones.LatticeCone:
    if args.cone:
        text = args.cone
        if text.startswith("@"):
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        try:
            return cones.cone_from_json(text)
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError("--cone", str(exc)) from None
    q = _require(args.q, "--q or --cone")
    return cones.standard_cone(q, _ints(args.p, "--p") or [])


# selftests --------------------------------------------------------------------

def _check(cases: Sequence[Tuple[str, bool]]) -> int:
    bad = [name for name, ok in cases if not ok]
    for name, ok in cases:
        print(f"{'ok  ' if ok else 'FAIL'} {name}")
    return EXIT_FALSIFIED if bad else EXIT_OK


def _selftest_sum() -> int:
    from fractions import Fraction
    return _check([
        ("s_(1,1)(3;1) = 1/18", dedekind.dedekind_sum((1, 1), 3, (1,)) == Fraction(1, 18)),
        ("s_(1,2)(5;2) = 0", dedekind.dedekind_sum((1, 2), 5, (2,)) == 0),
        ("t_() = 1", toddcore.todd_coefficient_t((), 1, ()) == 1),
        ("d(3;1) = 2/3", dedekind.zagier_sum(3, (1,)) == Fraction(2, 3)),
    ])


def _selftest_todd() -> int:
    from fractions import Fraction
    t = toddcore.todd_polynomial(1, 2)
    return _check([
        ("Todd^1 in two variables is (x1 + x2)/2",
         t.coefficient((1, 0)) == Fraction(1, 2) and t.coefficient((0, 1)) == Fraction(1, 2)),
        ("Todd^0 = 1", toddcore.todd_polynomial(0, 3).coefficient((0, 0, 0)) == 1),
    ])


def _selftest_denominator() -> int:
    return _check([("d_{0,n} = 1", toddcore.denominator_dNn(0, 3) == 1),
                   ("d_{2,2} = 12", toddcore.denominator_dNn(2, 2) == 12),
                   ("d_{4,4} = 720", toddcore.denominator_dNn(4, 4) == 720)])


def _selftest_subdivide() -> int:
    unit = cones.LatticeCone([(1, 0), (0, 1)])
    leaves = cones.nonsingular_subdivision(unit)
    return _check([("nonsingular cone is its own subdivision", len(leaves) == 1 and leaves[0][1] == unit),
                   ("degenerate cone detected", cones.LatticeCone([(1, 0), (1, 0)]).is_degenerate)])


def _selftest_frpoly() -> int:
    return _check([("f_(1,1) = p1 + p1^-1", str(congruence.f_r_polynomial((1, 1))) == "p1 + p1^-1"),
                   ("odd weight gives zero", congruence.f_r_polynomial((1, 2)).is_zero())])


def _selftest_congruence() -> int:
    return _check([("r=(1,1) q=3 p=1 holds", congruence.verify_congruence_s((1, 1), 3, (1,)).holds),
                   ("odd |r| both sides 0", congruence.verify_congruence_s((1, 2), 7, (3,)).lhs == 0)])


def _selftest_ict() -> int:
    f = laurent.RationalFn.parse("1/(1 - x)", ["x"])
    return _check([("iCT of a polynomial is its constant term",
                    laurent.iterated_constant_term(laurent.RationalFn.parse("3 + x*y", ["x", "y"]),
                                                   ["x", "y"]) == 3),
                   ("iCT of 1/(1 - x) = 1", laurent.iterated_constant_term(f, ["x"]) == 1)])


def _selftest_expsum() -> int:
    zero = laurent.LaurentPolynomial(["p1"], None, laurent.ZZ)
    single = laurent.parse_laurent("p1^2 + p1", ["p1"], laurent.ZZ)
    return _check([("K(0, 7) = 6", abs(expsum.exp_sum_K(zero, 7).value - 6) < 1e-12),
                   ("single variable satisfies (H)", expsum.check_condition_H(single)[0])])


def _selftest_equidist() -> int:
    zero = laurent.LaurentPolynomial(["p1"], None, laurent.ZZ)
    with warnings.catch_warnings():
        # f = 0 fails condition (H) on purpose
        warnings.simplefilter("ignore")
        only2 = expsum.weyl_average(zero, 1, 2.5)
        wide = expsum.weyl_average(zero, 1, 50)
    return _check([("average of f = 0 is 1", abs(wide.average - 1) < 1e-12),
                   ("x just above 2 uses one tuple", only2.count == 1 and abs(only2.average) == 1)])


def _selftest_roots() -> int:
    rc = congruence.count_congruence_roots([0, 1], 5, 3)
    return _check([("f = x has one root", rc.count == 1 and rc.bound == 1)])


# subcommands ------------------------------------------------------------------

def cmd_sum(args) -> int:
    kind = args.kind
    if kind == "zagier":
        q = _require(args.q, "--q")
        p = _ints(args.p, "--p") or []
        value = dedekind.zagier_sum(q, p)
        r = [1] * (len(p) + 1)
    else:
        r, q, p = _dims(args)
        fn = dedekind.dedekind_sum if kind == "s" else toddcore.todd_coefficient_t
        value = fn(r, q, p)
    if args.format == "json":
        _write(args, dedekind.sum_to_json(r, q, p, value) + "\n")
    else:
        _write(args, format_rational(value) + "\n")
    return EXIT_OK


def cmd_todd(args) -> int:
    cone = _cone_arg(args)
    N = _require(args.N, "--N")
    poly = toddcore.todd_polynomial_of_cone(cone, N, method=args.method)
    _write(args, (poly.to_json() if args.format == "json" else repr(poly)) + "\n")
    return EXIT_OK


def cmd_denominator(args) -> int:
    N, n = _require(args.N, "--N"), _require(args.n, "--n")
    _write(args, f"{toddcore.denominator_dNn(N, n)}\n")
    return EXIT_OK


def cmd_subdivide(args) -> int:
    cone = _cone_arg(args)
    if args.vector:
        chain = cones.subdivide(cone, _ints(args.vector, "--vector")).canonical()
        data = {"chain": [{"coeff": c, "generators": [list(g) for g in k.generators]} for k, c in chain]}
    else:
        leaves = [c for _, c in cones.nonsingular_subdivision(cone)]
        outer, inner = cones.outer_inner_split(cone, leaves)
        as_list = lambda cs: [[list(g) for g in c.generators] for c in cs]  # noqa: E731
        data = {"cone": [list(g) for g in cone.generators], "leaves": as_list(leaves),
                "outer": as_list(outer), "inner": as_list(inner)}
    _write(args, json.dumps(data) + "\n")
    return EXIT_OK


def cmd_frpoly(args) -> int:
    r = _require(_ints(args.r, "--r"), "--r")
    poly = congruence.f_r_polynomial(r, args.kind)
    _write(args, (poly.to_json() if args.format == "json" else str(poly)) + "\n")
    return EXIT_OK


def _congruence_block(job) -> List[str]:
    n, q, rs, kinds = job
    lines = []
    for qq, p in congruence.iter_inputs(n, q, q):
        for r in rs:
            for kind in kinds:
                lines.append(congruence.verify_congruence(r, qq, p, kind).to_json())
    return lines


def cmd_verify_congruence(args) -> int:
    kinds = [k for k in args.kind.split(",") if k]
    if any(k not in ("s", "t") for k in kinds):
        raise UsageError("--kind", "use s, t or s,t")
    if args.r is not None:
        r, q, p = _dims(args)
        lines: Iterator[str] = iter([congruence.verify_congruence(r, q, p, k).to_json() for k in kinds])
        blocks = [list(lines)]
    else:
        n = _require(args.n, "--n")
        qmax = _require(args.qmax, "--qmax")
        rs = list(congruence.iter_indices(n, args.rmax))
        jobs = [(n, q, rs, kinds) for q in range(args.qmin, qmax + 1)]
        if args.workers > 1:
            pool = ProcessPoolExecutor(max_workers=args.workers)
            blocks = pool.map(_congruence_block, jobs, chunksize=1)
        else:
            pool = None
            blocks = map(_congruence_block, jobs)
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    failed = 0
    try:
        for block in blocks:
            for line in block:
                failed += not json.loads(line)["holds"]
                out.write(line + "\n")
            out.flush()
    finally:
        if args.output:
            out.close()
        if args.r is None and pool is not None:
            pool.shutdown()
    if failed:
        print(f"{failed} congruence(s) failed", file=sys.stderr)
        return EXIT_FALSIFIED
    return EXIT_OK


def cmd_ict(args) -> int:
    expr = _require(args.expr, "--expr")
    order = [v for v in _require(args.vars, "--vars").split(",") if v]
    ring = _ring(args.ring, args.modulus)
    try:
        f = laurent.RationalFn.parse(expr, order, ring)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError("--expr", str(exc)) from None
    if args.check:
        ok = laurent.admissible(f, order)
        _write(args, f"{'admissible' if ok else 'inadmissible'}\n")
        return EXIT_OK
    exps = _ints(args.exps, "--exps")
    try:
        value = laurent.iterated_coefficient(f, order, exps)
    except laurent.InadmissibleError as exc:
        raise UsageError("--expr", str(exc)) from None
    _write(args, (format_rational(value) if ring.kind != "ZZ/q" else str(value)) + "\n")
    return EXIT_OK


def _poly_arg(args) -> laurent.LaurentPolynomial:
    if args.poly:
        names = [v for v in args.vars.split(",") if v] if args.vars else None
        return laurent.parse_laurent(args.poly, names, laurent.ZZ)
    r = _require(_ints(args.r, "--r"), "--r or --poly")
    return congruence.f_r_polynomial(r, "s", pruned=True)


def cmd_expsum(args) -> int:
    f = _poly_arg(args)
    if args.primes:
        qs = [q for q in range(2, args.qmax + 1) if all(q % d for d in range(2, math.isqrt(q) + 1))]
    elif args.q is not None:
        qs = [args.q]
    else:
        qs = list(range(args.qmin, _require(args.qmax, "--qmax") + 1))
    rows = []
    for q in qs:
        res = expsum.exp_sum_K(f, q)
        rows.append([q, repr(res.value.real), repr(res.value.imag), repr(res.abs), repr(res.weil_reference)])
    _write(args, _csv(["q", "re", "im", "abs", "bound"], rows))
    return EXIT_OK


def cmd_equidist(args) -> int:
    x = _require(args.x, "--x")
    if args.mode == "histogram":
        r = _require(_ints(args.r, "--r"), "--r")
        h = expsum.fractional_part_histogram(r, x, args.bins)
        rows = [[format_rational(lo), format_rational(hi), c] for (lo, hi), c in zip(h.edges(), h.counts)]
        _write(args, _csv(["bin_lo", "bin_hi", "count"], rows))
        print(f"total={h.total} star_discrepancy={h.discrepancy!r}", file=sys.stderr)
        return EXIT_OK
    f = _poly_arg(args)
    s = expsum.weyl_average(f, args.k, x, workers=args.workers)
    _write(args, _csv(["x", "k", "re", "im", "abs", "count"],
                      [[repr(x), args.k, repr(s.average.real), repr(s.average.imag), repr(abs(s.average)),
                        s.count]]))
    return EXIT_OK


def cmd_roots(args) -> int:
    coeffs = _require(_ints(args.coeffs, "--coeffs"), "--coeffs")
    p, k = _require(args.p_prime, "--prime"), _require(args.k, "--k")
    try:
        rc = congruence.count_congruence_roots(coeffs, p, k)
    except ValueError as exc:
        raise UsageError("--coeffs", str(exc)) from None
    _write(args, json.dumps({"coeffs": coeffs, "p": p, "k": k, "count": rc.count, "bound": rc.bound,
                             "within": rc.within, "refined_bound": rc.refined_bound,
                             "degree_bound": rc.degree_bound}) + "\n")
    return EXIT_OK if rc.within else EXIT_FALSIFIED


# parser -----------------------------------------------------------------------

SELFTESTS: Dict[str, Callable[[], int]] = {
    "sum": _selftest_sum, "todd": _selftest_todd, "denominator": _selftest_denominator,
    "subdivide": _selftest_subdivide, "fr-poly": _selftest_frpoly,
    "verify-congruence": _selftest_congruence, "ict": _selftest_ict, "expsum": _selftest_expsum,
    "equidist": _selftest_equidist, "roots-modpk": _selftest_roots,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dedekind-todd", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    def sub(name: str, func, help_text: str) -> argparse.ArgumentParser:
        sp = subs.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--selftest", action="store_true", help="run built-in checks and exit")
        sp.add_argument("--config", help="key=value file; command-line flags take precedence")
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")
        sp.add_argument("--workers", type=int, default=_default_workers(),
                        help=f"worker processes (default from {WORKERS_ENV}, else 1)")
        return sp

    sp = sub("sum", cmd_sum, "generalized Dedekind sum, Todd coefficient or cotangent sum")
    sp.add_argument("--n", type=int)
    sp.add_argument("--r")
    sp.add_argument("--q", type=int)
    sp.add_argument("--p")
    sp.add_argument("--kind", choices=["s", "t", "zagier"], default="s")
    sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = sub("todd", cmd_todd, "degree-N Todd polynomial of a cone")
    sp.add_argument("--cone", help='JSON {"generators": [[...], ...]} or @file')
    sp.add_argument("--q", type=int)
    sp.add_argument("--p")
    sp.add_argument("--N", type=int)
    sp.add_argument("--method", choices=["auto", "standard", "lattice", "subdivision"], default="auto")
    sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = sub("denominator", cmd_denominator, "universal denominator d_{N,n}")
    sp.add_argument("--N", type=int)
    sp.add_argument("--n", type=int)

    sp = sub("subdivide", cmd_subdivide, "nonsingular subdivision of a cone (JSON in, JSON out)")
    sp.add_argument("--cone")
    sp.add_argument("--q", type=int)
    sp.add_argument("--p")
    sp.add_argument("--vector", help="single stellar subdivision at this lattice vector")

    sp = sub("fr-poly", cmd_frpoly, "the Laurent polynomial f_r")
    sp.add_argument("--r")
    sp.add_argument("--kind", choices=["s", "t"], default="s")
    sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = sub("verify-congruence", cmd_verify_congruence, "check the mod-q congruences (JSONL)")
    sp.add_argument("--n", type=int)
    sp.add_argument("--r")
    sp.add_argument("--q", type=int)
    sp.add_argument("--p")
    sp.add_argument("--rmax", type=int, default=8)
    sp.add_argument("--qmin", type=int, default=2)
    sp.add_argument("--qmax", type=int)
    sp.add_argument("--kind", default="t,s")

    sp = sub("ict", cmd_ict, "iterated constant term of a rational function")
    sp.add_argument("--expr")
    sp.add_argument("--vars", help="expansion order, outermost first")
    sp.add_argument("--ring", default="QQ", help="ZZ, QQ or ZZ/q")
    sp.add_argument("--modulus", type=int)
    sp.add_argument("--exps", help="target exponents instead of the constant term, e.g. --exps -1,0")
    sp.add_argument("--check", action="store_true", help="only report admissibility")

    for name, func, text in (("expsum", cmd_expsum, "exponential sums K(f, q) as CSV"),
                             ("equidist", cmd_equidist, "Weyl averages or fractional-part histograms as CSV")):
        sp = sub(name, func, text)
        sp.add_argument("--r")
        sp.add_argument("--poly", help="explicit Laurent polynomial instead of f_r")
        sp.add_argument("--vars")
        if name == "expsum":
            sp.add_argument("--q", type=int)
            sp.add_argument("--qmin", type=int, default=2)
            sp.add_argument("--qmax", type=int)
            sp.add_argument("--primes", action="store_true", help="only prime q up to --qmax")
        else:
            sp.add_argument("--x", type=float)
            sp.add_argument("--k", type=int, default=1)
            sp.add_argument("--bins", type=int, default=20)
            sp.add_argument("--mode", choices=["weyl", "histogram"], default="weyl")

    sp = sub("roots-modpk", cmd_roots, "count roots of f modulo p^k")
    sp.add_argument("--coeffs", help="coefficients from the constant term up")
    sp.add_argument("--prime", dest="p_prime", type=int)
    sp.add_argument("--k", type=int)
    return parser


_NEGATIVE_LIST = re.compile(r"^-\d[\d,]*$")


def _attach_negative_values(argv: List[str]) -> List[str]:
    """Turn ``--flag -1,0`` into ``--flag=-1,0`` so argparse does not read the value as an option."""
    out: List[str] = []
    for tok in argv:
        if out and _NEGATIVE_LIST.match(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.config:
            sub = parser._subparsers._group_actions[0].choices[args.command]
            cfg_argv = _config_argv(_read_config(args.config), sub)
            args = parser.parse_args([args.command] + cfg_argv + argv[argv.index(args.command) + 1:])
        if args.workers < 1:
            raise UsageError("--workers", "must be >= 1")
        if args.selftest:
            return SELFTESTS[args.command]()
        return args.func(args)
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except congruence.InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
