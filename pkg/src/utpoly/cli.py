"""Command-line front end.

Machine output is a single JSON document on stdout (stable key order,
compact separators, one trailing newline) so runs are byte-reproducible
given the same arguments and seed.  Human-oriented notes go to stderr.
Exit codes: 0 success, 1 usage/parse problems, 2 domain errors, 3
exhausted randomized budgets.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import product

from .analysis import classify, coeff_poly, leading_tuples, order
from .cpoly import CPolynomial
from .errors import ParseError, ResourceLimit, UsageError, UtpolyError
from .fields import FieldDescriptor
from .freealg import NcPolynomial
from .solver import (SolveOptions, hit_open_set, solve_diagonal_r0,
                     solve_target, verify)
from .triangular import (FieldRing, UTMatrix, evaluate, evaluate_structured,
                         generic_evaluate, word_product, word_product_paths)

ORACLE_PRIMES = (2, 3, 5)
ORACLE_TUPLE_LIMIT = 10 ** 8
ORACLE_NOTE = ("exhaustive finite-field enumeration; validates evaluation "
               "and band containment at desk scale, says nothing about "
               "density (an infinite-field notion)")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON in {path}: {exc}") from None


def _field(args) -> FieldDescriptor:
    return FieldDescriptor.parse(args.field)


def _poly(args, desc: FieldDescriptor) -> NcPolynomial:
    return NcPolynomial.parse(args.poly, desc, nvars=args.m)


def _options(args) -> SolveOptions:
    return SolveOptions(
        seed=args.seed,
        retries=args.retries,
        height=args.height,
        tolerance=args.tolerance,
        diag_budget=args.diag_budget,
        nonzero_budget=args.nonzero_budget,
        order_cap=args.max_n,
        monomial_budget=args.monomial_budget,
    )


def _matrices_from_file(path: str, desc: FieldDescriptor, budget: int):
    data = _read_json(path)
    if isinstance(data, dict) and "matrices" in data:
        items = data["matrices"]
    elif isinstance(data, list):
        items = data
    else:
        items = [data]
    return [UTMatrix.from_json(item, desc, budget) for item in items]


def _target_from_file(path: str, desc: FieldDescriptor, budget: int) -> UTMatrix:
    data = _read_json(path)
    if isinstance(data, dict) and "matrices" in data:
        raise UsageError(f"{path} holds a matrix tuple, expected one matrix")
    return UTMatrix.from_json(data, desc, budget)


def _add_common(sp, need_n=False):
    sp.add_argument("--poly", required=True, help="polynomial text, e.g. 'x1*x2-x2*x1'")
    sp.add_argument("--field", default="Q", help="Q | Fp:<prime> | C[:<tolerance>]")
    sp.add_argument("--m", type=int, default=None,
                    help="number of variables (default: largest index used)")
    if need_n:
        sp.add_argument("--n", type=int, required=True, help="matrix size")
    sp.add_argument("--max-n", dest="max_n", type=int, default=None,
                    help="cap for the order search")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--retries", type=int, default=16)
    sp.add_argument("--height", type=int, default=256,
                    help="sampling height for random field elements")
    sp.add_argument("--tolerance", type=float, default=1e-9)
    sp.add_argument("--diag-budget", dest="diag_budget", type=int, default=200)
    sp.add_argument("--nonzero-budget", dest="nonzero_budget", type=int, default=200)
    sp.add_argument("--monomial-budget", dest="monomial_budget", type=int,
                    default=10 ** 6)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="utpoly", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("order", help="order invariant of a polynomial")
    _add_common(sp)

    sp = sub.add_parser("classify", help="image shape on size-n matrices")
    _add_common(sp, need_n=True)

    sp = sub.add_parser("eval", help="evaluate on a matrix tuple")
    _add_common(sp)
    sp.add_argument("--matrices", help="JSON file with {\"matrices\": [...]}")
    sp.add_argument("--generic", action="store_true",
                    help="evaluate at the generic symbolic tuple")
    sp.add_argument("--n", type=int, default=None,
                    help="matrix size (required with --generic)")
    sp.add_argument("--route", choices=("direct", "paths", "structured"),
                    default="direct", help="which evaluation route to use")

    sp = sub.add_parser("coeffs", help="coefficient polynomials of arc chains")
    _add_common(sp)
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--slots", help="comma-separated slot tuple, e.g. 1,2")
    group.add_argument("--leading", type=int, metavar="R",
                       help="list all nonzero slot tuples of length R")

    sp = sub.add_parser("solve", help="witness matrices hitting a target")
    _add_common(sp, need_n=True)
    sp.add_argument("--target", required=True, help="target matrix JSON file")

    sp = sub.add_parser("hit", help="witness matrices inside an open set")
    _add_common(sp, need_n=True)
    sp.add_argument("--open-set", dest="open_set", required=True,
                    help="nonzero polynomial in y[s,t] coordinates")

    sp = sub.add_parser("oracle-enum",
                        help="exhaustive finite-field image enumeration")
    _add_common(sp, need_n=True)

    sp = sub.add_parser("verify", help="replay a witness through both evaluators")
    _add_common(sp)
    sp.add_argument("--witness", required=True,
                    help="JSON file with {\"matrices\": [...]} (solve output works)")
    sp.add_argument("--target", default=None, help="target matrix JSON file")
    sp.add_argument("--open-set", dest="open_set", default=None,
                    help="open-set polynomial in y[s,t]")

    return ap


def _cmd_order(args) -> None:
    desc = _field(args)
    p = _poly(args, desc)
    rep = order(p, max_n=args.max_n, sample_height=args.height)
    _emit(rep.to_json(desc))


def _cmd_classify(args) -> None:
    desc = _field(args)
    p = _poly(args, desc)
    _emit(classify(p, args.n, max_n=args.max_n).to_json())


def _cmd_eval(args) -> None:
    desc = _field(args)
    p = _poly(args, desc)
    if args.generic:
        if args.n is None:
            raise UsageError("--generic needs --n")
        out = generic_evaluate(p, args.n, args.monomial_budget)
        _emit({"result": out.to_json()})
        return
    if not args.matrices:
        raise UsageError("need --matrices FILE or --generic")
    mats = _matrices_from_file(args.matrices, desc, args.monomial_budget)
    if args.route == "structured":
        out = evaluate_structured(p, mats)
    else:
        out = evaluate(p, mats, use_paths=(args.route == "paths"))
    _emit({"result": out.to_json()})


def _cmd_coeffs(args) -> None:
    desc = _field(args)
    p = _poly(args, desc)
    if args.leading is not None:
        tuples = leading_tuples(p, args.leading)
        _emit({"r": args.leading, "leading_tuples": [list(t) for t in tuples]})
        return
    try:
        slots = tuple(int(s) for s in args.slots.split(","))
    except ValueError:
        raise UsageError(f"bad --slots value {args.slots!r}") from None
    q = coeff_poly(p, slots)
    _emit({"slots": list(slots), "coeff_poly": q.render(), "is_zero": q.is_zero()})


def _cmd_solve(args) -> None:
    desc = _field(args)
    p = _poly(args, desc)
    target = _target_from_file(args.target, desc, args.monomial_budget)
    opt = _options(args)
    rep = order(p, max_n=opt.order_cap, sample_height=args.height)
    if rep.r == 0:
        result = solve_diagonal_r0(p, args.n, target, opt)
    else:
        result = solve_target(p, args.n, target, opt)
    _emit(result.to_json())


def _cmd_hit(args) -> None:
    desc = _field(args)
    p = _poly(args, desc)
    f = CPolynomial.parse(args.open_set, desc, kinds="y")
    result = hit_open_set(p, args.n, f, _options(args))
    _emit(result.to_json())


def _cmd_verify(args) -> None:
    desc = _field(args)
    p = _poly(args, desc)
    mats = _matrices_from_file(args.witness, desc, args.monomial_budget)
    target = None
    f = None
    if args.target:
        target = _target_from_file(args.target, desc, args.monomial_budget)
    if args.open_set:
        f = CPolynomial.parse(args.open_set, desc, kinds="y")
    report = verify(p, mats, target=target, f=f, tolerance=args.tolerance)
    _emit(report)


def _cmd_oracle_enum(args) -> None:
    desc = _field(args)
    p = _poly(args, desc)
    n, m = args.n, p.nvars
    if desc.kind != "prime" or desc.p not in ORACLE_PRIMES:
        raise UsageError(f"oracle-enum needs --field Fp:q with q in {ORACLE_PRIMES}")
    if n > 3:
        raise ResourceLimit("oracle-enum is capped at n <= 3")
    if m > 2:
        raise ResourceLimit("oracle-enum is capped at m <= 2 variables")
    cells = m * n * (n + 1) // 2
    total = desc.p ** cells
    if total > ORACLE_TUPLE_LIMIT:
        raise ResourceLimit(
            f"{desc.p}^{cells} = {total} tuples exceeds {ORACLE_TUPLE_LIMIT}")
    ring = FieldRing(desc)
    positions = [(j, k) for j in range(1, n + 1) for k in range(j, n + 1)]
    values = [desc.from_int(v) for v in range(desc.p)]
    per_matrix = [UTMatrix(ring, n, dict(zip(positions, combo)))
                  for combo in product(values, repeat=len(positions))]
    image = {}
    dual_ok = True
    count = 0
    for tup in product(per_matrix, repeat=m):
        out = evaluate(p, list(tup))
        if dual_ok and not out.eq(evaluate_structured(p, list(tup))):
            dual_ok = False
        key = tuple(sorted((j, k, v.v) for (j, k), v in out.entries.items()))
        if key not in image:
            image[key] = out
        count += 1
    band_counts: dict = {}
    for mat in image.values():
        lvl = mat.band_level()
        band_counts[str(lvl)] = band_counts.get(str(lvl), 0) + 1
    _emit({
        "note": ORACLE_NOTE,
        "q": desc.p,
        "n": n,
        "m": m,
        "tuples": count,
        "dual_evaluation_agrees": dual_ok,
        "image_size": len(image),
        "band_counts": band_counts,
        "image": [image[k].to_json() for k in sorted(image)],
    })


_COMMANDS = {
    "order": _cmd_order,
    "classify": _cmd_classify,
    "eval": _cmd_eval,
    "coeffs": _cmd_coeffs,
    "solve": _cmd_solve,
    "hit": _cmd_hit,
    "oracle-enum": _cmd_oracle_enum,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except UtpolyError as exc:
        sys.stderr.write(f"utpoly: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
