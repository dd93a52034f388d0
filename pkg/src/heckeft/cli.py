"""Command-line front end.

Subcommands: goss, cosets, hecke (mul | express | tn), lattice (snf | enum),
expand, eigen, nonexample, verify.  Output is JSON (default) or text, byte
stable for a fixed seed.  Exit codes: 0 success, 1 mathematical check
failure, 2 usage or budget error.
"""

import argparse
import json
import sys

from . import budgets
from .errors import BudgetExceededError, HeckeftError
from .fq import context_for_q
from .polyring import PolyA, element_class
from .laurent import LaurentSeries
from .lattice import (IndexType, LatticeMatrix, elementary_divisors,
                      enumerate_sublattices)
from . import hecke as hk
from . import cosets as cs
from .goss import FiniteLattice, goss_for_finite_lattice, goss_polynomials, ExpCoeffs
from .polyring import RationalFunction
from .expansion import (ExpansionContext, eigen_report, eigenvalue_of)
from .verify import run_all

USAGE_ERROR = 2
MATH_ERROR = 1


def build_parser():
    ap = argparse.ArgumentParser(
        prog="heckeft",
        description="Exact Drinfeld modular form and Hecke algebra computations "
                    "over F_q[t].")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, *flags):
        p.add_argument("--q", type=int, default=2, help="field size, a prime power")
        p.add_argument("--field-modulus", default=None,
                       help="irreducible modulus in g for extension fields")
        p.add_argument("--format", choices=("json", "text"), default="json")
        if "r" in flags:
            p.add_argument("--r", type=int, default=2)
        if "p" in flags:
            p.add_argument("--p", default="t", help="irreducible polynomial")
        if "prec" in flags:
            p.add_argument("--prec", type=int, default=budgets.default_precision())
            p.add_argument("--M", type=int, default=None, help="u-truncation")
        if "budget" in flags:
            p.add_argument("--budget", choices=("small", "default", "large"),
                           default="default")
        if "seed" in flags:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("goss", help="Goss polynomial tables")
    common(p, "budget")
    p.add_argument("--K", type=int, default=8)
    p.add_argument("--lattice", default=None,
                   help="comma-separated basis polynomials of a finite lattice")
    p.add_argument("--generic", action="store_true",
                   help="formal exponential coefficients a1, a2, ...")

    p = sub.add_parser("cosets", help="right-coset representatives")
    common(p, "r", "p")

    p = sub.add_parser("hecke", help="double-coset algebra")
    hsub = p.add_subparsers(dest="hcmd", required=True)
    pm = hsub.add_parser("mul", help="product of two elements")
    common(pm, "r", "budget")
    pm.add_argument("x", help="element like 'T(t,1)' or JSON")
    pm.add_argument("y")
    pe = hsub.add_parser("express", help="write in the generators T1..Tr")
    common(pe, "r", "p", "budget")
    pe.add_argument("x")
    pt = hsub.add_parser("tn", help="summed operator for a modulus")
    common(pt, "r", "budget")
    pt.add_argument("--N", default=None, help="composite modulus polynomial")
    pt.add_argument("--p", default=None, help="irreducible base (with --n)")
    pt.add_argument("--n", type=int, default=1, help="prime-power exponent")

    p = sub.add_parser("lattice", help="normal forms and sublattices")
    lsub = p.add_subparsers(dest="lcmd", required=True)
    ls = lsub.add_parser("snf", help="elementary divisors of a matrix")
    common(ls)
    ls.add_argument("matrix", help='JSON like {"r":2,"rows":[["t","1"],["0","1"]]}')
    le = lsub.add_parser("enum", help="sublattices of a given index type")
    common(le, "budget")
    le.add_argument("--r", type=int, default=2)
    le.add_argument("divisors", help='JSON like {"divisors":["t","1"]} or t,1')

    p = sub.add_parser("expand", help="u-expansions and their Hecke images")
    common(p, "p", "prec", "budget")
    p.add_argument("--form", default="delta",
                   choices=("delta", "g1", "g2", "delta2", "eisenstein"))
    p.add_argument("--k", type=int, default=None, help="Eisenstein weight")
    p.add_argument("--hecke", action="store_true", help="also apply T_p")

    p = sub.add_parser("eigen", help="eigenvalue certificate for a form")
    common(p, "p", "prec", "budget")
    p.add_argument("--form", default="delta", choices=("delta", "g1", "delta2"))

    p = sub.add_parser("nonexample", help="the square-discriminant computation")
    common(p, "prec", "budget")

    p = sub.add_parser("verify", help="run the invariant suite")
    common(p, "budget", "seed")
    return ap


def _ctx(args):
    return context_for_q(args.q, getattr(args, "field_modulus", None))


def _parse_p(ctx, text):
    p = PolyA.parse(ctx, text).monic()
    cls = element_class(p)
    if cls != "irreducible":
        raise HeckeftError("p must be irreducible, got a %s" % cls)
    return p


def _parse_hecke_element(ctx, r, text):
    text = text.strip()
    if text.startswith("{"):
        return hk.HeckeElement.from_json(ctx, json.loads(text))
    if not (text.startswith("T(") and text.endswith(")")):
        raise HeckeftError("element must look like T(t,1) or be JSON")
    divisors = [PolyA.parse(ctx, s).monic() for s in text[2:-1].split(",")]
    if len(divisors) != r:
        raise HeckeftError("expected %d divisors" % r)
    return hk.HeckeElement.single(IndexType(divisors))


def _emit(args, payload, out):
    if args.format == "json":
        out.write(json.dumps(payload, sort_keys=True, indent=2))
        out.write("\n")
    else:
        _emit_text(payload, out)


def _emit_text(payload, out, indent=0):
    pad = "  " * indent
    if isinstance(payload, dict):
        for key in payload:
            val = payload[key]
            if isinstance(val, (dict, list)):
                out.write("%s%s:\n" % (pad, key))
                _emit_text(val, out, indent + 1)
            else:
                out.write("%s%s: %s\n" % (pad, key, val))
    elif isinstance(payload, list):
        for val in payload:
            if isinstance(val, (dict, list)):
                _emit_text(val, out, indent + 1)
            else:
                out.write("%s- %s\n" % (pad, val))
    else:
        out.write("%s%s\n" % (pad, payload))


def _cmd_goss(args, out):
    ctx = _ctx(args)
    budget = budgets.from_env(args.budget)
    if args.generic or not args.lattice:
        nvars = 1
        while ctx.q ** nvars < max(args.K, 2):
            nvars += 1
        table = goss_polynomials(ExpCoeffs.generic(ctx.q, ctx.p, nvars), args.K)
    else:
        basis = [RationalFunction.from_poly(PolyA.parse(ctx, s))
                 for s in args.lattice.split(",")]
        table = goss_for_finite_lattice(FiniteLattice(ctx, basis, budget), args.K)
    payload = {"q": ctx.q, "K": args.K}
    payload.update(table.to_json())
    _emit(args, payload, out)
    return 0


def _cmd_cosets(args, out):
    ctx = _ctx(args)
    p = _parse_p(ctx, args.p)
    reps = cs.enumerate_reps(ctx, args.r, p)
    payload = {"q": ctx.q, "r": args.r, "p": str(p), "count": len(reps),
               "representatives": [rep.to_json() for rep in reps]}
    _emit(args, payload, out)
    return 0


def _cmd_hecke(args, out):
    ctx = _ctx(args)
    budget = budgets.from_env(args.budget)
    if args.hcmd == "mul":
        x = _parse_hecke_element(ctx, args.r, args.x)
        y = _parse_hecke_element(ctx, args.r, args.y)
        prod = hk.multiply(x, y, budget)
        _emit(args, prod.to_json(), out)
        return 0
    if args.hcmd == "express":
        p = _parse_p(ctx, args.p)
        x = _parse_hecke_element(ctx, args.r, args.x)
        poly = hk.express_in_generators(x, p, budget)
        check = poly.evaluate(ctx, p, budget) == x
        _emit(args, {"input": x.to_json(), "polynomial": str(poly),
                     "roundtrip": check}, out)
        return 0 if check else MATH_ERROR
    if args.hcmd == "tn":
        if args.N:
            modulus = PolyA.parse(ctx, args.N).monic()
            elem = hk.script_t(ctx, args.r, modulus, budget)
            label = str(modulus)
        else:
            p = _parse_p(ctx, args.p or "t")
            elem = hk.script_t_prime_power(ctx, args.r, p, args.n)
            label = "%s^%d" % (p, args.n)
        payload = {"modulus": label}
        payload.update(elem.to_json())
        _emit(args, payload, out)
        return 0
    raise HeckeftError("unknown hecke subcommand")


def _cmd_lattice(args, out):
    ctx = _ctx(args)
    if args.lcmd == "snf":
        m = LatticeMatrix.from_json(ctx, json.loads(args.matrix))
        _emit(args, elementary_divisors(m).to_json(), out)
        return 0
    if args.lcmd == "enum":
        budget = budgets.from_env(args.budget)
        text = args.divisors.strip()
        if text.startswith("{"):
            idx = IndexType.from_json(ctx, json.loads(text))
        else:
            idx = IndexType([PolyA.parse(ctx, s).monic() for s in text.split(",")])
        subs = enumerate_sublattices(ctx, args.r, idx, budget)
        payload = {"index": idx.to_json(), "count": len(subs),
                   "lattices": [m.to_json() for m in subs]}
        _emit(args, payload, out)
        return 0
    raise HeckeftError("unknown lattice subcommand")


def _default_M(args, ctx):
    return args.M if args.M else 3 * (ctx.q ** 2 - 1)


def _select_form(ws, name, k=None):
    if name == "g1":
        return ws.g1()
    if name in ("delta", "g2"):
        return ws.delta_form()
    if name == "delta2":
        d = ws.delta_form()
        return (d * d).truncate(ws.M)
    if name == "eisenstein":
        if k is None:
            raise HeckeftError("--k is required for an Eisenstein expansion")
        return ws.eisenstein(k)
    raise HeckeftError("unknown form %r" % name)


def _cmd_expand(args, out):
    ctx = _ctx(args)
    budget = budgets.from_env(args.budget)
    ws = ExpansionContext(ctx, prec=args.prec, M=_default_M(args, ctx),
                          budget=budget)
    f = _select_form(ws, args.form, args.k)
    payload = {"q": ctx.q, "form": args.form, "expansion": f.to_json()}
    if args.hecke:
        p = _parse_p(ctx, args.p)
        tf = ws.hecke_action(f, p)
        payload["p"] = str(p)
        payload["hecke_image"] = tf.to_json()
    _emit(args, payload, out)
    return 0


def _cmd_eigen(args, out):
    ctx = _ctx(args)
    budget = budgets.from_env(args.budget)
    ws = ExpansionContext(ctx, prec=args.prec, M=_default_M(args, ctx),
                          budget=budget)
    f = _select_form(ws, args.form)
    p = _parse_p(ctx, args.p)
    tf = ws.hecke_action(f, p)
    rep = eigen_report(f.truncate(tf.trunc), tf, p)
    payload = {"q": ctx.q, "form": args.form, "p": str(p),
               "weight": f.weight,
               "is_eigenform": rep is not None,
               "eigenvalue": str(rep[0]) if rep else None,
               "rescaled_eigenvalue": str(rep[1]) if rep else None}
    _emit(args, payload, out)
    return 0


def _cmd_nonexample(args, out):
    ctx = _ctx(args)
    if ctx.p == 2:
        expect_zero = True
    else:
        expect_zero = False
    budget = budgets.from_env(args.budget)
    ws = ExpansionContext(ctx, prec=args.prec, M=_default_M(args, ctx),
                          budget=budget)
    got, rhs, tf, f = ws.nonexample_report()
    eig = eigenvalue_of(f.truncate(tf.trunc), tf)
    if expect_zero:
        ok = not got
    else:
        ok = bool(got) and got.agrees(rhs) and eig is None
    payload = {"q": ctx.q, "coefficient": str(got), "closed_form": str(rhs),
               "matches": got.agrees(rhs), "nonzero": bool(got),
               "square_discriminant_eigenform": eig is not None,
               "consistent": ok}
    _emit(args, payload, out)
    return 0 if ok else MATH_ERROR


def _cmd_verify(args, out):
    results = run_all(q=args.q, seed=args.seed, budget_name=args.budget,
                      budget=budgets.from_env(args.budget),
                      modulus=getattr(args, "field_modulus", None))
    rows = [{"check": r.check_id, "description": r.description,
             "status": "PASS" if r.ok else "FAIL", "detail": r.detail}
            for r in results]
    ok = all(r.ok for r in results)
    if args.format == "json":
        _emit(args, {"q": args.q, "seed": args.seed, "budget": args.budget,
                     "all_passed": ok, "checks": rows}, out)
    else:
        width = max(len(r["check"]) for r in rows)
        for r in rows:
            out.write("%-*s  %-4s  %s\n" % (width, r["check"], r["status"],
                                            r["description"]))
        out.write("overall: %s\n" % ("PASS" if ok else "FAIL"))
    return 0 if ok else MATH_ERROR


_DISPATCH = {
    "goss": _cmd_goss,
    "cosets": _cmd_cosets,
    "hecke": _cmd_hecke,
    "lattice": _cmd_lattice,
    "expand": _cmd_expand,
    "eigen": _cmd_eigen,
    "nonexample": _cmd_nonexample,
    "verify": _cmd_verify,
}


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code else 0
    try:
        return _DISPATCH[args.cmd](args, out)
    except BudgetExceededError as exc:
        sys.stderr.write("budget exceeded: %s\n" % exc)
        return USAGE_ERROR
    except (HeckeftError, ValueError, json.JSONDecodeError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return USAGE_ERROR


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
