"""Command line: `hkrlab suite run NAME`, plus evaluators for each module.

Exit codes: 0 success, 1 failed checks or a domain error, 2 usage or parse
error.  Rationals are printed as "num/den" strings.
"""
import argparse
import json
import sys
from fractions import Fraction

from . import genus, hodgepair, holonomy, jacobi, linalg, suites, verbitsky, weights
from .linalg import frac


class ParseError(Exception):
    pass


def rat(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False)


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read JSON from {path}: {e}") from e


def _read_text(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e


def _read_diagram(path):
    try:
        return jacobi.from_sexpr(_read_text(path))
    except jacobi.JacobiError as e:
        raise ParseError(f"{path}: {e}") from e


def _read_matrix(path):
    data = _read_json(path)
    try:
        return [[frac(x) for x in row] for row in data]
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise ParseError(f"{path}: not a matrix of rationals") from e


# -- commands ----------------------------------------------------------------------

def cmd_suite(args):
    report = suites.run_suite(args.name, args.seed)
    print(_dump(report))
    s = report["summary"]
    return 0 if s["fail"] == 0 and s["error"] == 0 else 1


def cmd_genus(args):
    s = genus.named_series(args.name, args.roots, args.degree)
    if args.basis == "elementary":
        terms = genus.to_elementary_basis(s)
        coeffs = {",".join(map(str, k)): rat(v) for k, v in sorted(terms.items())}
    elif args.roots == 1:
        coeffs = {str(e[0]): rat(c) for e, c in s.items}
    else:
        coeffs = {",".join(map(str, e)): rat(c) for e, c in s.items}
    print(_dump({"name": args.name, "roots": args.roots, "degree": args.degree,
                 "basis": args.basis, "coefficients": coeffs}))
    return 0


def cmd_verbitsky(args):
    A = verbitsky.load_model(_read_json(args.model))
    dims = A.cohomological_dims(args.max_degree)
    out = {"n": A.n, "b": A.space.dim, "cohomological_degrees": list(range(0, args.max_degree + 1, 2)),
           "dims": dims}
    print(_dump(out))
    return 0


def cmd_holonomy_solve(args):
    if args.power_equation:
        r = holonomy.check_power_equation(args.kmax)
        print(_dump({"solutions": [list(s) for s in r.solutions], "proof": r.proof,
                     "proof_checked": r.proof_checked}))
        return 0
    if args.n is None:
        raise ParseError("give --n N or --power-equation")
    sols = holonomy.enumerate_chi_solutions(args.n)
    print(_dump({"n": args.n, "solutions": [{"d": d, "partition": p} for d, p in sols]}))
    return 0


def cmd_holonomy_perm(args):
    try:
        blocks = [int(b) for b in args.blocks.split(",")]
    except ValueError as e:
        raise ParseError(f"bad --blocks {args.blocks!r}") from e
    M = holonomy.SymplecticBlockMatrix(_read_matrix(args.matrix), blocks)
    normal = holonomy.is_in_normalizer(M)
    rho, lams = holonomy.induced_permutation(M)
    print(_dump({"in_normalizer": normal, "rho": rho, "lambda": [rat(x) for x in lams]}))
    return 0


def _backend_arg(text):
    t = text.strip()
    if t.startswith("{"):
        try:
            return json.loads(t)
        except json.JSONDecodeError as e:
            raise ParseError(f"bad backend descriptor: {e}") from e
    return t


def cmd_weights_eval(args):
    d = _read_diagram(args.diagram)
    g, m = weights.backend(_backend_arg(args.backend))
    v = weights.evaluate(d, g, m)
    print(_dump({"backend": g.name, "value": v.to_json()}))
    return 0


def cmd_diagram_eval(args):
    d = _read_diagram(args.diagram)
    if isinstance(d, jacobi.DiagramSeries):
        out = {"kind": "series", "terms": len(d), "canonical": jacobi.to_sexpr(d)}
    else:
        out = {"kind": "diagram", "degree": d.degree, "canonical": jacobi.to_sexpr(d)}
    if args.backend:
        g, m = weights.backend(_backend_arg(args.backend))
        out["backend"] = g.name
        out["value"] = weights.evaluate(d, g, m).to_json()
    print(_dump(out))
    return 0


def cmd_diagram_op(args):
    left = _read_diagram(args.left)
    right = _read_diagram(args.right) if args.right else None
    labels = args.label or []
    op = args.op
    binary = {"union", "juxtapose", "pairing", "inner_glue"}
    if op in binary and right is None:
        raise ParseError(f"{op} needs --right")
    need = {"juxtapose": 1, "average": 1, "trace": 1, "relabel": 2, "split": 3,
            "pairing": 1, "inner_glue": 1}
    if len(labels) < need.get(op, 0):
        raise ParseError(f"{op} needs {need[op]} --label arguments")
    D = args.max_degree
    if op == "union":
        res = jacobi.union_product(left, right, D=D)
    elif op == "juxtapose":
        res = jacobi.juxtapose(left, right, labels[0], D=D)
    elif op == "average":
        res = jacobi.average(left, labels[0])
    elif op == "trace":
        res = jacobi.trace(left, labels[0])
    elif op == "relabel":
        res = jacobi.relabel(left, labels[0], labels[1])
    elif op == "split":
        res = jacobi.split(left, labels[0], labels[1], labels[2])
    elif op == "pairing":
        res = jacobi.pairing(left, right, labels, D=D)
    else:
        res = jacobi.inner_glue(left, right, labels, D=D)
    print(_dump({"op": op, "terms": len(res), "result": jacobi.to_sexpr(res)}))
    return 0


def _vec_json(v):
    return [rat(x) for x in v]


def cmd_pair(args):
    model = hodgepair.load_pair_model(_read_json(args.model))
    if args.action == "annihilators":
        R = hodgepair.r_annihilator(model)
        out = {"model": model.name, "dim_R": len(R), "basis_labels": model.mod_labels,
               "R": [_vec_json(v) for v in R]}
        if model.mod_mul is None:
            out["corner_containment"] = hodgepair.corner_containment(model)
        print(_dump(out))
        return 0
    rng = suites._rng(args.seed, model.name)
    if model.alg_mul is None:
        checks = [("corner_containment", "corners inside R", hodgepair.corner_containment(model), "")]
    else:
        checks = suites.pair_checks(model, rng)
    cases = [{"name": n, "status": "pass" if ok else "fail", "details": d, "anchor": a}
             for n, a, ok, d in checks]
    summary = {k: sum(1 for c in cases if c["status"] == k) for k in ("pass", "fail", "error")}
    print(_dump({"suite": f"pair:{model.name}", "seed": args.seed, "cases": cases, "summary": summary}))
    return 0 if summary["fail"] == 0 else 1


# -- parser -------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="hkrlab")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("suite", help="run a named check suite")
    ssub = s.add_subparsers(dest="action", required=True)
    r = ssub.add_parser("run")
    r.add_argument("name", choices=list(suites.SUITES) + ["all"])
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(func=cmd_suite)

    g = sub.add_parser("genus", help="truncated genus series")
    gsub = g.add_subparsers(dest="action", required=True)
    gs = gsub.add_parser("series")
    gs.add_argument("--name", required=True, choices=["ahat", "td", "sqrt_ahat", "exp_half_c1"])
    gs.add_argument("--roots", type=int, default=1)
    gs.add_argument("--degree", type=int, required=True)
    gs.add_argument("--basis", choices=["roots", "elementary"], default="roots")
    gs.set_defaults(func=cmd_genus)

    v = sub.add_parser("verbitsky", help="Verbitsky algebra dimensions")
    vsub = v.add_subparsers(dest="action", required=True)
    vd = vsub.add_parser("dims")
    vd.add_argument("--model", required=True, help='JSON {"gram": [[...]], "n": N}')
    vd.add_argument("--max-degree", type=int, required=True, help="cohomological degree")
    vd.set_defaults(func=cmd_verbitsky)

    h = sub.add_parser("holonomy", help="cover equations and block permutations")
    hsub = h.add_subparsers(dest="action", required=True)
    hs = hsub.add_parser("solve")
    hs.add_argument("--n", type=int)
    hs.add_argument("--power-equation", action="store_true")
    hs.add_argument("--kmax", type=int, default=64)
    hs.set_defaults(func=cmd_holonomy_solve)
    hp = hsub.add_parser("perm")
    hp.add_argument("--matrix", required=True, help="JSON matrix of rationals")
    hp.add_argument("--blocks", required=True, help="comma separated half-dimensions")
    hp.set_defaults(func=cmd_holonomy_perm)

    w = sub.add_parser("weights", help="weight system evaluation")
    wsub = w.add_subparsers(dest="action", required=True)
    we = wsub.add_parser("eval")
    we.add_argument("--diagram", required=True)
    we.add_argument("--backend", required=True, help='gl2, sl2, abelian3 or a JSON descriptor')
    we.set_defaults(func=cmd_weights_eval)

    d = sub.add_parser("diagram", help="Jacobi diagram tools")
    dsub = d.add_subparsers(dest="action", required=True)
    de = dsub.add_parser("eval")
    de.add_argument("--diagram", required=True)
    de.add_argument("--backend")
    de.set_defaults(func=cmd_diagram_eval)
    do = dsub.add_parser("op")
    do.add_argument("op", choices=["union", "juxtapose", "average", "trace", "relabel", "split",
                                   "pairing", "inner_glue"])
    do.add_argument("--left", required=True)
    do.add_argument("--right")
    do.add_argument("--label", action="append")
    do.add_argument("--max-degree", type=int)
    do.set_defaults(func=cmd_diagram_op)

    pr = sub.add_parser("pair", help="HT/HΩ pair models")
    psub = pr.add_subparsers(dest="action", required=True)
    for name in ("suite", "annihilators"):
        x = psub.add_parser(name)
        x.add_argument("--model", required=True, help='JSON {"kind": "torus"|"k3_like"|"synthetic", ...}')
        x.add_argument("--seed", type=int, default=0)
        x.set_defaults(func=cmd_pair)
    return p


DOMAIN_ERRORS = (
    ValueError, ArithmeticError, linalg.LinAlgError,
)


def _error(kind, exc, code):
    print(json.dumps({"error": {"type": kind, "class": type(exc).__name__, "message": str(exc)}}, ensure_ascii=False),
          file=sys.stderr)
    return code


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        return _error("parse", e, 2)
    except DOMAIN_ERRORS as e:
        return _error("domain", e, 1)


if __name__ == "__main__":
    sys.exit(main())
