"""Command-line front end.

Exit codes: 0 success/PASS, 1 check FAIL, 2 usage or parse error,
3 model validation error.  All output is deterministic for fixed inputs;
--jobs is accepted as a parallelism hint and never changes output bytes.
"""

import argparse
import json
import sys

from hv import identities, spanning
from hv.exprs import ElabError, ParseError, elaborate, parse_expr, parse_state
from hv.fock import basis, poincare
from hv.frobenius import ModelError, load_model


def _surface_arg(p):
    p.add_argument("--surface", required=True,
                   help="model file path or builtin:<p2|p1xp1|torus|evenk0>")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallelism hint; output is identical for any value")


def _build_parser():
    ap = argparse.ArgumentParser(prog="hv", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the algebra axioms of a surface model")
    _surface_arg(p)

    p = sub.add_parser("check", help="run identity checks")
    _surface_arg(p)
    p.add_argument("--suite", default="all",
                   help="comma-separated check ids, or 'all'")
    p.add_argument("--level", type=int, default=identities.DEFAULT_N)
    p.add_argument("--index-bound", type=int, default=identities.DEFAULT_B)
    p.add_argument("--kmax", type=int, default=identities.DEFAULT_KMAX)
    p.add_argument("--budget", type=int, default=identities.DEFAULT_BUDGET,
                   help="class-tuple budget for large models (0 = exhaustive)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-seconds", type=float, default=None,
                   help="per-check wall bound; exceeding it reports INCOMPLETE")

    p = sub.add_parser("apply", help="apply an operator expression to a state")
    _surface_arg(p)
    p.add_argument("--expr", required=True)
    p.add_argument("--state", required=True)

    p = sub.add_parser("commutator", help="apply a superbracket to a state")
    _surface_arg(p)
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--state", required=True)

    p = sub.add_parser("span", help="operator-level generation check for one level")
    _surface_arg(p)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("poincare", help="Poincare polynomial of a level piece")
    _surface_arg(p)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("basis", help="list the canonical words of a level piece")
    _surface_arg(p)
    p.add_argument("--n", type=int, required=True)

    return ap


def _load(args):
    model = load_model(args.surface)
    if not args.surface.startswith("builtin:"):
        report = model.validate()
        if not report.ok:
            for line in report.lines():
                print(line)
            raise SystemExit(3)
    return model


def _vector_json(v):
    from hv.frobenius import coeff_str

    return [
        {"coeff": coeff_str(c), "word": [[n, v.model.labels[ci]] for n, ci in wd]}
        for wd, c in v.sorted_terms()
    ]


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (ParseError, ElabError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except ModelError as e:
        print("model error: %s" % e, file=sys.stderr)
        return 3
    except SystemExit as e:
        return e.code


def _dispatch(args):
    if args.command == "validate":
        try:
            model = load_model(args.surface)
        except ModelError as e:
            print("model error: %s" % e, file=sys.stderr)
            return 3
        report = model.validate()
        if args.format == "json":
            print(json.dumps(report.to_json(), indent=2, sort_keys=True))
        else:
            for line in report.lines():
                print(line)
        return 0 if report.ok else 3

    model = _load(args)

    if args.command == "check":
        ids = identities.CHECK_IDS if args.suite == "all" else tuple(
            s.strip() for s in args.suite.split(",") if s.strip())
        for cid in ids:
            if cid not in identities.CHECK_IDS:
                print("error: unknown check id %r (known: %s)"
                      % (cid, ", ".join(identities.CHECK_IDS)), file=sys.stderr)
                return 2
        if args.level < 0 or args.index_bound < 1:
            print("error: need level >= 0 and index bound >= 1", file=sys.stderr)
            return 2
        reports, status = identities.run_suite(
            ids, model, args.level, args.index_bound, args.kmax, args.budget,
            args.seed, args.max_seconds)
        if args.format == "json":
            print(json.dumps(
                {"model": model.name, "status": status,
                 "checks": [r.to_json() for r in reports]},
                indent=2, sort_keys=True))
        else:
            for r in reports:
                print(r.line())
            npass = sum(r.status == "PASS" for r in reports)
            nfail = sum(r.status == "FAIL" for r in reports)
            nskip = sum(r.status == "SKIP" for r in reports)
            ninc = sum(r.status == "INCOMPLETE" for r in reports)
            line = "TOTAL PASS=%d FAIL=%d SKIP=%d" % (npass, nfail, nskip)
            if ninc:
                line += " INCOMPLETE=%d" % ninc
            print(line)
        return status

    if args.command == "apply":
        op = elaborate(parse_expr(args.expr), model)
        v = parse_state(args.state, model)
        out = op.apply(v)
        if args.format == "json":
            print(json.dumps({"state": str(out), "terms": _vector_json(out)},
                             indent=2, sort_keys=True))
        else:
            print(out)
        return 0

    if args.command == "commutator":
        from hv.operators import commutator as brk

        f = elaborate(parse_expr(args.lhs), model)
        g = elaborate(parse_expr(args.rhs), model)
        v = parse_state(args.state, model)
        out = brk(f, g).apply(v)
        if args.format == "json":
            print(json.dumps({"state": str(out), "terms": _vector_json(out)},
                             indent=2, sort_keys=True))
        else:
            print(out)
        return 0

    if args.n < 0:
        print("error: --n must be >= 0", file=sys.stderr)
        return 2

    if args.command == "span":
        if args.n < 1:
            print("error: --n must be >= 1", file=sys.stderr)
            return 2
        report = spanning.check_generation(args.n, model)
        if args.format == "json":
            print(json.dumps(report.to_json(), indent=2, sort_keys=True))
        else:
            print("%s %d/%d" % ("PASS" if report.ok else "FAIL",
                                report.achieved, report.ambient))
        return 0 if report.ok else 1

    if args.command == "poincare":
        coeffs = poincare(args.n, model)
        if args.format == "json":
            print(json.dumps({"model": model.name, "n": args.n, "coefficients": coeffs},
                             indent=2, sort_keys=True))
        else:
            print(",".join(str(c) for c in coeffs))
        return 0

    if args.command == "basis":
        words = basis(args.n, model)
        if args.format == "json":
            print(json.dumps(
                {"model": model.name, "n": args.n,
                 "words": [[[n, model.labels[ci]] for n, ci in wd] for wd in words]},
                indent=2, sort_keys=True))
        else:
            for wd in words:
                txt = "*".join("q(%d,%s)" % (n, model.labels[ci]) for n, ci in wd)
                print(txt + "*vac" if txt else "vac")
        return 0

    raise AssertionError("unhandled command")


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
