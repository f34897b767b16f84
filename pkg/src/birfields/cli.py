"""Command-line front end: expression parsing, dispatch and exact JSON reports.

Exit codes: 0 = verdict reached (including NotIntegrable/Impossible),
1 = input error, 2 = internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .catalog import builtin_catalog
from .errors import BirfieldsError
from .fields import (first_integral_check, lie_bracket, membership,
                     polar_divisor, polar_tangency_check, pullback,
                     wedge_collinear)
from .integrability import adapt_to_fibration, integrability_test, product_flow
from .lie import classify_2dim, derived_series, killing_report, structure_constants, verify_sl2_triple
from .normal_forms import classify_p2, hgamma_relate, normalize_in_borel, reduce_to_TLJH
from .parse import (parse_expr, parse_field, parse_map, print_birat,
                    print_field, print_map, print_scalar)
from .scalars import PLAIN_CONTEXT, Scalar, extend_by_sqrt
from .sl2 import sl2_complete
from .surfaces import P2, SurfaceModel


class InputError(Exception):
    pass


def _surface_of(text: str) -> SurfaceModel:
    t = text.strip().lower()
    if t == "p2":
        return P2
    if t.startswith("f"):
        try:
            return SurfaceModel.fn(int(t[1:]))
        except ValueError:
            pass
    raise InputError(f"unknown surface {text!r} (use p2 or f<n>)")


def _parse_rational_scalar(text: str) -> Scalar:
    v = parse_expr(text)
    if not v.is_constant():
        raise InputError(f"{text!r} is not a constant")
    return v.constant()


def _build_context(args):
    if getattr(args, "extension", None):
        spec = args.extension
        if spec.startswith("d="):
            spec = spec[2:]
        d = _parse_rational_scalar(spec)
        ctx, _ = extend_by_sqrt(d)
        return ctx
    return PLAIN_CONTEXT


def _report(args, payload: dict) -> int:
    if args.json:
        out = json.dumps(payload, indent=2, default=str)
    else:
        out = "\n".join(f"{k}: {v}" for k, v in payload.items())
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return 0


def _field_arg(args, text, surface=None, ctx=None):
    surface = surface or _surface_of(args.surface)
    return parse_field(text, surface, ctx or _build_context(args))


def _divisor_json(D):
    return [{"component": str(p), "multiplicity": m} for p, m in D]


def cmd_bracket(args) -> int:
    surface = _surface_of(args.surface)
    ctx = _build_context(args)
    X = parse_field(args.X, surface, ctx)
    Y = parse_field(args.Y, surface, ctx)
    B = lie_bracket(X, Y)
    return _report(args, {
        "command": "bracket",
        "inputs": [print_field(X), print_field(Y)],
        "result": print_field(B),
    })


def cmd_pullback(args) -> int:
    surface = _surface_of(args.surface)
    ctx = _build_context(args)
    Y = parse_field(args.Y, surface, ctx)
    f = parse_map(args.map, surface, surface, ctx)
    X = pullback(Y, f)
    payload = {
        "command": "pullback",
        "inputs": [print_field(Y), print_map(f)],
        "result": print_field(X),
    }
    if args.check:
        fi = f.inverse()
        back = pullback(X, fi)
        if back != Y:
            raise AssertionError("pullback round trip failed")
        payload["check"] = "round-trip verified"
    return _report(args, payload)


def cmd_collinear(args) -> int:
    surface = _surface_of(args.surface)
    ctx = _build_context(args)
    X = parse_field(args.X, surface, ctx)
    Y = parse_field(args.Y, surface, ctx)
    return _report(args, {
        "command": "collinear",
        "inputs": [print_field(X), print_field(Y)],
        "verdict": wedge_collinear(X, Y),
    })


def cmd_polar(args) -> int:
    X = _field_arg(args, args.X)
    D = polar_divisor(X)
    return _report(args, {
        "command": "polar",
        "inputs": [print_field(X)],
        "divisor": _divisor_json(D),
    })


def cmd_tangency(args) -> int:
    X = _field_arg(args, args.X)
    return _report(args, {
        "command": "tangency",
        "inputs": [print_field(X)],
        "verdict": polar_tangency_check(X),
    })


def cmd_first_integral(args) -> int:
    surface = _surface_of(args.surface)
    ctx = _build_context(args)
    X = parse_field(args.X, surface, ctx)
    F = parse_expr(args.F, ctx)
    return _report(args, {
        "command": "first-integral",
        "inputs": [print_field(X), print_birat(F)],
        "verdict": first_integral_check(X, F),
    })


def cmd_integrable(args) -> int:
    X = _field_arg(args, args.X)
    rep = integrability_test(X, _build_context(args))
    payload = {
        "command": "integrable",
        "inputs": [print_field(X)],
        "verdict": rep.verdict,
    }
    if rep.reason:
        payload["reason"] = rep.reason
    if rep.delta is not None:
        payload["delta"] = str(rep.delta)
    if rep.integrable:
        payload["kappa"] = print_scalar(rep.kappa)
        payload["Q"] = [[str(e) for e in row] for row in rep.Q]
        payload["normal_form"] = {"label": rep.normal_form[0],
                                  "field": print_field(rep.normal_form[1])}
        payload["conjugating_map"] = print_map(rep.conjugating_map)
        if args.check:
            w = pullback(X, rep.conjugating_map)
            if w != rep.normal_form[1]:
                raise AssertionError("regularizer check failed")
            payload["check"] = "witness pullback verified"
    return _report(args, payload)


def cmd_flow(args) -> int:
    X = _field_arg(args, args.X)
    fl = product_flow(X, _build_context(args))
    payload = {
        "command": "flow",
        "inputs": [print_field(X)],
        "flow": fl.mobius_y_texts(),
        "kappa_E": print_scalar(fl.kappa),
    }
    if args.check:
        if not (fl.at_zero_is_identity() and fl.satisfies_group_law()):
            raise AssertionError("flow laws failed")
        payload["check"] = "flow laws verified"
    return _report(args, payload)


def cmd_adapt(args) -> int:
    surface = _surface_of(args.surface)
    ctx = _build_context(args)
    X = parse_field(args.X, surface, ctx)
    F = parse_expr(args.F, ctx)
    psi, vert = adapt_to_fibration(X, F)
    payload = {
        "command": "adapt",
        "inputs": [print_field(X), print_birat(F)],
        "map": print_map(psi),
        "adapted_field": print_field(vert),
    }
    rep = integrability_test(vert, ctx)
    payload["verdict"] = rep.verdict
    if rep.delta is not None:
        payload["delta"] = str(rep.delta)
    return _report(args, payload)


def cmd_classify(args) -> int:
    X = _field_arg(args, args.X, surface=P2)
    res = classify_p2(X, _build_context(args))
    payload = {
        "command": "classify",
        "inputs": [print_field(X)],
        "label": repr(res.label),
        "scale": print_scalar(res.scale),
        "conjugator": print_map(res.conjugator),
    }
    if args.check:
        from .normal_forms import normal_form_field
        w = pullback(X, res.conjugator)
        if w != normal_form_field(res.label, X.surface).scale(res.scale):
            raise AssertionError("classification witness failed")
        payload["check"] = "witness pullback verified"
    return _report(args, payload)


def cmd_normalize(args) -> int:
    surface = _surface_of(args.surface)
    if not surface.is_fn():
        raise InputError("normalize works on Hirzebruch charts (use --surface f<n>)")
    X = _field_arg(args, args.X, surface=surface)
    res = normalize_in_borel(X, surface.n, _build_context(args))
    payload = {
        "command": "normalize",
        "inputs": [print_field(X)],
        "label": repr(res.label),
        "scale": print_scalar(res.scale),
        "conjugator": print_map(res.conjugator),
    }
    if args.check:
        from .normal_forms import normal_form_field
        w = pullback(X, res.conjugator)
        if w != normal_form_field(res.label, surface).scale(res.scale):
            raise AssertionError("normalization witness failed")
        payload["check"] = "witness pullback verified"
    return _report(args, payload)


def cmd_reduce(args) -> int:
    surface = _surface_of(args.surface)
    if not surface.is_fn():
        raise InputError("reduce works on Hirzebruch charts (use --surface f<n>)")
    X = _field_arg(args, args.X, surface=surface)
    res = normalize_in_borel(X, surface.n, _build_context(args))
    red = reduce_to_TLJH(res)
    payload = {
        "command": "reduce",
        "inputs": [print_field(X)],
        "first_stage": repr(res.label),
        "label": repr(red.label),
        "scale": print_scalar(red.scale),
        "conjugator": print_map(res.conjugator),
        "residual_reduction": print_map(red.residual_reduction),
    }
    if args.check:
        from .normal_forms import normal_form_field
        mid = normal_form_field(res.label, surface)
        w = pullback(mid, red.residual_reduction)
        if w != normal_form_field(red.label, surface):
            raise AssertionError("reduction witness failed")
        payload["check"] = "witness pullback verified"
    return _report(args, payload)


def cmd_hgamma(args) -> int:
    gamma = _parse_rational_scalar(args.gamma)
    M = [[args.a, args.b], [args.c, args.d]]
    gamma2, mp, verified = hgamma_relate(gamma, M)
    payload = {
        "command": "hgamma",
        "inputs": {"gamma": print_scalar(gamma), "matrix": M},
        "gamma_prime": print_scalar(gamma2),
        "map": print_map(mp),
        "verified": verified,
    }
    if args.check and not verified:
        raise AssertionError("hgamma transport verification failed")
    return _report(args, payload)


def cmd_algebra(args) -> int:
    from .errors import NotClosed, NotIndependent
    surface = _surface_of(args.surface)
    ctx = _build_context(args)
    fields = [parse_field(t, surface, ctx) for t in args.fields]
    try:
        pres = structure_constants(fields)
    except NotClosed as e:
        return _report(args, {
            "command": f"algebra {args.what}",
            "inputs": [print_field(X) for X in fields],
            "verdict": "NotClosed",
            "witness": print_field(e.witness),
        })
    except NotIndependent:
        return _report(args, {
            "command": f"algebra {args.what}",
            "inputs": [print_field(X) for X in fields],
            "verdict": "NotIndependent",
        })
    payload = {
        "command": f"algebra {args.what}",
        "inputs": [print_field(X) for X in fields],
        "verdict": "ok",
        "dim": pres.dim,
    }
    if args.what == "structure":
        payload["constants"] = [[[print_scalar(c) for c in row]
                                 for row in plane] for plane in pres.constants]
    elif args.what == "derived":
        dims, _ = derived_series(pres)
        payload["derived_dims"] = dims
        payload["solvable"] = dims[-1] == 0
    elif args.what == "killing":
        kr = killing_report(pres)
        payload["killing"] = [[print_scalar(c) for c in row] for row in kr.matrix]
        payload["det"] = print_scalar(kr.det)
        payload["is_semisimple"] = kr.is_semisimple
        payload["is_solvable"] = kr.is_solvable
    else:
        raise InputError(f"unknown algebra subcommand {args.what!r}")
    return _report(args, payload)


def cmd_sl2_verify(args) -> int:
    surface = _surface_of(args.surface)
    ctx = _build_context(args)
    X, Y, Z = (parse_field(t, surface, ctx) for t in (args.X, args.Y, args.Z))
    return _report(args, {
        "command": "sl2-verify",
        "inputs": [print_field(F) for F in (X, Y, Z)],
        "verdict": verify_sl2_triple(X, Y, Z),
    })


def cmd_sl2_complete(args) -> int:
    surface = _surface_of(args.surface)
    ctx = _build_context(args)
    X = parse_field(args.X, surface, ctx)
    Y = parse_field(args.Y, surface, ctx)
    c2 = _parse_rational_scalar(args.c2) if args.c2 else Scalar.zero()
    v = sl2_complete(X, Y, c2=c2)
    payload = {
        "command": "sl2-complete",
        "inputs": [print_field(X), print_field(Y)],
        "result": v.result,
    }
    if v.completed:
        payload["Z"] = print_field(v.Z)
        payload["model"] = v.model if v.model_n is None else f"{v.model}({v.model_n})"
        payload["witness"] = print_map(v.witness)
        payload["model_triple"] = [print_field(F) for F in v.model_triple]
        if args.check:
            if not verify_sl2_triple(*v.triple):
                raise AssertionError("completed triple fails the relations")
            if not verify_sl2_triple(*v.model_triple):
                raise AssertionError("model triple fails the relations")
            payload["check"] = "triples verified"
    else:
        payload["reason"] = v.reason
    return _report(args, payload)


def cmd_classify2(args) -> int:
    surface = _surface_of(args.surface)
    ctx = _build_context(args)
    X = parse_field(args.X, surface, ctx)
    Y = parse_field(args.Y, surface, ctx)
    res = classify_2dim(X, Y)
    payload = {
        "command": "classify2",
        "inputs": [print_field(X), print_field(Y)],
        "label": repr(res.label),
        "chain": print_map(res.chain),
        "landed": [print_field(F) for F in res.landed],
    }
    if res.target_surface is not None:
        payload["target_surface"] = repr(res.target_surface)
    if args.check:
        from .lie import _spans_equal
        if not _spans_equal(list(res.landed), res.model_basis()):
            raise AssertionError("landed span differs from the model")
        payload["check"] = "landing verified"
    return _report(args, payload)


def cmd_catalog(args) -> int:
    n = args.n
    pres = builtin_catalog(args.name, n)
    dims, _ = derived_series(pres)
    kr = killing_report(pres)
    payload = {
        "command": "catalog",
        "name": pres.name or args.name,
        "dim": pres.dim,
        "derived_dims": dims,
        "is_semisimple": kr.is_semisimple,
        "is_solvable": kr.is_solvable,
    }
    if pres.basis is not None:
        payload["basis"] = [print_field(F) for F in pres.basis]
    return _report(args, payload)


def cmd_membership(args) -> int:
    surface = _surface_of(args.surface)
    ctx = _build_context(args)
    X = parse_field(args.X, surface, ctx)
    ok, coeffs = membership(X, args.space, surface.n if surface.is_fn() else None)
    payload = {
        "command": "membership",
        "inputs": [print_field(X)],
        "space": args.space,
        "verdict": ok,
    }
    if ok:
        payload["coefficients"] = [print_scalar(c) for c in coeffs]
    return _report(args, payload)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--surface", default="f0", help="p2 or f<n> (default f0)")
    common.add_argument("--extension", default=None, metavar="d=<rational>",
                        help="activate the quadratic extension sqrt(d)")
    common.add_argument("--json", action="store_true", help="JSON output")
    common.add_argument("--text", dest="json", action="store_false",
                        help="plain text output (default)")
    common.add_argument("--check", action="store_true",
                        help="re-verify witnesses before printing")
    common.add_argument("--out", default=None, help="write the report to a file")
    ap = argparse.ArgumentParser(
        prog="birfields",
        description="exact decision procedures for birational integrability "
                    "of rational vector fields on rational surfaces")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, *specs):
        p = sub.add_parser(name, parents=[common])
        for spec in specs:
            p.add_argument(**spec)
        p.set_defaults(fn=fn)
        return p

    add("bracket", cmd_bracket, dict(dest="X"), dict(dest="Y"))
    add("pullback", cmd_pullback, dict(dest="Y"), dict(dest="map"))
    add("collinear", cmd_collinear, dict(dest="X"), dict(dest="Y"))
    add("polar", cmd_polar, dict(dest="X"))
    add("tangency", cmd_tangency, dict(dest="X"))
    add("first-integral", cmd_first_integral, dict(dest="X"), dict(dest="F"))
    add("integrable", cmd_integrable, dict(dest="X"))
    add("flow", cmd_flow, dict(dest="X"))
    add("adapt", cmd_adapt, dict(dest="X"), dict(dest="F"))
    add("classify", cmd_classify, dict(dest="X"))
    add("normalize", cmd_normalize, dict(dest="X"))
    add("reduce", cmd_reduce, dict(dest="X"))
    p = add("hgamma", cmd_hgamma)
    p.add_argument("gamma")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("c", type=int)
    p.add_argument("d", type=int)
    p = add("algebra", cmd_algebra)
    p.add_argument("what", choices=["structure", "derived", "killing"])
    p.add_argument("fields", nargs="+")
    add("sl2-verify", cmd_sl2_verify, dict(dest="X"), dict(dest="Y"), dict(dest="Z"))
    p = add("sl2-complete", cmd_sl2_complete)
    p.add_argument("X")
    p.add_argument("Y")
    p.add_argument("--c2", default=None, help="pick the non-fibered branch")
    add("classify2", cmd_classify2, dict(dest="X"), dict(dest="Y"))
    p = add("catalog", cmd_catalog)
    p.add_argument("name")
    p.add_argument("--n", type=int, default=None)
    p = add("membership", cmd_membership)
    p.add_argument("X")
    p.add_argument("space", choices=["AutP2", "AutFn", "BorelBn"])
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (InputError, BirfieldsError) as e:
        print(json.dumps({"error": type(e).__name__, "message": str(e)})
              if args.json else f"error: {type(e).__name__}: {e}",
              file=sys.stderr)
        return 1
    except AssertionError as e:
        print(f"internal invariant violation: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
