"""The ``chowkit`` command line.

Exit codes: 0 when everything checked holds, 1 when some check fails,
2 for usage and manifest errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .chow import ChowFormError, PreconditionError, chow_form, chow_weight, verify_lower_bound
from .constants import ParamSet, constants_A, identity_checks, is_mandatory, log_T, substituted_B, sweep_params
from .heights import (Place, PlaceWeightSystem, QParam, abs_value, height_point, height_polys,
                      relevant_places, twisted_height)
from .hilbert_weight import (PlacePreconditionError, TIE_ORDERS, hilbert_weight, verify_E_lower_bound,
                             verify_ef_inequality)
from .ideal import Variety
from .lognum import LogNum
from .manifest import Manifest, ManifestError, default_manifest_path, load_json, validate_manifest
from .nevanlinna import DegenerateCurveError, RationalCurve, default_nodes, smt_check
from .poly import PolySyntaxError, as_fraction, parse_poly
from .subspace import InstanceError, embed_phi, subspace_lhs, verify_lemma_3_30
from .suite import fmt, parse_selection, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fracs(text: str) -> list:
    try:
        return [as_fraction(t) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational list {text!r}: {exc}") from None


def _ints(text: str) -> list:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad index list {text!r}") from None


def _per_place(text: str, conv) -> dict:
    """Parse ``"inf:1,0;2:0,1"`` into {Place: conv(values)}."""
    out = {}
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        key, _, vals = chunk.partition(":")
        try:
            out[Place.parse(key.strip())] = conv(vals)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return out


def _manifest(args) -> Manifest:
    return Manifest.load(args.manifest) if args.manifest else Manifest.default()


def _variety(args) -> Variety:
    man = _manifest(args)
    if args.variety not in man.names("varieties"):
        raise UsageError(f"unknown variety {args.variety!r}; known: {', '.join(man.names('varieties'))}")
    return man.variety(args.variety)


def _emit(args, payload: dict, lines: list) -> None:
    if getattr(args, "output", "text") == "json":
        print(json.dumps(fmt(payload), indent=2))
    else:
        print("\n".join(lines))


def _json_file(path: str) -> dict:
    doc, diags = load_json(path)
    if diags:
        raise ManifestError(diags)
    return doc


# ---------------------------------------------------------------------------
# commands


def cmd_run(args) -> int:
    man = _manifest(args)
    try:
        sel = parse_selection(args.select)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep = run_suite(man, sel, jobs=args.jobs)
    text = rep.to_json(timing=args.timing) if args.output == "json" else rep.to_text()
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_FAIL if rep.failed else EXIT_OK


def cmd_validate(args) -> int:
    diags = validate_manifest(args.path)
    for d in diags:
        print(d)
    if not diags:
        print("ok")
    return EXIT_USAGE if diags else EXIT_OK


def cmd_chow_form(args) -> int:
    X = _variety(args)
    F = chow_form(X)
    n, D = X.dim_degree()
    _emit(args, {"variety": args.variety, "dim": n, "degree": D, "blocks": F.blocks, "width": F.width,
                 "chow_form": F.render()},
          [f"{args.variety}: dim {n}, degree {D}", F.render()])
    return EXIT_OK


def cmd_chow_weight(args) -> int:
    X = _variety(args)
    e = chow_weight(chow_form(X), _fracs(args.weights))
    _emit(args, {"variety": args.variety, "weights": _fracs(args.weights), "e": e}, [f"e = {e}"])
    return EXIT_OK


def cmd_verify_lb(args) -> int:
    X = _variety(args)
    idx = _ints(args.indices)
    if args.m is not None and args.m != len(idx) - 1:
        raise UsageError(f"--m {args.m} does not match {len(idx)} indices")
    rep = verify_lower_bound(X, _fracs(args.weights), idx)
    _emit(args, {"e": rep.e, "bound": rep.bound, "holds": rep.holds, "margin": rep.margin,
                 "replacement": rep.replacement.c_matrix, "dims": rep.replacement.dims},
          [f"e = {rep.e}", f"bound = {rep.bound}", f"holds = {rep.holds}",
           "replacement rows: " + "; ".join(",".join(map(str, r)) for r in rep.replacement.c_matrix)])
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_verify_ef(args) -> int:
    X = _variety(args)
    rep = verify_ef_inequality(X, args.u, _fracs(args.weights))
    _emit(args, {"u": rep.u, "S": rep.S, "H": rep.H, "e": rep.e, "lhs": rep.lhs, "rhs": rep.rhs,
                 "holds": rep.holds, "defect": rep.defect},
          [f"S = {rep.S}, H = {rep.H}, e = {rep.e}", f"lhs = {rep.lhs}", f"rhs = {rep.rhs}",
           f"holds = {rep.holds}"])
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_verify_elb(args) -> int:
    X = _variety(args)
    weights = _per_place(args.weights_per_place, _fracs)
    idx = _per_place(args.indices_per_place, _ints)
    if args.places:
        wanted = {Place.parse(p.strip()) for p in args.places.split(",") if p.strip()}
        if wanted != set(weights) | set(idx):
            raise UsageError("--places does not match the places in the weight and index lists")
    rep = verify_E_lower_bound(X, PlaceWeightSystem(weights), idx, args.m)
    per = {str(v): {"e": r.e, "bound": r.bound, "holds": r.holds} for v, r in rep.per_place.items()}
    _emit(args, {"E": rep.E, "bound": rep.bound, "holds": rep.holds, "per_place": per},
          [f"E = {rep.E}", f"bound = {rep.bound}", f"holds = {rep.holds}"]
          + [f"  {v}: e = {r['e']} >= {r['bound']}: {r['holds']}" for v, r in per.items()])
    return EXIT_OK if rep.holds else EXIT_FAIL


def _paramset_from(doc: dict) -> ParamSet:
    keys = ("n", "m", "d", "Delta", "s", "C", "N")
    try:
        return ParamSet(**{k: int(doc[k]) for k in keys if k in doc}, delta=as_fraction(doc["delta"]))
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad parameter set: {exc}") from None


def cmd_verify_identities(args) -> int:
    if args.sweep:
        params = sweep_params()
    elif args.params:
        params = [_paramset_from(_json_file(args.params))]
    else:
        raise UsageError("give --params FILE or --sweep")
    rows, failed = [], False
    for p in params:
        for chk in identity_checks(p):
            mand = is_mandatory(chk)
            failed |= mand and not chk.holds
            rows.append(dict(chk.as_dict(), params=p.as_dict(), mandatory=mand))
    lines = [f"{'PASS' if r['holds'] else 'FAIL'}  {r['params']}  {r['name']}" for r in rows]
    _emit(args, {"checks": rows}, lines)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_hilbert_weight(args) -> int:
    X = _variety(args)
    S, basis = hilbert_weight(X, args.u, _fracs(args.weights), tie=args.tie)
    _emit(args, {"S": S, "H": basis.size, "basis": basis.monomials},
          [f"S = {S}", f"H = {basis.size}", "basis: " + " ".join(map(str, basis.monomials))])
    return EXIT_OK


def cmd_height(args) -> int:
    if args.point:
        h = height_point(_fracs(args.point))
        _emit(args, {"h": h}, [f"h = {h.render()} ~ {float(h):.12g}"])
        return EXIT_OK
    doc = _json_file(args.polys)
    fs = [parse_poly(p, doc["vars"]) for p in doc["polys"]]
    h, h1 = height_polys(fs)
    _emit(args, {"h": h, "h1": h1}, [f"h = {h.render()} ~ {float(h):.12g}",
                                     f"h1 = {h1.render()} ~ {float(h1):.12g}"])
    return EXIT_OK


def _twisted_float(y: list, logQ: float, system: PlaceWeightSystem) -> float:
    w = len(y)
    total = 0.0
    for v in sorted(set(relevant_places(y)) | set(system.weights)):
        c = system.at(v, w)
        total += max(float(LogNum.log(abs_value(t, v))) + float(ci) * logQ
                     for t, ci in zip(y, c) if t)
    return total


def cmd_twisted_height(args) -> int:
    y = _fracs(args.point)
    doc = _json_file(args.weights_manifest)
    system = PlaceWeightSystem({k: [as_fraction(x) for x in v] for k, v in doc.items()})
    text = args.logQ.strip()
    if text.startswith("log(") and text.endswith(")"):
        inner = text[4:-1]
        base, _, expo = inner.partition("^")
        val = twisted_height(y, QParam(as_fraction(base), as_fraction(expo or 1)), system)
        _emit(args, {"log_twisted_height": val}, [f"log H = {val.render()} ~ {float(val):.12g}"])
    else:
        val = _twisted_float(y, float(text), system)
        _emit(args, {"log_twisted_height": val}, [f"log H ~ {val:.12g}"])
    return EXIT_OK


def cmd_constants(args) -> int:
    p = _paramset_from(_json_file(args.params))
    A = constants_A(p)
    B = substituted_B(p)
    payload = {"params": p.as_dict(), "A2": A["A2"], "logA1_printed": A["logA1_printed"].render(),
               "logA1_derived": A["logA1_derived"].render(), "logA3": A["logA3"].render(), "H": A["H"],
               "B2'": B["B2"], "logB1'": B["logB1"].render(), "logB3'": B["logB3"].render(),
               "logT": log_T(p).render()}
    _emit(args, payload, [f"{k} = {fmt(v)}" for k, v in payload.items()])
    return EXIT_OK


def cmd_subspace_check(args) -> int:
    man = _manifest(args)
    name = args.instance or (man.names("instances") or [None])[0]
    if name not in man.names("instances"):
        raise UsageError(f"unknown instance {name!r}")
    inst = man.instance(name)
    x = _fracs(args.point)
    lhs = subspace_lhs(inst, x, all_indices=args.all_indices)
    payload = {"lhs": lhs.lhs, "rhs": lhs.rhs, "is_solution": lhs.is_solution, "height_gate": lhs.height_gate,
               "h_x": lhs.h_x, "zero_terms": lhs.zero_terms}
    lines = [f"lhs = {lhs.lhs.render() if lhs.lhs is not None else '-inf'}", f"rhs = {lhs.rhs.render()}",
             f"is_solution = {lhs.is_solution}", f"height_gate = {lhs.height_gate}"]
    ok = True
    if args.lemma:
        try:
            rep = verify_lemma_3_30(inst, x, emb=embed_phi(inst))
            payload.update(twisted=rep.log_twisted, rhs_bound=rep.rhs_bound, holds_bound=rep.holds_bound,
                           E=rep.E, rhs_conclusion=rep.rhs_conclusion, holds_conclusion=rep.holds_conclusion)
            lines += [f"twisted height bound holds = {rep.holds_bound}",
                      f"conclusion holds = {rep.holds_conclusion} (E = {rep.E})"]
            ok = rep.holds_bound and rep.holds_conclusion
        except InstanceError as exc:
            payload["lemma"] = f"hypotheses not met: {exc}"
            lines.append(payload["lemma"])
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_smt(args) -> int:
    f = RationalCurve.parse(args.curve)
    doc = _json_file(args.targets)
    names = doc["vars"]
    Qs = [parse_poly(p, names) for p in doc["polys"]]
    V = Variety([parse_poly(g, names) for g in doc.get("variety", [])], names)
    radii = [float(r) for r in args.radii.split(",")]
    rep = smt_check(V, f, Qs, args.m, args.eps, radii, args.nodes or default_nodes())
    rows = [{"r": r.r, "T": r.T, "lhs": r.lhs, "lhs_top_size_only": r.lhs_top_only, "rhs": r.rhs,
             "holds": r.holds, "N_sum": r.N_sum, "counting_lhs": r.cor_lhs, "counting_holds": r.cor_holds}
            for r in rep.rows]
    lines = [f"r={r['r']:g}  lhs={r['lhs']:.9f}  rhs={r['rhs']:.9f}  holds={r['holds']}" for r in rows]
    _emit(args, {"n": rep.n, "m": rep.m, "Delta": rep.Delta, "holds": rep.holds,
                 "counting_holds": rep.corollary_holds, "subsets": rep.subsets, "rows": rows,
                 "flags": rep.flags}, lines + rep.flags)
    return EXIT_OK if rep.holds else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chowkit", description="Exact checks for Chow weights, heights "
                                "and second-main-theorem inequalities.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, manifest=True, variety=False):
        sp.add_argument("--output", choices=["text", "json"], default="text")
        if manifest:
            sp.add_argument("--manifest", help=f"manifest JSON (default: {default_manifest_path().name})")
        if variety:
            sp.add_argument("--variety", required=True)

    sp = sub.add_parser("run", help="run verification suites from a manifest")
    common(sp)
    sp.add_argument("--select", help="comma-separated suite names (default: all)")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--timing", action="store_true", help="include per-record runtimes in JSON")
    sp.add_argument("--out", help="write the report here instead of stdout")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("validate", help="validate a manifest")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("chow-form")
    common(sp, variety=True)
    sp.set_defaults(func=cmd_chow_form)

    sp = sub.add_parser("chow-weight")
    common(sp, variety=True)
    sp.add_argument("--weights", required=True)
    sp.set_defaults(func=cmd_chow_weight)

    sp = sub.add_parser("verify", help="single inequality checks")
    vsub = sp.add_subparsers(dest="what", required=True)
    v = vsub.add_parser("lb", help="Chow weight lower bound")
    common(v, variety=True)
    v.add_argument("--weights", required=True)
    v.add_argument("--indices", required=True)
    v.add_argument("--m", type=int)
    v.set_defaults(func=cmd_verify_lb)
    v = vsub.add_parser("ef", help="Hilbert weight against Chow weight")
    common(v, variety=True)
    v.add_argument("--u", type=int, required=True)
    v.add_argument("--weights", required=True)
    v.set_defaults(func=cmd_verify_ef)
    v = vsub.add_parser("elb", help="lower bound for the place-summed normalized Chow weight")
    common(v, variety=True)
    v.add_argument("--places")
    v.add_argument("--weights-per-place", required=True, help='e.g. "inf:1/2,0,1/2;2:0,0,0"')
    v.add_argument("--indices-per-place", required=True, help='e.g. "inf:0,2;2:0,2"')
    v.add_argument("--m", type=int, required=True)
    v.set_defaults(func=cmd_verify_elb)
    v = vsub.add_parser("identities", help="constant identities and estimates")
    common(v, manifest=False)
    v.add_argument("--params")
    v.add_argument("--sweep", action="store_true")
    v.set_defaults(func=cmd_verify_identities)

    sp = sub.add_parser("hilbert-weight")
    common(sp, variety=True)
    sp.add_argument("--u", type=int, required=True)
    sp.add_argument("--weights", required=True)
    sp.add_argument("--tie", choices=sorted(TIE_ORDERS), default="grevlex")
    sp.set_defaults(func=cmd_hilbert_weight)

    sp = sub.add_parser("height")
    common(sp, manifest=False)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--point")
    g.add_argument("--polys", help='JSON file {"vars": [...], "polys": [...]}')
    sp.set_defaults(func=cmd_height)

    sp = sub.add_parser("twisted-height")
    common(sp, manifest=False)
    sp.add_argument("--point", required=True)
    sp.add_argument("--logQ", required=True, help='exact "log(B)" or "log(B^E)", or a decimal')
    sp.add_argument("--weights-manifest", required=True, help='JSON {"inf": [...], "2": [...]}')
    sp.set_defaults(func=cmd_twisted_height)

    sp = sub.add_parser("constants")
    common(sp, manifest=False)
    sp.add_argument("--params", required=True)
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("subspace-check")
    common(sp)
    sp.add_argument("--instance")
    sp.add_argument("--point", required=True)
    sp.add_argument("--all-indices", action="store_true", help="sum over all m+1 polynomials")
    sp.add_argument("--lemma", action="store_true", help="also run the twisted-height pipeline")
    sp.set_defaults(func=cmd_subspace_check)

    sp = sub.add_parser("smt")
    common(sp, manifest=False)
    sp.add_argument("--curve", required=True)
    sp.add_argument("--targets", required=True,
                    help='JSON {"vars": [...], "polys": [...], "variety": [generators]}')
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--radii", default="2,4,8,16")
    sp.add_argument("--nodes", type=int)
    sp.set_defaults(func=cmd_smt)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ManifestError as exc:
        print(f"manifest error:\n{exc}", file=sys.stderr)
    except (UsageError, PolySyntaxError, ValueError, KeyError) as exc:
        if isinstance(exc, (PreconditionError, PlacePreconditionError, InstanceError,
                            DegenerateCurveError, ChowFormError)):
            print(f"precondition failed: {exc}", file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
