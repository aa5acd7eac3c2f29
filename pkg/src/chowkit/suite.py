"""Manifest-driven verification suites and their deterministic reports."""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Callable, Sequence

from .chow import (ChowFormError, PreconditionError, chow_form, chow_form_eliminate,
                   verify_lower_bound)
from .constants import ParamSet, constants_A, constants_B, identity_checks, is_mandatory, sweep_params
from .heights import (INF, Place, check_norm_inequalities, height_point, height_point_places,
                      height_polys, product_formula_check, select_weight_tuple, selection_contract_holds,
                      weight_grid_size_bound)
from .hilbert_weight import hilbert_weight, hilbert_weight_exhaustive, verify_ef_inequality
from .ideal import empty_intersection_check, monomials_of_degree
from .lognum import LogNum
from .manifest import SUITES, Manifest
from .nevanlinna import (counting, counting_oracle, default_nodes, fmt_check,
                         smt_check, theorem_b_check)
from .poly import MultiPoly, as_fraction, parse_poly
from .subspace import InstanceError, embed_phi, verify_height_bounds, verify_lemma_3_30

ANCHORS = {
    "thm14": "e_Y(c) >= D/(m-n+1) * sum_{i in I} c_i",
    "ef": "S_X(u,c)/(uH) >= e_X(c)/((N+1)D) - (2N+1) D max(c)/u",
    "ef.defect": "defect e/((N+1)D) - S/(uH) weakly decreasing in u",
    "hilbert": "greedy Hilbert weight = max over all monomial bases",
    "chow.coherence": "Chow form by elimination proportional to the direct constructor",
    "chow.sampling": "F_X(u) = 0 iff X meets the hyperplanes u",
    "heights.product_formula": "prod_v |x|_v = 1",
    "heights.norm": "|f(x)|_v <= ||f||_{v,1} ||x||_v^D and h(f(x)) <= D h(x) + h1(f)",
    "heights.point": "h(x) = log max |x_i| for coprime integer x",
    "heights.polys": "h and h1 of a polynomial system",
    "constants.A": "A_1 (both readings), A_2, A_3, H",
    "constants.B": "B_1, B_2, B_3",
    "constants.identity": "substituted B constants against the A constants",
    "lemma315": "selection contract: c >= 0, sum c = 1, A_j <= -c_j (1-theta) Lambda",
    "lemma330.embedding": "Y = phi(X): dim n, degree <= d Delta^n, R+1 <= C(m+1)s",
    "lemma330.heights": "h1(1,g) <= 6 Delta^2 Cns H and h(Y) <= 25 n^2 d Delta^(n+2) Cs H",
    "lemma330.bound": "log H_{Q,c}(y) <= h1(1,g) + log Q/(alpha + delta/2)",
    "lemma330.conclusion": "log H_{Q,c}(y) <= (E_Y(c) - delta/(2(alpha+1)^2)) log Q",
    "nevanlinna.fmt": "Delta T_f(r) - N(r) - m(r) constant in r",
    "nevanlinna.smt": "max_K sum log-ratios <= (Delta (m-n+1)(n+1) + eps) T_f(r)",
    "nevanlinna.corollary": "(q - (m-n+1)(n+1) - eps) T_f(r) <= sum N_{Q_j(f)}(r)/deg Q_j",
    "nevanlinna.theorem_b": "max over independent K <= (N+1) T - N_W + S_f, S_f ~ kappa log r + c",
}


def fmt(x):
    """JSON-ready value: exact rational strings where possible, decimal strings otherwise."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, (int, Fraction)):
        return str(x)
    if isinstance(x, LogNum):
        return {"log": x.render(), "approx": format(float(x), ".15g")}
    if isinstance(x, float):
        return format(x, ".15g")
    if isinstance(x, Place):
        return str(x)
    if isinstance(x, dict):
        return {str(k): fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [fmt(v) for v in x]
    if hasattr(x, "render"):
        return x.render()
    return str(x)


@dataclass
class Record:
    suite: str
    name: str
    anchor: str
    status: str  # pass, fail, skip
    values: dict = field(default_factory=dict)
    margin: object = None
    note: str = ""
    mandatory: bool = True
    runtime: float = 0.0

    def as_dict(self, timing: bool = False) -> dict:
        d = {"suite": self.suite, "name": self.name, "anchor": self.anchor, "status": self.status,
             "mandatory": self.mandatory, "values": fmt(self.values), "margin": fmt(self.margin),
             "note": self.note}
        if timing:
            d["runtime"] = format(self.runtime, ".3f")
        return d


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _frac_list(xs) -> list:
    return [as_fraction(x) for x in xs]


# ---------------------------------------------------------------------------
# suites; each case function returns a list of records


def case_thm14(man: Manifest, case: dict) -> list:
    Y = man.variety(case["variety"])
    c = _frac_list(case["weights"])
    idx = list(case["indices"])
    name = f"{case['variety']} c=({','.join(map(str, c))}) I={idx}"
    try:
        rep = verify_lower_bound(Y, c, idx)
    except PreconditionError as exc:
        return [Record("thm14", name, ANCHORS["thm14"], "fail", note=str(exc))]
    ok = rep.holds
    note = ""
    if case.get("expect_equality"):
        ok = ok and rep.e == rep.bound
        note = "equality expected"
    vals = {"e": rep.e, "bound": rep.bound, "n": rep.dim, "D": rep.degree, "m": rep.m,
            "replacement": rep.replacement.c_matrix}
    return [Record("thm14", name, ANCHORS["thm14"], _status(ok), vals, rep.margin, note)]


def case_ef(man: Manifest, case: dict) -> list:
    X = man.variety(case["variety"])
    c = _frac_list(case["weights"])
    n, D = X.dim_degree()
    us = case.get("u") or list(range(D + 1, D + 5))
    out, defects = [], []
    for u in us:
        rep = verify_ef_inequality(X, u, c)
        defects.append(rep.defect)
        name = f"{case['variety']} u={u} c=({','.join(map(str, c))})"
        vals = {"S": rep.S, "H": rep.H, "e": rep.e, "lhs": rep.lhs, "rhs": rep.rhs, "defect": rep.defect}
        out.append(Record("ef", name, ANCHORS["ef"], _status(rep.holds), vals, rep.lhs - rep.rhs))
    steps = [b <= a for a, b in zip(defects, defects[1:])]
    out.append(Record("ef", f"{case['variety']} c=({','.join(map(str, c))}) defect trend",
                      ANCHORS["ef.defect"], _status(all(steps)),
                      {"defects": defects, "decreasing_steps": sum(steps), "steps": len(steps)},
                      mandatory=False, note="reported; aggregated across cases"))
    return out


def case_hilbert(man: Manifest, case: dict) -> list:
    X = man.variety(case["variety"])
    u = int(case["u"])
    c = _frac_list(case["weights"])
    name = f"{case['variety']} u={u} c=({','.join(map(str, c))})"
    S1, basis = hilbert_weight(X, u, c, tie="grevlex")
    S2, _ = hilbert_weight(X, u, c, tie="lex")
    H = basis.size
    nmon = sum(1 for _ in monomials_of_degree(X.nvars, u))
    vals = {"S": S1, "S_lex_ties": S2, "H": H, "monomials": nmon, "basis": basis.monomials}
    if H > 6 or nmon > 15:
        ok = S1 == S2 and basis.is_valid()
        return [Record("hilbert", name, ANCHORS["hilbert"], "skip" if ok else "fail", vals,
                       note="outside the exhaustive-oracle range; tie-break agreement only")]
    S_ex = hilbert_weight_exhaustive(X, u, c)
    vals["S_exhaustive"] = S_ex
    ok = S1 == S_ex == S2 and basis.is_valid()
    return [Record("hilbert", name, ANCHORS["hilbert"], _status(ok), vals, S1 - S_ex)]


def _hyperplane_poly(row, nvars) -> MultiPoly:
    p = MultiPoly.zero(nvars)
    for j, a in enumerate(row):
        if a:
            p = p + MultiPoly.var(j, nvars).scale(a)
    return p


def _through_point(rng: random.Random, p: Sequence[Fraction]) -> list:
    """A random small-integer hyperplane vanishing at p."""
    while True:
        row = [Fraction(rng.randint(-3, 3)) for _ in p]
        k = next((j for j, t in enumerate(p) if t != 0), None)
        s = sum(a * t for a, t in zip(row, p))
        row[k] -= s / p[k]
        if any(row):
            return row


def case_chow(man: Manifest, case: dict) -> list:
    kind = case.get("kind", "coherence")
    X = man.variety(case["variety"])
    if kind == "coherence":
        name = f"{case['variety']} elimination vs direct"
        try:
            direct = chow_form(X, allow_elimination=False)
        except ChowFormError as exc:
            return [Record("chow", name, ANCHORS["chow.coherence"], "fail", note=str(exc))]
        elim = chow_form_eliminate(X)
        ok = elim.proportional_to(direct)
        vals = {"direct": direct.render(), "terms": len(direct.poly.terms)}
        return [Record("chow", name, ANCHORS["chow.coherence"], _status(ok), vals)]
    rng = random.Random(int(case.get("seed", 0)))
    samples = int(case.get("samples", 20))
    F = chow_form(X)
    n = X.dim
    points = X.points
    disagree = met = 0
    for k in range(samples):
        if points and k % 2 == 0:
            p = points[(k // 2) % len(points)]
            rows = [_through_point(rng, p) for _ in range(n + 1)]
        else:
            rows = [[Fraction(rng.randint(-3, 3)) for _ in range(X.nvars)] for _ in range(n + 1)]
            while not all(any(r) for r in rows):
                rows = [[Fraction(rng.randint(-3, 3)) for _ in range(X.nvars)] for _ in range(n + 1)]
        vanishes = F.evaluate(rows) == 0
        meets = not empty_intersection_check(X, [_hyperplane_poly(r, X.nvars) for r in rows])
        met += meets
        disagree += vanishes != meets
    name = f"{case['variety']} vanishing sampling"
    return [Record("chow", name, ANCHORS["chow.sampling"], _status(disagree == 0),
                   {"samples": samples, "meeting": met, "disagreements": disagree})]


def _rand_frac(rng: random.Random, size: int = 10 ** 6) -> Fraction:
    while True:
        x = Fraction(rng.randint(-size, size), rng.randint(1, size))
        if x:
            return x


def case_heights(man: Manifest, case: dict) -> list:
    kind = case["kind"]
    rng = random.Random(int(case.get("seed", 0)))
    if kind == "product_formula":
        k = int(case.get("samples", 200))
        bad = [x for x in (_rand_frac(rng) for _ in range(k)) if product_formula_check(x) != 1]
        return [Record("heights", f"product formula on {k} rationals", ANCHORS["heights.product_formula"],
                       _status(not bad), {"samples": k, "failures": len(bad)})]
    if kind == "norm":
        k = int(case.get("samples", 200))
        names = ["x0", "x1", "x2"]
        places = [INF, Place(2), Place(3), Place(5)]
        fails = 0
        for _ in range(k):
            D = rng.randint(1, 3)
            monos = list(monomials_of_degree(3, D))
            f = MultiPoly({m: Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                           for m in rng.sample(monos, min(3, len(monos)))}, 3)
            if f.is_zero():
                f = MultiPoly.var(0, 3) ** D
            g = MultiPoly.var(rng.randrange(3), 3) ** D
            x = [Fraction(rng.randint(-50, 50), rng.randint(1, 50)) for _ in names]
            if not any(x):
                x[0] = Fraction(1)
            rep = check_norm_inequalities([f, g], x, rng.choice(places))
            fails += not (rep.per_place_holds and rep.height_holds)
        return [Record("heights", f"norm inequalities on {k} triples", ANCHORS["heights.norm"],
                       _status(fails == 0), {"samples": k, "failures": fails})]
    if kind == "point":
        x = _frac_list(case["point"])
        h = height_point(x)
        oracle = height_point_places(x)
        ok = h == oracle
        if "expect" in case:
            ok = ok and h.arg == as_fraction(case["expect"])
        return [Record("heights", f"h({':'.join(map(str, x))})", ANCHORS["heights.point"], _status(ok),
                       {"h": h, "arg": h.arg, "places_oracle": oracle})]
    if kind == "polys":
        fs = [parse_poly(p, case["vars"]) for p in case["polys"]]
        h, h1 = height_polys(fs)
        ok = True
        if "expect_h" in case:
            ok = ok and h.arg == as_fraction(case["expect_h"])
        if "expect_h1" in case:
            ok = ok and h1.arg == as_fraction(case["expect_h1"])
        return [Record("heights", f"h, h1 of {case['polys']}", ANCHORS["heights.polys"], _status(ok),
                       {"h": h, "h1": h1, "h_arg": h.arg, "h1_arg": h1.arg})]
    raise ValueError(f"unknown heights case kind {kind!r}")


def _paramset(man: Manifest, ref) -> ParamSet:
    e = man.params(ref) if isinstance(ref, str) else dict(ref)
    e.pop("name", None)
    keys = ("n", "m", "d", "Delta", "s", "C", "N")
    return ParamSet(**{k: int(e[k]) for k in keys if k in e}, delta=as_fraction(e["delta"]))


def _identity_records(p: ParamSet, label: str) -> list:
    out = []
    for chk in identity_checks(p):
        mand = is_mandatory(chk)
        note = chk.note if mand else (chk.note + "; reported only").lstrip("; ")
        out.append(Record("constants", f"{label} {chk.name}", ANCHORS["constants.identity"],
                          _status(chk.holds), {"params": p.as_dict(), "lhs": chk.lhs, "rhs": chk.rhs},
                          chk.margin, note, mandatory=mand))
    return out


def case_constants(man: Manifest, case: dict) -> list:
    kind = case["kind"]
    if kind == "A":
        p = _paramset(man, case["params"])
        A = constants_A(p)
        ok = all(str(A[k]) == str(as_fraction(v)) for k, v in case.get("expect", {}).items())
        vals = {"params": p.as_dict(), "A2": A["A2"], "logA1_printed": A["logA1_printed"].render(),
                "logA1_derived": A["logA1_derived"].render(), "logA3": A["logA3"].render(), "H": A["H"]}
        return [Record("constants", f"A constants at {p.as_dict()}", ANCHORS["constants.A"], _status(ok), vals)]
    if kind == "B":
        B = constants_B(int(case["n"]), as_fraction(case["D"]), int(case["R"]), as_fraction(case["delta"]))
        ok = all(str(B[k]) == str(as_fraction(v)) for k, v in case.get("expect", {}).items())
        vals = {"B2": B["B2"], "logB1": B["logB1"].render(), "logB3": B["logB3"].render()}
        return [Record("constants", f"B constants at n={case['n']} D={case['D']} R={case['R']} delta={case['delta']}",
                       ANCHORS["constants.B"], _status(ok), vals)]
    if kind == "identities":
        p = _paramset(man, case["params"])
        return _identity_records(p, "point")
    if kind == "sweep":
        out = []
        for p in sweep_params():
            label = f"n={p.n} m={p.m} d={p.d} Delta={p.Delta} delta={p.delta}"
            out.extend(_identity_records(p, label))
        return out
    raise ValueError(f"unknown constants case kind {kind!r}")


def random_selection_input(rng: random.Random, q: int) -> tuple:
    """Random admissible (A, Lambda): A_j <= 0 with sum(A) <= -Lambda, Lambda > 0."""
    A = [Fraction(-rng.randint(0, 40), rng.randint(1, 8)) for _ in range(q)]
    if not any(A):
        A[rng.randrange(q)] = Fraction(-1)
    Lam = -sum(A) * Fraction(rng.randint(1, 20), 20)
    return A, Lam


def case_lemma315(man: Manifest, case: dict) -> list:
    rng = random.Random(int(case.get("seed", 0)))
    samples = int(case.get("samples", 1000))
    max_q = int(case.get("max_q", 8))
    thetas = _frac_list(case.get("thetas", ["1/2", "1/4", "1/8"]))
    seen = {}
    bad = {}
    for _ in range(samples):
        q = rng.randint(1, max_q)
        th = rng.choice(thetas)
        A, Lam = random_selection_input(rng, q)
        c = select_weight_tuple(A, Lam, th)
        seen.setdefault((q, th), set()).add(c)
        if not selection_contract_holds(A, Lam, th, c):
            bad[(q, th)] = bad.get((q, th), 0) + 1
    out = []
    for (q, th) in sorted(seen):
        count = len(seen[(q, th)])
        bound = weight_grid_size_bound(q, th)
        M = math.ceil((q - 1) / th) if q > 1 else 0
        grid = math.comb(M + q - 1, q - 1)
        fails = bad.get((q, th), 0)
        ok = fails == 0 and count <= bound
        out.append(Record("lemma315", f"q={q} theta={th}", ANCHORS["lemma315"], _status(ok),
                          {"distinct_outputs": count, "bound": bound, "grid_size": grid,
                           "contract_failures": fails}))
    return out


def case_lemma330(man: Manifest, case: dict) -> list:
    inst = man.instance(case["instance"])
    emb = embed_phi(inst)
    out = []
    ok = emb.dim_ok and emb.degree_ok and emb.R_ok
    out.append(Record("lemma330", f"{case['instance']} embedding", ANCHORS["lemma330.embedding"],
                      _status(ok), {"Y": [g.render(emb.Y.names) for g in emb.Y.generators],
                                    "R": emb.R, "D": emb.D}))
    hb = verify_height_bounds(inst, emb)
    out.append(Record("lemma330", f"{case['instance']} height bounds", ANCHORS["lemma330.heights"],
                      _status(hb.h1_holds and hb.hY_holds),
                      {"h1_g": hb.h1_g, "h_Y": hb.h_Y, "bound_h1": hb.bound_h1, "bound_hY": hb.bound_hY}))
    for pt in case["points"]:
        x = _frac_list(pt)
        label = f"{case['instance']} x=({':'.join(map(str, x))})"
        try:
            rep = verify_lemma_3_30(inst, x, emb=emb)
        except InstanceError as exc:
            note = f"hypotheses not met: {exc}"
            out.append(Record("lemma330", f"{label} bound", ANCHORS["lemma330.bound"], "skip", note=note))
            out.append(Record("lemma330", f"{label} conclusion", ANCHORS["lemma330.conclusion"], "skip", note=note))
            continue
        vals = {"h_x": height_point(x), "weights": rep.system.weights, "log_Q": rep.log_Q,
                "log_twisted_height": rep.log_twisted}
        out.append(Record("lemma330", f"{label} bound", ANCHORS["lemma330.bound"], _status(rep.holds_bound),
                          dict(vals, rhs=rep.rhs_bound), rep.rhs_bound - rep.log_twisted))
        out.append(Record("lemma330", f"{label} conclusion", ANCHORS["lemma330.conclusion"],
                          _status(rep.holds_conclusion),
                          dict(vals, rhs=rep.rhs_conclusion, E=rep.E, exponent=rep.exponent_conclusion,
                               height_gate=rep.gate),
                          rep.rhs_conclusion - rep.log_twisted,
                          note="" if rep.gate else "below the height gate"))
    return out


def case_nevanlinna(man: Manifest, case: dict) -> list:
    kind = case["kind"]
    f = man.curve(case["curve"])
    Qs = man.forms(case["forms"])
    radii = [float(r) for r in case.get("radii", [2, 4, 8, 16])]
    nodes = int(case.get("nodes", 0)) or default_nodes()
    tol = float(case.get("tol", 1e-6))
    if kind == "fmt":
        j = int(case.get("index", 0))
        Q = Qs[j]
        rep = fmt_check(f, Q, radii, nodes)
        diffs, wind_ok = [], True
        for r in radii:
            cv = counting(f, Q, r)
            orc = counting_oracle(f, Q, cv.radius, nodes)
            diffs.append(abs(cv.value - orc.value))
            wind_ok = wind_ok and orc.winding == cv.inside
        ok = rep.spread < tol and max(diffs) < tol and wind_ok
        vals = {"T": rep.T, "N": rep.N, "m": rep.m, "residual": rep.residual, "spread": rep.spread,
                "oracle_gap": max(diffs), "winding_agrees": wind_ok, "flags": rep.flags}
        if case.get("closed_form") == "line":
            T_cf = [math.log(math.sqrt(1 + r * r)) - math.log(math.sqrt(2)) for r in radii]
            N_cf = [math.log(r) for r in radii]
            gap = max(max(abs(a - b) for a, b in zip(rep.T, T_cf)), max(abs(a - b) for a, b in zip(rep.N, N_cf)))
            vals["closed_form_gap"] = gap
            ok = ok and gap < tol
        name = f"{case['curve']} / {case['forms']}[{j}]"
        return [Record("nevanlinna", name, ANCHORS["nevanlinna.fmt"], _status(ok), vals, tol - rep.spread)]
    if kind == "smt":
        V = man.variety(case["variety"])
        rep = smt_check(V, f, Qs, int(case["m"]), float(case["eps"]), radii, nodes)
        out = []
        for row in rep.rows:
            name = f"{case['curve']} / {case['forms']} r={row.r:g}"
            out.append(Record("nevanlinna", f"{name} second main theorem", ANCHORS["nevanlinna.smt"],
                              _status(row.holds),
                              {"T": row.T, "lhs": row.lhs, "lhs_top_size_only": row.lhs_top_only,
                               "rhs": row.rhs, "flags": rep.flags}, row.rhs - row.lhs))
            out.append(Record("nevanlinna", f"{name} counting form", ANCHORS["nevanlinna.corollary"],
                              _status(row.cor_holds), {"lhs": row.cor_lhs, "N_sum": row.N_sum},
                              row.N_sum - row.cor_lhs))
        return out
    if kind == "theorem_b":
        rep = theorem_b_check(f, Qs, radii, nodes)
        ok = all(math.isfinite(v) for v in rep.residual) and all(
            res <= rep.kappa * math.log(r) + rep.bound_const + 1e-12 for r, res in zip(rep.radii, rep.residual))
        vals = {"lhs": rep.lhs, "T": rep.T, "N_W": rep.N_W, "residual": rep.residual, "kappa": rep.kappa,
                "const": rep.const, "bound_const": rep.bound_const, "fit_error": rep.fit_error,
                "wronskian": rep.wronskian}
        return [Record("nevanlinna", f"{case['curve']} / {case['forms']} Wronskian form",
                       ANCHORS["nevanlinna.theorem_b"], _status(ok), vals,
                       note="S_f fitted as kappa log r + c")]
    raise ValueError(f"unknown nevanlinna case kind {kind!r}")


CASES: dict = {
    "thm14": case_thm14, "ef": case_ef, "hilbert": case_hilbert, "chow": case_chow,
    "heights": case_heights, "constants": case_constants, "lemma315": case_lemma315,
    "lemma330": case_lemma330, "nevanlinna": case_nevanlinna,
}


def _ef_summary(records: list) -> list:
    steps = sum(int(r.values["decreasing_steps"]) for r in records if r.suite == "ef" and "steps" in r.values)
    total = sum(int(r.values["steps"]) for r in records if r.suite == "ef" and "steps" in r.values)
    if not total:
        return []
    share = Fraction(steps, total)
    return [Record("ef", "defect trend across cases", ANCHORS["ef.defect"], _status(share >= Fraction(4, 5)),
                   {"decreasing_steps": steps, "steps": total, "share": share}, share - Fraction(4, 5),
                   note="at least 80% of u-steps weakly decreasing")]


# ---------------------------------------------------------------------------
# running


@dataclass
class SuiteReport:
    selection: list
    records: list
    manifest_digest: str
    timestamp: str

    @property
    def failed(self) -> bool:
        return any(r.status == "fail" and r.mandatory for r in self.records)

    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "skip": 0}
        for r in self.records:
            out[r.status] += 1
        out["mandatory_failures"] = sum(1 for r in self.records if r.status == "fail" and r.mandatory)
        return out

    def to_json(self, timing: bool = False) -> str:
        doc = {"timestamp": self.timestamp, "manifest_sha256": self.manifest_digest,
               "selection": self.selection, "summary": self.counts(),
               "records": [r.as_dict(timing) for r in self.records]}
        return json.dumps(doc, indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = []
        for r in self.records:
            flag = "" if r.mandatory else " (info)"
            lines.append(f"{r.status.upper():4}  {r.suite:10}  {r.name}{flag}")
            if r.note and r.status != "pass":
                lines.append(f"      {r.note}")
        c = self.counts()
        lines.append(f"{c['pass']} passed, {c['fail']} failed ({c['mandatory_failures']} mandatory), "
                     f"{c['skip']} skipped")
        return "\n".join(lines)


_WORKER_MANIFEST: dict = {}


def _run_case(doc_json: str, suite: str, index: int) -> list:
    man = _WORKER_MANIFEST.get(doc_json)
    if man is None:
        man = Manifest(json.loads(doc_json))
        _WORKER_MANIFEST.clear()
        _WORKER_MANIFEST[doc_json] = man
    case = man.checks(suite)[index]
    t0 = time.perf_counter()
    recs = CASES[suite](man, case)
    dt = time.perf_counter() - t0
    for r in recs:
        r.runtime = dt / max(1, len(recs))
    return recs


def parse_selection(text: str | Sequence[str] | None) -> list:
    if text is None:
        return list(SUITES)
    names = [t.strip() for t in (text.split(",") if isinstance(text, str) else text) if t.strip()]
    unknown = [t for t in names if t not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {unknown}; known suites are {', '.join(SUITES)}")
    return [s for s in SUITES if s in names]


def run_suite(man: Manifest, selection: Sequence[str] | None = None, jobs: int = 1,
              clock: Callable[[], datetime] | None = None) -> SuiteReport:
    """Run the selected suites; records come back in manifest order whatever ``jobs`` is."""
    sel = parse_selection(selection)
    doc_json = json.dumps(man.doc, sort_keys=True)
    tasks = [(s, i) for s in sel for i in range(len(man.checks(s)))]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_case, doc_json, s, i) for s, i in tasks]
            chunks = [f.result() for f in futures]
    else:
        _WORKER_MANIFEST[doc_json] = man
        chunks = [_run_case(doc_json, s, i) for s, i in tasks]
    records = list(itertools.chain.from_iterable(chunks))
    if "ef" in sel:
        records.extend(_ef_summary(records))
    now = (clock or (lambda: datetime.now(timezone.utc)))()
    digest = hashlib.sha256(doc_json.encode()).hexdigest()
    return SuiteReport(sel, records, digest, now.isoformat(timespec="seconds"))
