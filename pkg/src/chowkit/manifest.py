"""JSON manifests: loading, validation with path-qualified diagnostics, and
construction of the objects the checks consume."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .heights import Place, PlaceWeightSystem
from .ideal import Variety
from .nevanlinna import RationalCurve
from .poly import PolySyntaxError, as_fraction, parse_poly
from .subspace import SubspaceInstance

SUITES = ("thm14", "ef", "hilbert", "chow", "heights", "constants", "lemma315", "lemma330", "nevanlinna")
TOP_KEYS = {"varieties", "curves", "forms", "instances", "params", "checks"}


class ManifestError(ValueError):
    def __init__(self, diagnostics: list):
        super().__init__("\n".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class Diagnostic:
    path: str
    message: str
    line: int | None = None

    def __str__(self):
        where = f"line {self.line}: " if self.line is not None else ""
        return f"{where}{self.path}: {self.message}"


def default_manifest_path() -> Path:
    return Path(str(resources.files("chowkit") / "data" / "default_manifest.json"))


def load_json(path) -> tuple:
    """(document, diagnostics); parse errors carry line numbers."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        return None, [Diagnostic(str(path), f"cannot read: {exc.strerror}")]
    try:
        return json.loads(text), []
    except json.JSONDecodeError as exc:
        return None, [Diagnostic("$", exc.msg, exc.lineno)]


def _frac_ok(x) -> bool:
    try:
        as_fraction(x)
        return True
    except (TypeError, ValueError, ZeroDivisionError):
        return False


class _Validator:
    def __init__(self, doc: dict):
        self.doc = doc
        self.diags: list = []
        self.names: dict = {k: {} for k in ("varieties", "curves", "forms", "instances", "params")}

    def err(self, path: str, msg: str):
        self.diags.append(Diagnostic(path, msg))

    def polys(self, path: str, texts, names) -> bool:
        if not isinstance(texts, list):
            self.err(path, "expected a list of polynomial strings")
            return False
        ok = True
        for i, t in enumerate(texts):
            try:
                parse_poly(str(t), list(names))
            except PolySyntaxError as exc:
                self.err(f"{path}[{i}]", str(exc))
                ok = False
        return ok

    def named(self, kind: str, check):
        items = self.doc.get(kind, [])
        if not isinstance(items, list):
            self.err(kind, "expected a list")
            return
        for i, e in enumerate(items):
            path = f"{kind}[{i}]"
            if not isinstance(e, dict) or not isinstance(e.get("name"), str):
                self.err(path, "entry needs a string 'name'")
                continue
            if e["name"] in self.names[kind]:
                self.err(f"{path}.name", f"duplicate name {e['name']!r}")
            self.names[kind][e["name"]] = e
            check(path, e)

    def variety(self, path: str, e: dict):
        names = e.get("vars")
        if not isinstance(names, list) or not names or not all(isinstance(v, str) for v in names):
            self.err(f"{path}.vars", "expected a nonempty list of variable names")
            return
        gens = e.get("generators", [])
        if self.polys(f"{path}.generators", gens, names):
            for i, g in enumerate(gens):
                if not parse_poly(str(g), names).is_homogeneous():
                    self.err(f"{path}.generators[{i}]", "generator is not homogeneous; varieties are cut out by forms")
        if "param" in e:
            pv = e.get("param_vars", ["s", "t"])
            if self.polys(f"{path}.param", e["param"], pv) and len(e["param"]) != len(names):
                self.err(f"{path}.param", "parametrization needs one form per coordinate")
        for i, p in enumerate(e.get("points", [])):
            if not isinstance(p, list) or len(p) != len(names) or not all(_frac_ok(x) for x in p):
                self.err(f"{path}.points[{i}]", "point needs one rational per coordinate")

    def curve(self, path: str, e: dict):
        try:
            RationalCurve.parse(str(e.get("components", "")))
        except (PolySyntaxError, ValueError) as exc:
            self.err(f"{path}.components", str(exc))

    def forms(self, path: str, e: dict):
        names = e.get("vars")
        if not isinstance(names, list) or not names:
            self.err(f"{path}.vars", "expected a nonempty list of variable names")
            return
        if self.polys(f"{path}.polys", e.get("polys"), names):
            for i, g in enumerate(e["polys"]):
                p = parse_poly(str(g), names)
                if p.is_zero() or not p.is_homogeneous():
                    self.err(f"{path}.polys[{i}]", "target polynomials must be nonzero forms")

    def instance(self, path: str, e: dict):
        v = e.get("variety")
        if v not in self.names["varieties"]:
            self.err(f"{path}.variety", f"unknown variety {v!r}")
            return
        names = self.names["varieties"][v].get("vars", [])
        places = e.get("places", [])
        systems = e.get("systems")
        if not isinstance(systems, dict) or not systems:
            self.err(f"{path}.systems", "expected a mapping from place to polynomial list")
            return
        for key, polys in systems.items():
            try:
                Place.parse(key)
            except ValueError as exc:
                self.err(f"{path}.systems.{key}", str(exc))
            self.polys(f"{path}.systems.{key}", polys, names)
        if places and sorted(str(Place.parse(p)) for p in places) != sorted(str(Place.parse(k)) for k in systems):
            self.err(f"{path}.places", "place list does not match the systems' keys")
        if not _frac_ok(e.get("delta")) or as_fraction(e.get("delta")) <= 0:
            self.err(f"{path}.delta", "delta must be a positive rational")

    def params(self, path: str, e: dict):
        for k in ("n", "m", "d", "Delta", "delta"):
            if k not in e:
                self.err(f"{path}.{k}", "missing")
            elif not _frac_ok(e[k]):
                self.err(f"{path}.{k}", "not a rational")

    def ref(self, path: str, kind: str, name):
        if name not in self.names[kind]:
            self.err(path, f"unknown {kind[:-1] if kind != 'varieties' else 'variety'} {name!r}")
            return False
        return True

    def run(self) -> list:
        if not isinstance(self.doc, dict):
            self.err("$", "manifest must be a JSON object")
            return self.diags
        for k in sorted(set(self.doc) - TOP_KEYS):
            self.err(k, "unknown top-level key")
        self.named("varieties", self.variety)
        self.named("curves", self.curve)
        self.named("forms", self.forms)
        self.named("instances", self.instance)
        self.named("params", self.params)
        checks = self.doc.get("checks", {})
        if not isinstance(checks, dict):
            self.err("checks", "expected a mapping from suite name to case list")
            return self.diags
        for suite, cases in checks.items():
            if suite not in SUITES:
                self.err(f"checks.{suite}", f"unknown suite; known suites are {', '.join(SUITES)}")
                continue
            if not isinstance(cases, list):
                self.err(f"checks.{suite}", "expected a list of cases")
                continue
            for i, case in enumerate(cases):
                path = f"checks.{suite}[{i}]"
                if not isinstance(case, dict):
                    self.err(path, "case must be an object")
                    continue
                for key, kind in (("variety", "varieties"), ("curve", "curves"), ("forms", "forms"),
                                  ("instance", "instances"), ("params", "params")):
                    if key in case and isinstance(case[key], str):
                        self.ref(f"{path}.{key}", kind, case[key])
                for key in ("weights",):
                    if key in case and not all(_frac_ok(x) for x in case[key]):
                        self.err(f"{path}.{key}", "weights must be rationals")
        return self.diags


def validate_document(doc) -> list:
    return _Validator(doc).run()


def validate_manifest(path) -> list:
    """Diagnostics for the manifest at ``path``; empty when it is well formed."""
    doc, diags = load_json(path)
    if diags:
        return diags
    return validate_document(doc)


class Manifest:
    """A validated manifest with lazily built, cached objects."""

    def __init__(self, doc: dict):
        diags = validate_document(doc)
        if diags:
            raise ManifestError(diags)
        self.doc = doc
        self._cache: dict = {}

    @classmethod
    def load(cls, path) -> "Manifest":
        doc, diags = load_json(path)
        if diags:
            raise ManifestError(diags)
        return cls(doc)

    @classmethod
    def default(cls) -> "Manifest":
        return cls.load(default_manifest_path())

    def _entry(self, kind: str, name: str) -> dict:
        for e in self.doc.get(kind, []):
            if e["name"] == name:
                return e
        raise KeyError(f"unknown {kind} entry {name!r}")

    def _cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def names(self, kind: str) -> list:
        return [e["name"] for e in self.doc.get(kind, [])]

    def variety(self, name: str) -> Variety:
        def build():
            e = self._entry("varieties", name)
            return Variety.from_strings(e["vars"], e.get("generators", []), name=name,
                                        param=e.get("param"), param_names=e.get("param_vars", ["s", "t"]),
                                        points=e.get("points"))
        return self._cached(("variety", name), build)

    def curve(self, name: str) -> RationalCurve:
        return self._cached(("curve", name),
                            lambda: RationalCurve.parse(self._entry("curves", name)["components"]))

    def forms(self, name: str) -> list:
        def build():
            e = self._entry("forms", name)
            return [parse_poly(p, e["vars"]) for p in e["polys"]]
        return self._cached(("forms", name), build)

    def instance(self, name: str) -> SubspaceInstance:
        def build():
            e = self._entry("instances", name)
            X = self.variety(e["variety"])
            systems = {k: [parse_poly(p, list(X.names)) for p in v] for k, v in e["systems"].items()}
            return SubspaceInstance(X, systems, Fraction(str(e["delta"])), C=int(e.get("C", 1)))
        return self._cached(("instance", name), build)

    def params(self, name: str) -> dict:
        return dict(self._entry("params", name))

    def checks(self, suite: str) -> list:
        return list(self.doc.get("checks", {}).get(suite, []))

    def weight_system(self, weights: dict) -> PlaceWeightSystem:
        return PlaceWeightSystem({k: [as_fraction(x) for x in v] for k, v in weights.items()})


def dump_document(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)
