"""Manifest ingestion: one JSON object describing a whole computation scene.

A manifest names the prime, an algebra (preset or explicit structure
constants), tables of modules, morphisms, and ladder diagrams, a context
choice, bounds, and a seed.  Everything is resolved and checked up front —
unknown keys, dangling names, wrong shapes, non-representations,
non-intertwiners, broken rows — so that commands only ever run against a
scene that validated as a whole.  Matrices are written row-major with integer
entries; negatives are allowed and reduced mod p on ingestion.
"""

import hashlib
import json

from .algebras import (
    Algebra,
    AlgebraEmbedding,
    cyclic_subgroup_embedding,
    make_cyclic_group_algebra,
    make_truncated_poly,
    prime_field_embedding,
)
from .contexts import ArrowContext, RestrictionContext
from .linalg import Matrix, PrimeField
from .modules import ModuleMorphism, ModuleRep
from .splitting import NotSplitRow, SplitDiagram


class ManifestError(ValueError):
    """Invalid manifest; the message names the entry and the constraint."""


DEFAULT_BOUNDS = {
    "resolution_length": 6,
    "ss": (3, 2),
    "oracle_budget": 16,
    "max_dim": 6,
}

_TOP_KEYS = {"field", "algebra", "context", "modules", "morphisms",
             "diagrams", "bounds", "seed", "comment"}
_DIAGRAM_KEYS = {"f", "g", "h", "i_top", "pi_top", "i_bottom", "pi_bottom"}
_WITNESS_KEYS = {"r_top", "r_bottom", "s_top", "s_bottom"}


def _need(node, key, where, kind=None):
    if not isinstance(node, dict) or key not in node:
        raise ManifestError(f"{where}: missing required key '{key}'")
    val = node[key]
    if kind is not None and not isinstance(val, kind):
        raise ManifestError(f"{where}: '{key}' has the wrong type")
    return val


def _no_extras(node, allowed, where):
    extras = sorted(set(node) - set(allowed))
    if extras:
        raise ManifestError(f"{where}: unknown keys {extras}")


def parse_matrix(fld, node, where, rows=None, cols=None) -> Matrix:
    """Row-major matrix from nested rows or a {rows, cols, entries} object.

    The object form is required for matrices with a zero dimension, where
    nested lists cannot express the shape.
    """
    if isinstance(node, dict):
        _no_extras(node, {"rows", "cols", "entries"}, where)
        r = _need(node, "rows", where, int)
        c = _need(node, "cols", where, int)
        entries = _need(node, "entries", where, list)
        if r < 0 or c < 0:
            raise ManifestError(f"{where}: negative matrix dimensions")
        if len(entries) != r * c:
            raise ManifestError(
                f"{where}: expected {r * c} entries, got {len(entries)}")
    elif isinstance(node, list):
        if not node or not all(isinstance(row, list) for row in node):
            raise ManifestError(
                f"{where}: nested-list matrices need at least one row of "
                f"entries; use the rows/cols/entries object for empty shapes")
        r = len(node)
        c = len(node[0])
        if any(len(row) != c for row in node):
            raise ManifestError(f"{where}: ragged rows")
        entries = [x for row in node for x in row]
    else:
        raise ManifestError(f"{where}: matrix must be a list of rows or an "
                            f"object with rows/cols/entries")
    if not all(isinstance(x, int) for x in entries):
        raise ManifestError(f"{where}: matrix entries must be integers")
    if rows is not None and r != rows:
        raise ManifestError(f"{where}: expected {rows} rows, got {r}")
    if cols is not None and c != cols:
        raise ManifestError(f"{where}: expected {cols} columns, got {c}")
    return Matrix(fld, r, c, [x % fld.p for x in entries])


def matrix_json(m: Matrix) -> dict:
    return {"rows": m.rows, "cols": m.cols, "entries": list(m.data)}


def _parse_algebra(fld, node) -> Algebra:
    where = "algebra"
    if not isinstance(node, dict):
        raise ManifestError(f"{where}: must be an object")
    if "preset" in node:
        _no_extras(node, {"preset", "params"}, where)
        preset = node["preset"]
        params = node.get("params", {})
        if not isinstance(params, dict):
            raise ManifestError(f"{where}: 'params' must be an object")
        if preset == "truncated_poly":
            _no_extras(params, {"n"}, f"{where}.params")
            return make_truncated_poly(fld.p, _need(params, "n", where, int))
        if preset == "cyclic_group":
            _no_extras(params, {"n"}, f"{where}.params")
            return make_cyclic_group_algebra(fld.p, _need(params, "n", where, int))
        raise ManifestError(
            f"{where}: unknown preset '{preset}' "
            f"(available: truncated_poly, cyclic_group)")
    _no_extras(node, {"structure", "unit", "label"}, where)
    structure = _need(node, "structure", where, list)
    unit = _need(node, "unit", where, list)
    try:
        algebra = Algebra(fld, len(structure), structure, unit,
                          label=node.get("label", ""))
    except (ValueError, TypeError) as exc:
        raise ManifestError(f"{where}: {exc}") from exc
    bad = algebra.validate()
    if bad:
        raise ManifestError(
            f"{where}: structure constants fail the algebra axioms "
            f"(first violation: {bad[0]})")
    return algebra


def _parse_context(fld, algebra, node):
    where = "context"
    if not isinstance(node, dict):
        raise ManifestError(f"{where}: must be an object")
    kind = _need(node, "kind", where, str)
    if kind == "arrow":
        _no_extras(node, {"kind"}, where)
        return ArrowContext(algebra)
    if kind != "restriction":
        raise ManifestError(
            f"{where}: unknown kind '{kind}' (available: arrow, restriction)")
    _no_extras(node, {"kind", "embeddings"}, where)
    specs = _need(node, "embeddings", where, list)
    if not specs:
        raise ManifestError(f"{where}: restriction needs at least one embedding")
    embeddings = []
    for idx, spec in enumerate(specs):
        ewhere = f"{where}.embeddings[{idx}]"
        if not isinstance(spec, dict):
            raise ManifestError(f"{ewhere}: must be an object")
        preset = _need(spec, "preset", ewhere, str)
        try:
            if preset == "cyclic_subgroup":
                _no_extras(spec, {"preset", "n", "m"}, ewhere)
                emb = cyclic_subgroup_embedding(
                    fld.p, _need(spec, "n", ewhere, int),
                    _need(spec, "m", ewhere, int))
            elif preset == "prime_field":
                _no_extras(spec, {"preset"}, ewhere)
                emb = prime_field_embedding(algebra)
            else:
                raise ManifestError(
                    f"{ewhere}: unknown preset '{preset}' "
                    f"(available: cyclic_subgroup, prime_field)")
        except ValueError as exc:
            raise ManifestError(f"{ewhere}: {exc}") from exc
        if emb.big.key() != algebra.key():
            raise ManifestError(
                f"{ewhere}: the embedding's big algebra does not match the "
                f"manifest algebra")
        embeddings.append(emb)
    return RestrictionContext(embeddings)


class Manifest:
    """A validated scene: algebra, context, named objects, bounds, seed."""

    def __init__(self, raw: dict, path=None):
        if not isinstance(raw, dict):
            raise ManifestError("manifest: top level must be a JSON object")
        _no_extras(raw, _TOP_KEYS, "manifest")
        self.raw = raw
        self.path = path
        field_node = _need(raw, "field", "manifest")
        _no_extras(field_node, {"p"}, "field")
        p = _need(field_node, "p", "field", int)
        try:
            self.field = PrimeField(p)
        except ValueError as exc:
            raise ManifestError(f"field: {exc}") from exc
        self.algebra = _parse_algebra(self.field, _need(raw, "algebra", "manifest"))
        self.modules = self._parse_modules(raw.get("modules", {}))
        self.morphisms = self._parse_morphisms(raw.get("morphisms", {}))
        self.context = _parse_context(self.field, self.algebra,
                                      raw.get("context", {"kind": "arrow"}))
        self.bounds = self._parse_bounds(raw.get("bounds", {}))
        seed = raw.get("seed", 0)
        if not isinstance(seed, int):
            raise ManifestError("seed: must be an integer")
        self.seed = seed
        self.diagrams = self._parse_diagrams(raw.get("diagrams", {}))

    @classmethod
    def load(cls, path) -> "Manifest":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ManifestError(f"manifest: cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ManifestError(f"manifest: {path} is not valid JSON: {exc}") from exc
        return cls(raw, path=str(path))

    def digest(self) -> str:
        canon = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:16]

    # -- tables ------------------------------------------------------------

    def _parse_modules(self, node) -> dict:
        if not isinstance(node, dict):
            raise ManifestError("modules: must be an object of named entries")
        out = {}
        for name, entry in node.items():
            where = f"module '{name}'"
            if not isinstance(entry, dict):
                raise ManifestError(f"{where}: must be an object")
            _no_extras(entry, {"actions"}, where)
            acts_node = _need(entry, "actions", where, list)
            if len(acts_node) != self.algebra.dim:
                raise ManifestError(
                    f"{where}: need {self.algebra.dim} action matrices "
                    f"(one per algebra basis element), got {len(acts_node)}")
            acts = [parse_matrix(self.field, m, f"{where}.actions[{i}]")
                    for i, m in enumerate(acts_node)]
            dims = {(m.rows, m.cols) for m in acts}
            if len(dims) != 1 or acts[0].rows != acts[0].cols:
                raise ManifestError(f"{where}: action matrices must be square "
                                    f"and share one dimension")
            rep = ModuleRep(self.algebra, acts[0].rows, acts, label=name)
            bad = rep.validate()
            if bad:
                raise ManifestError(
                    f"{where}: not a representation (first violation: {bad[0]})")
            out[name] = rep
        return out

    def _parse_morphisms(self, node) -> dict:
        if not isinstance(node, dict):
            raise ManifestError("morphisms: must be an object of named entries")
        out = {}
        for name, entry in node.items():
            where = f"morphism '{name}'"
            if not isinstance(entry, dict):
                raise ManifestError(f"{where}: must be an object")
            _no_extras(entry, {"source", "target", "matrix"}, where)
            src_name = _need(entry, "source", where, str)
            tgt_name = _need(entry, "target", where, str)
            for nm in (src_name, tgt_name):
                if nm not in self.modules:
                    raise ManifestError(f"{where}: unknown module '{nm}'")
            src, tgt = self.modules[src_name], self.modules[tgt_name]
            mat = parse_matrix(self.field, _need(entry, "matrix", where),
                               f"{where}.matrix", rows=tgt.dim, cols=src.dim)
            mor = ModuleMorphism(src, tgt, mat)
            if not mor.is_intertwiner():
                raise ManifestError(
                    f"{where}: matrix does not intertwine the actions")
            out[name] = mor
        return out

    def _parse_bounds(self, node) -> dict:
        if not isinstance(node, dict):
            raise ManifestError("bounds: must be an object")
        _no_extras(node, set(DEFAULT_BOUNDS), "bounds")
        out = dict(DEFAULT_BOUNDS)
        for key in ("resolution_length", "oracle_budget", "max_dim"):
            if key in node:
                val = node[key]
                if not isinstance(val, int) or val < 1:
                    raise ManifestError(f"bounds: '{key}' must be a positive "
                                        f"integer")
                out[key] = val
        if "ss" in node:
            val = node["ss"]
            if (not isinstance(val, list) or len(val) != 2
                    or not all(isinstance(v, int) for v in val)):
                raise ManifestError("bounds: 'ss' must be a pair [s_max, t_max]")
            if min(val) < 2:
                raise ManifestError("bounds: 'ss' bounds must be at least 2")
            out["ss"] = (val[0], val[1])
        return out

    def _parse_diagrams(self, node) -> dict:
        if not isinstance(node, dict):
            raise ManifestError("diagrams: must be an object of named entries")
        out = {}
        for name, entry in node.items():
            where = f"diagram '{name}'"
            if not isinstance(entry, dict):
                raise ManifestError(f"{where}: must be an object")
            _no_extras(entry, _DIAGRAM_KEYS | {"witnesses"}, where)
            refs = {}
            for key in sorted(_DIAGRAM_KEYS):
                ref = _need(entry, key, where, str)
                if ref not in self.morphisms:
                    raise ManifestError(f"{where}: unknown morphism '{ref}' "
                                        f"for '{key}'")
                refs[key] = self.morphisms[ref]
            wit = {"r0_p": None, "r0": None, "s0_p": None, "s0": None}
            wit_node = entry.get("witnesses", {})
            if not isinstance(wit_node, dict):
                raise ManifestError(f"{where}: 'witnesses' must be an object")
            _no_extras(wit_node, _WITNESS_KEYS, f"{where}.witnesses")
            shapes = {
                # witness: (source of the map, target of the map)
                "r_top": (refs["i_top"].target, refs["i_top"].source, "r0_p"),
                "r_bottom": (refs["i_bottom"].target, refs["i_bottom"].source, "r0"),
                "s_top": (refs["pi_top"].target, refs["pi_top"].source, "s0_p"),
                "s_bottom": (refs["pi_bottom"].target, refs["pi_bottom"].source, "s0"),
            }
            for key, (src, tgt, slot) in shapes.items():
                if key not in wit_node:
                    continue
                mat = parse_matrix(self.field, wit_node[key],
                                   f"{where}.witnesses.{key}",
                                   rows=tgt.dim, cols=src.dim)
                mor = ModuleMorphism(src, tgt, mat)
                if not mor.is_intertwiner():
                    raise ManifestError(
                        f"{where}.witnesses.{key}: matrix does not intertwine "
                        f"the actions")
                wit[slot] = mor
            try:
                out[name] = SplitDiagram(
                    refs["f"], refs["g"], refs["h"],
                    refs["i_top"], refs["pi_top"],
                    refs["i_bottom"], refs["pi_bottom"], **wit)
            except NotSplitRow as exc:
                raise ManifestError(f"{where}: {exc}") from exc
            except ValueError as exc:
                raise ManifestError(f"{where}: {exc}") from exc
        return out


# -- serialization (corpus dumps and fixtures) ---------------------------------


def algebra_json(a: Algebra) -> dict:
    node = {"structure": [[list(row) for row in plane] for plane in a.structure],
            "unit": list(a.unit)}
    if a.label:
        node["label"] = a.label
    return node


def module_json(m: ModuleRep) -> dict:
    return {"actions": [matrix_json(m.act(i)) for i in range(m.algebra.dim)]}


def diagram_manifest(d: SplitDiagram, seed: int = 0, comment: str = "") -> dict:
    """A standalone manifest that rebuilds exactly this ladder diagram.

    Retraction witnesses for both rows are included so the replay does not
    depend on the witness search.
    """
    mods = {
        "Xp": d.f.source, "Yp": d.g.source, "Zp": d.h.source,
        "X": d.f.target, "Y": d.g.target, "Z": d.h.target,
    }
    mors = {
        "f": ("Xp", "X", d.f), "g": ("Yp", "Y", d.g), "h": ("Zp", "Z", d.h),
        "i_top": ("Xp", "Yp", d.i_p), "pi_top": ("Yp", "Zp", d.pi_p),
        "i_bottom": ("X", "Y", d.i), "pi_bottom": ("Y", "Z", d.pi),
    }
    raw = {
        "field": {"p": d.algebra.field.p},
        "algebra": algebra_json(d.algebra),
        "context": {"kind": "arrow"},
        "modules": {name: module_json(m) for name, m in mods.items()},
        "morphisms": {name: {"source": s, "target": t,
                             "matrix": matrix_json(mor.mat)}
                      for name, (s, t, mor) in mors.items()},
        "diagrams": {"case": {
            "f": "f", "g": "g", "h": "h",
            "i_top": "i_top", "pi_top": "pi_top",
            "i_bottom": "i_bottom", "pi_bottom": "pi_bottom",
            "witnesses": {"r_top": matrix_json(d.r0_p.mat),
                          "r_bottom": matrix_json(d.r0.mat)},
        }},
        "seed": seed,
    }
    if comment:
        raw["comment"] = comment
    return raw


def pair_manifest(ctx_node: dict, algebra: Algebra, named_modules: dict,
                  named_morphisms: dict, seed: int = 0, comment: str = "") -> dict:
    """A standalone manifest carrying the named modules/morphisms of one case."""
    raw = {
        "field": {"p": algebra.field.p},
        "algebra": algebra_json(algebra),
        "context": ctx_node,
        "modules": {name: module_json(m) for name, m in named_modules.items()},
        "morphisms": {name: {"source": s, "target": t,
                             "matrix": matrix_json(mor.mat)}
                      for name, (s, t, mor) in named_morphisms.items()},
        "seed": seed,
    }
    if comment:
        raw["comment"] = comment
    return raw
