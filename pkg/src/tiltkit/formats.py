"""JSON formats: algebra presentations, modules, complexes, certificates.

All scalars serialize as exact "numerator/denominator" strings; canonical
artifacts use sorted keys and carry no timestamps, so identical inputs always
produce byte-identical files.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .algebra import FDAlgebra, PathAlgebraPresentation, Quiver
from .certs import Condition, EquivalenceCertificate
from .complexes import Complex
from .linalg import Matrix, PrimeField, QQ
from .modules import Module, ModuleMap, module_from_arrow_matrices


class FormatError(Exception):
    pass


def parse_field(spec):
    if spec == "Q":
        return QQ
    if isinstance(spec, dict) and "p" in spec:
        return PrimeField(int(spec["p"]))
    raise FormatError(f"unknown field spec {spec!r}")


def field_to_json(field):
    if field == QQ:
        return "Q"
    return {"p": field.p}


def parse_scalar(field, raw):
    if isinstance(raw, int):
        return field.of(raw)
    if isinstance(raw, str):
        return field.of(Fraction(raw))
    raise FormatError(f"bad scalar {raw!r}; use an integer or 'num/den' string")


def scalar_to_json(field, x):
    return field.format(x)


def parse_matrix(field, rows, shape=None):
    data = [[parse_scalar(field, x) for x in row] for row in rows]
    if shape is not None:
        want_r, want_c = shape
        got_r = len(data)
        got_c = len(data[0]) if data else 0
        if (got_r, got_c) != (want_r, want_c) and not (want_r == 0 or want_c == 0):
            raise FormatError(f"matrix shape {(got_r, got_c)}, want {shape}")
        if want_r == 0 or want_c == 0:
            return Matrix.zeros(field, want_r, want_c)
    cols = len(data[0]) if data else (shape[1] if shape else 0)
    return Matrix(field, data, cols=cols)


def matrix_to_json(field, m):
    return [[scalar_to_json(field, x) for x in row] for row in m.data]


# -- algebra presentations ----------------------------------------------------------


def parse_algebra_input(doc, field_override=None) -> PathAlgebraPresentation:
    """The algebra input schema:
    {"field": "Q" | {"p": N},
     "quiver": {"vertices": [...], "arrows": [{"name", "from", "to"}, ...]},
     "relations": [[{"coeff": "num/den", "path": ["a1", "a2", ...]}, ...], ...],
     "nilpotency_bound": N}
    with relation paths listed in traversal order."""
    try:
        field = field_override if field_override is not None \
            else parse_field(doc.get("field", "Q"))
        qv = doc["quiver"]
        quiver = Quiver(qv["vertices"],
                        [(a["name"], a["from"], a["to"]) for a in qv["arrows"]])
        relations = []
        for rel in doc.get("relations", []):
            terms = []
            for term in rel:
                terms.append((parse_scalar(field, term["coeff"]), tuple(term["path"])))
            relations.append(terms)
        bound = int(doc["nilpotency_bound"])
    except (KeyError, TypeError) as err:
        raise FormatError(f"algebra schema violation: {err}") from err
    return PathAlgebraPresentation(quiver, relations, bound, field=field)


def algebra_input_to_json(p: PathAlgebraPresentation):
    return {
        "field": field_to_json(p.field),
        "quiver": {
            "vertices": list(p.quiver.vertices),
            "arrows": [{"name": a.name, "from": a.source, "to": a.target}
                       for a in p.quiver.arrows],
        },
        "relations": [
            [{"coeff": scalar_to_json(p.field, c), "path": list(path)}
             for c, path in rel]
            for rel in p.relations
        ],
        "nilpotency_bound": p.nilpotency_bound,
    }


def algebra_to_json(a: FDAlgebra):
    """Inline structure-constant form of an algebra (used inside certificates)."""
    return {
        "field": field_to_json(a.field),
        "dimension": a.dim,
        "basis": list(a.labels),
        "idempotent_names": list(a.idempotent_names),
        "idempotents": [[scalar_to_json(a.field, x) for x in e] for e in a.idempotents],
        "products": [[[scalar_to_json(a.field, x) for x in a.table[i][j]]
                      for j in range(a.dim)] for i in range(a.dim)],
        "block_row": list(a.block_row),
        "block_col": list(a.block_col),
    }


def algebra_from_json(doc) -> FDAlgebra:
    field = parse_field(doc["field"])
    table = [[[parse_scalar(field, x) for x in doc["products"][i][j]]
              for j in range(doc["dimension"])] for i in range(doc["dimension"])]
    idems = [[parse_scalar(field, x) for x in e] for e in doc["idempotents"]]
    return FDAlgebra(field, doc["basis"], table, idems,
                     idempotent_names=doc["idempotent_names"],
                     block_row=doc["block_row"], block_col=doc["block_col"])


# -- modules --------------------------------------------------------------------------


def parse_module(doc, algebra: FDAlgebra, algebra_name=None) -> Module:
    """Module schema: {"algebra": ref, "dims": {vertex: n},
    "arrows": {name: [[...]]}} with matrices acting on column coordinates."""
    try:
        dims_doc = doc["dims"]
        arrows_doc = doc.get("arrows", {})
    except (KeyError, TypeError) as err:
        raise FormatError(f"module schema violation: {err}") from err
    names = algebra.idempotent_names
    dims = []
    for name in names:
        dims.append(int(dims_doc.get(name, 0)))
    if algebra.quiver is None:
        raise FormatError("algebra has no quiver provenance; cannot parse arrow matrices")
    q = algebra.quiver
    arrow_mats = {}
    for arr in q.arrows:
        shape = (dims[q.vertex_index[arr.target]], dims[q.vertex_index[arr.source]])
        raw = arrows_doc.get(arr.name)
        if raw is None:
            arrow_mats[arr.name] = Matrix.zeros(algebra.field, *shape)
        else:
            arrow_mats[arr.name] = parse_matrix(algebra.field, raw, shape)
    return module_from_arrow_matrices(algebra, dims, arrow_mats)


def module_to_json(mod: Module):
    from .modules import arrow_matrices_of
    a = mod.algebra
    out = {"dims": {name: mod.dims[i] for i, name in enumerate(a.idempotent_names)
                    if mod.dims[i]}}
    if a.paths is not None:
        out["arrows"] = {name: matrix_to_json(a.field, m)
                         for name, m in sorted(arrow_matrices_of(mod).items())}
    return out


# -- complexes ------------------------------------------------------------------------


def parse_complex(doc, algebra, module_parser) -> Complex:
    """Complex schema: {"degrees": [lo, hi], "modules": [...],
    "differentials": [{vertex: [[...]]}, ...]}."""
    lo, hi = doc["degrees"]
    mods = [module_parser(m) for m in doc["modules"]]
    if len(mods) != hi - lo + 1:
        raise FormatError("modules list does not match the degree range")
    diffs = []
    for i, dd in enumerate(doc.get("differentials", [])):
        src, tgt = mods[i], mods[i + 1]
        comps = []
        for j, name in enumerate(algebra.idempotent_names):
            raw = dd.get(name)
            if raw is None:
                comps.append(Matrix.zeros(algebra.field, tgt.dims[j], src.dims[j]))
            else:
                comps.append(parse_matrix(algebra.field, raw, (tgt.dims[j], src.dims[j])))
        diffs.append(ModuleMap(src, tgt, comps))
    if len(mods) > 1 and len(diffs) != len(mods) - 1:
        raise FormatError("need one differential between consecutive modules")
    return Complex(algebra, lo, mods, diffs)


# -- certificates ----------------------------------------------------------------------


def jsonable(x):
    from dataclasses import is_dataclass
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, float):
        raise FormatError("floating point values are never serialized")
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, Module):
        return {"dims": list(x.dims)}
    if isinstance(x, FDAlgebra):
        return algebra_to_json(x)
    if is_dataclass(x):
        return {k: jsonable(v) for k, v in vars(x).items()}
    return str(x)


def condition_to_json(c: Condition):
    out = {"id": c.id, "verdict": jsonable(c.verdict),
           "window": list(c.window) if c.window is not None else None}
    if c.witness is not None:
        out["witness"] = jsonable(c.witness)
    return out


def certificate_to_json(cert: EquivalenceCertificate):
    out = {
        "kind": cert.kind,
        "conditions": [condition_to_json(c) for c in cert.conditions],
        "verdict": cert.verdict,
        "notes": list(cert.notes),
    }
    if cert.endo is not None:
        out["E"] = algebra_to_json(cert.endo)
    if cert.endo_triangular is not None:
        tri = cert.endo_triangular
        out["E_triangular"] = {
            "corner_b_dim": tri.algebra_b.dim,
            "corner_c_dim": tri.algebra_c.dim,
            "bimodule_dim": tri.bimodule.dim,
        }
    if cert.invariants is not None:
        out["invariants"] = {k: {"left": jsonable(a), "right": jsonable(b),
                                 "equal": a == b}
                             for k, (a, b) in cert.invariants.values.items()}
    return out


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"
