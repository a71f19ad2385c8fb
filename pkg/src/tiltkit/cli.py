"""Command-line front end.

Subcommands: algebra build|info, module check, apr, tilting-check, glue,
recollement verify, invariants compare.  Every command exits nonzero exactly
when its certificate or report is INVALID or an error occurred.  Artifacts
are canonical JSON (sorted keys, exact rationals, no timestamps), cached in a
content-addressed workspace with atomic write-then-rename.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from pathlib import Path

from .algebra import AlgebraError, detect_triangular
from .certs import invariants_compare
from .complexes import stalk_complex
from .formats import (
    FormatError,
    algebra_input_to_json,
    canonical_json,
    certificate_to_json,
    jsonable,
    parse_algebra_input,
    parse_complex,
    parse_field,
    parse_module,
)
from .glue import (
    GlueRefusal,
    GluedTiltingSpec,
    glue_jshriek,
    glue_jstar,
    shifted_stalk_glue,
)
from .linalg import LinalgError
from .modules import ModuleError, regular_module, simple_module, tilting_module_check
from .recollement import (
    IdempotentRecollement,
    functor_criteria_check,
    torsion_canonical_sequence,
    verify_recollement_axioms,
)
from .translate import AprPreconditionError, apr_equivalent_algebra, build_apr_tilting
from .algebra import build_fd_algebra

ENV_WORKSPACE = "TILTKIT_WORKSPACE"


class CliError(Exception):
    pass


def workspace_root(args) -> Path:
    root = args.workspace or os.environ.get(ENV_WORKSPACE) or ".tiltkit"
    return Path(root)


def atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def store_artifact(root: Path, doc) -> Path:
    text = canonical_json(doc)
    digest = hashlib.sha256(text.encode()).hexdigest()
    path = root / "objects" / f"{digest}.json"
    if not path.exists():
        atomic_write(path, text)
    return path


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as err:
        raise CliError(f"{path}: invalid JSON at line {err.lineno}, column {err.colno}")
    except OSError as err:
        raise CliError(f"{path}: {err}")


def field_from_flag(flag):
    """--field Q keeps the rationals; --field F<p> switches to a prime field."""
    if flag is None:
        return None
    if flag == "Q":
        return parse_field("Q")
    if flag.startswith("F") and flag[1:].isdigit():
        return parse_field({"p": int(flag[1:])})
    raise CliError(f"unknown field flag {flag!r}; use Q or F<p>")


def load_algebra(path, field_flag=None):
    doc = load_json(path)
    if doc.get("kind") == "algebra":
        doc = doc["input"]
    pres = parse_algebra_input(doc, field_override=field_from_flag(field_flag))
    return build_fd_algebra(pres), pres


def parse_idempotent_subset(a, spec) -> list:
    out = []
    names = {n: i for i, n in enumerate(a.idempotent_names)}
    for piece in spec.split(","):
        piece = piece.strip()
        if piece in names:
            out.append(names[piece])
        elif piece.isdigit() and int(piece) < a.idempotent_count:
            out.append(int(piece))
        else:
            raise CliError(f"unknown idempotent {piece!r}; have {list(names)}")
    return sorted(set(out))


def emit(args, doc, default_name):
    root = workspace_root(args)
    out = getattr(args, "out", None)
    text = canonical_json(doc)
    if out:
        atomic_write(Path(out), text)
        return Path(out)
    path = root / default_name
    atomic_write(path, text)
    return path


# -- subcommands ------------------------------------------------------------------------


def cmd_algebra_build(args):
    a, pres = load_algebra(args.input, args.field)
    doc = {
        "kind": "algebra",
        "input": algebra_input_to_json(pres),
        "summary": {
            "dimension": a.dim,
            "corner_dims": [[a.block_dim(i, j) for j in range(a.idempotent_count)]
                            for i in range(a.idempotent_count)],
            "bound_truncates": bool(getattr(a, "bound_truncates", False)),
        },
    }
    entries, det = a.cartan_matrix()
    doc["summary"]["cartan"] = entries
    doc["summary"]["cartan_det"] = det
    path = store_artifact(workspace_root(args), doc)
    print(f"dimension {a.dim}")
    print(f"corner dims {doc['summary']['corner_dims']}")
    print(f"cartan {entries} det {det}")
    print(f"artifact {path}")
    return 0


def cmd_algebra_info(args):
    a, _ = load_algebra(args.input, args.field)
    print(f"dimension {a.dim}")
    print(f"idempotents {a.idempotent_names}")
    print(f"radical dim {a.radical_dim()}")
    entries, det = a.cartan_matrix()
    print(f"cartan {entries} det {det}")
    print(f"center dim {a.center_dimension()}")
    return 0


def cmd_module_check(args):
    a, _ = load_algebra(args.algebra, args.field)
    try:
        mod = parse_module(load_json(args.module), a)
    except (ModuleError, FormatError) as err:
        print(f"INVALID: {err}")
        return 1
    print(f"valid module with dims {dict(zip(a.idempotent_names, mod.dims))}")
    return 0


def cmd_apr(args):
    a, _ = load_algebra(args.algebra, args.field)
    subset = parse_idempotent_subset(a, args.e)
    pres = detect_triangular(a, subset)
    if pres is None:
        print("INVALID: the chosen idempotent set has a nonzero corner e*A*f")
        return 1
    try:
        data = build_apr_tilting(pres, enforce=not args.force, bound=args.bound)
    except AprPreconditionError as err:
        print(f"precondition failure: {err}")
        return 1
    cert = apr_equivalent_algebra(data)
    doc = certificate_to_json(cert)
    path = emit(args, doc, "apr-certificate.json")
    print(f"verdict {cert.verdict}")
    for c in cert.conditions:
        print(f"  {c.id}: {c.verdict}")
    print(f"certificate {path}")
    return 0 if cert.verdict == "VALID" else 1


def cmd_tilting_check(args):
    a, _ = load_algebra(args.algebra, args.field)
    mod = parse_module(load_json(args.module), a)
    rep = tilting_module_check(mod, bound=args.bound)
    doc = {
        "kind": "tilting-report",
        "pd": jsonable(rep.pd),
        "ext_table": {str(k): v for k, v in rep.ext_table.items()},
        "coresolution": rep.coresolution_lengths,
        "failure_stage": rep.failure_stage,
        "verdict": jsonable(rep.verdict),
        "notes": rep.notes,
    }
    path = emit(args, doc, "tilting-report.json")
    print(f"verdict {rep.verdict} (pd {rep.pd})")
    print(f"report {path}")
    return 0 if rep.verdict is True else 1


def cmd_glue(args):
    a, _ = load_algebra(args.algebra, args.field)
    subset = parse_idempotent_subset(a, args.e)
    pres = detect_triangular(a, subset)
    if pres is None:
        print("INVALID: the chosen idempotent set has a nonzero corner e*A*f")
        return 1
    try:
        if args.mode == "stalk":
            if not args.t:
                raise CliError("--mode stalk needs -T MODULE (over the corner C)")
            t_mod = parse_module(load_json(args.t), pres.algebra_c)
            cert = shifted_stalk_glue(pres, t_mod, args.shift, bound=args.bound)
        else:
            y = parse_complex(load_json(args.y), pres.algebra_c,
                              lambda m: parse_module(m, pres.algebra_c)) \
                if args.y else stalk_complex(regular_module(pres.algebra_c), 0)
            z = parse_complex(load_json(args.z), pres.algebra_b,
                              lambda m: parse_module(m, pres.algebra_b)) \
                if args.z else stalk_complex(regular_module(pres.algebra_b), 0)
            spec = GluedTiltingSpec(pres, y, z, args.mode, args.shift)
            cert = glue_jshriek(spec, bound=args.bound) if args.mode == "jshriek" \
                else glue_jstar(spec, bound=args.bound)
    except GlueRefusal as err:
        print(f"refused: {err}")
        return 1
    doc = certificate_to_json(cert)
    path = emit(args, doc, "glue-certificate.json")
    print(f"verdict {cert.verdict}")
    for c in cert.conditions:
        print(f"  {c.id}: {c.verdict}" + (f" window {c.window}" if c.window else ""))
    print(f"certificate {path}")
    return 0 if cert.verdict == "VALID" else 1


def cmd_recollement_verify(args):
    a, _ = load_algebra(args.algebra, args.field)
    subset = parse_idempotent_subset(a, args.e)
    corpus = []
    corpus_dir = Path(args.corpus)
    files = sorted(corpus_dir.glob("*.json"))
    witnesses = []
    for fp in files:
        try:
            corpus.append(parse_module(load_json(fp), a))
        except (ModuleError, FormatError) as err:
            witnesses.append({"file": fp.name, "error": str(err)})
    if not corpus:
        corpus = [regular_module(a)] + \
            [m for m in (simple_module(a, i) for i in range(a.idempotent_count))
             if not m.is_zero()]
    rec = IdempotentRecollement(a, subset)
    report = verify_recollement_axioms(rec, corpus)
    crit = functor_criteria_check(a, subset)
    torsion_rows = []
    pres = detect_triangular(a, subset)
    if pres is not None:
        for mod in corpus:
            wit = torsion_canonical_sequence(pres, mod)
            torsion_rows.append({
                "dims": list(mod.dims),
                "torsion_dim": wit.torsion.total_dim,
                "free_dim": wit.torsion_free.total_dim,
                "exact": wit.exact,
                "hom_vanishes": wit.hom_vanishes,
            })
    doc = {
        "kind": "recollement-report",
        "axioms_ok": report.ok,
        "axiom_failures": [jsonable(vars(c)) for c in report.failures()],
        "corrupted_modules": witnesses,
        "functor_criteria": {
            "quotient_preserves_projectives": jsonable(crit.quotient_preserves_projectives),
            "quotient_projective_over_ambient": jsonable(crit.quotient_projective_over_ambient),
            "complement_quotient_exact": jsonable(crit.complement_quotient_exact),
            "corner_tensor_faithful_dims": jsonable(crit.corner_tensor_faithful_dims),
            "corner_vanishes": crit.corner_vanishes,
            "all_four_iff_corner": crit.all_four == crit.corner_vanishes,
        },
        "torsion": torsion_rows,
    }
    path = emit(args, doc, "recollement-report.json")
    ok = report.ok and not witnesses and (crit.all_four == crit.corner_vanishes)
    print(f"axioms {'ok' if report.ok else 'FAILED'}; "
          f"criteria consistent: {crit.all_four == crit.corner_vanishes}")
    print(f"report {path}")
    return 0 if ok else 1


def cmd_invariants_compare(args):
    a, _ = load_algebra(args.algebra, args.field)
    b, _ = load_algebra(args.other, args.field)
    inv = invariants_compare(a, b)
    for name, (x, y) in inv.values.items():
        print(f"{name}: {x} vs {y} {'==' if x == y else '!='}")
    return 0 if inv.all_equal else 1


def build_parser():
    p = argparse.ArgumentParser(prog="tiltkit",
                                description="exact tilting/derived-equivalence "
                                            "certificates for quiver algebras")
    p.add_argument("--workspace", default=None, help="workspace root "
                   f"(default ${ENV_WORKSPACE} or .tiltkit)")
    p.add_argument("--field", default=None, help="field override: Q (default)")
    sub = p.add_subparsers(dest="command", required=True)

    alg = sub.add_parser("algebra", help="build or inspect algebras")
    alg_sub = alg.add_subparsers(dest="subcommand", required=True)
    ab = alg_sub.add_parser("build")
    ab.add_argument("input")
    ab.set_defaults(func=cmd_algebra_build)
    ai = alg_sub.add_parser("info")
    ai.add_argument("input")
    ai.set_defaults(func=cmd_algebra_info)

    mod = sub.add_parser("module", help="validate module files")
    mod_sub = mod.add_subparsers(dest="subcommand", required=True)
    mc = mod_sub.add_parser("check")
    mc.add_argument("algebra")
    mc.add_argument("module")
    mc.set_defaults(func=cmd_module_check)

    apr = sub.add_parser("apr", help="generalized APR tilting certificate")
    apr.add_argument("algebra")
    apr.add_argument("--e", required=True, help="comma-separated idempotents of e_B")
    apr.add_argument("--bound", type=int, default=12)
    apr.add_argument("--force", action="store_true",
                     help="build T even when the preconditions fail")
    apr.add_argument("--out", default=None)
    apr.set_defaults(func=cmd_apr)

    tc = sub.add_parser("tilting-check", help="three-condition tilting report")
    tc.add_argument("algebra")
    tc.add_argument("module")
    tc.add_argument("--bound", type=int, default=12)
    tc.add_argument("--out", default=None)
    tc.set_defaults(func=cmd_tilting_check)

    gl = sub.add_parser("glue", help="glued tilting certificates")
    gl.add_argument("algebra")
    gl.add_argument("--e", required=True)
    gl.add_argument("--mode", choices=["jshriek", "jstar", "stalk"], required=True)
    gl.add_argument("-Y", dest="y", default=None, help="complex over the corner C")
    gl.add_argument("-Z", dest="z", default=None, help="complex over the corner B")
    gl.add_argument("-T", dest="t", default=None, help="module over C (stalk mode)")
    gl.add_argument("--shift", type=int, default=1)
    gl.add_argument("--bound", type=int, default=12)
    gl.add_argument("--out", default=None)
    gl.set_defaults(func=cmd_glue)

    rec = sub.add_parser("recollement", help="six-functor verification")
    rec_sub = rec.add_subparsers(dest="subcommand", required=True)
    rv = rec_sub.add_parser("verify")
    rv.add_argument("algebra")
    rv.add_argument("corpus")
    rv.add_argument("--e", required=True)
    rv.add_argument("--out", default=None)
    rv.set_defaults(func=cmd_recollement_verify)

    inv = sub.add_parser("invariants", help="derived-invariant comparison")
    inv_sub = inv.add_subparsers(dest="subcommand", required=True)
    ic = inv_sub.add_parser("compare")
    ic.add_argument("algebra")
    ic.add_argument("other")
    ic.set_defaults(func=cmd_invariants_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, FormatError, AlgebraError, ModuleError, LinalgError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
