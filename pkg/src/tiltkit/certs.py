"""Certificate objects and the derived-invariant comparison layer.

Every claimed derived equivalence is accompanied by a certificate recording
which conditions were checked (with their degree windows) and a comparison
of cheap derived invariants between the two algebras; a certificate is VALID
only when every condition holds and every invariant agrees.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import FDAlgebra
from .modules import (
    decompose_instances,
    is_isomorphic_indec,
    projective_module,
    regular_module,
)


@dataclass
class Condition:
    id: str
    verdict: object                 # True / False / "unknown"
    window: tuple | None = None     # (lo, hi) degree window actually checked
    witness: object = None          # offending degree / map data on failure

    def holds(self):
        return self.verdict is True


@dataclass
class InvariantComparison:
    values: dict                    # name -> (left, right)

    @property
    def all_equal(self):
        return all(a == b for a, b in self.values.values())


@dataclass
class EquivalenceCertificate:
    kind: str
    conditions: list
    endo: FDAlgebra | None = None
    endo_triangular: object = None  # TriangularPresentation of E when applicable
    invariants: InvariantComparison | None = None
    notes: list = field(default_factory=list)

    @property
    def verdict(self):
        ok = all(c.holds() for c in self.conditions)
        if self.invariants is not None:
            ok = ok and self.invariants.all_equal
        return "VALID" if ok else "INVALID"

    def condition(self, cid):
        for c in self.conditions:
            if c.id == cid:
                return c
        return None


def refine_idempotents(a: FDAlgebra) -> FDAlgebra:
    """Replace the distinguished idempotents by a complete primitive
    orthogonal system obtained from the indecomposable summands of the
    regular module; no-op when the current system is already primitive."""
    if all(a.is_idempotent_primitive(i) for i in range(a.idempotent_count)):
        return a
    reg = regular_module(a)
    # regular-module coordinates <-> algebra coordinates
    n = a.idempotent_count
    reg_coord_of = [None] * a.dim
    pos = 0
    for j in range(n):
        for i in range(n):
            for k in a.basis_in_block(j, i):
                reg_coord_of[k] = pos
                pos += 1
    unit_reg = [a.field.zero()] * a.dim
    u = a.unit()
    for k in range(a.dim):
        unit_reg[reg_coord_of[k]] = u[k]
    new_idems = []
    from .modules import _section_of_projection
    for _, proj in decompose_instances(reg):
        incl = _section_of_projection(proj)
        psi = incl.compose(proj).total_matrix()
        img = psi.apply(unit_reg)
        elem = [a.field.zero()] * a.dim
        for k in range(a.dim):
            elem[k] = img[reg_coord_of[k]]
        new_idems.append(elem)
    return FDAlgebra.from_structure_constants(
        a.field, a.labels, a.table, new_idems,
        idempotent_names=[f"p{i}" for i in range(len(new_idems))])


def simple_count(a: FDAlgebra) -> int:
    """Number of isomorphism classes of simple modules."""
    refined = refine_idempotents(a)
    classes = []
    for i in range(refined.idempotent_count):
        p = projective_module(refined, i)
        if not any(is_isomorphic_indec(p, q) for q in classes):
            classes.append(p)
    return len(classes)


def basic_cartan_det(a: FDAlgebra) -> int:
    """Cartan determinant over one representative primitive idempotent per
    isomorphism class (the Cartan matrix of the basic algebra)."""
    refined = refine_idempotents(a)
    reps = []
    rep_mods = []
    for i in range(refined.idempotent_count):
        p = projective_module(refined, i)
        if not any(is_isomorphic_indec(p, q) for q in rep_mods):
            rep_mods.append(p)
            reps.append(i)
    from fractions import Fraction
    from .linalg import Matrix, QQ
    n = len(reps)
    entries = [[Fraction(refined.block_dim(i, j)) for j in reps] for i in reps]
    det = Matrix(QQ, entries, cols=n).det() if n else Fraction(1)
    return int(det)


def invariants_compare(a: FDAlgebra, e: FDAlgebra) -> InvariantComparison:
    """Simple count, basic Cartan determinant, and center dimension."""
    return InvariantComparison({
        "simple_count": (simple_count(a), simple_count(e)),
        "cartan_det": (basic_cartan_det(a), basic_cartan_det(e)),
        "center_dim": (a.center_dimension(), e.center_dimension()),
    })
