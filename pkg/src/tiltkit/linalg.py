"""Exact dense linear algebra over the rationals and prime fields.

Everything here is deterministic: pivots are always chosen leftmost-column,
topmost-row, and quotient coset representatives are standard basis vectors
at the non-pivot coordinates.  All arithmetic is exact (``fractions.Fraction``
or residues mod p); nothing is ever rounded.
"""

from __future__ import annotations

from fractions import Fraction


class LinalgError(Exception):
    """Contract violation in a linear-algebra operation (e.g. shape mismatch)."""


class FpElement:
    """Residue class mod p with field operator overloads."""

    __slots__ = ("p", "v")

    def __init__(self, p, v):
        self.p = p
        self.v = v % p

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise LinalgError("mixed prime fields")
            return other
        if isinstance(other, int):
            return FpElement(self.p, other)
        if isinstance(other, Fraction):
            return FpElement(self.p, other.numerator * pow(other.denominator, -1, self.p))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElement(self.p, self.v + o.v)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElement(self.p, self.v - o.v)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElement(self.p, o.v - self.v)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElement(self.p, self.v * o.v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElement(self.p, self.v * pow(o.v, -1, self.p))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __neg__(self):
        return FpElement(self.p, -self.v)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        if isinstance(other, Fraction):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v}m{self.p}"


class RationalField:
    """The field of rationals with arbitrary-precision integer arithmetic."""

    name = "Q"
    characteristic = 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def of(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise LinalgError(f"cannot coerce {x!r} into Q")

    def format(self, x):
        return f"{x.numerator}/{x.denominator}"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField:
    """The field F_p for a prime p."""

    def __init__(self, p):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise LinalgError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"
        self.characteristic = p

    def zero(self):
        return FpElement(self.p, 0)

    def one(self):
        return FpElement(self.p, 1)

    def of(self, x):
        if isinstance(x, FpElement):
            if x.p != self.p:
                raise LinalgError("mixed prime fields")
            return x
        if isinstance(x, int):
            return FpElement(self.p, x)
        if isinstance(x, Fraction):
            return FpElement(self.p, x.numerator * pow(x.denominator, -1, self.p))
        if isinstance(x, str):
            return self.of(Fraction(x))
        raise LinalgError(f"cannot coerce {x!r} into F_{self.p}")

    def format(self, x):
        return f"{x.v}/1"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return self.name


QQ = RationalField()


class Matrix:
    """Dense row-major matrix over an exact field.

    Treat instances as immutable; all operations return fresh matrices.
    """

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, data, cols=None):
        self.field = field
        self.data = [list(row) for row in data]
        self.rows = len(self.data)
        if self.rows:
            self.cols = len(self.data[0])
            if any(len(r) != self.cols for r in self.data):
                raise LinalgError("ragged matrix rows")
        else:
            self.cols = 0 if cols is None else cols

    @staticmethod
    def zeros(field, rows, cols):
        z = field.zero()
        return Matrix(field, [[z] * cols for _ in range(rows)], cols=cols)

    @staticmethod
    def identity(field, n):
        z, o = field.zero(), field.one()
        return Matrix(field, [[o if i == j else z for j in range(n)] for i in range(n)], cols=n)

    @staticmethod
    def from_columns(field, columns, rows=None):
        if not columns:
            return Matrix.zeros(field, rows or 0, 0)
        n = len(columns[0])
        return Matrix(field, [[col[i] for col in columns] for i in range(n)], cols=len(columns))

    def column(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def row(self, i):
        return list(self.data[i])

    def is_zero(self):
        z = self.field.zero()
        return all(x == z for row in self.data for x in row)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"

    def transpose(self):
        return Matrix(self.field, [[self.data[i][j] for i in range(self.rows)]
                                   for j in range(self.cols)], cols=self.rows)

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LinalgError("shape mismatch in add")
        return Matrix(self.field, [[a + b for a, b in zip(r1, r2)]
                                   for r1, r2 in zip(self.data, other.data)], cols=self.cols)

    def __sub__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LinalgError("shape mismatch in sub")
        return Matrix(self.field, [[a - b for a, b in zip(r1, r2)]
                                   for r1, r2 in zip(self.data, other.data)], cols=self.cols)

    def scale(self, c):
        return Matrix(self.field, [[c * x for x in row] for row in self.data], cols=self.cols)

    def __neg__(self):
        return self.scale(-self.field.one())

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise LinalgError(f"shape mismatch in mul: {self.rows}x{self.cols} * {other.rows}x{other.cols}")
        z = self.field.zero()
        out = []
        for i in range(self.rows):
            ri = self.data[i]
            row = []
            for j in range(other.cols):
                s = z
                for k in range(self.cols):
                    a = ri[k]
                    if a != z:
                        s = s + a * other.data[k][j]
                row.append(s)
            out.append(row)
        return Matrix(self.field, out, cols=other.cols)

    def apply(self, vec):
        """Matrix times column vector (a plain list)."""
        if len(vec) != self.cols:
            raise LinalgError("vector length mismatch in apply")
        z = self.field.zero()
        out = []
        for i in range(self.rows):
            s = z
            ri = self.data[i]
            for k in range(self.cols):
                if ri[k] != z:
                    s = s + ri[k] * vec[k]
            out.append(s)
        return out

    def hstack(self, other):
        if self.rows != other.rows:
            raise LinalgError("row mismatch in hstack")
        return Matrix(self.field, [r1 + r2 for r1, r2 in zip(self.data, other.data)],
                      cols=self.cols + other.cols)

    def vstack(self, other):
        if self.cols != other.cols:
            raise LinalgError("column mismatch in vstack")
        return Matrix(self.field, self.data + other.data, cols=self.cols)

    def rank_and_rref(self):
        """Reduced row echelon form with deterministic pivoting.

        Returns (rank, rref, pivot_columns).  The pivot in each step is the
        topmost nonzero entry of the leftmost unfinished column.
        """
        z = self.field.zero()
        m = [list(row) for row in self.data]
        nr, nc = self.rows, self.cols
        pivots = []
        r = 0
        for c in range(nc):
            if r >= nr:
                break
            sel = None
            for i in range(r, nr):
                if m[i][c] != z:
                    sel = i
                    break
            if sel is None:
                continue
            if sel != r:
                m[r], m[sel] = m[sel], m[r]
            pv = m[r][c]
            if pv != self.field.one():
                inv = self.field.one() / pv
                m[r] = [inv * x for x in m[r]]
            for i in range(nr):
                if i != r and m[i][c] != z:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return r, Matrix(self.field, m, cols=nc), pivots

    def rank(self):
        return self.rank_and_rref()[0]

    def nullspace(self):
        """Deterministic kernel basis: one vector per free column, with the
        free coordinate set to 1 and other free coordinates 0."""
        rank, rref, pivots = self.rank_and_rref()
        z, o = self.field.zero(), self.field.one()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        basis = []
        for fc in free:
            v = [z] * self.cols
            v[fc] = o
            for r, pc in enumerate(pivots):
                v[pc] = -rref.data[r][fc]
            basis.append(v)
        return basis

    def solve(self, rhs):
        """Solve self * x = rhs.

        Returns None when inconsistent; otherwise (particular, kernel_basis)
        where the particular solution sets all free variables to zero.
        A length mismatch between rhs and the row count is a contract
        violation and raises LinalgError.
        """
        if len(rhs) != self.rows:
            raise LinalgError("rhs length must equal row count")
        z = self.field.zero()
        aug = Matrix(self.field, [row + [rhs[i]] for i, row in enumerate(self.data)],
                     cols=self.cols + 1)
        rank, rref, pivots = aug.rank_and_rref()
        if self.cols in pivots:
            return None
        x = [z] * self.cols
        for r, pc in enumerate(pivots):
            x[pc] = rref.data[r][self.cols]
        return x, self.nullspace()

    def column_space_basis(self):
        """Columns of self at the pivot positions of its rref."""
        _, _, pivots = self.rank_and_rref()
        return [self.column(j) for j in pivots]

    def inverse(self):
        if self.rows != self.cols:
            raise LinalgError("inverse of non-square matrix")
        n = self.rows
        aug = self.hstack(Matrix.identity(self.field, n))
        rank, rref, _ = aug.rank_and_rref()
        if rank < n:
            raise LinalgError("matrix is singular")
        return Matrix(self.field, [row[n:] for row in rref.data], cols=n)

    def is_invertible(self):
        return self.rows == self.cols and self.rank() == self.rows

    def trace(self):
        if self.rows != self.cols:
            raise LinalgError("trace of non-square matrix")
        s = self.field.zero()
        for i in range(self.rows):
            s = s + self.data[i][i]
        return s

    def det(self):
        """Determinant by fraction-free-ish Gaussian elimination (exact field)."""
        if self.rows != self.cols:
            raise LinalgError("det of non-square matrix")
        z = self.field.zero()
        n = self.rows
        m = [list(row) for row in self.data]
        det = self.field.one()
        for c in range(n):
            sel = None
            for i in range(c, n):
                if m[i][c] != z:
                    sel = i
                    break
            if sel is None:
                return z
            if sel != c:
                m[c], m[sel] = m[sel], m[c]
                det = -det
            det = det * m[c][c]
            inv = self.field.one() / m[c][c]
            for i in range(c + 1, n):
                if m[i][c] != z:
                    f = m[i][c] * inv
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return det


def span_basis(field, vectors, ambient_dim):
    """Deterministic basis of the span of the given vectors in k^ambient_dim.

    The basis is the nonzero rows of the rref of the stacked vectors, so it
    only depends on the span and the input order.
    """
    for v in vectors:
        if len(v) != ambient_dim:
            raise LinalgError("generator has wrong length")
    if not vectors:
        return []
    m = Matrix(field, vectors, cols=ambient_dim)
    rank, rref, _ = m.rank_and_rref()
    return [rref.row(i) for i in range(rank)]


class SubspaceQuotient:
    """A subspace of k^n together with a complement and the quotient projection.

    Attributes:
        basis: rref basis of the span of the generators.
        reps: standard basis coset representatives of the quotient (as
            ambient-coordinate vectors, one per free column).
        projection: Matrix mapping ambient coordinates to quotient coordinates.
        section: Matrix mapping quotient coordinates back to the chosen
            representatives (projection * section = identity).
    """

    __slots__ = ("field", "ambient_dim", "basis", "reps", "rep_indices", "projection", "section")

    def __init__(self, field, ambient_dim, generators):
        self.field = field
        self.ambient_dim = ambient_dim
        for v in generators:
            if len(v) != ambient_dim:
                raise LinalgError("generator has wrong length")
        z, o = field.zero(), field.one()
        if generators:
            rank, rref, pivots = Matrix(field, generators, cols=ambient_dim).rank_and_rref()
        else:
            rank, rref, pivots = 0, Matrix.zeros(field, 0, ambient_dim), []
        self.basis = [rref.row(i) for i in range(rank)]
        pivot_set = set(pivots)
        free = [c for c in range(ambient_dim) if c not in pivot_set]
        self.rep_indices = free
        self.reps = []
        for fc in free:
            v = [z] * ambient_dim
            v[fc] = o
            self.reps.append(v)
        # proj(v) reads off the free coordinates of v reduced modulo the span.
        proj_rows = []
        for fc in free:
            row = [z] * ambient_dim
            row[fc] = o
            for r, pc in enumerate(pivots):
                row[pc] = -rref.data[r][fc]
            proj_rows.append(row)
        self.projection = Matrix(field, proj_rows, cols=ambient_dim)
        self.section = Matrix.from_columns(field, self.reps, rows=ambient_dim)

    @property
    def subspace_dim(self):
        return len(self.basis)

    @property
    def quotient_dim(self):
        return len(self.reps)

    def project(self, vec):
        return self.projection.apply(vec)

    def contains(self, vec):
        z = self.field.zero()
        return all(x == z for x in self.project(vec))


def subspace_quotient(field, ambient_dim, generators):
    """Span basis, quotient coset representatives, and projection map."""
    return SubspaceQuotient(field, ambient_dim, generators)


def intersect_spans(field, ambient_dim, vectors_a, vectors_b):
    """Basis of the intersection of two spans (Zassenhaus-free direct solve)."""
    a = span_basis(field, vectors_a, ambient_dim)
    b = span_basis(field, vectors_b, ambient_dim)
    if not a or not b:
        return []
    # x in span(a) with x also in span(b): solve [A^T | -B^T] on coefficients.
    m = Matrix.from_columns(field, a, rows=ambient_dim).hstack(
        Matrix.from_columns(field, b, rows=ambient_dim).scale(-field.one()))
    vecs = []
    for ker in m.nullspace():
        coeff_a = ker[: len(a)]
        v = [field.zero()] * ambient_dim
        for c, vec in zip(coeff_a, a):
            if c != field.zero():
                v = [x + c * y for x, y in zip(v, vec)]
        vecs.append(v)
    return span_basis(field, vecs, ambient_dim)


def solve_matrix_equation(field, basis_matrices, target):
    """Coordinates of target in the span of basis_matrices, or None.

    All matrices must share a shape; compares entrywise as stacked vectors.
    """
    if not basis_matrices:
        return None if not target.is_zero() else []
    rows = target.rows * target.cols
    cols_m = Matrix.from_columns(
        field,
        [[m.data[i][j] for i in range(m.rows) for j in range(m.cols)] for m in basis_matrices],
        rows=rows)
    rhs = [target.data[i][j] for i in range(target.rows) for j in range(target.cols)]
    sol = cols_m.solve(rhs)
    return None if sol is None else sol[0]
