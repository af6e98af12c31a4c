"""Dense exact matrices, canonical subspaces and linear solving.

Vectors are plain tuples of field elements. Matrices act on column vectors.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .field import QQ, Field, Fp


class Mat:
    """Immutable dense matrix over a `Field`."""

    __slots__ = ("rows", "cols", "field", "_data", "_sp")

    def __init__(self, data: Sequence[Sequence], cols: int, field: Field = QQ):
        self._data = tuple(tuple(r) for r in data)
        self.rows = len(self._data)
        self.cols = cols
        self.field = field
        self._sp = None
        for r in self._data:
            if len(r) != cols:
                raise ValueError(f"row of length {len(r)} in a matrix with {cols} columns")

    @classmethod
    def build(cls, data: Sequence[Sequence], field: Field = QQ, cols: int | None = None) -> Mat:
        """Like the constructor, but coerces every entry into `field`."""
        data = [[field(x) for x in r] for r in data]
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(data, cols, field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = QQ) -> Mat:
        z = field.zero
        return cls([[z] * cols for _ in range(rows)], cols, field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> Mat:
        z, o = field.zero, field.one
        return cls([[o if i == j else z for j in range(n)] for i in range(n)], n, field)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int, field: Field = QQ) -> Mat:
        return cls([[c[i] for c in columns] for i in range(rows)], len(columns), field)

    @classmethod
    def from_sparse(cls, rows: int, cols: int, entries, field: Field = QQ) -> Mat:
        """`entries` yields (i, j, value); repeated positions are summed."""
        z = field.zero
        data = [[z] * cols for _ in range(rows)]
        for i, j, v in entries:
            data[i][j] = data[i][j] + v
        return cls(data, cols, field)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list]:
        return [list(r) for r in self._data]

    def sparse_rows(self) -> list[list[tuple[int, object]]]:
        if self._sp is None:
            self._sp = [[(j, x) for j, x in enumerate(r) if x] for r in self._data]
        return self._sp

    def sparse_columns(self) -> list[dict]:
        out: list[dict] = [{} for _ in range(self.cols)]
        for i, r in enumerate(self.sparse_rows()):
            for j, x in r:
                out[j][i] = x
        return out

    @property
    def T(self) -> Mat:
        if self.rows == 0:
            return Mat.zeros(self.cols, 0, self.field)
        return Mat(list(zip(*self._data)), self.rows, self.field)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for a {self.rows}x{self.cols} matrix")
        z = self.field.zero
        out = []
        for r in self.sparse_rows():
            s = z
            for j, x in r:
                if v[j]:
                    s = s + x * v[j]
            out.append(s)
        return tuple(out)

    def __matmul__(self, other):
        if not isinstance(other, Mat):
            return self.apply(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        z = self.field.zero
        brows = other.sparse_rows()
        out = []
        for r in self.sparse_rows():
            acc: dict = {}
            for k, a in r:
                for j, b in brows[k]:
                    acc[j] = acc.get(j, z) + a * b
            row = [z] * other.cols
            for j, x in acc.items():
                row[j] = x
            out.append(row)
        return Mat(out, other.cols, self.field)

    def _same_shape(self, other: Mat):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: Mat) -> Mat:
        self._same_shape(other)
        return Mat([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], self.cols, self.field)

    def __sub__(self, other: Mat) -> Mat:
        self._same_shape(other)
        return Mat([[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], self.cols, self.field)

    def __neg__(self) -> Mat:
        return Mat([[-a for a in r] for r in self._data], self.cols, self.field)

    def scale(self, c) -> Mat:
        c = self.field(c)
        return Mat([[c * a for a in r] for r in self._data], self.cols, self.field)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.shape, self._data))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self._data)
        return f"Mat({self.rows}x{self.cols}: [{body}])"

    def is_zero(self) -> bool:
        return all(not x for r in self._data for x in r)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Mat.identity(self.rows, self.field)

    def kron(self, other: Mat) -> Mat:
        """Kronecker product; index (i, k) of the result is i * other.rows + k."""
        z = self.field.zero
        data = []
        for r in self._data:
            for s in other._data:
                data.append([a * b if a and b else z for a in r for b in s])
        return Mat(data, self.cols * other.cols, self.field)

    def rank(self) -> int:
        return len(_echelon((dict(r) for r in self.sparse_rows()), self.cols))

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def inverse(self) -> Mat:
        if self.rows != self.cols:
            raise ValueError(f"non-square matrix {self.shape} has no inverse")
        n = self.rows
        aug = Mat([list(r) + list(e) for r, e in zip(self._data, Mat.identity(n, self.field)._data)], 2 * n, self.field)
        red, piv = rref(aug)
        if list(piv) != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return Mat([r[n:] for r in red._data], n, self.field)


def hstack(mats: Sequence[Mat], rows: int | None = None, field: Field = QQ) -> Mat:
    if not mats:
        return Mat.zeros(rows or 0, 0, field)
    n = mats[0].rows
    if any(m.rows != n for m in mats):
        raise ValueError("hstack of matrices with different row counts")
    return Mat([sum((m.row(i) for m in mats), ()) for i in range(n)], sum(m.cols for m in mats), mats[0].field)


def vstack(mats: Sequence[Mat], cols: int | None = None, field: Field = QQ) -> Mat:
    if not mats:
        return Mat.zeros(0, cols or 0, field)
    c = mats[0].cols
    if any(m.cols != c for m in mats):
        raise ValueError("vstack of matrices with different column counts")
    return Mat([r for m in mats for r in m._data], c, mats[0].field)


def block_diag(mats: Sequence[Mat], field: Field = QQ) -> Mat:
    if mats:
        field = mats[0].field
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    entries = []
    r0 = c0 = 0
    for m in mats:
        for i, r in enumerate(m.sparse_rows()):
            for j, x in r:
                entries.append((r0 + i, c0 + j, x))
        r0 += m.rows
        c0 += m.cols
    return Mat.from_sparse(rows, cols, entries, field)


def _echelon(vectors: Iterable[dict], n: int) -> dict[int, dict]:
    """Sparse Gaussian elimination to reduced row echelon form.

    Returns pivot column -> normalized row (dict col -> value).
    """
    rows: dict[int, dict] = {}
    for w in vectors:
        w = {j: x for j, x in w.items() if x}
        while w:
            p = min(w)
            r = rows.get(p)
            if r is None:
                inv = 1 / w[p]
                rows[p] = {j: x * inv for j, x in w.items()}
                break
            c = w[p]
            for j, x in r.items():
                y = w.get(j)
                y = -(c * x) if y is None else y - c * x
                if y:
                    w[j] = y
                else:
                    w.pop(j, None)
        if len(rows) == n:
            break
    order = sorted(rows)
    for idx in range(len(order) - 1, -1, -1):
        p = order[idx]
        r = rows[p]
        for q in order[:idx]:
            rq = rows[q]
            c = rq.get(p)
            if c:
                for j, x in r.items():
                    y = rq.get(j)
                    y = -(c * x) if y is None else y - c * x
                    if y:
                        rq[j] = y
                    else:
                        rq.pop(j, None)
    return rows


def _dense(row: dict, n: int, zero) -> tuple:
    out = [zero] * n
    for j, x in row.items():
        out[j] = x
    return tuple(out)


def rref(m: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form with zero rows dropped, and the pivot columns."""
    rows = _echelon((dict(r) for r in m.sparse_rows()), m.cols)
    piv = sorted(rows)
    z = m.field.zero
    return Mat([_dense(rows[p], m.cols, z) for p in piv], m.cols, m.field), piv


class Subspace:
    """A subspace of F^n held by its canonical RREF basis."""

    __slots__ = ("ambient_dim", "field", "basis", "pivots", "_sp")

    def __init__(self, ambient_dim: int, basis: Sequence[tuple], pivots: Sequence[int], field: Field = QQ):
        self.ambient_dim = ambient_dim
        self.field = field
        self.basis = tuple(basis)
        self.pivots = tuple(pivots)
        self._sp = None

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int, field: Field = QQ) -> Subspace:
        def gen():
            for v in vectors:
                if len(v) != ambient_dim:
                    raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
                # raw ints would turn into floats under elimination
                yield {j: x if isinstance(x, (Fraction, Fp)) else field(x) for j, x in enumerate(v) if x}
        return cls._from_sparse(gen(), ambient_dim, field)

    @classmethod
    def _from_sparse(cls, dicts: Iterable[dict], ambient_dim: int, field: Field) -> Subspace:
        rows = _echelon(dicts, ambient_dim)
        piv = sorted(rows)
        z = field.zero
        return cls(ambient_dim, [_dense(rows[p], ambient_dim, z) for p in piv], piv, field)

    @classmethod
    def zero(cls, n: int, field: Field = QQ) -> Subspace:
        return cls(n, (), (), field)

    @classmethod
    def full(cls, n: int, field: Field = QQ) -> Subspace:
        return cls(n, Mat.identity(n, field)._data, range(n), field)

    @classmethod
    def column_space(cls, m: Mat) -> Subspace:
        return cls._from_sparse(m.sparse_columns(), m.rows, m.field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _sparse(self) -> list[list[tuple[int, object]]]:
        if self._sp is None:
            self._sp = [[(j, x) for j, x in enumerate(r) if x] for r in self.basis]
        return self._sp

    def _check(self, other: Subspace):
        if other.ambient_dim != self.ambient_dim:
            raise ValueError(f"ambient dimensions {self.ambient_dim} and {other.ambient_dim} differ")

    def residual(self, v: Sequence) -> tuple:
        """v reduced modulo the subspace; zero exactly when v lies in it."""
        if len(v) != self.ambient_dim:
            raise ValueError(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        w = list(v)
        for p, r in zip(self.pivots, self._sparse()):
            c = w[p]
            if c:
                for j, x in r:
                    w[j] = w[j] - c * x
        return tuple(w)

    def contains(self, v: Sequence) -> bool:
        return not any(self.residual(v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def coords(self, v: Sequence) -> tuple:
        """Coordinates of a member vector in the RREF basis."""
        return tuple(v[p] for p in self.pivots)

    def coords_checked(self, v: Sequence) -> tuple:
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return self.coords(v)

    def inclusion(self) -> Mat:
        """ambient_dim x dim matrix whose columns are the basis vectors."""
        return Mat.from_columns(self.basis, self.ambient_dim, self.field)

    def coords_matrix(self) -> Mat:
        """dim x ambient_dim matrix reading off pivot coordinates."""
        z, o = self.field.zero, self.field.one
        return Mat([[o if j == p else z for j in range(self.ambient_dim)] for p in self.pivots],
                   self.ambient_dim, self.field)

    def __le__(self, other: Subspace) -> bool:
        self._check(other)
        return all(other.contains(b) for b in self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} in {self.ambient_dim}, pivots {list(self.pivots)})"

    def __add__(self, other: Subspace) -> Subspace:
        return sum_(self, other)

    def __and__(self, other: Subspace) -> Subspace:
        return intersect(self, other)

    def image(self, m: Mat) -> Subspace:
        """Image of this subspace under `m` (m.cols == ambient_dim)."""
        if m.cols != self.ambient_dim:
            raise ValueError(f"{m.shape} matrix on ambient dimension {self.ambient_dim}")
        return Subspace.span([m @ b for b in self.basis], m.rows, m.field)

    def preimage(self, m: Mat) -> Subspace:
        """{v : m v in self}."""
        proj, _ = quotient(self.ambient_dim, self)
        return kernel(proj @ m)

    def quotient(self) -> tuple[Mat, Mat]:
        return quotient(self.ambient_dim, self)


def span(vectors: Iterable[Sequence], ambient_dim: int, field: Field = QQ) -> Subspace:
    return Subspace.span(vectors, ambient_dim, field)


def sum_(u: Subspace, v: Subspace) -> Subspace:
    u._check(v)
    return Subspace.span(u.basis + v.basis, u.ambient_dim, u.field)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    """u ∩ v as the kernel of coefficient vectors c with sum c_i u_i in v."""
    u._check(v)
    if not u.dim or not v.dim:
        return Subspace.zero(u.ambient_dim, u.field)
    proj, _ = quotient(v.ambient_dim, v)
    coeffs = kernel(proj @ u.inclusion())
    inc = u.inclusion()
    return Subspace.span([inc @ c for c in coeffs.basis], u.ambient_dim, u.field)


def contains(u: Subspace, w: Sequence) -> bool:
    return u.contains(w)


def kernel(a: Mat) -> Subspace:
    return kernel_of_rows((dict(r) for r in a.sparse_rows()), a.cols, a.field)


def kernel_of_rows(rows: Iterable[dict], nvars: int, field: Field = QQ) -> Subspace:
    """Solution space of the homogeneous system whose equations are sparse rows."""
    red = _echelon(rows, nvars)
    piv = sorted(red)
    pivset = set(piv)
    o = field.one
    vecs = []
    for f in range(nvars):
        if f in pivset:
            continue
        v = {f: o}
        for p in piv:
            x = red[p].get(f)
            if x:
                v[p] = -x
        vecs.append(v)
    return Subspace._from_sparse(vecs, nvars, field)


def image(a: Mat) -> Subspace:
    return Subspace.column_space(a)


def solve(a: Mat, b: Sequence) -> tuple[tuple, Subspace] | None:
    """A particular solution of a x = b and the kernel of a, or None if inconsistent.

    Free variables of the particular solution are set to zero.
    """
    if len(b) != a.rows:
        raise ValueError(f"right-hand side of length {len(b)} for {a.rows} equations")
    aug = Mat([list(r) + [x] for r, x in zip(a._data, b)], a.cols + 1, a.field)
    red, piv = rref(aug)
    if piv and piv[-1] == a.cols:
        return None
    x = [a.field.zero] * a.cols
    for i, p in enumerate(piv):
        x[p] = red[i, a.cols]
    return tuple(x), kernel(a)


def solve_matrix(a: Mat, b: Mat) -> Mat | None:
    """A particular X with a X = b (free variables zero), or None."""
    if b.rows != a.rows:
        raise ValueError(f"right-hand side with {b.rows} rows for {a.rows} equations")
    aug = Mat([ra + rb for ra, rb in zip(a._data, b._data)], a.cols + b.cols, a.field)
    red, piv = rref(aug)
    if piv and piv[-1] >= a.cols:
        return None
    z = a.field.zero
    x = [[z] * b.cols for _ in range(a.cols)]
    for i, p in enumerate(piv):
        x[p] = list(red.row(i)[a.cols:])
    return Mat(x, b.cols, a.field)


def quotient(ambient_dim: int, u: Subspace) -> tuple[Mat, Mat]:
    """Projection onto the non-pivot coordinates of u, and its standard section.

    proj @ sect is the identity and ker(proj) = u.
    """
    if u.ambient_dim != ambient_dim:
        raise ValueError(f"subspace of ambient dimension {u.ambient_dim}, expected {ambient_dim}")
    f = u.field
    z, o = f.zero, f.one
    pivset = set(u.pivots)
    comp = [j for j in range(ambient_dim) if j not in pivset]
    where = {p: i for i, p in enumerate(u.pivots)}
    proj = []
    for c in comp:
        row = [z] * ambient_dim
        row[c] = o
        for p, i in where.items():
            x = u.basis[i][c]
            if x:
                row[p] = -x
        proj.append(row)
    sect = [[o if j == c else z for c in comp] for j in range(ambient_dim)]
    return Mat(proj, ambient_dim, f), Mat(sect, len(comp), f)


def right_inverse(m: Mat) -> Mat:
    """Some X with m X = identity; m must be surjective."""
    x = solve_matrix(m, Mat.identity(m.rows, m.field))
    if x is None:
        raise ValueError("matrix is not surjective")
    return x


def solve_rows(rows: Sequence[dict], rhs: Sequence, nvars: int, field: Field = QQ) -> tuple | None:
    """Particular solution (free variables zero) of a sparse system, or None."""
    aug = []
    for r, b in zip(rows, rhs):
        d = dict(r)
        if b:
            d[nvars] = b
        aug.append(d)
    red = _echelon(aug, nvars + 1)
    if nvars in red:
        return None
    x = [field.zero] * nvars
    for p, r in red.items():
        v = r.get(nvars)
        if v:
            x[p] = v
    return tuple(x)
