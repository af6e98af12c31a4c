"""Finite-dimensional unital associative algebras given by structure constants,
their modules, and the standard constructions on them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .field import QQ, Field
from .linalg import Mat, Subspace, kernel, kernel_of_rows, quotient, vstack
from .report import CoisoError, Report


class Algebra:
    """Unital algebra with basis e_0..e_{dim-1} and e_i e_j = sum_k c[i][j][k] e_k.

    A deformed algebra additionally carries a central nilpotent `lam` with
    lam^order = 0, standing in for the formal parameter.
    """

    def __init__(self, dim: int, structure: Iterable[tuple[int, int, int, object]], unit: Sequence,
                 field: Field = QQ, label: str = "", lam: Sequence | None = None, order: int | None = None):
        self.dim = dim
        self.field = field
        self.label = label
        z = field.zero
        table = [[{} for _ in range(dim)] for _ in range(dim)]
        for i, j, k, c in structure:
            c = field(c)
            d = table[i][j]
            d[k] = d.get(k, z) + c
        self._table = tuple(tuple(tuple(sorted((k, c) for k, c in d.items() if c)) for d in row) for row in table)
        self.unit = tuple(field(x) for x in unit)
        if len(self.unit) != dim:
            raise ValueError(f"unit of length {len(self.unit)} for dimension {dim}")
        self.lam = None if lam is None else tuple(field(x) for x in lam)
        self.order = order
        self._left: list | None = None
        self._right: list | None = None
        self._gens = None
        self._cache: dict = {}

    @classmethod
    def from_products(cls, dim: int, products, unit, field: Field = QQ, **kw) -> Algebra:
        """`products[i][j]` is the coordinate vector of e_i e_j."""
        entries = [(i, j, k, c) for i in range(dim) for j in range(dim)
                   for k, c in enumerate(products[i][j]) if c]
        return cls(dim, entries, unit, field, **kw)

    @property
    def deformed(self) -> bool:
        return self.lam is not None

    def structure_entries(self) -> list[tuple[int, int, int, object]]:
        return [(i, j, k, c) for i in range(self.dim) for j in range(self.dim) for k, c in self._table[i][j]]

    def basis_vector(self, i: int) -> tuple:
        z, o = self.field.zero, self.field.one
        return tuple(o if k == i else z for k in range(self.dim))

    def zero_vector(self) -> tuple:
        return (self.field.zero,) * self.dim

    def product(self, i: int, j: int) -> tuple:
        out = [self.field.zero] * self.dim
        for k, c in self._table[i][j]:
            out[k] = c
        return tuple(out)

    def mul(self, u: Sequence, v: Sequence) -> tuple:
        out = [self.field.zero] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            row = self._table[i]
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, c in row[j]:
                    out[k] = out[k] + ab * c
        return tuple(out)

    def power(self, u: Sequence, n: int) -> tuple:
        out = self.unit
        for _ in range(n):
            out = self.mul(out, u)
        return out

    def left_basis(self) -> list[Mat]:
        """L_i : x -> e_i x, one matrix per basis element."""
        if self._left is None:
            n = self.dim
            self._left = [Mat.from_sparse(n, n, ((k, j, c) for j in range(n) for k, c in self._table[i][j]), self.field)
                          for i in range(n)]
        return self._left

    def right_basis(self) -> list[Mat]:
        """R_j : x -> x e_j, one matrix per basis element."""
        if self._right is None:
            n = self.dim
            self._right = [Mat.from_sparse(n, n, ((k, i, c) for i in range(n) for k, c in self._table[i][j]), self.field)
                           for j in range(n)]
        return self._right

    def left_mat(self, u: Sequence) -> Mat:
        return combine(self.left_basis(), u, self.dim, self.field)

    def right_mat(self, v: Sequence) -> Mat:
        return combine(self.right_basis(), v, self.dim, self.field)

    def lam_op(self) -> Mat:
        if self.lam is None:
            raise CoisoError(f"algebra {self.label!r} carries no deformation parameter")
        return self.left_mat(self.lam)

    def generators(self) -> list[tuple]:
        """A small generating set as a unital algebra, chosen greedily from the basis."""
        if self._gens is None:
            gens: list[tuple] = []
            closure = subalgebra_closure(self, [])
            for i in range(self.dim):
                if closure.dim == self.dim:
                    break
                e = self.basis_vector(i)
                if not closure.contains(e):
                    gens.append(e)
                    closure = subalgebra_closure(self, gens)
            self._gens = gens
        return self._gens

    def opposite(self) -> Algebra:
        return Algebra(self.dim, [(j, i, k, c) for i, j, k, c in self.structure_entries()], self.unit,
                       self.field, label=f"{self.label}^op", lam=self.lam, order=self.order)

    def with_deformation(self, lam: Sequence, order: int) -> Algebra:
        return Algebra(self.dim, self.structure_entries(), self.unit, self.field, self.label, lam=lam, order=order)

    def undeformed(self) -> Algebra:
        return Algebra(self.dim, self.structure_entries(), self.unit, self.field, self.label)

    def _key(self):
        return (self.dim, self.field, self._table, self.unit, self.lam, self.order)

    def __eq__(self, other):
        if not isinstance(other, Algebra):
            return NotImplemented
        return self is other or self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        tag = f" deformed(order {self.order})" if self.deformed else ""
        return f"Algebra({self.label or '?'}, dim {self.dim}{tag})"


def combine(mats: Sequence[Mat], coeffs: Sequence, n: int, field: Field) -> Mat:
    """sum_i coeffs[i] * mats[i] for n x n matrices."""
    z = field.zero
    acc = [[z] * n for _ in range(n)]
    for m, c in zip(mats, coeffs):
        if not c:
            continue
        for i, r in enumerate(m.sparse_rows()):
            row = acc[i]
            for j, x in r:
                row[j] = row[j] + c * x
    return Mat(acc, n, field)


def validate_algebra(a: Algebra) -> Report:
    rep = Report(f"algebra {a.label}")
    n = a.dim
    bad = None
    for i in range(n):
        for j in range(n):
            eij = a.product(i, j)
            for k in range(n):
                lhs = a.mul(eij, a.basis_vector(k))
                rhs = a.mul(a.basis_vector(i), a.product(j, k))
                if lhs != rhs:
                    bad = (i, j, k)
                    break
            if bad:
                break
        if bad:
            break
    rep.check("associativity", bad is None, {"basis_triple": bad} if bad else None)
    bad_unit = None
    for i in range(n):
        e = a.basis_vector(i)
        if a.mul(a.unit, e) != e:
            bad_unit = ("left", i)
            break
        if a.mul(e, a.unit) != e:
            bad_unit = ("right", i)
            break
    rep.check("unit", bad_unit is None, {"side": bad_unit[0], "basis": bad_unit[1]} if bad_unit else None)
    return rep


def subalgebra_closure(a: Algebra, seed: Iterable[Sequence]) -> Subspace:
    """Smallest unital subalgebra containing `seed`: the span of all words in it."""
    seed = [tuple(s) for s in seed]
    cur = Subspace.span([a.unit], a.dim, a.field)
    frontier = list(cur.basis)
    while frontier:
        new = [a.mul(x, g) for x in frontier for g in seed]
        nxt = Subspace.span(cur.basis + tuple(new), a.dim, a.field)
        if nxt.dim == cur.dim:
            break
        frontier = [b for b in nxt.basis if not cur.contains(b)]
        cur = nxt
    return cur


def left_ideal_generated(a: Algebra, gens: Iterable[Sequence]) -> Subspace:
    # unital, so A·g is already closed under left multiplication
    return Subspace.span([a.mul(a.basis_vector(i), g) for g in gens for i in range(a.dim)], a.dim, a.field)


def two_sided_ideal_generated(a: Algebra, gens: Iterable[Sequence]) -> Subspace:
    vecs = []
    for g in gens:
        for i in range(a.dim):
            left = a.mul(a.basis_vector(i), g)
            vecs.extend(a.mul(left, a.basis_vector(j)) for j in range(a.dim))
    return Subspace.span(vecs, a.dim, a.field)


def is_left_ideal(a: Algebra, j: Subspace) -> bool:
    return all(j.contains(a.mul(a.basis_vector(i), b)) for b in j.basis for i in range(a.dim))


def is_right_ideal(a: Algebra, j: Subspace) -> bool:
    return all(j.contains(a.mul(b, a.basis_vector(i))) for b in j.basis for i in range(a.dim))


def is_subalgebra(a: Algebra, s: Subspace) -> bool:
    return s.contains(a.unit) and all(s.contains(a.mul(x, y)) for x in s.basis for y in s.basis)


def idealizer(a: Algebra, j: Subspace) -> Subspace:
    """N(j) = {x : j x ⊆ j}, the largest subalgebra in which j is two-sided."""
    if not is_left_ideal(a, j):
        raise CoisoError("idealizer needs a left ideal")
    if j.dim == 0:
        return Subspace.full(a.dim, a.field)
    proj, _ = quotient(a.dim, j)
    return kernel(vstack([proj @ a.left_mat(b) for b in j.basis]))


def induced_algebra(a: Algebra, s: Subspace, label: str = "") -> Algebra:
    """The subalgebra `s` as an algebra in its own RREF coordinates."""
    if not is_subalgebra(a, s):
        raise CoisoError("subspace is not a unital subalgebra")
    prods = [[s.coords(a.mul(x, y)) for y in s.basis] for x in s.basis]
    lam = None
    if a.lam is not None:
        if not s.contains(a.lam):
            raise CoisoError("deformation parameter lies outside the subalgebra")
        lam = s.coords(a.lam)
    return Algebra.from_products(s.dim, prods, s.coords(a.unit), a.field, label=label or f"{a.label}|sub",
                                 lam=lam, order=a.order if lam is not None else None)


def quotient_algebra(a: Algebra, ideal: Subspace, label: str = "") -> tuple[Algebra, Mat, Mat]:
    """a/ideal on the canonical complement, with the projection and its section."""
    if not (is_left_ideal(a, ideal) and is_right_ideal(a, ideal)):
        raise CoisoError("quotient needs a two-sided ideal")
    proj, sect = quotient(a.dim, ideal)
    reps = sect.columns()
    prods = [[proj @ a.mul(x, y) for y in reps] for x in reps]
    lam = None if a.lam is None else proj @ a.lam
    q = Algebra.from_products(proj.rows, prods, proj @ a.unit, a.field, label=label or f"{a.label}/I",
                              lam=lam, order=a.order if lam is not None else None)
    return q, proj, sect


def matrix_algebra(a: Algebra, n: int, label: str = "") -> Algebra:
    """Mat_n(a) with basis E_pq ⊗ e_i at index (p*n + q)*dim + i."""
    if n < 1:
        raise CoisoError("matrix size must be at least 1")
    d = a.dim

    def idx(p, q, i):
        return (p * n + q) * d + i

    entries = []
    for i, j, k, c in a.structure_entries():
        for p in range(n):
            for q in range(n):
                for s in range(n):
                    entries.append((idx(p, q, i), idx(q, s, j), idx(p, s, k), c))
    z = a.field.zero

    def diag(v):
        out = [z] * (n * n * d)
        for p in range(n):
            for i, x in enumerate(v):
                out[idx(p, p, i)] = x
        return out

    return Algebra(n * n * d, entries, diag(a.unit), a.field, label=label or f"Mat_{n}({a.label})",
                   lam=None if a.lam is None else diag(a.lam), order=a.order)


def direct_product(a: Algebra, b: Algebra, label: str = "") -> Algebra:
    off = a.dim
    entries = list(a.structure_entries()) + [(i + off, j + off, k + off, c) for i, j, k, c in b.structure_entries()]
    return Algebra(a.dim + b.dim, entries, a.unit + b.unit, a.field, label=label or f"{a.label}x{b.label}")


def tensor_algebra(a: Algebra, b: Algebra, label: str = "") -> Algebra:
    """a ⊗ b with basis e_i ⊗ f_j at index i*dim(b) + j."""
    db = b.dim
    entries = [(i1 * db + i2, j1 * db + j2, k1 * db + k2, c1 * c2)
               for i1, j1, k1, c1 in a.structure_entries() for i2, j2, k2, c2 in b.structure_entries()]
    unit = [x * y for x in a.unit for y in b.unit]
    return Algebra(a.dim * db, entries, unit, a.field, label=label or f"{a.label}⊗{b.label}")


@dataclass(frozen=True)
class AlgMorphism:
    source: Algebra
    target: Algebra
    matrix: Mat

    def __call__(self, v: Sequence) -> tuple:
        return self.matrix @ v

    def __matmul__(self, other: AlgMorphism) -> AlgMorphism:
        if other.target != self.source:
            raise CoisoError("morphisms are not composable")
        return AlgMorphism(other.source, self.target, self.matrix @ other.matrix)

    @classmethod
    def identity(cls, a: Algebra) -> AlgMorphism:
        return cls(a, a, Mat.identity(a.dim, a.field))


def validate_morphism(f: AlgMorphism) -> Report:
    a, b = f.source, f.target
    rep = Report("algebra morphism")
    if not rep.check("shape", f.matrix.shape == (b.dim, a.dim), {"shape": f.matrix.shape}):
        return rep
    bad = None
    for i in range(a.dim):
        for j in range(a.dim):
            if f(a.product(i, j)) != b.mul(f(a.basis_vector(i)), f(a.basis_vector(j))):
                bad = (i, j)
                break
        if bad:
            break
    rep.check("multiplicative", bad is None, {"basis_pair": bad})
    rep.check("unital", f(a.unit) == b.unit, {"image_of_unit": f(a.unit)})
    return rep


def is_isomorphism(f: AlgMorphism) -> bool:
    return validate_morphism(f).ok and f.matrix.is_invertible()


class PlainBimodule:
    """A (left_alg, right_alg)-bimodule of dimension `dim`.

    `left[i]` is the action of the i-th basis element of left_alg, `right[j]`
    the action x -> x e_j of the j-th basis element of right_alg.
    """

    def __init__(self, left_alg: Algebra, right_alg: Algebra, dim: int,
                 left: Sequence[Mat], right: Sequence[Mat], label: str = ""):
        self.left_alg = left_alg
        self.right_alg = right_alg
        self.dim = dim
        self.left = tuple(left)
        self.right = tuple(right)
        self.label = label
        self.field = left_alg.field
        self._cache: dict = {}
        if len(self.left) != left_alg.dim or len(self.right) != right_alg.dim:
            raise CoisoError("one action matrix per basis element is required")
        for m in self.left + self.right:
            if m.shape != (dim, dim):
                raise CoisoError(f"action matrix of shape {m.shape} on a module of dimension {dim}")

    def left_op(self, b: Sequence) -> Mat:
        return combine(self.left, b, self.dim, self.field)

    def right_op(self, a: Sequence) -> Mat:
        return combine(self.right, a, self.dim, self.field)

    def lam_op(self) -> Mat:
        """Action of the deformation parameter (taken through the left algebra when it has one)."""
        if self.left_alg.deformed:
            return self.left_op(self.left_alg.lam)
        return self.right_op(self.right_alg.lam)

    def __eq__(self, other):
        if not isinstance(other, PlainBimodule):
            return NotImplemented
        return (self is other or (self.dim == other.dim and self.left == other.left and self.right == other.right
                                  and self.left_alg == other.left_alg and self.right_alg == other.right_alg))

    def __hash__(self):
        return hash((self.dim, self.left, self.right))

    def __repr__(self):
        return f"PlainBimodule({self.label or '?'}, dim {self.dim}, {self.left_alg.label}|{self.right_alg.label})"


def ground_algebra(field: Field = QQ) -> Algebra:
    return Algebra(1, [(0, 0, 0, 1)], [1], field, label="k")


def regular_bimodule(a: Algebra) -> PlainBimodule:
    return PlainBimodule(a, a, a.dim, a.left_basis(), a.right_basis(), label=a.label)


def right_module(a: Algebra, right: Sequence[Mat], dim: int) -> PlainBimodule:
    return PlainBimodule(ground_algebra(a.field), a, dim, [Mat.identity(dim, a.field)], right)


def left_module(a: Algebra, left: Sequence[Mat], dim: int) -> PlainBimodule:
    return PlainBimodule(a, ground_algebra(a.field), dim, left, [Mat.identity(dim, a.field)])


def validate_plain(m: PlainBimodule) -> Report:
    rep = Report(f"bimodule {m.label}")
    n = m.dim
    ident = Mat.identity(n, m.field)
    la, ra = m.left_alg, m.right_alg
    rep.check("left_unital", m.left_op(la.unit) == ident)
    rep.check("right_unital", m.right_op(ra.unit) == ident)
    bad = None
    for i in range(la.dim):
        for j in range(la.dim):
            if m.left[i] @ m.left[j] != m.left_op(la.product(i, j)):
                bad = (i, j)
                break
        if bad:
            break
    rep.check("left_representation", bad is None, {"basis_pair": bad})
    bad = None
    for i in range(ra.dim):
        for j in range(ra.dim):
            if m.right[j] @ m.right[i] != m.right_op(ra.product(i, j)):
                bad = (i, j)
                break
        if bad:
            break
    rep.check("right_representation", bad is None, {"basis_pair": bad})
    bad = None
    for i, l in enumerate(m.left):
        for j, r in enumerate(m.right):
            if l @ r != r @ l:
                bad = (i, j)
                break
        if bad:
            break
    rep.check("actions_commute", bad is None, {"basis_pair": bad})
    return rep


def is_submodule(m: PlainBimodule, s: Subspace) -> bool:
    return all(s.contains(op @ v) for op in m.left + m.right for v in s.basis)


def submodule_generated(m: PlainBimodule, vectors: Iterable[Sequence]) -> Subspace:
    """Smallest sub-bimodule containing `vectors`."""
    cur = Subspace.span(vectors, m.dim, m.field)
    frontier = list(cur.basis)
    ops = [m.left_op(g) for g in m.left_alg.generators()] + [m.right_op(g) for g in m.right_alg.generators()]
    while frontier:
        nxt = Subspace.span(cur.basis + tuple(op @ v for op in ops for v in frontier), m.dim, m.field)
        if nxt.dim == cur.dim:
            break
        frontier = [b for b in nxt.basis if not cur.contains(b)]
        cur = nxt
    return cur


def hom_equations(pairs: Iterable[tuple[Mat, Mat]], rows: int, cols: int, offset: int = 0) -> list[dict]:
    """Equations T src = tgt T for an unknown rows x cols matrix T.

    T[r][k] is variable offset + r*cols + k.
    """
    eqs = []
    for src, tgt in pairs:
        src_cols = src.sparse_columns()
        tgt_rows = tgt.sparse_rows()
        for r in range(rows):
            for c in range(cols):
                eq: dict = {}
                for k, x in src_cols[c].items():
                    v = offset + r * cols + k
                    eq[v] = eq.get(v, 0) + x
                for k, x in tgt_rows[r]:
                    v = offset + k * cols + c
                    eq[v] = eq.get(v, 0) - x
                eq = {v: x for v, x in eq.items() if x}
                if eq:
                    eqs.append(eq)
    return eqs


def unflatten(vec: Sequence, rows: int, cols: int, field: Field) -> Mat:
    return Mat([vec[r * cols:(r + 1) * cols] for r in range(rows)], cols, field)


def flatten(m: Mat) -> tuple:
    return tuple(x for r in m.tolist() for x in r)


def hom_space(src: PlainBimodule, tgt: PlainBimodule, left: bool = True, right: bool = True) -> list[Mat]:
    """Basis of bimodule maps src -> tgt (optionally only one-sided linear)."""
    pairs = []
    if left:
        pairs += [(src.left_op(g), tgt.left_op(g)) for g in src.left_alg.generators()]
    if right:
        pairs += [(src.right_op(g), tgt.right_op(g)) for g in src.right_alg.generators()]
    sol = kernel_of_rows(hom_equations(pairs, tgt.dim, src.dim), tgt.dim * src.dim, src.field)
    return [unflatten(b, tgt.dim, src.dim, src.field) for b in sol.basis]


def commutant(ops: Sequence[Mat], n: int, field: Field = QQ) -> Subspace:
    """All n x n matrices commuting with every op, as flattened vectors."""
    return kernel_of_rows(hom_equations([(o, o) for o in ops], n, n), n * n, field)


def endomorphism_algebra(m: PlainBimodule, side: str = "right") -> tuple[Algebra, list[Mat]]:
    """End of the module structure on `side` ("right", "left" or "both"), composition as product."""
    ops: list[Mat] = []
    if side in ("right", "both"):
        ops += [m.right_op(g) for g in m.right_alg.generators()]
    if side in ("left", "both"):
        ops += [m.left_op(g) for g in m.left_alg.generators()]
    n = m.dim
    space = commutant(ops, n, m.field)
    mats = [unflatten(b, n, n, m.field) for b in space.basis]
    prods = [[space.coords(flatten(x @ y)) for y in mats] for x in mats]
    unit = space.coords(flatten(Mat.identity(n, m.field)))
    return Algebra.from_products(space.dim, prods, unit, m.field, label=f"End({m.label})"), mats


def transport(a: Algebra, basis: Sequence[Sequence], label: str = "") -> Algebra:
    """The same algebra written in a new basis (columns of an invertible matrix)."""
    change = Mat.from_columns([tuple(b) for b in basis], a.dim, a.field)
    inv = change.inverse()
    prods = [[inv @ a.mul(x, y) for y in basis] for x in basis]
    return Algebra.from_products(a.dim, prods, inv @ a.unit, a.field, label=label or a.label,
                                 lam=None if a.lam is None else inv @ a.lam, order=a.order)
