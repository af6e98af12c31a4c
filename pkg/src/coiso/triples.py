"""Coisotropic triples (A_tot, A_N, A_0), pairs (A_N, A_0), their morphisms
and the reduction A_N / A_0."""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import (AlgMorphism, Algebra, PlainBimodule, endomorphism_algebra, flatten, idealizer,
                      induced_algebra, is_left_ideal, is_right_ideal, is_subalgebra, left_module,
                      quotient_algebra, validate_algebra, validate_morphism, validate_plain)
from .linalg import Mat, Subspace, quotient
from .report import CoisoError, Report


class Triple:
    """(A_tot, A_N, A_0): A_N a unital subalgebra, A_0 ⊆ A_N a left ideal of A_tot,
    two-sided in A_N. Both subspaces live in A_tot coordinates."""

    def __init__(self, tot: Algebra, n_sub: Subspace, zero: Subspace, label: str = ""):
        if n_sub.ambient_dim != tot.dim or zero.ambient_dim != tot.dim:
            raise CoisoError("subspaces must live in the total algebra")
        self.tot = tot
        self.n_sub = n_sub
        self.zero = zero
        self.label = label
        self.field = tot.field
        self._cache: dict = {}

    @property
    def n_alg(self) -> Algebra:
        """A_N as an algebra in the coordinates of its RREF basis."""
        if "n_alg" not in self._cache:
            self._cache["n_alg"] = induced_algebra(self.tot, self.n_sub, label=f"{self.label}_N")
        return self._cache["n_alg"]

    @property
    def n_incl(self) -> Mat:
        """A_N coordinates -> A_tot coordinates."""
        return self.n_sub.inclusion()

    @property
    def zero_n(self) -> Subspace:
        """A_0 in A_N coordinates."""
        if "zero_n" not in self._cache:
            self._cache["zero_n"] = Subspace.span([self.n_sub.coords_checked(b) for b in self.zero.basis],
                                                  self.n_sub.dim, self.field)
        return self._cache["zero_n"]

    def reduced(self) -> tuple[Algebra, Mat, Mat]:
        """A_red = A_N/A_0 with projection and section in A_N coordinates."""
        if "red" not in self._cache:
            self._cache["red"] = quotient_algebra(self.n_alg, self.zero_n, label=f"{self.label}_red")
        return self._cache["red"]

    def __eq__(self, other):
        if not isinstance(other, Triple):
            return NotImplemented
        return self is other or (self.tot == other.tot and self.n_sub == other.n_sub and self.zero == other.zero)

    def __hash__(self):
        return hash((self.tot, self.n_sub, self.zero))

    def __repr__(self):
        return f"Triple({self.label or '?'}: dims {self.tot.dim}/{self.n_sub.dim}/{self.zero.dim})"


@dataclass(frozen=True)
class Pair:
    n_alg: Algebra
    zero: Subspace


def validate_triple(t: Triple) -> Report:
    rep = Report(f"triple {t.label}")
    rep.extend(validate_algebra(t.tot), "tot.")
    a = t.tot
    for i in range(a.dim):
        for b in t.zero.basis:
            if not t.zero.contains(a.mul(a.basis_vector(i), b)):
                rep.check("zero_left_ideal", False, {"basis": i, "vector": b})
                break
        else:
            continue
        break
    else:
        rep.check("zero_left_ideal", True)
    rep.check("n_contains_unit", t.n_sub.contains(a.unit), {"unit": a.unit})
    bad = next(((x, y) for x in t.n_sub.basis for y in t.n_sub.basis if not t.n_sub.contains(a.mul(x, y))), None)
    rep.check("n_closed", bad is None, {"vectors": bad})
    bad = next((b for b in t.zero.basis if not t.n_sub.contains(b)), None)
    rep.check("zero_in_n", bad is None, {"vector": bad})
    bad = next(((b, x) for b in t.zero.basis for x in t.n_sub.basis if not t.zero.contains(a.mul(b, x))), None)
    rep.check("zero_two_sided_in_n", bad is None, {"vectors": bad})
    if a.deformed:
        from .classical import deformation_report
        rep.extend(deformation_report(t), "deformed.")
    return rep


def validate_pair(p: Pair) -> Report:
    rep = Report("pair")
    rep.extend(validate_algebra(p.n_alg), "n.")
    rep.check("zero_left_ideal", is_left_ideal(p.n_alg, p.zero))
    rep.check("zero_right_ideal", is_right_ideal(p.n_alg, p.zero))
    return rep


def make_triple(tot: Algebra, n_sub: Subspace, zero: Subspace, label: str = "") -> Triple:
    t = Triple(tot, n_sub, zero, label)
    validate_triple(t).require()
    return t


def dirac(a: Algebra, j: Subspace, label: str = "") -> Triple:
    """(a, N(j), j) for a left ideal j."""
    if not is_left_ideal(a, j):
        raise CoisoError("dirac needs a left ideal")
    return make_triple(a, idealizer(a, j), j, label or f"dirac({a.label})")


def trivial(a: Algebra, label: str = "") -> Triple:
    full = Subspace.full(a.dim, a.field)
    return make_triple(a, full, full, label or f"trivial({a.label})")


def unred(a: Algebra, label: str = "") -> Triple:
    return make_triple(a, Subspace.full(a.dim, a.field), Subspace.zero(a.dim, a.field), label or f"unred({a.label})")


def triple_to_pair(t: Triple) -> Pair:
    return Pair(t.n_alg, t.zero_n)


def pair_to_triple(p: Pair, label: str = "") -> Triple:
    return make_triple(p.n_alg, Subspace.full(p.n_alg.dim, p.n_alg.field), p.zero, label)


@dataclass(frozen=True)
class TripleMorphism:
    source: Triple
    target: Triple
    matrix: Mat

    @property
    def base(self) -> AlgMorphism:
        return AlgMorphism(self.source.tot, self.target.tot, self.matrix)

    def n_matrix(self) -> Mat:
        """The restriction A_N -> B_N in N coordinates."""
        tgt = self.target.n_sub
        img = self.matrix @ self.source.n_incl
        return Mat.from_columns([tgt.coords_checked(c) for c in img.columns()], tgt.dim, self.source.field)

    def __matmul__(self, other: TripleMorphism) -> TripleMorphism:
        if other.target != self.source:
            raise CoisoError("triple morphisms are not composable")
        return TripleMorphism(other.source, self.target, self.matrix @ other.matrix)

    @classmethod
    def identity(cls, t: Triple) -> TripleMorphism:
        return cls(t, t, Mat.identity(t.tot.dim, t.field))


def validate_triple_morphism(f: TripleMorphism) -> Report:
    rep = Report("triple morphism")
    rep.extend(validate_morphism(f.base), "tot.")
    if not rep.ok:
        return rep
    bad = next((b for b in f.source.n_sub.basis if not f.target.n_sub.contains(f.matrix @ b)), None)
    rep.check("preserves_n", bad is None, {"vector": bad})
    bad = next((b for b in f.source.zero.basis if not f.target.zero.contains(f.matrix @ b)), None)
    rep.check("preserves_zero", bad is None, {"vector": bad})
    if f.source.tot.deformed and f.target.tot.deformed:
        rep.check("lambda_linear", f.matrix @ f.source.tot.lam == f.target.tot.lam)
    return rep


def reduce_triple(t: Triple) -> tuple[Algebra, Mat]:
    alg, proj, _ = t.reduced()
    return alg, proj


def reduce_morphism(f: TripleMorphism) -> AlgMorphism:
    """[a] -> [f(a)] from A_red to B_red."""
    validate_triple_morphism(f).require()
    a_red, _, a_sect = f.source.reduced()
    b_red, b_proj, _ = f.target.reduced()
    return AlgMorphism(a_red, b_red, b_proj @ f.n_matrix() @ a_sect)


def reduction_functor_laws(chain: list[TripleMorphism]) -> Report:
    """red(id) = id and red(g∘f) = red(g)∘red(f) along a composable chain."""
    rep = Report("reduction functor laws")
    for k, f in enumerate(chain):
        rep.check(f"identity.{k}", reduce_morphism(TripleMorphism.identity(f.source)).matrix.is_identity())
    for k in range(len(chain) - 1):
        g, f = chain[k + 1], chain[k]
        rep.check(f"composition.{k}", reduce_morphism(g @ f).matrix == (reduce_morphism(g) @ reduce_morphism(f)).matrix)
    return rep


def unred_iso(a: Algebra) -> AlgMorphism:
    """The canonical map a -> reduce(unred(a)); identity coordinates by construction."""
    t = unred(a)
    red, proj, _ = t.reduced()
    return AlgMorphism(a, red, proj @ Mat.identity(a.dim, a.field))


def canonical_bimodule(t: Triple) -> PlainBimodule:
    """C(A) = A_tot/A_0: left A_tot action, right A_red action by right multiplication."""
    a = t.tot
    proj, sect = quotient(a.dim, t.zero)
    red, _, red_sect = t.reduced()
    left = [proj @ L @ sect for L in a.left_basis()]
    reps = (t.n_incl @ red_sect).columns()
    right = [proj @ a.right_mat(r) @ sect for r in reps]
    return PlainBimodule(a, red, proj.rows, left, right, label=f"C({t.label})")


def verify_canonical_bimodule(t: Triple) -> Report:
    """End_{A_tot}(C(A))^opp ≅ A_red via x ↦ right multiplication by x."""
    rep = Report(f"canonical bimodule {t.label}")
    c = canonical_bimodule(t)
    rep.extend(validate_plain(c), "module.")
    end, mats = endomorphism_algebra(left_module(t.tot, c.left, c.dim), side="left")
    red = c.right_alg
    rep.info["end_dim"] = end.dim
    rep.info["red_dim"] = red.dim
    # x -> R_x lands in End(C) and reverses products, so it is a morphism A_red -> End^opp
    endop = end.opposite()
    space = Subspace.span([flatten(m) for m in mats], c.dim * c.dim, t.field)
    images = [flatten(c.right[i]) for i in range(red.dim)]
    inside = all(space.contains(v) for v in images)
    rep.check("right_action_is_endomorphism", inside)
    if not inside:
        return rep
    # End's basis is the RREF basis of `space`, so coordinates are read off directly
    matrix = Mat.from_columns([space.coords(v) for v in images], end.dim, t.field)
    phi = AlgMorphism(red, endop, matrix)
    rep.extend(validate_morphism(phi), "iso.")
    rep.check("iso.bijective", matrix.is_invertible(), {"shape": matrix.shape})
    return rep
