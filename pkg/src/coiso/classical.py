"""Truncated deformations and the classical limit X/λX.

A deformed algebra carries a central nilpotent λ (see Algebra). The classical
limit is applied to algebras, triples, bimodules and 2-morphisms, and compared
with reduction through η, μ, μ̂, Γ and Γ̂.

Notation: F = cl∘red and G = red∘cl, both from deformed triples to plain
bimodules. μ_A is cl(A_red) with left action of cl(A)_red through η_A⁻¹ and
μ̂_A is cl(A)_red with left action of cl(A_red) through η_A.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgMorphism, Algebra, PlainBimodule, quotient_algebra, validate_morphism
from .bimodules import (Bimod3Morphism, Bimodule3, PlainMap, TensorProduct, _reduced, associator,
                        associator_plain, associator_plain_inverse, hom_space3, identity_bimodule, left_unitor,
                        left_unitor_plain, left_unitor_plain_inverse, quotient_module, reduce_2morphism,
                        reduce_bimodule, reduction_mult_iso, reduction_unit, regular, right_unitor,
                        right_unitor_plain, right_unitor_plain_inverse, tensor, tensor_maps, tensor_morphism,
                        tensor_plain, twisted_regular, validate_bimod_morphism, validate_bimodule,
                        validate_plain_map)
from .linalg import Mat, Subspace, kernel, right_inverse
from .morita import EquivData, reduce_equivalence, verify_equivalence, verify_plain_equivalence
from .report import CoisoError, Report
from .triples import Triple, TripleMorphism, make_triple, reduce_morphism, validate_triple, validate_triple_morphism


def _image(op: Mat) -> Subspace:
    return Subspace.span(op.columns(), op.rows, op.field)


def _ident(m: PlainBimodule) -> PlainMap:
    return PlainMap.identity(m)


def _unit_column(alg: Algebra) -> Mat:
    return Mat.from_columns([alg.unit], alg.dim, alg.field)


# ------------------------------------------------------------------ validation

def algebra_deformation_report(a: Algebra) -> Report:
    rep = Report(f"deformation {a.label}")
    rep.check("has_parameter", a.deformed)
    if not a.deformed:
        return rep
    lam = a.lam
    left, right = a.left_mat(lam), a.right_mat(lam)
    bad = next((i for i in range(a.dim) if left.col(i) != right.col(i)), None)
    rep.check("central", bad is None, {"basis": bad})
    rep.check("order_positive", a.order is not None and a.order >= 1, {"order": a.order})
    if not rep.ok:
        return rep
    rep.check("nilpotent", a.power(lam, a.order) == a.zero_vector(), {"order": a.order})
    op = Mat.identity(a.dim, a.field)
    for _ in range(a.order):
        op = left @ op
    rep.check("operator_nilpotent", op.is_zero(), {"order": a.order})
    return rep


def deformation_report(t: Triple) -> Report:
    """λ-conditions on a triple: stability of A_N and A_0, and λA_tot ∩ A_N = λA_N."""
    rep = Report(f"deformed triple {t.label}")
    rep.extend(algebra_deformation_report(t.tot), "tot.")
    if not rep.ok:
        return rep
    lam_op = t.tot.lam_op()
    rep.check("lambda_in_n", t.n_sub.contains(t.tot.lam))
    bad = next((b for b in t.n_sub.basis if not t.n_sub.contains(lam_op @ b)), None)
    rep.check("n_lambda_stable", bad is None, {"vector": bad})
    bad = next((b for b in t.zero.basis if not t.zero.contains(lam_op @ b)), None)
    rep.check("zero_lambda_stable", bad is None, {"vector": bad})
    # needed for cl(E)_N to be a cl(A)_N-module and for η to be injective
    lam_tot = _image(lam_op)
    meet = lam_tot & t.n_sub
    lam_n = t.n_sub.image(lam_op)
    rep.check("n_saturated", meet == lam_n, {"dim_lambda_tot_meet_n": meet.dim, "dim_lambda_n": lam_n.dim})
    return rep


def bimodule_deformation_report(e: Bimodule3) -> Report:
    rep = Report(f"deformed bimodule {e.label}")
    rep.extend(validate_triple(e.left), "left.")
    if e.right is not e.left:
        rep.extend(validate_triple(e.right), "right.")
    rep.check("deformed", e.left.tot.deformed and e.right.tot.deformed)
    if not rep.ok:
        return rep
    lt, rt = e.tot.left_op(e.left.tot.lam), e.tot.right_op(e.right.tot.lam)
    rep.check("tot_lambda_symmetric", lt == rt)
    ln, rn = e.nmod.left_op(e.left.n_alg.lam), e.nmod.right_op(e.right.n_alg.lam)
    rep.check("n_lambda_symmetric", ln == rn)
    bad = next((z for z in e.zero.basis if not e.zero.contains(ln @ z)), None)
    rep.check("zero_lambda_stable", bad is None, {"vector": bad})
    rep.check("iota_lambda_linear", e.iota @ ln == lt @ e.iota)
    return rep


def validate_deformed(x) -> Report:
    """Itemized deformation checks for an algebra, triple, triple morphism or bimodule."""
    if isinstance(x, Algebra):
        return algebra_deformation_report(x)
    if isinstance(x, Triple):
        rep = validate_triple(x)
        rep.check("deformed", x.tot.deformed)
        return rep
    if isinstance(x, TripleMorphism):
        rep = Report("deformed triple morphism")
        rep.extend(validate_deformed(x.source), "source.")
        rep.extend(validate_deformed(x.target), "target.")
        rep.extend(validate_triple_morphism(x), "map.")
        return rep
    if isinstance(x, Bimodule3):
        rep = bimodule_deformation_report(x)
        if rep.ok:
            rep.extend(validate_bimodule(x), "module.")
        return rep
    raise CoisoError(f"cannot validate a {type(x).__name__} as deformed")


# ------------------------------------------------------ classical limit: objects

def cl_algebra(a: Algebra) -> tuple[Algebra, Mat, Mat]:
    """a/λa with projection and section."""
    if "cl" not in a._cache:
        if not a.deformed:
            raise CoisoError(f"algebra {a.label!r} is not deformed")
        a._cache["cl"] = quotient_algebra(a.undeformed(), _image(a.lam_op()), label=f"cl({a.label})")
    return a._cache["cl"]


def cl_algebra_morphism(f: AlgMorphism) -> AlgMorphism:
    src, _, s_sect = cl_algebra(f.source)
    tgt, t_proj, _ = cl_algebra(f.target)
    return AlgMorphism(src, tgt, t_proj @ f.matrix @ s_sect)


@dataclass
class ClassicalTriple:
    """cl(A) with cl(A)_N, cl(A)_0 as images inside cl(A)_tot.

    n_proj maps A_N coordinates onto cl(A)_N coordinates; n_lift is a right
    inverse of it.
    """
    triple: Triple
    proj: Mat
    sect: Mat
    n_proj: Mat
    n_lift: Mat


def cl_triple_data(t: Triple) -> ClassicalTriple:
    if "cl" not in t._cache:
        alg, proj, sect = cl_algebra(t.tot)
        n_sub = t.n_sub.image(proj)
        zero = t.zero.image(proj)
        clt = make_triple(alg, n_sub, zero, label=f"cl({t.label})")
        n_proj = Mat.from_columns([n_sub.coords(proj @ c) for c in t.n_incl.columns()], n_sub.dim, t.field)
        t._cache["cl"] = ClassicalTriple(clt, proj, sect, n_proj, right_inverse(n_proj))
    return t._cache["cl"]


def cl_triple(t: Triple) -> Triple:
    return cl_triple_data(t).triple


def cl_triple_morphism(f: TripleMorphism) -> TripleMorphism:
    rep = validate_triple_morphism(f)
    rep.check("lambda_linear", f.source.tot.deformed and f.target.tot.deformed)
    rep.require()
    s, t = cl_triple_data(f.source), cl_triple_data(f.target)
    return TripleMorphism(s.triple, t.triple, t.proj @ f.matrix @ s.sect)


def _cl_quotient(m: PlainBimodule, left, right, label: str):
    """(m/λm, proj, sect, λm) with actions through the given (algebra, lift) pairs."""
    kill = _image(m.lam_op()) if m.dim else Subspace.zero(0, m.field)
    q, proj, sect = quotient_module(m, kill, left=left, right=right, label=label)
    return q, proj, sect, kill


def cl_plain_data(m: PlainBimodule):
    """cl of a plain bimodule over deformed algebras: (module, proj, sect, λm)."""
    if "cl" not in m._cache:
        la, _, l_sect = cl_algebra(m.left_alg)
        ra, _, r_sect = cl_algebra(m.right_alg)
        m._cache["cl"] = _cl_quotient(m, (la, l_sect), (ra, r_sect), f"cl({m.label})")
    return m._cache["cl"]


def cl_plain(m: PlainBimodule) -> PlainBimodule:
    return cl_plain_data(m)[0]


def cl_plain_map(phi: PlainMap) -> PlainMap:
    src, _, s_sect, _ = cl_plain_data(phi.source)
    tgt, t_proj, _, _ = cl_plain_data(phi.target)
    return PlainMap(src, tgt, t_proj @ phi.mat @ s_sect)


def _cl_bimodule_data(e: Bimodule3):
    if "cl" not in e._cache:
        b, a = cl_triple_data(e.left), cl_triple_data(e.right)
        label = f"cl({e.label})"
        tot = _cl_quotient(e.tot, (b.triple.tot, b.sect), (a.triple.tot, a.sect), label)
        nmod = _cl_quotient(e.nmod, (b.triple.n_alg, b.n_lift), (a.triple.n_alg, a.n_lift), label)
        zero = e.zero.image(nmod[1])
        iota = tot[1] @ e.iota @ nmod[2]
        e._cache["cl"] = (Bimodule3(b.triple, a.triple, tot[0], nmod[0], zero, iota, label=label), tot, nmod)
    return e._cache["cl"]


def cl_bimodule(e: Bimodule3) -> Bimodule3:
    return _cl_bimodule_data(e)[0]


def cl_bimodule_report(e: Bimodule3) -> Report:
    """The induced N-actions do not depend on lifts, and cl(E) is a bimodule."""
    rep = Report(f"classical limit of {e.label}")
    rep.extend(validate_deformed(e), "input.")
    if not rep.ok:
        return rep
    _, _, (_, n_proj, _, _) = _cl_bimodule_data(e)
    for side, t, act in (("left", e.left, e.nmod.left_op), ("right", e.right, e.nmod.right_op)):
        ker = kernel(cl_triple_data(t).n_proj)
        bad = next((k for k in ker.basis if not (n_proj @ act(k)).is_zero()), None)
        rep.check(f"n_{side}_action_well_defined", bad is None, {"vector": bad})
    rep.extend(validate_bimodule(cl_bimodule(e)), "result.")
    return rep


def cl_bimod_morphism(phi: Bimod3Morphism) -> Bimod3Morphism:
    src, s_tot, s_n = _cl_bimodule_data(phi.source)
    tgt, t_tot, t_n = _cl_bimodule_data(phi.target)
    return Bimod3Morphism(src, tgt, t_tot[1] @ phi.tot @ s_tot[2], t_n[1] @ phi.n @ s_n[2])


def cl_unit(t: Triple) -> Bimod3Morphism:
    """u_A: Id_cl(A) → cl(Id_A), the canonical coordinate identification.

    On tot both sides are A_tot/λA_tot; on N it is c ↦ [lift(c)] from
    A_N/(λA_tot ∩ A_N) to A_N/λA_N.
    """
    d = cl_triple_data(t)
    clid, _, (_, n_proj, _, _) = _cl_bimodule_data(identity_bimodule(t))
    src = identity_bimodule(d.triple)
    return Bimod3Morphism(src, clid, Mat.identity(clid.tot.dim, t.field), n_proj @ d.n_lift)


# ------------------------------------------------- classical limit: composition

def _quotient_tensor_iso(f_q, e_q, t: TensorProduct, t_q, name: str) -> tuple[PlainMap, Report]:
    """[y]⊗[x] ↦ [y⊗x] from F/U ⊗ E/V to (F⊗E)/W, with well-definedness checks.

    Each *_q is (module, proj, sect, kernel).
    """
    fm, f_proj, f_sect, f_kill = f_q
    em, e_proj, e_sect, e_kill = e_q
    tgt, t_proj, t_sect, t_kill = t_q
    src = tensor_plain(fm, em)
    fld = t.field
    rep = Report(name)
    plain = t_proj @ t.proj
    fid = Mat.identity(f_proj.cols, fld)
    eid = Mat.identity(e_proj.cols, fld)
    if f_kill.dim:
        rep.check("well_defined.kill_left", (plain @ f_kill.inclusion().kron(eid)).is_zero())
    if e_kill.dim:
        rep.check("well_defined.kill_right", (plain @ fid.kron(e_kill.inclusion())).is_zero())
    lifted = plain @ f_sect.kron(e_sect)
    if src.relations.dim:
        rep.check("well_defined.balanced", (lifted @ src.relations.inclusion()).is_zero())
    m = PlainMap(src, tgt, lifted @ src.sect)
    back = src.proj @ f_proj.kron(e_proj)
    if t.relations.dim:
        rep.check("inverse.balanced", (back @ t.relations.inclusion()).is_zero())
    if t_kill.dim:
        rep.check("inverse.well_defined", (back @ t.sect @ t_kill.inclusion()).is_zero())
    inv = PlainMap(tgt, src, back @ t.sect @ t_sect)
    rep.check("invertible.left", (inv @ m).mat == Mat.identity(src.dim, fld))
    rep.check("invertible.right", (m @ inv).mat == Mat.identity(tgt.dim, fld))
    rep.extend(validate_plain_map(m), "map.")
    return m, rep


def cl_plain_mult(f: PlainBimodule, e: PlainBimodule) -> tuple[PlainMap, Report]:
    """cl(F) ⊗ cl(E) → cl(F⊗E) for plain deformed bimodules."""
    fe = tensor_plain(f, e)
    return _quotient_tensor_iso(cl_plain_data(f), cl_plain_data(e), fe, cl_plain_data(fe), "cl multiplication")


def cl_tensor_iso(f: Bimodule3, e: Bimodule3) -> tuple[Bimod3Morphism, Report]:
    """m(F, E): cl(F) ⊗ cl(E) → cl(F⊗E), cl(y)⊗cl(x) ↦ cl(y⊗x)."""
    fe = tensor(f, e)
    clf, f_tot, f_n = _cl_bimodule_data(f)
    cle, e_tot, e_n = _cl_bimodule_data(e)
    clfe, fe_tot, fe_n = _cl_bimodule_data(fe)
    src = tensor(clf, cle)
    m_tot, r_tot = _quotient_tensor_iso(f_tot, e_tot, fe.tot, fe_tot, "tot")
    m_n, r_n = _quotient_tensor_iso(f_n, e_n, fe.nmod, fe_n, "n")
    m = Bimod3Morphism(src, clfe, m_tot.mat, m_n.mat)
    rep = Report("classical limit multiplication")
    rep.extend(r_tot, "tot.")
    rep.extend(r_n, "n.")
    rep.extend(validate_bimod_morphism(m), "map.")
    rep.check("zero_onto", src.zero.image(m.n) == clfe.zero)
    return m, rep


def cl_naturality(phi: Bimod3Morphism, psi: Bimod3Morphism) -> bool:
    """m(F', E') ∘ (cl φ ⊗ cl ψ) = cl(φ ⊗ ψ) ∘ m(F, E)."""
    m_src, _ = cl_tensor_iso(phi.source, psi.source)
    m_tgt, _ = cl_tensor_iso(phi.target, psi.target)
    lhs = m_tgt @ tensor_morphism(cl_bimod_morphism(phi), cl_bimod_morphism(psi))
    rhs = cl_bimod_morphism(tensor_morphism(phi, psi)) @ m_src
    return lhs == rhs


def cl_composition_coherence(h: Bimodule3, g: Bimodule3, f: Bimodule3) -> bool:
    """cl(α) ∘ m(h⊗g, f) ∘ (m(h,g) ⊗ id) = m(h, g⊗f) ∘ (id ⊗ m(g,f)) ∘ α."""
    ch, cg, cf = cl_bimodule(h), cl_bimodule(g), cl_bimodule(f)
    m_hg, _ = cl_tensor_iso(h, g)
    m_gf, _ = cl_tensor_iso(g, f)
    m_hg_f, _ = cl_tensor_iso(tensor(h, g), f)
    m_h_gf, _ = cl_tensor_iso(h, tensor(g, f))
    lhs = cl_bimod_morphism(associator(h, g, f)) @ m_hg_f @ tensor_morphism(m_hg, Bimod3Morphism.identity(cf))
    rhs = m_h_gf @ tensor_morphism(Bimod3Morphism.identity(ch), m_gf) @ associator(ch, cg, cf)
    return lhs == rhs


def cl_identity_coherence(f: Bimodule3) -> tuple[bool, bool]:
    """cl(left) ∘ m(Id, f) ∘ (u ⊗ id) = left and the mirrored right diagram."""
    cf = cl_bimodule(f)
    ident = Bimod3Morphism.identity(cf)
    m_l, _ = cl_tensor_iso(identity_bimodule(f.left), f)
    left = cl_bimod_morphism(left_unitor(f)) @ m_l @ tensor_morphism(cl_unit(f.left), ident)
    m_r, _ = cl_tensor_iso(f, identity_bimodule(f.right))
    right = cl_bimod_morphism(right_unitor(f)) @ m_r @ tensor_morphism(ident, cl_unit(f.right))
    return left == left_unitor(cf), right == right_unitor(cf)


def cl_functor_laws(chain: list[TripleMorphism]) -> Report:
    """cl(id) = id and cl(g∘f) = cl(g)∘cl(f) along a composable chain."""
    rep = Report("classical limit functor laws")
    for k, f in enumerate(chain):
        ident = TripleMorphism.identity(f.source)
        rep.check(f"identity.{k}", cl_triple_morphism(ident).matrix.is_identity())
    for k in range(len(chain) - 1):
        g, f = chain[k + 1], chain[k]
        rep.check(f"composition.{k}",
                  cl_triple_morphism(g @ f).matrix == (cl_triple_morphism(g) @ cl_triple_morphism(f)).matrix)
    return rep


def dimension_accounting(x) -> Report:
    """dim cl(X) = dim X − rank(λ on X) on λ-quotient components; 0-components by their intersection."""
    rep = Report("dimension accounting")
    if isinstance(x, Triple):
        d = cl_triple_data(x)
        lam = x.tot.lam_op()
        rep.check("tot", d.triple.tot.dim == x.tot.dim - lam.rank())
        rep.check("n", d.triple.n_sub.dim == x.n_sub.dim - x.n_alg.lam_op().rank())
        rep.check("zero", d.triple.zero.dim == x.zero.dim - (_image(lam) & x.zero).dim)
        rep.info["zero_literal"] = d.triple.zero.dim == x.zero.dim - x.zero.image(lam).dim
        return rep
    if isinstance(x, Bimodule3):
        c = cl_bimodule(x)
        ln = x.nmod.lam_op()
        rep.check("tot", c.tot.dim == x.tot.dim - x.tot.lam_op().rank())
        rep.check("n", c.nmod.dim == x.nmod.dim - ln.rank())
        rep.check("zero", c.zero.dim == x.zero.dim - (_image(ln) & x.zero).dim)
        rep.info["zero_literal"] = c.zero.dim == x.zero.dim - x.zero.image(ln).dim
        return rep
    raise CoisoError(f"no dimension accounting for {type(x).__name__}")


# ------------------------------------------------------------ η on algebras

def eta_algebra(t: Triple) -> tuple[AlgMorphism, Report]:
    """η_A: cl(A_red) → cl(A)_red, cl([a]) ↦ [cl(a)]."""
    if "eta" not in t._cache:
        red, _, r_sect = t.reduced()
        c1, _, c1_sect = cl_algebra(red)
        d = cl_triple_data(t)
        c2, c2_proj, _ = d.triple.reduced()
        plain = c2_proj @ d.n_proj
        rep = Report(f"eta {t.label}")
        if t.zero_n.dim:
            rep.check("well_defined.zero", (plain @ t.zero_n.inclusion()).is_zero())
        lam_red = _image(red.lam_op())
        if lam_red.dim:
            rep.check("well_defined.lambda", (plain @ r_sect @ lam_red.inclusion()).is_zero())
        eta = AlgMorphism(c1, c2, plain @ r_sect @ c1_sect)
        rep.extend(validate_morphism(eta), "morphism.")
        rep.check("bijective", eta.matrix.is_invertible(), {"shape": eta.matrix.shape})
        t._cache["eta"] = (eta, rep)
    return t._cache["eta"]


def eta_naturality(f: TripleMorphism) -> bool:
    """η_B ∘ cl(red f) = red(cl f) ∘ η_A."""
    eta_a, _ = eta_algebra(f.source)
    eta_b, _ = eta_algebra(f.target)
    lhs = eta_b.matrix @ cl_algebra_morphism(reduce_morphism(f)).matrix
    rhs = reduce_morphism(cl_triple_morphism(f)).matrix @ eta_a.matrix
    return lhs == rhs


# -------------------------------------------------------- the two composites

def cr_module(e: Bimodule3) -> PlainBimodule:
    """cl(E_red)."""
    return cl_plain(reduce_bimodule(e))


def rc_module(e: Bimodule3) -> PlainBimodule:
    """cl(E)_red."""
    return reduce_bimodule(cl_bimodule(e))


def cr_map(phi: Bimod3Morphism) -> PlainMap:
    return cl_plain_map(reduce_2morphism(phi))


def rc_map(phi: Bimod3Morphism) -> PlainMap:
    return reduce_2morphism(cl_bimod_morphism(phi))


def cr_mult(g: Bimodule3, f: Bimodule3) -> PlainMap:
    """cl(m_red(g, f)) ∘ m_cl(g_red, f_red)."""
    m_red, _ = reduction_mult_iso(g, f)
    m_cl, _ = cl_plain_mult(reduce_bimodule(g), reduce_bimodule(f))
    return cl_plain_map(m_red) @ m_cl


def rc_mult(g: Bimodule3, f: Bimodule3) -> PlainMap:
    """red(m_cl(g, f)) ∘ m_red(cl g, cl f)."""
    m_cl, _ = cl_tensor_iso(g, f)
    m_red, _ = reduction_mult_iso(cl_bimodule(g), cl_bimodule(f))
    return reduce_2morphism(m_cl) @ m_red


def cr_unit(t: Triple) -> PlainMap:
    red = t.reduced()[0]
    c = cl_algebra(red)[0]
    first = PlainMap(regular(c), cl_plain(regular(red)), Mat.identity(c.dim, t.field))
    return cl_plain_map(reduction_unit(t)) @ first


def rc_unit(t: Triple) -> PlainMap:
    return reduce_2morphism(cl_unit(t)) @ reduction_unit(cl_triple(t))


# ----------------------------------------------------------------- μ and μ̂

def mu_data(t: Triple) -> tuple[PlainBimodule, PlainBimodule]:
    """(μ_A, μ̂_A)."""
    if "mu" not in t._cache:
        eta, rep = eta_algebra(t)
        rep.require()
        mu = twisted_regular(eta.source, left_alg=eta.target, left_map=eta.matrix.inverse(),
                             label=f"mu({t.label})")
        mu_hat = twisted_regular(eta.target, left_alg=eta.source, left_map=eta.matrix,
                                 label=f"mu^({t.label})")
        t._cache["mu"] = (mu, mu_hat)
    return t._cache["mu"]


def eta_module(e: Bimodule3) -> tuple[PlainMap, Report]:
    """η(E): cl(E_red) → cl(E)_red, cl([x]) ↦ [cl(x)], as a map of twisted bimodules."""
    if "eta" not in e._cache:
        _, _, r_sect = _reduced(e)
        x, _, x_sect, x_kill = cl_plain_data(reduce_bimodule(e))
        _, _, (_, n_proj, _, _) = _cl_bimodule_data(e)
        y, y_proj, _ = _reduced(cl_bimodule(e))
        eta_b, _ = eta_algebra(e.left)
        eta_a, _ = eta_algebra(e.right)
        rep = Report(f"eta({e.label})")
        plain = y_proj @ n_proj
        if e.zero.dim:
            rep.check("well_defined.zero", (plain @ e.zero.inclusion()).is_zero())
        if x_kill.dim:
            rep.check("well_defined.lambda", (plain @ r_sect @ x_kill.inclusion()).is_zero())
        mat = plain @ r_sect @ x_sect
        src = PlainBimodule(y.left_alg, x.right_alg, x.dim,
                            [x.left_op(c) for c in eta_b.matrix.inverse().columns()], x.right,
                            label=f"twisted {x.label}")
        tgt = PlainBimodule(y.left_alg, x.right_alg, y.dim, y.left,
                            [y.right_op(c) for c in eta_a.matrix.columns()], label=f"twisted {y.label}")
        out = PlainMap(src, tgt, mat)
        rep.extend(validate_plain_map(out), "map.")
        rep.check("bijective", mat.is_invertible(), {"shape": mat.shape})
        e._cache["eta"] = (out, rep)
    return e._cache["eta"]


def _act_on(m: PlainBimodule, left_dim: int) -> Mat:
    """y ⊗ x ↦ y·x on the plain tensor of a left-regular carrier and m."""
    return Mat.from_columns([m.left[i].col(c) for i in range(left_dim) for c in range(m.dim)], m.dim, m.field)


def mu_of_module(e: Bimodule3) -> tuple[PlainMap, Report]:
    """μ(E) = right⁻¹ ∘ η(E) ∘ left: μ_B ⊗ cl(E_red) → cl(E)_red ⊗ μ_A."""
    mu_b, _ = mu_data(e.left)
    mu_a, _ = mu_data(e.right)
    eta_e, eta_rep = eta_module(e)
    x, y = cr_module(e), rc_module(e)
    src, tgt = tensor_plain(mu_b, x), tensor_plain(y, mu_a)
    left = _act_on(x, mu_b.dim) @ src.sect
    right_inv = tgt.proj @ Mat.identity(y.dim, e.field).kron(_unit_column(mu_a.right_alg))
    m = PlainMap(src, tgt, right_inv @ eta_e.mat @ left)
    rep = Report(f"mu({e.label})")
    rep.extend(eta_rep, "eta.")
    rep.extend(validate_plain_map(m), "map.")
    rep.check("invertible", m.mat.is_invertible())
    return m, rep


def mu_hat_of_module(e: Bimodule3) -> tuple[PlainMap, Report]:
    """μ̂(E) = right⁻¹ ∘ η(E)⁻¹ ∘ left: μ̂_B ⊗ cl(E)_red → cl(E_red) ⊗ μ̂_A."""
    _, hat_b = mu_data(e.left)
    _, hat_a = mu_data(e.right)
    eta_e, eta_rep = eta_module(e)
    x, y = cr_module(e), rc_module(e)
    src, tgt = tensor_plain(hat_b, y), tensor_plain(x, hat_a)
    left = _act_on(y, hat_b.dim) @ src.sect
    right_inv = tgt.proj @ Mat.identity(x.dim, e.field).kron(_unit_column(hat_a.right_alg))
    rep = Report(f"mu_hat({e.label})")
    rep.extend(eta_rep, "eta.")
    if not eta_rep.ok:
        return PlainMap(src, tgt, Mat.zeros(tgt.dim, src.dim, e.field)), rep
    m = PlainMap(src, tgt, right_inv @ eta_e.mat.inverse() @ left)
    rep.extend(validate_plain_map(m), "map.")
    rep.check("invertible", m.mat.is_invertible())
    return m, rep


def mu_naturality(phi: Bimod3Morphism) -> bool:
    """μ(F) ∘ (id ⊗ cl(φ_red)) = (cl(φ)_red ⊗ id) ∘ μ(E)."""
    mu_b, _ = mu_data(phi.source.left)
    mu_a, _ = mu_data(phi.source.right)
    mu_e, _ = mu_of_module(phi.source)
    mu_f, _ = mu_of_module(phi.target)
    lhs = mu_f @ tensor_maps(_ident(mu_b), cr_map(phi))
    rhs = tensor_maps(rc_map(phi), _ident(mu_a)) @ mu_e
    return lhs == rhs


def mu_hat_naturality(phi: Bimod3Morphism) -> bool:
    """μ̂(F) ∘ (id ⊗ cl(φ)_red) = (cl(φ_red) ⊗ id) ∘ μ̂(E)."""
    _, hat_b = mu_data(phi.source.left)
    _, hat_a = mu_data(phi.source.right)
    hat_e, _ = mu_hat_of_module(phi.source)
    hat_f, _ = mu_hat_of_module(phi.target)
    lhs = hat_f @ tensor_maps(_ident(hat_b), rc_map(phi))
    rhs = tensor_maps(cr_map(phi), _ident(hat_a)) @ hat_e
    return lhs == rhs


def _big_diagram(eta_c, eta_b, eta_a, eta_g: PlainMap, eta_f: PlainMap, eta_gf: PlainMap,
                 m_f: PlainMap, m_g: PlainMap) -> bool:
    """Coherence of a transformation η: F ⇒ G with a composable pair (g, f)."""
    fg, ff = eta_g.source.factors[1], eta_f.source.factors[1]
    gg, gf = eta_g.target.factors[0], eta_f.target.factors[0]
    lhs = eta_gf @ tensor_maps(_ident(eta_c), m_f)
    rhs = (tensor_maps(m_g, _ident(eta_a)) @ associator_plain_inverse(gg, gf, eta_a)
           @ tensor_maps(_ident(gg), eta_f) @ associator_plain(gg, eta_b, ff)
           @ tensor_maps(eta_g, _ident(ff)) @ associator_plain_inverse(eta_c, fg, ff))
    return lhs == rhs


def _small_diagram(eta_a: PlainBimodule, eta_id: PlainMap, u_f: PlainMap, u_g: PlainMap) -> bool:
    lhs = tensor_maps(u_g, _ident(eta_a)) @ left_unitor_plain_inverse(eta_a) @ right_unitor_plain(eta_a)
    rhs = eta_id @ tensor_maps(_ident(eta_a), u_f)
    return lhs == rhs


def mu_big_diagram(g: Bimodule3, f: Bimodule3) -> bool:
    c, b, a = g.left, f.left, f.right
    return _big_diagram(mu_data(c)[0], mu_data(b)[0], mu_data(a)[0], mu_of_module(g)[0], mu_of_module(f)[0],
                        mu_of_module(tensor(g, f))[0], cr_mult(g, f), rc_mult(g, f))


def mu_hat_big_diagram(g: Bimodule3, f: Bimodule3) -> bool:
    c, b, a = g.left, f.left, f.right
    return _big_diagram(mu_data(c)[1], mu_data(b)[1], mu_data(a)[1], mu_hat_of_module(g)[0],
                        mu_hat_of_module(f)[0], mu_hat_of_module(tensor(g, f))[0], rc_mult(g, f), cr_mult(g, f))


def mu_small_diagram(t: Triple) -> bool:
    return _small_diagram(mu_data(t)[0], mu_of_module(identity_bimodule(t))[0], cr_unit(t), rc_unit(t))


def mu_hat_small_diagram(t: Triple) -> bool:
    return _small_diagram(mu_data(t)[1], mu_hat_of_module(identity_bimodule(t))[0], rc_unit(t), cr_unit(t))


# ----------------------------------------------------------------- Γ and Γ̂

@dataclass
class Modifications:
    gamma: PlainMap
    gamma_inverse: PlainMap
    gamma_hat: PlainMap
    gamma_hat_inverse: PlainMap
    report: Report


def gamma_modifications(t: Triple) -> Modifications:
    """Γ_A: μ̂_A ⊗ μ_A → cl(A_red) and Γ̂_A: μ_A ⊗ μ̂_A → cl(A)_red with their inverses."""
    if "gamma" in t._cache:
        return t._cache["gamma"]
    eta, _ = eta_algebra(t)
    mu, hat = mu_data(t)
    f_alg, g_alg = eta.source, eta.target
    fld = t.field
    inv = eta.matrix.inverse()
    rep = Report(f"gamma {t.label}")

    src = tensor_plain(hat, mu)
    plain = Mat.from_columns([f_alg.mul(inv.col(i), f_alg.basis_vector(j))
                              for i in range(g_alg.dim) for j in range(f_alg.dim)], f_alg.dim, fld)
    if src.relations.dim:
        rep.check("gamma.well_defined", (plain @ src.relations.inclusion()).is_zero())
    gamma = PlainMap(src, regular(f_alg), plain @ src.sect)
    gamma_inv = PlainMap(regular(f_alg), src, src.proj @ _unit_column(g_alg).kron(Mat.identity(f_alg.dim, fld)))

    src2 = tensor_plain(mu, hat)
    plain2 = Mat.from_columns([g_alg.mul(eta.matrix.col(i), g_alg.basis_vector(j))
                               for i in range(f_alg.dim) for j in range(g_alg.dim)], g_alg.dim, fld)
    if src2.relations.dim:
        rep.check("gamma_hat.well_defined", (plain2 @ src2.relations.inclusion()).is_zero())
    gamma_hat = PlainMap(src2, regular(g_alg), plain2 @ src2.sect)
    gamma_hat_inv = PlainMap(regular(g_alg), src2,
                             src2.proj @ _unit_column(f_alg).kron(Mat.identity(g_alg.dim, fld)))

    for name, m, m_inv in (("gamma", gamma, gamma_inv), ("gamma_hat", gamma_hat, gamma_hat_inv)):
        rep.extend(validate_plain_map(m), f"{name}.map.")
        rep.check(f"{name}.inverse_left", (m_inv @ m).mat == Mat.identity(m.source.dim, fld))
        rep.check(f"{name}.inverse_right", (m @ m_inv).mat == Mat.identity(m.target.dim, fld))
    out = Modifications(gamma, gamma_inv, gamma_hat, gamma_hat_inv, rep)
    t._cache["gamma"] = out
    return out


def gamma_square(e: Bimodule3) -> bool:
    """(id ⊗ Γ_A) ∘ (μ̂∘μ)(E) = (right⁻¹ ∘ left) ∘ (Γ_B ⊗ id) on (μ̂_B ⊗ μ_B) ⊗ cl(E_red)."""
    x, y = cr_module(e), rc_module(e)
    mu_b, hat_b = mu_data(e.left)
    mu_a, hat_a = mu_data(e.right)
    mu_e, _ = mu_of_module(e)
    hat_e, _ = mu_hat_of_module(e)
    composite = (associator_plain(x, hat_a, mu_a) @ tensor_maps(hat_e, _ident(mu_a))
                 @ associator_plain_inverse(hat_b, y, mu_a) @ tensor_maps(_ident(hat_b), mu_e)
                 @ associator_plain(hat_b, mu_b, x))
    lhs = tensor_maps(_ident(x), gamma_modifications(e.right).gamma) @ composite
    rhs = (right_unitor_plain_inverse(x) @ left_unitor_plain(x)
           @ tensor_maps(gamma_modifications(e.left).gamma, _ident(x)))
    return lhs == rhs


def gamma_hat_square(e: Bimodule3) -> bool:
    """(id ⊗ Γ̂_A) ∘ (μ∘μ̂)(E) = (right⁻¹ ∘ left) ∘ (Γ̂_B ⊗ id) on (μ_B ⊗ μ̂_B) ⊗ cl(E)_red."""
    x, y = cr_module(e), rc_module(e)
    mu_b, hat_b = mu_data(e.left)
    mu_a, hat_a = mu_data(e.right)
    mu_e, _ = mu_of_module(e)
    hat_e, _ = mu_hat_of_module(e)
    composite = (associator_plain(y, mu_a, hat_a) @ tensor_maps(mu_e, _ident(hat_a))
                 @ associator_plain_inverse(mu_b, x, hat_a) @ tensor_maps(_ident(mu_b), hat_e)
                 @ associator_plain(mu_b, hat_b, y))
    lhs = tensor_maps(_ident(y), gamma_modifications(e.right).gamma_hat) @ composite
    rhs = (right_unitor_plain_inverse(y) @ left_unitor_plain(y)
           @ tensor_maps(gamma_modifications(e.left).gamma_hat, _ident(y)))
    return lhs == rhs


# ----------------------------------------------------------- full pipeline

def lambda_endomorphism(e: Bimodule3) -> Bimod3Morphism:
    return Bimod3Morphism(e, e, e.tot.lam_op(), e.nmod.lam_op())


def check_commute(e: Bimodule3, pairs: list[tuple[Bimodule3, Bimodule3]] | None = None,
                  morphisms: list[Bimod3Morphism] | None = None, max_endomorphisms: int = 4) -> Report:
    """Everything needed for cl∘red ≅ red∘cl at E.

    Without explicit `pairs`, the composable pairs (Id_B, E) and (E, Id_A) are
    used; without `morphisms`, the identity, λ and a few endomorphisms of E.
    """
    rep = Report(f"classical limit commutes with reduction at {e.label}")
    rep.extend(validate_deformed(e), "input.")
    if not rep.ok:
        return rep
    rep.extend(cl_bimodule_report(e), "cl.")
    for side, t in (("B", e.left), ("A", e.right)):
        _, r = eta_algebra(t)
        rep.extend(r, f"eta_{side}.")
        if not r.ok:
            return rep
        rep.extend(gamma_modifications(t).report, f"gamma_{side}.")
        rep.check(f"mu_small_diagram.{side}", mu_small_diagram(t))
        rep.check(f"mu_hat_small_diagram.{side}", mu_hat_small_diagram(t))
    _, r = mu_of_module(e)
    rep.extend(r, "mu.")
    _, r = mu_hat_of_module(e)
    rep.extend(r, "mu_hat.")
    if not rep.ok:
        return rep
    rep.check("gamma_square", gamma_square(e))
    rep.check("gamma_hat_square", gamma_hat_square(e))
    if morphisms is None:
        morphisms = [Bimod3Morphism.identity(e), lambda_endomorphism(e)] + hom_space3(e, e)[:max_endomorphisms]
    for k, phi in enumerate(morphisms):
        rep.extend(validate_bimod_morphism(phi), f"morphism.{k}.")
        rep.check(f"mu_natural.{k}", mu_naturality(phi))
        rep.check(f"mu_hat_natural.{k}", mu_hat_naturality(phi))
    if pairs is None:
        pairs = [(identity_bimodule(e.left), e), (e, identity_bimodule(e.right))]
    for k, (g, f) in enumerate(pairs):
        rep.check(f"mu_big_diagram.{k}", mu_big_diagram(g, f))
        rep.check(f"mu_hat_big_diagram.{k}", mu_hat_big_diagram(g, f))
    return rep


# ------------------------------------------------------------------ Picard

def cl_equivalence(d: EquivData) -> EquivData:
    """Classical limit of Morita data: φ ↦ u⁻¹ ∘ cl(φ) ∘ m."""
    m_pe, _ = cl_tensor_iso(d.e_prime, d.e)
    m_ep, _ = cl_tensor_iso(d.e, d.e_prime)
    phi = cl_unit(d.a).inverse() @ cl_bimod_morphism(d.phi) @ m_pe
    psi = cl_unit(d.b).inverse() @ cl_bimod_morphism(d.psi) @ m_ep
    return EquivData(cl_bimodule(d.e), cl_bimodule(d.e_prime), phi, psi)


def cl_red_equivalence(d: EquivData) -> tuple[PlainBimodule, PlainBimodule, PlainMap, PlainMap]:
    """cl applied to the reduced Morita data."""
    er, epr, phi, psi = reduce_equivalence(d)
    out = []
    for first, second, m, alg in ((epr, er, phi, d.a.reduced()[0]), (er, epr, psi, d.b.reduced()[0])):
        mult, _ = cl_plain_mult(first, second)
        mat = (cl_plain_map(m) @ mult).mat
        out.append(PlainMap(mult.source, regular(cl_algebra(alg)[0]), mat))
    return cl_plain(er), cl_plain(epr), out[0], out[1]


def _compare(first: PlainMap, second: PlainMap, eta_left: Mat, eta_right: Mat, eta_alg: Mat,
             rep: Report, name: str):
    """eta_alg ∘ first = second ∘ (eta_left ⊗ eta_right) on the tensor sources."""
    s1, s2 = first.source, second.source
    plain = s2.proj @ eta_left.kron(eta_right)
    if s1.relations.dim:
        rep.check(f"{name}.tensor_well_defined", (plain @ s1.relations.inclusion()).is_zero())
    across = plain @ s1.sect
    rep.check(f"{name}.tensor_invertible", across.is_invertible())
    rep.check(f"{name}.intertwined", eta_alg @ first.mat == second.mat @ across)


def picard_check(d: EquivData) -> Report:
    """cl∘red and red∘cl of a deformed Morita equivalence are classical Morita
    equivalences, matched by η(E), η(E') and η_A, η_B."""
    rep = Report("Picard compatibility")
    rep.extend(verify_equivalence(d), "input.")
    rep.extend(validate_deformed(d.e), "input.e.")
    rep.extend(validate_deformed(d.e_prime), "input.e_prime.")
    if not rep.ok:
        return rep
    x, xp, phi1, psi1 = cl_red_equivalence(d)
    rep.extend(verify_plain_equivalence(x, xp, phi1, psi1), "cl_red.")
    cd = cl_equivalence(d)
    rep.extend(verify_equivalence(cd), "cl.")
    y, yp, phi2, psi2 = reduce_equivalence(cd)
    rep.extend(verify_plain_equivalence(y, yp, phi2, psi2), "red_cl.")
    for name, m in (("mu_e", d.e), ("mu_e_prime", d.e_prime)):
        _, r = mu_of_module(m)
        rep.extend(r, f"{name}.")
    eta_e, _ = eta_module(d.e)
    eta_ep, _ = eta_module(d.e_prime)
    eta_a, _ = eta_algebra(d.a)
    eta_b, _ = eta_algebra(d.b)
    _compare(phi1, phi2, eta_ep.mat, eta_e.mat, eta_a.matrix, rep, "phi")
    _compare(psi1, psi2, eta_e.mat, eta_ep.mat, eta_b.matrix, rep, "psi")
    return rep
