"""Morita equivalence data for coisotropic triples: the standard Mat_n family,
verification of witnesses, dual bases, idempotents and the structure theorem."""
from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import (Algebra, PlainBimodule, commutant, flatten, hom_equations, matrix_algebra, unflatten)
from .bimodules import (Bimod3Morphism, Bimodule3, PlainMap, identity_bimodule, left_unitor, reduce_2morphism, reduce_bimodule,
                        reduction_mult_iso, regular, tensor, tensor_plain, validate_bimod_morphism,
                        validate_bimodule, validate_plain_map)
from .linalg import Mat, Subspace, block_diag, kernel_of_rows, quotient, solve_rows, vstack, hstack
from .report import CoisoError, Report
from .triples import Triple, make_triple


@dataclass
class EquivData:
    """E over (B, A), E' over (A, B), φ: E'⊗E → Id_A and ψ: E⊗E' → Id_B."""
    e: Bimodule3
    e_prime: Bimodule3
    phi: Bimod3Morphism
    psi: Bimod3Morphism

    @property
    def a(self) -> Triple:
        return self.e.right

    @property
    def b(self) -> Triple:
        return self.e.left


def _blocks(sub: Subspace, n: int) -> Subspace:
    """Mat_n(sub) inside Mat_n of the ambient algebra."""
    d = sub.ambient_dim
    z = sub.field.zero
    vecs = []
    for p in range(n):
        for q in range(n):
            for v in sub.basis:
                w = [z] * (n * n * d)
                w[(p * n + q) * d:(p * n + q + 1) * d] = v
                vecs.append(w)
    return Subspace.span(vecs, n * n * d, sub.field)


def matrix_triple(a: Triple, n: int) -> Triple:
    """Mat_n(A) componentwise."""
    tot = matrix_algebra(a.tot, n, label=f"Mat_{n}({a.tot.label})")
    return make_triple(tot, _blocks(a.n_sub, n), _blocks(a.zero, n), label=f"Mat_{n}({a.label})")


def column_module(alg: Algebra, n: int, mat_alg: Algebra) -> PlainBimodule:
    """alg^n as columns: left Mat_n(alg), right alg."""
    d = alg.dim
    f = alg.field
    entries = alg.structure_entries()
    left = []
    for p in range(n):
        for q in range(n):
            for i in range(d):
                left.append(Mat.from_sparse(n * d, n * d, ((p * d + k, q * d + j, c)
                                                           for (i2, j, k, c) in entries if i2 == i), f))
    right = [Mat.from_sparse(n * d, n * d, ((r * d + k, r * d + i, c) for r in range(n)
                                            for (i, j2, k, c) in entries if j2 == j), f) for j in range(d)]
    return PlainBimodule(mat_alg, alg, n * d, left, right, label=f"{alg.label}^{n}")


def row_module(alg: Algebra, n: int, mat_alg: Algebra) -> PlainBimodule:
    """alg^n as rows: left alg, right Mat_n(alg)."""
    d = alg.dim
    f = alg.field
    entries = alg.structure_entries()
    left = [Mat.from_sparse(n * d, n * d, ((p * d + k, p * d + j, c) for p in range(n)
                                           for (i2, j, k, c) in entries if i2 == i), f) for i in range(d)]
    right = []
    for p in range(n):
        for q in range(n):
            for i in range(d):
                right.append(Mat.from_sparse(n * d, n * d, ((q * d + k, p * d + j, c)
                                                            for (j, i2, k, c) in entries if i2 == i), f))
    return PlainBimodule(alg, mat_alg, n * d, left, right, label=f"{alg.label}_{n}")


def _slots(sub: Subspace, n: int) -> Subspace:
    d = sub.ambient_dim
    z = sub.field.zero
    vecs = []
    for p in range(n):
        for v in sub.basis:
            w = [z] * (n * d)
            w[p * d:(p + 1) * d] = v
            vecs.append(w)
    return Subspace.span(vecs, n * d, sub.field)


def _pairing(alg: Algebra, n: int, plain_dim_e: int) -> Mat:
    """row ⊗ column ↦ sum_p x'_p x_p on the plain tensor of rows and columns."""
    d = alg.dim
    cols = []
    for p in range(n):
        for j in range(d):
            for r in range(n):
                for k in range(d):
                    cols.append(alg.product(j, k) if p == r else alg.zero_vector())
    return Mat.from_columns(cols, d, alg.field)


def _outer(alg: Algebra, n: int, mat_dim: int) -> Mat:
    """column ⊗ row ↦ the matrix (x_p x'_q)_pq."""
    d = alg.dim
    z = alg.field.zero
    cols = []
    for p in range(n):
        for j in range(d):
            for q in range(n):
                for k in range(d):
                    v = [z] * mat_dim
                    v[(p * n + q) * d:(p * n + q + 1) * d] = alg.product(j, k)
                    cols.append(v)
    return Mat.from_columns(cols, mat_dim, alg.field)


def standard_equivalence(a: Triple, n: int) -> EquivData:
    """A^n columns and rows between Mat_n(A) and A."""
    b = matrix_triple(a, n)
    iota = block_diag([a.n_incl] * n)
    e = Bimodule3(b, a, column_module(a.tot, n, b.tot), column_module(a.n_alg, n, b.n_alg),
                  _slots(a.zero_n, n), iota, label=f"{a.label}^{n}")
    ep = Bimodule3(a, b, row_module(a.tot, n, b.tot), row_module(a.n_alg, n, b.n_alg),
                   _slots(a.zero_n, n), iota, label=f"{a.label}_{n}")
    ide_a, ide_b = identity_bimodule(a), identity_bimodule(b)
    epe, eep = tensor(ep, e), tensor(e, ep)
    phi = Bimod3Morphism(epe, ide_a, _pairing(a.tot, n, e.tot.dim) @ epe.tot.sect,
                         _pairing(a.n_alg, n, e.nmod.dim) @ epe.nmod.sect)
    psi = Bimod3Morphism(eep, ide_b, _outer(a.tot, n, b.tot.dim) @ eep.tot.sect,
                         _outer(a.n_alg, n, b.n_alg.dim) @ eep.nmod.sect)
    return EquivData(e, ep, phi, psi)


def identity_equivalence(t: Triple) -> EquivData:
    ide = identity_bimodule(t)
    mult = left_unitor(ide)
    return EquivData(ide, ide, mult, mult)


def _compatible(e: PlainBimodule, ep: PlainBimodule, psi: Mat, phi: Mat, t_ee: Mat, t_epe: Mat) -> tuple | None:
    """First basis triple (x, x', y) with ψ(x⊗x')·y ≠ x·φ(x'⊗y), or None.

    t_ee, t_epe are the projections from the plain tensors onto E⊗E' and E'⊗E.
    """
    de, dp = e.dim, ep.dim
    psi_plain = psi @ t_ee
    phi_plain = phi @ t_epe
    psi_cols = psi_plain.columns()
    phi_cols = phi_plain.columns()
    right_ops = {}
    for xp in range(dp):
        for y in range(de):
            right_ops[(xp, y)] = e.right_op(phi_cols[xp * de + y])
    for x in range(de):
        for xp in range(dp):
            lhs = e.left_op(psi_cols[x * dp + xp])
            for y in range(de):
                if lhs.col(y) != right_ops[(xp, y)].col(x):
                    return (x, xp, y)
    return None


def verify_plain_equivalence(e: PlainBimodule, ep: PlainBimodule, phi: PlainMap, psi: PlainMap) -> Report:
    """Classical Morita data: φ: E'⊗E → A and ψ: E⊗E' → B invertible bimodule maps, compatible."""
    rep = Report("classical Morita equivalence")
    rep.extend(validate_plain_map(phi), "phi.")
    rep.extend(validate_plain_map(psi), "psi.")
    rep.check("phi.target_regular", phi.target == regular(e.right_alg))
    rep.check("psi.target_regular", psi.target == regular(e.left_alg))
    rep.check("phi.invertible", phi.mat.is_invertible())
    rep.check("psi.invertible", psi.mat.is_invertible())
    bad = _compatible(e, ep, psi.mat, phi.mat, tensor_plain(e, ep).proj, tensor_plain(ep, e).proj)
    rep.check("compatibility", bad is None, {"basis_triple": bad})
    return rep


def verify_equivalence(d: EquivData) -> Report:
    rep = Report("Morita equivalence")
    e, ep = d.e, d.e_prime
    rep.check("shapes", e.right == ep.left and e.left == ep.right)
    if not rep.ok:
        return rep
    rep.extend(validate_bimodule(e), "e.")
    rep.extend(validate_bimodule(ep), "e_prime.")
    rep.extend(validate_bimod_morphism(d.phi), "phi.")
    rep.extend(validate_bimod_morphism(d.psi), "psi.")
    for name, m in (("phi", d.phi), ("psi", d.psi)):
        rep.check(f"{name}.tot_invertible", m.tot.is_invertible())
        rep.check(f"{name}.n_invertible", m.n.is_invertible())
        rep.check(f"{name}.zero_onto", m.source.zero.image(m.n) == m.target.zero)
    eep, epe = tensor(e, ep), tensor(ep, e)
    bad = _compatible(e.tot, ep.tot, d.psi.tot, d.phi.tot, eep.tot.proj, epe.tot.proj)
    rep.check("compatibility.tot", bad is None, {"basis_triple": bad})
    bad = _compatible(e.nmod, ep.nmod, d.psi.n, d.phi.n, eep.nmod.proj, epe.nmod.proj)
    rep.check("compatibility.n", bad is None, {"basis_triple": bad})
    rep.check("tensor_iota_injective", eep.iota.rank() == eep.nmod.dim)
    rep.check("tensor_iota_injective.prime", epe.iota.rank() == epe.nmod.dim)
    return rep


@dataclass
class DualBasis:
    gens: list[tuple]
    funcs: list[Mat]
    lifted_gens: list[tuple]
    lifted_funcs: list[Mat]
    data: EquivData
    report: Report = field(default_factory=Report)


def _coefficient_maps(m: PlainBimodule, gens: list[tuple]) -> list[Mat]:
    """For each generator g, the map a ↦ g·a."""
    return [Mat.from_columns([r @ g for r in m.right], m.dim, m.field) for g in gens]


def dual_basis(d: EquivData, gens: list[tuple]) -> DualBasis:
    """Right-linear e^j with sum_j e_j e^j(x) = x on E_N, lifted to E_tot."""
    e, a = d.e, d.a
    fld = e.field
    an = a.n_alg
    de, da = e.nmod.dim, an.dim
    gens = [tuple(g) for g in gens]
    m = len(gens)
    block = da * de
    coeff = _coefficient_maps(e.nmod, gens)
    eqs: list[dict] = []
    rhs: list = []
    pairs = [(e.nmod.right_op(g), an.right_mat(g)) for g in an.generators()]
    for j in range(m):
        new = hom_equations(pairs, da, de, offset=j * block)
        eqs += new
        rhs += [0] * len(new)
    for r in range(de):
        for c in range(de):
            eq: dict = {}
            for j, gmat in enumerate(coeff):
                for k, x in gmat.sparse_rows()[r]:
                    v = j * block + k * de + c
                    eq[v] = eq.get(v, 0) + x
            eqs.append(eq)
            rhs.append(fld.one if r == c else fld.zero)
    sol = solve_rows(eqs, rhs, m * block, fld)
    if sol is None:
        raise CoisoError("not projective over given generators")
    funcs = [unflatten(sol[j * block:(j + 1) * block], da, de, fld) for j in range(m)]

    # unit decomposition 1 = ψ_N(sum x_i ⊗ y_i)
    eep, epe = tensor(e, d.e_prime), tensor(d.e_prime, e)
    pre = solve_rows([dict(r) for r in d.psi.n.sparse_rows()], d.b.n_alg.unit, eep.nmod.dim, fld)
    if pre is None:
        raise CoisoError("ψ_N does not reach the unit")
    w = eep.nmod.sect @ pre
    dp_n = d.e_prime.nmod.dim
    at = a.tot
    tot_id = Mat.identity(e.tot.dim, fld)
    phi_plain = d.phi.tot @ epe.tot.proj
    lifted_funcs = []
    for fj in funcs:
        acc = Mat.zeros(at.dim, e.tot.dim, fld)
        for idx, c in enumerate(w):
            if not c:
                continue
            x, y = divmod(idx, dp_n)
            coeff_a = a.n_incl @ (fj @ Mat.identity(de, fld).col(x))
            yi = Mat.from_columns([d.e_prime.iota.col(y)], d.e_prime.tot.dim, fld)
            term = at.left_mat(coeff_a) @ phi_plain @ yi.kron(tot_id)
            acc = acc + term.scale(c)
        lifted_funcs.append(acc)
    lifted_gens = [e.iota @ g for g in gens]

    rep = Report("dual basis")
    ident_n = Mat.identity(de, fld)
    total = Mat.zeros(de, de, fld)
    for g, fj in zip(coeff, funcs):
        total = total + g @ fj
    rep.check("complete.n", total == ident_n)
    coeff_tot = _coefficient_maps(e.tot, lifted_gens)
    total = Mat.zeros(e.tot.dim, e.tot.dim, fld)
    for g, fj in zip(coeff_tot, lifted_funcs):
        total = total + g @ fj
    rep.check("complete.tot", total == tot_id)
    bad = next((j for j, (ft, fj) in enumerate(zip(lifted_funcs, funcs)) if ft @ e.iota != a.n_incl @ fj), None)
    rep.check("lift_intertwines_iota", bad is None, {"index": bad})
    bad = next((j for j, ft in enumerate(lifted_funcs)
                if any(ft @ e.tot.right[i] != at.right_basis()[i] @ ft for i in range(at.dim))), None)
    rep.check("lift_right_linear", bad is None, {"index": bad})
    return DualBasis(gens, funcs, lifted_gens, lifted_funcs, d, rep)


def idempotents(db: DualBasis) -> tuple[tuple, tuple, bool]:
    """(e_N)_ij = e^i(e_j) in Mat_m(A_N) and (e_tot)_ij = e^i_tot(e_j^tot) in Mat_m(A_tot)."""
    a = db.data.a
    m = len(db.gens)
    da, dt = a.n_alg.dim, a.tot.dim
    fld = a.field
    e_n = [fld.zero] * (m * m * da)
    e_tot = [fld.zero] * (m * m * dt)
    for i in range(m):
        for j in range(m):
            e_n[(i * m + j) * da:(i * m + j + 1) * da] = db.funcs[i] @ db.gens[j]
            e_tot[(i * m + j) * dt:(i * m + j + 1) * dt] = db.lifted_funcs[i] @ db.lifted_gens[j]
    e_n, e_tot = tuple(e_n), tuple(e_tot)
    equal = block_diag([a.n_incl] * (m * m)) @ e_n == e_tot
    return e_n, e_tot, equal


def is_idempotent(alg: Algebra, e: tuple) -> bool:
    return alg.mul(e, e) == e


def check_zero_component(d: EquivData) -> bool:
    """E_N·A_0 = E_0."""
    e = d.e
    vecs = [c for z in d.a.zero_n.basis for c in e.nmod.right_op(z).columns()]
    return Subspace.span(vecs, e.nmod.dim, e.field) == e.zero


def right_generators(m: PlainBimodule) -> list[tuple]:
    """Greedy generating set of m as a right module, taken from the standard basis."""
    gens: list[tuple] = []
    cur = Subspace.zero(m.dim, m.field)
    ident = Mat.identity(m.dim, m.field)
    for i in range(m.dim):
        if cur.dim == m.dim:
            break
        v = ident.col(i)
        if not cur.contains(v):
            gens.append(v)
            cur = Subspace.span(cur.basis + tuple(r @ v for r in m.right), m.dim, m.field)
    return gens


def _left_mult_iso(rep: Report, name: str, mod: PlainBimodule, right_gens: list, dim_b: int):
    ops = [mod.right_op(g) for g in right_gens]
    space = commutant(ops, mod.dim, mod.field)
    images = [flatten(L) for L in mod.left]
    rep.check(f"{name}.into_endomorphisms", all(space.contains(v) for v in images))
    rank = Subspace.span(images, mod.dim * mod.dim, mod.field).dim
    rep.check(f"{name}.injective", rank == dim_b, {"rank": rank})
    rep.check(f"{name}.surjective", space.dim == dim_b, {"end_dim": space.dim})
    bad = next(((i, j) for i in range(dim_b) for j in range(dim_b)
                if mod.left[i] @ mod.left[j] != mod.left_op(mod.left_alg.product(i, j))), None)
    rep.check(f"{name}.multiplicative", bad is None, {"basis_pair": bad})


def check_structure_theorem(d: EquivData) -> Report:
    rep = Report("structure theorem")
    e, a, b = d.e, d.a, d.b
    fld = e.field
    _left_mult_iso(rep, "tot", e.tot, a.tot.generators(), b.tot.dim)
    _left_mult_iso(rep, "n", e.nmod, a.n_alg.generators(), b.n_alg.dim)

    # B_0 → Hom_{A_N}(E_N, E_0): commutant intersected with maps into E_0
    n = e.nmod.dim
    eqs = hom_equations([(e.nmod.right_op(g), e.nmod.right_op(g)) for g in a.n_alg.generators()], n, n)
    q, _ = quotient(n, e.zero)
    for qrow in q.sparse_rows():
        for c in range(n):
            eqs.append({r * n + c: y for r, y in qrow})
    hom0 = kernel_of_rows(eqs, n * n, fld)
    img0 = Subspace.span([flatten(e.nmod.left_op(z)) for z in b.zero_n.basis], n * n, fld)
    rep.check("zero.bijective", img0 == hom0 and img0.dim == b.zero_n.dim,
              {"hom_dim": hom0.dim, "image_dim": img0.dim, "b0_dim": b.zero_n.dim})
    rep.info["hom_zero_dim"] = hom0.dim
    rep.check("iota_injective", e.iota.rank() == e.nmod.dim)

    gens = right_generators(e.nmod)
    db = dual_basis(d, gens)
    rep.extend(db.report, "dual_basis.")
    e_n, e_tot, equal = idempotents(db)
    m = len(gens)
    rep.info["generators"] = m
    mat_n = matrix_algebra(a.n_alg, m)
    mat_tot = matrix_algebra(a.tot, m)
    rep.check("idempotent.n", is_idempotent(mat_n, e_n))
    rep.check("idempotent.tot", is_idempotent(mat_tot, e_tot))
    rep.check("idempotent.equal", equal)
    col_n = column_module(a.n_alg, m, mat_n)
    col_tot = column_module(a.tot, m, mat_tot)
    g_n = vstack(db.funcs) if m else Mat.zeros(0, n, fld)
    g_tot = vstack(db.lifted_funcs) if m else Mat.zeros(0, e.tot.dim, fld)
    for name, g, mod, col, idem, alg in (("n", g_n, e.nmod, col_n, e_n, a.n_alg),
                                         ("tot", g_tot, e.tot, col_tot, e_tot, a.tot)):
        rep.check(f"{name}.g_injective", g.rank() == mod.dim)
        image = Subspace.column_space(g) if mod.dim else Subspace.zero(col.dim, fld)
        rep.check(f"{name}.image_is_eA^m", image == Subspace.column_space(col.left_op(idem)))
        bad = next((i for i in range(alg.dim) if g @ mod.right[i] != col.right[i] @ g), None)
        rep.check(f"{name}.g_right_linear", bad is None, {"basis": bad})
    rep.check("g_intertwines_iota", block_diag([a.n_incl] * m) @ g_n == g_tot @ e.iota)
    zero_cols = _slots(a.zero_n, m)
    ez = zero_cols.image(col_n.left_op(e_n))
    rep.check("zero.image_is_eA0^m", e.zero.image(g_n) == ez)
    return rep


def reduce_equivalence(d: EquivData) -> tuple[PlainBimodule, PlainBimodule, PlainMap, PlainMap]:
    """The reduced classical Morita data (E_red, E'_red, φ_red∘m, ψ_red∘m)."""
    m_pe, _ = reduction_mult_iso(d.e_prime, d.e)
    m_ep, _ = reduction_mult_iso(d.e, d.e_prime)
    phi = reduce_2morphism(d.phi) @ m_pe
    psi = reduce_2morphism(d.psi) @ m_ep
    a_red = d.a.reduced()[0]
    b_red = d.b.reduced()[0]
    phi = PlainMap(phi.source, regular(a_red), phi.mat)
    psi = PlainMap(psi.source, regular(b_red), psi.mat)
    return reduce_bimodule(d.e), reduce_bimodule(d.e_prime), phi, psi


def project_equivalence(d: EquivData, component: str) -> Report:
    """The tot or N projection of verified data is a classical Morita equivalence."""
    get = (lambda x: x.tot) if component == "tot" else (lambda x: x.nmod)
    a = d.a.tot if component == "tot" else d.a.n_alg
    b = d.b.tot if component == "tot" else d.b.n_alg
    phi = PlainMap(get(tensor(d.e_prime, d.e)), regular(a), d.phi.tot if component == "tot" else d.phi.n)
    psi = PlainMap(get(tensor(d.e, d.e_prime)), regular(b), d.psi.tot if component == "tot" else d.psi.n)
    return verify_plain_equivalence(get(d.e), get(d.e_prime), phi, psi)
