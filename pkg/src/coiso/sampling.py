"""Seeded random instances: triples, morphism chains, bimodules and endomorphisms.

Every generator takes a `random.Random` so a seed fixes the whole instance.
Candidates that fail validation are discarded and redrawn.
"""
from __future__ import annotations

import random

from .algebra import (Algebra, direct_product, idealizer, left_ideal_generated, quotient_algebra,
                      subalgebra_closure, submodule_generated, two_sided_ideal_generated)
from .bimodules import (Bimod3Morphism, Bimodule3, embed_l, hom_space3, identity_bimodule, quotient_module,
                        validate_bimodule)
from .field import QQ, Field
from .fixtures import classical_pool, deformed_pool
from .linalg import Mat, Subspace, vstack
from .report import CoisoError
from .triples import Triple, TripleMorphism, make_triple, trivial, unred

COEFFS = (-2, -1, 1, 2)


def small_vector(rng: random.Random, dim: int, field: Field = QQ, density: float = 0.5) -> tuple:
    vals = [rng.choice(COEFFS) if rng.random() < density else 0 for _ in range(dim)]
    if dim and not any(vals):
        vals[rng.randrange(dim)] = 1
    return tuple(field(v) for v in vals)


def sparse_element(rng: random.Random, a: Algebra) -> tuple:
    """A basis vector plus, sometimes, a multiple of a second one; rarely invertible."""
    v = [a.field.zero] * a.dim
    v[rng.randrange(a.dim)] = a.field.one
    if a.dim > 1 and rng.random() < 0.4:
        k = rng.randrange(a.dim)
        v[k] = v[k] + a.field(rng.choice(COEFFS))
    return tuple(v)


def element_of(rng: random.Random, s: Subspace) -> tuple:
    coeffs = small_vector(rng, s.dim, s.field)
    out = [s.field.zero] * s.ambient_dim
    for c, b in zip(coeffs, s.basis):
        for i, x in enumerate(b):
            out[i] = out[i] + c * x
    return tuple(out)


def random_algebra(rng: random.Random, max_dim: int = 4, field: Field = QQ, deformed: bool = False) -> Algebra:
    pool = deformed_pool(field) if deformed else classical_pool(field, max_dim)
    pool = [a for a in pool if a.dim <= max_dim]
    if not pool:
        raise CoisoError(f"no {'deformed ' if deformed else ''}algebra of dimension at most {max_dim}")
    return rng.choice(pool)


def random_triple(rng: random.Random, a: Algebra, kinds: tuple[str, ...] = ("dirac", "dirac", "sub", "sub", "unred"),
                  attempts: int = 30) -> Triple:
    """A triple on `a`: Dirac, a subalgebra between a left ideal and its idealizer, or unreduced."""
    for _ in range(attempts):
        kind = rng.choice(kinds)
        try:
            if kind == "unred":
                return unred(a)
            if kind == "trivial":
                return trivial(a)
            j = left_ideal_generated(a, [sparse_element(rng, a)])
            if kind == "sub" and rng.random() < 0.4:
                j = Subspace.zero(a.dim, a.field)
            norm = idealizer(a, j)
            if kind == "dirac":
                return make_triple(a, norm, j, label=f"dirac({a.label})")
            seed = list(j.basis) + [element_of(rng, norm)] + ([a.lam] if a.deformed else [])
            n = subalgebra_closure(a, seed)
            return make_triple(a, n, j, label=f"sub({a.label})")
        except CoisoError:
            continue
    return unred(a)


def random_dirac(rng: random.Random, max_dim: int = 4, field: Field = QQ) -> Triple:
    return random_triple(rng, random_algebra(rng, max_dim, field), kinds=("dirac",))


def random_deformed_triple(rng: random.Random, max_dim: int = 4, field: Field = QQ) -> Triple:
    return random_triple(rng, random_algebra(rng, max_dim, field, deformed=True))


def _invertible_element(rng: random.Random, a: Algebra, attempts: int = 10) -> tuple[tuple, tuple] | None:
    for _ in range(attempts):
        u = tuple(x + y for x, y in zip(a.unit, small_vector(rng, a.dim, a.field, density=0.4)))
        left = a.left_mat(u)
        if left.is_invertible():
            return u, left.inverse() @ a.unit
    return None


def _target(a: Algebra, mat: Mat, t: Triple, label: str) -> TripleMorphism:
    tgt = make_triple(a, t.n_sub.image(mat), t.zero.image(mat), label=label)
    return TripleMorphism(t, tgt, mat)


def random_triple_morphism(rng: random.Random, t: Triple, max_dim: int = 4, attempts: int = 20) -> TripleMorphism:
    """Identity, an inner automorphism, a quotient by a two-sided ideal, or the diagonal into A×A."""
    a = t.tot
    for _ in range(attempts):
        kind = rng.choice(("inner", "inner", "quotient", "quotient", "diagonal", "identity"))
        try:
            if kind == "identity":
                return TripleMorphism.identity(t)
            if kind == "inner":
                pair = _invertible_element(rng, a)
                if pair is None:
                    continue
                u, u_inv = pair
                return _target(a, a.left_mat(u) @ a.right_mat(u_inv), t, f"inner({t.label})")
            if kind == "quotient":
                ideal = two_sided_ideal_generated(a, [sparse_element(rng, a)])
                if ideal.dim in (0, a.dim):
                    continue
                q, proj, _ = quotient_algebra(a, ideal, label=f"{a.label}/I")
                return _target(q, proj, t, f"quot({t.label})")
            if 2 * a.dim > max_dim:
                continue
            prod = direct_product(a, a, label=f"{a.label}x{a.label}")
            if a.deformed:
                prod = prod.with_deformation(a.lam + a.lam, a.order)
            ident = Mat.identity(a.dim, a.field)
            return _target(prod, vstack([ident, ident]), t, f"diag({t.label})")
        except CoisoError:
            continue
    return TripleMorphism.identity(t)


def random_chain(rng: random.Random, t: Triple, length: int, max_dim: int = 4) -> list[TripleMorphism]:
    """Composable morphisms t = T_0 → T_1 → ... → T_length."""
    chain = []
    for _ in range(length):
        f = random_triple_morphism(rng, t, max_dim)
        chain.append(f)
        t = f.target
    return chain


def _enlarge_zero(rng: random.Random, e: Bimodule3) -> Bimodule3:
    z = submodule_generated(e.nmod, list(e.zero.basis) + [small_vector(rng, e.nmod.dim, e.field)])
    return Bimodule3(e.left, e.right, e.tot, e.nmod, z, e.iota, label=f"{e.label}+0")


def _quotient(rng: random.Random, e: Bimodule3) -> Bimodule3 | None:
    s_tot = submodule_generated(e.tot, [small_vector(rng, e.tot.dim, e.field)])
    if s_tot.dim == e.tot.dim:
        return None
    s_n = s_tot.preimage(e.iota)
    tot, t_proj, _ = quotient_module(e.tot, s_tot, label=f"{e.tot.label}/S")
    nmod, n_proj, n_sect = quotient_module(e.nmod, s_n, label=f"{e.nmod.label}/S")
    return Bimodule3(e.left, e.right, tot, nmod, e.zero.image(n_proj), t_proj @ e.iota @ n_sect,
                     label=f"{e.label}/S")


def random_bimodule_from(rng: random.Random, phi: TripleMorphism) -> Bimodule3:
    """L(φ) over (target, source), possibly with a larger 0-component or divided by a sub-bimodule."""
    e = embed_l(phi)
    if e.tot.dim == 0:
        return e
    kind = rng.choice(("plain", "zero", "quotient"))
    out = e
    if kind == "zero":
        out = _enlarge_zero(rng, e)
    elif kind == "quotient":
        out = _quotient(rng, e) or e
    if not validate_bimodule(out).ok:
        return e
    return out


def random_composable(rng: random.Random, length: int, max_alg_dim: int = 3, deformed: bool = False,
                      field: Field = QQ) -> list[Bimodule3]:
    """Bimodules [e_length, ..., e_1] with e_k over (T_k, T_k-1), ready for nested tensoring."""
    a = random_algebra(rng, max_alg_dim, field, deformed=deformed)
    t = random_triple(rng, a)
    chain = random_chain(rng, t, length, max_alg_dim)
    return [random_bimodule_from(rng, phi) for phi in reversed(chain)]


def random_deformed_bimodule(rng: random.Random, max_dim: int = 4, field: Field = QQ) -> Bimodule3:
    t = random_deformed_triple(rng, max_dim, field)
    if rng.random() < 0.25:
        return identity_bimodule(t)
    return random_bimodule_from(rng, random_triple_morphism(rng, t, max_dim))


def random_endomorphism(rng: random.Random, e: Bimodule3) -> Bimod3Morphism:
    basis = hom_space3(e, e)
    out = Bimod3Morphism.zero(e, e)
    for b in basis:
        c = rng.choice((0,) + COEFFS)
        if c:
            out = out + b.scale(e.field(c))
    return out
