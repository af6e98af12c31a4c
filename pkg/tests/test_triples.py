import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from coiso.algebra import idealizer, is_isomorphism, validate_morphism
from coiso.fixtures import j_col, m2, qq, qq_x_qq, t2
from coiso.linalg import Subspace
from coiso.report import CoisoError
from coiso.sampling import random_algebra, random_chain, random_dirac, random_triple
from coiso.triples import (Pair, Triple, TripleMorphism, canonical_bimodule, dirac, make_triple, pair_to_triple,
                           reduce_morphism, reduction_functor_laws, triple_to_pair, trivial, unred, unred_iso,
                           validate_pair, validate_triple, validate_triple_morphism, verify_canonical_bimodule)


def vec(*xs):
    return tuple(F(x) for x in xs)


def e12():
    return Subspace.span([vec(0, 1, 0)], 3)


def test_m2_dirac_is_valid():
    assert validate_triple(Triple(m2(), idealizer(m2(), j_col()), j_col())).ok


def test_zero_outside_n_is_rejected():
    t = Triple(m2(), Subspace.span([m2().unit], 4), j_col())
    rep = validate_triple(t)
    assert "zero_in_n" in [c.name for c in rep.failures]
    with pytest.raises(CoisoError):
        make_triple(m2(), Subspace.span([m2().unit], 4), j_col())


def test_trivial_t2_is_valid():
    assert validate_triple(trivial(t2())).ok


def test_dirac_m2():
    t = dirac(m2(), j_col())
    assert t.n_sub == Subspace.span([vec(1, 0, 0, 0), vec(0, 0, 1, 0), vec(0, 0, 0, 1)], 4)
    assert t.zero == j_col()


def test_dirac_of_zero_ideal_is_unred():
    a = t2()
    assert dirac(a, Subspace.zero(3)) == unred(a)


def test_dirac_t2():
    t = dirac(t2(), e12())
    assert t.n_sub.dim == 3 and t.zero == e12()


def test_dirac_rejects_non_ideal():
    with pytest.raises(CoisoError):
        dirac(m2(), Subspace.span([vec(0, 1, 0, 0)], 4))


def test_unred_t2_reduces_to_t2():
    iso = unred_iso(t2())
    assert validate_morphism(iso).ok and is_isomorphism(iso)
    assert iso.target.structure_entries() == t2().structure_entries()


def test_trivial_reduces_to_zero():
    assert trivial(t2()).reduced()[0].dim == 0


def test_unred_of_k():
    t = unred(qq())
    assert (t.tot.dim, t.n_sub.dim, t.zero.dim) == (1, 1, 0)


def test_reduce_m2_dirac_is_k():
    red = dirac(m2(), j_col()).reduced()[0]
    assert red.dim == 1 and red.product(0, 0) == vec(1)


def test_reduce_t2_dirac_is_k_times_k():
    red = dirac(t2(), e12()).reduced()[0]
    assert red.structure_entries() == qq_x_qq().structure_entries()


def test_reduce_unred_m2():
    assert is_isomorphism(unred_iso(m2()))


def test_canonical_bimodule_m2():
    t = dirac(m2(), j_col())
    assert canonical_bimodule(t).dim == 2
    rep = verify_canonical_bimodule(t)
    assert rep.ok and rep.info["end_dim"] == 1


def test_canonical_bimodule_unred():
    rep = verify_canonical_bimodule(unred(t2()))
    assert rep.ok and rep.info["end_dim"] == 3


def test_canonical_bimodule_trivial():
    t = trivial(t2())
    assert canonical_bimodule(t).dim == 0
    rep = verify_canonical_bimodule(t)
    assert rep.ok and rep.info["end_dim"] == 0


def test_pair_round_trip():
    t = dirac(t2(), e12())
    p = triple_to_pair(t)
    assert p.zero == e12() and validate_pair(p).ok
    assert triple_to_pair(pair_to_triple(p)) == p


def test_pair_to_triple_k_times_k():
    p = Pair(qq_x_qq(), Subspace.span([vec(0, 1)], 2))
    assert validate_triple(pair_to_triple(p)).ok


def test_morphism_must_preserve_zero():
    t = dirac(t2(), e12())
    f = TripleMorphism(unred(t2()), t, TripleMorphism.identity(t).matrix)
    assert validate_triple_morphism(f).ok
    backwards = TripleMorphism(t, unred(t2()), f.matrix)
    assert "preserves_zero" in [c.name for c in validate_triple_morphism(backwards).failures]
    with pytest.raises(CoisoError):
        reduce_morphism(backwards)


# ------------------------------------------------------------------ sampling

def test_sampling_seed_zero_is_pinned():
    r = random.Random(0)
    a = random_algebra(r)
    t = random_triple(r, a)
    assert a.label == "k x k[x]/x^2"
    assert (t.tot.dim, t.n_sub.dim, t.zero.dim) == (3, 3, 2)


def test_sampling_is_deterministic():
    def draw():
        r = random.Random(0)
        return random_triple(r, random_algebra(r))
    assert draw() == draw()


def test_hundred_seeds_give_valid_triples():
    for s in range(100):
        r = random.Random(s)
        assert validate_triple(random_triple(r, random_algebra(r))).ok


# ------------------------------------------------------------------ properties

@given(st.integers(0, 10**6), st.integers(1, 4))
def test_reduction_is_a_functor(seed, length):
    r = random.Random(seed)
    chain = random_chain(r, random_triple(r, random_algebra(r)), length)
    assert reduction_functor_laws(chain).ok


@given(st.integers(0, 10**6))
def test_random_dirac_canonical_bimodule(seed):
    t = random_dirac(random.Random(seed))
    assert verify_canonical_bimodule(t).ok


@given(st.integers(0, 10**6))
def test_reduced_dimension(seed):
    r = random.Random(seed)
    t = random_triple(r, random_algebra(r))
    assert t.reduced()[0].dim == t.n_sub.dim - t.zero.dim
