import random

import pytest
from hypothesis import given, settings, strategies as st

from coiso.algebra import left_ideal_generated
from coiso.bimodules import Bimod3Morphism, identity_bimodule, zero_bimodule
from coiso.classical import (check_commute, cl_algebra, cl_bimod_morphism, cl_bimodule, cl_composition_coherence, cl_functor_laws,
                             cl_identity_coherence, cl_naturality, cl_tensor_iso, cl_triple, dimension_accounting,
                             eta_algebra, gamma_hat_square, gamma_modifications, gamma_square, mu_hat_of_module,
                             mu_naturality, mu_of_module, picard_check, validate_deformed)
from coiso.fixtures import cliff, deformed_pool, dual, truncated_poly
from coiso.linalg import Subspace
from coiso.morita import standard_equivalence
from coiso.report import CoisoError
from coiso.sampling import (random_bimodule_from, random_chain, random_deformed_bimodule, random_deformed_triple,
                            random_endomorphism)
from coiso.triples import Triple, dirac, make_triple, trivial, unred, validate_triple

seeds = st.integers(0, 10**6)


def cliff_dirac():
    a = cliff()
    return dirac(a, left_ideal_generated(a, [a.basis_vector(1)]))


def dual_dirac():
    a = dual()
    return dirac(a, Subspace.span([a.lam], 2))


# ------------------------------------------------------------------ deformed input

def test_dual_is_deformed():
    assert validate_deformed(dual()).ok


def test_cliff_is_deformed():
    assert validate_deformed(cliff()).ok


def test_cliff_with_x_as_parameter_is_not_nilpotent():
    a = cliff().undeformed().with_deformation([0, 1, 0, 0], 2)
    failed = {c.name for c in validate_deformed(a).failures}
    assert "nilpotent" in failed


@pytest.mark.parametrize("a", deformed_pool(), ids=lambda a: a.label)
def test_pool_is_deformed(a):
    assert validate_deformed(a).ok


def test_unsaturated_n_is_rejected():
    # k[x]/x²[λ] with basis 1, λ, x, λx; N = span{1, λ, λx} meets λA in λx without containing λ·x
    a = deformed_pool()[3]
    n = Subspace.span([a.basis_vector(0), a.basis_vector(1), a.basis_vector(3)], 4)
    t = Triple(a, n, Subspace.zero(4))
    assert "deformed.n_saturated" in [c.name for c in validate_triple(t).failures]
    with pytest.raises(CoisoError):
        make_triple(a, n, Subspace.zero(4))


# ------------------------------------------------------------------ classical limit

def test_cl_dual_is_k():
    assert cl_algebra(dual())[0].dim == 1


def test_cl_cliff_is_dual_numbers():
    c, _, _ = cl_algebra(cliff())
    assert c.structure_entries() == truncated_poly(2).structure_entries()


def test_cl_unred_dual_is_unred_k():
    c = cl_triple(unred(dual()))
    assert (c.tot.dim, c.n_sub.dim, c.zero.dim) == (1, 1, 0)


def test_cl_identity_bimodule_is_identity_of_cl():
    t = cliff_dirac()
    c, ident = cl_bimodule(identity_bimodule(t)), identity_bimodule(cl_triple(t))
    assert c.dims == ident.dims
    assert c.tot.left == ident.tot.left and c.nmod.right == ident.nmod.right


def test_cl_zero_bimodule():
    t = unred(dual())
    assert cl_bimodule(zero_bimodule(t, t)).dims == (0, 0, 0)


def test_cl_identity_of_unred_cliff():
    assert cl_bimodule(identity_bimodule(unred(cliff()))).dims == (2, 2, 0)


@pytest.mark.parametrize("make", [lambda: unred(dual()), dual_dirac, lambda: trivial(dual())])
def test_cl_tensor_iso_on_identities(make):
    e = identity_bimodule(make())
    m, rep = cl_tensor_iso(e, e)
    assert rep.ok and m.is_invertible()


def test_dimension_accounting_keeps_the_literal_zero_count_as_info():
    rep = dimension_accounting(dual_dirac())
    assert rep.ok
    assert rep.info["zero_literal"] is False


# ------------------------------------------------------------------ η, μ, Γ

def test_eta_unred_dual():
    eta, rep = eta_algebra(unred(dual()))
    assert rep.ok and eta.matrix.shape == (1, 1)


def test_eta_cliff_dirac_is_bijective():
    eta, rep = eta_algebra(cliff_dirac())
    assert rep.ok and eta.matrix.is_invertible()


def test_eta_trivial_dual_is_vacuous():
    eta, rep = eta_algebra(trivial(dual()))
    assert rep.ok and eta.matrix.shape == (0, 0)


def test_mu_identity_of_unred_dual():
    mu, rep = mu_of_module(identity_bimodule(unred(dual())))
    assert rep.ok and mu.mat.is_identity()


def test_mu_cliff_dirac_is_invertible():
    e = identity_bimodule(cliff_dirac())
    for build in (mu_of_module, mu_hat_of_module):
        m, rep = build(e)
        assert rep.ok and m.mat.is_invertible()


@pytest.mark.parametrize("make", [lambda: unred(dual()), cliff_dirac, lambda: trivial(dual())])
def test_gamma_modifications(make):
    t = make()
    assert gamma_modifications(t).report.ok
    e = identity_bimodule(t)
    assert gamma_square(e) and gamma_hat_square(e)


@pytest.mark.parametrize("make", [lambda: unred(dual()), dual_dirac, lambda: unred(cliff()), cliff_dirac])
def test_commute_on_fixture_identities(make):
    assert check_commute(identity_bimodule(make())).ok


def test_picard_over_dual():
    assert picard_check(standard_equivalence(unred(dual()), 2)).ok


# ------------------------------------------------------------------ properties

@given(seeds)
@settings(max_examples=25)
def test_commute_on_random_deformed_bimodules(seed):
    assert check_commute(random_deformed_bimodule(random.Random(seed))).ok


@given(seeds)
@settings(max_examples=25)
def test_mu_is_natural_against_random_endomorphisms(seed):
    r = random.Random(seed)
    e = random_deformed_bimodule(r)
    assert mu_naturality(random_endomorphism(r, e))


@given(seeds)
@settings(max_examples=25)
def test_classical_limit_is_a_bicategory_functor(seed):
    r = random.Random(seed)
    chain = random_chain(r, random_deformed_triple(r), 3)
    assert cl_functor_laws(chain).ok
    h, g, f = [random_bimodule_from(r, phi) for phi in reversed(chain)]
    assert cl_composition_coherence(h, g, f)
    assert cl_identity_coherence(f) == (True, True)
    assert cl_naturality(random_endomorphism(r, g), random_endomorphism(r, f))
    for x in (chain[0].source, h, g, f):
        assert dimension_accounting(x).ok


@given(seeds)
@settings(max_examples=25)
def test_cl_of_identity_morphism_is_identity(seed):
    e = random_deformed_bimodule(random.Random(seed))
    assert cl_bimod_morphism(Bimod3Morphism.identity(e)) == Bimod3Morphism.identity(cl_bimodule(e))
