from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, strategies as st

from coiso.algebra import (AlgMorphism, Algebra, endomorphism_algebra, idealizer, is_isomorphism,
                           left_ideal_generated, matrix_algebra, quotient_algebra, right_module, subalgebra_closure,
                           two_sided_ideal_generated, validate_algebra, validate_morphism)
from coiso.field import Field
from coiso.fixtures import classical_pool, cliff, dual, j_col, m2, qq, qq_x_qq, t2
from coiso.linalg import Mat, Subspace

POOL = classical_pool(max_dim=4)
coeff = st.integers(-2, 2)


def vec(*xs):
    return tuple(F(x) for x in xs)


def span(vectors, n):
    return Subspace.span([vec(*v) for v in vectors], n)


def element(a: Algebra):
    return st.lists(coeff, min_size=a.dim, max_size=a.dim).map(lambda xs: tuple(F(x) for x in xs))


algebras = st.sampled_from(POOL)


# ------------------------------------------------------------------ structure constants against matrices

def _units(n):
    return [sympy.Matrix(n, n, lambda r, c: int((r, c) == (p, q))) for p in range(n) for q in range(n)]


def test_m2_matches_matrix_multiplication():
    basis = _units(2)
    a = m2()
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            prod = x * y
            assert a.product(i, j) == tuple(F(int(prod[k // 2, k % 2])) for k in range(4))


def test_t2_matches_matrix_multiplication():
    full = _units(2)
    basis = [full[0], full[1], full[3]]
    a = t2()
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            prod = x * y
            expected = (prod[0, 0], prod[0, 1], prod[1, 1])
            assert a.product(i, j) == tuple(F(int(v)) for v in expected)


@pytest.mark.parametrize("make", [m2, t2, qq, qq_x_qq, dual, cliff])
def test_fixture_algebras_validate(make):
    assert validate_algebra(make()).ok


def test_zero_product_with_unit_fails():
    rep = validate_algebra(Algebra(2, [], [1, 0]))
    assert not rep.ok and "unit" in [c.name for c in rep.failures]


def test_non_associative_product_names_basis_triple():
    # basis 1, x, y with x·x = y and x·y = x but y·x = 0
    broken = Algebra(3, [(0, i, i, 1) for i in range(3)] + [(i, 0, i, 1) for i in (1, 2)]
                     + [(1, 1, 2, 1), (1, 2, 1, 1)], [1, 0, 0])
    rep = validate_algebra(broken)
    assert not rep.ok
    assert rep.failures[0].witness == {"basis_triple": (1, 1, 1)}


# ------------------------------------------------------------------ generated subspaces

def test_closure_of_nothing_is_the_unit_line():
    a = m2()
    assert subalgebra_closure(a, []) == Subspace.span([a.unit], 4)


def test_closure_of_e11():
    a = m2()
    assert subalgebra_closure(a, [a.basis_vector(0)]) == span([(1, 0, 0, 0), (0, 0, 0, 1)], 4)


def test_closure_of_off_diagonal_units_is_everything():
    a = m2()
    assert subalgebra_closure(a, [a.basis_vector(1), a.basis_vector(2)]).dim == 4


def test_left_ideal_of_e11_is_j_col():
    a = m2()
    assert left_ideal_generated(a, [a.basis_vector(0)]) == span([(1, 0, 0, 0), (0, 0, 1, 0)], 4) == j_col()


def test_left_ideal_of_nothing():
    assert left_ideal_generated(m2(), []).dim == 0


def test_left_ideal_of_e12_in_t2():
    a = t2()
    assert left_ideal_generated(a, [a.basis_vector(1)]) == span([(0, 1, 0)], 3)


def test_idealizer_of_j_col_is_lower_triangular():
    assert idealizer(m2(), j_col()) == span([(1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)], 4)


def test_idealizer_of_zero_is_everything():
    assert idealizer(m2(), Subspace.zero(4)).dim == 4


def test_idealizer_in_t2():
    assert idealizer(t2(), span([(0, 1, 0)], 3)).dim == 3


# ------------------------------------------------------------------ quotients and matrix algebras

def test_t2_mod_e12_is_k_times_k():
    q, _, _ = quotient_algebra(t2(), span([(0, 1, 0)], 3))
    assert q.dim == 2
    assert q.product(0, 0) == vec(1, 0) and q.product(1, 1) == vec(0, 1)
    assert q.product(0, 1) == vec(0, 0) == q.product(1, 0)


def test_quotient_by_zero_keeps_constants():
    a = t2()
    q, _, _ = quotient_algebra(a, Subspace.zero(3))
    assert q.structure_entries() == a.structure_entries()


def test_lower_triangular_mod_j_col_is_one_dimensional():
    from coiso.algebra import induced_algebra
    a = m2()
    lower = idealizer(a, j_col())
    n = induced_algebra(a, lower)
    j_n = Subspace.span([lower.coords(b) for b in j_col().basis], 3)
    q, _, _ = quotient_algebra(n, j_n)
    assert q.dim == 1 and q.product(0, 0) == vec(1)


def test_matrix_algebra_over_k_is_m2():
    assert matrix_algebra(qq(), 2).structure_entries() == m2().structure_entries()


def test_matrix_algebra_of_size_one():
    a = t2()
    assert matrix_algebra(a, 1).structure_entries() == a.structure_entries()


def test_matrix_algebra_over_t2():
    b = matrix_algebra(t2(), 2)
    assert b.dim == 12 and validate_algebra(b).ok


def test_endomorphisms_of_k2():
    end, _ = endomorphism_algebra(right_module(qq(), [Mat.identity(2)], 2))
    assert end.dim == 4


def test_endomorphisms_of_t2_over_itself():
    a = t2()
    end, _ = endomorphism_algebra(right_module(a, a.right_basis(), 3))
    assert end.dim == 3


def test_endomorphisms_of_zero_module():
    end, _ = endomorphism_algebra(right_module(t2(), [Mat.zeros(0, 0)] * 3, 0))
    assert end.dim == 0


def test_identity_morphism_is_valid():
    assert validate_morphism(AlgMorphism.identity(t2())).ok


def test_projection_t2_to_k_times_k_is_valid():
    q, proj, _ = quotient_algebra(t2(), span([(0, 1, 0)], 3))
    assert validate_morphism(AlgMorphism(t2(), q, proj)).ok


def test_killing_e11_breaks_the_unit():
    m = Mat.build([[0, 0, 0], [0, 1, 0], [0, 0, 1]])
    rep = validate_morphism(AlgMorphism(t2(), t2(), m))
    assert not rep.ok


def test_prime_field_algebra():
    a = m2(Field(3))
    assert validate_algebra(a).ok
    assert idealizer(a, j_col(Field(3))).dim == 3


# ------------------------------------------------------------------ properties

@given(algebras.flatmap(lambda a: st.tuples(st.just(a), element(a), element(a), element(a))))
def test_associativity_on_elements(args):
    a, x, y, z = args
    assert a.mul(a.mul(x, y), z) == a.mul(x, a.mul(y, z))
    assert a.mul(a.unit, x) == x == a.mul(x, a.unit)


@given(algebras.flatmap(lambda a: st.tuples(st.just(a), st.lists(element(a), max_size=2))))
def test_closure_is_a_unital_subalgebra(args):
    a, seed = args
    s = subalgebra_closure(a, seed)
    assert s.contains(a.unit) and all(s.contains(v) for v in seed)
    assert all(s.contains(a.mul(x, y)) for x in s.basis for y in s.basis)


@given(algebras.flatmap(lambda a: st.tuples(st.just(a), st.lists(element(a), max_size=2))))
def test_idealizer_is_largest_subalgebra_making_ideal_two_sided(args):
    a, gens = args
    j = left_ideal_generated(a, gens)
    n = idealizer(a, j)
    assert all(j.contains(a.mul(x, b)) for x in (a.basis_vector(i) for i in range(a.dim)) for b in j.basis)
    assert all(j.contains(a.mul(b, x)) for b in j.basis for x in n.basis)
    assert all(n.contains(a.mul(x, y)) for x in n.basis for y in n.basis)
    assert all(n.contains(b) for b in j.basis)


@given(algebras.flatmap(lambda a: st.tuples(st.just(a), element(a))))
def test_quotient_projection_is_multiplicative(args):
    a, g = args
    ideal = two_sided_ideal_generated(a, [g])
    q, proj, sect = quotient_algebra(a, ideal)
    f = AlgMorphism(a, q, proj)
    assert validate_morphism(f).ok
    assert q.dim == a.dim - ideal.dim
    assert (proj @ sect).is_identity()


@given(algebras, st.integers(1, 2))
def test_matrix_algebra_is_associative(a, n):
    b = matrix_algebra(a, n)
    assert b.dim == n * n * a.dim
    assert validate_algebra(b).ok


@given(algebras)
def test_right_regular_endomorphisms_recover_the_algebra(a):
    end, _ = endomorphism_algebra(right_module(a, a.right_basis(), a.dim))
    assert end.dim == a.dim
