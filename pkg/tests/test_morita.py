from fractions import Fraction as F

import pytest

from coiso.algebra import matrix_algebra
from coiso.bimodules import Bimodule3, validate_bimodule
from coiso.fixtures import j_col, m2, qq, qq_x_qq, t2
from coiso.linalg import Subspace
from coiso.morita import (EquivData, check_structure_theorem, check_zero_component, dual_basis, identity_equivalence,
                          idempotents, is_idempotent, matrix_triple, project_equivalence, reduce_equivalence,
                          right_generators, standard_equivalence, verify_equivalence, verify_plain_equivalence)
from coiso.report import CoisoError
from coiso.triples import dirac, unred


def t2dirac():
    return dirac(t2(), Subspace.span([(0, 1, 0)], 3))


TRIPLES = {"unred(k)": lambda: unred(qq()), "t2dirac": t2dirac, "m2dirac": lambda: dirac(m2(), j_col())}


def test_size_one_is_the_identity_equivalence():
    d = standard_equivalence(t2dirac(), 1)
    assert d.e.dims == (3, 3, 1) and verify_equivalence(d).ok


def test_k_squared():
    d = standard_equivalence(unred(qq()), 2)
    assert [d.b.tot.dim, d.b.n_sub.dim, d.b.zero.dim] == [4, 4, 0]
    assert verify_equivalence(d).ok


def test_t2dirac_squared_has_matrix_zero_component():
    d = standard_equivalence(t2dirac(), 2)
    assert d.b.zero == matrix_triple(t2dirac(), 2).zero
    assert d.b.zero.dim == 4
    assert verify_equivalence(d).ok


def test_doubling_psi_breaks_compatibility():
    d = standard_equivalence(unred(qq()), 2)
    rep = verify_equivalence(EquivData(d.e, d.e_prime, d.phi, d.psi.scale(F(2))))
    assert {"compatibility.tot", "compatibility.n"} <= {c.name for c in rep.failures}


@pytest.mark.parametrize("name", sorted(TRIPLES))
def test_identity_equivalence(name):
    assert verify_equivalence(identity_equivalence(TRIPLES[name]())).ok


def test_dual_basis_of_standard_module_is_coordinates():
    d = standard_equivalence(unred(qq()), 2)
    db = dual_basis(d, right_generators(d.e.nmod))
    assert db.report.ok
    assert [f.tolist() for f in db.funcs] == [[[F(1), F(0)]], [[F(0), F(1)]]]


def test_dual_basis_of_identity_is_identity():
    db = dual_basis(identity_equivalence(unred(qq())), [(F(1),)])
    assert [f.tolist() for f in db.funcs] == [[[F(1)]]]


def test_zero_generator_cannot_generate():
    with pytest.raises(CoisoError):
        dual_basis(identity_equivalence(unred(qq())), [(F(0),)])


def test_standard_idempotent_is_identity():
    d = standard_equivalence(unred(qq()), 3)
    e_n, e_tot, equal = idempotents(dual_basis(d, right_generators(d.e.nmod)))
    assert equal and e_n == matrix_algebra(qq(), 3).unit


def test_split_idempotent_over_k_times_k():
    t = unred(qq_x_qq())
    db = dual_basis(identity_equivalence(t), [(F(1), F(0)), (F(0), F(1))])
    e_n, _, equal = idempotents(db)
    assert equal and is_idempotent(matrix_algebra(t.n_alg, 2), e_n)
    assert e_n == tuple(F(x) for x in (1, 0, 0, 0, 0, 0, 0, 1))


def test_repeated_generator_gives_rank_one_idempotent():
    db = dual_basis(identity_equivalence(unred(qq())), [(F(1),), (F(1),)])
    e_n, _, equal = idempotents(db)
    mat2 = matrix_algebra(qq(), 2)
    assert equal and is_idempotent(mat2, e_n) and e_n != mat2.unit
    assert sum(e_n[0::3]) == 1  # trace of a rank-one idempotent


def test_zero_component_of_t2dirac():
    assert check_zero_component(standard_equivalence(t2dirac(), 2))


def test_zero_component_of_identity():
    assert check_zero_component(identity_equivalence(t2dirac()))


def test_unclosed_zero_component_is_rejected_by_the_validator():
    d = standard_equivalence(t2dirac(), 2)
    e = d.e
    extra = tuple(F(int(i == 0)) for i in range(e.nmod.dim))
    bigger = Bimodule3(e.left, e.right, e.tot, e.nmod, Subspace.span(list(e.zero.basis) + [extra], e.nmod.dim),
                       e.iota)
    assert "zero_submodule" in [c.name for c in validate_bimodule(bigger).failures]


def test_structure_theorem_k_squared():
    assert check_structure_theorem(standard_equivalence(unred(qq()), 2)).ok


def test_structure_theorem_t2dirac_zero_homs():
    rep = check_structure_theorem(standard_equivalence(t2dirac(), 2))
    assert rep.ok and rep.info["hom_zero_dim"] == 4


def test_structure_theorem_identity():
    assert check_structure_theorem(identity_equivalence(t2dirac())).ok


@pytest.mark.parametrize("name", sorted(TRIPLES))
@pytest.mark.parametrize("n", [1, 2])
def test_standard_family(name, n):
    d = standard_equivalence(TRIPLES[name](), n)
    assert verify_equivalence(d).ok
    assert check_zero_component(d)
    assert check_structure_theorem(d).ok
    assert project_equivalence(d, "tot").ok and project_equivalence(d, "n").ok
    assert verify_plain_equivalence(*reduce_equivalence(d)).ok
