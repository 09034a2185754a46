"""Quantum sphere: solver, symmetric derivations, 1-forms, differential."""
import random

import pytest

from taugeo.algebra import leibniz_check, st_star_structure_check
from taugeo.scalars import QS
from taugeo.smodules import module_law_check
from taugeo.sphere import (
    InvalidActionTableError, OneForm, XActionTable,
    bimodule_relation_check, build_sphere, differential_consistency_check,
    differential_d, k_hat, k_hat_check, k_power, map_star_conjugate,
    validate_x_table,
)


@pytest.fixture(scope="module")
def sph():
    return build_sphere()


# -- solver -------------------------------------------------------------------

def test_solver_reports_sector_dimensions(sph):
    rep = sph.x_table.report
    assert rep["sectors_pm"]["2"] == 1
    assert rep["sectors_pm"]["-2"] == 1
    assert rep["sectors_z"]["0"] == 1
    assert rep["free_parameters"] == 1


def test_solved_table_validates(sph):
    validate_x_table(sph.presentation, sph.x_table)


def test_x_z_kills_one(sph):
    assert sph.x_z.apply(sph.presentation.one).is_zero()


def test_commutator_on_a(sph):
    alg = sph.presentation
    a = alg.gen("a")
    lhs = sph.x_minus.apply(sph.x_plus.apply(a)) \
        - sph.x_plus.apply(sph.x_minus.apply(a)).scale(QS.q_power(2))
    assert lhs == sph.x_z.apply(a)


def test_table_round_trip(sph):
    alg = sph.presentation
    data = sph.x_table.as_dict()
    table = XActionTable.from_dict(alg, data)
    for k in range(4):
        assert table.plus[k] == sph.x_table.plus[k]
        assert table.minus[k] == sph.x_table.minus[k]
        assert table.z[k] == sph.x_table.z[k]


def test_invalid_table_rejected_on_relations(sph):
    alg = sph.presentation
    bad = XActionTable(alg, [alg.gen("cs"), alg.zero, alg.gen("as"), alg.zero],
                       sph.x_table.minus, sph.x_table.z)
    with pytest.raises(InvalidActionTableError):
        validate_x_table(alg, bad)


def test_invalid_table_rejected_on_commutators(sph):
    alg = sph.presentation
    two = QS.one + QS.one
    bad = XActionTable(alg, sph.x_table.plus, sph.x_table.minus,
                       [im.scale(two) for im in sph.x_table.z])
    with pytest.raises(InvalidActionTableError, match="commutator"):
        validate_x_table(alg, bad)


# -- the starred algebra -------------------------------------------------------

def test_y_self_adjoint(sph):
    alg = sph.presentation
    for a in range(3):
        Y = sph.st.X(a)
        for g in alg.generator_elements():
            assert Y.apply(g.star()).star() == Y.apply(g)


def test_star_structure_check(sph):
    assert st_star_structure_check(sph.st).passed


def test_y_leibniz_rules(sph):
    for a in range(3):
        assert leibniz_check(sph.st.X(a), samples=15, seed=a).passed


def test_sigma_star_is_tau(sph):
    alg = sph.presentation
    K = k_power(alg, 1)
    Km1 = k_power(alg, -1)
    for g in alg.generator_elements():
        assert Km1.apply(g.star()).star() == K.apply(g)


# -- 1-forms ---------------------------------------------------------------------

def test_bimodule_relations_examples(sph):
    alg = sph.presentation
    omega1 = sph.omega1
    a = alg.gen("a")
    cs = alg.gen("cs")
    # eta3 a = q^-2 a eta3 (exponent 4: K^4(a) = q^-2 a)
    lhs = omega1.right_mul(omega1.basis(2), a)
    assert lhs == omega1.basis(2).left_mul(a.scale(QS.q_power(-2)))
    # eta1 c* = q c* eta1
    lhs = omega1.right_mul(omega1.basis(0), cs)
    assert lhs == omega1.basis(0).left_mul(cs.scale(QS.q_power(1)))
    # eta_a 1 = eta_a
    for i in range(3):
        assert omega1.right_mul(omega1.basis(i), alg.one) == omega1.basis(i)


def test_bimodule_relation_check(sph):
    assert bimodule_relation_check(sph, samples=15, seed=1).passed


def test_eta_self_adjoint(sph):
    for i in range(3):
        assert sph.omega1.star(sph.omega1.basis(i)) == sph.omega1.basis(i)


def test_k_hat_on_coefficient(sph):
    alg = sph.presentation
    a = alg.gen("a")
    Khat = k_hat(sph.omega1, 1)
    m = sph.omega1.basis(0).left_mul(a)
    assert Khat.apply(m) == sph.omega1.basis(0).left_mul(a.scale(QS.s_power(-1)))


def test_k_hat_check(sph):
    assert k_hat_check(sph, samples=15, seed=2).passed


def test_k_hat_star_is_inverse_as_map(sph):
    Khat = k_hat(sph.omega1, 1)
    Khat_star = map_star_conjugate(sph.omega1, Khat)
    Khat_inv = k_hat(sph.omega1, -1)
    rng = random.Random(3)
    for _ in range(10):
        m = sph.omega1.random_element(rng)
        assert Khat_star.apply(m) == Khat_inv.apply(m)


def test_omega1_module_laws(sph):
    assert module_law_check(sph.omega1, samples=20, seed=4).passed


# -- differential -----------------------------------------------------------------

def test_d_one_vanishes(sph):
    d1 = differential_d(sph, sph.presentation.one)
    assert d1.plus.is_zero() and d1.minus.is_zero() and d1.z.is_zero()


def test_d_coefficient_is_action(sph):
    c = sph.presentation.gen("c")
    assert differential_d(sph, c).plus == sph.x_plus.apply(c)


def test_d_consistency(sph):
    assert differential_consistency_check(sph, samples=10, seed=5).passed


def test_eta_omega_change_of_basis(sph):
    # eta1 = i(w+ + w-), eta2 = w- - w+, eta3 = i wz
    alg = sph.presentation
    i = QS.imag_unit
    one = alg.one
    eta1 = OneForm(sph.omega1, one.scale(i), one.scale(i), alg.zero).eta()
    assert eta1 == sph.omega1.basis(0)
    eta2 = OneForm(sph.omega1, -one, one, alg.zero).eta()
    assert eta2 == sph.omega1.basis(1)
    eta3 = OneForm(sph.omega1, alg.zero, alg.zero, one.scale(i)).eta()
    assert eta3 == sph.omega1.basis(2)


def test_d_star_compatibility(sph):
    # d(f*) = (df)*: ties the action table, the star relations, the
    # bimodule twists and the basis change together
    alg = sph.presentation
    rng = random.Random(6)
    for _ in range(20):
        f = alg.random_element(rng, max_degree=3)
        lhs = sph.omega1.star(differential_d(sph, f).eta())
        rhs = differential_d(sph, f.star()).eta()
        assert lhs == rhs
