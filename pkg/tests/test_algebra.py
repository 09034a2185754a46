"""Rewriting, confluence, star, endomorphisms, twisted derivations."""
import random

import pytest

from taugeo.algebra import (
    AlgebraEndomorphism, AlgebraPresentation, ConfluenceError,
    IllDefinedMapError, SigmaTauAlgebra, StarStructureError,
    TerminationError, derivation_extend, inner_st_derivation, leibniz_check,
    st_morphism_check, star_of_map,
)
from taugeo.scalars import QQ, QS, q_integer
from taugeo.sphere import k_power, sphere_presentation


@pytest.fixture(scope="module")
def plane():
    return AlgebraPresentation(
        "qplane", ["x", "y"], QS, commutative=True,
        star_map={"x": "x", "y": "y"})


@pytest.fixture(scope="module")
def sphere():
    return sphere_presentation()


def jackson_x1(plane):
    q = QS.q
    sigma1 = AlgebraEndomorphism(plane, [plane.gen("x").scale(q), plane.gen("y")], name="sigma1")
    ident = AlgebraEndomorphism.identity(plane)
    return derivation_extend(sigma1, ident, [plane.one, plane.zero], name="X1")


# -- normal forms ------------------------------------------------------------

def test_commutative_sort(plane):
    yx = plane.gen("y") * plane.gen("x")
    assert yx == plane.parse("x*y")


def test_sphere_sphere_relation(sphere):
    lhs = sphere.parse("as*a")
    assert lhs == sphere.parse("1-c*cs")


def test_sphere_q_commutation(sphere):
    ca = sphere.gen("c") * sphere.gen("a")
    assert ca == sphere.parse("a*c/q")


def test_sphere_aas(sphere):
    lhs = sphere.gen("a") * sphere.gen("as")
    assert lhs == sphere.parse("1-q^2*c*cs")


def test_normal_form_idempotent_and_associative(sphere):
    rng = random.Random(3)
    for _ in range(25):
        f = sphere.random_element(rng)
        g = sphere.random_element(rng)
        h = sphere.random_element(rng)
        assert (f * g) * h == f * (g * h)
        # rebuilding from the stored terms is a fixed point
        assert sphere.element(f.terms) == f


def test_unknown_generator(sphere):
    with pytest.raises(Exception):
        sphere.parse("a*b")


def test_monomial_basis_count(sphere):
    # degree <= d monomials match the classical coordinate-ring count
    # 2*C(d+3,3) - C(d+2,2), computed independently
    from math import comb
    for d in range(5):
        got = len(sphere.normal_words_up_to_degree(d))
        assert got == 2 * comb(d + 3, 3) - comb(d + 2, 2)


# -- star --------------------------------------------------------------------

def test_star_involution(sphere):
    rng = random.Random(5)
    for _ in range(20):
        f = sphere.random_element(rng)
        assert f.star().star() == f


def test_star_antimultiplicative(sphere):
    ac = sphere.gen("a") * sphere.gen("c")
    assert ac.star() == sphere.gen("c").star() * sphere.gen("a").star()
    rng = random.Random(7)
    for _ in range(20):
        f = sphere.random_element(rng)
        g = sphere.random_element(rng)
        assert (f * g).star() == g.star() * f.star()


# -- endomorphisms -------------------------------------------------------------

def test_k_action(sphere):
    K = k_power(sphere, 1)
    assert K.apply(sphere.gen("a")) == sphere.gen("a").scale(QS.s_power(-1))
    assert K.apply(sphere.one) == sphere.one


def test_sigma1_on_monomials(plane):
    q = QS.q
    sigma1 = AlgebraEndomorphism(plane, [plane.gen("x").scale(q), plane.gen("y")])
    for n in range(4):
        for m in range(3):
            mono = plane.parse(f"x^{n}*y^{m}")
            assert sigma1.apply(mono) == mono.scale(QS.q_power(n))


def test_star_of_map_k_is_k_inverse(sphere):
    K = k_power(sphere, 1)
    Kinv = k_power(sphere, -1)
    assert star_of_map(K).equals_on_generators(Kinv)


def test_star_of_map_identity(sphere):
    ident = AlgebraEndomorphism.identity(sphere)
    assert star_of_map(ident).equals_on_generators(ident)


def test_star_of_map_involution_on_derivation(plane):
    X1 = jackson_x1(plane)
    XSS = star_of_map(star_of_map(X1))
    assert all(XSS.images[k] == X1.images[k] for k in range(2))


# -- derivations ---------------------------------------------------------------

def test_jackson_derivative(plane):
    X1 = jackson_x1(plane)
    x3y = plane.parse("x^3*y")
    assert X1.apply(x3y) == plane.parse("x^2*y").scale(q_integer(3))
    for n in range(1, 5):
        for m in range(3):
            mono = plane.parse(f"x^{n}*y^{m}")
            expect = plane.parse(f"x^{n-1}*y^{m}").scale(q_integer(n))
            assert X1.apply(mono) == expect
    assert X1.apply(plane.one).is_zero()


def test_zero_images_zero_derivation(plane):
    q = QS.q
    sigma1 = AlgebraEndomorphism(plane, [plane.gen("x").scale(q), plane.gen("y")])
    Z = derivation_extend(sigma1, AlgebraEndomorphism.identity(plane),
                          [plane.zero, plane.zero])
    rng = random.Random(11)
    for _ in range(10):
        assert Z.apply(plane.random_element(rng)).is_zero()


def test_inner_derivation_sigma_equals_tau(plane):
    q = QS.q
    sigma1 = AlgebraEndomorphism(plane, [plane.gen("x").scale(q), plane.gen("y")])
    Z = inner_st_derivation(sigma1, sigma1)
    assert all(im.is_zero() for im in Z.images)


def test_leibniz_check_passes(plane):
    X1 = jackson_x1(plane)
    assert leibniz_check(X1, samples=30, seed=1).passed


def test_leibniz_check_wrong_sigma_fails(plane):
    X1 = jackson_x1(plane)
    ident = AlgebraEndomorphism.identity(plane)
    rec = leibniz_check(X1, samples=5, seed=1, sigma=ident)
    assert rec.failed
    assert rec.witness["f"] == "x"
    assert rec.witness["g"] == "x"


def test_inner_derivation_both_orders(plane):
    q = QS.q
    sigma1 = AlgebraEndomorphism(plane, [plane.gen("x").scale(q), plane.gen("y")])
    ident = AlgebraEndomorphism.identity(plane)
    D = inner_st_derivation(sigma1, ident)
    assert leibniz_check(D, samples=20, seed=2).passed
    assert leibniz_check(D, samples=20, seed=2, sigma=ident, tau=sigma1).passed


def test_derivation_must_respect_relations(sphere):
    # X(a) = 1, all else 0 cannot extend to a (id, K^2)-derivation
    ident = AlgebraEndomorphism.identity(sphere)
    K2 = k_power(sphere, 2)
    with pytest.raises(IllDefinedMapError):
        derivation_extend(ident, K2, [sphere.one, sphere.zero, sphere.zero, sphere.zero])


def test_x1_kills_one_by_construction(plane):
    X1 = jackson_x1(plane)
    assert X1.apply(plane.one).is_zero()
    assert X1.apply(plane.scalar(QS.q)).is_zero()


# -- presentation validation ----------------------------------------------------

def test_termination_rejected():
    with pytest.raises(TerminationError):
        AlgebraPresentation("bad", ["x", "y"], QQ,
                            relations=[((0,), {(1,): QQ.one})])


def test_confluence_rejected():
    with pytest.raises(ConfluenceError):
        AlgebraPresentation("bad", ["x", "y"], QQ, relations=[
            ((0, 1), {(): QQ.one}),
            ((1, 0), {(1,): QQ.one}),
        ])


def test_iota_must_be_involution(plane):
    X1 = jackson_x1(plane)
    with pytest.raises(StarStructureError):
        SigmaTauAlgebra(plane, [X1], iota=(0,) * 1 + (1,))


# -- morphisms -------------------------------------------------------------------

def _qplane_sigma_tau(plane):
    q = QS.q
    sigma1 = AlgebraEndomorphism(plane, [plane.gen("x").scale(q), plane.gen("y")], name="sigma1")
    sigma2 = AlgebraEndomorphism(plane, [plane.gen("x"), plane.gen("y").scale(q)], name="sigma2")
    ident = AlgebraEndomorphism.identity(plane)
    X1 = derivation_extend(sigma1, ident, [plane.one, plane.zero], name="X1")
    X2 = derivation_extend(sigma2, ident, [plane.zero, plane.one], name="X2")
    return SigmaTauAlgebra(plane, [X1, X2], name="qplane")


def test_identity_morphism(plane):
    from taugeo.algebra import AlgebraHomomorphism
    st = _qplane_sigma_tau(plane)
    phi = AlgebraHomomorphism(plane, plane, plane.generator_elements(), name="id")
    psi = [[QS.one, QS.zero], [QS.zero, QS.one]]
    assert st_morphism_check(phi, psi, st, st).passed


def test_swap_morphism(plane):
    from taugeo.algebra import AlgebraHomomorphism
    st = _qplane_sigma_tau(plane)
    swap = AlgebraHomomorphism(plane, plane, [plane.gen("y"), plane.gen("x")], name="swap")
    psi = [[QS.zero, QS.one], [QS.one, QS.zero]]
    assert st_morphism_check(swap, psi, st, st, phi_inverse=swap).passed


def test_swap_morphism_wrong_psi_fails(plane):
    from taugeo.algebra import AlgebraHomomorphism
    st = _qplane_sigma_tau(plane)
    swap = AlgebraHomomorphism(plane, plane, [plane.gen("y"), plane.gen("x")], name="swap")
    psi = [[QS.one, QS.zero], [QS.zero, QS.one]]
    assert st_morphism_check(swap, psi, st, st).failed


# -- element syntax ---------------------------------------------------------------

def test_element_parse_print_round_trip(sphere):
    rng = random.Random(13)
    for _ in range(30):
        f = sphere.random_element(rng)
        assert sphere.parse(str(f)) == f


def test_element_render(sphere):
    f = sphere.parse("a^2*c - q*as")
    assert sphere.parse(str(f)) == f
