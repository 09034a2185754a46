"""Sigma-module laws, projections, hermitian forms, form inversion."""
import random

import pytest

from taugeo.matrices import build_matrix_algebra, exact_matrix_algebra
from taugeo.matgeo import doubled_star_algebra, free_rank_one_module, projector_map
from taugeo.presets import build_qplane
from taugeo.scalars import QS
from taugeo.smodules import (
    HermitianForm, ModuleMap, NonInvertibleFormError, NonLinearMapError,
    NotAProjectionError, form_sigma_inverse, free_sigma_module,
    hermitian_axiom_check, image_sigma_module, invariance_check,
    module_law_check, projective_commutation_check,
)


@pytest.fixture(scope="module")
def qp():
    return build_qplane()


@pytest.fixture(scope="module")
def qp_module(qp):
    return free_sigma_module(qp.starred, 2)


def _matrix_star(n=2, diag=None):
    alg = exact_matrix_algebra(n)
    one, i = alg.field.one, alg.field.imag_unit
    entries = diag or [one, i]
    u = alg.diagonal(entries[:n] + [one] * max(0, n - len(entries)))
    st = build_matrix_algebra([u], check_unitary=True)
    return alg, doubled_star_algebra(st)


def test_default_free_module_matrix():
    alg, st2 = _matrix_star()
    mod = free_rank_one_module(st2)
    rng = random.Random(1)
    A = alg.random_element(rng)
    m = mod.element([A])
    assert mod.sigma_hat(0, m) == mod.element([st2.sigma(0).apply(A)])
    assert mod.tau_hat(0, m) == mod.element([A])


def test_qplane_module_scaling(qp, qp_module):
    alg = qp.presentation
    x = alg.gen("x")
    m = qp_module.element([alg.zero, x])
    got = qp_module.sigma_hat(0, m)
    assert got == qp_module.element([alg.zero, x.scale(QS.q)])


def test_module_law_check_passes(qp_module):
    assert module_law_check(qp_module, samples=30, seed=2).passed


def test_module_law_check_with_arbitrary_images(qp):
    # arbitrary structure-map images still satisfy the left module laws
    alg = qp.presentation
    rng = random.Random(3)
    mod = free_sigma_module(qp.st, 2)
    rand_img = lambda: mod.element([alg.random_element(rng), alg.random_element(rng)])
    mod._sigma_images = [[rand_img() for _ in range(2)] for _ in range(2)]
    mod._tau_images = [[rand_img() for _ in range(2)] for _ in range(2)]
    rec = module_law_check(mod, samples=15, seed=4)
    assert rec.passed


class _Corrupted:
    """Wraps a module and breaks sigma_hat by an additive constant."""

    def __init__(self, inner):
        self._inner = inner
        self.name = inner.name + "!corrupt"
        self.st_algebra = inner.st_algebra
        self.rank = inner.rank
        self.basis_names = inner.basis_names
        self.has_right_action = False
        self.has_star = False

    def random_element(self, rng, **kw):
        return self._inner.random_element(rng, **kw)

    def basis_elements(self):
        return self._inner.basis_elements()

    @property
    def zero(self):
        return self._inner.zero

    def sigma_hat(self, a, m):
        return self._inner.sigma_hat(a, m) + self._inner.basis(0)

    def tau_hat(self, a, m):
        return self._inner.tau_hat(a, m)


def test_module_law_check_corrupted_fails(qp_module):
    rec = module_law_check(_Corrupted(qp_module), samples=20, seed=5)
    assert rec.failed
    assert rec.witness is not None


def test_image_module_identity(qp_module):
    T = ModuleMap.identity(qp_module)
    img = image_sigma_module(qp_module, T)
    rng = random.Random(6)
    m = qp_module.random_element(rng)
    assert img.sigma_hat(0, m) == qp_module.sigma_hat(0, m)
    assert module_law_check(img, samples=15, seed=6).passed


def test_image_module_zero(qp_module):
    T = ModuleMap(qp_module, lambda m: qp_module.zero, name="0")
    img = image_sigma_module(qp_module, T)
    rng = random.Random(7)
    assert img.random_element(rng).is_zero()
    assert module_law_check(img, samples=10, seed=7).passed


def test_image_module_rejects_nonlinear(qp_module):
    alg = qp_module.algebra
    x = alg.gen("x")
    T = ModuleMap(qp_module, lambda m: m.left_mul(m.components[0] + x), name="bad")
    with pytest.raises(NonLinearMapError):
        image_sigma_module(qp_module, T)


def test_matrix_projection_commutation():
    alg, st2 = _matrix_star()
    mod = free_rank_one_module(st2)
    v0 = alg.basis_vector(0)
    p = projector_map(mod, v0.outer(v0))
    assert projective_commutation_check(mod, p, samples=15, seed=8).passed
    assert module_law_check(image_sigma_module(mod, p), samples=15, seed=8).passed


def test_identity_projection_commutes(qp_module):
    p = ModuleMap.identity(qp_module)
    assert projective_commutation_check(qp_module, p, samples=10, seed=9).passed


def test_noncommuting_projection_fails():
    alg, st2 = _matrix_star()
    mod = free_rank_one_module(st2)
    # p = e2 e2-dagger does commute (diagonal); use a rotated projector
    half = alg.field.from_fraction
    from fractions import Fraction
    c = half(Fraction(1, 2))
    p_mat = alg.from_rows([[c, c], [c, c]])
    assert p_mat * p_mat == p_mat
    p = projector_map(mod, p_mat)
    rec = projective_commutation_check(mod, p, samples=15, seed=10)
    assert rec.failed


def test_not_a_projection_rejected(qp_module):
    alg = qp_module.algebra
    x = alg.gen("x")
    T = ModuleMap.from_matrix(qp_module, [[x, alg.zero], [alg.zero, alg.zero]])
    with pytest.raises(NotAProjectionError):
        projective_commutation_check(qp_module, T)


# -- hermitian forms -----------------------------------------------------------

def _identity_form(module):
    alg = module.algebra
    n = module.rank
    return HermitianForm(module, [[alg.one if i == j else alg.zero
                                   for j in range(n)] for i in range(n)])


def test_hermitian_identity_form(qp_module):
    h = _identity_form(qp_module)
    e1 = qp_module.basis(0)
    assert h.eval(e1, e1) == qp_module.algebra.one
    assert hermitian_axiom_check(h, samples=25, seed=11).passed


def test_hermitian_axioms_random(qp_module):
    alg = qp_module.algebra
    x = alg.gen("x")
    i_unit = alg.scalar(QS.imag_unit)
    h = HermitianForm(qp_module, [
        [alg.one + x * x, i_unit * x],
        [(i_unit * x).star(), alg.one + alg.one]])
    assert hermitian_axiom_check(h, samples=25, seed=12).passed


def test_invariance_constant_form(qp_module):
    h = _identity_form(qp_module)
    assert invariance_check(h, qp_module, samples=20, seed=13).passed


def test_invariance_noninvariant_fails(qp_module):
    alg = qp_module.algebra
    x = alg.gen("x")
    h = HermitianForm(qp_module, [
        [alg.one + x * x, alg.zero], [alg.zero, alg.one]])
    rec = invariance_check(h, qp_module, samples=20, seed=14)
    assert rec.failed


def test_matrix_invariance_commuting_h0():
    alg, st2 = _matrix_star()
    mod = free_rank_one_module(st2)
    one = alg.field.one
    h0 = alg.diagonal([one, one + one])  # diagonal commutes with diagonal U
    h = HermitianForm(mod, [[h0]])
    assert invariance_check(h, mod, samples=20, seed=15).passed


def test_matrix_invariance_noncommuting_h0_fails():
    alg, st2 = _matrix_star()
    mod = free_rank_one_module(st2)
    one, zero = alg.field.one, alg.field.zero
    h0 = alg.from_rows([[one + one, one], [one, one]])
    assert h0.star() == h0
    h = HermitianForm(mod, [[h0]])
    rec = invariance_check(h, mod, samples=20, seed=16)
    assert rec.failed


# -- form inversion ---------------------------------------------------------------

def test_form_sigma_inverse_default(qp_module):
    alg = qp_module.algebra
    two = alg.one + alg.one
    h = HermitianForm(qp_module, [[alg.one, alg.zero], [alg.zero, two]])
    for a in range(qp_module.st_algebra.n_derivations):
        hinv = form_sigma_inverse(h, qp_module, a)
        assert hinv[0][0] == alg.one
        assert hinv[1][1] * two == alg.one


def test_form_sigma_inverse_matrix_identity():
    alg, st2 = _matrix_star()
    mod = free_rank_one_module(st2)
    h = HermitianForm(mod, [[alg.one]])
    hinv = form_sigma_inverse(h, mod, 0)
    assert hinv[0][0] == alg.one


def test_form_sigma_inverse_multiply_back(qp_module):
    alg = qp_module.algebra
    i_unit = alg.scalar(QS.imag_unit)
    h = HermitianForm(qp_module, [
        [alg.one + alg.one, i_unit],
        [i_unit.star(), alg.one]])
    for a in range(4):
        hinv = form_sigma_inverse(h, qp_module, a)
        for i in range(2):
            for k in range(2):
                acc = alg.zero
                for j in range(2):
                    acc = acc + hinv[i][j] * h.components[j][k]
                assert acc == (alg.one if i == k else alg.zero)


def test_form_sigma_inverse_degenerate_raises(qp_module):
    alg = qp_module.algebra
    x = alg.gen("x")
    h = HermitianForm(qp_module, [[x * x, alg.zero], [alg.zero, alg.one]])
    with pytest.raises(NonInvertibleFormError):
        form_sigma_inverse(h, qp_module, 0)
