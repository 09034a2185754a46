"""q-plane, shift line, and matrix presets."""
import random
from fractions import Fraction

import pytest

from taugeo.algebra import leibniz_check
from taugeo.matrices import (
    MatrixError, SingularMatrixError, build_matrix_algebra,
    exact_matrix_algebra,
)
from taugeo.presets import build_qplane, build_shift_line
from taugeo.scalars import QQ, q_integer


@pytest.fixture(scope="module")
def qp():
    return build_qplane()


def test_x1_on_x3y(qp):
    alg = qp.presentation
    X1 = qp.st.X(0)
    assert X1.apply(alg.parse("x^3*y")) == alg.parse("x^2*y").scale(q_integer(3))


def test_x2_kills_x_powers(qp):
    alg = qp.presentation
    X2 = qp.st.X(1)
    assert X2.apply(alg.parse("x^3")).is_zero()


def test_x1_x2_commute(qp):
    rng = random.Random(2)
    X1, X2 = qp.st.X(0), qp.st.X(1)
    for _ in range(20):
        f = qp.presentation.random_element(rng)
        assert X1.apply(X2.apply(f)) == X2.apply(X1.apply(f))


def test_twisted_commutation_relations(qp):
    # [X1, sigma2] = [X2, sigma1] = [sigma1, sigma2] = 0 as operators
    rng = random.Random(3)
    X1, X2 = qp.st.X(0), qp.st.X(1)
    s1, s2 = X1.sigma, X2.sigma
    for _ in range(20):
        f = qp.presentation.random_element(rng)
        assert X1.apply(s2.apply(f)) == s2.apply(X1.apply(f))
        assert X2.apply(s1.apply(f)) == s1.apply(X2.apply(f))
        assert s1.apply(s2.apply(f)) == s2.apply(s1.apply(f))


def test_qplane_star_structure(qp):
    assert qp.starred.iota == (2, 3, 0, 1)
    assert qp.starred.n_derivations == 4


def test_shift_line_values():
    p = build_shift_line(Fraction(1, 3))
    alg = p.presentation
    D = p.st.X(0)
    hbar = QQ.from_fraction(p.hbar)
    t = alg.gen("t")
    assert D.apply(t) == alg.scalar(hbar)
    # D(t^2) = 2 hbar t + hbar^2
    expect = t.scale(hbar + hbar) + alg.scalar(hbar * hbar)
    assert D.apply(t * t) == expect
    assert D.apply(alg.one).is_zero()


def test_shift_line_both_orders():
    p = build_shift_line(2)
    D = p.st.X(0)
    assert leibniz_check(D, samples=25, seed=4).passed
    assert leibniz_check(D, samples=25, seed=4, sigma=p.shift,
                         tau=D.sigma).passed


def test_matrix_preset_basics():
    alg = exact_matrix_algebra(2)
    one, mone = alg.field.one, -alg.field.one
    u1 = alg.diagonal([one, mone])
    st = build_matrix_algebra([u1])
    X1 = st.X(0)
    e12 = alg.elementary(0, 1)
    assert X1.apply(e12) == e12 + e12
    assert X1.apply(alg.one).is_zero()


def test_matrix_preset_leibniz_both_orders():
    alg = exact_matrix_algebra(3)
    i = alg.field.imag_unit
    one = alg.field.one
    u1 = alg.diagonal([one, i, -one])
    u2 = alg.diagonal([i, one, i])
    st = build_matrix_algebra([u1, u2])
    for a in range(2):
        X = st.X(a)
        assert leibniz_check(X, samples=20, seed=5).passed
        ident = X.tau
        assert leibniz_check(X, samples=20, seed=5, sigma=ident, tau=X.sigma).passed


def test_matrix_preset_rejects_noncommuting():
    alg = exact_matrix_algebra(2)
    one, zero = alg.field.one, alg.field.zero
    u1 = alg.from_rows([[zero, one], [one, zero]])
    u2 = alg.diagonal([one, -one])
    with pytest.raises(MatrixError):
        build_matrix_algebra([u1, u2])


def test_matrix_preset_rejects_singular():
    alg = exact_matrix_algebra(2)
    one, zero = alg.field.one, alg.field.zero
    u = alg.from_rows([[one, zero], [zero, zero]])
    with pytest.raises(SingularMatrixError):
        build_matrix_algebra([u])


def test_matrix_unitarity_check():
    alg = exact_matrix_algebra(2)
    one = alg.field.one
    u = alg.diagonal([one + one, one])
    with pytest.raises(MatrixError):
        build_matrix_algebra([u], check_unitary=True)
