"""Lie structure, connections, curvature, torsion, metric machinery."""
import random

import pytest

from taugeo.connections import (
    LieStructure, NonInvariantFormError, bracket_apply, connection_from_gamma,
    connection_leibniz_check, curvature, lie_structure_check,
    metric_compat_check, metric_connection_free, orthogonal_projection_metric,
    pushforward_connection, star_connection_check, symmetrize_gamma, torsion,
    torsion_free_check, torsion_free_construct, zero_gamma,
)
from taugeo.presets import build_qplane
from taugeo.scalars import QS, q_integer
from taugeo.smodules import (
    HermitianForm, ModuleMap, free_sigma_module, image_sigma_module,
)


@pytest.fixture(scope="module")
def qp():
    return build_qplane()


@pytest.fixture(scope="module")
def module2(qp):
    return free_sigma_module(qp.st, 2)


def example_connection(qp, module2, n, m):
    """nabla_{X1} e1 = y^m e2, nabla_{X2} e2 = x^n e1, others zero."""
    alg = qp.presentation
    g = zero_gamma(module2)
    g[0][0][1] = alg.parse(f"y^{m}") if m else alg.one
    g[1][1][0] = alg.parse(f"x^{n}") if n else alg.one
    return connection_from_gamma(module2, g)


# -- Lie structure ---------------------------------------------------------------

def test_flip_structure_passes(qp):
    assert lie_structure_check(qp.lie, samples=10, seed=1).passed


def test_fabricated_structure_constants_fail(qp):
    L = LieStructure.flip(qp.st)
    C = [[[QS.zero, QS.zero], [QS.one, QS.zero]],
         [[QS.zero, QS.zero], [QS.zero, QS.zero]]]
    bad = LieStructure(qp.st, L.R, C)
    rec = lie_structure_check(bad, samples=5, seed=2)
    assert rec.failed


def test_bracket_vanishes(qp):
    alg = qp.presentation
    f = alg.parse("x^2*y")
    assert bracket_apply(qp.lie, 0, 1, f).is_zero()
    assert bracket_apply(qp.lie, 0, 0, f).is_zero()


# -- connections -----------------------------------------------------------------

def test_zero_gamma_is_componentwise_derivative(qp, module2):
    conn = connection_from_gamma(module2, zero_gamma(module2))
    alg = qp.presentation
    m = module2.element([alg.parse("x^2"), alg.parse("y")])
    got = conn.apply(0, m)
    X1 = qp.st.X(0)
    assert got == module2.element([X1.apply(alg.parse("x^2")), X1.apply(alg.parse("y"))])


def test_gamma_connection_on_basis(qp, module2):
    conn = example_connection(qp, module2, 2, 3)
    alg = qp.presentation
    # nabla on 1*e_i is Gamma_ai^j e_j
    assert conn.apply(0, module2.basis(0)) == module2.element([alg.zero, alg.parse("y^3")])
    assert conn.apply(0, module2.basis(1)).is_zero()


def test_connection_evaluation_hand_expansion(qp, module2):
    # nabla_{X1}(x e1) = sigma1(x) y^m e2 + X1(x) e1 = q x y^m e2 + e1
    m_exp = 2
    conn = example_connection(qp, module2, 1, m_exp)
    alg = qp.presentation
    x = alg.gen("x")
    got = conn.apply(0, module2.element([x, alg.zero]))
    want = module2.element([alg.one, alg.parse("q*x*y^2")])
    assert got == want


def test_connection_leibniz_left_and_bimodule(qp, module2):
    conn = example_connection(qp, module2, 2, 2)
    assert connection_leibniz_check(conn, side="left", samples=20, seed=3).passed
    conn0 = connection_from_gamma(module2, zero_gamma(module2))
    assert connection_leibniz_check(conn0, side="bimodule", samples=20, seed=3).passed


def test_connection_right_rule_fails_for_twisted_gamma(qp, module2):
    alg = qp.presentation
    g = zero_gamma(module2)
    g[0][0][0] = alg.gen("x")
    conn = connection_from_gamma(module2, g)
    assert connection_leibniz_check(conn, side="left", samples=10, seed=4).passed
    rec = connection_leibniz_check(conn, side="right", samples=10, seed=4)
    assert rec.failed


def test_connection_complex_linearity(qp, module2):
    conn = example_connection(qp, module2, 2, 1)
    rng = random.Random(30)
    lam = QS.imag_unit + QS.one
    for _ in range(8):
        m1 = module2.random_element(rng)
        m2 = module2.random_element(rng)
        for a in range(2):
            assert conn.apply(a, m1 + m2) == conn.apply(a, m1) + conn.apply(a, m2)
            assert conn.apply(a, m1.scale(lam)) == conn.apply(a, m1).scale(lam)


def test_pushforward_keeps_leibniz(qp, module2):
    conn = example_connection(qp, module2, 1, 1)
    alg = qp.presentation
    T = ModuleMap.from_matrix(module2, [[alg.one, alg.zero], [alg.zero, alg.zero]])
    img = image_sigma_module(module2, T)
    pushed = pushforward_connection(conn, T, img)
    assert connection_leibniz_check(pushed, side="left", samples=15, seed=5).passed


def test_pushforward_identity_same_values(qp, module2):
    conn = example_connection(qp, module2, 1, 1)
    T = ModuleMap.identity(module2)
    img = image_sigma_module(module2, T)
    pushed = pushforward_connection(conn, T, img)
    rng = random.Random(6)
    for _ in range(10):
        m = module2.random_element(rng)
        assert pushed.apply(0, m) == conn.apply(0, m)


# -- curvature: the worked q-plane example ----------------------------------------

@pytest.mark.parametrize("n,m", [(1, 1), (2, 3), (3, 2)])
def test_curvature_worked_example(qp, module2, n, m):
    alg = qp.presentation
    conn = example_connection(qp, module2, n, m)
    curv_e1 = curvature(conn, qp.lie, 0, 1, module2.basis(0))
    xnym = alg.parse(f"x^{n}*y^{m}")
    want_e1 = module2.element([
        -xnym.scale(QS.q_power(m)),
        -(alg.parse(f"y^{m-1}") if m > 1 else alg.one).scale(q_integer(m)),
    ])
    assert curv_e1 == want_e1
    curv_e2 = curvature(conn, qp.lie, 0, 1, module2.basis(1))
    want_e2 = module2.element([
        (alg.parse(f"x^{n-1}") if n > 1 else alg.one).scale(q_integer(n)),
        xnym.scale(QS.q_power(n)),
    ])
    assert curv_e2 == want_e2


def test_curvature_twisted_linearity(qp, module2):
    alg = qp.presentation
    conn = example_connection(qp, module2, 2, 2)
    rng = random.Random(7)
    s1, s2 = qp.st.sigma(0), qp.st.sigma(1)
    for _ in range(10):
        f = alg.random_element(rng)
        m = module2.random_element(rng)
        lhs = curvature(conn, qp.lie, 0, 1, m.left_mul(f))
        rhs = curvature(conn, qp.lie, 0, 1, m).left_mul(s1.apply(s2.apply(f)))
        assert lhs == rhs


def test_curvature_zero_connection(qp, module2):
    conn = connection_from_gamma(module2, zero_gamma(module2))
    rng = random.Random(8)
    for _ in range(5):
        m = module2.random_element(rng)
        assert curvature(conn, qp.lie, 0, 1, m).is_zero()


# -- torsion ------------------------------------------------------------------------

def test_torsion_symmetric_gamma_vanishes(qp, module2):
    alg = qp.presentation
    g = zero_gamma(module2)
    sym = alg.parse("x*y")
    g[0][1][0] = sym
    g[1][0][0] = sym
    g[0][0][1] = alg.gen("x")
    g[1][1][1] = alg.gen("y")
    conn = connection_from_gamma(module2, g)
    anchor = module2.basis_elements()
    assert torsion_free_check(conn, qp.lie, anchor).passed


def test_torsion_diagonal_always_zero(qp, module2):
    conn = example_connection(qp, module2, 2, 2)
    anchor = module2.basis_elements()
    assert torsion(conn, qp.lie, anchor, 0, 0).is_zero()
    assert torsion(conn, qp.lie, anchor, 1, 1).is_zero()


def test_torsion_asymmetric_gamma_value(qp, module2):
    alg = qp.presentation
    g = zero_gamma(module2)
    g[0][1][0] = alg.gen("x")   # Gamma_12^1 = x
    g[1][0][0] = alg.gen("y")   # Gamma_21^1 = y
    conn = connection_from_gamma(module2, g)
    anchor = module2.basis_elements()
    t = torsion(conn, qp.lie, anchor, 0, 1)
    assert t == module2.element([alg.gen("x") - alg.gen("y"), alg.zero])


def test_torsion_free_construct(qp, module2):
    alg = qp.presentation
    rng = random.Random(9)
    anchor = module2.basis_elements()
    for trial in range(5):
        gt = [[[alg.random_element(rng, max_degree=2) for _ in range(2)]
               for _ in range(2)] for _ in range(2)]
        conn = torsion_free_construct(qp.lie, anchor, gt, module2)
        assert torsion_free_check(conn, qp.lie, anchor).passed
        gamma = symmetrize_gamma(qp.lie, gt)
        # R-symmetry: R_ab^pq gamma_pq^c = gamma_ab^c (flip swaps a,b)
        for a in range(2):
            for b in range(2):
                for c in range(2):
                    assert gamma[b][a][c] == gamma[a][b][c]


def test_torsion_free_construct_zero_case(qp, module2):
    alg = qp.presentation
    zero_gt = [[[alg.zero for _ in range(2)] for _ in range(2)] for _ in range(2)]
    conn = torsion_free_construct(qp.lie, module2.basis_elements(), zero_gt, module2)
    for a in range(2):
        for b in range(2):
            assert conn.apply(a, module2.basis(b)).is_zero()


# -- metric connections ---------------------------------------------------------------

@pytest.fixture(scope="module")
def module4(qp):
    return free_sigma_module(qp.starred, 2)


def _const_form(module, entries):
    alg = module.algebra
    rows = [[alg.scalar(entries[i][j]) for j in range(len(entries))]
            for i in range(len(entries))]
    return HermitianForm(module, rows)


def test_metric_connection_identity_form(qp, module4):
    h = _const_form(module4, [[QS.one, QS.zero], [QS.zero, QS.one]])
    conn = metric_connection_free(module4, h)
    for a in range(4):
        for i in range(2):
            assert conn.apply(a, module4.basis(i)).is_zero()
    assert metric_compat_check(conn, h, module4, mode="generators", seed=10).passed
    assert metric_compat_check(conn, h, module4, mode="random", samples=20, seed=10).passed


def test_metric_connection_with_gamma(qp, module4):
    alg = qp.presentation
    h = _const_form(module4, [[QS.one + QS.one, QS.imag_unit],
                              [-QS.imag_unit, QS.one]])
    rng = random.Random(11)
    gamma = [None] * 4
    for a in (0, 1):
        gamma[a] = [[alg.random_element(rng, max_degree=2) for _ in range(2)]
                    for _ in range(2)]
    for a in (0, 1):
        b = qp.starred.iota[a]
        gamma[b] = [[gamma[a][j][i].star() for j in range(2)] for i in range(2)]
    conn = metric_connection_free(module4, h, gamma)
    assert metric_compat_check(conn, h, module4, mode="generators", seed=11).passed
    assert metric_compat_check(conn, h, module4, mode="random", samples=20, seed=11).passed


def test_metric_compat_needs_invariant_form(qp, module4):
    alg = qp.presentation
    x = alg.gen("x")
    h = HermitianForm(module4, [[alg.one + x * x, alg.zero], [alg.zero, alg.one]])
    conn = connection_from_gamma(module4, zero_gamma(module4))
    with pytest.raises(NonInvariantFormError):
        metric_compat_check(conn, h, module4, mode="generators", seed=12)


def test_orthogonal_projection_metric(qp, module4):
    h = _const_form(module4, [[QS.one, QS.zero], [QS.zero, QS.one]])
    conn = metric_connection_free(module4, h)
    alg = qp.presentation
    p = ModuleMap.from_matrix(module4, [[alg.one, alg.zero], [alg.zero, alg.zero]])
    pushed, rec = orthogonal_projection_metric(conn, h, p, samples=15, seed=13)
    assert rec.passed


def test_orthogonal_projection_rejects_skew_p(qp, module4):
    from taugeo.connections import NonOrthogonalProjectionError
    alg = qp.presentation
    h = _const_form(module4, [[QS.one, QS.zero], [QS.zero, QS.one + QS.one]])
    conn = metric_connection_free(module4, h)
    # projection onto e1 is not orthogonal for this weighted form combined
    # with a shear component
    p = ModuleMap.from_matrix(module4, [[alg.one, alg.one], [alg.zero, alg.zero]])
    with pytest.raises((NonOrthogonalProjectionError, Exception)):
        orthogonal_projection_metric(conn, h, p, samples=10, seed=31)


def test_degenerate_rank_zero_and_empty_index_set(qp):
    # rank-0 modules and empty derivation sets are legal; checks pass vacuously
    from taugeo.algebra import SigmaTauAlgebra
    from taugeo.smodules import HermitianForm, module_law_check
    alg = qp.presentation
    st0 = SigmaTauAlgebra(alg, [], iota=(), name="empty")
    mod0 = free_sigma_module(st0, 0)
    assert module_law_check(mod0, samples=5, seed=40).passed
    h0 = HermitianForm(mod0, [])
    assert h0.eval(mod0.zero, mod0.zero).is_zero()
    L0 = LieStructure.flip(st0)
    assert lie_structure_check(L0, samples=3, seed=40).passed
    conn0 = connection_from_gamma(mod0, zero_gamma(mod0))
    assert connection_leibniz_check(conn0, side="left", samples=3, seed=40).passed
    assert metric_compat_check(conn0, h0, mod0, mode="random", samples=3,
                               seed=40).passed


def test_star_connection_zero_gamma(qp, module4):
    conn = connection_from_gamma(module4, zero_gamma(module4))
    assert star_connection_check(conn, samples=15, seed=14).passed


def test_star_connection_violation(qp, module4):
    alg = qp.presentation
    g = zero_gamma(module4)
    g[0][0][0] = alg.scalar(QS.imag_unit) * alg.gen("x")
    conn = connection_from_gamma(module4, g)
    rec = star_connection_check(conn, samples=15, seed=15)
    assert rec.failed
