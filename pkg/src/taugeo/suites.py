"""Invariant suites per preset, aggregated for the verify command.

Each suite returns CheckRecords; with negative controls enabled the
suite additionally runs deliberately corrupted inputs, whose failing
records (with witnesses) are appended as-is, driving a nonzero exit.
"""
from __future__ import annotations

import random
import time

from .algebra import leibniz_check, st_star_structure_check
from .config import ConfigError, RunConfig, parse_matrix, parse_vector, scalar_field_for
from .connections import (
    LieStructure, connection_from_gamma, connection_leibniz_check, curvature,
    lie_structure_check, metric_compat_check, metric_connection_free,
    star_connection_check, torsion_free_check, torsion_free_construct,
    zero_gamma,
)
from .matgeo import (
    MatrixGeometry, curvature_closed_form, doubled_star_algebra,
    free_rank_one_module, matrix_levi_civita, projective_connection,
    regularity_check, torsion_free_gamma_choice, unique_regular_connection,
    uniqueness_violation_witness,
)
from .matrices import MatrixAlgebra, build_matrix_algebra
from .presets import build_qplane, build_shift_line
from .reports import CheckRecord, failed, passed, skipped
from .scalars import QS, q_integer
from .smodules import HermitianForm, free_sigma_module, hermitian_axiom_check, \
    invariance_check, module_law_check
from .sphere import (
    XActionTable, bimodule_relation_check, build_sphere,
    differential_consistency_check, k_hat_check, solve_x_table,
    sphere_presentation, validate_x_table,
)


def _timed(fn):
    t0 = time.perf_counter()
    rec = fn()
    rec.seconds = round(time.perf_counter() - t0, 6)
    return rec


def _value_check(name, identity, got, want) -> CheckRecord:
    if got == want:
        return passed(name, identity)
    return failed(name, identity, {"got": got, "want": want})


# ---------------------------------------------------------------------------
# q-plane
# ---------------------------------------------------------------------------

def qplane_curvature_records(qp, n, m):
    """The worked curvature values as exact element equalities."""
    alg = qp.presentation
    module = free_sigma_module(qp.st, 2)
    g = zero_gamma(module)
    g[0][0][1] = alg.parse(f"y^{m}")
    g[1][1][0] = alg.parse(f"x^{n}")
    conn = connection_from_gamma(module, g)
    xnym = alg.parse(f"x^{n}*y^{m}")
    ym1 = alg.parse(f"y^{m-1}") if m > 1 else alg.one
    xn1 = alg.parse(f"x^{n-1}") if n > 1 else alg.one
    out = []
    got = curvature(conn, qp.lie, 0, 1, module.basis(0))
    want = module.element([-xnym.scale(QS.q_power(m)), -ym1.scale(q_integer(m))])
    out.append(_value_check(f"curvature-e1[n={n},m={m}]",
                            "Curv(X1,X2)e1 = -q^m x^n y^m e1 - [m]_q y^(m-1) e2",
                            got, want))
    got = curvature(conn, qp.lie, 0, 1, module.basis(1))
    want = module.element([xn1.scale(q_integer(n)), xnym.scale(QS.q_power(n))])
    out.append(_value_check(f"curvature-e2[n={n},m={m}]",
                            "Curv(X1,X2)e2 = q^n x^n y^m e2 + [n]_q x^(n-1) e1",
                            got, want))
    got = curvature(conn, qp.lie, 0, 1, module.element([alg.parse("x*y"), alg.zero]))
    want = module.element([
        -alg.parse(f"x^{n+1}*y^{m+1}").scale(QS.q_power(m + 2)),
        -alg.parse(f"x*y^{m}").scale(QS.q_power(2) * q_integer(m)),
    ])
    out.append(_value_check(
        f"curvature-xye1[n={n},m={m}]",
        "Curv(X1,X2)(x y e1) = -q^(m+2) x^(n+1) y^(m+1) e1 - q^2 [m]_q x y^m e2",
        got, want))
    return out, conn, module


def qplane_suite(cfg: RunConfig):
    qp = build_qplane()
    alg = qp.presentation
    samples = cfg.samples
    seed = cfg.seed
    rng = random.Random(seed)
    records = []
    for a in range(2):
        records.append(_timed(lambda a=a: leibniz_check(
            qp.st.X(a), samples=samples, seed=seed + a)))
    records.append(_timed(lambda: lie_structure_check(
        qp.lie, samples=min(samples, 20), seed=seed)))

    def commutations():
        X1, X2 = qp.st.X(0), qp.st.X(1)
        s1, s2 = X1.sigma, X2.sigma
        for _ in range(min(samples, 40)):
            f = alg.random_element(rng)
            pairs = [
                (X1.apply(X2.apply(f)), X2.apply(X1.apply(f))),
                (X1.apply(s2.apply(f)), s2.apply(X1.apply(f))),
                (X2.apply(s1.apply(f)), s1.apply(X2.apply(f))),
                (s1.apply(s2.apply(f)), s2.apply(s1.apply(f))),
            ]
            for k, (lhs, rhs) in enumerate(pairs):
                if lhs != rhs:
                    return failed("qplane-commutations",
                                  "[X1,X2] = [X1,sigma2] = [X2,sigma1] = [sigma1,sigma2] = 0",
                                  {"which": k, "f": f, "lhs": lhs, "rhs": rhs})
        return passed("qplane-commutations",
                      "[X1,X2] = [X1,sigma2] = [X2,sigma1] = [sigma1,sigma2] = 0")

    records.append(_timed(commutations))
    n = int(cfg.qplane.get("n", 1))
    m = int(cfg.qplane.get("m", 1))
    curv_records, conn, module = qplane_curvature_records(qp, n, m)
    records.extend(curv_records)
    records.append(_timed(lambda: module_law_check(
        free_sigma_module(qp.starred, 2), samples=samples, seed=seed)))
    records.append(_timed(lambda: connection_leibniz_check(
        conn, side="left", samples=min(samples, 30), seed=seed)))

    module4 = free_sigma_module(qp.starred, 2)
    h = HermitianForm(module4, [[alg.one, alg.zero], [alg.zero, alg.one + alg.one]])
    records.append(_timed(lambda: hermitian_axiom_check(h, samples=min(samples, 30), seed=seed)))
    records.append(_timed(lambda: invariance_check(h, module4, samples=min(samples, 30), seed=seed)))

    tables = int(cfg.qplane.get("tables", 3))
    for t in range(tables):
        gamma = [None] * 4
        for a in (0, 1):
            gamma[a] = [[alg.random_element(rng, max_degree=2) for _ in range(2)]
                        for _ in range(2)]
        for a in (0, 1):
            b = qp.starred.iota[a]
            gamma[b] = [[gamma[a][jj][ii].star() for jj in range(2)] for ii in range(2)]
        mc = metric_connection_free(module4, h, gamma, name=f"nabla-h{t}")
        records.append(_timed(lambda mc=mc, t=t: metric_compat_check(
            mc, h, module4, mode="generators", seed=seed + t,
            name=f"metric-compat[gen,{t}]")))
        records.append(_timed(lambda mc=mc, t=t: metric_compat_check(
            mc, h, module4, mode="random", samples=min(samples, 25), seed=seed + t,
            name=f"metric-compat[random,{t}]", check_invariance=False)))
        gt = [[[alg.random_element(rng, max_degree=2) for _ in range(2)]
               for _ in range(2)] for _ in range(2)]
        tf = torsion_free_construct(qp.lie, module.basis_elements(), gt, module,
                                    name=f"nabla-tf{t}")
        records.append(_timed(lambda tf=tf, t=t: torsion_free_check(
            tf, qp.lie, module.basis_elements(), name=f"torsion-free[{t}]")))

    records.append(_timed(lambda: star_connection_check(
        connection_from_gamma(module4, zero_gamma(module4)),
        samples=min(samples, 25), seed=seed)))

    if "gamma" in cfg.qplane:
        from .config import anchor_from_config, gamma_from_config, lie_structure_from_config
        user_conn = connection_from_gamma(
            module, gamma_from_config(module, cfg.qplane["gamma"]), name="nabla-config")
        records.append(_timed(lambda: connection_leibniz_check(
            user_conn, side="left", samples=min(samples, 20), seed=seed,
            name="connection-leibniz[config]")))
        lie = qp.lie
        if "lie" in cfg.qplane:
            lie = lie_structure_from_config(qp.st, cfg.qplane["lie"])
            records.append(_timed(lambda: lie_structure_check(
                lie, samples=10, seed=seed, name="lie-structure[config]")))
        if "anchor" in cfg.qplane:
            user_anchor = anchor_from_config(module, cfg.qplane["anchor"])
            records.append(_timed(lambda: torsion_free_check(
                user_conn, lie, user_anchor, name="torsion-free[config]")))

    if "eval_s" in cfg.qplane:
        records.append(_timed(lambda: qplane_numeric_cross_check(
            qp, n, m, str(cfg.qplane["eval_s"]))))

    if cfg.negative_controls:
        records.extend(qplane_negative_controls(qp, seed))
    return records


def qplane_numeric_cross_check(qp, n, m, s_text) -> CheckRecord:
    """Evaluate the curvature identity at an exact value of s (q = s^2)."""
    from .scalars import evaluate_at, parse_scalar, QQI
    name = f"curvature-eval[s={s_text}]"
    identity = "curvature identity holds after substituting s = s0"
    s0 = parse_scalar(s_text, QQI)
    records, conn, module = qplane_curvature_records(qp, n, m)
    alg = qp.presentation
    got = curvature(conn, qp.lie, 0, 1, module.basis(0))
    xnym = alg.parse(f"x^{n}*y^{m}")
    ym1 = alg.parse(f"y^{m-1}") if m > 1 else alg.one
    want = module.element([-xnym.scale(QS.q_power(m)), -ym1.scale(q_integer(m))])
    for lhs_el, rhs_el in zip(got.components, want.components):
        for word in set(lhs_el.terms) | set(rhs_el.terms):
            lv = evaluate_at(lhs_el.coefficient(word), s0)
            rv = evaluate_at(rhs_el.coefficient(word), s0)
            if lv != rv:
                return failed(name, identity,
                              {"word": word, "lhs": lv, "rhs": rv})
    return passed(name, identity)


def qplane_negative_controls(qp, seed):
    alg = qp.presentation
    module = free_sigma_module(qp.st, 2)
    records = []
    g = zero_gamma(module)
    g[0][0][0] = alg.gen("x")
    conn = connection_from_gamma(module, g)
    records.append(_timed(lambda: connection_leibniz_check(
        conn, side="right", samples=10, seed=seed,
        name="negative:right-rule-broken")))
    C = [[[QS.zero, QS.zero], [QS.one, QS.zero]],
         [[QS.zero, QS.zero], [QS.zero, QS.zero]]]
    bad = LieStructure(qp.st, qp.lie.R, C)
    records.append(_timed(lambda: lie_structure_check(
        bad, samples=5, seed=seed, name="negative:fabricated-C")))
    module4 = free_sigma_module(qp.starred, 2)
    x = alg.gen("x")
    h_bad = HermitianForm(module4, [[alg.one + x * x, alg.zero], [alg.zero, alg.one]])
    records.append(_timed(lambda: invariance_check(
        h_bad, module4, samples=10, seed=seed, name="negative:noninvariant-form")))
    return records


# ---------------------------------------------------------------------------
# shift line
# ---------------------------------------------------------------------------

def shiftline_suite(cfg: RunConfig):
    from fractions import Fraction
    hbar = Fraction(cfg.shiftline.get("hbar", "1/2"))
    p = build_shift_line(hbar)
    D = p.st.X(0)
    records = []
    records.append(_timed(lambda: leibniz_check(D, samples=cfg.samples, seed=cfg.seed)))
    records.append(_timed(lambda: leibniz_check(
        D, samples=cfg.samples, seed=cfg.seed, sigma=p.shift, tau=D.sigma,
        name="leibniz[D,(tau,sigma)]")))

    def values():
        from .scalars import QQ
        alg = p.presentation
        t = alg.gen("t")
        hb = QQ.from_fraction(p.hbar)
        if D.apply(t) != alg.scalar(hb):
            return failed("shiftline-values", "D(t) = hbar", {"got": D.apply(t)})
        want = t.scale(hb + hb) + alg.scalar(hb * hb)
        if D.apply(t * t) != want:
            return failed("shiftline-values", "D(t^2) = 2 hbar t + hbar^2",
                          {"got": D.apply(t * t), "want": want})
        if not D.apply(alg.one).is_zero():
            return failed("shiftline-values", "D(1) = 0", {"got": D.apply(alg.one)})
        return passed("shiftline-values", "D(t) = hbar; D(t^2) = 2 hbar t + hbar^2; D(1) = 0")

    records.append(_timed(values))
    return records


# ---------------------------------------------------------------------------
# matrix preset
# ---------------------------------------------------------------------------

def default_twists(alg: MatrixAlgebra, count=2):
    """Deterministic diagonal unitaries with entries in the 4th roots of unity."""
    one, i = alg.field.one, alg.field.imag_unit
    pool = [one, i, -one, -i]
    return [alg.diagonal([pool[(k + a) % 4] for k in range(alg.n)])
            for a in range(count)]


def build_matrix_from_config(cfg: RunConfig):
    dim = int(cfg.matrix.get("dim", 2))
    field = scalar_field_for(cfg)
    alg = MatrixAlgebra(dim, field)
    if "twists" in cfg.matrix:
        twists = [parse_matrix(alg, rows) for rows in cfg.matrix["twists"]]
    else:
        twists = default_twists(alg)
    st = build_matrix_algebra(twists, check_unitary=True)
    e_list = None
    if "e" in cfg.matrix:
        e_list = [parse_matrix(alg, rows) for rows in cfg.matrix["e"]]
    if "v0" in cfg.matrix:
        v0 = parse_vector(alg, cfg.matrix["v0"])
        return MatrixGeometry(st, v0=v0, e_list=e_list)
    from .matgeo import EigenvectorError
    try:
        return MatrixGeometry(st, v0=alg.basis_vector(0), e_list=e_list)
    except EigenvectorError:
        return MatrixGeometry(st, v0=None, e_list=e_list)


def matrix_suite(cfg: RunConfig):
    G = build_matrix_from_config(cfg)
    alg = G.alg
    seed = cfg.seed
    samples = cfg.samples
    rng = random.Random(seed)
    records = []
    for a in range(G.n):
        X = G.st.X(a)
        records.append(_timed(lambda X=X: leibniz_check(X, samples=min(samples, 25), seed=seed)))
        records.append(_timed(lambda X=X: leibniz_check(
            X, samples=min(samples, 25), seed=seed, sigma=X.tau, tau=X.sigma,
            name=f"leibniz[{X.name},(tau,sigma)]")))
    L = LieStructure.flip(G.st)
    records.append(_timed(lambda: lie_structure_check(L, samples=10, seed=seed)))

    def closed_form_equivalence():
        identity = "closed-form curvature = definition-based curvature"
        p_modes = [None, G.v0]
        for trial in range(min(samples, 20)):
            use_v0 = p_modes[trial % 2]
            Gt = MatrixGeometry(G.st, v0=use_v0)
            gammas = [alg.random_element(rng) for _ in range(G.n)]
            conn = projective_connection(Gt, gammas)
            A = conn.module.random_element(rng)
            for a in range(G.n):
                for b in range(G.n):
                    direct = curvature(conn, L, a, b, A).components[0]
                    closed = curvature_closed_form(Gt, gammas, a, b, A.components[0])
                    if direct != closed:
                        return failed("curvature-closed-form", identity,
                                      {"trial": trial, "ab": (a, b), "A": A,
                                       "direct": direct, "closed": closed})
        return passed("curvature-closed-form", identity)

    records.append(_timed(closed_form_equivalence))

    if G.p_matrix is not None:
        def rank_one_flat():
            identity = "rank-one projector makes the curvature vanish"
            for trial in range(min(samples, 20)):
                gammas = [alg.random_element(rng) for _ in range(G.n)]
                conn = projective_connection(G, gammas)
                A = conn.module.random_element(rng)
                for a in range(G.n):
                    for b in range(G.n):
                        got = curvature(conn, L, a, b, A)
                        if not got.is_zero():
                            return failed("curvature-rank-one", identity,
                                          {"trial": trial, "ab": (a, b), "A": A,
                                           "got": got})
            return passed("curvature-rank-one", identity)

        records.append(_timed(rank_one_flat))

        def sandwich():
            identity = "p [A1 p, A2 p] = 0 for the rank-one projector"
            p = G.p_matrix
            for _ in range(min(samples, 20)):
                a1, a2 = alg.random_element(rng), alg.random_element(rng)
                if not (p * ((a1 * p) * (a2 * p) - (a2 * p) * (a1 * p))).is_zero():
                    return failed("scalar-sandwich", identity, {"A1": a1, "A2": a2})
            return passed("scalar-sandwich", identity)

        records.append(_timed(sandwich))
    else:
        records.append(skipped("curvature-rank-one",
                               "rank-one projector makes the curvature vanish",
                               "no common eigenvector supplied"))

    reg, witnesses = regularity_check(G.st, seed=seed)
    records.append(reg)
    st2 = doubled_star_algebra(G.st)
    records.append(_timed(lambda: st_star_structure_check(st2)))
    if reg.passed:
        conn_u, module_u, rules = unique_regular_connection(st2, seed=seed)
        records.append(rules)

        def uniqueness():
            identity = "X_a(B) gamma~ = 0 forces gamma~ = 0 (regularity witness)"
            gamma_tilde = [alg.random_element(rng) for _ in range(G.n)]
            if all(g.is_zero() for g in gamma_tilde):
                gamma_tilde[0] = alg.one
            w = uniqueness_violation_witness(st2, gamma_tilde,
                                             conn_u.regularity_witnesses)
            if w is None:
                return failed("uniqueness-argument", identity,
                              {"reason": "no violation witness produced"})
            return passed("uniqueness-argument", identity)

        records.append(_timed(uniqueness))

    gammas, e_list = torsion_free_gamma_choice(G)
    conn_tf = projective_connection(G, gammas)
    p = G.p_matrix if G.p_matrix is not None else alg.one
    anchor = [conn_tf.module.element([e * p]) for e in e_list]
    records.append(_timed(lambda: torsion_free_check(
        conn_tf, L, anchor, name="torsion-free[ansatz]")))

    def h0_from_config():
        if "h0" in cfg.matrix:
            return parse_matrix(alg, cfg.matrix["h0"])
        entries = [alg.field.from_int(k + 1) for k in range(alg.n)]
        return alg.diagonal(entries)

    h0 = h0_from_config()
    _, lc_full = matrix_levi_civita(G, h0=h0, mode="full",
                                    samples=min(samples, 20), seed=seed)
    records.append(lc_full)
    if G.v0 is not None:
        hhat0 = None
        if "hhat0" in cfg.matrix:
            from .scalars import parse_scalar
            hhat0 = parse_scalar(str(cfg.matrix["hhat0"]), alg.field)
        _, lc_vec = matrix_levi_civita(G, mode="vector", hhat0=hhat0,
                                       samples=min(samples, 20), seed=seed)
        records.append(lc_vec)
    else:
        records.append(skipped("levi-civita[vector]",
                               "vector-module Levi-Civita connection",
                               "no common eigenvector supplied"))
    module1 = free_rank_one_module(st2)
    records.append(_timed(lambda: module_law_check(
        module1, samples=min(samples, 30), seed=seed)))
    records.append(_timed(lambda: invariance_check(
        HermitianForm(module1, [[h0]]), module1, samples=min(samples, 20), seed=seed)))

    if cfg.negative_controls:
        records.extend(matrix_negative_controls(G, st2, seed))
    return records


def matrix_negative_controls(G, st2, seed):
    alg = G.alg
    records = []
    one, zero = alg.field.one, alg.field.zero
    rows = [[zero] * alg.n for _ in range(alg.n)]
    rows[0][0] = one
    rows[0][min(1, alg.n - 1)] = one
    rows[min(1, alg.n - 1)][0] = one
    h_bad = alg.from_rows(rows)
    module1 = free_rank_one_module(st2)
    records.append(_timed(lambda: invariance_check(
        HermitianForm(module1, [[h_bad]]), module1, samples=10, seed=seed,
        name="negative:noncommuting-h0")))
    return records


# ---------------------------------------------------------------------------
# sphere
# ---------------------------------------------------------------------------

def sphere_suite(cfg: RunConfig):
    solve = bool(cfg.sphere.get("solve", False))
    table_data = cfg.sphere.get("x_table")
    if not solve and table_data is None:
        reason = "no action table: pass --solve or supply sphere.x_table"
        return [skipped(name, "sphere structure suite", reason) for name in (
            "sphere-table", "sphere-star-structure", "sphere-leibniz",
            "sphere-commutators", "sphere-bimodule", "sphere-k-hat",
            "sphere-module-laws", "sphere-differential", "sphere-basis-count")]
    alg = sphere_presentation()
    if table_data is not None:
        table = XActionTable.from_dict(alg, table_data)
    else:
        table = solve_x_table(int(cfg.sphere.get("degree_bound", 2)), alg)
    seed = cfg.seed
    samples = cfg.samples
    records = []

    def table_check():
        try:
            validate_x_table(alg, table)
        except Exception as exc:
            return failed("sphere-table", "action table well-defined + commutators",
                          {"error": str(exc)})
        return passed("sphere-table", "action table well-defined + commutators")

    records.append(_timed(table_check))
    if records[-1].failed:
        return records
    sph = build_sphere(table)

    def y_self_adjoint():
        for a in range(3):
            Y = sph.st.X(a)
            for g in alg.generator_elements():
                if Y.apply(g.star()).star() != Y.apply(g):
                    return failed("sphere-y-self-adjoint", "Y_a* = Y_a",
                                  {"a": a, "g": g})
        return passed("sphere-y-self-adjoint", "Y_a* = Y_a")

    records.append(_timed(y_self_adjoint))
    records.append(_timed(lambda: st_star_structure_check(sph.st)))
    for a in range(3):
        records.append(_timed(lambda a=a: leibniz_check(
            sph.st.X(a), samples=min(samples, 40), seed=seed + a)))
    records.append(_timed(lambda: bimodule_relation_check(
        sph, samples=min(samples, 40), seed=seed)))
    records.append(_timed(lambda: k_hat_check(sph, samples=min(samples, 40), seed=seed)))
    records.append(_timed(lambda: module_law_check(
        sph.omega1, samples=samples, seed=seed)))
    records.append(_timed(lambda: differential_consistency_check(
        sph, samples=min(samples, 25), seed=seed)))

    def basis_count():
        from math import comb
        for d in range(5):
            got = len(alg.normal_words_up_to_degree(d))
            want = 2 * comb(d + 3, 3) - comb(d + 2, 2)
            if got != want:
                return failed("sphere-basis-count",
                              "normal monomial count matches the classical coordinate ring",
                              {"degree": d, "got": got, "want": want})
        return passed("sphere-basis-count",
                      "normal monomial count matches the classical coordinate ring")

    records.append(_timed(basis_count))

    if cfg.negative_controls:
        def compat_negative():
            module = free_sigma_module(sph.st, 1)
            ccs = alg.parse("1+c*cs")
            h = HermitianForm(module, [[ccs]])
            conn = connection_from_gamma(module, zero_gamma(module))
            return metric_compat_check(conn, h, module, mode="generators",
                                       seed=seed, name="negative:compat-moving-form")

        records.append(_timed(compat_negative))
    return records


SUITES = {
    "qplane": qplane_suite,
    "shiftline": shiftline_suite,
    "matrix": matrix_suite,
    "sphere": sphere_suite,
}


def run_suite(cfg: RunConfig):
    fn = SUITES.get(cfg.preset)
    if fn is None:
        raise ConfigError(f"no suite for preset {cfg.preset!r}")
    return fn(cfg)
