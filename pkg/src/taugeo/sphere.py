"""The quantum 3-sphere: presentation, K action, the X action table solver,
the rank-3 form module with its twisted bimodule structure, and the
differential.

Generators are named a, as, c, cs (as = a*, cs = c*).  The chosen word
order pushes a and as to the left and c before cs, giving the monomial
basis {a^k c^m cs^n} u {as^l c^m cs^n, l >= 1}.
"""
from __future__ import annotations

import random

from .algebra import (
    AlgebraEndomorphism, AlgebraPresentation, IllDefinedMapError,
    SigmaTauAlgebra, SigmaTauDerivation, derivation_extend,
)
from .reports import CheckRecord, failed, passed
from .scalars import QS

A, AS, C, CS = 0, 1, 2, 3
_GEN_NAMES = ("a", "as", "c", "cs")

# K scales each generator by s^w; these are the exponents.
K_WEIGHTS = (-1, 1, -1, 1)

# eta_a f = K^(n_a)(f) eta_a
ETA_EXPONENTS = (2, 2, 4)


def sphere_presentation() -> AlgebraPresentation:
    """S3_q over Q(i)(s): ac = qca, ac* = qc*a, ca* = qa*c, c*a* = qa*c*,
    cc* = c*c, a*a + c*c = 1, aa* + q^2 cc* = 1."""
    q = QS.q
    qi = q.invert()
    one = QS.one
    relations = [
        ((C, A), {(A, C): qi}),
        ((CS, A), {(A, CS): qi}),
        ((C, AS), {(AS, C): q}),
        ((CS, AS), {(AS, CS): q}),
        ((CS, C), {(C, CS): one}),
        ((AS, A), {(): one, (CS, C): -one}),
        ((A, AS), {(): one, (C, CS): -q * q}),
    ]
    star = {"a": "as", "as": "a", "c": "cs", "cs": "c"}
    # weight 2 on a, as orients a*a -> 1 - c c* and aa* -> 1 - q^2 c c*
    return AlgebraPresentation("S3q", _GEN_NAMES, QS, relations, star_map=star,
                               weights=(2, 2, 1, 1))


def k_power(alg: AlgebraPresentation, n: int) -> AlgebraEndomorphism:
    """The endomorphism K^n (diagonal on generators: g -> s^(n*w_g) g)."""
    images = [alg.gen(k).scale(QS.s_power(n * K_WEIGHTS[k])) for k in range(4)]
    name = "id" if n == 0 else (f"K^{n}" if n not in (1, -1) else ("K" if n == 1 else "K^-1"))
    return AlgebraEndomorphism(alg, images, name=name)


class SphereError(Exception):
    pass


class InvalidActionTableError(SphereError):
    """The action table violates a relation or a twisted commutator."""


class SolverError(SphereError):
    pass


def _word_k_weight(word) -> int:
    return sum(K_WEIGHTS[g] for g in word)


def _element_ratio(e1, e2):
    """Scalar c with e1 = c * e2, or None (e2 must be nonzero)."""
    if e2.is_zero():
        return None
    w, cv = next(iter(e2.terms.items()))
    c1 = e1.terms.get(w)
    if c1 is None:
        return None
    c = c1 * cv.invert()
    return c if e1 == e2.scale(c) else None


# ---------------------------------------------------------------------------
# Solver for the raising/lowering/scaling action table
# ---------------------------------------------------------------------------

def _leibniz_residuals(alg, tau_endo, images):
    """Residuals of the (id, tau)-Leibniz extension on every rewrite rule."""
    ident = AlgebraEndomorphism.identity(alg)
    D = SigmaTauDerivation(ident, tau_endo, images, check=False)
    out = []
    for rule in alg.rules:
        res = D.apply_word(rule.lhs)
        for w, c in rule.rhs.items():
            res = res - D.apply_word(w).scale(c)
        out.append(res)
    return out


def derivation_sector_nullspaces(alg: AlgebraPresentation, tau_n: int,
                                 degree_bound: int = 2):
    """Well-defined (id, K^tau_n)-derivations with images of bounded degree,
    split by K-weight shift.

    The rewrite rules are K-weight homogeneous (asserted), so the linear
    well-definedness constraints decouple over the weight shift of the
    ansatz; each sector is solved independently.  Returns a dict
    shift -> list of image tables (lists of 4 elements).
    """
    for rule in alg.rules:
        w0 = _word_k_weight(rule.lhs)
        for w in rule.rhs:
            if _word_k_weight(w) != w0:
                raise SolverError("rewrite rules are not weight homogeneous")
    tau_endo = k_power(alg, tau_n)
    monos = alg.normal_words_up_to_degree(degree_bound)
    # ansatz unit vectors, grouped by weight shift
    sectors = {}
    for g in range(4):
        for mono in monos:
            d = _word_k_weight(mono) - K_WEIGHTS[g]
            sectors.setdefault(d, []).append((g, mono))
    out = {}
    for d in sorted(sectors):
        pairs = sectors[d]
        columns = []
        row_index = {}
        rows = []
        for j, (g, mono) in enumerate(pairs):
            images = [alg.zero] * 4
            images[g] = alg.element({mono: QS.one})
            col = {}
            for r_idx, res in enumerate(_leibniz_residuals(alg, tau_endo, images)):
                for w, c in res.terms.items():
                    key = (r_idx, w)
                    if key not in row_index:
                        row_index[key] = len(rows)
                        rows.append({})
                    rows[row_index[key]][j] = c
            columns.append((g, mono))
        basis = _nullspace(rows, len(pairs))
        tables = []
        for vec in basis:
            images = [alg.zero] * 4
            for j, coeff in enumerate(vec):
                if coeff.is_zero():
                    continue
                g, mono = pairs[j]
                images[g] = images[g] + alg.element({mono: coeff})
            tables.append(images)
        if tables:
            out[d] = tables
    return out


def _nullspace(rows, ncols):
    """Nullspace basis of a sparse row list over the scalar field."""
    dense = []
    for r in rows:
        dense.append([r.get(j, QS.zero) for j in range(ncols)])
    pivots = {}
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(dense)):
            if not dense[r][col].is_zero():
                piv = r
                break
        if piv is None:
            continue
        dense[rank], dense[piv] = dense[piv], dense[rank]
        inv = dense[rank][col].invert()
        dense[rank] = [x * inv for x in dense[rank]]
        for r in range(len(dense)):
            if r == rank:
                continue
            f = dense[r][col]
            if f.is_zero():
                continue
            dense[r] = [x - f * y for x, y in zip(dense[r], dense[rank])]
        pivots[col] = rank
        rank += 1
    basis = []
    free_cols = [c for c in range(ncols) if c not in pivots]
    for fc in free_cols:
        vec = [QS.zero] * ncols
        vec[fc] = QS.one
        for pc, pr in pivots.items():
            vec[pc] = -dense[pr][fc]
        basis.append(vec)
    return basis


class XActionTable:
    """Generator images of the raising, lowering and scaling derivations."""

    def __init__(self, alg, plus, minus, z, report=None):
        self.alg = alg
        self.plus = list(plus)
        self.minus = list(minus)
        self.z = list(z)
        self.report = report or {}

    def as_dict(self):
        names = _GEN_NAMES
        return {
            "plus": {names[k]: str(self.plus[k]) for k in range(4)},
            "minus": {names[k]: str(self.minus[k]) for k in range(4)},
            "z": {names[k]: str(self.z[k]) for k in range(4)},
        }

    @staticmethod
    def from_dict(alg, data) -> "XActionTable":
        def row(d):
            return [alg.parse(d[name]) for name in _GEN_NAMES]
        return XActionTable(alg, row(data["plus"]), row(data["minus"]), row(data["z"]))


def _compose_images(alg, outer, inner):
    """Images of outer . inner on generators (both derivations)."""
    return [outer.apply(inner.images[g]) for g in range(4)]


def build_x_derivations(alg, table: XActionTable):
    """Validated derivations: X+ and X- of type (id, K^2), Xz of type (id, K^4)."""
    ident = AlgebraEndomorphism.identity(alg)
    K2, K4 = k_power(alg, 2), k_power(alg, 4)
    try:
        xp = derivation_extend(ident, K2, table.plus, name="X+")
        xm = derivation_extend(ident, K2, table.minus, name="X-")
        xz = derivation_extend(ident, K4, table.z, name="Xz")
    except IllDefinedMapError as exc:
        raise InvalidActionTableError(str(exc)) from exc
    return xp, xm, xz


def validate_x_table(alg, table: XActionTable):
    """Well-definedness plus the three twisted commutators on all generators."""
    xp, xm, xz = build_x_derivations(alg, table)
    q2 = QS.q_power(2)
    qm2 = QS.q_power(-2)
    one_plus_q2 = QS.one + QS.q_power(2)
    gens = alg.generator_elements()
    for k, g in enumerate(gens):
        lhs = xm.apply(xp.apply(g)) - xp.apply(xm.apply(g)).scale(q2)
        if lhs != xz.apply(g):
            raise InvalidActionTableError(
                f"commutator X-X+ - q^2 X+X- = Xz fails on {_GEN_NAMES[k]}")
        lhs = xz.apply(xm.apply(g)).scale(q2) - xm.apply(xz.apply(g)).scale(qm2)
        if lhs != xm.apply(g).scale(one_plus_q2):
            raise InvalidActionTableError(
                f"commutator q^2 XzX- - q^-2 X-Xz = (1+q^2)X- fails on {_GEN_NAMES[k]}")
        lhs = xp.apply(xz.apply(g)).scale(q2) - xz.apply(xp.apply(g)).scale(qm2)
        if lhs != xp.apply(g).scale(one_plus_q2):
            raise InvalidActionTableError(
                f"commutator q^2 X+Xz - q^-2 XzX+ = (1+q^2)X+ fails on {_GEN_NAMES[k]}")
    return xp, xm, xz


def solve_x_table(degree_bound: int = 2, alg: AlgebraPresentation | None = None) -> XActionTable:
    """Solve for the action table from the constraint system alone.

    Stage 1 computes, per K-weight sector, the nullspace of the Leibniz
    well-definedness constraints for (id, K^2)- and (id, K^4)-derivations
    with degree-bounded images.  Stage 2 imposes the twisted commutators,
    which pin the weight-(+2)/(-2)/(0) sectors against each other up to
    one overall scaling; the scaling is fixed by X+(c) = a* together with
    the star relations (X+)* = -K^-2 X-, which the symmetric combinations
    need.  The report records every sector dimension and the residual
    freedom instead of pretending the solution is unique.

    degree_bound is a maximum: ansatz degrees are tried in increasing
    order, since enlarging the bound only adds inner twisted derivations
    (f -> f m - m K^2(f)) to the sectors and blurs the staged solve.
    """
    alg = alg or sphere_presentation()
    last_err = None
    for bound in range(1, degree_bound + 1):
        try:
            return _solve_x_table_at(bound, alg)
        except SolverError as exc:
            last_err = exc
    raise last_err


def _solve_x_table_at(degree_bound: int, alg: AlgebraPresentation) -> XActionTable:
    v_pm = derivation_sector_nullspaces(alg, 2, degree_bound)
    v_z = derivation_sector_nullspaces(alg, 4, degree_bound)
    report = {
        "degree_bound": degree_bound,
        "sectors_pm": {str(d): len(v) for d, v in sorted(v_pm.items())},
        "sectors_z": {str(d): len(v) for d, v in sorted(v_z.items())},
        "free_parameters": 1,
        "normalization": "X+(c) = a*; (X+)* = -K^-2 X-",
        "search": "weight sectors +2 (raising), -2 (lowering), 0 (scaling); "
                  "other sector dimensions listed above for reference",
    }
    for d, want in ((2, "raising"), (-2, "lowering")):
        if d not in v_pm or len(v_pm[d]) != 1:
            raise SolverError(
                f"{want} sector has dimension {len(v_pm.get(d, []))}, expected 1; "
                f"sector dims: {report['sectors_pm']}")
    if 0 not in v_z or len(v_z[0]) != 1:
        raise SolverError(
            f"scaling sector has dimension {len(v_z.get(0, []))}, expected 1")
    ident = AlgebraEndomorphism.identity(alg)
    K2, K4 = k_power(alg, 2), k_power(alg, 4)

    def mk(images, tau):
        return SigmaTauDerivation(ident, tau, images, check=False)

    P_img = v_pm[2][0]
    M_img = v_pm[-2][0]
    Z_img = v_z[0][0]
    a_star = alg.gen(AS)
    c_gen = alg.gen(C)
    ratio = _element_ratio(a_star, P_img[C])
    if ratio is None:
        raise SolverError("raising image of c is not proportional to a*")
    P_img = [im.scale(ratio) for im in P_img]
    ratio = _element_ratio(c_gen, M_img[AS])
    if ratio is None:
        raise SolverError("lowering image of a* is not proportional to c")
    M_img = [im.scale(ratio) for im in M_img]
    P = mk(P_img, K2)
    M = mk(M_img, K2)
    Z = mk(Z_img, K4)

    # commutator q^2 X+ Xz - q^-2 Xz X+ = (1+q^2) X+ is linear in zeta for
    # Xz = zeta Z; solve and cross-check on every generator
    q2, qm2 = QS.q_power(2), QS.q_power(-2)
    one_plus_q2 = QS.one + QS.q_power(2)
    zeta = None
    for g in range(4):
        lhs = P.apply(Z.images[g]).scale(q2) - Z.apply(P.images[g]).scale(qm2)
        rhs = P.images[g].scale(one_plus_q2)
        if lhs.is_zero() and rhs.is_zero():
            continue
        r = _element_ratio(rhs, lhs)
        if r is None:
            raise SolverError("scaling sector does not solve the raising commutator")
        if zeta is None:
            zeta = r
        elif zeta != r:
            raise SolverError("inconsistent scaling factor across generators")
    if zeta is None:
        raise SolverError("raising commutator is vacuous; cannot fix the scaling sector")
    Z_img = [im.scale(zeta) for im in Z_img]
    Z = mk(Z_img, K4)

    # X- X+ - q^2 X+ X- = Xz is linear in the lowering scale beta
    beta = None
    for g in range(4):
        w = M.apply(P.images[g]) - P.apply(M.images[g]).scale(q2)
        z = Z.images[g]
        if w.is_zero() and z.is_zero():
            continue
        r = _element_ratio(z, w)
        if r is None:
            raise SolverError("bracket of raising and lowering leaves the scaling sector")
        if beta is None:
            beta = r
        elif beta != r:
            raise SolverError("inconsistent lowering scale across generators")
    if beta is None:
        raise SolverError("bracket of raising and lowering is vacuous")
    M_img = [im.scale(beta) for im in M_img]
    M = mk(M_img, K2)

    # fix the residual scaling family via the star relation (X+)* = -K^-2 X-
    Km2 = k_power(alg, -2)
    t = None
    for g in range(4):
        lhs = P.apply(alg.gen(g).star()).star()
        rhs = -Km2.apply(M.images[g])
        if lhs.is_zero() and rhs.is_zero():
            continue
        r = _element_ratio(lhs, rhs)
        if r is None:
            raise SolverError("star relation is not a pure rescaling")
        if t is None:
            t = r
        elif t != r:
            raise SolverError("inconsistent star rescaling across generators")
    if t is not None and not t.is_one():
        lam = _q_power_sqrt_inverse(t)
        if lam is None:
            raise SolverError(
                f"star relation rescaling {t} is not a norm lambda*conj(lambda)")
        P_img = [im.scale(lam) for im in P_img]
        M_img = [im.scale(lam.invert()) for im in M_img]

    table = XActionTable(alg, P_img, M_img, Z_img, report=report)
    validate_x_table(alg, table)
    return table


def _q_power_sqrt_inverse(t):
    """lambda with lambda * conj(lambda) * t = 1, for t an integer power of q."""
    for k in range(-8, 9):
        if t == QS.q_power(k):
            return QS.s_power(-k)
    return None


# ---------------------------------------------------------------------------
# The sphere as a starred (sigma,tau)-algebra, and its 1-form module
# ---------------------------------------------------------------------------

class SphereData:
    """Everything the demos and checks need about the quantum sphere."""

    def __init__(self, presentation, x_table, x_plus, x_minus, x_z, st, omega1):
        self.presentation = presentation
        self.x_table = x_table
        self.x_plus = x_plus
        self.x_minus = x_minus
        self.x_z = x_z
        self.st = st
        self.omega1 = omega1

    def k(self, n: int = 1) -> AlgebraEndomorphism:
        return k_power(self.presentation, n)


def build_sphere(x_table: XActionTable | None = None, degree_bound: int = 2) -> SphereData:
    """The starred algebra (S3_q, {Y1, Y2, Y3}, iota=id) plus its 1-forms.

    Y1 = i K^-1 (X+ + X-), Y2 = K^-1 (X- - X+), Y3 = i K^-2 Xz, with
    sigma = (K^-1, K^-1, K^-2) and tau = (K, K, K^2).  The table is
    validated (well-definedness and twisted commutators) before use.
    """
    if x_table is None:
        x_table = solve_x_table(degree_bound)
    alg = x_table.alg
    xp, xm, xz = validate_x_table(alg, x_table)
    i_unit = QS.imag_unit
    Km1, Km2 = k_power(alg, -1), k_power(alg, -2)
    K1, K2 = k_power(alg, 1), k_power(alg, 2)
    y1_img = [Km1.apply(xp.images[g] + xm.images[g]).scale(i_unit) for g in range(4)]
    y2_img = [Km1.apply(xm.images[g] - xp.images[g]) for g in range(4)]
    y3_img = [Km2.apply(xz.images[g]).scale(i_unit) for g in range(4)]
    try:
        Y1 = derivation_extend(Km1, K1, y1_img, name="Y1")
        Y2 = derivation_extend(Km1, K1, y2_img, name="Y2")
        Y3 = derivation_extend(Km2, K2, y3_img, name="Y3")
        st = SigmaTauAlgebra(alg, [Y1, Y2, Y3], iota=(0, 1, 2), name="S3q")
    except Exception as exc:
        raise InvalidActionTableError(f"symmetric derivations invalid: {exc}") from exc
    omega1 = _omega_one_module(st)
    return SphereData(alg, x_table, xp, xm, xz, st, omega1)


def _omega_one_module(st: SigmaTauAlgebra):
    from .smodules import SigmaModule
    alg = st.presentation
    k_maps = [k_power(alg, n) for n in ETA_EXPONENTS]
    right_twists = [k.apply for k in k_maps]
    star_twists = [lambda f, k=k: k.apply(f.star()) for k in k_maps]
    return SigmaModule(st, 3, right_twists=right_twists, star_twists=star_twists,
                       basis_names=["eta1", "eta2", "eta3"], name="Omega1")


# ---------------------------------------------------------------------------
# K-hat operators on the 1-form module
# ---------------------------------------------------------------------------

def k_hat(omega1, n: int = 1):
    """Coefficientwise K^n on the 1-form module."""
    from .smodules import ModuleMap
    K = k_power(omega1.algebra, n)
    return ModuleMap(omega1, lambda m: omega1.element([K.apply(c) for c in m.components]),
                     name=f"Khat^{n}")


def map_star_conjugate(module, T):
    """T*(m) = (T(m*))* for a module map on a starred module."""
    from .smodules import ModuleMap
    return ModuleMap(module, lambda m: module.star(T.apply(module.star(m))),
                     name=f"{T.name}*")


class OneForm:
    """A 1-form in the omega basis, convertible to the eta basis."""

    def __init__(self, omega1, plus, minus, z):
        self.omega1 = omega1
        self.plus = plus
        self.minus = minus
        self.z = z

    def eta(self):
        """Components in the self-adjoint eta basis."""
        alg = self.omega1.algebra
        from fractions import Fraction
        half = QS.from_fraction(Fraction(1, 2))
        i = QS.imag_unit
        c1 = (self.plus + self.minus).scale(-i * half)
        c2 = (self.minus - self.plus).scale(half)
        c3 = self.z.scale(-i)
        return self.omega1.element([c1, c2, c3])

    def __eq__(self, other):
        return (self.plus, self.minus, self.z) == (other.plus, other.minus, other.z)

    __hash__ = None

    def __str__(self):
        return f"({self.plus})*w+ + ({self.minus})*w- + ({self.z})*wz"


def differential_d(sphere: SphereData, f) -> OneForm:
    """df = X+(f) w+ + X-(f) w- + Xz(f) wz."""
    return OneForm(sphere.omega1, sphere.x_plus.apply(f),
                   sphere.x_minus.apply(f), sphere.x_z.apply(f))


# ---------------------------------------------------------------------------
# Sphere-specific checks
# ---------------------------------------------------------------------------

def bimodule_relation_check(sphere: SphereData, samples=30, seed=0) -> CheckRecord:
    """eta_a f = K^(n_a)(f) eta_a, extended multiplicatively over monomials."""
    cname = "bimodule-relation[Omega1]"
    identity = "eta_a * f = K^(n_a)(f) * eta_a"
    omega1 = sphere.omega1
    alg = sphere.presentation
    rng = random.Random(seed)
    tests = alg.generator_elements() + [alg.random_monomial(rng) for _ in range(samples)]
    k_maps = [sphere.k(n) for n in ETA_EXPONENTS]
    for f in tests:
        for a in range(3):
            lhs = omega1.right_mul(omega1.basis(a), f)
            rhs = omega1.basis(a).left_mul(k_maps[a].apply(f))
            if lhs != rhs:
                return failed(cname, identity, {"a": a, "f": f, "lhs": lhs, "rhs": rhs})
    # multiplicativity of the right action (the extension argument)
    for _ in range(samples):
        f = alg.random_element(rng)
        g = alg.random_element(rng)
        m = omega1.random_element(rng)
        if m.right_mul(f).right_mul(g) != m.right_mul(f * g):
            return failed(cname, "(m f) g = m (f g)", {"f": f, "g": g, "m": m})
    return passed(cname, identity)


def k_hat_check(sphere: SphereData, samples=30, seed=0) -> CheckRecord:
    """Khat(f m g) = K(f) Khat(m) K(g) and Khat* = Khat^-1."""
    cname = "k-hat[Omega1]"
    identity = "Khat(f m g) = K(f) Khat(m) K(g); Khat* = Khat^-1"
    omega1 = sphere.omega1
    alg = sphere.presentation
    K = sphere.k(1)
    Khat = k_hat(omega1, 1)
    Khat_inv = k_hat(omega1, -1)
    rng = random.Random(seed)
    for _ in range(samples):
        f = alg.random_element(rng)
        g = alg.random_element(rng)
        m = omega1.random_element(rng)
        lhs = Khat.apply(m.left_mul(f).right_mul(g))
        rhs = Khat.apply(m).left_mul(K.apply(f)).right_mul(K.apply(g))
        if lhs != rhs:
            return failed(cname, identity, {"f": f, "g": g, "m": m,
                                            "lhs": lhs, "rhs": rhs})
        star_lhs = omega1.star(Khat.apply(omega1.star(m)))
        if star_lhs != Khat_inv.apply(m):
            return failed(cname, identity, {"m": m, "Khat*(m)": star_lhs,
                                            "Khat^-1(m)": Khat_inv.apply(m)})
    return passed(cname, identity)


def differential_consistency_check(sphere: SphereData, samples=20, seed=0) -> CheckRecord:
    """d(fg) computed through the twisted Leibniz rules matches d(normal_form(fg))."""
    cname = "differential[S3q]"
    identity = "d(fg) = f d(g) + (df) K-twisted g, coefficientwise"
    alg = sphere.presentation
    rng = random.Random(seed)
    K2, K4 = sphere.k(2), sphere.k(4)
    for _ in range(samples):
        f = alg.random_element(rng)
        g = alg.random_element(rng)
        direct = differential_d(sphere, f * g)
        via = OneForm(
            sphere.omega1,
            f * sphere.x_plus.apply(g) + sphere.x_plus.apply(f) * K2.apply(g),
            f * sphere.x_minus.apply(g) + sphere.x_minus.apply(f) * K2.apply(g),
            f * sphere.x_z.apply(g) + sphere.x_z.apply(f) * K4.apply(g),
        )
        if direct != via:
            return failed(cname, identity, {"f": f, "g": g,
                                            "direct": direct, "via": via})
    if not differential_d(sphere, alg.one).eta().is_zero():
        return failed(cname, identity, {"d(1)": "nonzero"})
    return passed(cname, identity)
