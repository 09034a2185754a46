"""Connections on modules over (sigma,tau)-algebras.

Covers the twisted-Lie structure (exchange operator R, structure
constants C), connections given by coefficient tables on free modules,
pushforwards along module endomorphisms, curvature and torsion, metric
compatibility with hermitian forms, and the constructors for metric,
torsion-free and Levi-Civita connections.

Scalars R and C live in the coefficient field; the derivation-slot
linearity of a connection forces nabla_{C^p X_p} = C^p nabla_{X_p}, which
is how the bracket term of curvature and torsion is evaluated.
"""
from __future__ import annotations

import random

from .reports import CheckRecord, failed, passed
from .smodules import (
    HermitianForm, ImageModule, ModuleMap, NotAProjectionError,
    form_sigma_inverse, invariance_check, projective_commutation_check,
)


class TwistedConnectionError(Exception):
    pass


class NonInvariantFormError(TwistedConnectionError):
    pass


class AnchorNotBasisError(TwistedConnectionError):
    pass


class NonOrthogonalProjectionError(TwistedConnectionError):
    pass


# ---------------------------------------------------------------------------
# Twisted Lie structure
# ---------------------------------------------------------------------------

class LieStructure:
    """Exchange operator R and structure constants C on the tangent basis."""

    def __init__(self, st_algebra, R, C):
        self.st_algebra = st_algebra
        n = st_algebra.n_derivations
        self.n = n
        self.R = R  # R[a][b][p][q] scalar
        self.C = C  # C[a][b][p] scalar

    @staticmethod
    def flip(st_algebra) -> LieStructure:
        """R(X_a x X_b) = X_b x X_a with vanishing structure constants."""
        field = _field_of(st_algebra)
        n = st_algebra.n_derivations
        zero, one = field.zero, field.one
        R = [[[[one if (p, q) == (b, a) else zero for q in range(n)]
               for p in range(n)] for b in range(n)] for a in range(n)]
        C = [[[zero for _ in range(n)] for _ in range(n)] for _ in range(n)]
        return LieStructure(st_algebra, R, C)

    def __repr__(self):
        return f"LieStructure(n={self.n})"


def _field_of(st_algebra):
    return st_algebra.presentation.field


def bracket_apply(L: LieStructure, a: int, b: int, f):
    """(X_a . X_b - R_ab^pq X_p . X_q)(f)."""
    st = L.st_algebra
    out = st.X(a).apply(st.X(b).apply(f))
    for p in range(L.n):
        for q in range(L.n):
            c = L.R[a][b][p][q]
            if c.is_zero():
                continue
            out = out - st.X(p).apply(st.X(q).apply(f)).scale(c)
    return out


def lie_structure_check(L: LieStructure, samples=10, seed=0, name=None) -> CheckRecord:
    """R^2 = id, bracket closure through C, and R-antisymmetry of C."""
    st = L.st_algebra
    cname = name or f"lie-structure[{st.name}]"
    identity = ("R_ab^pq R_pq^rs = delta_a^r delta_b^s; "
                "[X_a,X_b]_R = C_ab^p X_p; R_ab^pq C_pq^r = -C_ab^r")
    field = _field_of(st)
    n = L.n
    for a in range(n):
        for b in range(n):
            for r in range(n):
                for s_ in range(n):
                    acc = field.zero
                    for p in range(n):
                        for q in range(n):
                            acc = acc + L.R[a][b][p][q] * L.R[p][q][r][s_]
                    want = field.one if (a, b) == (r, s_) else field.zero
                    if acc != want:
                        return failed(cname, identity,
                                      {"check": "R^2=id", "abrs": (a, b, r, s_),
                                       "got": acc, "want": want})
    for a in range(n):
        for b in range(n):
            for r in range(n):
                acc = field.zero
                for p in range(n):
                    for q in range(n):
                        acc = acc + L.R[a][b][p][q] * L.C[p][q][r]
                if acc != -L.C[a][b][r]:
                    return failed(cname, identity,
                                  {"check": "R-antisymmetry", "abr": (a, b, r),
                                   "got": acc, "want": -L.C[a][b][r]})
    rng = random.Random(seed)
    alg = st.presentation
    tests = alg.generator_elements() + [alg.random_element(rng) for _ in range(samples)]
    for f in tests:
        for a in range(n):
            for b in range(n):
                lhs = bracket_apply(L, a, b, f)
                rhs = alg.zero
                for p in range(n):
                    c = L.C[a][b][p]
                    if not c.is_zero():
                        rhs = rhs + st.X(p).apply(f).scale(c)
                if lhs != rhs:
                    return failed(cname, identity,
                                  {"check": "closure", "ab": (a, b), "f": f,
                                   "lhs": lhs, "rhs": rhs})
    return passed(cname, identity)


# ---------------------------------------------------------------------------
# Connections
# ---------------------------------------------------------------------------

class Connection:
    """Base: a map (index a, module element) -> module element."""

    def __init__(self, module, name="nabla"):
        self.module = module
        self.st_algebra = module.st_algebra
        self.name = name

    def apply(self, a: int, m):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.name})"


class GammaConnection(Connection):
    """nabla_{X_a}(m^i e_i) = sigma_a(m^i) Gamma_ai^j e_j + X_a(m^i) tau_hat_a(e_i)."""

    def __init__(self, module, gamma, name="nabla"):
        super().__init__(module, name)
        self.gamma = [[list(r) for r in block] for block in gamma]
        n = module.rank
        if len(self.gamma) != self.st_algebra.n_derivations or any(
                len(block) != n or any(len(r) != n for r in block)
                for block in self.gamma):
            raise TwistedConnectionError("gamma must be (derivations) x rank x rank")
        self._basis_images = [
            [module.element(block[i]) for i in range(n)] for block in self.gamma]

    def apply(self, a: int, m):
        st = self.st_algebra
        module = self.module
        sig, X = st.sigma(a), st.X(a)
        out = module.zero
        for i, c in enumerate(m.components):
            if c.is_zero():
                continue
            out = out + self._basis_images[a][i].left_mul(sig.apply(c))
            xc = X.apply(c)
            if not xc.is_zero():
                out = out + module.tau_hat_image(a, i).left_mul(xc)
        return out


class MapConnection(Connection):
    """Connection given directly as a function of (index, element)."""

    def __init__(self, module, func, name="nabla"):
        super().__init__(module, name)
        self._func = func

    def apply(self, a: int, m):
        return self._func(a, m)


def connection_from_gamma(module, gamma, name="nabla") -> GammaConnection:
    return GammaConnection(module, gamma, name=name)


def zero_gamma(module):
    z = module.algebra.zero
    n = module.rank
    return [[[z for _ in range(n)] for _ in range(n)]
            for _ in range(module.st_algebra.n_derivations)]


def pushforward_connection(conn: Connection, T: ModuleMap, image: ImageModule,
                           name=None) -> MapConnection:
    """T . nabla on (T(M), {T.sigma_hat, T.tau_hat}); T must be left-linear."""
    if not T.is_left_linear():
        raise TwistedConnectionError("pushforward along a non-linear map")
    return MapConnection(image, lambda a, m: T.apply(conn.apply(a, m)),
                         name=name or f"{T.name}.{conn.name}")


def connection_leibniz_check(conn: Connection, side="left", samples=30, seed=0,
                             name=None) -> CheckRecord:
    """Twisted Leibniz rules for a connection; side in left|right|bimodule."""
    cname = name or f"connection-leibniz[{conn.name},{side}]"
    identity = ("nabla_a(f m) = sigma_a(f) nabla_a(m) + X_a(f) tau_hat_a(m)"
                if side == "left" else
                "nabla_a(m f) = sigma_hat_a(m) X_a(f) + nabla_a(m) tau_a(f)"
                if side == "right" else
                "left and right twisted Leibniz rules")
    st = conn.st_algebra
    module = conn.module
    if side in ("right", "bimodule") and not getattr(module, "has_right_action", False):
        raise TwistedConnectionError(
            f"module {module.name} has no right action; cannot check side={side}")
    rng = random.Random(seed)
    for _ in range(samples):
        f = st.random_element(rng)
        m = module.random_element(rng)
        for a in range(st.n_derivations):
            if side in ("left", "bimodule"):
                lhs = conn.apply(a, m.left_mul(f))
                rhs = conn.apply(a, m).left_mul(st.sigma(a).apply(f)) \
                    + module.tau_hat(a, m).left_mul(st.X(a).apply(f))
                if lhs != rhs:
                    return failed(cname, identity,
                                  {"side": "left", "index": a, "f": f, "m": m,
                                   "lhs": lhs, "rhs": rhs})
            if side in ("right", "bimodule"):
                lhs = conn.apply(a, m.right_mul(f))
                rhs = module.sigma_hat(a, m).right_mul(st.X(a).apply(f)) \
                    + conn.apply(a, m).right_mul(st.tau(a).apply(f))
                if lhs != rhs:
                    return failed(cname, identity,
                                  {"side": "right", "index": a, "f": f, "m": m,
                                   "lhs": lhs, "rhs": rhs})
    return passed(cname, identity)


def star_connection_check(conn: Connection, samples=30, seed=0, name=None) -> CheckRecord:
    """(nabla_{X_a} m)* = nabla_{X_a*} m*; on success the right rule is
    verified as well (it follows for star-bimodules)."""
    cname = name or f"star-connection[{conn.name}]"
    identity = "(nabla_a(m))* = nabla_iota(a)(m*)"
    st = conn.st_algebra
    if st.iota is None:
        return failed(cname, identity, {"reason": "no star structure on the algebra"})
    module = conn.module
    rng = random.Random(seed)
    for _ in range(samples):
        m = module.random_element(rng)
        for a in range(st.n_derivations):
            lhs = conn.apply(a, m).star()
            rhs = conn.apply(st.iota[a], m.star())
            if lhs != rhs:
                return failed(cname, identity,
                              {"index": a, "m": m, "lhs": lhs, "rhs": rhs})
    right = connection_leibniz_check(conn, side="right",
                                     samples=samples, seed=seed + 1)
    if right.failed:
        return failed(cname, identity + "; right rule should follow", right.witness)
    return passed(cname, identity)


# ---------------------------------------------------------------------------
# Curvature and torsion
# ---------------------------------------------------------------------------

def curvature(conn: Connection, L: LieStructure, a: int, b: int, m):
    """nabla_a nabla_b m - R_ab^pq nabla_p nabla_q m - C_ab^p nabla_p m."""
    out = conn.apply(a, conn.apply(b, m))
    for p in range(L.n):
        for q in range(L.n):
            c = L.R[a][b][p][q]
            if not c.is_zero():
                out = out - conn.apply(p, conn.apply(q, m)).scale(c)
    for p in range(L.n):
        c = L.C[a][b][p]
        if not c.is_zero():
            out = out - conn.apply(p, m).scale(c)
    return out


def torsion(conn: Connection, L: LieStructure, anchor, a: int, b: int):
    """nabla_a phi(X_b) - R_ab^pq nabla_p phi(X_q) - C_ab^p phi(X_p)."""
    out = conn.apply(a, anchor[b])
    for p in range(L.n):
        for q in range(L.n):
            c = L.R[a][b][p][q]
            if not c.is_zero():
                out = out - conn.apply(p, anchor[q]).scale(c)
    for p in range(L.n):
        c = L.C[a][b][p]
        if not c.is_zero():
            out = out - anchor[p].scale(c)
    return out


def torsion_free_check(conn, L, anchor, name=None) -> CheckRecord:
    cname = name or f"torsion-free[{conn.name}]"
    identity = "T(X_a, X_b) = 0 for all basis pairs"
    for a in range(L.n):
        for b in range(L.n):
            t = torsion(conn, L, anchor, a, b)
            if not t.is_zero():
                return failed(cname, identity, {"ab": (a, b), "torsion": t})
    return passed(cname, identity)


# ---------------------------------------------------------------------------
# Metric compatibility
# ---------------------------------------------------------------------------

def metric_compat_check(conn: Connection, h, module, mode="random", samples=30,
                        seed=0, name=None, check_invariance=True) -> CheckRecord:
    """X_a(h(m1,m2)) = h(sigma_hat_a m1, nabla_iota(a) m2) + h(nabla_a m1, sigma_hat_iota(a) m2).

    Generator mode checks basis pairs only (sufficient for free modules);
    random mode cross-checks that sufficiency on sampled pairs.
    """
    cname = name or f"metric-compat[{conn.name},{mode}]"
    identity = ("X_a(h(m1,m2)) = h(sigma_hat_a(m1), nabla_iota(a)(m2)) "
                "+ h(nabla_a(m1), sigma_hat_iota(a)(m2))")
    st = conn.st_algebra
    if st.iota is None:
        raise NonInvariantFormError("metric compatibility needs a star structure")
    if check_invariance:
        inv = invariance_check(h, module, samples=10, seed=seed)
        if inv.failed:
            raise NonInvariantFormError(f"form is not invariant: {inv.witness}")
    if mode == "generators":
        pairs = [(e1, e2) for e1 in module.basis_elements()
                 for e2 in module.basis_elements()]
    else:
        rng = random.Random(seed)
        pairs = [(module.random_element(rng), module.random_element(rng))
                 for _ in range(samples)]
    for m1, m2 in pairs:
        for a in range(st.n_derivations):
            b = st.iota[a]
            lhs = st.X(a).apply(h.eval(m1, m2))
            rhs = h.eval(module.sigma_hat(a, m1), conn.apply(b, m2)) \
                + h.eval(conn.apply(a, m1), module.sigma_hat(b, m2))
            if lhs != rhs:
                return failed(cname, identity,
                              {"index": a, "m1": m1, "m2": m2,
                               "lhs": lhs, "rhs": rhs})
    return passed(cname, identity)


def metric_connection_free(module, h: HermitianForm, gamma=None, name="nabla-h"):
    """Metric connection on a free module:
    nabla_a e_i = (X_a(h_ij)/2 + i gamma_a,ij) h_sigma_iota(a)^jk e_k.

    gamma defaults to zero; otherwise gamma[a][i][j] must satisfy
    gamma_a,ij* = gamma_iota(a),ji.
    """
    st = module.st_algebra
    if st.iota is None:
        raise NonInvariantFormError("metric connections need a star structure")
    alg = module.algebra
    field = alg.field
    n = module.rank
    from fractions import Fraction
    half = field.from_fraction(Fraction(1, 2))
    if gamma is not None:
        for a in range(st.n_derivations):
            b = st.iota[a]
            for i in range(n):
                for j in range(n):
                    if gamma[a][i][j].star() != gamma[b][j][i]:
                        raise TwistedConnectionError(
                            f"gamma[{a}][{i}][{j}]* != gamma[{st.iota[a]}][{j}][{i}]")
        imag = field.imag_unit
    inverses = {}
    for a in range(st.n_derivations):
        b = st.iota[a]
        if b not in inverses:
            inverses[b] = form_sigma_inverse(h, module, b)
    table = []
    for a in range(st.n_derivations):
        hinv = inverses[st.iota[a]]
        block = []
        for i in range(n):
            row = [alg.zero for _ in range(n)]
            for j in range(n):
                coeff = st.X(a).apply(h.components[i][j]).scale(half)
                if gamma is not None:
                    coeff = coeff + gamma[a][i][j].scale(imag)
                if coeff.is_zero():
                    continue
                for k in range(n):
                    row[k] = row[k] + coeff * hinv[j][k]
            block.append(row)
        table.append(block)
    return GammaConnection(module, table, name=name)


def orthogonal_projection_metric(conn, h, p: ModuleMap, samples=20, seed=0):
    """p . nabla is metric on (p(M), h|_p(M)) when p is h-orthogonal and
    commutes with the structure maps.  Returns (connection, record)."""
    module = conn.module
    rng = random.Random(seed)
    for _ in range(samples):
        m1 = module.random_element(rng)
        m2 = module.random_element(rng)
        lhs = h.eval(p.apply(m1), m2)
        rhs = h.eval(m1, p.apply(m2))
        if lhs != rhs:
            raise NonOrthogonalProjectionError(
                f"h(p(m1), m2) != h(m1, p(m2)): {lhs} vs {rhs}")
    comm = projective_commutation_check(module, p, samples=samples, seed=seed)
    if comm.failed:
        raise NotAProjectionError(f"projection does not commute with structure maps: {comm.witness}")
    image = ImageModule(module, p)
    pushed = pushforward_connection(conn, p, image)
    rec = metric_compat_check(pushed, h, image, mode="random", samples=samples,
                              seed=seed, check_invariance=False,
                              name=f"metric-compat[{pushed.name},projected]")
    return pushed, rec


# ---------------------------------------------------------------------------
# Torsion-free and Levi-Civita constructions
# ---------------------------------------------------------------------------

def symmetrize_gamma(L: LieStructure, gamma_tilde):
    """gamma_ab^c = gtilde_ab^c + R_ab^pq gtilde_pq^c (R-symmetric by R^2 = id)."""
    n = L.n
    out = []
    for a in range(n):
        row = []
        for b in range(n):
            entries = []
            for c_idx in range(n):
                acc = gamma_tilde[a][b][c_idx]
                for p in range(n):
                    for q in range(n):
                        r = L.R[a][b][p][q]
                        if not r.is_zero():
                            acc = acc + gamma_tilde[p][q][c_idx].scale(r)
                entries.append(acc)
            row.append(entries)
        out.append(row)
    return out


def torsion_free_construct(L: LieStructure, anchor, gamma_tilde, module,
                           name="nabla-tf") -> GammaConnection:
    """Connection with nabla_a phi(X_b) = (C_ab^c / 2 + gamma_ab^c) phi(X_c),
    where gamma is the R-symmetrization of the arbitrary input table.

    The anchor images must form a basis of the (free) module; the basis
    change is solved by row reduction and failure raises AnchorNotBasisError.
    """
    st = module.st_algebra
    alg = module.algebra
    field = alg.field
    n = module.rank
    if len(anchor) != L.n:
        raise AnchorNotBasisError("one anchor image per tangent index required")
    gamma = symmetrize_gamma(L, gamma_tilde)
    from fractions import Fraction
    half = field.from_fraction(Fraction(1, 2))
    table = []
    for a in range(L.n):
        # targets: t_ab = sum_c (C_ab^c/2 + gamma_ab^c) phi(X_c)
        targets = []
        for b in range(L.n):
            t = module.zero
            for c_idx in range(L.n):
                coeff = alg.scalar(L.C[a][b][c_idx] * half) + gamma[a][b][c_idx]
                if not coeff.is_zero():
                    t = t + anchor[c_idx].left_mul(coeff)
            targets.append(t)
        # solve sigma_a(B) Gamma_a = W where B[b][i] = phi(X_b)^i
        sig = st.sigma(a)
        S = [[sig.apply(anchor[b].components[i]) for i in range(n)] for b in range(L.n)]
        W = []
        for b in range(L.n):
            w = targets[b]
            for i in range(n):
                c = anchor[b].components[i]
                xc = st.X(a).apply(c)
                if not xc.is_zero():
                    w = w - module.tau_hat_image(a, i).left_mul(xc)
            W.append(w)
        gamma_a = _solve_left(S, [w.components for w in W], alg)
        if gamma_a is None:
            raise AnchorNotBasisError(
                "anchor images do not form a basis (coefficient matrix not invertible)")
        table.append(gamma_a)
    return GammaConnection(module, table, name=name)


def _solve_left(S, W, alg):
    """Solve S G = W for G over the algebra by row reduction (unit pivots)."""
    n = len(S)
    m = len(W[0])
    work = [list(S[r]) + list(W[r]) for r in range(n)]
    for col in range(n):
        piv = None
        inv = None
        for r in range(col, n):
            inv = work[r][col].try_invert()
            if inv is not None:
                piv = r
                break
        if piv is None:
            return None
        work[col], work[piv] = work[piv], work[col]
        work[col] = [inv * e for e in work[col]]
        for r in range(n):
            if r == col:
                continue
            c = work[r][col]
            if c.is_zero():
                continue
            work[r] = [e - c * p for e, p in zip(work[r], work[col])]
    return [row[n:] for row in work]


def levi_civita_check(conn: Connection, L: LieStructure, anchor, h, module,
                      samples=30, seed=0, name=None) -> CheckRecord:
    """Torsion-free w.r.t. the anchor AND compatible with the invariant form."""
    cname = name or f"levi-civita[{conn.name}]"
    identity = "T(X_a,X_b) = 0 for all pairs and nabla is compatible with h"
    t = torsion_free_check(conn, L, anchor, name=cname + ":torsion")
    if t.failed:
        return failed(cname, identity, dict(t.witness, failed_part="torsion"))
    gen = metric_compat_check(conn, h, module, mode="generators", seed=seed,
                              name=cname + ":metric-gen")
    if gen.failed:
        return failed(cname, identity, dict(gen.witness, failed_part="metric-generators"))
    rnd = metric_compat_check(conn, h, module, mode="random", samples=samples,
                              seed=seed, name=cname + ":metric-random",
                              check_invariance=False)
    if rnd.failed:
        return failed(cname, identity, dict(rnd.witness, failed_part="metric-random"))
    return passed(cname, identity)
