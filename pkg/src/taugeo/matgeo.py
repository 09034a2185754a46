"""Inner-twisted geometry on matrix algebras: projector modules, the
closed-form curvature, the doubled star structure, regular uniqueness,
and the Levi-Civita constructions.

Twist data is a commuting family of invertible matrices U_a with
sigma_a = Ad(U_a) and X_a = id - sigma_a.  The rank-one projector
p = v0 v0-dagger realizes the column module, with phi(v) = v v0-dagger
the isomorphism onto M p and phi^{-1}(A) = A v0.
"""
from __future__ import annotations

import random

from .algebra import SigmaTauAlgebra
from .connections import (
    LieStructure, MapConnection, levi_civita_check, pushforward_connection,
)
from .matrices import (
    Matrix, MatrixAlgebra, MatrixDerivation, MatrixEndo, MatrixError,
    Vector, build_matrix_algebra,
)
from .reports import failed, passed
from .smodules import HermitianForm, ImageModule, ModuleMap, SigmaModule


class MatrixGeometryError(Exception):
    pass


class NotRegularError(MatrixGeometryError):
    pass


class EigenvectorError(MatrixGeometryError):
    pass


class MatrixGeometry:
    """Twist matrices plus optional rank-one projector and eigen-data."""

    def __init__(self, st: SigmaTauAlgebra, v0: Vector | None = None,
                 e_list=None):
        self.st = st
        self.alg: MatrixAlgebra = st.presentation
        self.twists = list(st.twists)
        self.n = len(self.twists)
        self.v0 = v0
        self.p_matrix = None
        self.mu = None
        self.lam = None
        self.e_list = list(e_list) if e_list is not None else None
        if v0 is not None:
            if v0.inner(v0) != self.alg.field.one:
                raise EigenvectorError("projector vector must have |v0| = 1")
            self.p_matrix = v0.outer(v0)
            self.mu = [self._eigenvalue(u, v0, "twist") for u in self.twists]
        if self.e_list is not None and v0 is not None:
            self.lam = [self._eigenvalue(e, v0, "anchor") for e in self.e_list]

    def _eigenvalue(self, m: Matrix, v: Vector, what: str):
        image = m.apply_vector(v)
        lam = None
        for a, b in zip(image.entries, v.entries):
            if not b.is_zero():
                lam = a * b.invert()
                break
        if lam is None or image != v.scale(lam):
            raise EigenvectorError(f"v0 is not an eigenvector of a {what} matrix")
        return lam


def free_rank_one_module(st: SigmaTauAlgebra, name=None) -> SigmaModule:
    """The algebra itself as a free module with basis {1}."""
    return SigmaModule(st, 1, basis_names=["e1"], name=name or f"{st.name}-free1")


def projector_map(module: SigmaModule, p: Matrix, name="p") -> ModuleMap:
    """Right multiplication by p as a left module endomorphism."""
    return ModuleMap(module, lambda m: module.element(
        [c * p for c in m.components]), name=name)


def projected_module(st: SigmaTauAlgebra, p: Matrix) -> ImageModule:
    amb = free_rank_one_module(st)
    return ImageModule(amb, projector_map(amb, p), name=f"{st.name}.p")


def projective_connection(G: MatrixGeometry, gamma_list, name="nabla-p"):
    """nabla_{X_a} A = A - U_a A U_a^-1 Gamma_a p on M p (p = 1 when no
    projector is set), via pushforward of the free connection with
    nabla_{X_a} 1 = 1 - Gamma_a."""
    amb = free_rank_one_module(G.st)
    p = G.p_matrix if G.p_matrix is not None else G.alg.one
    uinv = [u.try_invert() for u in G.twists]

    def free_nabla(a, m):
        c = m.components[0]
        sig = G.st.sigma(a).apply(c)
        return amb.element([c - sig * gamma_list[a] * p])

    free_conn = MapConnection(amb, free_nabla, name=name + "-ambient")
    T = projector_map(amb, p)
    image = ImageModule(amb, T, name=f"{G.st.name}.p")
    conn = pushforward_connection(free_conn, T, image, name=name)
    conn.gamma_list = list(gamma_list)
    conn.vector_coefficients = None
    if G.v0 is not None:
        conn.vector_coefficients = [
            G.v0.inner((uinv[a] * gamma_list[a]).apply_vector(G.v0))
            for a in range(G.n)]
    return conn


def curvature_closed_form(G: MatrixGeometry, gamma_list, a: int, b: int,
                          A: Matrix) -> Matrix:
    """U_a U_b A [U_b^-1 Gamma_b p, U_a^-1 Gamma_a p]."""
    p = G.p_matrix if G.p_matrix is not None else G.alg.one
    ua, ub = G.twists[a], G.twists[b]
    za = ua.try_invert() * gamma_list[a] * p
    zb = ub.try_invert() * gamma_list[b] * p
    return ua * ub * A * (zb * za - za * zb)


def torsion_free_gamma_choice(G: MatrixGeometry, e_list=None):
    """The ansatz Gamma_a = 1 - E_a with [E_a,E_b] = [E_a,U_b] = 0.

    Returns (gamma_list, anchor images E_a p) ready for the projective
    connection; commutation violations raise.
    """
    e_list = list(e_list) if e_list is not None else (
        list(G.e_list) if G.e_list is not None else list(G.twists))
    for i, e in enumerate(e_list):
        for f in e_list[i + 1:]:
            if not e.commutes_with(f):
                raise MatrixGeometryError("anchor matrices do not commute")
        for u in G.twists:
            if not e.commutes_with(u):
                raise MatrixGeometryError("anchor matrix does not commute with a twist")
    one = G.alg.one
    gamma_list = [one - e for e in e_list]
    return gamma_list, e_list


def flip_lie(st: SigmaTauAlgebra) -> LieStructure:
    return LieStructure.flip(st)


# ---------------------------------------------------------------------------
# Doubled star structure
# ---------------------------------------------------------------------------

def doubled_star_algebra(st: SigmaTauAlgebra) -> SigmaTauAlgebra:
    """2n derivations X~_k (each X_a listed with both twists) and
    iota(k) = k +- n; requires unitary twists."""
    alg = st.presentation
    twists = st.twists
    n = len(twists)
    for u in twists:
        if u * u.star() != alg.one:
            raise MatrixError("doubling requires unitary twist matrices")
    ident = MatrixEndo.identity(alg)
    derivations = []
    for a, u in enumerate(twists):
        base = st.X(a)
        derivations.append(base)
    for a, u in enumerate(twists):
        base = st.X(a)
        sigma = base.sigma
        flipped = MatrixDerivation(ident, sigma, base.apply, name=f"{base.name}'")
        derivations.append(flipped)
    iota = tuple(list(range(n, 2 * n)) + list(range(n)))
    doubled = SigmaTauAlgebra(alg, derivations, iota=iota, name=f"{st.name}*")
    doubled.twists = twists + twists
    doubled.base_count = n
    return doubled


# ---------------------------------------------------------------------------
# Regularity and the unique connection
# ---------------------------------------------------------------------------

def regularity_check(st: SigmaTauAlgebra, seed=0, budget=100, name=None):
    """Search det(X_a(A)) != 0 over elementary then seeded random matrices.

    Returns (record, witnesses); witnesses[a] is a matrix A with X_a(A)
    invertible when found.
    """
    alg = st.presentation
    cname = name or f"regularity[{st.name}]"
    identity = "for each a there is A with det(X_a(A)) != 0"
    witnesses = {}
    n_der = st.n_derivations
    for a in range(n_der):
        X = st.X(a)
        found = None
        for cand in alg.generator_elements():
            if not X.apply(cand).det().is_zero():
                found = cand
                break
        if found is None:
            rng = random.Random(seed + a)
            for _ in range(budget):
                cand = alg.random_element(rng)
                if not X.apply(cand).det().is_zero():
                    found = cand
                    break
        if found is None:
            return failed(cname, identity,
                          {"index": a, "reason": "no witness within budget"}), witnesses
        witnesses[a] = found
    return passed(cname, identity), witnesses


def unique_regular_connection(st_doubled: SigmaTauAlgebra, seed=0):
    """The unique connection nabla = X~ on the doubled free module.

    Requires regularity; returns (connection, module, record) where the
    record verifies both product rules.
    """
    base = st_doubled.base_count
    plain = SigmaTauAlgebra(st_doubled.presentation,
                            st_doubled.derivations[:base], name="tmp")
    plain.twists = st_doubled.twists[:base]
    reg, witnesses = regularity_check(plain, seed=seed)
    if reg.failed:
        raise NotRegularError(f"not regular: {reg.witness}")
    module = free_rank_one_module(st_doubled)
    conn = MapConnection(module, lambda k, m: module.element(
        [st_doubled.X(k).apply(m.components[0])]), name="nabla-unique")
    conn.regularity_witnesses = witnesses
    from .connections import connection_leibniz_check
    rec = connection_leibniz_check(conn, side="bimodule", samples=25, seed=seed,
                                   name=f"product-rules[{st_doubled.name}]")
    return conn, module, rec


def uniqueness_violation_witness(st_doubled: SigmaTauAlgebra, gamma_tilde,
                                 witnesses):
    """Witness that a nonzero candidate table breaks the second product rule.

    For nabla' with nabla'_{X_a} 1 = gtilde_a (extended by the left rule),
    the right rule at (B, 1) fails by X_a(B) gtilde_a; the regularity
    witness B_a makes that nonzero whenever gtilde_a != 0.
    """
    base = st_doubled.base_count
    for a in range(base):
        g = gamma_tilde[a]
        if g.is_zero():
            continue
        B = witnesses[a]
        X = st_doubled.X(a)
        defect = X.apply(B) * g
        if defect.is_zero():
            # regularity witness guarantees invertibility, so this cannot happen
            raise NotRegularError("regularity witness failed to separate")
        sigma = st_doubled.X(a).sigma
        left_value = sigma.apply(B) * g + X.apply(B)
        right_value = B * g + X.apply(B)
        return {
            "index": a, "B": B, "gamma_tilde": g,
            "left-rule nabla'(B*1)": left_value,
            "right-rule nabla'(B*1)": right_value,
            "defect X_a(B)*gamma_tilde": defect,
        }
    return None


# ---------------------------------------------------------------------------
# Vector (column) module
# ---------------------------------------------------------------------------

class VectorModule:
    """Column vectors as a module over the doubled matrix algebra.

    Structure maps are the transports of the projected module through
    phi(v) = v v0-dagger: sigma_hat_k(v) = mu_k^-1 U_k v for k < n, the
    identity for the flipped copies, and tau_hat the other way around.
    """

    def __init__(self, st_doubled: SigmaTauAlgebra, G: MatrixGeometry, name=""):
        if G.v0 is None or G.mu is None:
            raise EigenvectorError("vector module needs projector eigen-data")
        self.st_algebra = st_doubled
        self.algebra = st_doubled.presentation
        self.G = G
        self.rank = self.algebra.n
        self.basis_names = [f"v{k+1}" for k in range(self.rank)]
        self.name = name or f"C^{self.algebra.n}"
        n = G.n
        self._sigma_maps = []
        for k in range(2 * n):
            if k < n:
                u, mu = G.twists[k], G.mu[k]
                self._sigma_maps.append(self._scaled_action(u, mu))
            else:
                self._sigma_maps.append(lambda v: v)
        self._tau_maps = []
        for k in range(2 * n):
            if k < n:
                self._tau_maps.append(lambda v: v)
            else:
                u, mu = G.twists[k - n], G.mu[k - n]
                self._tau_maps.append(self._scaled_action(u, mu))

    @staticmethod
    def _scaled_action(u: Matrix, mu):
        mu_inv = mu.invert()
        return lambda v: u.apply_vector(v).scale(mu_inv)

    def basis_elements(self):
        return [self.algebra.basis_vector(k) for k in range(self.rank)]

    @property
    def zero(self):
        return Vector(self.algebra, [self.algebra.field.zero] * self.rank)

    def random_element(self, rng, max_degree=None, max_terms=None):
        return self.algebra.random_vector(rng)

    def sigma_hat(self, k, v):
        return self._sigma_maps[k](v)

    def tau_hat(self, k, v):
        return self._tau_maps[k](v)

    @property
    def has_right_action(self):
        return False

    @property
    def has_star(self):
        return False


class VectorForm:
    """h(u, v) = hhat0 . u v-dagger, valued in the matrix algebra."""

    def __init__(self, module: VectorModule, hhat0):
        self.module = module
        self.hhat0 = hhat0

    def eval(self, u: Vector, v: Vector) -> Matrix:
        return u.outer(v).scale(self.hhat0)

    def __call__(self, u, v):
        return self.eval(u, v)


def vector_connection(module: VectorModule, name="nabla-v") -> MapConnection:
    """nabla_{X~_k} v = (1 - conj(mu_a) U_a) v with a = k mod n."""
    G = module.G
    n = G.n

    def func(k, v):
        a = k % n
        u, mu = G.twists[a], G.mu[a]
        return v - u.apply_vector(v).scale(mu.conjugate())

    return MapConnection(module, func, name=name)


# ---------------------------------------------------------------------------
# Levi-Civita constructions
# ---------------------------------------------------------------------------

def matrix_levi_civita(G: MatrixGeometry, h0=None, mode="full", hhat0=None,
                       samples=25, seed=0):
    """Levi-Civita connections over the matrix algebra.

    full mode: nabla = X~ on the free module, h(A,B) = A h0 B-dagger,
    anchor E_a (defaults to U_a); needs h0 hermitian and [U_a, h0] = 0.
    vector mode: nabla v = (1 - conj(mu_a) U_a) v on columns with
    h(u,v) = hhat0 u v-dagger and anchor lambda_a v0.
    Returns (connection, record).
    """
    st2 = doubled_star_algebra(G.st)
    L = LieStructure.flip(st2)
    if mode == "full":
        alg = G.alg
        h0 = h0 if h0 is not None else alg.one
        if h0.star() != h0:
            raise MatrixGeometryError("h0 must be hermitian")
        for a, u in enumerate(G.twists):
            if not u.commutes_with(h0):
                raise MatrixGeometryError(f"[U_{a+1}, h0] != 0: invariance fails")
        e_list = G.e_list if G.e_list is not None else list(G.twists)
        for e in e_list:
            for u in G.twists:
                if not e.commutes_with(u):
                    raise MatrixGeometryError("[E_a, U_b] != 0: torsion ansatz fails")
        conn, module, rec = unique_regular_connection(st2, seed=seed)
        if rec.failed:
            return conn, rec
        h = HermitianForm(module, [[h0]])
        anchor = [module.element([e_list[k % G.n]]) for k in range(2 * G.n)]
        return conn, levi_civita_check(conn, L, anchor, h, module,
                                       samples=samples, seed=seed,
                                       name=f"levi-civita[{G.st.name},full]")
    if mode == "vector":
        if G.v0 is None:
            raise EigenvectorError("vector mode needs the projector vector")
        module = VectorModule(st2, G)
        hhat0 = hhat0 if hhat0 is not None else G.alg.field.one
        h = VectorForm(module, hhat0)
        conn = vector_connection(module)
        lam = G.lam if G.lam is not None else [G.alg.field.one] * G.n
        anchor = [G.v0.scale(lam[k % G.n]) for k in range(2 * G.n)]
        return conn, levi_civita_check(conn, L, anchor, h, module,
                                       samples=samples, seed=seed,
                                       name=f"levi-civita[{G.st.name},vector]")
    raise ValueError(f"unknown mode {mode!r}")


def build_geometry(u_list, v0=None, e_list=None, check_unitary=False) -> MatrixGeometry:
    st = build_matrix_algebra(u_list, check_unitary=check_unitary)
    return MatrixGeometry(st, v0=v0, e_list=e_list)
