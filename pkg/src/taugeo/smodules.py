"""Modules over (sigma,tau)-algebras: free modules with chosen structure
maps, images under module endomorphisms (projective modules as ambient
free module + projection), hermitian forms, and the law checkers.

Module elements are coefficient tuples; the per-index maps act as
sigma_hat_a(m) = sigma_a(m^i) . sigma_hat_a(e_i).  A twisted right action
and twisted star (used by the 1-form module over the quantum sphere) are
supplied as per-basis-index coefficient maps.
"""
from __future__ import annotations

import random

from .algebra import SigmaTauAlgebra
from .reports import CheckRecord, failed, passed


class ModuleError(Exception):
    pass


class RankMismatchError(ModuleError):
    pass


class NotAProjectionError(ModuleError):
    pass


class NonLinearMapError(ModuleError):
    pass


class NonInvertibleFormError(ModuleError):
    pass


class ModuleElement:
    """Coefficient tuple m = m^i e_i over the module's algebra."""

    __slots__ = ("module", "components")

    def __init__(self, module, components):
        self.module = module
        self.components = tuple(components)
        if len(self.components) != module.rank:
            raise RankMismatchError(
                f"expected {module.rank} components, got {len(self.components)}")

    def _check(self, other):
        if not isinstance(other, ModuleElement) or other.module is not self.module:
            raise ModuleError("elements of different modules")

    def __add__(self, other):
        self._check(other)
        return ModuleElement(self.module, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        self._check(other)
        return ModuleElement(self.module, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return ModuleElement(self.module, [-a for a in self.components])

    def scale(self, c):
        """Multiply by a Scalar (complex-linear structure)."""
        return ModuleElement(self.module, [a.scale(c) for a in self.components])

    def left_mul(self, f):
        return ModuleElement(self.module, [f * a for a in self.components])

    def right_mul(self, f):
        return self.module.right_mul(self, f)

    def star(self):
        return self.module.star(self)

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.components)

    def __eq__(self, other):
        if not isinstance(other, ModuleElement) or other.module is not self.module:
            return NotImplemented
        return all(a == b for a, b in zip(self.components, other.components))

    __hash__ = None

    def __str__(self):
        names = self.module.basis_names
        parts = []
        for a, name in zip(self.components, names):
            if a.is_zero():
                continue
            parts.append(f"({a})*{name}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"<{self.module.name}: {self}>"


class SigmaModule:
    """Free module of finite rank with per-derivation structure maps."""

    def __init__(self, st_algebra: SigmaTauAlgebra, rank: int,
                 sigma_images=None, tau_images=None, right_twists=None,
                 star_twists=None, basis_names=None, name=""):
        self.st_algebra = st_algebra
        self.algebra = st_algebra.presentation
        self.rank = rank
        self.basis_names = list(basis_names) if basis_names else [f"e{k+1}" for k in range(rank)]
        self.name = name or f"{st_algebra.name}^{rank}"
        n_der = st_algebra.n_derivations
        self._sigma_images = self._normalize_images(sigma_images, n_der)
        self._tau_images = self._normalize_images(tau_images, n_der)
        # right action: m^i e_i . f = (m^i . twist_i(f)) e_i
        self.right_twists = right_twists
        # star: (m^i e_i)* = star_twist_i(m^i) e_i  (map includes conjugation)
        self.star_twists = star_twists

    def _normalize_images(self, images, n_der):
        if images is None:
            return None
        out = []
        for a in range(n_der):
            row = list(images[a])
            if len(row) != self.rank:
                raise RankMismatchError("one image per basis element required")
            out.append(row)
        return out

    # -- constructors --------------------------------------------------------

    def element(self, components) -> ModuleElement:
        return ModuleElement(self, components)

    def basis(self, i: int) -> ModuleElement:
        one, zero = self.algebra.one, self.algebra.zero
        return ModuleElement(self, [one if k == i else zero for k in range(self.rank)])

    def basis_elements(self):
        return [self.basis(i) for i in range(self.rank)]

    @property
    def zero(self) -> ModuleElement:
        z = self.algebra.zero
        return ModuleElement(self, [z] * self.rank)

    def random_element(self, rng: random.Random, max_degree=2, max_terms=2) -> ModuleElement:
        return ModuleElement(self, [
            self.algebra.random_element(rng, max_degree, max_terms)
            for _ in range(self.rank)])

    # -- structure maps --------------------------------------------------------

    def sigma_hat(self, a: int, m: ModuleElement) -> ModuleElement:
        sig = self.st_algebra.sigma(a)
        if self._sigma_images is None:
            return ModuleElement(self, [sig.apply(c) for c in m.components])
        out = self.zero
        for i, c in enumerate(m.components):
            if not c.is_zero():
                out = out + self._sigma_images[a][i].left_mul(sig.apply(c))
        return out

    def tau_hat(self, a: int, m: ModuleElement) -> ModuleElement:
        tau = self.st_algebra.tau(a)
        if self._tau_images is None:
            return ModuleElement(self, [tau.apply(c) for c in m.components])
        out = self.zero
        for i, c in enumerate(m.components):
            if not c.is_zero():
                out = out + self._tau_images[a][i].left_mul(tau.apply(c))
        return out

    def sigma_hat_image(self, a: int, i: int) -> ModuleElement:
        if self._sigma_images is None:
            return self.basis(i)
        return self._sigma_images[a][i]

    def tau_hat_image(self, a: int, i: int) -> ModuleElement:
        if self._tau_images is None:
            return self.basis(i)
        return self._tau_images[a][i]

    @property
    def has_default_images(self) -> bool:
        return self._sigma_images is None and self._tau_images is None

    # -- bimodule / star structure ----------------------------------------------

    @property
    def has_right_action(self) -> bool:
        return True

    def right_mul(self, m: ModuleElement, f) -> ModuleElement:
        if self.right_twists is None:
            return ModuleElement(self, [c * f for c in m.components])
        return ModuleElement(self, [c * self.right_twists[i](f)
                                    for i, c in enumerate(m.components)])

    @property
    def has_star(self) -> bool:
        return self.star_twists is not None or getattr(self.algebra, "has_star", False) \
            or getattr(self.algebra, "star_map", None) is not None

    def star(self, m: ModuleElement) -> ModuleElement:
        if self.star_twists is None:
            return ModuleElement(self, [c.star() for c in m.components])
        return ModuleElement(self, [self.star_twists[i](c)
                                    for i, c in enumerate(m.components)])

    def __repr__(self):
        return f"SigmaModule({self.name}, rank={self.rank})"


class ModuleMap:
    """Module endomorphism; left-linearity is checkable, not assumed."""

    def __init__(self, module, func, name="T"):
        self.module = module
        self._func = func
        self.name = name

    def apply(self, m: ModuleElement) -> ModuleElement:
        return self._func(m)

    def __call__(self, m):
        return self._func(m)

    @staticmethod
    def identity(module) -> ModuleMap:
        return ModuleMap(module, lambda m: m, name="id")

    @staticmethod
    def from_matrix(module, rows, name="T") -> ModuleMap:
        """T(e_i) = rows[i][j] e_j, extended left-linearly."""
        def func(m):
            out = module.zero
            for i, c in enumerate(m.components):
                if c.is_zero():
                    continue
                out = out + ModuleElement(module, [c * rows[i][j]
                                                   for j in range(module.rank)])
            return out
        T = ModuleMap(module, func, name=name)
        T.rows = [list(r) for r in rows]
        return T

    def is_left_linear(self, samples=20, seed=0) -> bool:
        rng = random.Random(seed)
        mod = self.module
        for _ in range(samples):
            f = mod.st_algebra.random_element(rng)
            m = mod.random_element(rng)
            if self.apply(m.left_mul(f)) != self.apply(m).left_mul(f):
                return False
            m2 = mod.random_element(rng)
            if self.apply(m + m2) != self.apply(m) + self.apply(m2):
                return False
        return True

    def is_projection(self, samples=10, seed=0) -> bool:
        rng = random.Random(seed)
        for _ in range(samples):
            m = self.module.random_element(rng)
            if self.apply(self.apply(m)) != self.apply(m):
                return False
        return True


class ImageModule:
    """The module T(M) with maps T . sigma_hat and T . tau_hat."""

    def __init__(self, ambient, T: ModuleMap, name=""):
        self.ambient = ambient
        self.T = T
        self.st_algebra = ambient.st_algebra
        self.algebra = ambient.algebra
        self.rank = ambient.rank
        self.basis_names = ambient.basis_names
        self.name = name or f"{T.name}({ambient.name})"

    def element(self, components) -> ModuleElement:
        return self.T.apply(self.ambient.element(components))

    def basis_elements(self):
        return [self.T.apply(e) for e in self.ambient.basis_elements()]

    @property
    def zero(self):
        return self.ambient.zero

    def random_element(self, rng, max_degree=2, max_terms=2):
        return self.T.apply(self.ambient.random_element(rng, max_degree, max_terms))

    def sigma_hat(self, a, m):
        return self.T.apply(self.ambient.sigma_hat(a, m))

    def tau_hat(self, a, m):
        return self.T.apply(self.ambient.tau_hat(a, m))

    @property
    def has_right_action(self) -> bool:
        return False

    @property
    def has_star(self) -> bool:
        return False

    def __repr__(self):
        return f"ImageModule({self.name})"


def free_sigma_module(st_algebra, rank, sigma_images=None, tau_images=None,
                      **kw) -> SigmaModule:
    """Free module; default structure maps act componentwise."""
    return SigmaModule(st_algebra, rank, sigma_images, tau_images, **kw)


def image_sigma_module(module, T: ModuleMap, samples=20, seed=0) -> ImageModule:
    """The Sigma-module structure on T(M); T must be left A-linear."""
    if not T.is_left_linear(samples=samples, seed=seed):
        return_witness = "T is not a left module map"
        raise NonLinearMapError(return_witness)
    return ImageModule(module, T)


# ---------------------------------------------------------------------------
# Law checkers
# ---------------------------------------------------------------------------

def module_law_check(module, samples=50, seed=0, name=None) -> CheckRecord:
    """Left (and, when present, right/bimodule and star) module laws."""
    cname = name or f"module-laws[{module.name}]"
    identity = "sigma_hat_a(f m g) = sigma_a(f) sigma_hat_a(m) sigma_a(g), same for tau_hat"
    rng = random.Random(seed)
    st = module.st_algebra
    right = getattr(module, "has_right_action", False)
    starred = getattr(module, "has_star", False) and st.iota is not None
    for _ in range(samples):
        f = st.random_element(rng)
        g = st.random_element(rng)
        m = module.random_element(rng)
        for a in range(st.n_derivations):
            sig, tau = st.sigma(a), st.tau(a)
            lhs = module.sigma_hat(a, m.left_mul(f))
            rhs = module.sigma_hat(a, m).left_mul(sig.apply(f))
            if lhs != rhs:
                return failed(cname, identity,
                              {"index": a, "f": f, "m": m, "lhs": lhs, "rhs": rhs})
            lhs = module.tau_hat(a, m.left_mul(f))
            rhs = module.tau_hat(a, m).left_mul(tau.apply(f))
            if lhs != rhs:
                return failed(cname, identity,
                              {"index": a, "f": f, "m": m, "lhs": lhs, "rhs": rhs})
            if right:
                lhs = module.sigma_hat(a, m.right_mul(g))
                rhs = module.sigma_hat(a, m).right_mul(sig.apply(g))
                if lhs != rhs:
                    return failed(cname, identity,
                                  {"index": a, "g": g, "m": m, "lhs": lhs, "rhs": rhs})
                lhs = module.tau_hat(a, m.right_mul(g))
                rhs = module.tau_hat(a, m).right_mul(tau.apply(g))
                if lhs != rhs:
                    return failed(cname, identity,
                                  {"index": a, "g": g, "m": m, "lhs": lhs, "rhs": rhs})
        if right and starred:
            # (f m g)* = g* m* f*
            lhs = m.left_mul(f).right_mul(g).star()
            rhs = m.star().left_mul(g.star()).right_mul(f.star())
            if lhs != rhs:
                return failed(cname, "(f m g)* = g* m* f*",
                              {"f": f, "g": g, "m": m, "lhs": lhs, "rhs": rhs})
            if m.star().star() != m:
                return failed(cname, "(m*)* = m", {"m": m})
        if starred:
            # sigma_hat_iota(a) = tau_hat_a* as maps
            for a in range(st.n_derivations):
                b = st.iota[a]
                lhs = module.sigma_hat(b, m)
                rhs = module.tau_hat(a, m.star()).star()
                if lhs != rhs:
                    return failed(
                        cname, "sigma_hat_iota(a)(m) = (tau_hat_a(m*))*",
                        {"index": a, "m": m, "lhs": lhs, "rhs": rhs})
    return passed(cname, identity)


def projective_commutation_check(module, p: ModuleMap, samples=30, seed=0,
                                 name=None) -> CheckRecord:
    """[sigma_hat_a, p] = [tau_hat_a, p] = 0 on random elements; p^2 = p required."""
    cname = name or f"projection-commutation[{module.name}]"
    identity = "[sigma_hat_a, p] = [tau_hat_a, p] = 0"
    if not p.is_projection(seed=seed):
        raise NotAProjectionError("p^2 != p")
    rng = random.Random(seed)
    st = module.st_algebra
    for _ in range(samples):
        m = module.random_element(rng)
        for a in range(st.n_derivations):
            lhs = module.sigma_hat(a, p.apply(m))
            rhs = p.apply(module.sigma_hat(a, m))
            if lhs != rhs:
                return failed(cname, identity, {"index": a, "m": m,
                                                "sigma_hat.p": lhs, "p.sigma_hat": rhs})
            lhs = module.tau_hat(a, p.apply(m))
            rhs = p.apply(module.tau_hat(a, m))
            if lhs != rhs:
                return failed(cname, identity, {"index": a, "m": m,
                                                "tau_hat.p": lhs, "p.tau_hat": rhs})
    return passed(cname, identity)


# ---------------------------------------------------------------------------
# Hermitian forms
# ---------------------------------------------------------------------------

class HermitianForm:
    """h(m1, m2) = m1^i h_ij (m2^j)* with h_ij* = h_ji."""

    def __init__(self, module, components):
        self.module = module
        self.components = [list(row) for row in components]
        n = module.rank
        if len(self.components) != n or any(len(r) != n for r in self.components):
            raise RankMismatchError("form components must be rank x rank")
        for i in range(n):
            for j in range(n):
                if self.components[i][j].star() != self.components[j][i]:
                    raise ModuleError(f"h[{i}][{j}]* != h[{j}][{i}]")

    def eval(self, m1: ModuleElement, m2: ModuleElement):
        if len(m1.components) != len(m2.components):
            raise RankMismatchError("rank mismatch in form evaluation")
        alg = self.module.algebra
        acc = alg.zero
        for i, a in enumerate(m1.components):
            if a.is_zero():
                continue
            for j, b in enumerate(m2.components):
                if b.is_zero():
                    continue
                acc = acc + a * self.components[i][j] * b.star()
        return acc

    def __call__(self, m1, m2):
        return self.eval(m1, m2)


def hermitian_eval(h: HermitianForm, m1, m2):
    return h.eval(m1, m2)


def hermitian_axiom_check(h: HermitianForm, samples=30, seed=0, name=None) -> CheckRecord:
    """Left linearity over the algebra and h(m1,m2)* = h(m2,m1)."""
    module = h.module
    cname = name or f"hermitian-axioms[{module.name}]"
    identity = "h(f m1, m2) = f h(m1, m2); h(m1, m2)* = h(m2, m1); h(m,m)* = h(m,m)"
    rng = random.Random(seed)
    st = module.st_algebra
    for _ in range(samples):
        f = st.random_element(rng)
        m1 = module.random_element(rng)
        m2 = module.random_element(rng)
        if h.eval(m1.left_mul(f), m2) != f * h.eval(m1, m2):
            return failed(cname, identity, {"f": f, "m1": m1, "m2": m2})
        if h.eval(m1, m2).star() != h.eval(m2, m1):
            return failed(cname, identity, {"m1": m1, "m2": m2})
        hmm = h.eval(m1, m1)
        if hmm.star() != hmm:
            return failed(cname, identity, {"m1": m1, "h(m,m)": hmm})
        m3 = module.random_element(rng)
        if h.eval(m1 + m2, m3) != h.eval(m1, m3) + h.eval(m2, m3):
            return failed(cname, identity, {"m1": m1, "m2": m2, "m3": m3})
    return passed(cname, identity)


def invariance_check(h: HermitianForm, module, samples=30, seed=0, name=None) -> CheckRecord:
    """sigma_a(h(m1,m2)) = h(sigma_hat_a m1, tau_hat_iota(a) m2) and the tau twin."""
    cname = name or f"form-invariance[{module.name}]"
    identity = ("sigma_a(h(m1,m2)) = h(sigma_hat_a(m1), tau_hat_iota(a)(m2)); "
                "tau_a(h(m1,m2)) = h(tau_hat_a(m1), sigma_hat_iota(a)(m2))")
    st = module.st_algebra
    if st.iota is None:
        raise ModuleError("invariance needs a star structure (iota) on the algebra")
    rng = random.Random(seed)
    pairs = [(e1, e2) for e1 in module.basis_elements() for e2 in module.basis_elements()]
    for _ in range(samples):
        pairs.append((module.random_element(rng), module.random_element(rng)))
    for m1, m2 in pairs:
        base = h.eval(m1, m2)
        for a in range(st.n_derivations):
            b = st.iota[a]
            lhs = st.sigma(a).apply(base)
            rhs = h.eval(module.sigma_hat(a, m1), module.tau_hat(b, m2))
            if lhs != rhs:
                return failed(cname, identity,
                              {"index": a, "m1": m1, "m2": m2, "lhs": lhs, "rhs": rhs})
            lhs = st.tau(a).apply(base)
            rhs = h.eval(module.tau_hat(a, m1), module.sigma_hat(b, m2))
            if lhs != rhs:
                return failed(cname, identity,
                              {"index": a, "m1": m1, "m2": m2, "lhs": lhs, "rhs": rhs})
    if getattr(module, "has_default_images", False):
        # componentwise characterization for the default free structure
        for i in range(module.rank):
            for j in range(module.rank):
                hij = h.components[i][j]
                for a in range(st.n_derivations):
                    if st.sigma(a).apply(hij) != hij or st.tau(a).apply(hij) != hij:
                        return failed(cname, "sigma_a(h_ij) = h_ij = tau_a(h_ij)",
                                      {"i": i, "j": j, "index": a, "h_ij": hij})
    return passed(cname, identity)


def form_sigma_inverse(h: HermitianForm, module, a: int):
    """Components g^ij with g^ij h(e_j, sigma_hat_a(e_k)) = delta^i_k 1.

    Computed by row reduction with invertible pivots; the two-sided
    identity is verified before returning.  Raises NonInvertibleFormError
    with the blocking entry otherwise.
    """
    n = module.rank
    alg = module.algebra
    basis = module.basis_elements()
    G = [[h.eval(basis[j], module.sigma_hat(a, basis[k])) for k in range(n)]
         for j in range(n)]
    left, bad_col = _left_inverse(G, alg)
    if left is None:
        raise NonInvertibleFormError(
            f"h(e_j, sigma_hat_{a}(e_k)) has no left inverse over the algebra: "
            f"no invertible pivot in column {bad_col} after elimination")
    # two-sided verification
    for i in range(n):
        for k in range(n):
            acc = alg.zero
            bcc = alg.zero
            for j in range(n):
                acc = acc + left[i][j] * G[j][k]
                bcc = bcc + G[i][j] * left[j][k]
            want = alg.one if i == k else alg.zero
            if acc != want or bcc != want:
                raise NonInvertibleFormError(
                    f"inverse candidate fails two-sided identity at ({i},{k})")
    return left


def _left_inverse(G, alg):
    """Row-reduce [G | I] with invertible pivots; (inverse, None) on success,
    (None, failed column) otherwise."""
    n = len(G)
    work = [list(row) + [alg.one if i == j else alg.zero for j in range(n)]
            for i, row in enumerate(G)]
    for col in range(n):
        piv = None
        inv = None
        for r in range(col, n):
            inv = work[r][col].try_invert()
            if inv is not None:
                piv = r
                break
        if piv is None:
            return None, col
        work[col], work[piv] = work[piv], work[col]
        work[col] = [inv * e for e in work[col]]
        for r in range(n):
            if r == col:
                continue
            c = work[r][col]
            if c.is_zero():
                continue
            work[r] = [e - c * p for e, p in zip(work[r], work[col])]
    return [row[n:] for row in work], None
