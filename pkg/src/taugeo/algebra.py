"""Presented associative unital *-algebras with confluent normal-form rewriting.

An AlgebraPresentation carries named generators, oriented rewrite rules
(reducible word -> element) under a length-then-lexicographic word order,
an optional star map on generators, and a commutativity flag (which just
contributes the sorting rules).  Rewriting is leftmost reduction to the
unique fixed point; confluence of all critical pairs up to a bounded
overlap length is verified at construction and failure aborts.

Endomorphisms and twisted derivations are defined by generator images and
extended algebraically; both are validated against every rewrite rule at
construction, so ill-defined maps never exist.
"""
from __future__ import annotations

import random

from .reports import CheckRecord, failed, passed
from .scalars import parse_ast


Word = tuple


class AlgebraError(Exception):
    """Base class for presented-algebra errors."""


class UnknownGeneratorError(AlgebraError):
    pass


class PresentationMismatchError(AlgebraError):
    pass


class ConfluenceError(AlgebraError):
    pass


class TerminationError(AlgebraError):
    pass


class IllDefinedMapError(AlgebraError):
    """A generator-image table does not respect some rewrite relation."""


class NoStarStructureError(AlgebraError):
    pass


class StarStructureError(AlgebraError):
    pass


def _render_word_names(names, w: Word):
    if not w:
        return "1"
    pieces = []
    k = 0
    while k < len(w):
        j = k
        while j < len(w) and w[j] == w[k]:
            j += 1
        n = j - k
        pieces.append(names[w[k]] if n == 1 else f"{names[w[k]]}^{n}")
        k = j
    return "*".join(pieces)


class RewriteRule:
    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs: Word, rhs: dict):
        self.lhs = lhs
        self.rhs = rhs  # dict word -> Scalar

    def describe(self, names) -> str:
        lhs = _render_word_names(names, self.lhs)
        rhs = " + ".join(f"({c})*{_render_word_names(names, w)}"
                         for w, c in self.rhs.items()) or "0"
        return f"{lhs} -> {rhs}"

    def __repr__(self):
        return f"RewriteRule({self.lhs} -> {list(self.rhs)})"


class AlgebraPresentation:
    """Generators, oriented relations, optional star map, canonical forms."""

    def __init__(self, name, generators, field, relations=(), star_map=None,
                 commutative=False, max_overlap=4, weights=None):
        self.name = name
        self.generators = list(generators)
        self.field = field
        self.commutative = bool(commutative)
        self.max_overlap = max_overlap
        self.weights = tuple(weights) if weights is not None else (1,) * len(self.generators)
        if len(self.weights) != len(self.generators) or any(w < 1 for w in self.weights):
            raise AlgebraError("one positive weight per generator required")
        self._gen_index = {g: k for k, g in enumerate(self.generators)}
        if len(self._gen_index) != len(self.generators):
            raise AlgebraError("duplicate generator names")
        self.star_map = None
        if star_map is not None:
            self.star_map = tuple(self._gen_index[star_map[g]] for g in self.generators)
            for k, j in enumerate(self.star_map):
                if self.star_map[j] != k:
                    raise StarStructureError("generator star map is not an involution")

        rules = []
        if commutative:
            n = len(self.generators)
            for j in range(n):
                for i in range(j):
                    rules.append(((j, i), {(i, j): field.one}))
        for lhs, rhs in relations:
            rules.append((tuple(lhs), dict(rhs)))

        self.rules = []
        self._rules_by_first = {}
        for lhs, rhs in rules:
            if not lhs:
                raise TerminationError("empty rule left-hand side")
            for w in rhs:
                if self.order_key(tuple(w)) >= self.order_key(lhs):
                    raise TerminationError(
                        f"rule {lhs} -> {w} does not decrease the word order")
            rule = RewriteRule(tuple(lhs), {tuple(w): c for w, c in rhs.items()})
            self.rules.append(rule)
            self._rules_by_first.setdefault(rule.lhs[0], []).append(rule)

        self._nf_cache = {}
        # normalize rule right-hand sides against the full system
        for rule in self.rules:
            acc = {}
            for w, c in rule.rhs.items():
                for w2, c2 in self.word_normal_form(w).items():
                    _accumulate(acc, w2, c * c2)
            rule.rhs = acc
        self._nf_cache = {}
        self._check_confluence()

    def order_key(self, word: Word):
        """Weight-then-lexicographic monomial order key."""
        return (sum(self.weights[g] for g in word), word)

    # -- rewriting ---------------------------------------------------------

    def _find_redex(self, word: Word):
        for pos in range(len(word)):
            for rule in self._rules_by_first.get(word[pos], ()):
                L = rule.lhs
                if word[pos:pos + len(L)] == L:
                    return pos, rule
        return None

    def word_normal_form(self, word: Word) -> dict:
        """Normal form of a single word, as a dict word -> Scalar."""
        cached = self._nf_cache.get(word)
        if cached is not None:
            return cached
        out = {}
        stack = [(word, self.field.one)]
        while stack:
            w, c = stack.pop()
            hit = self._find_redex(w)
            if hit is None:
                _accumulate(out, w, c)
            else:
                pos, rule = hit
                pre, suf = w[:pos], w[pos + len(rule.lhs):]
                for w2, c2 in rule.rhs.items():
                    stack.append((pre + w2 + suf, c * c2))
        self._nf_cache[word] = out
        return out

    def normal_form_terms(self, terms: dict) -> dict:
        out = {}
        for w, c in terms.items():
            if c.is_zero():
                continue
            for w2, c2 in self.word_normal_form(tuple(w)).items():
                _accumulate(out, w2, c * c2)
        return out

    def _check_confluence(self):
        for r1 in self.rules:
            for r2 in self.rules:
                l1, l2 = r1.lhs, r2.lhs
                for k in range(1, min(len(l1), len(l2))):
                    if l1[-k:] == l2[:k]:
                        sup = l1 + l2[k:]
                        if len(sup) > self.max_overlap:
                            continue
                        a = self.normal_form_terms(
                            {w + l2[k:]: c for w, c in r1.rhs.items()})
                        b = self.normal_form_terms(
                            {l1[:-k] + w: c for w, c in r2.rhs.items()})
                        if a != b:
                            names = self.generators
                            raise ConfluenceError(
                                "critical pair from "
                                f"{_render_word_names(names, l1)} / "
                                f"{_render_word_names(names, l2)} does not join "
                                f"(superposition {_render_word_names(names, sup)})")
                if r1 is not r2 and len(l2) < len(l1):
                    for pos in range(len(l1) - len(l2) + 1):
                        if l1[pos:pos + len(l2)] == l2:
                            a = self.normal_form_terms(dict(r1.rhs))
                            b = self.normal_form_terms(
                                {l1[:pos] + w + l1[pos + len(l2):]: c
                                 for w, c in r2.rhs.items()})
                            if a != b:
                                names = self.generators
                                raise ConfluenceError(
                                    f"contained rule {_render_word_names(names, l2)} "
                                    f"inside {_render_word_names(names, l1)} does not join")

    # -- element constructors ----------------------------------------------

    def element(self, terms: dict) -> AlgebraElement:
        clean = {}
        for w, c in terms.items():
            w = tuple(w)
            for g in w:
                if not 0 <= g < len(self.generators):
                    raise UnknownGeneratorError(f"generator index {g}")
            if not c.is_zero():
                _accumulate(clean, w, c)
        return AlgebraElement(self, self.normal_form_terms(clean))

    @property
    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    @property
    def one(self) -> AlgebraElement:
        return AlgebraElement(self, {(): self.field.one})

    def scalar(self, c) -> AlgebraElement:
        return AlgebraElement(self, {} if c.is_zero() else {(): c})

    def gen(self, name_or_index) -> AlgebraElement:
        if isinstance(name_or_index, str):
            if name_or_index not in self._gen_index:
                raise UnknownGeneratorError(name_or_index)
            k = self._gen_index[name_or_index]
        else:
            k = name_or_index
        return AlgebraElement(self, {(k,): self.field.one})

    def generator_elements(self):
        return [self.gen(k) for k in range(len(self.generators))]

    def star_word_terms(self, word: Word) -> dict:
        if self.star_map is None:
            raise NoStarStructureError(f"{self.name} has no star structure")
        flipped = tuple(self.star_map[g] for g in reversed(word))
        return self.word_normal_form(flipped)

    # -- enumeration and random elements ------------------------------------

    def normal_words_up_to_degree(self, d: int):
        """All normal-form words of length <= d, in shortlex order."""
        out = [()]
        layer = [()]
        for _ in range(d):
            nxt = []
            for w in layer:
                for g in range(len(self.generators)):
                    cand = w + (g,)
                    if self._find_redex(cand) is None:
                        nxt.append(cand)
            layer = nxt
            out.extend(layer)
        return out

    def random_element(self, rng: random.Random, max_degree=3, max_terms=3) -> AlgebraElement:
        pool = self.field.coefficient_pool()
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            d = rng.randint(0, max_degree)
            w = tuple(rng.randrange(len(self.generators)) for _ in range(d))
            _accumulate(terms, w, rng.choice(pool))
        return AlgebraElement(self, self.normal_form_terms(terms))

    def random_monomial(self, rng: random.Random, max_degree=3) -> AlgebraElement:
        d = rng.randint(0, max_degree)
        w = tuple(rng.randrange(len(self.generators)) for _ in range(d))
        return AlgebraElement(self, self.word_normal_form(w))

    # -- parsing -------------------------------------------------------------

    def parse(self, text: str) -> AlgebraElement:
        return eval_element_ast(parse_ast(text), self)

    def __repr__(self):
        return f"AlgebraPresentation({self.name})"


def _accumulate(terms: dict, word: Word, c) -> None:
    acc = terms.get(word)
    if acc is None:
        if not c.is_zero():
            terms[word] = c
    else:
        s = acc + c
        if s.is_zero():
            del terms[word]
        else:
            terms[word] = s


class AlgebraElement:
    """Finite linear combination of normal-form words with Scalar coefficients."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: AlgebraPresentation, terms: dict):
        self.alg = alg
        self.terms = terms

    def _check(self, other):
        if not isinstance(other, AlgebraElement) or other.alg is not self.alg:
            raise PresentationMismatchError("elements of different presentations")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            _accumulate(out, w, c)
        return AlgebraElement(self.alg, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            _accumulate(out, w, -c)
        return AlgebraElement(self.alg, out)

    def __neg__(self):
        return AlgebraElement(self.alg, {w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        self._check(other)
        out = {}
        nf = self.alg.word_normal_form
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                c = c1 * c2
                for w, cw in nf(w1 + w2).items():
                    _accumulate(out, w, c * cw)
        return AlgebraElement(self.alg, out)

    def scale(self, c) -> AlgebraElement:
        if c.is_zero():
            return AlgebraElement(self.alg, {})
        if c.is_one():
            return self
        return AlgebraElement(self.alg, {w: cv * c for w, cv in self.terms.items()})

    def star(self) -> AlgebraElement:
        out = {}
        for w, c in self.terms.items():
            cc = c.conjugate()
            for w2, c2 in self.alg.star_word_terms(w).items():
                _accumulate(out, w2, cc * c2)
        return AlgebraElement(self.alg, out)

    def coefficient(self, word: Word):
        return self.terms.get(tuple(word), self.alg.field.zero)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def scalar_part(self):
        """The coefficient c when the element equals c*1, else None."""
        if not self.terms:
            return self.alg.field.zero
        if len(self.terms) == 1 and () in self.terms:
            return self.terms[()]
        return None

    def try_invert(self):
        """Inverse when the element is a nonzero multiple of 1, else None."""
        c = self.scalar_part()
        if c is None or c.is_zero():
            return None
        return self.alg.scalar(c.invert())

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement) or other.alg is not self.alg:
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=self.alg.order_key, reverse=True):
            c = self.terms[w]
            mono = _render_word_names(self.alg.generators, w) if w else None
            if mono is None:  # empty word
                piece = _wrap_coeff(str(c), standalone=True)
            elif c.is_one():
                piece = mono
            elif (-c).is_one():
                piece = f"-{mono}"
            else:
                piece = f"{_wrap_coeff(str(c))}*{mono}"
            if not parts:
                parts.append(piece)
            elif piece.startswith("-"):
                parts.append(piece)
            else:
                parts.append("+" + piece)
        return "".join(parts)

    def __repr__(self):
        return f"<{self.alg.name}: {self}>"


def _wrap_coeff(cstr: str, standalone=False) -> str:
    from .scalars import _has_toplevel
    if standalone:
        return cstr
    if _has_toplevel(cstr, "+-"):
        return f"({cstr})"
    return cstr


def eval_element_ast(node, alg: AlgebraPresentation) -> AlgebraElement:
    from .scalars import eval_scalar_ast

    kind = node[0]
    if kind == "name" and node[1] in alg._gen_index:
        return alg.gen(node[1])
    if kind in ("num", "name"):
        return alg.scalar(eval_scalar_ast(node, alg.field))
    if kind == "neg":
        return -eval_element_ast(node[1], alg)
    if kind == "add":
        return eval_element_ast(node[1], alg) + eval_element_ast(node[2], alg)
    if kind == "sub":
        return eval_element_ast(node[1], alg) - eval_element_ast(node[2], alg)
    if kind == "mul":
        return eval_element_ast(node[1], alg) * eval_element_ast(node[2], alg)
    if kind == "div":
        den = eval_element_ast(node[2], alg)
        inv = den.try_invert()
        if inv is None:
            raise AlgebraError("can only divide by invertible scalar multiples of 1")
        return eval_element_ast(node[1], alg) * inv
    if kind == "pow":
        k = node[2]
        base = eval_element_ast(node[1], alg)
        if k < 0:
            inv = base.try_invert()
            if inv is None:
                raise AlgebraError("negative power of a non-invertible element")
            base, k = inv, -k
        acc = alg.one
        for _ in range(k):
            acc = acc * base
        return acc
    raise AlgebraError(f"bad element expression node {kind!r}")


# ---------------------------------------------------------------------------
# Algebra maps
# ---------------------------------------------------------------------------

class AlgebraHomomorphism:
    """Unital algebra map defined by generator images, validated on relations."""

    def __init__(self, source: AlgebraPresentation, target: AlgebraPresentation,
                 images, name="", check=True):
        self.source = source
        self.target = target
        self.images = list(images)
        self.name = name or "phi"
        if len(self.images) != len(source.generators):
            raise IllDefinedMapError("one image per generator required")
        for im in self.images:
            if im.alg is not target:
                raise PresentationMismatchError("image lies in the wrong algebra")
        self._word_cache = {}
        if check:
            self._validate()

    def _validate(self):
        for rule in self.source.rules:
            lhs = self.apply_word(rule.lhs)
            rhs = self.target.zero
            for w, c in rule.rhs.items():
                rhs = rhs + self.apply_word(w).scale(c)
            if lhs != rhs:
                raise IllDefinedMapError(
                    f"{self.name} violates relation "
                    f"{rule.describe(self.source.generators)}")

    def apply_word(self, word: Word) -> AlgebraElement:
        cached = self._word_cache.get(word)
        if cached is None:
            acc = self.target.one
            for g in word:
                acc = acc * self.images[g]
            cached = self._word_cache[word] = acc
        return cached

    def apply(self, e: AlgebraElement) -> AlgebraElement:
        if e.alg is not self.source:
            raise PresentationMismatchError("element from the wrong algebra")
        out = self.target.zero
        for w, c in e.terms.items():
            out = out + self.apply_word(w).scale(c)
        return out

    def __call__(self, e):
        return self.apply(e)

    def compose(self, inner: AlgebraHomomorphism) -> AlgebraHomomorphism:
        """self after inner."""
        if inner.target is not self.source:
            raise PresentationMismatchError("composition mismatch")
        images = [self.apply(im) for im in inner.images]
        return AlgebraHomomorphism(inner.source, self.target, images,
                                   name=f"{self.name}.{inner.name}", check=False)

    def equals_on_generators(self, other: AlgebraHomomorphism) -> bool:
        return all(a == b for a, b in zip(self.images, other.images))

    def __repr__(self):
        return f"AlgebraHomomorphism({self.name})"


class AlgebraEndomorphism(AlgebraHomomorphism):
    """Unital endomorphism given on generators."""

    def __init__(self, alg: AlgebraPresentation, images, name="", check=True):
        super().__init__(alg, alg, images, name=name, check=check)
        self.alg = alg

    @staticmethod
    def identity(alg: AlgebraPresentation) -> AlgebraEndomorphism:
        return AlgebraEndomorphism(alg, alg.generator_elements(), name="id", check=False)

    def star_conjugate(self) -> AlgebraEndomorphism:
        """The map f -> (self(f*))*."""
        images = [self.apply(self.alg.gen(k).star()).star()
                  for k in range(len(self.alg.generators))]
        return AlgebraEndomorphism(self.alg, images, name=f"{self.name}*", check=False)


def star_of_map(m):
    """Conjugated map: endomorphisms stay endomorphisms, a (sigma,tau)-derivation
    becomes a (tau*, sigma*)-derivation."""
    if isinstance(m, SigmaTauDerivation):
        return m.star_conjugate()
    if isinstance(m, AlgebraEndomorphism):
        return m.star_conjugate()
    raise TypeError("star_of_map expects an endomorphism or a derivation")


# ---------------------------------------------------------------------------
# Twisted derivations
# ---------------------------------------------------------------------------

class SigmaTauDerivation:
    """Linear map with X(fg) = sigma(f) X(g) + X(f) tau(g), given on generators."""

    def __init__(self, sigma: AlgebraEndomorphism, tau: AlgebraEndomorphism,
                 images, name="X", check=True):
        if sigma.alg is not tau.alg:
            raise PresentationMismatchError("sigma and tau act on different algebras")
        self.alg = sigma.alg
        self.sigma = sigma
        self.tau = tau
        self.images = list(images)
        self.name = name
        if len(self.images) != len(self.alg.generators):
            raise IllDefinedMapError("one image per generator required")
        for im in self.images:
            if im.alg is not self.alg:
                raise PresentationMismatchError("derivation image in the wrong algebra")
        self._word_cache = {}
        if check:
            self._validate()

    def _validate(self):
        for rule in self.alg.rules:
            lhs = self.apply_word(rule.lhs)
            rhs = self.alg.zero
            for w, c in rule.rhs.items():
                rhs = rhs + self.apply_word(w).scale(c)
            if lhs != rhs:
                raise IllDefinedMapError(
                    f"derivation {self.name} violates relation "
                    f"{rule.describe(self.alg.generators)}")

    def apply_word(self, word: Word) -> AlgebraElement:
        cached = self._word_cache.get(word)
        if cached is not None:
            return cached
        n = len(word)
        out = self.alg.zero
        if n:
            sig_prefix = [self.alg.one]
            for g in word[:-1]:
                sig_prefix.append(sig_prefix[-1] * self.sigma.images[g])
            tau_suffix = [self.alg.one]
            for g in reversed(word[1:]):
                tau_suffix.append(self.tau.images[g] * tau_suffix[-1])
            tau_suffix.reverse()
            for k in range(n):
                out = out + sig_prefix[k] * self.images[word[k]] * tau_suffix[k]
        self._word_cache[word] = out
        return out

    def apply(self, e: AlgebraElement) -> AlgebraElement:
        if e.alg is not self.alg:
            raise PresentationMismatchError("element from the wrong algebra")
        out = self.alg.zero
        for w, c in e.terms.items():
            out = out + self.apply_word(w).scale(c)
        return out

    def __call__(self, e):
        return self.apply(e)

    def star_conjugate(self) -> SigmaTauDerivation:
        """X*(f) = (X(f*))*, a (tau*, sigma*)-derivation."""
        images = [self.apply(self.alg.gen(k).star()).star()
                  for k in range(len(self.alg.generators))]
        return SigmaTauDerivation(self.tau.star_conjugate(), self.sigma.star_conjugate(),
                                  images, name=f"{self.name}*")

    def __repr__(self):
        return f"SigmaTauDerivation({self.name})"


def derivation_extend(sigma, tau, images, name="X") -> SigmaTauDerivation:
    """Extend generator images to the whole algebra by the twisted Leibniz rule.

    Fails with IllDefinedMapError naming the violated relation when the
    extension does not respect the presentation.
    """
    return SigmaTauDerivation(sigma, tau, images, name=name)


def inner_st_derivation(sigma, tau, name=None) -> SigmaTauDerivation:
    """The derivation X = tau - sigma (simultaneously (sigma,tau) and (tau,sigma))."""
    alg = sigma.alg
    images = [tau.images[k] - sigma.images[k] for k in range(len(alg.generators))]
    return SigmaTauDerivation(sigma, tau, images, name=name or "tau-sigma")


# ---------------------------------------------------------------------------
# (sigma,tau)-algebras
# ---------------------------------------------------------------------------

class SigmaTauAlgebra:
    """An algebra with an indexed set of twisted derivations, optionally starred."""

    def __init__(self, presentation: AlgebraPresentation, derivations, iota=None, name=""):
        self.presentation = presentation
        self.derivations = list(derivations)
        self.iota = tuple(iota) if iota is not None else None
        self.name = name or presentation.name
        for X in self.derivations:
            if X.alg is not presentation:
                raise PresentationMismatchError("derivation on the wrong algebra")
        if self.iota is not None:
            n = len(self.derivations)
            if sorted(self.iota) != list(range(n)):
                raise StarStructureError("iota must permute the index set")
            for a in range(n):
                if self.iota[self.iota[a]] != a:
                    raise StarStructureError("iota is not an involution")
            rec = st_star_structure_check(self)
            if not rec.passed:
                raise StarStructureError(f"star structure invalid: {rec.witness}")

    @property
    def n_derivations(self) -> int:
        return len(self.derivations)

    def sigma(self, a: int) -> AlgebraEndomorphism:
        return self.derivations[a].sigma

    def tau(self, a: int) -> AlgebraEndomorphism:
        return self.derivations[a].tau

    def X(self, a: int) -> SigmaTauDerivation:
        return self.derivations[a]

    def random_element(self, rng, max_degree=3, max_terms=3):
        return self.presentation.random_element(rng, max_degree, max_terms)

    def __repr__(self):
        return f"SigmaTauAlgebra({self.name}, {self.n_derivations} derivations)"


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

def leibniz_check(X: SigmaTauDerivation, samples=50, seed=0, sigma=None, tau=None,
                  name=None) -> CheckRecord:
    """Verify X(fg) = sigma(f) X(g) + X(f) tau(g) on random bounded-degree pairs.

    sigma/tau default to the maps carried by X; passing others tests X
    against a different twist (expected to fail for a genuine mismatch).
    """
    sigma = sigma or X.sigma
    tau = tau or X.tau
    cname = name or f"leibniz[{X.name}]"
    identity = f"{X.name}(f*g) = {sigma.name}(f)*{X.name}(g) + {X.name}(f)*{tau.name}(g)"
    rng = random.Random(seed)
    alg = X.alg
    gens = alg.generator_elements()
    pairs = [(f, g) for f in gens for g in gens]
    for _ in range(samples):
        pairs.append((alg.random_element(rng), alg.random_element(rng)))
    for f, g in pairs:
        lhs = X.apply(f * g)
        rhs = sigma.apply(f) * X.apply(g) + X.apply(f) * tau.apply(g)
        if lhs != rhs:
            return failed(cname, identity, {"f": f, "g": g, "lhs": lhs, "rhs": rhs})
    return passed(cname, identity)


def st_star_structure_check(st_algebra: SigmaTauAlgebra, name=None) -> CheckRecord:
    """Verify X_a* = X_iota(a) and sigma_iota(a) = tau_a* on all generators."""
    cname = name or f"star-structure[{st_algebra.name}]"
    identity = "X_a* = X_iota(a) and sigma_iota(a) = tau_a*"
    if st_algebra.iota is None:
        return failed(cname, identity, {"reason": "no iota on this algebra"})
    alg = st_algebra.presentation
    gens = alg.generator_elements()
    for a, X in enumerate(st_algebra.derivations):
        b = st_algebra.iota[a]
        Y = st_algebra.derivations[b]
        for k, g in enumerate(gens):
            xstar = X.apply(g.star()).star()
            if xstar != Y.apply(g):
                return failed(cname, identity, {
                    "index": a, "generator": g, "X_a*(g)": xstar,
                    "X_iota(a)(g)": Y.apply(g)})
            lhs = Y.sigma.apply(g)
            rhs = X.tau.apply(g.star()).star()
            if lhs != rhs:
                return failed(cname, identity, {
                    "index": a, "generator": g,
                    "sigma_iota(a)(g)": lhs, "tau_a*(g)": rhs})
    return passed(cname, identity)


def st_morphism_check(phi: AlgebraHomomorphism, psi, source: SigmaTauAlgebra,
                      target: SigmaTauAlgebra, phi_inverse=None, samples=10,
                      seed=0, name=None) -> CheckRecord:
    """Verify phi(psi(Y)(f)) = Y(phi(f)) on generators and random elements.

    psi maps the target tangent basis into the source tangent space and is
    given as a matrix: psi[b][a] is the coefficient of source X_a in
    psi(Y_b).  With phi invertible (inverse supplied) the unique candidate
    phi^-1 . Y . phi is cross-checked against psi.
    """
    cname = name or f"st-morphism[{phi.name}]"
    identity = "phi(psi(Y)(f)) = Y(phi(f))"
    rng = random.Random(seed)
    alg = source.presentation
    samples_list = alg.generator_elements() + [alg.random_element(rng) for _ in range(samples)]
    for b, Y in enumerate(target.derivations):
        for f in samples_list:
            psi_y_f = alg.zero
            for a, X in enumerate(source.derivations):
                c = psi[b][a]
                if c.is_zero():
                    continue
                psi_y_f = psi_y_f + X.apply(f).scale(c)
            lhs = phi.apply(psi_y_f)
            rhs = Y.apply(phi.apply(f))
            if lhs != rhs:
                return failed(cname, identity,
                              {"Y-index": b, "f": f, "lhs": lhs, "rhs": rhs})
    if phi_inverse is not None:
        for b, Y in enumerate(target.derivations):
            for k, g in enumerate(source.presentation.generator_elements()):
                via_phi = phi_inverse.apply(Y.apply(phi.apply(g)))
                psi_y_g = alg.zero
                for a, X in enumerate(source.derivations):
                    c = psi[b][a]
                    if not c.is_zero():
                        psi_y_g = psi_y_g + X.apply(g).scale(c)
                if via_phi != psi_y_g:
                    return failed(cname, identity, {
                        "Y-index": b, "generator": g,
                        "phi^-1.Y.phi": via_phi, "psi(Y)": psi_y_g})
    return passed(cname, identity)
