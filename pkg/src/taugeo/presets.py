"""Ready-made (sigma,tau)-algebras: the Jackson q-plane and the shift line.

The q-plane preset carries both the plain two-derivation algebra (with the
flip Lie structure, used for curvature and torsion) and a doubled starred
version: on a commutative algebra every (sigma,tau)-derivation is also a
(tau,sigma)-derivation, so each Jackson derivative appears once with
(sigma_a, id) and once with (id, sigma_a), and iota swaps the copies.
The starred version is what hermitian forms and metric connections need.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    AlgebraEndomorphism, AlgebraPresentation, SigmaTauAlgebra,
    derivation_extend, inner_st_derivation,
)
from .connections import LieStructure
from .scalars import QQ, QS


@dataclass
class QPlanePreset:
    presentation: AlgebraPresentation
    st: SigmaTauAlgebra           # (C[x,y], {X1, X2})
    starred: SigmaTauAlgebra      # doubled, with iota
    lie: LieStructure             # flip with C = 0 on {X1, X2}
    lie_starred: LieStructure     # flip on the doubled set


def qplane_presentation() -> AlgebraPresentation:
    return AlgebraPresentation("qplane", ["x", "y"], QS, commutative=True,
                               star_map={"x": "x", "y": "y"})


def build_qplane() -> QPlanePreset:
    """Jackson derivatives X1, X2 on C[x,y]: X_a(x^n y^m) scales by q-integers."""
    alg = qplane_presentation()
    q = QS.q
    x, y = alg.gen("x"), alg.gen("y")
    sigma1 = AlgebraEndomorphism(alg, [x.scale(q), y], name="sigma1")
    sigma2 = AlgebraEndomorphism(alg, [x, y.scale(q)], name="sigma2")
    ident = AlgebraEndomorphism.identity(alg)
    X1 = derivation_extend(sigma1, ident, [alg.one, alg.zero], name="X1")
    X2 = derivation_extend(sigma2, ident, [alg.zero, alg.one], name="X2")
    st = SigmaTauAlgebra(alg, [X1, X2], name="qplane")
    X1r = derivation_extend(ident, sigma1, [alg.one, alg.zero], name="X1'")
    X2r = derivation_extend(ident, sigma2, [alg.zero, alg.one], name="X2'")
    starred = SigmaTauAlgebra(alg, [X1, X2, X1r, X2r], iota=(2, 3, 0, 1),
                              name="qplane*")
    return QPlanePreset(alg, st, starred, LieStructure.flip(st),
                        LieStructure.flip(starred))


@dataclass
class ShiftLinePreset:
    presentation: AlgebraPresentation
    st: SigmaTauAlgebra
    hbar: Fraction
    shift: AlgebraEndomorphism


def build_shift_line(hbar) -> ShiftLinePreset:
    """C[t] with the difference operator tau - id, tau(t) = t + hbar."""
    hbar = Fraction(hbar)
    alg = AlgebraPresentation("shiftline", ["t"], QQ, commutative=True,
                              star_map={"t": "t"})
    t = alg.gen("t")
    shift = AlgebraEndomorphism(alg, [t + alg.scalar(QQ.from_fraction(hbar))],
                                name="shift")
    ident = AlgebraEndomorphism.identity(alg)
    D = inner_st_derivation(ident, shift, name="D")
    st = SigmaTauAlgebra(alg, [D], name="shiftline")
    return ShiftLinePreset(alg, st, hbar, shift)
