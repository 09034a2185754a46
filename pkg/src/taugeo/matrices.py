"""Dense matrices of Scalars and inner-twisted derivations on them.

The matrix algebra is represented directly as N x N arrays (normal forms
are trivial), with the same duck interface as presented algebras: elements
support +, -, *, scale, star, and the algebra object supplies generators
(elementary matrices) and seeded random elements, so every generic checker
runs unchanged over matrices.
"""
from __future__ import annotations

import random

from .algebra import PresentationMismatchError, SigmaTauAlgebra
from .scalars import FloatField


class MatrixError(Exception):
    pass


class SingularMatrixError(MatrixError):
    pass


class Matrix:
    """Square matrix over a scalar field, immutable."""

    __slots__ = ("alg", "rows")

    def __init__(self, alg, rows):
        self.alg = alg
        self.rows = tuple(tuple(r) for r in rows)
        n = alg.n
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise MatrixError(f"expected {n}x{n} entries")

    def _check(self, other):
        if not isinstance(other, Matrix) or other.alg is not self.alg:
            raise PresentationMismatchError("matrices over different algebras")

    def __add__(self, other):
        self._check(other)
        return Matrix(self.alg, [
            [a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._check(other)
        return Matrix(self.alg, [
            [a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix(self.alg, [[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        self._check(other)
        n = self.alg.n
        zero = self.alg.field.zero
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            out.append(row)
        return Matrix(self.alg, out)

    def scale(self, c):
        return Matrix(self.alg, [[a * c for a in r] for r in self.rows])

    def star(self) -> Matrix:
        n = self.alg.n
        return Matrix(self.alg, [
            [self.rows[j][i].conjugate() for j in range(n)] for i in range(n)])

    def entry(self, i, j):
        return self.rows[i][j]

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.rows for a in r)

    def det(self):
        return _det(self.rows, self.alg.field)

    def try_invert(self):
        """Gauss-Jordan inverse, or None when singular."""
        n = self.alg.n
        field = self.alg.field
        work = [list(r) for r in self.rows]
        inv = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = None
            if isinstance(field, FloatField):
                best = field.tolerance
                for r in range(col, n):
                    if abs(work[r][col].value) > best:
                        best = abs(work[r][col].value)
                        piv = r
            else:
                for r in range(col, n):
                    if not work[r][col].is_zero():
                        piv = r
                        break
            if piv is None:
                return None
            work[col], work[piv] = work[piv], work[col]
            inv[col], inv[piv] = inv[piv], inv[col]
            f = work[col][col].invert()
            work[col] = [a * f for a in work[col]]
            inv[col] = [a * f for a in inv[col]]
            for r in range(n):
                if r == col or work[r][col].is_zero():
                    continue
                g = work[r][col]
                work[r] = [a - g * b for a, b in zip(work[r], work[col])]
                inv[r] = [a - g * b for a, b in zip(inv[r], inv[col])]
        return Matrix(self.alg, inv)

    def apply_vector(self, v: Vector) -> Vector:
        n = self.alg.n
        zero = self.alg.field.zero
        out = []
        for i in range(n):
            acc = zero
            for k in range(n):
                acc = acc + self.rows[i][k] * v.entries[k]
            out.append(acc)
        return Vector(self.alg, out)

    def commutes_with(self, other: Matrix) -> bool:
        return self * other == other * self

    def __eq__(self, other):
        if not isinstance(other, Matrix) or other.alg is not self.alg:
            return NotImplemented
        return all(a == b for ra, rb in zip(self.rows, other.rows)
                   for a, b in zip(ra, rb))

    __hash__ = None

    def __str__(self):
        return "[" + "; ".join(", ".join(str(a) for a in r) for r in self.rows) + "]"

    def __repr__(self):
        return f"Matrix({self})"


class Vector:
    """Column vector over the matrix algebra's field."""

    __slots__ = ("alg", "entries")

    def __init__(self, alg, entries):
        self.alg = alg
        self.entries = tuple(entries)
        if len(self.entries) != alg.n:
            raise MatrixError(f"expected {alg.n} entries")

    def __add__(self, other):
        return Vector(self.alg, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return Vector(self.alg, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return Vector(self.alg, [-a for a in self.entries])

    def scale(self, c):
        return Vector(self.alg, [a * c for a in self.entries])

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.entries)

    def outer(self, other: Vector) -> Matrix:
        """self . other-dagger as a matrix."""
        return Matrix(self.alg, [
            [a * b.conjugate() for b in other.entries] for a in self.entries])

    def inner(self, other: Vector):
        """dagger(self) . other."""
        acc = self.alg.field.zero
        for a, b in zip(self.entries, other.entries):
            acc = acc + a.conjugate() * b
        return acc

    def __eq__(self, other):
        if not isinstance(other, Vector) or other.alg is not self.alg:
            return NotImplemented
        return all(a == b for a, b in zip(self.entries, other.entries))

    __hash__ = None

    def __str__(self):
        return "(" + ", ".join(str(a) for a in self.entries) + ")"

    def __repr__(self):
        return f"Vector({self})"


def _det(rows, field):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = field.zero
    for j in range(n):
        a = rows[0][j]
        if a.is_zero():
            continue
        minor = [[r[k] for k in range(n) if k != j] for r in rows[1:]]
        term = a * _det(minor, field)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


class MatrixAlgebra:
    """The full matrix algebra over a scalar field (exact or float)."""

    def __init__(self, n: int, field):
        self.n = n
        self.field = field
        self.name = f"M{n}"
        self.has_star = True

    @property
    def zero(self) -> Matrix:
        z = self.field.zero
        return Matrix(self, [[z] * self.n for _ in range(self.n)])

    @property
    def one(self) -> Matrix:
        z, o = self.field.zero, self.field.one
        return Matrix(self, [[o if i == j else z for j in range(self.n)]
                             for i in range(self.n)])

    def scalar(self, c) -> Matrix:
        return self.one.scale(c)

    def elementary(self, i: int, j: int) -> Matrix:
        z, o = self.field.zero, self.field.one
        return Matrix(self, [[o if (r, c) == (i, j) else z for c in range(self.n)]
                             for r in range(self.n)])

    def generator_elements(self):
        return [self.elementary(i, j) for i in range(self.n) for j in range(self.n)]

    def diagonal(self, entries) -> Matrix:
        z = self.field.zero
        return Matrix(self, [[entries[i] if i == j else z for j in range(self.n)]
                             for i in range(self.n)])

    def from_rows(self, rows) -> Matrix:
        return Matrix(self, rows)

    def basis_vector(self, i: int) -> Vector:
        z, o = self.field.zero, self.field.one
        return Vector(self, [o if k == i else z for k in range(self.n)])

    def random_element(self, rng: random.Random, max_degree=None, max_terms=None) -> Matrix:
        pool = self.field.coefficient_pool() + [self.field.zero, self.field.zero]
        return Matrix(self, [[rng.choice(pool) for _ in range(self.n)]
                             for _ in range(self.n)])

    def random_vector(self, rng: random.Random) -> Vector:
        pool = self.field.coefficient_pool() + [self.field.zero]
        return Vector(self, [rng.choice(pool) for _ in range(self.n)])

    def __repr__(self):
        return f"MatrixAlgebra({self.n}, {self.field!r})"


class MatrixEndo:
    """Endomorphism of a matrix algebra given by a function."""

    def __init__(self, alg: MatrixAlgebra, func, name="endo"):
        self.alg = alg
        self._func = func
        self.name = name

    def apply(self, a: Matrix) -> Matrix:
        return self._func(a)

    def __call__(self, a):
        return self._func(a)

    @staticmethod
    def identity(alg: MatrixAlgebra) -> MatrixEndo:
        return MatrixEndo(alg, lambda a: a, name="id")

    @staticmethod
    def conjugation(alg: MatrixAlgebra, u: Matrix, name="Ad") -> MatrixEndo:
        uinv = u.try_invert()
        if uinv is None:
            raise SingularMatrixError("conjugation by a singular matrix")
        return MatrixEndo(alg, lambda a: u * a * uinv, name=name)

    def star_conjugate(self) -> MatrixEndo:
        return MatrixEndo(self.alg, lambda a: self._func(a.star()).star(),
                          name=f"{self.name}*")

    def equals_on_generators(self, other: MatrixEndo) -> bool:
        return all(self.apply(g) == other.apply(g)
                   for g in self.alg.generator_elements())


class MatrixDerivation:
    """Twisted derivation on a matrix algebra, given directly as a map."""

    def __init__(self, sigma: MatrixEndo, tau: MatrixEndo, func, name="X"):
        self.alg = sigma.alg
        self.sigma = sigma
        self.tau = tau
        self._func = func
        self.name = name

    def apply(self, a: Matrix) -> Matrix:
        return self._func(a)

    def __call__(self, a):
        return self._func(a)

    def star_conjugate(self) -> MatrixDerivation:
        return MatrixDerivation(
            self.tau.star_conjugate(), self.sigma.star_conjugate(),
            lambda a: self._func(a.star()).star(), name=f"{self.name}*")

    def __repr__(self):
        return f"MatrixDerivation({self.name})"


def inner_matrix_derivation(alg: MatrixAlgebra, u: Matrix, name="X") -> MatrixDerivation:
    """X(A) = A - U A U^-1, a (sigma,id)- and (id,sigma)-derivation."""
    sigma = MatrixEndo.conjugation(alg, u, name=f"Ad[{name}]")
    return MatrixDerivation(sigma, MatrixEndo.identity(alg),
                            lambda a: a - sigma.apply(a), name=name)


def build_matrix_algebra(u_list, field=None, check_unitary=False) -> SigmaTauAlgebra:
    """Matrix preset: sigma_a = conjugation by U_a, X_a = id - sigma_a.

    All U_a must be invertible and pairwise commuting; with
    check_unitary=True each must satisfy U U-dagger = 1.
    """
    if not u_list:
        raise MatrixError("at least one twist matrix required")
    alg = u_list[0].alg
    for u in u_list:
        if u.alg is not alg:
            raise PresentationMismatchError("twist matrices over different algebras")
        if u.try_invert() is None:
            raise SingularMatrixError("twist matrix is singular")
        if check_unitary and u * u.star() != alg.one:
            raise MatrixError("twist matrix is not unitary")
    for i, u in enumerate(u_list):
        for v in u_list[i + 1:]:
            if not u.commutes_with(v):
                raise MatrixError("twist matrices do not commute")
    derivations = [inner_matrix_derivation(alg, u, name=f"X{k+1}")
                   for k, u in enumerate(u_list)]
    st = SigmaTauAlgebra(alg, derivations, name=f"matrix-{alg.n}")
    st.twists = list(u_list)
    return st


def exact_matrix_algebra(n: int) -> MatrixAlgebra:
    from .scalars import QQI
    return MatrixAlgebra(n, QQI)


def float_matrix_algebra(n: int, tolerance=1e-9) -> MatrixAlgebra:
    return MatrixAlgebra(n, FloatField(tolerance))
