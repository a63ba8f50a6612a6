"""Exact rational numbers, dense matrices and univariate polynomials.

Scalars are Python ``int`` or :class:`fractions.Fraction`; every result is
normalised so that integral values come back as ``int``.  That keeps the
common integer case on the fast path of the interpreter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import lcm
from typing import Iterable, Sequence, Union

import mpmath

from .errors import DomainError, NumericError

Scalar = Union[int, Fraction]


def rat(x) -> Scalar:
    """Coerce ``x`` to an exact scalar; integral fractions become ``int``."""
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        x = Fraction(x.strip())
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def format_scalar(x: Scalar) -> str:
    x = rat(x)
    return str(x)


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix over the rationals, stored row-major."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(rat(x) for x in r) for r in self.rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise DomainError("ragged matrix rows")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, r: int, c: int) -> "Matrix":
        return cls(tuple((0,) * c for _ in range(r)))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Matrix":
        return cls(tuple(zip(*cols)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_integral(self) -> bool:
        return all(isinstance(x, int) for r in self.rows for x in r)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "Matrix":
        return Matrix(tuple(zip(*self.rows)))

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DomainError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = list(zip(*other.rows))
            return Matrix(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows))
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise DomainError("vector length does not match matrix")
        return tuple(rat(sum(a * b for a, b in zip(r, vec))) for r in self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def scale(self, c) -> "Matrix":
        return Matrix(tuple(tuple(c * a for a in r) for r in self.rows))

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    def __str__(self) -> str:
        return "[" + ",".join("[" + ",".join(format_scalar(x) for x in r) + "]" for r in self.rows) + "]"


def as_matrix(m) -> Matrix:
    return m if isinstance(m, Matrix) else Matrix(tuple(tuple(r) for r in m))


def _integer_rows(m: Matrix) -> tuple[list[list[int]], list[int]]:
    """Scale each row by the lcm of its denominators."""
    out, scales = [], []
    for r in m.rows:
        s = reduce(lcm, (Fraction(x).denominator for x in r), 1)
        out.append([int(x * s) for x in r])
        scales.append(s)
    return out, scales


def det(m) -> Scalar:
    """Determinant by Bareiss fraction-free elimination."""
    m = as_matrix(m)
    if not m.is_square():
        raise DomainError("determinant of a non-square matrix")
    n = m.nrows
    if n == 0:
        return 1
    a, scales = _integer_rows(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return rat(Fraction(sign * a[n - 1][n - 1], reduce(lambda x, y: x * y, scales, 1)))


def _echelon(m: Matrix) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; pivot is the first nonzero entry in column order."""
    a, _ = _integer_rows(m)
    nr, nc = m.nrows, m.ncols
    pivots: list[int] = []
    r, prev = 0, 1
    for c in range(nc):
        if r >= nr:
            break
        p = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, nr):
            aic = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c, nc):
                row_i[j] = (row_i[j] * piv - aic * row_r[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m) -> int:
    return len(_echelon(as_matrix(m))[1])


def kernel_basis(m) -> list[tuple]:
    """Exact basis of the right kernel ``{v : M v = 0}``.

    One vector per free column, with that free coordinate set to 1 and the
    other free coordinates to 0.  Empty when ``M`` is injective.
    """
    m = as_matrix(m)
    nc = m.ncols
    a, pivots = _echelon(m)
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * nc
        x[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            s = sum(a[r][j] * x[j] for j in range(c + 1, nc))
            x[c] = Fraction(-s) / a[r][c]
        basis.append(tuple(rat(v) for v in x))
    return basis


def solve_linear(m, b) -> tuple | None:
    """One exact solution of ``M x = b`` (free variables set to 0), or None."""
    m = as_matrix(m)
    b = tuple(b)
    aug = Matrix(tuple(r + (bi,) for r, bi in zip(m.rows, b)))
    nc = m.ncols
    a, pivots = _echelon(aug)
    if pivots and pivots[-1] == nc:
        return None
    x = [Fraction(0)] * nc
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        s = sum(a[r][j] * x[j] for j in range(c + 1, nc))
        x[c] = Fraction(a[r][nc] - s) / a[r][c]
    return tuple(rat(v) for v in x)


def inverse(m) -> Matrix:
    m = as_matrix(m)
    n = m.nrows
    cols = []
    for j in range(n):
        e = tuple(int(i == j) for i in range(n))
        x = solve_linear(m, e)
        if x is None:
            raise DomainError("matrix is singular")
        cols.append(x)
    return Matrix.from_columns(cols)


def exterior_power(m, i: int) -> Matrix:
    """Matrix of ``i x i`` minors, index sets ordered lexicographically."""
    m = as_matrix(m)
    if i < 0 or i > min(m.nrows, m.ncols):
        raise DomainError(f"exterior power {i} of a {m.nrows}x{m.ncols} matrix")
    row_sets = list(combinations(range(m.nrows), i))
    col_sets = list(combinations(range(m.ncols), i))
    return Matrix(tuple(
        tuple(det(Matrix(tuple(tuple(m.rows[r][c] for c in J) for r in I))) for J in col_sets)
        for I in row_sets
    ))


def matrix_power(m, n: int) -> Matrix:
    m = as_matrix(m)
    if not m.is_square():
        raise DomainError("power of a non-square matrix")
    if n < 0:
        raise DomainError("negative matrix power")
    result, base = Matrix.identity(m.nrows), m
    while n:
        if n & 1:
            result = result @ base
        n >>= 1
        if n:
            base = base @ base
    return result


def norm_max(m) -> Scalar:
    """Largest absolute entry (0 for an empty matrix)."""
    m = as_matrix(m)
    return max((abs(x) for r in m.rows for x in r), default=0)


def block_diag(a, copies: int) -> Matrix:
    """Block-diagonal matrix with ``copies`` blocks of ``a``."""
    a = as_matrix(a)
    r, c = a.shape
    rows = []
    for b in range(copies):
        for row in a.rows:
            rows.append((0,) * (b * c) + row + (0,) * ((copies - b - 1) * c))
    return Matrix(tuple(rows))


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------


class UniPoly:
    """Dense univariate polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [rat(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def x(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots) -> "UniPoly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-rat(r), 1))
        return p

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly((other,))
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)!r})"

    def __str__(self):
        return self.format("t")

    def format(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            neg = c < 0
            a = -c if neg else c
            if k == 0:
                body = format_scalar(a)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if a == 1 else f"{format_scalar(a)}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def _coerce(self, other) -> "UniPoly":
        return other if isinstance(other, UniPoly) else UniPoly((other,))

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-x for x in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly(x * other for x in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative power of a polynomial")
        result, base = UniPoly((1,)), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other: "UniPoly"):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = [Fraction(x) for x in self.coeffs]
        dq = other.degree
        inv_lc = Fraction(1) / Fraction(other.lc)
        q = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] * inv_lc
            q[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UniPoly(q), UniPoly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        """Horner evaluation; ``x`` may be any ring element supporting + and *."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        inv = Fraction(1) / Fraction(self.lc)
        return UniPoly(x * inv for x in self.coeffs)

    def compose(self, inner: "UniPoly") -> "UniPoly":
        """``self(inner(t))``."""
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd (zero only when both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_degree(p: UniPoly) -> int:
    """Number of distinct complex roots: ``deg P - deg gcd(P, P')``."""
    if p.is_zero():
        raise DomainError("squarefree degree of the zero polynomial")
    return p.degree - poly_gcd(p, p.derivative()).degree


def squarefree_decomposition(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: pairs ``(factor, multiplicity)`` with squarefree coprime factors."""
    if p.is_zero():
        raise DomainError("squarefree decomposition of the zero polynomial")
    p = p.monic()
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    i = 1
    while b.degree > 0:
        d = c - b.derivative()
        g = poly_gcd(b, d)
        if g.degree > 0:
            out.append((g, i))
        b = b // g
        c = d // g
        i += 1
    return out


def char_poly(m) -> UniPoly:
    """``det(T I - M)`` by the Faddeev-LeVerrier recurrence (exact over Q)."""
    m = as_matrix(m)
    if not m.is_square():
        raise DomainError("characteristic polynomial of a non-square matrix")
    n = m.nrows
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    mk = Matrix.zeros(n, n)
    ident = Matrix.identity(n)
    for k in range(1, n + 1):
        mk = m @ mk + ident.scale(coeffs[n - k + 1])
        am = m @ mk
        coeffs[n - k] = rat(-Fraction(sum(am.rows[i][i] for i in range(n))) / k)
    return UniPoly(coeffs)


def spectral_moduli(m, tol: float = 1e-9) -> list[float]:
    """Moduli of the eigenvalues of ``M``, in descending order.

    The characteristic polynomial is computed exactly and split into
    squarefree factors, so that each root is simple for the numeric solver.
    """
    p = char_poly(m)
    moduli: list[float] = []
    for factor, mult in squarefree_decomposition(p):
        roots = _simple_roots(factor, tol)
        for r in roots:
            moduli.extend([float(abs(r))] * mult)
    return sorted(moduli, reverse=True)


def _simple_roots(p: UniPoly, tol: float):
    if p.degree == 1:
        r = Fraction(-p.coeffs[0]) / Fraction(p.coeffs[1])
        return [mpmath.mpf(r.numerator) / r.denominator]
    with mpmath.workdps(50):
        coeffs = [mpmath.mpf(Fraction(c).numerator) / Fraction(c).denominator for c in reversed(p.coeffs)]
        try:
            roots, err = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200, error=True)
        except mpmath.libmp.libhyper.NoConvergence as exc:
            raise NumericError(f"root refinement failed for {p}: {exc}") from exc
        if err > tol:
            raise NumericError(f"root refinement for {p} reached error {float(err):.3g} > {tol}")
        return list(roots)
