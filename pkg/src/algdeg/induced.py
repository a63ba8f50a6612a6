"""Rational maps induced on an algebra.

Symbolic coordinates are :class:`MultiPoly` variables.  For a map on ``V^d``
the variables are ordered block by block: the ``dim V`` coordinates of the
first factor, then those of the second, and so on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .algebra import (
    AlgElement, Algebra, _require_abelian, _require_power_assoc_unital,
    left_mult_rows, nilradical_and_m, product_algebra, truncated_poly_algebra,
)
from .errors import DomainError, MapUndefinedError
from .exactnum import Matrix, UniPoly, det, matrix_power, poly_gcd, rat
from .multipoly import AffineRationalMap, MultiPoly, RatFunc, compose


class UniRationalFunction:
    """Reduced quotient ``Q / P`` of univariate polynomials, ``P`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: UniPoly, den: UniPoly | None = None):
        den = UniPoly((1,)) if den is None else den
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        lc = den.lc
        self.num = num * UniPoly((Fraction(1) / lc,))
        self.den = den.monic()

    @classmethod
    def polynomial(cls, p: UniPoly) -> "UniRationalFunction":
        return cls(p)

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other):
        if not isinstance(other, UniRationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"UniRationalFunction({self.format()})"

    def format(self, var: str = "t") -> str:
        if self.is_polynomial():
            return self.num.format(var)
        return f"({self.num.format(var)})/({self.den.format(var)})"

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return Fraction(self.num(x)) / d

    def compose(self, inner: "UniRationalFunction") -> "UniRationalFunction":
        """``self o inner``, homogenized so that no spurious poles appear."""
        e = self.degree
        q, p = inner.num, inner.den
        qp = [UniPoly((1,))]
        pp = [UniPoly((1,))]
        for _ in range(e):
            qp.append(qp[-1] * q)
            pp.append(pp[-1] * p)

        def hom(f: UniPoly) -> UniPoly:
            acc = UniPoly(())
            for k, c in enumerate(f.coeffs):
                if c != 0:
                    acc = acc + qp[k] * pp[e - k] * UniPoly((c,))
            return acc

        return UniRationalFunction(hom(self.num), hom(self.den))

    def iterate(self, n: int) -> "UniRationalFunction":
        if n < 1:
            raise DomainError("iterate count must be positive")
        acc = self
        for _ in range(n - 1):
            acc = self.compose(acc)
        return acc


@dataclass(frozen=True)
class MonomialSpec:
    """Exponent matrix ``A`` (integer, invertible) acting on ``V^d``."""

    matrix: Matrix
    algebra: Algebra

    def __post_init__(self):
        m = self.matrix if isinstance(self.matrix, Matrix) else Matrix(self.matrix)
        if not m.is_square() or not m.is_integral():
            raise DomainError("the exponent matrix must be a square integer matrix")
        if det(m) == 0:
            raise DomainError("the exponent matrix is singular")
        object.__setattr__(self, "matrix", m)

    @property
    def d(self) -> int:
        return self.matrix.nrows


# ---------------------------------------------------------------------------
# Symbolic helpers
# ---------------------------------------------------------------------------


def _poly_det(rows: list[list], nvars: int) -> MultiPoly:
    """Bareiss determinant for matrices with polynomial entries."""
    a = [[_as_poly(x, nvars) for x in r] for r in rows]
    n = len(a)
    sign, prev = 1, None
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return MultiPoly.zero(nvars)
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                v = a[i][j] * akk - aik * a[k][j]
                a[i][j] = v if prev is None else v.divexact(prev)
        prev = akk
    return a[n - 1][n - 1] if sign > 0 else -a[n - 1][n - 1]


def _as_poly(x, nvars: int) -> MultiPoly:
    return x if isinstance(x, MultiPoly) else MultiPoly.const(nvars, x)


def _solve_symbolic(V: Algebra, a: Sequence, b: Sequence, nvars: int) -> tuple[list[MultiPoly], MultiPoly]:
    """Numerators ``n_i`` and determinant ``D`` with ``a^{-1} b = n / D`` (Cramer)."""
    L = left_mult_rows(V, a)
    D = _poly_det(L, nvars)
    if D.is_zero():
        raise MapUndefinedError("the multiplication operator is identically singular")
    nums = []
    for i in range(V.dim):
        Li = [row[:i] + [b[r]] + row[i + 1:] for r, row in enumerate(L)]
        nums.append(_poly_det(Li, nvars))
    return nums, D


def _horner(V: Algebra, p: UniPoly, v: Sequence, unit: Sequence) -> list:
    acc: list = [0] * V.dim
    for c in reversed(p.coeffs):
        acc = V.mul_coords(acc, v)
        if c != 0:
            acc = [a + c * u for a, u in zip(acc, unit)]
    return acc


def _power_coords(V: Algebra, x: Sequence, n: int, unit: Sequence) -> list:
    result, base = list(unit), list(x)
    while n:
        if n & 1:
            result = V.mul_coords(result, base)
        n >>= 1
        if n:
            base = V.mul_coords(base, base)
    return result


# ---------------------------------------------------------------------------
# Induced maps
# ---------------------------------------------------------------------------


def induce_univariate(V: Algebra, phi: UniRationalFunction) -> AffineRationalMap:
    """``f_phi(v) = P(v)^{-1} Q(v)`` for ``v = sum lambda_i e_i``."""
    u = _require_power_assoc_unital(V)
    d = V.dim
    v = [MultiPoly.var(d, i) for i in range(d)]
    q = [_as_poly(c, d) for c in _horner(V, phi.num, v, u.coords)]
    if phi.is_polynomial():
        return AffineRationalMap(tuple(RatFunc(c) for c in q))
    pv = _horner(V, phi.den, v, u.coords)
    nums, D = _solve_symbolic(V, pv, q, d)
    return AffineRationalMap(tuple(RatFunc(n, D) for n in nums))


def coefficient_structure_check(V: Algebra, P: UniPoly) -> bool:
    """For ``V = Q[t]/(t^m)``: coordinate ``j >= 1`` of ``f_P`` is ``lambda_j P'(lambda_0) + R_j``.

    ``R_j`` may only involve ``lambda_0 .. lambda_{j-1}``.
    """
    m = V.dim
    if V.constants != truncated_poly_algebra(UniPoly((0,) * m + (1,))).constants:
        raise DomainError("expected a truncated polynomial algebra Q[t]/(t^m) in its monomial basis")
    f = induce_univariate(V, UniRationalFunction(P))
    dp = P.derivative()
    target = MultiPoly(m, {(e,) + (0,) * (m - 1): c for e, c in enumerate(dp.coeffs)})
    for j in range(1, m):
        c = f.coords[j]
        if not c.is_polynomial():
            return False
        poly = c.num * (1 / Fraction(c.den.constant_value()))
        if poly.degree_in(j) > 1:
            return False
        if poly.derivative(j) != target:
            return False
        if any(poly.degree_in(i) > 0 for i in range(j + 1, m)):
            return False
    return True


def induce_monomial(spec: MonomialSpec) -> AffineRationalMap:
    """``F_A(x_1..x_d)_r = prod_j x_j^{a_rj}`` on ``V^d``; inverses are symbolic."""
    V = spec.algebra
    u = _require_abelian(V).coords
    k, d = V.dim, spec.d
    n = k * d
    xs = [[MultiPoly.var(n, j * k + i) for i in range(k)] for j in range(d)]
    rows = spec.matrix.rows
    inverses: dict[int, tuple[list[MultiPoly], MultiPoly]] = {}
    for j in range(d):
        if any(rows[r][j] < 0 for r in range(d)):
            inverses[j] = _solve_symbolic(V, xs[j], u, n)
    coords = []
    for r in range(d):
        acc: list = list(u)
        den = MultiPoly.const(n, 1)
        for j in range(d):
            a = rows[r][j]
            if a > 0:
                acc = V.mul_coords(acc, _power_coords(V, xs[j], a, u))
            elif a < 0:
                nums, D = inverses[j]
                acc = V.mul_coords(acc, _power_coords(V, nums, -a, u))
                den = den * D ** (-a)
        coords += [RatFunc(_as_poly(c, n), den) for c in acc]
    return AffineRationalMap(tuple(coords))


def _nilpotent_coords(V: Algebra, coords: Sequence) -> bool:
    L = Matrix(left_mult_rows(V, coords))
    return all(x == 0 for r in matrix_power(L, V.dim).rows for x in r)


def _exp_coords(V: Algebra, h: Sequence, unit: Sequence) -> list:
    """Truncated exponential series; ``h`` must be nilpotent (``h^(d+1) = 0``)."""
    acc = list(unit)
    term = list(unit)
    for j in range(1, V.dim + 1):
        term = V.mul_coords(h, term)
        acc = [a + t * Fraction(1, factorial(j)) for a, t in zip(acc, term)]
    return acc


def exp_element(h: AlgElement) -> AlgElement:
    V = h.parent
    u = _require_power_assoc_unital(V)
    if not _nilpotent_coords(V, h.coords):
        raise DomainError("exp is only defined here for nilpotent elements")
    return AlgElement(V, tuple(rat(c) for c in _exp_coords(V, h.coords, u.coords)))


def log_element(x: AlgElement) -> AlgElement:
    V = x.parent
    u = _require_power_assoc_unital(V)
    n = [a - b for a, b in zip(x.coords, u.coords)]
    if not _nilpotent_coords(V, n):
        raise DomainError("log is only defined here for 1 + nilpotent")
    acc: list = [0] * V.dim
    term = list(u.coords)
    for j in range(1, V.dim + 1):
        term = V.mul_coords(n, term)
        sign = 1 if j % 2 else -1
        acc = [a + t * Fraction(sign, j) for a, t in zip(acc, term)]
    return AlgElement(V, tuple(rat(c) for c in acc))


# ---------------------------------------------------------------------------
# Exponential conjugacy
# ---------------------------------------------------------------------------


def conjugacy_check_local(factors, A) -> bool:
    """Verify ``F_A o Phi = Phi o (f_A, T_A)`` as rational maps.

    ``factors`` is one local algebra ``Q + m`` (or a list of them, meaning
    their product).  ``Phi`` sends unit coordinates ``a`` and nilpotent
    coordinates ``h`` to ``sum_i a_i exp(h_i)``; ``f_A`` is the classical
    monomial map on the ``a`` and ``T_A`` acts linearly on the ``h`` blocks.
    Variables are grouped by monomial coordinate, then by factor, with the
    ``a`` coordinate first followed by the ``h`` coordinates in the basis of
    the factor's maximal ideal.
    """
    factors = [factors] if isinstance(factors, Algebra) else list(factors)
    if not factors:
        raise DomainError("no algebra factors given")
    local = []
    for F in factors:
        u = _require_abelian(F)
        ideal, m = nilradical_and_m(F)
        if m != 1:
            raise DomainError("each factor must be a local algebra (reduced dimension 1)")
        local.append((F, u.coords, [b.coords for b in ideal]))
    V = product_algebra(*factors)
    spec = MonomialSpec(A if isinstance(A, Matrix) else Matrix(A), V)
    d = spec.d
    dimV = V.dim
    n = d * dimV

    # variable index of the a-coordinate / h-coordinates for block s, factor i
    layout = []
    pos = 0
    for s in range(d):
        blocks = []
        for F, _, ideal in local:
            blocks.append((pos, list(range(pos + 1, pos + 1 + len(ideal)))))
            pos += 1 + len(ideal)
        layout.append(blocks)

    def phi_coords(avars: list, hvars: list) -> list:
        """Coordinates in ``V^d`` of Phi applied to symbolic inputs."""
        out = []
        for s in range(d):
            for i, (F, u, ideal) in enumerate(local):
                h = [0] * F.dim
                for coeff, b in zip(hvars[s][i], ideal):
                    h = [x + coeff * y for x, y in zip(h, b)]
                e = _exp_coords(F, h, u)
                out += [_as_poly(avars[s][i] * c, n) for c in e]
        return out

    avars = [[MultiPoly.var(n, layout[s][i][0]) for i in range(len(local))] for s in range(d)]
    hvars = [[[MultiPoly.var(n, j) for j in layout[s][i][1]] for i in range(len(local))] for s in range(d)]
    Phi = AffineRationalMap(tuple(RatFunc(c) for c in phi_coords(avars, hvars)))

    rows = spec.matrix.rows
    G = [None] * n
    for s in range(d):
        for i in range(len(local)):
            num, den = MultiPoly.const(n, 1), MultiPoly.const(n, 1)
            for t in range(d):
                a, var = rows[s][t], avars[t][i]
                if a > 0:
                    num = num * var ** a
                elif a < 0:
                    den = den * var ** (-a)
            G[layout[s][i][0]] = RatFunc(num, den)
            for r, j in enumerate(layout[s][i][1]):
                lin = MultiPoly.zero(n)
                for t in range(d):
                    if rows[s][t]:
                        lin = lin + hvars[t][i][r] * rows[s][t]
                G[j] = RatFunc(lin)
    G_map = AffineRationalMap(tuple(G))

    lhs = compose(induce_monomial(spec), Phi)
    rhs = compose(Phi, G_map)
    return lhs.coords == rhs.coords
