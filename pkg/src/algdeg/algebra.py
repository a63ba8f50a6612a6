"""Finite-dimensional algebras given by structure constants.

``Algebra.constants[i][j][k]`` is the coefficient of ``e_k`` in ``e_i * e_j``.
All products are computed by :func:`mul_coords`, which accepts coordinates
in any commutative ring (exact rationals, :class:`MultiPoly`, ...), so the
same code drives numeric checks and symbolic identities.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ConsistencyError, DomainError
from .exactnum import (
    Matrix, UniPoly, det, kernel_basis, matrix_power, rat, solve_linear, squarefree_degree,
)
from .multipoly import AffineRationalMap, MultiPoly, RatFunc


def _is_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    return x.is_zero()


@dataclass(frozen=True)
class Algebra:
    """Algebra structure on ``Q^d``; instances are immutable."""

    constants: tuple
    names: tuple = ()
    _table: tuple = field(init=False, repr=False, compare=False, default=())

    def __post_init__(self):
        d = len(self.constants)
        if d == 0:
            raise DomainError("an algebra needs dimension at least 1")
        consts = tuple(tuple(tuple(rat(self.constants[i][j][k]) for k in range(d))
                             for j in range(d)) for i in range(d))
        for i in range(d):
            if len(self.constants[i]) != d or any(len(self.constants[i][j]) != d for j in range(d)):
                raise DomainError("structure constants must form a d x d x d tensor")
        names = tuple(self.names) if self.names else tuple(f"e{i + 1}" for i in range(d))
        if len(names) != d:
            raise DomainError(f"{len(names)} basis names for dimension {d}")
        if len(set(names)) != d:
            raise DomainError("basis names must be distinct")
        table = tuple(tuple(tuple((k, c) for k, c in enumerate(consts[i][j]) if c != 0)
                            for j in range(d)) for i in range(d))
        object.__setattr__(self, "constants", consts)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_table", table)

    @classmethod
    def from_triples(cls, dim: int, triples, names: Sequence[str] = ()) -> "Algebra":
        """Build from sparse ``(i, j, k, value)`` entries (0-based); omitted entries are 0."""
        c = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
        for i, j, k, v in triples:
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise DomainError(f"structure constant index ({i}, {j}, {k}) out of range")
            c[i][j][k] = rat(v)
        return cls(c, tuple(names))

    @property
    def dim(self) -> int:
        return len(self.constants)

    def triples(self) -> list[tuple[int, int, int, object]]:
        d = self.dim
        return [(i, j, k, self.constants[i][j][k]) for i in range(d) for j in range(d)
                for k in range(d) if self.constants[i][j][k] != 0]

    def element(self, coords) -> "AlgElement":
        return AlgElement(self, tuple(coords))

    def basis(self, i: int) -> "AlgElement":
        return AlgElement(self, tuple(int(j == i) for j in range(self.dim)))

    def zero(self) -> "AlgElement":
        return AlgElement(self, (0,) * self.dim)

    def mul_coords(self, u: Sequence, v: Sequence) -> list:
        """Coordinates of ``u * v`` for coordinate vectors over any commutative ring."""
        out: list = [0] * self.dim
        table = self._table
        for i, ui in enumerate(u):
            if _is_zero(ui):
                continue
            row = table[i]
            for j, vj in enumerate(v):
                entries = row[j]
                if not entries or _is_zero(vj):
                    continue
                prod = ui * vj
                for k, c in entries:
                    out[k] = out[k] + (prod if c == 1 else prod * c)
        return out

    def transport(self, m) -> "Algebra":
        """Structure constants of the isomorphic algebra ``M(V)``: ``M x * M y = M (x y)``."""
        from .exactnum import inverse

        m = m if isinstance(m, Matrix) else Matrix(m)
        minv = inverse(m)
        d = self.dim
        cols = [minv.column(i) for i in range(d)]
        c = [[list(m @ self.mul_coords(cols[i], cols[j])) for j in range(d)] for i in range(d)]
        return Algebra(c, self.names)


@dataclass(frozen=True)
class AlgElement:
    parent: Algebra
    coords: tuple

    def __post_init__(self):
        coords = tuple(rat(x) for x in self.coords)
        if len(coords) != self.parent.dim:
            raise DomainError(f"{len(coords)} coordinates for an algebra of dimension {self.parent.dim}")
        object.__setattr__(self, "coords", coords)

    def _check(self, other: "AlgElement"):
        if other.parent is not self.parent and other.parent != self.parent:
            raise DomainError("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        return AlgElement(self.parent, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return AlgElement(self.parent, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return AlgElement(self.parent, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            return multiply(self, other)
        return AlgElement(self.parent, tuple(a * rat(other) for a in self.coords))

    def __rmul__(self, other):
        return AlgElement(self.parent, tuple(a * rat(other) for a in self.coords))

    def __pow__(self, n: int):
        """Left-normed power ``x * (x * (... x))``; ``x^0`` needs a unit."""
        if n < 0:
            raise DomainError("negative powers need an explicit inverse")
        if n == 0:
            u = find_unit(self.parent)
            if u is None:
                raise DomainError("x^0 is undefined without a unit")
            return u
        acc = self
        for _ in range(n - 1):
            acc = multiply(self, acc)
        return acc

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


def multiply(a: AlgElement, b: AlgElement) -> AlgElement:
    a._check(b)
    return AlgElement(a.parent, tuple(a.parent.mul_coords(a.coords, b.coords)))


# ---------------------------------------------------------------------------
# Standard algebras
# ---------------------------------------------------------------------------


def truncated_poly_algebra(modulus: UniPoly, var: str = "t") -> Algebra:
    """``Q[t]/(P)`` in the basis ``1, t, ..., t^(n-1)``."""
    if modulus.degree < 1:
        raise DomainError("the modulus must have degree at least 1")
    p = modulus.monic()
    n = p.degree
    # reductions of t^0 .. t^(2n-2) modulo P
    reduced = []
    for e in range(2 * n - 1):
        r = UniPoly((0,) * e + (1,)) % p
        reduced.append(r.coeffs + (0,) * (n - len(r.coeffs)))
    c = [[list(reduced[i + j]) for j in range(n)] for i in range(n)]
    names = ["1"] + [var if i == 1 else f"{var}^{i}" for i in range(1, n)]
    return Algebra(c, tuple(names))


def split_algebra(n: int) -> Algebra:
    """``Q^n`` with componentwise product (basis of orthogonal idempotents)."""
    if n < 1:
        raise DomainError("dimension must be positive")
    return Algebra.from_triples(n, [(i, i, i, 1) for i in range(n)], [f"e{i + 1}" for i in range(n)])


def matrix_algebra(n: int) -> Algebra:
    """Full matrix algebra with basis ``E_ij`` in row-major order."""
    if n < 1:
        raise DomainError("matrix size must be positive")
    idx = {(i, j): i * n + j for i in range(n) for j in range(n)}
    triples = [(idx[i, j], idx[j, l], idx[i, l], 1)
               for i in range(n) for j in range(n) for l in range(n)]
    names = [f"E{i + 1}{j + 1}" if n < 10 else f"E{i + 1}_{j + 1}" for i in range(n) for j in range(n)]
    return Algebra.from_triples(n * n, triples, names)


def product_algebra(*factors: Algebra) -> Algebra:
    """Direct product; basis is the concatenation of the factor bases."""
    if not factors:
        raise DomainError("empty product")
    if len(factors) == 1:
        return factors[0]
    dim = sum(f.dim for f in factors)
    triples, names, off = [], [], 0
    for idx, f in enumerate(factors, start=1):
        triples += [(i + off, j + off, k + off, v) for i, j, k, v in f.triples()]
        names += [f"{n}_{idx}" for n in f.names]
        off += f.dim
    return Algebra.from_triples(dim, triples, names)


# ---------------------------------------------------------------------------
# Predicates and the unit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Flags:
    unitary: bool
    commutative: bool
    associative: bool
    alternative: bool
    power_associative: bool
    abelian: bool
    jordan: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def is_commutative(V: Algebra) -> bool:
    d = V.dim
    c = V.constants
    return all(c[i][j] == c[j][i] for i in range(d) for j in range(i + 1, d))


def is_associative(V: Algebra) -> bool:
    d = V.dim
    basis = [V.basis(i).coords for i in range(d)]
    prods = [[V.mul_coords(basis[i], basis[j]) for j in range(d)] for i in range(d)]
    for i in range(d):
        for j in range(d):
            for l in range(d):
                if V.mul_coords(prods[i][j], basis[l]) != V.mul_coords(basis[i], prods[j][l]):
                    return False
    return True


def _generic(V: Algebra, count: int) -> list[list[MultiPoly]]:
    """``count`` elements with independent indeterminate coordinates."""
    n = V.dim * count
    return [[MultiPoly.var(n, c * V.dim + i) for i in range(V.dim)] for c in range(count)]


def is_alternative(V: Algebra) -> bool:
    x, y = _generic(V, 2)
    xx = V.mul_coords(x, x)
    left = V.mul_coords(x, V.mul_coords(x, y)) == V.mul_coords(xx, y)
    right = V.mul_coords(V.mul_coords(y, x), x) == V.mul_coords(y, xx)
    return left and right


def is_power_associative(V: Algebra) -> bool:
    """Third- and fourth-power associativity as polynomial identities (char 0 criterion)."""
    x, = _generic(V, 1)
    x2 = V.mul_coords(x, x)
    x2x = V.mul_coords(x2, x)
    if x2x != V.mul_coords(x, x2):
        return False
    return V.mul_coords(x2x, x) == V.mul_coords(x2, x2)


def find_unit(V: Algebra) -> AlgElement | None:
    """The two-sided unit, found by solving ``u e_i = e_i u = e_i``; None if absent."""
    d = V.dim
    c = V.constants
    rows, rhs = [], []
    for i in range(d):
        for l in range(d):
            rows.append([c[k][i][l] for k in range(d)])
            rhs.append(int(i == l))
            rows.append([c[i][k][l] for k in range(d)])
            rhs.append(int(i == l))
    sol = solve_linear(Matrix(rows), rhs)
    if sol is None:
        return None
    return AlgElement(V, sol)


def predicates(V: Algebra) -> Flags:
    unitary = find_unit(V) is not None
    comm = is_commutative(V)
    assoc = is_associative(V)
    alt = is_alternative(V)
    pa = True if assoc else is_power_associative(V)
    return Flags(
        unitary=unitary,
        commutative=comm,
        associative=assoc,
        alternative=alt,
        power_associative=pa,
        abelian=comm and assoc and unitary,
        jordan=comm and alt,
    )


def _require_unit(V: Algebra) -> AlgElement:
    u = find_unit(V)
    if u is None:
        raise DomainError("the algebra has no unit")
    return u


def _require_abelian(V: Algebra) -> AlgElement:
    u = _require_unit(V)
    if not (is_commutative(V) and is_associative(V)):
        raise DomainError("the algebra is not abelian (commutative, associative, unitary)")
    return u


def _require_power_assoc_unital(V: Algebra) -> AlgElement:
    u = _require_unit(V)
    if not is_power_associative(V):
        raise DomainError("the algebra is not power-associative")
    return u


def unit_fixed_point_check(V: Algebra) -> bool:
    """Check that the unit is a fixed point of ``x -> x^2`` with differential ``2 id``."""
    u = _require_unit(V)
    x, = _generic(V, 1)
    sq = V.mul_coords(x, x)
    d = V.dim
    if tuple(rat(p.evaluate(u.coords)) if isinstance(p, MultiPoly) else rat(p) for p in sq) != u.coords:
        return False
    for k in range(d):
        for i in range(d):
            p = sq[k]
            dv = p.derivative(i).evaluate(u.coords) if isinstance(p, MultiPoly) else 0
            if dv != 2 * int(i == k):
                return False
    return True


# ---------------------------------------------------------------------------
# Linear-algebra invariants
# ---------------------------------------------------------------------------


def left_mult_rows(V: Algebra, coords: Sequence) -> list[list]:
    """Matrix of ``y -> x y`` as nested lists (entries in the coordinates' ring)."""
    d = V.dim
    rows: list[list] = [[0] * d for _ in range(d)]
    table = V._table
    for i, xi in enumerate(coords):
        if _is_zero(xi):
            continue
        for j in range(d):
            for k, c in table[i][j]:
                rows[k][j] = rows[k][j] + (xi if c == 1 else xi * c)
    return rows


def left_mult_matrix(x: AlgElement) -> Matrix:
    return Matrix(left_mult_rows(x.parent, x.coords))


def _is_nilpotent(x: AlgElement) -> bool:
    L = left_mult_matrix(x)
    return all(v == 0 for r in matrix_power(L, x.parent.dim).rows for v in r)


def nilradical_and_m(V: Algebra) -> tuple[list[AlgElement], int]:
    """Basis of the nilradical and ``m = dim V - dim N(V)``.

    The nilradical is the radical of the trace form ``(x, y) -> tr L_{xy}``;
    every basis vector is re-checked to be nilpotent.
    """
    _require_abelian(V)
    d = V.dim
    basis = [V.basis(i) for i in range(d)]
    traces = []
    for i in range(d):
        row = []
        for j in range(d):
            L = left_mult_matrix(multiply(basis[i], basis[j]))
            row.append(sum(L.rows[k][k] for k in range(d)))
        traces.append(row)
    kernel = [AlgElement(V, v) for v in kernel_basis(Matrix(traces))]
    for v in kernel:
        if not _is_nilpotent(v):
            raise ConsistencyError(f"trace-form radical vector {v.coords} is not nilpotent")
    return kernel, d - len(kernel)


def element_min_poly(x: AlgElement) -> UniPoly:
    """Monic minimal polynomial of ``x`` from the first dependence among ``1, x, x^2, ...``."""
    V = x.parent
    u = _require_power_assoc_unital(V)
    powers = [u.coords]
    while True:
        nxt = tuple(rat(c) for c in V.mul_coords(x.coords, powers[-1]))
        sol = solve_linear(Matrix.from_columns(powers), nxt)
        if sol is not None:
            return UniPoly([-c for c in sol] + [1])
        powers.append(nxt)
        if len(powers) > V.dim + 1:
            raise ConsistencyError("no linear dependence among powers")


@dataclass(frozen=True)
class GenericInvariants:
    delta: int
    k: int
    samples: int
    seed: int


def generic_invariants(V: Algebra, seed: int, samples: int = 16, bound: int = 10) -> GenericInvariants:
    """Sampled generic ``delta_V`` (degree of the minimal polynomial) and ``k``.

    ``k`` is the largest number of distinct roots of ``P_x`` among samples
    that attain ``delta_V``; both quantities are lower semicontinuous so the
    maxima over random integer points equal the generic values.
    """
    _require_power_assoc_unital(V)
    rng = random.Random(seed)
    best_delta, best_k = 0, 0
    for _ in range(samples):
        x = AlgElement(V, tuple(rng.randint(-bound, bound) for _ in range(V.dim)))
        p = element_min_poly(x)
        delta, k = p.degree, squarefree_degree(p)
        if delta > best_delta:
            best_delta, best_k = delta, k
        elif delta == best_delta:
            best_k = max(best_k, k)
    return GenericInvariants(best_delta, best_k, samples, seed)


# ---------------------------------------------------------------------------
# Quadratic maps
# ---------------------------------------------------------------------------


def squaring_map(V: Algebra) -> AffineRationalMap:
    """``f_V(z) = z^2`` as a polynomial map; the j-th coordinate is ``sum a_ik^j z_i z_k``."""
    if not is_commutative(V):
        raise DomainError("the squaring-map correspondence needs a commutative algebra")
    x, = _generic(V, 1)
    sq = V.mul_coords(x, x)
    return AffineRationalMap(tuple(RatFunc(p if isinstance(p, MultiPoly) else MultiPoly.const(V.dim, p))
                                   for p in sq))


def algebra_from_quadratic(f: AffineRationalMap, names: Sequence[str] = ()) -> Algebra:
    """Commutative algebra with ``x y = (f(x + y) - f(x) - f(y)) / 2``."""
    d = f.dim
    c = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    for k, coord in enumerate(f.coords):
        if not coord.is_polynomial():
            raise DomainError("quadratic maps must be polynomial")
        p = coord.num * (1 / Fraction(coord.den.constant_value()))
        for e, a in p.items():
            if sum(e) != 2:
                raise DomainError(f"coordinate {k + 1} is not a homogeneous quadratic")
            idx = [i for i, m in enumerate(e) for _ in range(m)]
            i, j = idx
            if i == j:
                c[i][i][k] += a
            else:
                c[i][j][k] += Fraction(a) / 2
                c[j][i][k] += Fraction(a) / 2
    return Algebra(c, tuple(names))


def check_isomorphism_witness(V: Algebra, W: Algebra, m) -> bool:
    """True iff ``M (x *_V y) = M x *_W M y`` on all basis pairs."""
    m = m if isinstance(m, Matrix) else Matrix(m)
    if V.dim != W.dim or m.shape != (V.dim, V.dim):
        raise DomainError("dimension mismatch between algebras and witness")
    if det(m) == 0:
        raise DomainError("witness matrix is singular")
    d = V.dim
    images = [m.column(i) for i in range(d)]
    for i in range(d):
        for j in range(d):
            lhs = m @ V.constants[i][j]
            rhs = tuple(rat(v) for v in W.mul_coords(images[i], images[j]))
            if lhs != rhs:
                return False
    return True


class Dim2Type(str, enum.Enum):
    NILPOTENT = "nilpotent_type"
    SPLIT = "split_type"


def classify_dim2(V: Algebra) -> Dim2Type:
    """Two-dimensional unitary commutative algebras: ``Q[x]/(x^2)``-type or split type.

    With ``x^2 = a + b x`` in a basis ``{1, x}`` the algebra is of nilpotent
    type exactly when ``a + b^2/4 = 0``.
    """
    if V.dim != 2:
        raise DomainError("classification only applies to dimension 2")
    u = _require_unit(V)
    if not is_commutative(V):
        raise DomainError("classification needs a commutative algebra")
    for j in range(2):
        e = V.basis(j)
        if det(Matrix.from_columns([u.coords, e.coords])) != 0:
            break
    # subtract the 1-component so that {1, x} is the working basis
    coeffs = solve_linear(Matrix.from_columns([u.coords, e.coords]), e.coords)
    x = e - u * coeffs[0]
    sq = multiply(x, x)
    a, b = solve_linear(Matrix.from_columns([u.coords, x.coords]), sq.coords)
    disc = Fraction(a) + Fraction(b) ** 2 / 4
    return Dim2Type.NILPOTENT if disc == 0 else Dim2Type.SPLIT


# ---------------------------------------------------------------------------
# Profile
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraProfile:
    flags: Flags
    unit: AlgElement | None
    nilradical_basis: tuple | None
    reduced_dim: int | None
    generic_delta: int | None
    generic_k: int | None
    dim2_type: Dim2Type | None
    seed: int
    samples: int


def profile(V: Algebra, seed: int = 0, samples: int = 16) -> AlgebraProfile:
    flags = predicates(V)
    unit = find_unit(V)
    nil, m = None, None
    if flags.abelian:
        basis, m = nilradical_and_m(V)
        nil = tuple(basis)
    delta = k = None
    if flags.unitary and flags.power_associative:
        inv = generic_invariants(V, seed, samples)
        delta, k = inv.delta, inv.k
    dim2 = None
    if V.dim == 2 and flags.unitary and flags.commutative:
        dim2 = classify_dim2(V)
    return AlgebraProfile(flags, unit, nil, m, delta, k, dim2, seed, samples)
