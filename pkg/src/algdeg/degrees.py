"""Degree formulas, growth predictions and brute-force degree sequences."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .errors import DegenerateMapError, DomainError, IndeterminacyError
from .exactnum import Matrix, as_matrix, block_diag, det, exterior_power, norm_max, spectral_moduli
from .multipoly import AffineRationalMap, homogenize_reduce

DEFAULT_C_MAX = 16
DEFAULT_EPS = 0.05
DEFAULT_MIN_LEN = 4
DEFAULT_TERM_BUDGET = 5_000_000


class Provenance(str, enum.Enum):
    BRUTE_FORCE = "brute_force"
    THEOREM_A = "theorem_a"
    THEOREM_B = "theorem_b"
    FORMULA = "formula"


@dataclass(frozen=True)
class DegreeSequence:
    """``values[n-1]`` is the degree of the ``n``-th iterate."""

    values: tuple
    p: int
    provenance: Provenance
    truncated: bool = False
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if any(v <= 0 for v in vals):
            raise DomainError("degree sequences must be positive")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def growth_rate(self) -> float | None:
        """``(a_N / a_1)^(1/(N-1))``; None for sequences shorter than 2."""
        v = self.values
        if len(v) < 2:
            return None
        return math.exp((math.log(v[-1]) - math.log(v[0])) / (len(v) - 1))

    def prefix(self, n: int) -> "DegreeSequence":
        return DegreeSequence(self.values[:n], self.p, self.provenance, self.truncated, self.params)


# ---------------------------------------------------------------------------
# Closed formulas
# ---------------------------------------------------------------------------


def product_degree(p: int, n: int, n2: int, degs_f: Sequence[int], degs_g: Sequence[int]) -> int:
    """``deg_p(f x g)`` on ``P^n x P^n2`` for the class ``H + H'``.

    Terms with ``j > n2`` (or ``i > n``) carry a zero binomial weight, so
    only ``deg_i(f)`` for ``i <= min(p, n)`` and ``deg_j(g)`` for
    ``j <= min(p, n2)`` are read.
    """
    if not 0 <= p <= n + n2:
        raise DomainError(f"p={p} outside 0..{n + n2}")
    total = 0
    for i in range(max(0, p - n2), min(p, n) + 1):
        j = p - i
        if i >= len(degs_f) or j >= len(degs_g):
            raise DomainError(f"missing degree deg_{i}(f) or deg_{j}(g)")
        total += comb(p, i) * comb(n + n2 - p, n - i) * degs_f[i] * degs_g[j]
    return total


def skew_degree(p: int, d: int, deg_p_g: int | None, deg_pm1_g: int, delta1: int, delta_d: int) -> int:
    """``deg_p`` of a skew product ``(z, t) -> (g(z), h(z, t))`` over ``P^d x P^1``.

    ``delta1`` is the degree of ``h`` in ``t`` and ``delta_d`` its degree in
    ``z``; the ample class is ``H_d + H_1``.  At ``p = d + 1`` the first
    term has weight zero and ``deg_p_g`` may be None.
    """
    if not 1 <= p <= d + 1:
        raise DomainError(f"p={p} outside 1..{d + 1}")
    first = 0 if p == d + 1 else (d + 1 - p) * deg_p_g
    return first + p * (delta1 + (d + 1 - p) * delta_d) * deg_pm1_g


def theorem_a_predict(k: int, deg_phi: int, p: int, N: int) -> DegreeSequence:
    """Growth ``deg(phi)^(min(p, k) n)`` of maps induced by a univariate ``phi``."""
    if k < 1 or deg_phi < 1 or p < 0 or N < 1:
        raise DomainError("need k >= 1, deg_phi >= 1, p >= 0, N >= 1")
    e = min(p, k)
    return DegreeSequence(tuple(deg_phi ** (e * n) for n in range(1, N + 1)), p, Provenance.THEOREM_A,
                          params={"k": k, "deg_phi": deg_phi})


def _window(d: int, k_dim: int, m: int, p: int) -> range:
    if not 1 <= m <= k_dim:
        raise DomainError("need 1 <= m <= k_dim")
    if not 0 <= p <= d * k_dim:
        raise DomainError(f"p={p} outside 0..{d * k_dim}")
    return range(max(0, p - d * (k_dim - m)), min(p, d * m) + 1)


def _check_exponents(A) -> Matrix:
    A = as_matrix(A)
    if not A.is_square() or not A.is_integral():
        raise DomainError("the exponent matrix must be a square integer matrix")
    if det(A) == 0:
        raise DomainError("the exponent matrix is singular")
    return A


def theorem_b_predict(A, k_dim: int, m: int, p: int, N: int) -> DegreeSequence:
    """``max_i ||wedge^i diag(A; m)^n||`` over the window of admissible ``i``."""
    A = _check_exponents(A)
    win = _window(A.nrows, k_dim, m, p)
    D = block_diag(A, m)
    values = [0] * N
    for i in win:
        if i == 0:
            values = [max(v, 1) for v in values]
            continue
        E = exterior_power(D, i)
        P = E
        for n in range(N):
            values[n] = max(values[n], norm_max(P))
            P = P @ E
    return DegreeSequence(tuple(values), p, Provenance.THEOREM_B,
                          params={"k_dim": k_dim, "m": m, "window": [win.start, win.stop - 1]})


def theorem_b_blockwise(A, k_dim: int, m: int, p: int, N: int) -> DegreeSequence:
    """Same prediction computed block by block.

    ``wedge^i diag(A; m)`` splits into Kronecker products
    ``wedge^i1 A x ... x wedge^im A`` with ``i1 + ... + im = i``, and the
    max-entry norm is multiplicative on Kronecker products.
    """
    A = _check_exponents(A)
    d = A.nrows
    win = _window(d, k_dim, m, p)
    norms = [[1] * N for _ in range(d + 1)]  # norms[j][n] = ||wedge^j A^(n+1)||
    for j in range(1, d + 1):
        E = exterior_power(A, j)
        P = E
        for n in range(N):
            norms[j][n] = norm_max(P)
            P = P @ E
    values = []
    for n in range(N):
        best = 0
        for parts in itertools.product(range(d + 1), repeat=m):
            if sum(parts) in win:
                best = max(best, math.prod(norms[j][n] for j in parts))
        values.append(best)
    return DegreeSequence(tuple(values), p, Provenance.FORMULA, params={"k_dim": k_dim, "m": m})


def dynamical_degree(A, m: int, k_dim: int, p: int) -> float:
    """``lambda_p`` of the generalized monomial map from the top eigenvalue moduli."""
    A = _check_exponents(A)
    win = _window(A.nrows, k_dim, m, p)
    moduli = sorted((r for r in spectral_moduli(A) for _ in range(m)), reverse=True)
    logs = [math.log(r) for r in moduli]
    best = max(math.fsum(logs[:i]) for i in win)
    return math.exp(best)


# ---------------------------------------------------------------------------
# Brute force
# ---------------------------------------------------------------------------


def brute_force_degrees(f: AffineRationalMap, N: int, term_budget: int = DEFAULT_TERM_BUDGET) -> DegreeSequence:
    """``deg_1`` of ``f, f^2, ..., f^N`` from fully reduced homogeneous iterates.

    Iterates are computed projectively as ``F o F^(n-1)``.  When an iterate
    exceeds ``term_budget`` polynomial terms the sequence stops early with
    ``truncated=True``.
    """
    if N < 1:
        raise DomainError("N must be positive")
    try:
        F = homogenize_reduce(f)
    except DegenerateMapError as exc:
        raise IndeterminacyError(f"iterate 1 is degenerate: {exc}", iterate=1) from exc
    if F.degree == 0:
        raise IndeterminacyError("iterate 1 is constant", iterate=1)
    values = [F.degree]
    G = F
    truncated = False
    for n in range(2, N + 1):
        try:
            G = F.compose(G)
        except DegenerateMapError as exc:
            raise IndeterminacyError(f"iterate {n} collapses: {exc}", iterate=n) from exc
        if G.term_count() > term_budget:
            truncated = True
            break
        if G.degree == 0:
            raise IndeterminacyError(f"iterate {n} is constant", iterate=n)
        values.append(G.degree)
    return DegreeSequence(tuple(values), 1, Provenance.BRUTE_FORCE, truncated,
                          params={"iterations": N, "term_budget": term_budget})


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------


class Status(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    status: Status
    max_ratio: float
    slope_gap: float
    c_max: float
    eps: float
    length: int

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    def as_dict(self) -> dict:
        return {
            "status": self.status.value,
            "max_ratio": f"{self.max_ratio:.6f}",
            "slope_gap": f"{self.slope_gap:.6f}",
            "c_max": str(self.c_max),
            "eps": str(self.eps),
            "length": self.length,
        }


def asymptotic_check(measured, predicted, c_max: float = DEFAULT_C_MAX, eps: float = DEFAULT_EPS,
                     min_len: int = DEFAULT_MIN_LEN) -> Verdict:
    """Finite-sample test of ``a_n ~ b_n`` (bounded ratio and matching slope).

    Sequences shorter than ``min_len`` give an inconclusive verdict.
    """
    a = tuple(measured.values if isinstance(measured, DegreeSequence) else measured)
    b = tuple(predicted.values if isinstance(predicted, DegreeSequence) else predicted)
    if len(a) != len(b) or len(a) < 2:
        raise DomainError("sequences must have equal length >= 2")
    if any(x <= 0 for x in a + b):
        raise DomainError("sequences must be positive")
    ratio = max(max(x / y, y / x) for x, y in zip(a, b))
    n = len(a)
    gap = abs((math.log(a[-1]) - math.log(a[0])) - (math.log(b[-1]) - math.log(b[0]))) / (n - 1)
    if n < min_len:
        status = Status.INCONCLUSIVE
    elif ratio <= c_max and gap <= eps:
        status = Status.PASS
    else:
        status = Status.FAIL
    return Verdict(status, ratio, gap, c_max, eps, n)
