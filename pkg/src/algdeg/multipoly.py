"""Exact multivariate polynomials, rational functions and rational maps.

A :class:`MultiPoly` stores integer coefficients keyed by exponent tuples
together with one positive common denominator, so that the arithmetic in the
hot loops stays on Python ints.  Term order everywhere is graded
lexicographic with ``x1 > x2 > ...``.

Rational maps come in two flavours:

* :class:`AffineRationalMap` -- ``D`` reduced rational functions in ``D``
  variables ``x1..xD``;
* :class:`ProjectiveMap` -- ``D + 1`` homogeneous, coprime components in the
  variables ``W, x1..xD`` where the homogenizing variable ``W`` has index 0.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm
from operator import add
from typing import Iterable, Mapping, Sequence

from .errors import DegenerateMapError, DomainError, IndeterminacyError
from .exactnum import format_scalar, rat

Exp = tuple


def _grlex(e: Exp):
    return (sum(e), e)


def _content(terms: Mapping[Exp, int]) -> int:
    g = 0
    for c in terms.values():
        g = gcd(g, c)
        if g == 1:
            break
    return g


class MultiPoly:
    """Polynomial ``sum(terms[e] * x^e) / den`` with integer ``terms``.

    Invariants: no zero coefficients, ``den > 0`` and
    ``gcd(den, content) == 1``.  Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms", "den", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exp, object] | None = None):
        terms = terms or {}
        fr = {e: rat(c) for e, c in terms.items()}
        den = 1
        for c in fr.values():
            if isinstance(c, Fraction):
                den = lcm(den, c.denominator)
        ints = {}
        for e, c in fr.items():
            if c != 0:
                e = tuple(e)
                if len(e) != nvars:
                    raise DomainError(f"exponent {e} does not have length {nvars}")
                ints[e] = int(c * den)
        self._set(nvars, ints, den)

    def _set(self, nvars, terms, den):
        g = gcd(den, _content(terms)) if terms else den
        if g > 1:
            terms = {e: c // g for e, c in terms.items()}
            den //= g
        if not terms:
            den = 1
        self.nvars = nvars
        self.terms = terms
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict, den: int = 1) -> "MultiPoly":
        """Build from integer terms without zero entries (not checked)."""
        p = cls.__new__(cls)
        p._set(nvars, terms, den)
        return p

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, c) -> "MultiPoly":
        c = Fraction(rat(c))
        if c == 0:
            return cls.zero(nvars)
        return cls._raw(nvars, {(0,) * nvars: c.numerator}, c.denominator)

    @classmethod
    def var(cls, nvars: int, i: int) -> "MultiPoly":
        if not 0 <= i < nvars:
            raise DomainError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> "MultiPoly":
        c = Fraction(rat(c))
        if c == 0:
            return cls.zero(len(exp))
        return cls._raw(len(exp), {tuple(exp): c.numerator}, c.denominator)

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self):
        if not self.is_constant():
            raise DomainError("polynomial is not constant")
        return rat(Fraction(self.terms.get((0,) * self.nvars, 0), self.den))

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, exp: Sequence[int]):
        return rat(Fraction(self.terms.get(tuple(exp), 0), self.den))

    def items(self):
        """``(exponent, coefficient)`` pairs in decreasing graded-lex order."""
        for e in sorted(self.terms, key=_grlex, reverse=True):
            yield e, rat(Fraction(self.terms[e], self.den))

    @property
    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def variables(self) -> set[int]:
        out = set()
        for e in self.terms:
            out.update(i for i, k in enumerate(e) if k)
        return out

    def leading_exponent(self) -> Exp:
        return max(self.terms, key=_grlex)

    def leading_coefficient(self):
        return rat(Fraction(self.terms[self.leading_exponent()], self.den))

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def monic(self) -> "MultiPoly":
        """Scale so that the graded-lex leading coefficient is 1."""
        if not self.terms:
            return self
        lc = self.terms[self.leading_exponent()]
        if lc == 1 and self.den == 1:
            return self
        if _content(self.terms) == abs(lc):
            s = 1 if lc > 0 else -1
            return MultiPoly._raw(self.nvars, {e: s * c // abs(lc) for e, c in self.terms.items()})
        return self * Fraction(self.den, lc)

    def primitive_int(self) -> tuple[Fraction, "MultiPoly"]:
        """``(c, q)`` with ``self = c * q`` and ``q`` an integer primitive polynomial."""
        if not self.terms:
            return Fraction(0), self
        g = _content(self.terms)
        q = MultiPoly._raw(self.nvars, {e: c // g for e, c in self.terms.items()})
        return Fraction(g, self.den), q

    # -- equality / hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.den == other.den and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.den, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {self.format()!r})"

    def __str__(self):
        return self.format()

    def format(self, names: Sequence[str] | None = None) -> str:
        """Render as ``3/2*x1^2*x2 - x3``; default names are ``x1..xn``."""
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        out = []
        for e, c in self.items():
            neg = c < 0
            a = -c if neg else c
            factors = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k]
            if not factors:
                body = format_scalar(a)
            elif a == 1:
                body = "*".join(factors)
            else:
                body = format_scalar(a) + "*" + "*".join(factors)
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise DomainError(f"variable count mismatch {self.nvars} vs {other.nvars}")
            return other
        return MultiPoly.const(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        l = lcm(self.den, other.den)
        sa, sb = l // self.den, l // other.den
        out = {e: c * sa for e, c in self.terms.items()} if sa != 1 else dict(self.terms)
        get = out.get
        for e, c in other.terms.items():
            v = get(e, 0) + c * sb
            if v:
                out[e] = v
            else:
                del out[e]
        return MultiPoly._raw(self.nvars, out, l)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()}, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = Fraction(rat(other))
            if c == 0:
                return MultiPoly.zero(self.nvars)
            return MultiPoly._raw(self.nvars, {e: v * c.numerator for e, v in self.terms.items()},
                                  self.den * c.denominator)
        if other.nvars != self.nvars:
            raise DomainError(f"variable count mismatch {self.nvars} vs {other.nvars}")
        return MultiPoly._raw(self.nvars, _mul_terms(self.terms, other.terms), self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            if other.is_constant() and not other.is_zero():
                return self * (1 / Fraction(other.constant_value()))
            return self.divexact(other)
        return self * (1 / Fraction(rat(other)))

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative power of a polynomial")
        if n == 0:
            return MultiPoly.const(self.nvars, 1)
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            return MultiPoly._raw(self.nvars, {tuple(k * n for k in e): c ** n}, self.den ** n)
        result, base = None, self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divexact(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient; raises :class:`DomainError` if ``other`` does not divide."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.terms:
            return self
        ca, a = self.primitive_int()
        cb, b = other.primitive_int()
        q = _divexact_terms(a.terms, b.terms)
        if q is None:
            raise DomainError("polynomial division is not exact")
        return MultiPoly._raw(self.nvars, q) * (ca / cb)

    def divides(self, other: "MultiPoly") -> bool:
        if self.is_zero():
            return other.is_zero()
        if other.is_zero():
            return True
        return _divexact_terms(other.primitive_int()[1].terms, self.primitive_int()[1].terms) is not None

    # -- calculus and substitution ---------------------------------------

    def derivative(self, i: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = list(e)
                e2[i] = k - 1
                out[tuple(e2)] = c * k
        return MultiPoly._raw(self.nvars, out, self.den)

    def evaluate(self, point: Sequence):
        """Exact value at a rational point."""
        point = [Fraction(rat(x)) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = Fraction(c)
            for x, k in zip(point, e):
                if k:
                    v *= x ** k
            total += v
        return rat(total / self.den)

    def substitute(self, values: Sequence) -> "MultiPoly":
        """``self(values[0], ..., values[n-1])`` for polynomial values."""
        if len(values) != self.nvars:
            raise DomainError("wrong number of substitution values")
        nv = values[0].nvars if values else 0
        cache: dict[tuple[int, int], MultiPoly] = {}

        def power(i, k):
            if k == 1:
                return values[i]
            key = (i, k)
            if key not in cache:
                cache[key] = power(i, k // 2) * power(i, k - k // 2)
            return cache[key]

        acc = MultiPoly.zero(nv)
        for e, c in self.terms.items():
            t = MultiPoly.const(nv, c)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            acc = acc + t
        return acc * Fraction(1, self.den)

    def homogenize(self, degree: int | None = None) -> "MultiPoly":
        """Homogenize with a new variable in position 0."""
        if degree is None:
            degree = self.total_degree
        out = {}
        for e, c in self.terms.items():
            s = sum(e)
            if s > degree:
                raise DomainError("homogenizing degree below total degree")
            out[(degree - s,) + e] = c
        return MultiPoly._raw(self.nvars + 1, out, self.den)

    def dehomogenize(self) -> "MultiPoly":
        """Set variable 0 to 1 and drop it."""
        out: dict = {}
        for e, c in self.terms.items():
            e2 = e[1:]
            v = out.get(e2, 0) + c
            if v:
                out[e2] = v
            else:
                out.pop(e2, None)
        return MultiPoly._raw(self.nvars - 1, out, self.den)

    def extend(self, nvars: int, offset: int = 0) -> "MultiPoly":
        """Embed into a ring with ``nvars`` variables, shifting indices by ``offset``."""
        pad_after = nvars - offset - self.nvars
        if pad_after < 0:
            raise DomainError("target ring too small")
        z0, z1 = (0,) * offset, (0,) * pad_after
        return MultiPoly._raw(nvars, {z0 + e + z1: c for e, c in self.terms.items()}, self.den)


def _mul_terms(a: Mapping[Exp, int], b: Mapping[Exp, int]) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    bl = list(b.items())
    for ea, ca in a.items():
        for eb, cb in bl:
            e = tuple(map(add, ea, eb))
            out[e] = get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _divexact_terms(a: Mapping[Exp, int], b: Mapping[Exp, int]) -> dict | None:
    """Quotient ``a / b`` over Q with integer inputs, or None when inexact.

    Integer output is guaranteed when ``b`` is primitive (Gauss); otherwise
    None is also returned when an integer quotient does not exist.
    """
    if not b:
        raise ZeroDivisionError
    lb = max(b, key=_grlex)
    cb = b[lb]
    nb = len(lb)
    rest = [(e, c) for e, c in b.items() if e != lb]
    rem = dict(a)
    heap = [(-sum(e), tuple(-x for x in e)) for e in rem]
    heapq.heapify(heap)
    q: dict = {}
    while rem:
        while True:
            negdeg, negexp = heapq.heappop(heap)
            e = tuple(-x for x in negexp)
            if e in rem:
                break
        c = rem.pop(e)
        shift = tuple(e[i] - lb[i] for i in range(nb))
        if min(shift) < 0:
            return None
        qc, r = divmod(c, cb)
        if r:
            return None
        q[shift] = qc
        for eb, cbv in rest:
            e2 = tuple(map(add, eb, shift))
            v = rem.get(e2, 0) - qc * cbv
            if v:
                if e2 not in rem:
                    heapq.heappush(heap, (-sum(e2), tuple(-x for x in e2)))
                rem[e2] = v
            else:
                rem.pop(e2, None)
    return q


# ---------------------------------------------------------------------------
# Greatest common divisors
# ---------------------------------------------------------------------------

_PRIMES = (2147483647, 2147483629, 2147483587)


def gcd_multi(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Greatest common divisor, scaled so the graded-lex leading coefficient is 1.

    ``gcd(p, 0)`` is ``p`` normalised; ``gcd(0, 0)`` is 0.
    """
    if p.nvars != q.nvars:
        raise DomainError("variable count mismatch in gcd")
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    g = _gcd_int(p.primitive_int()[1].terms, q.primitive_int()[1].terms, p.nvars)
    return MultiPoly._raw(p.nvars, g).monic()


def gcd_many(polys: Iterable[MultiPoly]) -> MultiPoly:
    """gcd of several polynomials, smallest first, stopping once it is constant."""
    polys = sorted((p for p in polys if not p.is_zero()), key=len)
    if not polys:
        raise DomainError("gcd of no nonzero polynomials")
    g = polys[0].primitive_int()[1]
    terms, n = g.terms, g.nvars
    for p in polys[1:]:
        if _is_const(terms, n):
            break
        terms = _gcd_int(terms, p.primitive_int()[1].terms, n)
    return MultiPoly._raw(n, terms).monic()


def _is_const(t, n):
    return len(t) == 1 and (0,) * n in t


def _one(n):
    return {(0,) * n: 1}


def _prim(t: dict) -> dict:
    g = _content(t)
    if g != 1:
        t = {e: c // g for e, c in t.items()}
    if t[max(t, key=_grlex)] < 0:
        t = {e: -c for e, c in t.items()}
    return t


def _gcd_int(a: dict, b: dict, n: int) -> dict:
    """gcd of two nonzero integer polynomials, up to sign and integer content."""
    if _is_const(a, n) or _is_const(b, n):
        return _one(n)
    # monomial content
    ma = [min(e[i] for e in a) for i in range(n)]
    mb = [min(e[i] for e in b) for i in range(n)]
    mono = tuple(min(x, y) for x, y in zip(ma, mb))
    if any(ma):
        a = {tuple(x - y for x, y in zip(e, ma)): c for e, c in a.items()}
    if any(mb):
        b = {tuple(x - y for x, y in zip(e, mb)): c for e, c in b.items()}
    g = _gcd_nomono(_prim(a), _prim(b), n)
    if any(mono):
        g = {tuple(x + y for x, y in zip(e, mono)): c for e, c in g.items()}
    return g


def _vars_of(t: dict, n: int) -> set:
    return {i for i in range(n) if any(e[i] for e in t)}


def _coeffs_in(t: dict, i: int) -> dict[int, dict]:
    """Coefficients of ``t`` viewed as a polynomial in variable ``i``."""
    out: dict[int, dict] = {}
    for e, c in t.items():
        k = e[i]
        e2 = e[:i] + (0,) + e[i + 1:]
        out.setdefault(k, {})[e2] = c
    return out


def _gcd_list(polys: list[dict], n: int) -> dict:
    polys = sorted(polys, key=len)
    g = _prim(polys[0])
    for p in polys[1:]:
        if _is_const(g, n):
            return _one(n)
        g = _gcd_int(g, p, n)
    return _prim(g)


def _gcd_nomono(a: dict, b: dict, n: int) -> dict:
    if _is_const(a, n) or _is_const(b, n):
        return _one(n)
    if a == b:
        return a
    va, vb = _vars_of(a, n), _vars_of(b, n)
    if len(va) > 1 and va == vb and _homogeneous(a) and _homogeneous(b):
        # without monomial content the gcd is the homogenization of the
        # gcd of the dehomogenized inputs
        i = min(va)
        g = _gcd_int(_set_one(a, i), _set_one(b, i), n)
        top = max(sum(e) for e in g)
        return _prim({e[:i] + (top - sum(e),) + e[i + 1:]: c for e, c in g.items()})
    only = (va - vb) or (vb - va)
    if only:
        # the gcd cannot involve a variable missing from one side
        i = min(only)
        if i in va:
            return _gcd_list([b] + list(_coeffs_in(a, i).values()), n)
        return _gcd_list([a] + list(_coeffs_in(b, i).values()), n)
    # main variable: smallest degree keeps the PRS short
    x = min(va, key=lambda i: (max(max(e[i] for e in a), max(e[i] for e in b)), i))
    ca, cb = _coeffs_in(a, x), _coeffs_in(b, x)
    if len(va) == 1:
        return _univariate_gcd(ca, cb, x, n)
    conta = _gcd_list(list(ca.values()), n) if len(ca) > 1 else _prim(next(iter(ca.values())))
    contb = _gcd_list(list(cb.values()), n) if len(cb) > 1 else _prim(next(iter(cb.values())))
    cont = _gcd_int(conta, contb, n)
    if not _is_const(conta, n):
        ca = {k: _divexact_terms(v, conta) for k, v in ca.items()}
    if not _is_const(contb, n):
        cb = {k: _divexact_terms(v, contb) for k, v in cb.items()}
    if _coprime_mod_p(ca, cb, x, n):
        g = _one(n)
    else:
        try:
            g = _prim(_heu_gcd(_join(ca, x), _join(cb, x), n))
        except _HeuristicFailure:
            g = _prim_prs(ca, cb, x, n)
    if _is_const(cont, n):
        return g
    return _prim(_mul_terms(g, cont))


def _homogeneous(t: dict) -> bool:
    return len({sum(e) for e in t}) == 1


def _set_one(t: dict, i: int) -> dict:
    out: dict = {}
    for e, c in t.items():
        e2 = e[:i] + (0,) + e[i + 1:]
        w = out.get(e2, 0) + c
        if w:
            out[e2] = w
        else:
            out.pop(e2, None)
    return out


class _HeuristicFailure(Exception):
    pass


def _eval_at(t: dict, x: int, xi: int) -> dict:
    out: dict = {}
    for e, c in t.items():
        e2 = e[:x] + (0,) + e[x + 1:]
        w = out.get(e2, 0) + c * xi ** e[x]
        if w:
            out[e2] = w
        else:
            out.pop(e2, None)
    return out


def _interpolate(t: dict, x: int, xi: int) -> dict:
    """Recover ``x``-coefficients from their symmetric base-``xi`` digits."""
    out: dict = {}
    half = xi // 2
    for e, c in t.items():
        k = 0
        while c:
            r = c % xi
            if r > half:
                r -= xi
            if r:
                out[e[:x] + (k,) + e[x + 1:]] = r
            c = (c - r) // xi
            k += 1
    return out


def _heu_gcd(a: dict, b: dict, n: int) -> dict:
    """Heuristic gcd by evaluation at large integers, including integer content.

    Every candidate is verified by trial division; with the evaluation point
    above ``2 min(|a|, |b|) + 2`` a verified candidate is the gcd.  Raises
    ``_HeuristicFailure`` after a few unlucky points.
    """
    ca, cb = _content(a), _content(b)
    c = gcd(ca, cb)
    vars_ = _vars_of(a, n) | _vars_of(b, n)
    if not vars_:
        return {(0,) * n: c}
    a = {e: v // ca for e, v in a.items()}
    b = {e: v // cb for e, v in b.items()}
    x = max(vars_)
    na = max(abs(v) for v in a.values())
    nb = max(abs(v) for v in b.values())
    xi = 2 * min(na, nb) + 29
    for _ in range(6):
        fa, fb = _eval_at(a, x, xi), _eval_at(b, x, xi)
        if fa and fb:
            h = _interpolate(_heu_gcd(fa, fb, n), x, xi)
            if h:
                h = _prim(h)
                if _divexact_terms(a, h) is not None and _divexact_terms(b, h) is not None:
                    return {e: v * c for e, v in h.items()} if c != 1 else h
        xi = 73794 * xi * isqrt(isqrt(xi)) // 27011
    raise _HeuristicFailure


def _join(coeffs: dict[int, dict], x: int) -> dict:
    out = {}
    for k, t in coeffs.items():
        for e, c in t.items():
            out[e[:x] + (k,) + e[x + 1:]] = c
    return out


def _eval_mod(t: dict, point: list[int], p: int) -> int:
    s = 0
    for e, c in t.items():
        v = c
        for xv, k in zip(point, e):
            if k:
                v = v * pow(xv, k, p) % p
        s += v
    return s % p


def _uni_gcd_mod(f: list[int], g: list[int], p: int) -> list[int]:
    """Monic gcd of dense univariate polynomials (low degree first) modulo ``p``."""
    def trim(h):
        while h and h[-1] == 0:
            h.pop()
        return h

    f, g = trim(list(f)), trim(list(g))
    while g:
        inv = pow(g[-1], -1, p)
        r = f[:]
        dg = len(g) - 1
        for k in range(len(r) - 1 - dg, -1, -1):
            c = r[k + dg] * inv % p
            if c:
                for j, gj in enumerate(g):
                    r[k + j] = (r[k + j] - c * gj) % p
        f, g = g, trim(r[:dg])
    return f


def _coprime_mod_p(ca: dict, cb: dict, x: int, n: int) -> bool:
    """Certify ``gcd = 1`` (for inputs primitive in ``x``) via one modular image.

    If the leading coefficients in ``x`` survive the specialisation, the
    image of the true gcd keeps its ``x``-degree, so coprime images prove the
    gcd is free of ``x``; being primitive in ``x`` it is then constant.
    A False return only means "not certified".
    """
    rng = random.Random(len(ca) * 7919 + len(cb))
    da, db = max(ca), max(cb)
    for p in _PRIMES[:2]:
        point = [rng.randrange(1, p) for _ in range(n)]
        lca, lcb = _eval_mod(ca[da], point, p), _eval_mod(cb[db], point, p)
        if lca == 0 or lcb == 0:
            continue
        fa = [0] * (da + 1)
        for k, t in ca.items():
            fa[k] = _eval_mod(t, point, p)
        fb = [0] * (db + 1)
        for k, t in cb.items():
            fb[k] = _eval_mod(t, point, p)
        return len(_uni_gcd_mod(fa, fb, p)) == 1
    return False


def _univariate_gcd(ca: dict, cb: dict, x: int, n: int) -> dict:
    fa = [0] * (max(ca) + 1)
    for k, t in ca.items():
        fa[k] = next(iter(t.values()))
    fb = [0] * (max(cb) + 1)
    for k, t in cb.items():
        fb[k] = next(iter(t.values()))
    g = _uni_gcd_int(fa, fb)
    z = (0,) * n
    return _prim({z[:x] + (k,) + z[x + 1:]: c for k, c in enumerate(g) if c})


def _uni_gcd_int(f: list[int], g: list[int]) -> list[int]:
    """Primitive PRS gcd of dense integer polynomials."""
    def prim(h):
        c = 0
        for v in h:
            c = gcd(c, v)
        return [v // c for v in h] if c > 1 else h

    def trim(h):
        while h and h[-1] == 0:
            h.pop()
        return h

    if len(f) < len(g):
        f, g = g, f
    f, g = prim(trim(f)), prim(trim(g))
    if len(g) == 1:
        return [1]
    # cheap certificate of coprimality
    p = _PRIMES[0]
    if g[-1] % p and f[-1] % p:
        if len(_uni_gcd_mod([v % p for v in f], [v % p for v in g], p)) == 1:
            return [1]
    while True:
        dg = len(g) - 1
        r = f[:]
        lg = g[-1]
        while len(r) - 1 >= dg and r:
            lr = r[-1]
            shift = len(r) - 1 - dg
            r = [v * lg for v in r]
            for j, gj in enumerate(g):
                r[shift + j] -= lr * gj
            trim(r)
        if not r:
            return prim(g)
        if len(r) == 1:
            return [1]
        f, g = g, prim(r)


def _prim_prs(ca: dict, cb: dict, x: int, n: int) -> dict:
    """Primitive polynomial remainder sequence in variable ``x``.

    Coefficients are integer polynomials in the remaining variables; inputs
    are primitive in ``x`` and so is the returned gcd.
    """
    if max(ca) < max(cb):
        ca, cb = cb, ca
    f, g = ca, cb
    while True:
        dg = max(g)
        lg = g[dg]
        r = dict(f)
        while r and max(r) >= dg:
            dr = max(r)
            lr = r[dr]
            shift = dr - dg
            r = {k: _mul_terms(v, lg) for k, v in r.items()}
            for k, v in g.items():
                prod = _mul_terms(v, lr)
                cur = r.get(k + shift, {})
                for e, c in prod.items():
                    w = cur.get(e, 0) - c
                    if w:
                        cur[e] = w
                    else:
                        cur.pop(e, None)
                if cur:
                    r[k + shift] = cur
                else:
                    r.pop(k + shift, None)
        if not r:
            return _prim(_join(g, x))
        if max(r) == 0:
            return _one(n)
        cont = _gcd_list(list(r.values()), n) if len(r) > 1 else _prim(next(iter(r.values())))
        if not _is_const(cont, n):
            r = {k: _divexact_terms(v, cont) for k, v in r.items()}
        else:
            c = 0
            for v in r.values():
                c = gcd(c, _content(v))
            if c > 1:
                r = {k: {e: w // c for e, w in v.items()} for k, v in r.items()}
        f, g = g, r


def lcm_multi(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    if p.is_zero() or q.is_zero():
        return MultiPoly.zero(p.nvars)
    g = gcd_multi(p, q)
    return (p.divexact(g) * q).monic()


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


class RatFunc:
    """Reduced quotient ``num / den`` with a monic (graded-lex) denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, reduced: bool = False):
        if den is None:
            den = MultiPoly.const(num.nvars, 1)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.nvars != den.nvars:
            raise DomainError("variable count mismatch in rational function")
        if num.is_zero():
            den = MultiPoly.const(num.nvars, 1)
        elif not reduced and not den.is_constant():
            g = gcd_multi(num, den)
            if not g.is_constant():
                num, den = num.divexact(g), den.divexact(g)
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num * (1 / Fraction(lc)), den.monic()
        self.num = num
        self.den = den

    @classmethod
    def const(cls, nvars: int, c) -> "RatFunc":
        return cls(MultiPoly.const(nvars, c))

    @classmethod
    def var(cls, nvars: int, i: int) -> "RatFunc":
        return cls(MultiPoly.var(nvars, i))

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, MultiPoly)):
            other = RatFunc(other) if isinstance(other, MultiPoly) else RatFunc.const(self.nvars, other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.format()!r})"

    def __str__(self):
        return self.format()

    def format(self, names: Sequence[str] | None = None) -> str:
        n = self.num.format(names)
        if self.den.is_constant():
            return n
        return f"({n})/({self.den.format(names)})"

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MultiPoly):
            return RatFunc(other)
        return RatFunc.const(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        g = gcd_multi(self.den, other.den)
        da, db = self.den.divexact(g), other.den.divexact(g)
        return RatFunc(self.num * db + other.num * da, da * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFunc(self.num * other, self.den, reduced=True)
        other = self._coerce(other)
        g1 = gcd_multi(self.num, other.den)
        g2 = gcd_multi(other.num, self.den)
        n1, d2 = (self.num.divexact(g1), other.den.divexact(g1)) if not g1.is_constant() else (self.num, other.den)
        n2, d1 = (other.num.divexact(g2), self.den.divexact(g2)) if not g2.is_constant() else (other.num, self.den)
        return RatFunc(n1 * n2, d1 * d2, reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.den, self.num, reduced=True)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, reduced=True)

    def derivative(self, i: int) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.derivative(i) * d - n * d.derivative(i), d * d)

    def evaluate(self, point: Sequence):
        dv = self.den.evaluate(point)
        if dv == 0:
            raise ZeroDivisionError("rational function evaluated at a pole")
        return rat(Fraction(self.num.evaluate(point)) / dv)

    @property
    def degree(self) -> int:
        """``max(deg num, deg den)``."""
        return max(self.num.total_degree, self.den.total_degree)


# ---------------------------------------------------------------------------
# Rational maps
# ---------------------------------------------------------------------------


def _homog_eval(p: MultiPoly, degree: int, base: MultiPoly, values: Sequence[MultiPoly], cache: dict):
    """``p^h(base, values)`` where ``p^h`` is ``p`` homogenized to ``degree``.

    ``cache`` memoises powers of ``base`` (key -1) and of the values.
    """
    def power(i, k):
        if k == 0:
            return None
        key = (i, k)
        if key not in cache:
            v = base if i < 0 else values[i]
            if k == 1:
                cache[key] = v
            else:
                half = power(i, k // 2)
                rest = power(i, k - k // 2)
                cache[key] = half * rest
        return cache[key]

    nv = base.nvars
    acc: dict = {}
    dens = 1
    for e, c in p.terms.items():
        t = None
        w = degree - sum(e)
        factors = [power(-1, w)] + [power(i, k) for i, k in enumerate(e) if k]
        for f in factors:
            if f is None:
                continue
            t = f if t is None else t * f
        if t is None:
            t = MultiPoly.const(nv, 1)
        dens = lcm(dens, t.den)
        acc[e] = (c, t)
    out: dict = {}
    get = out.get
    for c, t in acc.values():
        s = c * (dens // t.den)
        for e, v in t.terms.items():
            w = get(e, 0) + s * v
            if w:
                out[e] = w
            else:
                del out[e]
    return MultiPoly._raw(nv, out, dens * p.den)


@dataclass(frozen=True)
class AffineRationalMap:
    """Self-map of affine ``D``-space given by reduced rational coordinates."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(c if isinstance(c, RatFunc) else RatFunc(c) for c in self.coords)
        if not coords:
            raise DomainError("a map needs at least one coordinate")
        n = len(coords)
        for c in coords:
            if c.nvars != n:
                raise DomainError(f"coordinate in {c.nvars} variables for a map of dimension {n}")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @classmethod
    def identity(cls, dim: int) -> "AffineRationalMap":
        return cls(tuple(RatFunc.var(dim, i) for i in range(dim)))

    def __call__(self, point):
        return tuple(c.evaluate(point) for c in self.coords)

    def common_denominator(self) -> tuple[list[MultiPoly], MultiPoly]:
        """Numerators ``n_i`` and one denominator ``L`` with ``coord_i = n_i / L``."""
        L = MultiPoly.const(self.dim, 1)
        for c in self.coords:
            if not c.den.is_constant() and not c.den.divides(L):
                L = lcm_multi(L, c.den)
        nums = [c.num * L.divexact(c.den) for c in self.coords]
        return nums, L

    def format(self, names: Sequence[str] | None = None) -> list[str]:
        return [c.format(names) for c in self.coords]

    def __str__(self):
        return "(" + ", ".join(self.format()) + ")"


def compose(m1: AffineRationalMap, m2: AffineRationalMap) -> AffineRationalMap:
    """``m1 o m2``: substitute the coordinates of ``m2`` into ``m1``."""
    if m1.dim != m2.dim:
        raise DomainError(f"cannot compose maps of dimensions {m1.dim} and {m2.dim}")
    nums, L = m2.common_denominator()
    cache: dict = {}
    out = []
    for idx, c in enumerate(m1.coords):
        en, ed = c.num.total_degree, c.den.total_degree
        top = max(en, ed)
        num = _homog_eval(c.num, top, L, nums, cache)
        den = _homog_eval(c.den, top, L, nums, cache)
        if den.is_zero():
            raise IndeterminacyError(f"denominator of coordinate {idx + 1} vanishes after substitution")
        out.append(RatFunc(num, den))
    return AffineRationalMap(tuple(out))


@dataclass(frozen=True)
class ProjectiveMap:
    """``[F0 : F1 : ... : FD]`` with homogeneous coprime components of equal degree."""

    components: tuple
    degree: int

    @property
    def dim(self) -> int:
        return len(self.components) - 1

    def term_count(self) -> int:
        return sum(len(c) for c in self.components)

    def format(self) -> list[str]:
        names = ["W"] + [f"x{i}" for i in range(1, len(self.components))]
        return [c.format(names) for c in self.components]

    def __str__(self):
        return "[" + " : ".join(self.format()) + "]"

    def compose(self, other: "ProjectiveMap") -> "ProjectiveMap":
        """``self o other``, reduced by the gcd of the components."""
        if self.dim != other.dim:
            raise DomainError("dimension mismatch in projective composition")
        cache: dict = {}
        comps = [_subst_homogeneous(c, other.components, cache) for c in self.components]
        return _reduce_components(comps)


def _subst_homogeneous(p: MultiPoly, values: Sequence[MultiPoly], cache: dict) -> MultiPoly:
    """``p(values)`` for homogeneous ``p``; powers of ``values`` are memoised."""
    return _homog_eval(p.dehomogenize(), p.total_degree, values[0], values[1:], _ShiftedCache(cache))


class _ShiftedCache(dict):
    """Adapter mapping ``_homog_eval`` keys (base = -1) to a shared cache."""

    def __init__(self, shared):
        super().__init__()
        self.shared = shared

    def __contains__(self, key):
        return (key[0] + 1, key[1]) in self.shared

    def __getitem__(self, key):
        return self.shared[(key[0] + 1, key[1])]

    def __setitem__(self, key, value):
        self.shared[(key[0] + 1, key[1])] = value


def _reduce_components(comps: list[MultiPoly]) -> ProjectiveMap:
    if all(c.is_zero() for c in comps):
        raise DegenerateMapError("all components vanish identically")
    g = gcd_many(comps)
    if not g.is_constant():
        comps = [c.divexact(g) for c in comps]
    # integer primitive scaling keeps the output canonical
    ints = comps
    den = 1
    for c in ints:
        den = lcm(den, c.den)
    content = 0
    for c in ints:
        if not c.is_zero():
            content = gcd(content, _content(c.terms) * (den // c.den))
    factor = Fraction(den, content)
    lead = next(c for c in ints if not c.is_zero())
    if lead.leading_coefficient() < 0:
        factor = -factor
    comps = tuple(c * factor for c in ints)
    deg = max(c.total_degree for c in comps)
    for c in comps:
        if not c.is_zero() and not c.is_homogeneous():
            raise DomainError("projective components must be homogeneous")
    return ProjectiveMap(comps, deg)


def homogenize_reduce(m: AffineRationalMap) -> ProjectiveMap:
    """Clear denominators, homogenize with ``W`` in position 0 and remove common factors."""
    nums, L = m.common_denominator()
    comps = [L] + nums
    if all(c.is_zero() for c in nums) and L.is_zero():
        raise DegenerateMapError("all components vanish identically")
    e = max(c.total_degree for c in comps)
    return _reduce_components([c.homogenize(e) for c in comps])


def map_degree(m: AffineRationalMap) -> int:
    """Common degree of the reduced homogeneous components."""
    return homogenize_reduce(m).degree
