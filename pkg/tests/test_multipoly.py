import random

import pytest
import sympy as sp

from algdeg.errors import DegenerateMapError, DomainError, IndeterminacyError
from algdeg.multipoly import (
    AffineRationalMap, MultiPoly, RatFunc, compose, gcd_many, gcd_multi, homogenize_reduce, map_degree,
)
from algdeg.parsing import parse_multipoly

X = ["x1", "x2", "x3"]
SX = sp.symbols("x1 x2 x3")


def P(text, n=3):
    return parse_multipoly(text, X[:n])


def to_sympy(p: MultiPoly):
    return sp.sympify(p.format(X[:p.nvars]).replace("^", "**"), locals=dict(zip(X, SX)))


def random_poly(rng, n, terms, deg, homogeneous=False):
    out = {}
    for _ in range(terms):
        if homogeneous:
            cuts = sorted(rng.randint(0, deg) for _ in range(n - 1))
            e = tuple(b - a for a, b in zip([0] + cuts, cuts + [deg]))
        else:
            e = tuple(rng.randint(0, deg) for _ in range(n))
        out[e] = rng.randint(-5, 5)
    return MultiPoly(n, out)


def test_construction_and_printing():
    p = P("3/2*x1^2*x2 - x3 + 1")
    assert p.total_degree == 3
    assert p.format(X) == "3/2*x1^2*x2 - x3 + 1"
    assert P("(x1 + x2)^2") == P("x1^2 + 2*x1*x2 + x2^2")
    assert MultiPoly.zero(2).format() == "0"


def test_gcd_examples():
    assert gcd_multi(P("x1^2 - x2^2"), P("x1^2 - 2*x1*x2 + x2^2")) == P("x1 - x2")
    assert gcd_multi(P("x1 + 1"), P("x2 + 1")) == P("1")
    assert gcd_multi(P("2*x1 + 4"), P("x1^2 + 2*x1")) == P("x1 + 2")
    assert gcd_multi(P("0"), P("3*x1")) == P("x1")


@pytest.mark.parametrize("homogeneous", [False, True])
def test_gcd_against_sympy(homogeneous):
    rng = random.Random(11 + homogeneous)
    for _ in range(100):
        n = rng.randint(1, 3)
        g = random_poly(rng, n, rng.randint(1, 3), rng.randint(0, 3), homogeneous)
        a = random_poly(rng, n, rng.randint(1, 4), rng.randint(0, 3), homogeneous) * g
        b = random_poly(rng, n, rng.randint(1, 4), rng.randint(0, 3), homogeneous) * g
        if a.is_zero() or b.is_zero():
            continue
        ours = gcd_multi(a, b)
        ref = sp.gcd(to_sympy(a), to_sympy(b))
        ratio = sp.cancel(to_sympy(ours) / ref)
        assert ratio.is_number and ratio != 0


def test_gcd_large_common_factor():
    # a case where the coefficient growth of a remainder sequence is severe
    rng = random.Random(3)
    g = random_poly(rng, 3, 6, 5, homogeneous=True)
    a = g * random_poly(rng, 3, 8, 7, homogeneous=True)
    b = g * random_poly(rng, 3, 8, 7, homogeneous=True)
    h = gcd_multi(a, b)
    assert g.divides(h) and h.divides(a) and h.divides(b)
    ref = sp.gcd(to_sympy(a), to_sympy(b))
    assert sp.cancel(to_sympy(h) / ref).is_number


def test_gcd_many_and_divexact():
    polys = [P("x1*x2 + x2"), P("x2^2*(x1 + 1)"), P("3*x1*x2 + 3*x2")]
    assert gcd_many(polys) == P("x1*x2 + x2")
    assert P("x1^2 - 1").divexact(P("x1 - 1")) == P("x1 + 1")
    assert not P("x1 - 1").divides(P("x1^2 + 1"))


def test_ratfunc_reduction_and_arithmetic():
    r = RatFunc(P("x1^2 - 1"), P("2*x1 - 2"))
    assert r.num == P("1/2*x1 + 1/2") and r.den == P("1")
    s = RatFunc(P("1"), P("x1")) + RatFunc(P("1"), P("x2"))
    assert s == RatFunc(P("x1 + x2"), P("x1*x2"))
    assert (s * RatFunc(P("x1*x2"))).is_polynomial()
    assert RatFunc(P("x1"), P("x2")).evaluate((3, 6, 0)) == sp.Rational(1, 2)
    with pytest.raises(ZeroDivisionError):
        RatFunc(P("1"), P("0"))


def test_map_degree_examples():
    f = AffineRationalMap((RatFunc(P("x1*x2", 2)), RatFunc(P("x1", 2), P("x2", 2))))
    F = homogenize_reduce(f)
    assert F.degree == 3
    assert map_degree(AffineRationalMap((RatFunc(P("x1^2", 2)), RatFunc(P("x2^2", 2))))) == 2
    ident = AffineRationalMap.identity(2)
    assert map_degree(ident) == 1


def test_compose_and_projective_iteration_agree():
    f = AffineRationalMap((RatFunc(P("x1*x2", 2)), RatFunc(P("x1", 2))))
    F = homogenize_reduce(f)
    g, G = f, F
    for expected in (3, 5, 8, 13):
        g = compose(f, g)
        G = F.compose(G)
        assert map_degree(g) == G.degree == expected


def test_compose_indeterminacy():
    f = AffineRationalMap((RatFunc(P("1", 2), P("x1 - x2", 2)), RatFunc(P("x2", 2))))
    collapse = AffineRationalMap((RatFunc(P("x2", 2)), RatFunc(P("x2", 2))))
    with pytest.raises(IndeterminacyError):
        compose(f, collapse)


def test_degenerate_and_mismatched():
    with pytest.raises(DomainError):
        compose(AffineRationalMap.identity(1), AffineRationalMap.identity(2))
    zero = AffineRationalMap((RatFunc(MultiPoly.zero(1)),))
    assert homogenize_reduce(zero).degree == 0
    with pytest.raises(DegenerateMapError):
        from algdeg.multipoly import _reduce_components
        _reduce_components([MultiPoly.zero(2), MultiPoly.zero(2)])
