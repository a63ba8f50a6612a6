import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from algdeg.algebra import AlgElement, find_unit, matrix_algebra, multiply, split_algebra, squaring_map
from algdeg.errors import DomainError, MapUndefinedError
from algdeg.exactnum import Matrix
from algdeg.induced import (
    MonomialSpec, coefficient_structure_check, conjugacy_check_local, exp_element,
    induce_monomial, induce_univariate, log_element,
)
from algdeg.multipoly import AffineRationalMap, compose, map_degree
from algdeg.parsing import parse_algebra, parse_polynomial, parse_ratfunc

from oracles import truncated_series_map

SEEDED = settings(max_examples=100, derandomize=True, deadline=None)

Q2 = parse_algebra("Q[t]/(t^2)")
Q3 = parse_algebra("Q[t]/(t^3)")


def as_sympy(f: AffineRationalMap, symbols):
    names = [str(s) for s in symbols]
    loc = dict(zip(names, symbols))
    return [sp.sympify(c.replace("^", "**"), locals=loc) for c in f.format(names)]


def test_unirational_reduction_and_iterates():
    r = parse_ratfunc("(t^2 - 1)/(2*t - 2)")
    assert r.is_polynomial() and r.format() == "1/2*t + 1/2"
    phi = parse_ratfunc("t^2 + 1")
    assert phi.iterate(3).degree == 8
    inv = parse_ratfunc("1/t")
    assert inv.iterate(2) == parse_ratfunc("t")
    with pytest.raises(ZeroDivisionError):
        parse_ratfunc("1/t")(0)


def test_induce_squaring_matches_squaring_map():
    for V in (Q2, Q3, split_algebra(3)):
        assert induce_univariate(V, parse_ratfunc("t^2")) == squaring_map(V)


def test_induce_polynomial_on_dual_numbers():
    f = induce_univariate(Q2, parse_ratfunc("t^2 + 1"))
    assert f.format(["l0", "l1"]) == ["l0^2 + 1", "2*l0*l1"]


@pytest.mark.parametrize("phi", ["1/t", "(t^2 + 1)/(t - 2)", "t/(t^2 + t + 1)", "(t^3 - t)/(2*t^2 + 3)"])
@pytest.mark.parametrize("m", [2, 3, 4])
def test_induced_rational_map_matches_series_inversion(phi, m):
    V = parse_algebra(f"Q[t]/(t^{m})")
    f = induce_univariate(V, parse_ratfunc(phi))
    syms = sp.symbols(f"l0:{m}")
    num, den = sp.fraction(sp.sympify(phi.replace("^", "**")))
    ref = truncated_series_map(num, den, m, syms)
    ours = as_sympy(f, syms)
    for a, b in zip(ours, ref):
        assert sp.cancel(a - b) == 0


def test_induced_map_on_split_algebra_is_diagonal():
    f = induce_univariate(split_algebra(2), parse_ratfunc("(t + 1)/(t - 3)"))
    assert f.format(["a", "b"]) == ["(a + 1)/(a - 3)", "(b + 1)/(b - 3)"]
    assert map_degree(f) == 2


def test_induce_requires_unit_and_power_associativity():
    odd = parse_algebra('{"dim": 2, "constants": [[0, 0, 1, "1"], [1, 1, 0, "1"]]}')
    with pytest.raises(DomainError):
        induce_univariate(odd, parse_ratfunc("t^2"))


def test_map_undefined_when_operator_is_singular():
    nil = parse_algebra('{"dim": 2, "constants": [[0, 0, 1, "1"]]}')
    with pytest.raises(DomainError):
        induce_univariate(nil, parse_ratfunc("1/t"))
    # inverting an element that is a zero divisor for every parameter value
    from algdeg.induced import _solve_symbolic
    from algdeg.multipoly import MultiPoly
    x = MultiPoly.var(1, 0)
    with pytest.raises(MapUndefinedError):
        _solve_symbolic(Q2, [0, x], [1, 0], 1)


def test_coefficient_structure():
    for text in ("t^2", "t^3 - 2*t + 5", "3*t^4 + t"):
        assert coefficient_structure_check(Q3, parse_polynomial(text))
    with pytest.raises(DomainError):
        coefficient_structure_check(split_algebra(2), parse_polynomial("t^2"))


def test_monomial_spec_validation():
    with pytest.raises(DomainError):
        MonomialSpec(Matrix([[1, 2], [2, 4]]), Q2)
    with pytest.raises(DomainError):
        MonomialSpec(Matrix([[Fraction(1, 2)]]), Q2)
    with pytest.raises(DomainError):
        induce_monomial(MonomialSpec(Matrix([[2]]), matrix_algebra(2)))


def test_monomial_map_examples():
    f = induce_monomial(MonomialSpec(Matrix([[2, 1], [1, 1]]), split_algebra(1)))
    assert f.format(["x", "y"]) == ["x^2*y", "x*y"]
    g = induce_monomial(MonomialSpec(Matrix([[-1]]), Q2))
    assert g.format(["a", "h"]) == ["(1)/(a)", "(-h)/(a^2)"]


def test_monomial_maps_compose_like_matrices():
    rng = random.Random(5)
    mats = [Matrix([[1, 1], [0, 1]]), Matrix([[0, 1], [1, 0]]), Matrix([[2, 1], [1, 1]]), Matrix([[1, -1], [0, 1]])]
    for V in (split_algebra(1), Q2):
        for _ in range(4):
            A, B = rng.choice(mats), rng.choice(mats)
            FA = induce_monomial(MonomialSpec(A, V))
            FB = induce_monomial(MonomialSpec(B, V))
            FAB = induce_monomial(MonomialSpec(A @ B, V))
            assert compose(FA, FB) == FAB


def test_exp_log_examples():
    t = Q3.basis(1)
    assert exp_element(t).coords == (1, 1, Fraction(1, 2))
    assert log_element(exp_element(t)) == t
    with pytest.raises(DomainError):
        exp_element(find_unit(Q3))
    with pytest.raises(DomainError):
        log_element(t)


nil_coords = st.tuples(st.integers(-4, 4), st.integers(-4, 4))


@SEEDED
@given(nil_coords, nil_coords)
def test_exp_is_a_homomorphism_on_the_nilradical(a, b):
    V = parse_algebra("Q[t]/(t^3)")
    h1, h2 = AlgElement(V, (0,) + a), AlgElement(V, (0,) + b)
    assert exp_element(h1 + h2) == multiply(exp_element(h1), exp_element(h2))
    assert log_element(exp_element(h1)) == h1


@pytest.mark.parametrize("factors", [
    [parse_algebra("Q[t]/(t^2)")],
    [parse_algebra("Q[t]/(t^3)")],
    [parse_algebra("Q[t]/(t^2)"), split_algebra(1)],
])
@pytest.mark.parametrize("A", [[[2]], [[-1]], [[1, 1], [0, 1]], [[0, 1], [1, 0]], [[2, 1], [1, 1]]])
def test_exponential_conjugacy(factors, A):
    assert conjugacy_check_local(factors, A)


def test_conjugacy_rejects_non_local_factor():
    with pytest.raises(DomainError):
        conjugacy_check_local(split_algebra(2), [[2]])
