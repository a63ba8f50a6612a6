import math
import random

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from algdeg.algebra import split_algebra
from algdeg.degrees import (
    DegreeSequence, Provenance, Status, asymptotic_check, brute_force_degrees, dynamical_degree,
    product_degree, skew_degree, theorem_a_predict, theorem_b_blockwise, theorem_b_predict,
)
from algdeg.errors import DomainError, IndeterminacyError
from algdeg.exactnum import Matrix
from algdeg.induced import MonomialSpec, induce_monomial
from algdeg.multipoly import AffineRationalMap, RatFunc
from algdeg.parsing import parse_multipoly

from oracles import product_degree_oracle, skew_degree_oracle, sympy_map_degree

SEEDED = settings(max_examples=100, derandomize=True, deadline=None)

CAT = Matrix([[2, 1], [1, 1]])


def affine(texts, names):
    return AffineRationalMap(tuple(RatFunc(parse_multipoly(t, names)) for t in texts))


def test_degree_sequence_basics():
    s = DegreeSequence((2, 4, 8, 16), 1, Provenance.FORMULA)
    assert s.growth_rate() == pytest.approx(2.0)
    assert s.prefix(2).values == (2, 4)
    assert DegreeSequence((3,), 1, Provenance.FORMULA).growth_rate() is None
    with pytest.raises(DomainError):
        DegreeSequence((1, 0), 1, Provenance.FORMULA)


def test_product_degree_examples():
    # f x g on P^1 x P^1 with degrees 2 and 3
    assert product_degree(1, 1, 1, [1, 2], [1, 3]) == 5
    assert product_degree(2, 1, 1, [1, 2], [1, 3]) == 12
    assert product_degree(0, 1, 1, [1, 2], [1, 3]) == 2
    with pytest.raises(DomainError):
        product_degree(3, 1, 1, [1, 2], [1, 3])


def test_skew_degree_examples():
    assert skew_degree(1, 1, 2, 1, 1, 1) == skew_degree_oracle(1, 1, [1, 2], 1, 1)
    assert skew_degree(2, 1, None, 2, 3, 5) == skew_degree_oracle(2, 1, [1, 2], 3, 5)
    with pytest.raises(DomainError):
        skew_degree(0, 1, 1, 1, 1, 1)


@SEEDED
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_product_degree_matches_intersection_oracle(n, n2, data):
    p = data.draw(st.integers(0, n + n2))
    degs_f = [1] + data.draw(st.lists(st.integers(1, 9), min_size=n, max_size=n))
    degs_g = [1] + data.draw(st.lists(st.integers(1, 9), min_size=n2, max_size=n2))
    assert product_degree(p, n, n2, degs_f, degs_g) == product_degree_oracle(p, n, n2, degs_f, degs_g)


@SEEDED
@given(st.integers(1, 4), st.data())
def test_skew_degree_matches_intersection_oracle(d, data):
    p = data.draw(st.integers(1, d + 1))
    deg_g = [1] + data.draw(st.lists(st.integers(1, 9), min_size=d, max_size=d))
    delta1, delta_d = data.draw(st.integers(0, 5)), data.draw(st.integers(0, 5))
    ours = skew_degree(p, d, deg_g[p] if p <= d else None, deg_g[p - 1], delta1, delta_d)
    assert ours == skew_degree_oracle(p, d, deg_g, delta1, delta_d)


def test_theorem_a_examples():
    assert theorem_a_predict(2, 2, 1, 4).values == (2, 4, 8, 16)
    assert theorem_a_predict(2, 3, 5, 2).values == (9, 81)
    assert theorem_a_predict(1, 2, 0, 3).values == (1, 1, 1)
    with pytest.raises(DomainError):
        theorem_a_predict(0, 2, 1, 3)


def test_theorem_a_monotone_in_p():
    for k in (1, 2, 3):
        rows = [theorem_a_predict(k, 2, p, 5).values for p in range(5)]
        for lo, hi in zip(rows, rows[1:]):
            assert all(x <= y for x, y in zip(lo, hi))


def test_theorem_b_examples():
    s = theorem_b_predict(CAT, 1, 1, 1, 5)
    assert s.values == (2, 5, 13, 34, 89)
    assert s.params["window"] == [1, 1]
    # k_dim = m collapses the window to a single index
    assert theorem_b_predict(CAT, 2, 2, 2, 3).params["window"] == [2, 2]
    assert theorem_b_predict([[2]], 2, 1, 1, 4).values == (2, 4, 8, 16)
    with pytest.raises(DomainError):
        theorem_b_predict([[1, 2], [2, 4]], 1, 1, 1, 3)
    with pytest.raises(DomainError):
        theorem_b_predict(CAT, 1, 2, 1, 3)


exponent_matrices = st.integers(1, 3).flatmap(
    lambda d: st.lists(st.lists(st.integers(-3, 3), min_size=d, max_size=d), min_size=d, max_size=d)
).map(Matrix).filter(lambda A: sp.Matrix(A.rows).det() != 0)


@SEEDED
@given(exponent_matrices, st.data())
def test_theorem_b_matches_blockwise(A, data):
    k_dim = data.draw(st.integers(1, 3))
    m = data.draw(st.integers(1, k_dim))
    p = data.draw(st.integers(0, A.nrows * k_dim))
    assert theorem_b_predict(A, k_dim, m, p, 4).values == theorem_b_blockwise(A, k_dim, m, p, 4).values


def test_dynamical_degree_examples():
    golden = (3 + 5 ** 0.5) / 2
    assert dynamical_degree(CAT, 1, 1, 0) == 1.0
    assert dynamical_degree(CAT, 1, 1, 1) == pytest.approx(golden, rel=1e-12)
    assert dynamical_degree(CAT, 1, 2, 2) == pytest.approx(golden, rel=1e-12)
    assert dynamical_degree(CAT, 2, 2, 2) == pytest.approx(golden ** 2, rel=1e-12)
    assert f"{dynamical_degree(CAT, 1, 2, 2):.6f}" == "2.618034"


@SEEDED
@given(exponent_matrices, st.data())
def test_dynamical_degrees_are_log_concave(A, data):
    k_dim = data.draw(st.integers(1, 3))
    m = data.draw(st.integers(1, k_dim))
    top = A.nrows * k_dim
    lam = [math.log(dynamical_degree(A, m, k_dim, p)) for p in range(top + 1)]
    for p in range(1, top):
        assert 2 * lam[p] >= lam[p - 1] + lam[p + 1] - 1e-9


def test_dynamical_degree_matches_norm_growth():
    seq = theorem_b_predict(CAT, 1, 1, 1, 30).values
    assert seq[-1] ** (1 / 30) == pytest.approx(dynamical_degree(CAT, 1, 1, 1), rel=0.05)


def test_brute_force_against_sympy():
    names = ["x", "y"]
    xs = sp.symbols("x y")
    f = affine(["x*y", "x + 1"], names)
    seq = brute_force_degrees(f, 5)
    g = list(xs)
    for n, val in enumerate(seq.values, start=1):
        g = [sp.cancel(c.subs({xs[0]: g[0], xs[1]: g[1]}, simultaneous=True)) for c in (xs[0] * xs[1], xs[0] + 1)]
        assert val == sympy_map_degree(g, xs)
    assert seq.provenance is Provenance.BRUTE_FORCE and not seq.truncated


def test_brute_force_monomial_map_agrees_with_prediction():
    f = induce_monomial(MonomialSpec(CAT, split_algebra(1)))
    measured = brute_force_degrees(f, 6)
    predicted = theorem_b_predict(CAT, 1, 1, 1, 6)
    ratios = [a / b for a, b in zip(measured.values, predicted.values)]
    assert all(1 / 2 <= r <= 2 for r in ratios)


def test_brute_force_truncation():
    f = affine(["x^2 + y", "x*y + 1"], ["x", "y"])
    seq = brute_force_degrees(f, 10, term_budget=50)
    assert seq.truncated and len(seq) < 10
    assert seq.values == brute_force_degrees(f, len(seq)).values


def test_brute_force_collapse_reports_iterate():
    with pytest.raises(IndeterminacyError) as err:
        brute_force_degrees(affine(["0", "0"], ["x", "y"]), 3)
    assert err.value.iterate == 1
    # (x, y) -> (1, x) squares to the constant map (1, 1)
    with pytest.raises(IndeterminacyError) as err:
        brute_force_degrees(affine(["1", "x"], ["x", "y"]), 3)
    assert err.value.iterate == 2
    f = affine(["x - y", "x + y"], ["x", "y"])
    assert brute_force_degrees(f, 3).values == (1, 1, 1)
    with pytest.raises(DomainError):
        brute_force_degrees(f, 0)


def test_asymptotic_check_examples():
    v = asymptotic_check([2, 4, 8, 16], [2, 4, 8, 16])
    assert v.passed and v.max_ratio == 1 and v.slope_gap == 0
    v = asymptotic_check([4, 8, 16, 32, 64], [2, 4, 8, 16, 32])
    assert v.passed and v.max_ratio == 2
    assert asymptotic_check([2, 4, 8, 16], [2, 8, 32, 128]).status is Status.FAIL
    assert asymptotic_check([1, 2, 4], [1, 2, 4]).status is Status.INCONCLUSIVE
    assert asymptotic_check([1] * 4, [20] * 4).status is Status.FAIL
    assert asymptotic_check([2, 4, 8, 16], [2, 4, 8, 16]).as_dict()["max_ratio"] == "1.000000"
    with pytest.raises(DomainError):
        asymptotic_check([1, 2], [1, 2, 3])


@SEEDED
@given(st.lists(st.integers(1, 10 ** 6), min_size=4, max_size=8), st.integers(1, 8))
def test_asymptotic_check_accepts_bounded_multiples(seq, c):
    v = asymptotic_check([c * x for x in seq], seq)
    assert v.passed and v.max_ratio == pytest.approx(c)


def test_random_inputs_agree_with_oracles_reproducibly():
    rng = random.Random(17)
    for _ in range(20):
        d = rng.randint(1, 3)
        A = Matrix([[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)])
        if A.nrows and sp.Matrix(A.rows).det() == 0:
            continue
        assert theorem_b_predict(A, 2, 1, 1, 3).values == theorem_b_blockwise(A, 2, 1, 1, 3).values
