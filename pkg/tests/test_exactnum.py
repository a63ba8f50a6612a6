import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from algdeg.errors import DomainError
from algdeg.exactnum import (
    Matrix, UniPoly, block_diag, char_poly, det, exterior_power, inverse, kernel_basis, matrix_power,
    norm_max, rank, rat, solve_linear, spectral_moduli, squarefree_decomposition, squarefree_degree,
)

SEEDED = settings(max_examples=100, derandomize=True, deadline=None)

small_ints = st.integers(-5, 5)


def square(n):
    return st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n).map(Matrix)


def test_rat_normalises_integral_fractions():
    assert rat(Fraction(4, 2)) == 2 and type(rat(Fraction(4, 2))) is int
    assert rat("5/2") == Fraction(5, 2)
    with pytest.raises(TypeError):
        rat(0.5)


def test_matrix_printing_and_products():
    A = Matrix([[2, 1], [1, 1]])
    assert str(A) == "[[2,1],[1,1]]"
    assert A @ (1, 0) == (2, 1)
    assert matrix_power(A, 3) == Matrix([[13, 8], [8, 5]])
    assert norm_max(matrix_power(A, 5)) == 89


def test_det_examples():
    assert det([[2, 1], [1, 1]]) == 1
    assert det([[0, 1], [1, 0]]) == -1
    assert det([[1, 2], [2, 4]]) == 0
    assert det([[Fraction(1, 2), 0], [0, 4]]) == 2


def test_linear_algebra_against_sympy():
    rng = random.Random(7)
    for _ in range(100):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        rows = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(c)] for _ in range(r)]
        M = Matrix(rows)
        S = sp.Matrix(rows)
        assert rank(M) == S.rank()
        if r == c:
            assert det(M) == S.det()
            assert char_poly(M).coeffs == tuple(reversed([rat(Fraction(str(x))) for x in S.charpoly().all_coeffs()]))
        for v in kernel_basis(M):
            assert all(x == 0 for x in M @ v)
        assert len(kernel_basis(M)) == c - S.rank()


def test_solve_and_inverse():
    A = Matrix([[2, 1], [1, 1]])
    assert solve_linear(A, (3, 2)) == (1, 1)
    assert solve_linear(Matrix([[1, 1], [1, 1]]), (1, 2)) is None
    assert inverse(A) @ A == Matrix.identity(2)
    with pytest.raises(DomainError):
        inverse([[1, 2], [2, 4]])


def test_exterior_power_examples():
    A = Matrix([[2, 1], [1, 1]])
    assert exterior_power(A, 1) == A
    assert exterior_power(A, 2) == Matrix([[1]])
    with pytest.raises(DomainError):
        exterior_power(A, 3)


@SEEDED
@given(st.integers(2, 4).flatmap(lambda n: st.tuples(square(n), square(n), st.integers(1, n))))
def test_cauchy_binet(data):
    A, B, i = data
    assert exterior_power(A @ B, i) == exterior_power(A, i) @ exterior_power(B, i)


@SEEDED
@given(st.integers(1, 4).flatmap(square))
def test_top_exterior_power_is_determinant(A):
    assert exterior_power(A, A.nrows) == Matrix([[det(A)]])


def test_block_diag():
    A = Matrix([[2, 1], [1, 1]])
    D = block_diag(A, 2)
    assert D.shape == (4, 4)
    assert D.rows[2][2:] == (2, 1) and D.rows[0][2:] == (0, 0)


def test_unipoly_arithmetic():
    t = UniPoly.x()
    p = (t - 1) * (t + 2)
    assert p.coeffs == (-2, 1, 1)
    q, r = divmod(p, t - 1)
    assert q == t + 2 and r.is_zero()
    assert p.format() == "t^2 + t - 2"
    assert UniPoly([]).degree == -1
    assert p.derivative() == UniPoly([1, 2])


def test_squarefree():
    t = UniPoly.x()
    p = (t - 1) ** 3 * (t + 1)
    assert squarefree_degree(p) == 2
    parts = squarefree_decomposition(p)
    assert {(f.coeffs, k) for f, k in parts} == {((1, 1), 1), ((-1, 1), 3)}
    assert squarefree_degree(UniPoly.from_roots([0, 0, 0])) == 1


def test_char_poly_and_moduli():
    A = Matrix([[2, 1], [1, 1]])
    assert char_poly(A) == UniPoly([1, -3, 1])
    mods = spectral_moduli(A)
    assert mods[0] == pytest.approx((3 + 5 ** 0.5) / 2, abs=1e-9)
    assert mods[1] == pytest.approx((3 - 5 ** 0.5) / 2, abs=1e-9)
    # repeated and complex eigenvalues
    assert spectral_moduli([[0, -1], [1, 0]]) == pytest.approx([1, 1])
    assert spectral_moduli([[2, 1], [0, 2]]) == pytest.approx([2, 2])
