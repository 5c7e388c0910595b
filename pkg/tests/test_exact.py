from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.matrices import DomainMatrix

from symcone.exact import (
    NotSymmetricError,
    RatMatrix,
    SingularMatrixError,
    as_rat,
    det,
    inverse,
    is_negative_semidefinite,
    nullspace,
    rank,
    signature,
    solve,
    solve_any,
)
from symcone.surfaces import Z_BASIS, z_gram_from_graph

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=7)


def matrices(m, n):
    return st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=m, max_size=m).map(
        lambda rows: RatMatrix(rows, n)
    )


def square(n):
    return matrices(n, n)


def _dm(M: RatMatrix) -> DomainMatrix:
    return DomainMatrix([[sp.QQ(x.numerator, x.denominator) for x in r] for r in M.entries], M.shape, sp.QQ)


def _sym(M: RatMatrix) -> sp.Matrix:
    return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in r] for r in M.entries])


def test_rank_small_cases():
    assert rank(RatMatrix.identity(3)) == 3
    assert rank(RatMatrix.zeros(2, 5)) == 0
    assert rank(RatMatrix([[1, 2], [2, 4]])) == 1


def test_det_hand_values():
    assert det(RatMatrix([[-2, 1], [1, -1]])) == 1
    assert det(RatMatrix.identity(4)) == 1
    # cofactor expansion along the first row: 2(4-0) - 1(0-3) + 0
    assert det(RatMatrix([[2, 1, 0], [0, 2, 1], [3, 0, 2]])) == 11
    assert det(RatMatrix([[Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 2), 0]])) == Fraction(-1, 4)


def test_det_requires_square():
    with pytest.raises(ValueError):
        det(RatMatrix([[1, 2, 3]]))


def test_z_gram_unimodular():
    G = z_gram_from_graph()
    assert det(G) in (1, -1)
    assert signature(G) == (1, 9, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6).flatmap(lambda m: st.integers(1, 6).flatmap(lambda n: matrices(m, n))))
def test_rank_agrees_with_sympy(M):
    assert rank(M) == _dm(M).rank()


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6).flatmap(square))
def test_det_agrees_with_sympy(M):
    ref = _dm(M).det()
    assert det(M) == Fraction(int(ref.numerator), int(ref.denominator))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(square(n), square(n))))
def test_det_multiplicative(AB):
    A, B = AB
    assert det(A @ B) == det(A) * det(B)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda m: st.integers(1, 5).flatmap(lambda n: matrices(m, n))))
def test_rank_of_transpose(M):
    assert rank(M.T) == rank(M)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda m: st.integers(1, 5).flatmap(lambda n: matrices(m, n))))
def test_nullspace_dimension_and_kernel(M):
    ker = nullspace(M)
    assert len(ker) == M.ncols - rank(M)
    for v in ker:
        assert all(x == 0 for x in M @ v)


def test_solve_examples():
    assert solve(RatMatrix.identity(3), (1, Fraction(2, 3), -5)) == (1, Fraction(2, 3), -5)
    assert solve(RatMatrix([[2, 0], [0, 4]]), (2, 8)) == (1, 2)
    with pytest.raises(SingularMatrixError):
        solve(RatMatrix([[1, 2], [2, 4]]), (1, 1))
    assert solve_any(RatMatrix([[1, 2], [2, 4]]), (1, 1)) is None


def test_solve_locates_e34_in_z():
    G = z_gram_from_graph()
    b = [0] * 10
    for label in ("E3", "E4", "E(12)(34)"):
        b[Z_BASIS.index(label)] = 1
    x = solve(G, b)
    assert G.bilinear(x, x) == -2
    basis = [tuple(int(i == j) for j in range(10)) for i in range(10)]
    hits = [Z_BASIS[i] for i, e in enumerate(basis) if G.bilinear(x, e) != 0]
    assert sorted(hits) == sorted(["E3", "E4", "E(12)(34)"])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(square))
def test_inverse_round_trip(M):
    if det(M) == 0:
        with pytest.raises(SingularMatrixError):
            inverse(M)
    else:
        assert inverse(M) @ M == RatMatrix.identity(M.nrows)


def test_signature_examples():
    assert signature(RatMatrix.diagonal([1, -1, -1])) == (1, 2, 0)
    assert signature(RatMatrix([[0, 0], [0, -2]])) == (0, 1, 1)
    assert signature(RatMatrix([[0, 1], [1, 0]])) == (1, 1, 0)
    with pytest.raises(NotSymmetricError):
        signature(RatMatrix([[0, 1], [2, 0]]))


def test_nsd_examples():
    assert is_negative_semidefinite(RatMatrix([[0, 0], [0, -2]]))
    assert is_negative_semidefinite(RatMatrix([[-2, 1], [1, Fraction(-1, 2)]]))
    h = Fraction(1, 2)
    assert is_negative_semidefinite(RatMatrix([[-h, h], [h, -h]]))
    assert not is_negative_semidefinite(RatMatrix.identity(2))
    # all leading minors fine, but a lower principal minor is not
    assert not is_negative_semidefinite(RatMatrix([[0, 0], [0, 1]]))


def symmetric(n):
    return st.lists(rationals, min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2).map(
        lambda vals: _fill_symmetric(n, vals)
    )


def _fill_symmetric(n, vals):
    it = iter(vals)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = next(it)
    return RatMatrix(rows, n)


def _sign_changes(coeffs):
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(a != b for a, b in zip(signs, signs[1:]))


def _descartes_signature(M: RatMatrix):
    # a symmetric matrix has only real eigenvalues, so Descartes' rule is exact
    x = sp.Symbol("x")
    coeffs = list(reversed(_sym(M).charpoly(x).all_coeffs()))  # constant term first
    zeros = next(i for i, c in enumerate(coeffs) if c != 0)
    q = coeffs[zeros:]
    pos = _sign_changes(q)
    neg = _sign_changes([c * (-1) ** i for i, c in enumerate(q)])
    return pos, neg, zeros


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6).flatmap(symmetric))
def test_nsd_and_signature_agree_with_charpoly(M):
    pos, neg, zeros = _descartes_signature(M)
    assert signature(M) == (pos, neg, zeros)
    assert is_negative_semidefinite(M) == (pos == 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(symmetric), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_nsd_never_positive_on_lattice_points(M, v):
    if is_negative_semidefinite(M):
        v = v[: M.nrows]
        assert M.bilinear(v, v) <= 0


@settings(max_examples=40, deadline=None)
@given(
    symmetric(3),
    st.lists(rationals, min_size=3, max_size=3),
    st.lists(rationals, min_size=3, max_size=3),
    st.lists(rationals, min_size=3, max_size=3),
    rationals,
)
def test_bilinear_form_is_bilinear_and_symmetric(M, x, y, z, c):
    xy = [a + c * b for a, b in zip(x, y)]
    assert M.bilinear(xy, z) == M.bilinear(x, z) + c * M.bilinear(y, z)
    assert M.bilinear(x, z) == M.bilinear(z, x)


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_rat(0.5)
    with pytest.raises(TypeError):
        RatMatrix([[1.0, 0], [0, 1]])
    assert as_rat("3/4") == Fraction(3, 4)


def test_shape_errors():
    with pytest.raises(ValueError):
        RatMatrix([[1, 2], [3]])
    with pytest.raises(ValueError):
        RatMatrix.identity(2) @ RatMatrix.identity(3)
