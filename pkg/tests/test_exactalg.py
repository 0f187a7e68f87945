from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from morleyduality.exactalg import (Field, Reducer, is_prime, nullspace, quotient_coords, rank, rref,
                                    solve_in_span)

P = 101


def small_matrices(max_side=6, lo=-3, hi=3):
    return st.integers(1, max_side).flatmap(
        lambda r: st.integers(1, max_side).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)))


def test_field_rejects_composite_and_large_moduli():
    with pytest.raises(ValueError):
        Field(4)
    with pytest.raises(ValueError):
        Field(2**31 + 11)
    assert Field(65537).modulus == 65537
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_scalar_forms():
    q = Field(0)
    assert q(Fraction(4, 6)) == Fraction(2, 3)
    assert q(Fraction(4, 6)).denominator == 3
    assert Field(7)(-1) == 6
    assert Field(7)(Fraction(1, 2)) == 4


@given(st.integers(1, P - 1))
def test_inverse_mod_p(a):
    f = Field(P)
    assert f(a * f.inv(a)) == 1


@given(st.fractions().filter(lambda x: x != 0))
def test_inverse_rational(a):
    f = Field(0)
    assert f(a) * f.inv(f(a)) == 1


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        Field(5).inv(0)


def test_rref_examples(field):
    r, piv, rk = rref(field, [[1, 0], [0, 1]])
    assert r.tolist() == [[1, 0], [0, 1]] and piv == [0, 1] and rk == 2
    r, piv, rk = rref(field, [[0, 0], [0, 0], [0, 0]])
    assert not np.any(r != 0) and piv == [] and rk == 0
    r, piv, rk = rref(field, [[1, 2], [2, 4]])
    assert r.tolist() == [[1, 2], [0, 0]] and rk == 1


def test_rref_matches_sympy_over_rationals():
    m = [[2, 4, 1], [1, 2, 0], [3, 6, 1]]
    r, piv, rk = rref(Field(0), m)
    sr, spiv = sympy.Matrix(m).rref()
    assert r.tolist() == sr.tolist()
    assert tuple(piv) == spiv


def test_nullspace_examples(field):
    assert nullspace(field, [[1, 0], [0, 1]]).shape == (2, 0)
    assert nullspace(field, [[0, 0, 0], [0, 0, 0]]).shape == (3, 3)
    ns = nullspace(field, [[1, 1]])
    assert ns.shape == (2, 1)
    assert ns[1, 0] == 1 and ns[0, 0] == field(-1)


def test_solve_in_span_examples(field):
    b = field.array([3, 7])
    assert solve_in_span(field, field.eye(2), b).tolist() == b.tolist()
    assert solve_in_span(field, [[1], [0]], [0, 1]) is None
    assert solve_in_span(field, [[1, 1]], [2]).tolist() == [2, 0]
    with pytest.raises(ValueError):
        solve_in_span(field, [[1, 1]], [1, 2])


def test_quotient_coords_examples(field):
    assert not np.any(quotient_coords(field, field.eye(2), [5, 9]) != 0)
    assert quotient_coords(field, field.zeros((3, 0)), [1, 2, 3]).tolist() == [1, 2, 3]
    assert quotient_coords(field, [[1], [0]], [3, 5]).tolist() == [5]
    with pytest.raises(ValueError):
        quotient_coords(field, [[1], [0]], [3])


@given(small_matrices(lo=0, hi=P - 1))
def test_rank_transpose_and_nullspace_mod_p(m):
    f = Field(P)
    a = f.array(m)
    assert rank(f, a) == rank(f, a.T.copy())
    ns = nullspace(f, a)
    assert ns.shape[1] == a.shape[1] - rank(f, a)
    assert not np.any(f.matmul(a, ns) != 0)


@given(small_matrices(lo=0, hi=P - 1))
def test_rref_idempotent(m):
    f = Field(P)
    r, piv, rk = rref(f, m)
    r2, piv2, rk2 = rref(f, r)
    assert np.array_equal(r, r2) and piv == piv2 and rk == rk2
    assert piv == sorted(set(piv))


@given(small_matrices())
def test_rank_agrees_with_sympy_and_primes(m):
    expect = sympy.Matrix(m).rank()
    assert rank(Field(0), m) == expect
    ranks = [rank(Field(p), m) for p in (101, 65537)]
    assert max(ranks) <= expect
    # Hadamard: |minor| <= (3*sqrt(6))^6 < 101*65537, so no nonzero minor dies mod both primes
    assert expect in ranks


@given(small_matrices(lo=0, hi=P - 1), st.lists(st.integers(0, P - 1), min_size=6, max_size=6))
def test_reducer_kills_exactly_the_span(m, coeffs):
    f = Field(P)
    a = f.array(m)
    red = Reducer(f, a, a.shape[1])
    combo = f.matmul(f.array(coeffs[: a.shape[0]]), a)
    assert red.contains(combo)
    assert red.coords(combo) is not None
    res = red.reduce(f.array(coeffs[: a.shape[1]] + [0] * max(0, a.shape[1] - 6))[: a.shape[1]])
    assert not np.any(res[red.pivots] != 0)
