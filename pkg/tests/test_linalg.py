import itertools

import numpy as np
import pytest
from hypothesis import given

from tests.strategies import matrices
from torsionlab.linalg import (
    Mat,
    PrimeField,
    image_basis,
    inverse,
    kernel_basis,
    quotient,
    rank,
    rref,
    solve,
)

F2 = PrimeField(2)
F5 = PrimeField(5)


def test_prime_validation():
    with pytest.raises(ValueError):
        PrimeField(6)
    with pytest.raises(ValueError):
        PrimeField(1)
    PrimeField(251)


def test_rref_rank_one_over_f5():
    # hand reduction: subtract twice row 0, leaving a single pivot in column 0
    m = Mat(F5, [[1, 2], [2, 4]])
    r, piv = rref(m)
    assert piv == (0,)
    assert r.tolist() == [[1, 2], [0, 0]]
    assert rank(m) == 1


def test_kernel_matches_enumeration_over_f2():
    m = Mat(F2, [[1, 1, 0], [0, 1, 1]])
    # oracle: walk all 8 vectors of F_2^3 and keep those killed by m
    killed = [
        v
        for v in itertools.product((0, 1), repeat=3)
        if not ((m.a @ np.array(v)) % 2).any()
    ]
    assert set(killed) == {(0, 0, 0), (1, 1, 1)}
    k = kernel_basis(m)
    assert k.cols == 1
    assert tuple(int(x) for x in k.a[:, 0]) == (1, 1, 1)


def test_zero_sized_shapes():
    z = Mat.zeros(F2, 0, 3)
    assert rank(z) == 0
    assert kernel_basis(z).shape == (3, 3)
    zz = Mat.zeros(F2, 3, 0)
    assert kernel_basis(zz).shape == (0, 0)
    assert (z @ Mat.zeros(F2, 3, 2)).shape == (0, 2)
    assert image_basis(zz).shape == (3, 0)


def test_solve_reports_inconsistency():
    m = Mat(F2, [[1, 1], [1, 1]])
    b = Mat(F2, [[1], [0]])
    assert solve(m, b) is None


def test_solve_batched_rhs():
    m = Mat(F5, [[1, 2], [3, 4]])
    b = Mat(F5, [[1, 0], [0, 1]])
    x, k = solve(m, b)
    assert (m @ x) == b
    assert k.cols == 0


def test_inverse_round_trip():
    m = Mat(F5, [[1, 2], [3, 4]])
    assert (inverse(m) @ m) == Mat.identity(F5, 2)
    with pytest.raises(ValueError):
        inverse(Mat(F5, [[1, 2], [2, 4]]))


def test_quotient_contract():
    basis = Mat(F2, [[1], [1], [1]])
    q, s = quotient(F2, 3, basis)
    assert q.shape == (2, 3)
    assert s.shape == (3, 2)
    assert (q @ s) == Mat.identity(F2, 2)
    assert (q @ basis).is_zero()


def test_quotient_rejects_dependent_basis():
    with pytest.raises(ValueError):
        quotient(F2, 2, Mat(F2, [[1, 1], [0, 0]]))


def test_quotient_by_zero_subspace_is_identity():
    q, s = quotient(F5, 3, Mat.zeros(F5, 3, 0))
    assert q == Mat.identity(F5, 3)
    assert s == Mat.identity(F5, 3)


@given(matrices())
def test_rref_idempotent(m):
    r, piv = rref(m)
    r2, piv2 = rref(r)
    assert r == r2 and piv == piv2


@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + kernel_basis(m).cols == m.cols


@given(matrices())
def test_kernel_columns_are_killed(m):
    k = kernel_basis(m)
    assert (m @ k).is_zero()
    assert rank(k) == k.cols


@given(matrices())
def test_image_basis_spans(m):
    im = image_basis(m)
    assert rank(im) == im.cols == rank(m)
    # every column of m is expressible in the image basis
    assert solve(im, m) is not None


@given(matrices())
def test_solve_substitutes(m):
    rng = np.random.default_rng(0)
    x0 = Mat(m.field, rng.integers(0, m.field.p, size=(m.cols, 1)))
    b = m @ x0
    got = solve(m, b)
    assert got is not None
    x, k = got
    assert (m @ x) == b
    if k.cols:
        assert (m @ k).is_zero()


@given(matrices(max_dim=3))
def test_quotient_dimension(m):
    sub = image_basis(m)
    q, s = quotient(m.field, m.rows, sub)
    assert q.rows == m.rows - sub.cols
    assert (q @ sub).is_zero()
    assert (q @ s) == Mat.identity(m.field, q.rows)
