import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from f2derived.f2core import (
    ContainmentError,
    F2Matrix,
    SizeError,
    Subspace,
    complement,
    image_basis,
    intersect,
    inverse,
    kernel_basis,
    preimage,
    rank,
    solve,
)


@st.composite
def matrices(draw, max_rows=8, max_cols=8):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    rows = draw(st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r))
    return F2Matrix(r, c, tuple(rows))


def naive_rank(M: F2Matrix) -> int:
    """Row reduction on explicit 0/1 lists, independent of EchelonBasis."""
    A = M.to_lists()
    r = 0
    for col in range(M.ncols):
        piv = next((i for i in range(r, len(A)) if A[i][col]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(len(A)):
            if i != r and A[i][col]:
                A[i] = [x ^ y for x, y in zip(A[i], A[r])]
        r += 1
    return r


def test_rank_examples():
    assert rank(F2Matrix.identity(3)) == 3
    assert rank(F2Matrix.from_lists([[1, 1], [1, 1]])) == 1


def test_rank_matches_independent_reduction():
    rng = random.Random(7)
    for _ in range(200):
        M = F2Matrix(6, 6, tuple(rng.getrandbits(6) for _ in range(6)))
        assert rank(M) == naive_rank(M)


def test_kernel_examples():
    assert kernel_basis(F2Matrix.identity(4)).dim == 0
    assert kernel_basis(F2Matrix.zeros(3, 4)).dim == 4


def test_kernel_against_enumeration():
    rng = random.Random(3)
    for _ in range(40):
        cols = rng.randint(1, 12)
        M = F2Matrix(5, cols, tuple(rng.getrandbits(cols) for _ in range(5)))
        K = kernel_basis(M)
        brute = {x for x in range(1 << cols) if M.apply(x) == 0}
        spanned = set()
        for coeffs in itertools.product([0, 1], repeat=K.dim):
            v = 0
            for c, b in zip(coeffs, K.basis):
                if c:
                    v ^= b
            spanned.add(v)
        assert spanned == brute


def test_solve_examples():
    b = [1, 0, 1]
    assert solve(F2Matrix.identity(3), b) == 0b101
    assert solve(F2Matrix.zeros(2, 2), [1, 0]) is None
    with pytest.raises(ValueError):
        solve(F2Matrix.identity(3), [1, 0])


def test_complement_examples():
    full = Subspace.full(4)
    assert complement(full, full).dim == 0
    assert complement(Subspace.zero(4), full).dim == 4
    with pytest.raises(ContainmentError):
        complement(Subspace.span(3, [0b001]), Subspace.span(3, [0b010]))


def test_complement_random_nested():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(1, 10)
        outer = Subspace.span(n, [rng.getrandbits(n) for _ in range(rng.randint(0, n))])
        inner = Subspace.span(n, [v for v in outer.basis if rng.random() < 0.5])
        C = complement(inner, outer)
        assert C.dim == outer.dim - inner.dim
        assert Subspace.span(n, inner.basis + C.basis).dim == outer.dim
        assert complement(inner, outer) == C


def test_size_cap():
    with pytest.raises(SizeError):
        F2Matrix.zeros(1 << 13, 1 << 14)


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_transpose_and_rank_nullity(M):
    assert rank(M) == rank(M.transpose())
    assert kernel_basis(M).dim + rank(M) == M.ncols
    assert all(M.apply(v) == 0 for v in kernel_basis(M).basis)
    assert image_basis(M).dim == rank(M)


@settings(max_examples=200, deadline=None)
@given(matrices(), st.data())
def test_solve_is_correct_or_certifies_inconsistency(M, data):
    b = data.draw(st.integers(0, (1 << M.nrows) - 1))
    x = solve(M, b)
    if x is not None:
        assert M.apply(x) == b
    else:
        aug = F2Matrix(M.nrows, M.ncols + 1, tuple(r | (((b >> i) & 1) << M.ncols) for i, r in enumerate(M.rows)))
        assert rank(aug) > rank(M)


@settings(max_examples=100, deadline=None)
@given(matrices(6, 6), st.data())
def test_preimage_and_intersection(M, data):
    tgt = Subspace.span(M.nrows, data.draw(st.lists(st.integers(0, (1 << M.nrows) - 1), max_size=4)))
    P = preimage(M, tgt)
    assert all(tgt.contains(M.apply(x)) for x in P.basis)
    brute = [x for x in range(1 << M.ncols) if tgt.contains(M.apply(x))]
    assert len(brute) == 2 ** P.dim
    other = Subspace.span(M.nrows, data.draw(st.lists(st.integers(0, (1 << M.nrows) - 1), max_size=4)))
    inter = intersect(tgt, other)
    assert all(tgt.contains(v) and other.contains(v) for v in inter.basis)


def test_inverse_roundtrip():
    rng = random.Random(5)
    for _ in range(30):
        while True:
            M = F2Matrix(5, 5, tuple(rng.getrandbits(5) for _ in range(5)))
            if rank(M) == 5:
                break
        assert inverse(M) @ M == F2Matrix.identity(5)
