import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from f2derived.f2core import SizeError
from f2derived.rchain import cell, complex_sum, dold_kan_K, make_K, make_K_cell, point, random_complex
from f2derived.restricted import direct_sum, free, torsion
from f2derived.unstable import (
    PiUResult,
    U_dims,
    U_simplicial,
    convolve,
    e_infinity_length,
    exterior_dims,
    first_difference,
    phi_split,
    pi_U_closed_form,
    pi_U_dense,
    pi_U_oracle,
    table,
)


def test_U_dims_examples():
    assert U_dims(free(1, 4), 4) == {d: 1 for d in range(5)}
    assert U_dims(torsion(1, 1, 4), 4) == {0: 1, 1: 1}
    assert U_dims(free(0, 4), 4) == {0: 2}
    assert U_dims(direct_sum([free(1, 4), free(2, 4)]), 4) == {0: 1, 1: 1, 2: 2, 3: 2, 4: 3}


def test_U_dims_guards():
    with pytest.raises(SizeError):
        U_dims(direct_sum([free(0, 2)] * 3), 2, boolean_cap=2)
    with pytest.raises(ValueError):
        U_dims(free(1, 4), 5)


def test_exterior_dims():
    assert exterior_dims(direct_sum([torsion(1, 1, 2), torsion(1, 1, 2)]), 2) == {
        (0, 0): 1, (1, 1): 2, (2, 2): 1}


def test_U_simplicial_levels_and_identities():
    A = U_simplicial(make_K(1, 1, 4, 3), 4)
    nonzero = lambda i: {d: c for d, c in A.dims(i).items() if c}
    assert nonzero(0) == {0: 1}
    assert nonzero(1) == {d: 1 for d in range(5)}
    assert nonzero(2)[2] == 3
    for S in [make_K(1, 1, 4, 3), make_K(2, 1, 4, 3), make_K_cell(1, 1, 1, 4, 3)]:
        A = U_simplicial(S, 4)
        for d in range(5):
            assert A.identity_violations(d) == []


def test_oracle_small_examples():
    closed = pi_U_closed_form(point(1, 4, 1), 3, 4)
    assert pi_U_oracle(make_K(1, 1, 4, 4), 3, 4).dims == closed.dims
    # phi is injective on a free point, so only the cokernel class at (1, 1) survives
    assert closed.dims == {(0, 0): 1, (1, 1): 1}
    assert pi_U_oracle(make_K(1, 0, 1, 3), 2, 1).dims == {(0, 0): 1}


def test_sparse_and_dense_agree():
    cases = [make_K(1, 1, 4, 3), make_K(2, 1, 2, 3), make_K_cell(1, 1, 1, 4, 3), make_K(0, 1, 2, 3)]
    for S in cases:
        assert pi_U_oracle(S, 2, 2).dims == pi_U_dense(S, 2, 2).dims


def test_oracle_needs_levels():
    with pytest.raises(ValueError):
        pi_U_oracle(make_K(1, 1, 4, 2), 3, 4)


def test_suspended_kernel_doubles_internal_degree():
    # a cell has homology T(1,1): phi kills the class, whose kernel part lands at (n+1, 2q)
    C = cell(1, 1, 4, 1)
    split = phi_split(C, 4, 4)
    assert split.coker == {(1, 1): 1}
    assert split.ker == {(1, 1): 1} and split.suspended_ker == {(2, 2): 1}
    oracle = pi_U_oracle(dold_kan_K(C, 4), 3, 4)
    assert oracle.dims == pi_U_closed_form(C, 3, 4).dims
    assert oracle.dims[(2, 2)] == 1


def test_closed_form_unit_row():
    C = complex_sum([point(1, 4, 0), point(2, 4, 1)])
    res = pi_U_closed_form(C, 3, 4)
    assert res.row(0) == U_dims(free(1, 4), 4)
    assert pi_U_closed_form(point(0, 4, 2), 3, 4).dims == {(0, 0): 1}


def test_e_infinity_examples():
    E = e_infinity_length(point(1, 4, 1), 2, 2)
    assert E[(0, 0, 0)] == 1 and E[(1, 1, 1)] == 1
    E = e_infinity_length(point(0, 2, 0), 3, 2)
    assert E == {(0, 0, 0): 1, (1, 0, 0): 1}


def test_e_infinity_marginal_matches_closed_form():
    # with no homotopy-0 homology, summing out the filtration gives the closed form
    cases = [point(1, 6, 1), cell(1, 1, 6, 1), complex_sum([point(2, 6, 1), cell(1, 2, 6, 2)]),
             complex_sum([cell(3, 1, 6, 1), point(1, 6, 2)])]
    for C in cases:
        E = e_infinity_length(C, 4, 6)
        flat: dict = {}
        for (_, t, q), c in E.items():
            flat[(t, q)] = flat.get((t, q), 0) + c
        assert flat == pi_U_closed_form(C, 4, 6).dims


def test_kunneth_for_sums():
    A, B = point(1, 6, 1), cell(2, 1, 6, 1)
    lhs = pi_U_closed_form(complex_sum([A, B]), 4, 6).dims
    rhs = convolve(pi_U_closed_form(A, 4, 6).dims, pi_U_closed_form(B, 4, 6).dims,
                   lambda k: k[0] <= 4 and k[1] <= 6)
    assert lhs == rhs


def test_result_json_and_table():
    res = pi_U_closed_form(point(1, 4, 1), 3, 4)
    assert PiUResult.from_json(res.to_json()).dims == res.dims
    assert table(res.dims, 3, 4).splitlines()[0].startswith("t\\q")
    assert first_difference(res.dims, res.dims) is None
    assert first_difference({(0, 0): 1}, {(0, 0): 2}) == ((0, 0), 1, 2)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32))
def test_oracle_matches_closed_form_random(seed):
    rng = random.Random(seed)
    C = random_complex(rng, 3, length=2, pieces=2)
    T, Q = 2, 3
    assert pi_U_oracle(dold_kan_K(C, T + 1), T, Q).dims == pi_U_closed_form(C, T, Q).dims
