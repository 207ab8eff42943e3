import random
from itertools import product
from math import comb

from hypothesis import given, settings
from hypothesis import strategies as st

from f2derived.f2core import rank_of
from f2derived.rchain import (
    ComplexSummand,
    RVSComplex,
    SimplicialRVS,
    cell,
    complex_from_levels,
    complex_sum,
    complexes_equal,
    copy_count,
    decompose_complex,
    dold_kan_K,
    homology,
    homology_rank_families,
    make_K,
    make_K_cell,
    normalize_N,
    point,
    random_complex,
    reassemble,
    surjection_jumps,
)
from f2derived.restricted import Summand, decompose, free, identity_map, torsion


def test_homology_of_cell_and_point():
    H = homology(cell(1, 2, 8))
    assert decompose(H[0]) == [Summand("T", 1, 2)]
    assert H[1].total_dim == 0
    assert decompose(homology(point(3, 8))[0]) == [Summand("F", 3)]


def test_homology_with_zero_differentials():
    V0, V1 = free(1, 4), torsion(1, 2, 4)
    H = homology(complex_from_levels([V0, V1]))
    assert H[0].dims == V0.dims and H[1].dims == V1.dims


def test_decompose_complex_examples():
    C = complex_sum([cell(1, 1, 8), point(3, 8, 1)])
    assert [str(s) for s in decompose_complex(C)] == ["S^0C(1,1)", "S^1C(3)"]
    V = free(1, 4)
    acyclic = complex_from_levels([V, V], {1: identity_map(V)})
    assert decompose_complex(acyclic) == []


def test_decompose_complex_reassembly_random():
    rng = random.Random(8)
    for _ in range(40):
        C = random_complex(rng, 8, length=3)
        parts = decompose_complex(C)
        R = reassemble(parts, 8)
        assert homology_rank_families(R)[:3] == homology_rank_families(C)[:3]


def test_surjection_counts():
    for i in range(6):
        for j in range(i + 1):
            assert len(surjection_jumps(i, j)) == comb(i, j)
    # brute force: order-preserving surjections [3] -> [2]
    maps = [f for f in product(range(3), repeat=4)
            if list(f) == sorted(f) and set(f) == {0, 1, 2}]
    assert len(maps) == 3


def test_K_level_counts():
    S = dold_kan_K(point(2, 8, 2), 3)
    assert S.levels[3].dim(2) == 3
    C = cell(1, 1, 4)
    assert dold_kan_K(C, 0).levels[0].dims == C.levels[0].dims
    S = make_K(1, 1, 4, 3)
    assert [S.levels[i].dim(1) for i in range(4)] == [0, 1, 2, 3]
    S = make_K(0, 3, 6, 3)
    assert all(S.levels[i].dims == free(3, 6).dims for i in range(4))
    S = make_K_cell(1, 1, 1, 4, 2)
    assert S.levels[1].dims == free(1, 4).dims


def test_K_dims_binomial():
    S = make_K(2, 1, 8, 5)
    for i in range(6):
        for r in range(4):
            assert S.levels[i].dim(1 << r) == copy_count(i, 2)


def test_simplicial_identities():
    for S in [make_K(1, 1, 4, 4), make_K(2, 1, 4, 4), make_K_cell(1, 1, 2, 4, 4), make_K_cell(0, 1, 1, 4, 3)]:
        assert S.identity_violations() == []


def test_normalize_constant_and_round_trip():
    S = make_K(0, 1, 4, 3)
    N = normalize_N(S)
    assert N.levels[0].dims == free(1, 4).dims
    assert all(N.levels[k].total_dim == 0 for k in range(1, 4))
    N = normalize_N(make_K(2, 1, 4, 3))
    assert N.levels[2].dims == free(1, 4).dims
    assert N.levels[0].total_dim == N.levels[1].total_dim == 0


def test_round_trip_random():
    rng = random.Random(21)
    for _ in range(30):
        C = random_complex(rng, rng.randint(1, 8), length=3)
        R = normalize_N(dold_kan_K(C, 3))
        assert complexes_equal(C, RVSComplex(R.levels[:3], R.differentials[:2]))


def _unnormalized_homology_dims(S: SimplicialRVS, q: int, upto: int) -> list[int]:
    ranks = [0]
    for k in range(1, S.level_bound + 1):
        total = None
        for t in range(k + 1):
            M = S.face(k, t).component(q)
            total = M if total is None else total + M
        ranks.append(rank_of(total.columns()))
    ranks.append(0)
    return [S.levels[k].dim(q) - ranks[k] - ranks[k + 1] for k in range(upto + 1)]


def test_unnormalized_matches_normalized():
    rng = random.Random(13)
    for _ in range(15):
        C = random_complex(rng, 4, length=3)
        S = dold_kan_K(C, 4)
        N = normalize_N(S)
        for q in range(5):
            normalized = []
            for k in range(4):
                z = N.levels[k].dim(q) - (rank_of(N.d(k).component(q).columns()) if k else 0)
                b = rank_of(N.d(k + 1).component(q).columns())
                normalized.append(z - b)
            assert _unnormalized_homology_dims(S, q, 3) == normalized


def test_complex_json_round_trip():
    C = random_complex(random.Random(3), 6)
    assert complexes_equal(RVSComplex.from_json(C.to_json()), C)


def test_complex_check_detects_bad_square():
    V = free(1, 2)
    C = complex_from_levels([V, V, V], {1: identity_map(V), 2: identity_map(V)})
    assert C.check() != []


def test_complex_summand_complex():
    s = ComplexSummand("cell", 1, 1, 2)
    assert str(s) == "S^1C(1,2)"
    assert complexes_equal(s.complex(8), cell(1, 2, 8, 1))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_dd_zero_and_decomposition_matches_homology(seed):
    rng = random.Random(seed)
    C = random_complex(rng, rng.randint(1, 8), length=3)
    assert C.check() == []
    H = homology(C)
    parts = decompose_complex(C)
    for n in range(3):
        expected = []
        for s in decompose(H[n]):
            kind = {"F": "point", "F?": "point?", "T": "cell"}[s.kind]
            expected.append((kind, s.n, s.k))
        got = sorted((p.kind, p.q, p.k) for p in parts if p.n == n)
        assert got == sorted(expected)
