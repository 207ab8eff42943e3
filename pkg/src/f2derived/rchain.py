"""Chain complexes and simplicial objects of restricted vector spaces.

The Dold-Kan functors live here: ``dold_kan_K`` builds a simplicial object
out of a chain complex, ``normalize_N`` recovers the complex as the
intersection of the kernels of the faces d_1, ..., d_k.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

from .f2core import EchelonBasis, F2Matrix, Subspace, block_diagonal, complement, inverse, kernel_basis, vstack
from .restricted import (
    RestrictedVS,
    RVSMap,
    Summand,
    change_basis,
    decompose,
    direct_sum,
    free,
    random_invertible,
    rank_family,
    torsion,
)


@dataclass(frozen=True)
class RVSComplex:
    """levels[n] in homological degree n; differentials[n-1] is d_n: levels[n] -> levels[n-1]."""

    levels: tuple[RestrictedVS, ...]
    differentials: tuple[RVSMap, ...]

    def __post_init__(self):
        if not self.levels:
            raise ValueError("a complex needs at least one level")
        if len(self.differentials) != len(self.levels) - 1:
            raise ValueError("need exactly one differential per positive level")
        N = self.levels[0].N
        if any(V.N != N for V in self.levels):
            raise ValueError("levels have different truncation windows")

    @property
    def N(self) -> int:
        return self.levels[0].N

    @property
    def length(self) -> int:
        return len(self.levels)

    def d(self, n: int) -> RVSMap:
        return self.differentials[n - 1]

    def check(self) -> list[str]:
        """Problems with the complex: d not commuting with phi, or d∘d != 0."""
        problems = []
        for n, f in enumerate(self.differentials, start=1):
            if f.source is not self.levels[n] and f.source != self.levels[n]:
                problems.append(f"d_{n} has the wrong source")
            if not f.commutes():
                problems.append(f"d_{n} does not commute with phi")
        for n in range(2, self.length):
            for q in range(self.N + 1):
                if not (self.d(n - 1).component(q) @ self.d(n).component(q)).is_zero():
                    problems.append(f"d_{n - 1} d_{n} != 0 in internal degree {q}")
        return problems

    def to_json(self) -> dict:
        return {
            "levels": [V.to_json() for V in self.levels],
            "differentials": [
                {str(q): M.to_lists() for q, M in sorted(f.components.items())
                 if M.nrows and M.ncols and not M.is_zero()}
                for f in self.differentials
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> RVSComplex:
        if "levels" not in data:
            raise ValueError("complex JSON needs a 'levels' list")
        levels = [RestrictedVS.from_json(v) for v in data["levels"]]
        if not levels:
            raise ValueError("complex JSON has no levels")
        N = levels[0].N
        diffs_json = list(data.get("differentials", []))
        if len(diffs_json) > len(levels) - 1:
            raise ValueError("more differentials than positive levels")
        diffs_json += [{}] * (len(levels) - 1 - len(diffs_json))
        diffs = []
        for n, dj in enumerate(diffs_json, start=1):
            src, tgt = levels[n], levels[n - 1]
            comps = {}
            for q in range(N + 1):
                rows = dj.get(str(q))
                if rows is None:
                    comps[q] = F2Matrix.zeros(tgt.dim(q), src.dim(q))
                    continue
                if len(rows) != tgt.dim(q) or any(len(r) != src.dim(q) for r in rows):
                    raise ValueError(f"d_{n} in internal degree {q} must have shape {tgt.dim(q)}x{src.dim(q)}")
                comps[q] = F2Matrix.from_lists(rows, src.dim(q))
            diffs.append(RVSMap(src, tgt, comps))
        return cls(tuple(levels), tuple(diffs))


def zero_differential(src: RestrictedVS, tgt: RestrictedVS) -> RVSMap:
    return RVSMap(src, tgt, {q: F2Matrix.zeros(tgt.dim(q), src.dim(q)) for q in range(src.N + 1)})


def complex_from_levels(levels: Sequence[RestrictedVS], diffs: Mapping[int, RVSMap] | None = None) -> RVSComplex:
    diffs = dict(diffs or {})
    out = [diffs.get(n) or zero_differential(levels[n], levels[n - 1]) for n in range(1, len(levels))]
    return RVSComplex(tuple(levels), tuple(out))


def concentrated(V: RestrictedVS, n: int) -> RVSComplex:
    """Sigma^n V: the complex with V in degree n and nothing else."""
    zero = RestrictedVS.build(V.N)
    return complex_from_levels([zero] * n + [V])


def point(q: int, N: int, n: int = 0) -> RVSComplex:
    """Sigma^n C(q)."""
    return concentrated(free(q, N), n)


def cell(q: int, k: int, N: int, n: int = 0) -> RVSComplex:
    """Sigma^n C(q, k): F(2^k q) in degree n+1 included into F(q) in degree n."""
    if (q << k) > N:
        raise ValueError(f"C({q},{k}) needs 2^k q <= N = {N}")
    lo, hi = free(q, N), free(q << k, N)
    comps = {d: F2Matrix.identity(1) for d in range(N + 1) if hi.dim(d)}
    diff = RVSMap(hi, lo, comps)
    zero = RestrictedVS.build(N)
    return complex_from_levels([zero] * n + [lo, hi], {n + 1: diff})


def complex_sum(complexes: Sequence[RVSComplex], N: int | None = None) -> RVSComplex:
    """Direct sum, padding shorter complexes with zero levels."""
    if not complexes:
        if N is None:
            raise ValueError("need N for an empty sum")
        return RVSComplex((RestrictedVS.build(N),), ())
    N = complexes[0].N
    length = max(c.length for c in complexes)
    zero = RestrictedVS.build(N)

    def level(c, n):
        return c.levels[n] if n < c.length else zero

    levels = [direct_sum([level(c, n) for c in complexes], N) for n in range(length)]
    diffs = []
    for n in range(1, length):
        comps = {}
        for q in range(N + 1):
            blocks = []
            for c in complexes:
                if n < c.length:
                    blocks.append(c.d(n).component(q))
                else:
                    blocks.append(F2Matrix.zeros(level(c, n - 1).dim(q), 0))
            comps[q] = block_diagonal(blocks)
        diffs.append(RVSMap(levels[n], levels[n - 1], comps))
    return RVSComplex(tuple(levels), tuple(diffs))


# ---------------------------------------------------------------- homology

@dataclass(frozen=True)
class HomologyData:
    space: RestrictedVS
    reps: dict[int, list[int]]       # internal degree -> cycle representatives
    boundaries: dict[int, Subspace]  # internal degree -> image of d_{n+1}


def homology_data(C: RVSComplex, n: int) -> HomologyData:
    N = C.N
    V = C.levels[n]
    reps: dict[int, list[int]] = {}
    bounds: dict[int, Subspace] = {}
    for q in range(N + 1):
        Z = kernel_basis(C.d(n).component(q)) if n > 0 else Subspace.full(V.dim(q))
        if n + 1 < C.length:
            B = Subspace.span(V.dim(q), C.d(n + 1).component(q).columns())
        else:
            B = Subspace.zero(V.dim(q))
        bounds[q] = B
        reps[q] = list(complement(B, Z).basis)
    phi = {}
    for i in range(N // 2 + 1):
        eb = EchelonBasis()
        for b in bounds[2 * i].basis:
            eb.add(b, 0)
        for j, r in enumerate(reps[2 * i]):
            eb.add(r, 1 << j)
        cols = []
        for r in reps[i]:
            rest, tag = eb.reduce(V.phi[i].apply(r))
            if rest:
                raise ValueError("phi does not preserve cycles; differential is not a restricted map")
            cols.append(tag)
        phi[i] = F2Matrix.from_columns(cols, len(reps[2 * i]))
    H = RestrictedVS(N, tuple(len(reps[q]) for q in range(N + 1)), phi)
    return HomologyData(H, reps, bounds)


def homology(C: RVSComplex) -> list[RestrictedVS]:
    return [homology_data(C, n).space for n in range(C.length)]


# ----------------------------------------------------- complex decomposition

@dataclass(frozen=True, order=True)
class ComplexSummand:
    """``point`` = Sigma^n C(q), ``cell`` = Sigma^n C(q,k), ``point?`` = Sigma^n C(q) beyond the window."""

    kind: str
    n: int
    q: int
    k: int = 0

    def __str__(self) -> str:
        if self.kind == "cell":
            return f"S^{self.n}C({self.q},{self.k})"
        mark = "?" if self.kind == "point?" else ""
        return f"S^{self.n}C({self.q}){mark}"

    def complex(self, N: int) -> RVSComplex:
        if self.kind == "cell":
            return cell(self.q, self.k, N, self.n)
        return point(self.q, N, self.n)


def to_complex_summand(s: Summand, n: int) -> ComplexSummand:
    if s.kind == "T":
        return ComplexSummand("cell", n, s.n, s.k)
    return ComplexSummand("point" if s.kind == "F" else "point?", n, s.n)


def decompose_complex(C: RVSComplex) -> list[ComplexSummand]:
    out = []
    for n, H in enumerate(homology(C)):
        out.extend(to_complex_summand(s, n) for s in decompose(H))
    return sorted(out)


def reassemble(summands: Iterable[ComplexSummand], N: int) -> RVSComplex:
    return complex_sum([s.complex(N) for s in summands], N)


def homology_rank_families(C: RVSComplex) -> list[dict]:
    fams = [rank_family(H) for H in homology(C)]
    while fams and not any(fams[-1].values()):
        fams.pop()
    return fams


# -------------------------------------------------------------- Dold-Kan

def surjection_jumps(i: int, j: int) -> list[tuple[int, ...]]:
    """Order-preserving surjections [i] -> [j], as increment-step sets, in lexicographic order."""
    return list(combinations(range(1, i + 1), j))


def _values(jumps: tuple[int, ...], i: int) -> list[int]:
    out, v, js = [], 0, set(jumps)
    for p in range(i + 1):
        if p in js:
            v += 1
        out.append(v)
    return out


def _jumps(values: Sequence[int]) -> tuple[int, ...]:
    return tuple(p for p in range(1, len(values)) if values[p] != values[p - 1])


def coface(t: int, m: int) -> list[int]:
    """d^t : [m-1] -> [m], skipping t."""
    return [p if p < t else p + 1 for p in range(m)]


def codegeneracy(t: int, m: int) -> list[int]:
    """s^t : [m+1] -> [m], hitting t twice."""
    return [p if p <= t else p - 1 for p in range(m + 2)]


@dataclass(frozen=True)
class Component:
    j: int
    jumps: tuple[int, ...]


def components(i: int, top: int) -> list[Component]:
    return [Component(j, J) for j in range(min(i, top) + 1) for J in surjection_jumps(i, j)]


def pull_component(comp: Component, i: int, theta: Sequence[int]) -> tuple[str, Component] | None:
    """Where the component alpha goes under theta^* : the id case, the d case, or nowhere."""
    vals = _values(comp.jumps, i)
    composite = [vals[p] for p in theta]
    lo, hi = composite[0], composite[-1]
    if any(b - a > 1 for a, b in zip(composite, composite[1:])):
        return None
    if lo == 0 and hi == comp.j:
        return "id", Component(comp.j, _jumps(composite))
    if lo == 1 and hi == comp.j:
        return "d", Component(comp.j - 1, _jumps([v - 1 for v in composite]))
    return None


@dataclass(frozen=True)
class SimplicialRVS:
    """Levels 0..L with faces[i][t] : level i -> i-1 and degens[i][t] : level i -> i+1."""

    levels: tuple[RestrictedVS, ...]
    faces: tuple[tuple[RVSMap, ...], ...]
    degens: tuple[tuple[RVSMap, ...], ...]

    @property
    def level_bound(self) -> int:
        return len(self.levels) - 1

    @property
    def N(self) -> int:
        return self.levels[0].N

    def face(self, i: int, t: int) -> RVSMap:
        return self.faces[i][t]

    def degen(self, i: int, t: int) -> RVSMap:
        return self.degens[i][t]

    def identity_violations(self) -> list[str]:
        """Simplicial identities checked wherever both sides fit below the bound."""
        bad = []
        L, N = self.level_bound, self.N

        def eq(f: RVSMap, g: RVSMap) -> bool:
            return all(f.component(q) == g.component(q) for q in range(N + 1))

        def ident(i: int) -> RVSMap:
            V = self.levels[i]
            return RVSMap(V, V, {q: F2Matrix.identity(V.dim(q)) for q in range(N + 1)})

        for k in range(2, L + 1):
            for a in range(k + 1):
                for b in range(a + 1, k + 1):
                    if not eq(self.face(k - 1, a) @ self.face(k, b), self.face(k - 1, b - 1) @ self.face(k, a)):
                        bad.append(f"d{a} d{b} != d{b - 1} d{a} at level {k}")
        for k in range(0, L - 1):
            for a in range(k + 1):
                for b in range(a, k + 1):
                    if not eq(self.degen(k + 1, a) @ self.degen(k, b), self.degen(k + 1, b + 1) @ self.degen(k, a)):
                        bad.append(f"s{a} s{b} != s{b + 1} s{a} at level {k}")
        for k in range(0, L):
            for t in range(k + 1):
                up = self.degen(k, t)
                for a in range(k + 2):
                    lhs = self.face(k + 1, a) @ up
                    if a < t:
                        rhs = self.degen(k - 1, t - 1) @ self.face(k, a) if k >= 1 else None
                    elif a in (t, t + 1):
                        rhs = ident(k)
                    else:
                        rhs = self.degen(k - 1, t) @ self.face(k, a - 1) if k >= 1 else None
                    if rhs is not None and not eq(lhs, rhs):
                        bad.append(f"d{a} s{t} identity fails at level {k}")
        return bad


def _structure_map(C: RVSComplex, src_i: int, dst_i: int, theta: Sequence[int],
                   src_comps: list[Component], dst_comps: list[Component],
                   src: RestrictedVS, dst: RestrictedVS) -> RVSMap:
    N = C.N
    mats = {}
    for q in range(N + 1):
        src_off, off = [], 0
        for c in src_comps:
            src_off.append(off)
            off += C.levels[c.j].dim(q)
        dst_off, off = {}, 0
        for c in dst_comps:
            dst_off[c] = off
            off += C.levels[c.j].dim(q)
        rows = [0] * dst.dim(q)
        for c, so in zip(src_comps, src_off):
            hit = pull_component(c, src_i, theta)
            if hit is None:
                continue
            how, target = hit
            to = dst_off[target]
            width = C.levels[c.j].dim(q)
            if how == "id":
                for r in range(width):
                    rows[to + r] |= 1 << (so + r)
            else:
                block = C.d(c.j).component(q)
                for r, row in enumerate(block.rows):
                    rows[to + r] |= row << so
        mats[q] = F2Matrix(dst.dim(q), src.dim(q), tuple(rows))
    return RVSMap(src, dst, mats)


def dold_kan_K(C: RVSComplex, L: int) -> SimplicialRVS:
    """K(C) in simplicial degrees 0..L; level i is the sum over surjections [i] -> [j] of C_j."""
    if L < 0:
        raise ValueError("level bound must be non-negative")
    top = C.length - 1
    comps = [components(i, top) for i in range(L + 1)]
    levels = tuple(direct_sum([C.levels[c.j] for c in comps[i]], C.N) for i in range(L + 1))
    faces = [()]
    for i in range(1, L + 1):
        faces.append(tuple(
            _structure_map(C, i, i - 1, coface(t, i), comps[i], comps[i - 1], levels[i], levels[i - 1])
            for t in range(i + 1)))
    degens = []
    for i in range(L + 1):
        if i + 1 > L:
            degens.append(())
            continue
        degens.append(tuple(
            _structure_map(C, i, i + 1, codegeneracy(t, i), comps[i], comps[i + 1], levels[i], levels[i + 1])
            for t in range(i + 1)))
    return SimplicialRVS(levels, tuple(faces), tuple(degens))


def normalize_N(S: SimplicialRVS) -> RVSComplex:
    """N_k = intersection of ker d_i over i >= 1, with differential d_0.

    Only homological degrees <= L-1 are meaningful for a level-bounded input.
    """
    N = S.N
    L = S.level_bound
    bases: list[dict[int, Subspace]] = []
    for k in range(L + 1):
        per_q = {}
        for q in range(N + 1):
            dim = S.levels[k].dim(q)
            if k == 0:
                per_q[q] = Subspace.full(dim)
                continue
            stacked = vstack([S.face(k, t).component(q) for t in range(1, k + 1)])
            per_q[q] = kernel_basis(stacked)
        bases.append(per_q)
    levels = []
    for k in range(L + 1):
        phi = {}
        for i in range(N // 2 + 1):
            M = S.levels[k].phi[i]
            tgt = bases[k][2 * i]
            cols = [tgt.coordinates(M.apply(v)) for v in bases[k][i].basis]
            if any(c is None for c in cols):
                raise ValueError("faces do not commute with phi")
            phi[i] = F2Matrix.from_columns(cols, tgt.dim)
        levels.append(RestrictedVS(N, tuple(bases[k][q].dim for q in range(N + 1)), phi))
    diffs = []
    for k in range(1, L + 1):
        comps = {}
        for q in range(N + 1):
            d0 = S.face(k, 0).component(q)
            tgt = bases[k - 1][q]
            cols = [tgt.coordinates(d0.apply(v)) for v in bases[k][q].basis]
            if any(c is None for c in cols):
                raise ValueError("d_0 does not map normalized chains into normalized chains")
            comps[q] = F2Matrix.from_columns(cols, tgt.dim)
        diffs.append(RVSMap(levels[k], levels[k - 1], comps))
    return RVSComplex(tuple(levels), tuple(diffs))


def make_K(n: int, q: int, N: int, L: int) -> SimplicialRVS:
    """K[n, q] = K(Sigma^n F(q))."""
    return dold_kan_K(point(q, N, n), L)


def make_K_cell(n: int, q: int, k: int, N: int, L: int) -> SimplicialRVS:
    """K[n, q, k] = K(Sigma^n C(q, k))."""
    return dold_kan_K(cell(q, k, N, n), L)


def copy_count(i: int, n: int) -> int:
    """Number of surjections [i] -> [n]."""
    return comb(i, n)


# ---------------------------------------------------------------- random corpus

def scramble_complex(C: RVSComplex, rng: random.Random) -> RVSComplex:
    """Conjugate every level (and the differentials with it) by random invertible matrices."""
    P = [{q: random_invertible(V.dim(q), rng) for q in range(C.N + 1)} for V in C.levels]
    Pinv = [{q: inverse(M) for q, M in p.items()} for p in P]
    levels = tuple(change_basis(V, P[n]) for n, V in enumerate(C.levels))
    diffs = tuple(
        RVSMap(levels[n], levels[n - 1],
               {q: P[n - 1][q] @ C.d(n).component(q) @ Pinv[n][q] for q in range(C.N + 1)})
        for n in range(1, C.length))
    return RVSComplex(levels, diffs)


def random_complex(rng: random.Random, N: int, length: int = 3, pieces: int = 4) -> RVSComplex:
    """Scrambled sum of points, cells (including acyclic k = 0 cells) and torsion points."""
    parts = []
    for _ in range(pieces):
        n = rng.randrange(length)
        q = rng.randint(0, N)
        kind = rng.choice(["point", "cell", "torsion"] if n < length - 1 else ["point", "torsion"])
        if kind == "cell" and q >= 1:
            k = rng.randint(0, (N // q).bit_length() - 1)
            parts.append(cell(q, k, N, n))
        elif kind == "torsion" and 1 <= q and 2 * q <= N:
            k = rng.randint(1, (N // q).bit_length() - 1)
            parts.append(concentrated(torsion(q, k, N), n))
        else:
            parts.append(point(q, N, n))
    C = complex_sum(parts + [concentrated(RestrictedVS.build(N), length - 1)], N)
    return scramble_complex(C, rng)


def complexes_equal(A: RVSComplex, B: RVSComplex) -> bool:
    """Exact equality of levels (dims and phi) and differentials."""
    if A.length != B.length or A.N != B.N:
        return False
    for X, Y in zip(A.levels, B.levels):
        if X.dims != Y.dims or any(X.phi[i] != Y.phi[i] for i in X.phi):
            return False
    return all(A.d(n).component(q) == B.d(n).component(q)
               for n in range(1, A.length) for q in range(A.N + 1))
