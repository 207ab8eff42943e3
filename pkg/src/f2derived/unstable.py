"""The free unstable algebra U(V) = S(V)/(x^2 = phi x) and the homotopy of U applied to simplicial objects.

Three routes to pi_* U:

* ``pi_U_closed_form`` assembles U(H_0) with two copies of the symmetric
  delta-algebra, one on coker phi and one on the suspended ker phi;
* ``pi_U_oracle`` builds U levelwise on a simplicial restricted vector space
  and takes homology of the complex modulo degeneracies, monomial by monomial;
* ``pi_U_dense`` takes the literal normalized complex (intersection of face
  kernels) with dense matrices; it is slow and exists to cross-check the
  oracle on small inputs.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .delta import enum_frak_S, marginal
from .f2core import EchelonBasis, F2Matrix, SizeError, Subspace, bits, kernel_basis, rank_of, vstack
from .rchain import RVSComplex, SimplicialRVS, homology
from .restricted import RestrictedVS, decompose, generators

BOOLEAN_CAP = 20

Bigraded = dict[tuple[int, int], int]
Monomial = tuple[tuple[int, int], ...]   # sorted (variable, exponent) pairs, exponents >= 1


# ----------------------------------------------------------------- graded utilities

def convolve(a: Mapping[tuple, int], b: Mapping[tuple, int], bound=None) -> dict:
    out: dict = defaultdict(int)
    for ka, ca in a.items():
        for kb, cb in b.items():
            key = tuple(x + y for x, y in zip(ka, kb))
            if bound is None or bound(key):
                out[key] += ca * cb
    return {k: v for k, v in out.items() if v}


def first_difference(a: Mapping[tuple, int], b: Mapping[tuple, int]):
    """Smallest key where the two tables disagree, as (key, a value, b value), or None."""
    for key in sorted(set(a) | set(b)):
        if a.get(key, 0) != b.get(key, 0):
            return key, a.get(key, 0), b.get(key, 0)
    return None


def _key(k: tuple) -> str:
    return "(" + ",".join(str(x) for x in k) + ")"


def _unkey(s: str) -> tuple:
    return tuple(int(x) for x in s.strip("()").split(","))


# ----------------------------------------------------------------- U on a restricted vector space

def _check_bound(V: RestrictedVS, Q: int) -> None:
    if Q < 0:
        raise ValueError("internal bound must be non-negative")
    if Q > V.N:
        raise ValueError(f"internal bound {Q} exceeds the window N={V.N}")


def U_dims(V: RestrictedVS, Q: int, boolean_cap: int = BOOLEAN_CAP) -> dict[int, int]:
    """Dimensions of U(V) in internal degrees 0..Q."""
    _check_bound(V, Q)
    summands = decompose(V)
    d0 = sum(1 for s in summands if s.n == 0)
    if d0 > boolean_cap:
        raise SizeError(f"Boolean part has 2^{d0} elements; cap is 2^{boolean_cap}")
    series = [0] * (Q + 1)
    series[0] = 2 ** d0
    for s in summands:
        if s.n == 0 or s.n > Q:
            continue
        top = Q // s.n if s.kind != "T" else min(Q // s.n, 2 ** s.k - 1)
        factor = [0] * (Q + 1)
        for m in range(top + 1):
            factor[m * s.n] = 1
        series = [sum(series[a] * factor[d - a] for a in range(d + 1)) for d in range(Q + 1)]
    return {d: c for d, c in enumerate(series) if c}


def exterior_dims(V: RestrictedVS, Q: int) -> dict[tuple[int, int], int]:
    """Exterior powers of the underlying graded space: (r, internal) -> dim of Lambda^r in that degree."""
    _check_bound(V, Q)
    out: dict = {(0, 0): 1}
    for d in range(Q + 1):
        for _ in range(V.dim(d)):
            out = convolve(out, {(0, 0): 1, (1, d): 1}, lambda k: k[1] <= Q)
    return out


# ----------------------------------------------------------------- results

@dataclass
class PiUResult:
    dims: Bigraded
    generators: list = field(default_factory=list)
    T: int = 0
    Q: int = 0

    def to_json(self) -> dict:
        return {
            "max_homotopy": self.T,
            "max_internal": self.Q,
            "dims": {_key(k): v for k, v in sorted(self.dims.items())},
            "generators": self.generators,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> PiUResult:
        return cls({_unkey(k): v for k, v in data["dims"].items()}, list(data.get("generators", [])),
                   data.get("max_homotopy", 0), data.get("max_internal", 0))

    def row(self, t: int) -> dict[int, int]:
        return {q: c for (tt, q), c in self.dims.items() if tt == t}


def table(dims: Mapping[tuple[int, int], int], T: int, Q: int) -> str:
    """Rows are homotopy degrees, columns internal degrees."""
    width = max([len(str(c)) for c in dims.values()] + [len(str(Q)), 1])
    head = "t\\q " + " ".join(str(q).rjust(width) for q in range(Q + 1))
    lines = [head]
    for t in range(T + 1):
        lines.append(str(t).rjust(3) + " " + " ".join(str(dims.get((t, q), 0)).rjust(width)
                                                      for q in range(Q + 1)))
    return "\n".join(lines)


# ----------------------------------------------------------------- closed form

@dataclass
class PhiSplit:
    """Homotopy-0 homology plus coker/ker of phi in positive homotopy degrees."""

    h0: RestrictedVS | None
    coker: Bigraded
    ker: Bigraded            # before suspension
    suspended_ker: Bigraded


def phi_split(C: RVSComplex, T: int, Q: int) -> PhiSplit:
    H = homology(C)
    N = C.N
    if Q > N:
        raise ValueError(f"internal bound {Q} exceeds the window N={N}")
    coker: Bigraded = {}
    ker: Bigraded = {}
    for n, Hn in enumerate(H):
        if n == 0 or n > T:
            continue
        for i in range(1, Q + 1):
            dim = Hn.dim(i)
            if not dim:
                continue
            image = Hn.phi[i // 2].columns() if i % 2 == 0 else []
            c = dim - rank_of(image)
            if c:
                coker[(n, i)] = c
            # only kernels landing at internal 2i <= Q matter, and those need 2i <= N
            if 2 * i <= Q:
                kd = dim - rank_of(Hn.phi[i].columns())
                if kd:
                    ker[(n, i)] = kd
    susp = {(n + 1, 2 * i): c for (n, i), c in ker.items()}
    return PhiSplit(H[0] if H else None, coker, ker, susp)


def _positive_factor(split: PhiSplit, T: int, Q: int) -> dict:
    V: dict = defaultdict(int)
    for key, c in list(split.coker.items()) + list(split.suspended_ker.items()):
        V[key] += c
    return enum_frak_S(dict(V), "symmetric", T=T, Q=Q)


def pi_U_closed_form(C: RVSComplex, T: int, Q: int, boolean_cap: int = BOOLEAN_CAP) -> PiUResult:
    """U(H_0) in homotopy 0, tensored with S on coker phi and S on the suspension of ker phi."""
    split = phi_split(C, T, Q)
    base = {(0, q): c for q, c in U_dims(split.h0, Q, boolean_cap).items()} if split.h0 else {(0, 0): 1}
    pos = marginal(_positive_factor(split, T, Q), "tq")
    dims = convolve(base, pos, lambda k: k[0] <= T and k[1] <= Q)
    gens = []
    if split.h0 is not None:
        gens += [{"factor": "U(H0)", "summand": str(s)} for s in decompose(split.h0)]
    gens += [{"factor": "coker", "homotopy": n, "internal": q, "count": c}
             for (n, q), c in sorted(split.coker.items())]
    gens += [{"factor": "suspended ker", "homotopy": n, "internal": q, "count": c}
             for (n, q), c in sorted(split.suspended_ker.items())]
    return PiUResult(dims, gens, T, Q)


def e_infinity_length(C: RVSComplex, T: int, Q: int) -> dict[tuple[int, int, int], int]:
    """(filtration s, homotopy t, internal q) -> dim, with s = p + q + r.

    r is the exterior power of the homotopy-0 homology, p and q the weights in
    the two symmetric factors.
    """
    split = phi_split(C, T, Q)
    ext = exterior_dims(split.h0, Q) if split.h0 is not None else {(0, 0): 1}
    base = {(r, 0, q): c for (r, q), c in ext.items()}
    S_coker = enum_frak_S(split.coker, "symmetric", T=T, Q=Q)
    S_ker = enum_frak_S(split.suspended_ker, "symmetric", T=T, Q=Q)
    pos = convolve({(w, t, q): c for (t, q, w), c in S_coker.items()},
                   {(w, t, q): c for (t, q, w), c in S_ker.items()},
                   lambda k: k[1] <= T and k[2] <= Q)
    return convolve(base, pos, lambda k: k[1] <= T and k[2] <= Q)


# ----------------------------------------------------------------- U levelwise on simplicial objects

@dataclass
class Variable:
    degree: int
    cap: int | None       # largest allowed exponent; None means unbounded
    kind: str             # summand kind of the generator


def _mono_mul(a: Monomial, b: Monomial, caps: Sequence[int | None]) -> Monomial | None:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for v, e in b:
        out[v] = out.get(v, 0) + e
    res = []
    for v in sorted(out):
        e = out[v]
        cap = caps[v]
        if cap is not None and e > cap:
            if v not in caps.boolean:
                return None
            e = 1
        res.append((v, e))
    return tuple(res)


class _Caps(list):
    """Exponent caps per variable, remembering which variables are idempotent."""

    def __init__(self, variables: Sequence[Variable]):
        super().__init__(v.cap for v in variables)
        self.boolean = frozenset(i for i, v in enumerate(variables) if v.degree == 0)


def _mono_pow2(m: Monomial, b: int, caps) -> Monomial | None:
    """m^(2^b)."""
    res = []
    for v, e in m:
        if v in caps.boolean:
            res.append((v, 1))
            continue
        e <<= b
        if caps[v] is not None and e > caps[v]:
            return None
        res.append((v, e))
    return tuple(res)


def _poly_mul(p: set, q: set, caps) -> set:
    out: set = set()
    for a in p:
        for b in q:
            m = _mono_mul(a, b, caps)
            if m is not None:
                out ^= {m}
    return out


@dataclass
class LevelAlgebra:
    """U of one simplicial level, presented as a (truncated) polynomial algebra on chosen generators."""

    variables: list[Variable]
    caps: _Caps

    def degree(self, m: Monomial) -> int:
        return sum(self.variables[v].degree * e for v, e in m)


class SimplicialAlgebra:
    """U applied levelwise to a simplicial restricted vector space, truncated at internal degree Q.

    Every structure map is an algebra map, so it is stored as the image of
    each variable (a set of monomials in the target level).
    """

    def __init__(self, S: SimplicialRVS, Q: int):
        if Q > S.N:
            raise ValueError(f"internal bound {Q} exceeds the window N={S.N}")
        self.S = S
        self.Q = Q
        self.L = S.level_bound
        self.levels: list[LevelAlgebra] = []
        self._gens = []
        self._coords = []
        for V in S.levels:
            gens = [g for g in generators(V) if g.degree <= Q]
            variables = []
            for g in gens:
                if g.degree == 0:
                    cap = 1
                elif g.summand.kind == "T":
                    cap = 2 ** g.summand.k - 1
                else:
                    cap = None
                variables.append(Variable(g.degree, cap, g.summand.kind))
            self.levels.append(LevelAlgebra(variables, _Caps(variables)))
            self._gens.append(gens)
            self._coords.append(self._adapted(V, gens))
        self.faces = [[]] + [[self._induced(S.face(i, t), i, i - 1) for t in range(i + 1)]
                             for i in range(1, self.L + 1)]
        self.degens = [[self._induced(S.degen(i, t), i, i + 1) for t in range(i + 1)] if i < self.L else []
                       for i in range(self.L + 1)]
        self._face_fast = [[self._fast(img) for img in row] for row in self.faces]
        self._degenerate_sets = self._degenerate_supports()

    # -- construction helpers
    def _adapted(self, V: RestrictedVS, gens) -> dict[int, tuple[list, Subspace]]:
        """Per degree d <= Q: the adapted basis {phi^r g} and its Subspace for coordinates."""
        out = {}
        for d in range(self.Q + 1):
            labels, vecs = [], []
            for idx, g in enumerate(gens):
                if g.degree == 0:
                    if d == 0:
                        labels.append((idx, 0))
                        vecs.append(g.vector)
                    continue
                r, deg, w = 0, g.degree, g.vector
                while 2 * deg <= d:
                    w = V.phi[deg].apply(w)
                    deg *= 2
                    r += 1
                if deg == d and w:
                    labels.append((idx, r))
                    vecs.append(w)
            out[d] = (labels, Subspace(V.dim(d), tuple(vecs)))
        return out

    def _induced(self, f, src: int, dst: int) -> list[set]:
        images = []
        caps = self.levels[dst].caps
        labels_by_deg = self._coords[dst]
        for g in self._gens[src]:
            w = f.component(g.degree).apply(g.vector)
            labels, sub = labels_by_deg[g.degree]
            c = sub.coordinates(w)
            if c is None:
                raise ValueError("structure map leaves the span of the adapted basis")
            poly: set = set()
            for j in bits(c):
                idx, r = labels[j]
                m = _mono_pow2(((idx, 1),), r, caps)
                if m is not None:
                    poly ^= {m}
            images.append(poly)
        return images

    @staticmethod
    def _fast(images: list[set]):
        """Variable -> (target, exponent) or None for zero, when every image is a single pure power."""
        table = []
        for poly in images:
            if not poly:
                table.append(None)
            elif len(poly) == 1:
                (m,) = poly
                if len(m) != 1:
                    return None
                table.append(m[0])
            else:
                return None
        return table

    def _degenerate_supports(self) -> list[list[frozenset]] | None:
        """Variables hit by each degeneracy, if every degeneracy sends variables injectively to variables."""
        out: list[list[frozenset]] = [[]]
        for i in range(1, self.L + 1):
            row = []
            for t in range(i):
                hit = []
                for poly in self.degens[i - 1][t]:
                    if len(poly) != 1:
                        return None
                    (m,) = poly
                    if len(m) != 1 or m[0][1] != 1:
                        return None
                    hit.append(m[0][0])
                if len(set(hit)) != len(hit):
                    return None
                row.append(frozenset(hit))
            out.append(row)
        return out

    # -- algebra
    def apply(self, images: list[set], m: Monomial, caps) -> set:
        result = {()}
        for v, e in m:
            p = images[v]
            b = 0
            while e:
                if e & 1:
                    fr: set = set()
                    for mm in p:
                        x = _mono_pow2(mm, b, caps)
                        if x is not None:
                            fr ^= {x}
                    result = _poly_mul(result, fr, caps)
                    if not result:
                        return result
                e >>= 1
                b += 1
        return result

    def face_image(self, i: int, t: int, m: Monomial) -> set:
        fast = self._face_fast[i][t]
        caps = self.levels[i - 1].caps
        if fast is None:
            return self.apply(self.faces[i][t], m, caps)
        acc: dict[int, int] = {}
        for v, e in m:
            hit = fast[v]
            if hit is None:
                return set()
            w, mult = hit
            acc[w] = acc.get(w, 0) + e * mult
        res = []
        for w in sorted(acc):
            e = acc[w]
            cap = caps[w]
            if cap is not None and e > cap:
                if w in caps.boolean:
                    e = 1
                else:
                    return set()
            res.append((w, e))
        return {tuple(res)}

    def degen_image(self, i: int, t: int, m: Monomial) -> set:
        return self.apply(self.degens[i][t], m, self.levels[i + 1].caps)

    # -- enumeration
    def monomials(self, i: int, d: int, support: Sequence[int] | None = None) -> Iterator[Monomial]:
        """Monomials of internal degree d; with ``support`` given, exactly those with that support."""
        lev = self.levels[i]
        vs = list(range(len(lev.variables))) if support is None else list(support)
        exact = support is not None

        def rec(pos: int, remaining: int, acc: list):
            if pos == len(vs):
                if remaining == 0:
                    yield tuple(acc)
                return
            v = vs[pos]
            var = lev.variables[v]
            lo = 1 if exact else 0
            if var.degree == 0:
                hi = 1
            else:
                hi = remaining // var.degree
                if var.cap is not None:
                    hi = min(hi, var.cap)
            for e in range(lo, hi + 1):
                if e:
                    acc.append((v, e))
                yield from rec(pos + 1, remaining - e * var.degree, acc)
                if e:
                    acc.pop()

        yield from rec(0, d, [])

    def dims(self, i: int) -> dict[int, int]:
        return {d: sum(1 for _ in self.monomials(i, d)) for d in range(self.Q + 1)}

    def is_degenerate(self, i: int, m: Monomial) -> bool:
        if i == 0:
            return False
        supp = {v for v, _ in m}
        return any(supp <= hit for hit in self._degenerate_sets[i])

    def nondegenerate(self, i: int, d: int) -> Iterator[Monomial]:
        for m in self.monomials(i, d):
            if not self.is_degenerate(i, m):
                yield m

    def nondegenerate_by_support(self, i: int, d: int) -> Iterator[Monomial]:
        """Nondegenerate monomials, largest supports first (lazily)."""
        degs = [v.degree for v in self.levels[i].variables]
        hits = self._degenerate_sets[i] if i else []
        pos = [x for x in degs if x > 0]
        max_size = (len(degs) - len(pos)) + (d // min(pos) if pos else 0)

        def supports(size: int, start: int, budget: int, acc: list) -> Iterator[tuple[int, ...]]:
            if size == 0:
                yield tuple(acc)
                return
            for v in range(start, len(degs) - size + 1):
                if degs[v] <= budget:
                    acc.append(v)
                    yield from supports(size - 1, v + 1, budget - degs[v], acc)
                    acc.pop()

        for size in range(min(max_size, len(degs)), (0 if d == 0 else 1) - 1, -1):
            for supp in supports(size, 0, d, []):
                if i and any(h.issuperset(supp) for h in hits):
                    continue
                yield from self.monomials(i, d, supp)

    # -- checks
    def identity_violations(self, d: int) -> list[str]:
        """Simplicial identities on every monomial of internal degree d."""
        bad = []
        for k in range(2, self.L + 1):
            for m in self.monomials(k, d):
                for a in range(k + 1):
                    for b in range(a + 1, k + 1):
                        lhs = self._compose_face(k, b, a, m)
                        rhs = self._compose_face(k, a, b - 1, m)
                        if lhs != rhs:
                            bad.append(f"d{a} d{b} at level {k} on {m}")
        for k in range(0, self.L):
            for m in self.monomials(k, d):
                for t in range(k + 1):
                    up = self.degen_image(k, t, m)
                    for a in (t, t + 1):
                        back: set = set()
                        for mm in up:
                            back ^= self.face_image(k + 1, a, mm)
                        if back != {m}:
                            bad.append(f"d{a} s{t} at level {k} on {m}")
        return bad

    def _compose_face(self, k: int, first: int, second: int, m: Monomial) -> set:
        out: set = set()
        for mm in self.face_image(k, first, m):
            out ^= self.face_image(k - 1, second, mm)
        return out


def U_simplicial(S: SimplicialRVS, Q: int) -> SimplicialAlgebra:
    return SimplicialAlgebra(S, Q)


# ----------------------------------------------------------------- homotopy

def _boundary_vector(A: SimplicialAlgebra, i: int, m: Monomial, index: Mapping[Monomial, int]) -> int:
    vec = 0
    for t in range(i + 1):
        for mm in A.face_image(i, t, m):
            j = index.get(mm)
            if j is not None:       # degenerate targets vanish in the quotient
                vec ^= 1 << j
    return vec


def pi_U_oracle(S: SimplicialRVS, T: int, Q: int, max_basis: int = 3_000_000) -> PiUResult:
    """Homotopy of U(S) by brute force, through chains modulo degenerate chains.

    The top level is enumerated lazily and stops once the boundary rank
    reaches the number of cycles one level down.
    """
    if S.level_bound < T + 1:
        raise ValueError(f"need level bound >= {T + 1} for homotopy through degree {T}")
    A = U_simplicial(S, Q)
    if A._degenerate_sets is None:
        return pi_U_dense(S, T, Q, algebra=A)
    dims: Bigraded = {}
    for d in range(Q + 1):
        bases: list[list[Monomial]] = []
        index: list[dict] = []
        for i in range(T + 1):
            basis = list(A.nondegenerate(i, d))
            if len(basis) > max_basis:
                raise SizeError(f"{len(basis)} chains at level {i}, internal degree {d}")
            bases.append(basis)
            index.append({m: j for j, m in enumerate(basis)})
        ranks = [0] * (T + 2)
        for i in range(1, T + 1):
            eb = EchelonBasis()
            for m in bases[i]:
                eb.add(_boundary_vector(A, i, m, index[i - 1]))
            ranks[i] = len(eb)
        cycles_top = len(bases[T]) - ranks[T]
        eb = EchelonBasis()
        seen = 0
        if cycles_top:
            for m in A.nondegenerate_by_support(T + 1, d):
                seen += 1
                if seen > max_basis:
                    raise SizeError(f"more than {max_basis} chains at level {T + 1}, internal degree {d}")
                eb.add(_boundary_vector(A, T + 1, m, index[T]))
                if len(eb) == cycles_top:
                    break
        ranks[T + 1] = len(eb)
        for t in range(T + 1):
            h = len(bases[t]) - ranks[t] - ranks[t + 1]
            if h:
                dims[(t, d)] = h
    return PiUResult(dims, [], T, Q)


def pi_U_dense(S: SimplicialRVS, T: int, Q: int, algebra: SimplicialAlgebra | None = None) -> PiUResult:
    """Homotopy of U(S) from the normalized complex, built with dense matrices."""
    if S.level_bound < T + 1:
        raise ValueError(f"need level bound >= {T + 1} for homotopy through degree {T}")
    A = algebra or U_simplicial(S, Q)
    dims: Bigraded = {}
    for d in range(Q + 1):
        bases = [list(A.monomials(i, d)) for i in range(T + 2)]
        index = [{m: j for j, m in enumerate(b)} for b in bases]

        def face_matrix(i, t):
            cols = []
            for m in bases[i]:
                v = 0
                for mm in A.face_image(i, t, m):
                    v ^= 1 << index[i - 1][mm]
                cols.append(v)
            return F2Matrix.from_columns(cols, len(bases[i - 1]))

        normal = []
        for i in range(T + 2):
            if i == 0:
                normal.append(Subspace.full(len(bases[0])))
            else:
                normal.append(kernel_basis(vstack([face_matrix(i, t) for t in range(1, i + 1)])))
        ranks = [0] * (T + 2)
        for i in range(1, T + 2):
            d0 = face_matrix(i, 0)
            ranks[i] = rank_of(d0.apply(v) for v in normal[i].basis)
        for t in range(T + 1):
            h = normal[t].dim - ranks[t] - ranks[t + 1]
            if h:
                dims[(t, d)] = h
    return PiUResult(dims, [], T, Q)

