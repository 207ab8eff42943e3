"""Restricted vector spaces: graded F2-spaces with maps phi_i: V^i -> V^{2i}.

Everything is truncated at a maximal internal degree N.  Degrees split into
independent *chains* p, 2p, 4p, ... (p odd) plus the degree-0 loop, and
phi only ever moves one step along a chain, so all decomposition work is
done chain by chain.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .f2core import (
    EchelonBasis,
    F2Matrix,
    Subspace,
    block_diagonal,
    inverse,
    kernel_basis,
    preimage,
    rank,
    vec_to_list,
)


@dataclass(frozen=True, order=True)
class Summand:
    """One indecomposable piece: ``F`` (free), ``T`` (torsion) or ``F?``.

    ``F?`` marks a line at degree n with 2n > N, whose phi-behaviour lies
    outside the truncation window.
    """

    kind: str
    n: int
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("F", "T", "F?"):
            raise ValueError(f"unknown summand kind {self.kind!r}")
        if self.n < 0 or (self.kind == "T" and (self.n < 1 or self.k < 1)):
            raise ValueError(f"bad summand parameters {self}")

    def fits(self, N: int) -> bool:
        if self.kind == "T":
            return (self.n << self.k) <= N
        if self.kind == "F":
            return self.n == 0 or 2 * self.n <= N
        return self.n <= N < 2 * self.n

    def degrees(self, N: int) -> list[int]:
        """Internal degrees occupied by the summand inside the window."""
        if self.n == 0:
            return [0]
        if self.kind == "T":
            return [self.n << r for r in range(self.k)]
        out, d = [], self.n
        while d <= N:
            out.append(d)
            d *= 2
        return out

    def __str__(self) -> str:
        if self.kind == "T":
            return f"T({self.n},{self.k})"
        if self.kind == "F?":
            return f"F({self.n})?"
        return f"F({self.n})"

    @classmethod
    def parse(cls, text: str) -> Summand:
        text = text.strip()
        if text.startswith("T(") and text.endswith(")"):
            n, k = text[2:-1].split(",")
            return cls("T", int(n), int(k))
        if text.startswith("F(") and text.endswith(")?"):
            return cls("F?", int(text[2:-2]))
        if text.startswith("F(") and text.endswith(")"):
            return cls("F", int(text[2:-1]))
        raise ValueError(f"cannot parse summand {text!r}")


def free_for(n: int, N: int) -> Summand:
    """The free summand on a degree-n generator, as seen through window N."""
    return Summand("F?" if n > 0 and 2 * n > N else "F", n)


@dataclass(frozen=True)
class RestrictedVS:
    max_internal_degree: int
    dims: tuple[int, ...]
    phi: Mapping[int, F2Matrix] = field(default_factory=dict)

    @classmethod
    def build(cls, N: int, dims: Mapping[int, int] | None = None,
              phi: Mapping[int, F2Matrix] | None = None) -> RestrictedVS:
        """Fill in omitted dims with 0, omitted phi with zero maps and phi_0 with the identity."""
        dims = dict(dims or {})
        full = tuple(int(dims.get(i, 0)) for i in range(N + 1))
        for i in dims:
            if i < 0 or i > N:
                raise ValueError(f"degree {i} outside window [0, {N}]")
        phi = dict(phi or {})
        out = {}
        for i in range(N // 2 + 1):
            if i in phi:
                out[i] = phi[i]
            elif i == 0:
                out[0] = F2Matrix.identity(full[0])
            else:
                out[i] = F2Matrix.zeros(full[2 * i], full[i])
        return cls(N, full, out)

    @property
    def N(self) -> int:
        return self.max_internal_degree

    def dim(self, i: int) -> int:
        return self.dims[i] if 0 <= i <= self.N else 0

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def phi_power(self, i: int, r: int) -> F2Matrix:
        """phi^r : V^i -> V^{2^r i}."""
        M = F2Matrix.identity(self.dim(i))
        d = i
        for _ in range(r):
            M = self.phi[d] @ M
            d *= 2
        return M

    def to_json(self) -> dict:
        return {
            "max_internal_degree": self.N,
            "dims": {str(i): d for i, d in enumerate(self.dims) if d},
            "phi": {str(i): M.to_lists() for i, M in sorted(self.phi.items())
                    if M.nrows and M.ncols and not (i == 0 and M == F2Matrix.identity(M.nrows))
                    and not M.is_zero()},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> RestrictedVS:
        try:
            N = int(data["max_internal_degree"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError("missing or non-integer max_internal_degree") from exc
        if N < 0:
            raise ValueError("max_internal_degree must be non-negative")
        dims = {int(i): int(d) for i, d in data.get("dims", {}).items()}
        for i, d in dims.items():
            if not 0 <= i <= N:
                raise ValueError(f"dims given for degree {i} outside window [0, {N}]")
            if d < 0:
                raise ValueError(f"negative dimension in degree {i}")
        phi = {}
        for key, rows in data.get("phi", {}).items():
            i = int(key)
            if not 0 <= 2 * i <= N:
                raise ValueError(f"phi given for degree {i}, but 2*{i} is outside the window")
            nrows, ncols = dims.get(2 * i, 0), dims.get(i, 0)
            if len(rows) != nrows or any(len(r) != ncols for r in rows):
                raise ValueError(f"phi in degree {i} must have shape {nrows}x{ncols}")
            phi[i] = F2Matrix.from_lists(rows, ncols)
        return cls.build(N, dims, phi)


@dataclass
class ValidationReport:
    errors: list[tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def degrees(self) -> list[int]:
        return sorted({d for d, _ in self.errors})

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(f"degree {d}: {msg}" for d, msg in self.errors)


def validate(V: RestrictedVS) -> ValidationReport:
    report = ValidationReport()
    if len(V.dims) != V.N + 1:
        report.errors.append((-1, f"expected {V.N + 1} dims, got {len(V.dims)}"))
        return report
    for i, d in enumerate(V.dims):
        if d < 0:
            report.errors.append((i, "negative dimension"))
    for i in range(V.N // 2 + 1):
        M = V.phi.get(i)
        if M is None:
            report.errors.append((i, "missing restriction map"))
            continue
        if M.shape != (V.dims[2 * i], V.dims[i]):
            report.errors.append((i, f"phi has shape {M.shape}, expected {(V.dims[2 * i], V.dims[i])}"))
            continue
        if i == 0 and M != F2Matrix.identity(V.dims[0]):
            report.errors.append((0, "phi_0 is not the identity"))
    for i in V.phi:
        if not 0 <= 2 * i <= V.N:
            report.errors.append((i, "restriction map beyond the truncation window"))
    return report


def _require_valid(V: RestrictedVS) -> None:
    report = validate(V)
    if not report.ok:
        raise ValueError(f"invalid restricted vector space: {report}")


def chains(N: int) -> list[list[int]]:
    """Degree chains [p, 2p, 4p, ...] for odd p <= N."""
    out = []
    for p in range(1, N + 1, 2):
        c, d = [], p
        while d <= N:
            c.append(d)
            d *= 2
        out.append(c)
    return out


def top_power(i: int, N: int) -> int:
    """Largest r with 2^r i <= N (0 for i = 0)."""
    if i == 0:
        return 0
    r = 0
    while (i << (r + 1)) <= N:
        r += 1
    return r


@dataclass(frozen=True)
class RVSMap:
    source: RestrictedVS
    target: RestrictedVS
    components: Mapping[int, F2Matrix]

    def component(self, i: int) -> F2Matrix:
        M = self.components.get(i)
        if M is None:
            return F2Matrix.zeros(self.target.dim(i), self.source.dim(i))
        return M

    def commutes(self) -> bool:
        for i in range(self.source.N // 2 + 1):
            lhs = self.target.phi[i] @ self.component(i)
            rhs = self.component(2 * i) @ self.source.phi[i]
            if lhs != rhs:
                return False
        return True

    def __matmul__(self, other: RVSMap) -> RVSMap:
        return RVSMap(other.source, self.target,
                      {i: self.component(i) @ other.component(i) for i in range(self.source.N + 1)})


def identity_map(V: RestrictedVS) -> RVSMap:
    return RVSMap(V, V, {i: F2Matrix.identity(d) for i, d in enumerate(V.dims)})


def zero_map(V: RestrictedVS, W: RestrictedVS) -> RVSMap:
    return RVSMap(V, W, {i: F2Matrix.zeros(W.dim(i), V.dim(i)) for i in range(V.N + 1)})


# ----------------------------------------------------------------- builders

def free(n: int, N: int) -> RestrictedVS:
    """F(n) truncated at N."""
    return summand_space(free_for(n, N) if n <= N else Summand("F", n), N)


def torsion(n: int, k: int, N: int) -> RestrictedVS:
    """T(n, k) = F(n)/phi^k, truncated at N."""
    return summand_space(Summand("T", n, k), N)


def summand_space(s: Summand, N: int) -> RestrictedVS:
    degs = [d for d in s.degrees(N) if d <= N]
    dims = {d: 1 for d in degs}
    phi = {}
    for d in degs:
        if d and 2 * d in dims:
            phi[d] = F2Matrix.identity(1)
    return RestrictedVS.build(N, dims, phi)


def direct_sum(spaces: Iterable[RestrictedVS], N: int | None = None) -> RestrictedVS:
    spaces = list(spaces)
    if N is None:
        if not spaces:
            raise ValueError("need N for an empty direct sum")
        N = spaces[0].N
    if any(V.N != N for V in spaces):
        raise ValueError("direct sum of spaces with different windows")
    dims = {i: sum(V.dim(i) for V in spaces) for i in range(N + 1)}
    phi = {i: block_diagonal([V.phi[i] for V in spaces]) if spaces else F2Matrix.zeros(dims[2 * i], dims[i])
           for i in range(N // 2 + 1)}
    return RestrictedVS.build(N, dims, phi)


def from_summands(summands: Iterable[Summand], N: int) -> RestrictedVS:
    return direct_sum([summand_space(s, N) for s in summands], N)


def change_basis(V: RestrictedVS, P: Mapping[int, F2Matrix]) -> RestrictedVS:
    """The isomorphic space with phi_i replaced by P_{2i} phi_i P_i^{-1}."""
    Pinv = {i: inverse(M) for i, M in P.items()}
    phi = {i: P[2 * i] @ V.phi[i] @ Pinv[i] for i in V.phi}
    return RestrictedVS(V.N, V.dims, phi)


def random_invertible(n: int, rng: random.Random) -> F2Matrix:
    while True:
        M = F2Matrix(n, n, tuple(rng.getrandbits(n) if n else 0 for _ in range(n)))
        if rank(M) == n:
            return M


def scramble(V: RestrictedVS, rng: random.Random) -> RestrictedVS:
    """Conjugate by a random invertible change of basis in every degree."""
    return change_basis(V, {i: random_invertible(d, rng) for i, d in enumerate(V.dims)})


# ------------------------------------------------------------- subspaces

Family = dict[int, Subspace]


def zero_family(W: RestrictedVS) -> Family:
    return {i: Subspace.zero(d) for i, d in enumerate(W.dims)}


def full_family(W: RestrictedVS) -> Family:
    return {i: Subspace.full(d) for i, d in enumerate(W.dims)}


def is_phi_closed(V: Family, W: RestrictedVS) -> bool:
    for i in range(1, W.N // 2 + 1):
        M = W.phi[i]
        if not V[2 * i].contains_subspace(Subspace.span(W.dim(2 * i), (M.apply(v) for v in V[i].basis))):
            return False
    return True


def is_summand(V: Family, W: RestrictedVS) -> bool:
    """Whether a phi-closed subspace is a direct summand of W.

    Criterion: whenever phi(w) lands in V there is some v in V with
    phi(v) = phi(w).
    """
    if not is_phi_closed(V, W):
        raise ValueError("subspace is not closed under the restriction maps")
    for i in range(1, W.N // 2 + 1):
        M = W.phi[i]
        hits = preimage(M, V[2 * i])
        reachable = Subspace.span(W.dim(2 * i), (M.apply(v) for v in V[i].basis))
        if not all(reachable.contains(M.apply(w)) for w in hits.basis):
            return False
    return True


def phi_preimage(V: Family, W: RestrictedVS) -> Family:
    """Elements that some power of phi (inside the window) sends into V."""
    out = {}
    for i in range(W.N + 1):
        vectors: list[int] = []
        for n in range(top_power(i, W.N) + 1):
            vectors.extend(preimage(W.phi_power(i, n), V[i << n]).basis)
        out[i] = Subspace.span(W.dim(i), vectors)
    return out


def restrict(W: RestrictedVS, V: Family) -> tuple[RestrictedVS, RVSMap]:
    """The phi-closed subspace V as a space in its own right, with its inclusion."""
    phi = {}
    for i in range(W.N // 2 + 1):
        target = V[2 * i]
        cols = []
        for v in V[i].basis:
            c = target.coordinates(W.phi[i].apply(v))
            if c is None:
                raise ValueError(f"subspace is not phi-closed in degree {i}")
            cols.append(c)
        phi[i] = F2Matrix.from_columns(cols, target.dim)
    sub = RestrictedVS(W.N, tuple(V[i].dim for i in range(W.N + 1)), phi)
    incl = RVSMap(sub, W, {i: F2Matrix.from_columns(list(V[i].basis), W.dim(i)) for i in range(W.N + 1)})
    return sub, incl


# ---------------------------------------------------------- decomposition

@dataclass(frozen=True)
class Generator:
    degree: int
    vector: int
    summand: Summand


def generators(V: RestrictedVS) -> list[Generator]:
    """Generators of an F/T decomposition of V, in increasing degree.

    Along each chain, the generators at a degree span a complement of the
    image of phi, chosen adapted to the filtration by ker phi^j: first the
    elements dying after one step, then two steps, and so on; whatever is
    left survives to the end of the window and is free.
    """
    _require_valid(V)
    N = V.N
    found: list[Generator] = []
    for j in range(V.dim(0)):
        found.append(Generator(0, 1 << j, Summand("F", 0)))
    for chain in chains(N):
        R = len(chain) - 1
        for r, d in enumerate(chain):
            eb = EchelonBasis()
            if r > 0:
                for c in V.phi[chain[r - 1]].columns():
                    eb.add(c)
            for j in range(1, R - r + 1):
                for v in kernel_basis(V.phi_power(d, j)).basis:
                    if eb.add(v)[0]:
                        found.append(Generator(d, v, Summand("T", d, j)))
            for b in range(V.dim(d)):
                if eb.add(1 << b)[0]:
                    found.append(Generator(d, 1 << b, free_for(d, N)))
    found.sort(key=lambda g: g.degree)
    return found


def decompose(V: RestrictedVS) -> list[Summand]:
    """Sorted multiset of F(n), T(n,k) and F(n)? summands isomorphic to V."""
    return sorted(g.summand for g in generators(V))


def extract_basis(V: RestrictedVS) -> dict[int, list[int]]:
    """Restricted basis: degree -> generator vectors."""
    out: dict[int, list[int]] = {i: [] for i in range(V.N + 1)}
    for g in generators(V):
        out[g.degree].append(g.vector)
    return out


def basis_span_ok(V: RestrictedVS, basis: Mapping[int, list[int]]) -> bool:
    """Whether {phi^r(S^{i/2^r})} minus zero is a basis of every V^i."""
    for i in range(V.N + 1):
        vectors = list(basis.get(i, []))
        if i:
            d, r = i, 0
            while d % 2 == 0:
                d //= 2
                r += 1
                for v in basis.get(d, []):
                    w = V.phi_power(d, r).apply(v)
                    if w:
                        vectors.append(w)
        eb = EchelonBasis()
        if not all(eb.add(v)[0] for v in vectors) or len(eb) != V.dim(i):
            return False
    return True


def split_free_nilpotent(V: RestrictedVS) -> tuple[RestrictedVS, RestrictedVS, tuple[RVSMap, RVSMap]]:
    """V = free + nilpotent, with the nilpotent part equal to phi^{-1}(0)."""
    _require_valid(V)
    nil = phi_preimage(zero_family(V), V)
    spans: dict[int, list[int]] = {i: [] for i in range(V.N + 1)}
    for g in generators(V):
        if g.summand.kind == "T":
            continue
        v, d = g.vector, g.degree
        while True:
            spans[d].append(v)
            if d == 0 or 2 * d > V.N:
                break
            v, d = V.phi[d].apply(v), 2 * d
    free_family = {i: Subspace(V.dim(i), tuple(vs)) for i, vs in spans.items()}
    F, incl_f = restrict(V, free_family)
    T, incl_t = restrict(V, nil)
    return F, T, (incl_f, incl_t)


def rank_family(V: RestrictedVS) -> dict[tuple[int, int], int]:
    """rank(phi^r : V^i -> V^{2^r i}) for every (i, r) inside the window."""
    out = {(0, 0): V.dim(0)}
    for i in range(1, V.N + 1):
        for r in range(top_power(i, V.N) + 1):
            out[(i, r)] = rank(V.phi_power(i, r))
    return out


def summand_rank_family(summands: Iterable[Summand], N: int) -> dict[tuple[int, int], int]:
    """The same rank family, computed by counting summand contributions."""
    out = Counter({(0, 0): 0})
    for i in range(1, N + 1):
        for r in range(top_power(i, N) + 1):
            out[(i, r)] += 0
    for s in summands:
        if s.n == 0:
            out[(0, 0)] += 1
            continue
        degs = s.degrees(N)
        for a, d in enumerate(degs):
            for b in range(a, len(degs)):
                out[(d, b - a)] += 1
    return dict(out)


def summand_counts(summands: Iterable[Summand]) -> Counter:
    return Counter(summands)


def render(summands: Iterable[Summand]) -> str:
    summands = sorted(summands, key=_render_key)
    return " + ".join(str(s) for s in summands) if summands else "0"


def _render_key(s: Summand) -> tuple:
    return ({"F": 0, "F?": 1, "T": 2}[s.kind], s.n, s.k)


def vector_lists(V: RestrictedVS, basis: Mapping[int, list[int]]) -> dict[int, list[list[int]]]:
    return {i: [vec_to_list(v, V.dim(i)) for v in vs] for i, vs in basis.items() if vs}
