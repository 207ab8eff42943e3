"""Dense linear algebra over the two-element field.

Vectors are Python ints used as bit sets: bit ``j`` holds coordinate ``j``.
An :class:`F2Matrix` stores one such int per row, so ``M @ x`` is a parity
of ``row & x`` for every row.  All elimination uses the lowest set bit as the
pivot and scans rows (or columns) top to bottom, which makes every basis
choice in the package reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_ENTRIES = 1 << 26


class SizeError(ValueError):
    """A computation was refused because it exceeds a size guardrail."""


class ContainmentError(ValueError):
    """A subspace was not contained in the space it was compared against."""


def low_bit(v: int) -> int:
    return (v & -v).bit_length() - 1


def popcount(v: int) -> int:
    return bin(v).count("1")


def bits(v: int) -> Iterable[int]:
    """Indices of the set bits of ``v`` in increasing order."""
    while v:
        b = v & -v
        yield b.bit_length() - 1
        v ^= b


def vec_from_list(entries: Sequence[int]) -> int:
    v = 0
    for j, e in enumerate(entries):
        if e not in (0, 1):
            raise ValueError(f"entry {e!r} is not a bit")
        if e:
            v |= 1 << j
    return v


def vec_to_list(v: int, n: int) -> list[int]:
    return [(v >> j) & 1 for j in range(n)]


def _check_size(rows: int, cols: int) -> None:
    if rows * cols > MAX_ENTRIES:
        raise SizeError(f"{rows}x{cols} matrix exceeds the 2^26 entry cap")


@dataclass(frozen=True)
class F2Matrix:
    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows:
            raise ValueError("row count does not match nrows")
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError("row has bits outside the column range")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], ncols: int | None = None) -> F2Matrix:
        entries = [list(r) for r in entries]
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        for r in entries:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        _check_size(len(entries), ncols)
        return cls(len(entries), ncols, tuple(vec_from_list(r) for r in entries))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> F2Matrix:
        _check_size(nrows, ncols)
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> F2Matrix:
        _check_size(n, n)
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> F2Matrix:
        """Matrix whose ``j``-th column is the bit vector ``columns[j]``."""
        _check_size(nrows, len(columns))
        rows = [0] * nrows
        for j, c in enumerate(columns):
            for i in bits(c):
                if i >= nrows:
                    raise ValueError("column has bits outside the row range")
                rows[i] |= 1 << j
        return cls(nrows, len(columns), tuple(rows))

    def to_lists(self) -> list[list[int]]:
        return [vec_to_list(r, self.ncols) for r in self.rows]

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def columns(self) -> list[int]:
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            for j in bits(r):
                cols[j] |= 1 << i
        return cols

    def transpose(self) -> F2Matrix:
        return F2Matrix(self.ncols, self.nrows, tuple(self.columns()))

    def apply(self, x: int) -> int:
        """The vector ``M x``."""
        out = 0
        for i, r in enumerate(self.rows):
            if popcount(r & x) & 1:
                out |= 1 << i
        return out

    def __matmul__(self, other: F2Matrix) -> F2Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for r in self.rows:
            acc = 0
            for j in bits(r):
                acc ^= other.rows[j]
            out.append(acc)
        return F2Matrix(self.nrows, other.ncols, tuple(out))

    def __add__(self, other: F2Matrix) -> F2Matrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return F2Matrix(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def is_zero(self) -> bool:
        return not any(self.rows)


def hstack(blocks: Sequence[F2Matrix]) -> F2Matrix:
    if not blocks:
        raise ValueError("nothing to stack")
    nrows = blocks[0].nrows
    rows = [0] * nrows
    shift = 0
    for b in blocks:
        if b.nrows != nrows:
            raise ValueError("hstack row mismatch")
        for i, r in enumerate(b.rows):
            rows[i] |= r << shift
        shift += b.ncols
    _check_size(nrows, shift)
    return F2Matrix(nrows, shift, tuple(rows))


def vstack(blocks: Sequence[F2Matrix]) -> F2Matrix:
    if not blocks:
        raise ValueError("nothing to stack")
    ncols = blocks[0].ncols
    rows: list[int] = []
    for b in blocks:
        if b.ncols != ncols:
            raise ValueError("vstack column mismatch")
        rows.extend(b.rows)
    _check_size(len(rows), ncols)
    return F2Matrix(len(rows), ncols, tuple(rows))


def block_diagonal(blocks: Sequence[F2Matrix]) -> F2Matrix:
    nrows = sum(b.nrows for b in blocks)
    ncols = sum(b.ncols for b in blocks)
    _check_size(nrows, ncols)
    rows: list[int] = []
    shift = 0
    for b in blocks:
        rows.extend(r << shift for r in b.rows)
        shift += b.ncols
    return F2Matrix(nrows, ncols, tuple(rows))


class EchelonBasis:
    """Incrementally reduced set of vectors keyed by their lowest set bit.

    Each stored vector may carry a *tag* recording which inputs were combined
    to produce it; tags are what make kernels and solutions recoverable.
    Works on vectors of any width, so it doubles as a sparse rank engine.
    """

    def __init__(self):
        self.pivots: dict[int, tuple[int, int]] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, v: int, tag: int = 0) -> tuple[int, int]:
        pivots = self.pivots
        while v:
            p = (v & -v).bit_length() - 1
            hit = pivots.get(p)
            if hit is None:
                break
            v ^= hit[0]
            tag ^= hit[1]
        return v, tag

    def remainder(self, v: int) -> int:
        """Canonical representative of ``v`` modulo the span: no pivot bit survives."""
        out = v
        rest = v
        while rest:
            p = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            hit = self.pivots.get(p)
            if hit is not None and (out >> p) & 1:
                out ^= hit[0]
                rest = out & ~((1 << (p + 1)) - 1)
        return out

    def add(self, v: int, tag: int = 0) -> tuple[bool, int]:
        """Insert ``v``; returns (independent, residual tag if dependent)."""
        v, tag = self.reduce(v, tag)
        if v == 0:
            return False, tag
        self.pivots[low_bit(v)] = (v, tag)
        return True, tag

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0


def rank(M: F2Matrix) -> int:
    eb = EchelonBasis()
    for r in M.rows:
        eb.add(r)
    return len(eb)


def rank_of(vectors: Iterable[int]) -> int:
    eb = EchelonBasis()
    for v in vectors:
        eb.add(v)
    return len(eb)


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple[int, ...]

    def __post_init__(self):
        limit = 1 << self.ambient_dim
        for v in self.basis:
            if v < 0 or v >= limit:
                raise ValueError("basis vector longer than ambient dimension")
        if rank_of(self.basis) != len(self.basis):
            raise ValueError("subspace basis is linearly dependent")

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[int]) -> Subspace:
        """Independent subfamily of ``vectors``, kept in input order."""
        eb = EchelonBasis()
        kept = [v for v in vectors if eb.add(v)[0]]
        return cls(ambient_dim, tuple(kept))

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, tuple(1 << i for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: int) -> bool:
        eb = EchelonBasis()
        for b in self.basis:
            eb.add(b)
        return eb.contains(v)

    def contains_subspace(self, other: Subspace) -> bool:
        eb = EchelonBasis()
        for b in self.basis:
            eb.add(b)
        return all(eb.contains(v) for v in other.basis)

    def coordinates(self, v: int) -> int | None:
        """Bit vector ``c`` with ``v = sum c_j basis[j]``, or None."""
        eb = EchelonBasis()
        for j, b in enumerate(self.basis):
            eb.add(b, 1 << j)
        rest, tag = eb.reduce(v)
        return tag if rest == 0 else None


def kernel_basis(M: F2Matrix) -> Subspace:
    """Basis of ``{x : M x = 0}``, one vector per non-pivot column."""
    eb = EchelonBasis()
    kernel = []
    for j, col in enumerate(M.columns()):
        independent, tag = eb.add(col, 1 << j)
        if not independent:
            kernel.append(tag)
    return Subspace(M.ncols, tuple(kernel))


def image_basis(M: F2Matrix) -> Subspace:
    """Column space of ``M``, as the pivot columns in index order."""
    return Subspace.span(M.nrows, M.columns())


def solve(M: F2Matrix, b: int | Sequence[int]) -> int | None:
    """Some ``x`` with ``M x = b``, or None when the system is inconsistent."""
    if not isinstance(b, int):
        if len(b) != M.nrows:
            raise ValueError(f"right-hand side has length {len(b)}, expected {M.nrows}")
        b = vec_from_list(b)
    elif b >> M.nrows:
        raise ValueError("right-hand side longer than the row count")
    eb = EchelonBasis()
    for j, col in enumerate(M.columns()):
        eb.add(col, 1 << j)
    rest, tag = eb.reduce(b)
    return tag if rest == 0 else None


def complement(inner: Subspace, outer: Subspace) -> Subspace:
    """Greedy complement of ``inner`` inside ``outer``, scanning ``outer.basis`` in order."""
    if inner.ambient_dim != outer.ambient_dim:
        raise ValueError("ambient dimensions differ")
    if not outer.contains_subspace(inner):
        raise ContainmentError("inner subspace is not contained in outer")
    eb = EchelonBasis()
    for v in inner.basis:
        eb.add(v)
    chosen = [v for v in outer.basis if eb.add(v)[0]]
    return Subspace(outer.ambient_dim, tuple(chosen))


def extend_to_basis(sub: Subspace) -> Subspace:
    """Standard basis vectors completing ``sub`` to the whole ambient space."""
    return complement(sub, Subspace.full(sub.ambient_dim))


def preimage(M: F2Matrix, target: Subspace) -> Subspace:
    """``{x : M x in target}``."""
    if target.ambient_dim != M.nrows:
        raise ValueError("target lives in the wrong space")
    eb = EchelonBasis()
    for v in target.basis:
        eb.add(v)
    # reduce each column modulo the target, then take relations among them
    reduced = [eb.remainder(c) for c in M.columns()]
    return kernel_basis(F2Matrix.from_columns(reduced, M.nrows))


def intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimensions differ")
    # x in a with x in b: coordinates c of a-basis with sum c_j a_j in b
    A = F2Matrix.from_columns(list(a.basis), a.ambient_dim)
    coords = preimage(A, b)
    return Subspace.span(a.ambient_dim, (A.apply(c) for c in coords.basis))


def inverse(M: F2Matrix) -> F2Matrix:
    if M.nrows != M.ncols:
        raise ValueError("only square matrices are invertible")
    n = M.nrows
    cols = []
    for i in range(n):
        x = solve(M, 1 << i)
        if x is None:
            raise ValueError("matrix is singular")
        cols.append(x)
    return F2Matrix.from_columns(cols, n)
