"""Admissible words in the higher divided squares and the bases they index.

A word ``(i_1, ..., i_k)`` stands for the composite delta_{i_1} ... delta_{i_k}.
Polynomials are frozensets of words (coefficients mod 2).  The enumerators
count monomials in the algebras that compute homotopy of symmetric and
exterior algebras, keyed by (homotopy degree, internal degree, weight).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from fractions import Fraction
from math import ceil, floor
from typing import Iterable, Iterator, Mapping

Word = tuple[int, ...]
DeltaPolynomial = frozenset
Counts = dict[tuple[int, int, int], int]


class FuelExhausted(RuntimeError):
    """Adem rewriting did not terminate within its step budget."""


def is_admissible(I: Iterable[int]) -> bool:
    I = tuple(I)
    return all(a >= 2 * b for a, b in zip(I, I[1:]))


def excess(I: Iterable[int]) -> int:
    I = tuple(I)
    if not I:
        return 0
    return I[0] - sum(I[1:])


def weight(I: Iterable[int]) -> int:
    return 2 ** len(tuple(I))


def binom_mod2(n: int, k: int) -> int:
    """C(n, k) mod 2 via Lucas: odd exactly when the bits of k sit inside those of n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return int(k & ~n == 0)


def adem_rewrite(i: int, j: int) -> DeltaPolynomial:
    """delta_i delta_j (i < 2j) as a sum of admissible delta_{i+j-s} delta_s."""
    if i < 1 or j < 1:
        raise ValueError("operation indices start at 1")
    if i >= 2 * j:
        raise ValueError(f"({i}, {j}) is already admissible")
    lo = ceil(Fraction(i + 1, 2))
    hi = floor(Fraction(i + j, 3))
    terms = set()
    for s in range(lo, hi + 1):
        if binom_mod2(j - i + s - 1, j - s):
            terms ^= {(i + j - s, s)}
    return frozenset(terms)


def normal_form(word: Iterable[int], fuel: int = 100_000) -> DeltaPolynomial:
    """Rewrite a composite into a sum of admissible composites.

    Repeatedly replaces the leftmost inadmissible adjacent pair.  Every
    rewrite raises the first entry of that pair while fixing the total, so
    the process terminates; the fuel budget turns a violation of that into
    an explicit error rather than a hang.
    """
    word = tuple(word)
    if any(i < 1 for i in word):
        raise ValueError("operation indices start at 1")
    done: Counter = Counter()
    todo: Counter = Counter({word: 1})
    steps = 0
    while todo:
        w, c = todo.popitem()
        if c % 2 == 0:
            continue
        for t in range(len(w) - 1):
            if w[t] < 2 * w[t + 1]:
                steps += 1
                if steps > fuel:
                    raise FuelExhausted(f"no admissible form for {word} within {fuel} rewrites")
                for a, b in adem_rewrite(w[t], w[t + 1]):
                    todo[w[:t] + (a, b) + w[t + 2:]] += 1
                break
        else:
            done[w] += 1
    return frozenset(w for w, c in done.items() if c % 2)


def render(poly: Iterable[Word]) -> str:
    terms = sorted(poly, reverse=True)
    if not terms:
        return "0"
    return " + ".join(" ".join(f"d{i}" for i in w) if w else "1" for w in terms)


# -------------------------------------------------------------- enumeration

def admissible_sequences(min_last: int, max_excess: int, max_sum: int,
                         max_length: int | None = None) -> Iterator[Word]:
    """Nonempty admissible sequences with i_k >= min_last, excess <= max_excess, |I| <= max_sum.

    Sequences are grown from the right: a new leading entry x must satisfy
    x >= 2 * (current first entry) and x - (current sum) <= max_excess.
    """
    def grow(seq: Word, total: int) -> Iterator[Word]:
        yield seq
        if max_length is not None and len(seq) >= max_length:
            return
        first = seq[0]
        for x in range(2 * first, min(max_excess + total, max_sum - total) + 1):
            yield from grow((x,) + seq, total + x)

    for last in range(max(min_last, 1), min(max_excess, max_sum) + 1):
        yield from grow((last,), last)


def _convolve(a: Mapping, b: Mapping, bound) -> dict:
    out: dict = defaultdict(int)
    for ka, ca in a.items():
        for kb, cb in b.items():
            key = tuple(x + y for x, y in zip(ka, kb))
            if bound(key):
                out[key] += ca * cb
    return dict(out)


def _within(T: int | None, Q: int | None, W: int | None):
    def ok(key) -> bool:
        t, q, w = key
        return (T is None or t <= T) and (Q is None or q <= Q) and (W is None or w <= W)
    return ok


def frak_generators(n: int, q: int, flavor: str, T: int, Q: int | None = None,
                    W: int | None = None) -> list[tuple[Word, int, int, int]]:
    """Generators delta_I v for a class v in bidegree (n, q): tuples (I, t, q', weight)."""
    if flavor not in ("symmetric", "exterior"):
        raise ValueError(f"unknown flavor {flavor!r}")
    min_last = 2 if flavor == "symmetric" else 1
    out = []
    if n <= T and (Q is None or q <= Q) and (W is None or W >= 1):
        out.append(((), n, q, 1))
    if n == 0:
        return out
    max_len = None
    if W is not None:
        max_len = max(W.bit_length() - 1, 0)
    for I in admissible_sequences(min_last, n, T - n, max_len):
        qq = q << len(I)
        if Q is not None and qq > Q:
            continue
        out.append((I, n + sum(I), qq, 1 << len(I)))
    return out


def enum_frak_S(V: Mapping[tuple[int, int], int], flavor: str = "symmetric", *, T: int,
                Q: int | None = None, W: int | None = None) -> Counts:
    """Monomial counts for the symmetric (S) or exterior (E) flavor on a bigraded space.

    ``V`` maps (homotopy n, internal q) to a dimension.  In the symmetric
    flavor, classes of homotopy degree 0 generate polynomially and every
    positive-degree generator squares to zero; the exterior flavor is
    exterior throughout.
    """
    ok = _within(T, Q, W)
    result: dict = {(0, 0, 0): 1}
    for (n, q), dim in sorted(V.items()):
        if dim < 0:
            raise ValueError("negative dimension")
        gens = frak_generators(n, q, flavor, T, Q, W)
        for _ in range(dim):
            for I, t, qq, w in gens:
                if flavor == "symmetric" and t == 0:
                    if qq == 0 and W is None:
                        raise ValueError("a degree-(0,0) polynomial generator needs a weight bound")
                    factor = {}
                    m = 0
                    while ok((0, m * qq, m)):
                        factor[(0, m * qq, m)] = 1
                        m += 1
                        if qq == 0 and m > W:
                            break
                else:
                    factor = {(0, 0, 0): 1, (t, qq, w): 1}
                result = _convolve(result, factor, ok)
    return {k: v for k, v in result.items() if v}


def enum_frak_s(V: Mapping[int, int], flavor: str = "symmetric", *, T: int,
                W: int | None = None) -> Counts:
    """Ungraded version: ``V`` maps homotopy degree to dimension; internal degree is 0."""
    return enum_frak_S({(n, 0): d for n, d in V.items()}, flavor, T=T, Q=0, W=W)


def marginal(counts: Mapping[tuple[int, int, int], int], keep: str = "tq") -> dict:
    """Sum out coordinates of a (t, q, w) count table."""
    idx = {"t": 0, "q": 1, "w": 2}
    out: dict = defaultdict(int)
    for key, c in counts.items():
        out[tuple(key[idx[ch]] for ch in keep)] += c
    return {k: v for k, v in out.items() if v}


def weight_slice(counts: Mapping[tuple[int, int, int], int], w: int) -> dict:
    return {k: v for k, v in counts.items() if k[2] == w}


def counts_to_json(counts: Mapping[tuple, int]) -> dict:
    return {"(" + ",".join(str(x) for x in k) + ")": v for k, v in sorted(counts.items())}
