"""E2 generators of the suspension-spectrum spectral sequence versus Dyer–Lashof generators of H_*(QX).

An E2 generator is delta_I [a_1, ..., a_s](v); a Dyer–Lashof generator is
{b_1, ..., b_sigma}(v).  Both are parametrized per class v of degree k >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .delta import excess, is_admissible


@dataclass(frozen=True, order=True)
class E2Generator:
    s: int
    a: tuple[int, ...]
    I: tuple[int, ...] = ()
    k: int = 1

    def __post_init__(self):
        if self.s < 1 or len(self.a) != self.s or any(x < 0 for x in self.a):
            raise ValueError(f"need s >= 1 and s non-negative entries in a, got s={self.s}, a={self.a}")
        if any(i < 1 for i in self.I) or not is_admissible(self.I) or excess(self.I) > self.s:
            raise ValueError(f"I={self.I} must be admissible with entries >= 1 and excess <= {self.s}")
        if self.k < 1:
            raise ValueError("the class v needs degree >= 1")

    @property
    def degree(self) -> tuple[int, int, int]:
        return decorated_degree(self.s, self.a, self.I, self.k)

    @property
    def total(self) -> int:
        return self.degree[2]

    def __str__(self) -> str:
        body = "[" + ",".join(map(str, self.a)) + "](v)"
        if self.I:
            return "".join(f"d{i} " for i in self.I) + body
        return body

    def to_json(self) -> dict:
        return {"s": self.s, "a": list(self.a), "I": list(self.I), "degree": self.total}


@dataclass(frozen=True, order=True)
class DLGenerator:
    b: tuple[int, ...]
    k: int = 1

    def __post_init__(self):
        if len(self.b) < 1 or any(x < 0 for x in self.b):
            raise ValueError(f"need a nonempty tuple of non-negative entries, got {self.b}")
        if self.k < 1:
            raise ValueError("the class v needs degree >= 1")

    @property
    def sigma(self) -> int:
        return len(self.b)

    @property
    def degree(self) -> int:
        return dl_degree(self.b, self.k)

    @property
    def is_square(self) -> bool:
        return self.b[0] == 0

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.b)) + "}(v)"

    def to_json(self) -> dict:
        return {"b": list(self.b), "degree": self.degree}


# ------------------------------------------------------------------ degrees

def lz_degree(s: int, a: Sequence[int], k: int) -> tuple[int, int, int]:
    """(filtration, internal, total) of [a_1..a_s](v)."""
    t = sum(ar * (2 ** s - 2 ** (r - 1)) for r, ar in enumerate(a, start=1))
    t += 2 ** s * (s - 1) + 1 + 2 ** s * k
    return -s, t, t - s


def decorated_degree(s: int, a: Sequence[int], I: Sequence[int], k: int) -> tuple[int, int, int]:
    """(filtration, internal, total) of delta_I [a_1..a_s](v)."""
    _, t, _ = lz_degree(s, a, k)
    f = -s - sum(I)
    t <<= len(I)
    return f, t, t + f


def dl_degree(b: Sequence[int], k: int) -> int:
    sigma = len(b)
    return 2 ** sigma * k + sum((2 ** sigma - 2 ** (r - 1)) * br for r, br in enumerate(b, start=1))


def dl_degree_j_form(b: Sequence[int], k: int) -> int:
    """Degree via the Q^J form: j_i = 2^(sigma-i) k + sum_{j>i} 2^(j-i-1) l_j + l_i, l the partial sums of b."""
    sigma = len(b)
    l = [sum(b[:i]) for i in range(1, sigma + 1)]
    js = [2 ** (sigma - i) * k + sum(2 ** (j - i - 1) * l[j - 1] for j in range(i + 1, sigma + 1)) + l[i - 1]
          for i in range(1, sigma + 1)]
    return k + sum(js)


# ------------------------------------------------------------------ the bijection

def r_coordinates(I: Sequence[int]) -> list[int]:
    """r_t = i_t - 2 i_{t+1}, r_l = i_l."""
    I = list(I)
    return [I[t] - 2 * I[t + 1] for t in range(len(I) - 1)] + I[-1:]


def from_r_coordinates(r: Sequence[int]) -> tuple[int, ...]:
    L = len(r)
    return tuple(sum(2 ** (j - t) * r[j] for j in range(t, L)) for t in range(L))


def forward_map(g: E2Generator) -> DLGenerator:
    if not g.I:
        return DLGenerator((g.a[0] + g.s - 1,) + g.a[1:], g.k)
    r = r_coordinates(g.I)
    head = g.s - sum(r)
    return DLGenerator((head,) + tuple(r[:-1]) + (g.a[0] + r[-1] - 1,) + g.a[1:], g.k)


class MalformedInput(ValueError):
    pass


def split_index(b: Sequence[int]) -> int:
    """The unique L in [0, sigma) with f(L) < sigma <= f(L+1), where f(L) = b_1 + ... + b_L + L."""
    sigma = len(b)
    f = 0
    for L in range(sigma):
        nxt = f + b[L] + 1
        if f < sigma <= nxt:
            return L
        f = nxt
    raise MalformedInput(f"no split index for {tuple(b)}")


def inverse_map(d: DLGenerator) -> E2Generator:
    b = d.b
    sigma = len(b)
    L = split_index(b)
    s = sigma - L
    if L == 0:
        return E2Generator(s, (b[0] - s + 1,) + tuple(b[1:]), (), d.k)
    r = list(b[1:L]) + [s - sum(b[:L])]
    a = (b[L] - r[-1] + 1,) + tuple(b[L + 1:])
    return E2Generator(s, a, from_r_coordinates(r), d.k)


# ------------------------------------------------------------------ enumeration

def _tuples_under(weights: Sequence[int], budget: int) -> Iterator[tuple[int, ...]]:
    """Non-negative tuples x with sum weights[i] * x[i] <= budget (all weights positive)."""
    if not weights:
        yield ()
        return
    w = weights[0]
    for x in range(budget // w + 1):
        for rest in _tuples_under(weights[1:], budget - w * x):
            yield (x,) + rest


def _compositions_r(l: int, s: int) -> Iterator[tuple[int, ...]]:
    """r-coordinates of admissible I of length l with entries >= 1 and excess <= s."""
    if l == 0:
        yield ()
        return
    for head in _tuples_under([1] * (l - 1), s - 1):
        for last in range(1, s - sum(head) + 1):
            yield head + (last,)


def enum_e2(k: int, D: int) -> list:
    """v itself (as the string "v") plus every E2 generator of total degree <= D."""
    out: list = ["v"] if k <= D else []
    s = 1
    while True:
        base_t = 2 ** s * (s - 1) + 1 + 2 ** s * k
        if base_t - s > D:
            break
        l = 0
        while True:
            # with a = 0, |I| <= 2^l s, so this lower-bounds every total degree at this (s, l)
            if 2 ** l * (base_t - s) - s > D:
                break
            for r in _compositions_r(l, s):
                I = from_r_coordinates(r)
                _, _, tot0 = decorated_degree(s, (0,) * s, I, k)
                if tot0 > D:
                    continue
                weights = [2 ** l * (2 ** s - 2 ** (i - 1)) for i in range(1, s + 1)]
                for a in _tuples_under(weights, D - tot0):
                    out.append(E2Generator(s, a, I, k))
            l += 1
        s += 1
    return out


def enum_dl(k: int, D: int) -> list:
    """v itself plus every {b}(v) of degree <= D."""
    out: list = ["v"] if k <= D else []
    sigma = 1
    while 2 ** sigma * k <= D:
        weights = [2 ** sigma - 2 ** (r - 1) for r in range(1, sigma + 1)]
        for b in _tuples_under(weights, D - 2 ** sigma * k):
            out.append(DLGenerator(b, k))
        sigma += 1
    return out


def degree_of(g, k: int) -> int:
    return k if g == "v" else (g.total if isinstance(g, E2Generator) else g.degree)


# ------------------------------------------------------------------ Hilbert series

@dataclass
class HilbertSeries:
    D: int
    coeffs: list[int] = field(default_factory=list)

    @classmethod
    def one(cls, D: int) -> HilbertSeries:
        return cls(D, [1] + [0] * D)

    def __mul__(self, other: HilbertSeries) -> HilbertSeries:
        D = min(self.D, other.D)
        c = [0] * (D + 1)
        for i, x in enumerate(self.coeffs[:D + 1]):
            if x:
                for j, y in enumerate(other.coeffs[:D + 1 - i]):
                    c[i + j] += x * y
        return HilbertSeries(D, c)

    def times_exterior(self, d: int) -> HilbertSeries:
        """Multiply by 1 + x^d."""
        c = list(self.coeffs)
        for i in range(self.D, d - 1, -1):
            c[i] += c[i - d]
        return HilbertSeries(self.D, c)

    def times_polynomial(self, d: int) -> HilbertSeries:
        """Multiply by 1 / (1 - x^d)."""
        if d < 1:
            raise ValueError("a polynomial generator needs positive degree")
        c = list(self.coeffs)
        for i in range(d, self.D + 1):
            c[i] += c[i - d]
        return HilbertSeries(self.D, c)

    def first_mismatch(self, other: HilbertSeries) -> int | None:
        for i, (x, y) in enumerate(zip(self.coeffs, other.coeffs)):
            if x != y:
                return i
        return None


@dataclass
class CollapseReport:
    degrees: tuple[int, ...]
    D: int
    dl_series: HilbertSeries
    e2_series: HilbertSeries

    @property
    def equal(self) -> bool:
        return self.dl_series.coeffs == self.e2_series.coeffs

    @property
    def first_mismatch(self) -> int | None:
        return self.dl_series.first_mismatch(self.e2_series)

    def to_json(self) -> dict:
        return {"degrees": list(self.degrees), "max_degree": self.D, "dl_series": self.dl_series.coeffs,
                "e2_series": self.e2_series.coeffs, "series_equal": self.equal,
                "first_mismatch": self.first_mismatch}


def dl_series(k: int, D: int) -> HilbertSeries:
    """Polynomial algebra on v and on the {b}(v) with b_1 > 0."""
    h = HilbertSeries.one(D)
    for g in enum_dl(k, D):
        if g == "v":
            h = h.times_polynomial(k)
        elif not g.is_square:
            h = h.times_polynomial(g.degree)
    return h


def e2_series(k: int, D: int) -> HilbertSeries:
    """Exterior algebra on v and on every E2 generator."""
    h = HilbertSeries.one(D)
    for g in enum_e2(k, D):
        h = h.times_exterior(degree_of(g, k))
    return h


def collapse_check(degrees: int | Sequence[int], D: int) -> CollapseReport:
    ks = (degrees,) if isinstance(degrees, int) else tuple(degrees)
    if not ks or any(k < 1 for k in ks):
        raise ValueError("need at least one class, each of degree >= 1")
    dl = HilbertSeries.one(D)
    e2 = HilbertSeries.one(D)
    for k in ks:
        dl = dl * dl_series(k, D)
        e2 = e2 * e2_series(k, D)
    return CollapseReport(ks, D, dl, e2)
