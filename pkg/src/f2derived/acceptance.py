"""The ten acceptance checks, shared by ``f2derived selftest`` and the pytest suite.

Each check returns a ``CheckResult`` whose ``summary`` is a small JSON-able
record of what was computed; ``--golden`` mode snapshots those summaries.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import delta, loopspace, rchain, restricted, unstable


@dataclass
class CheckResult:
    number: int
    title: str
    ok: bool
    detail: str
    seconds: float = 0.0
    summary: dict = field(default_factory=dict)

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return f"[{verdict}] {self.number}. {self.title}: {self.detail} ({self.seconds:.1f}s)"


# ------------------------------------------------------------------ corpora

def random_summands(rng: random.Random, N: int, max_dim: int = 40) -> list[restricted.Summand]:
    out: list[restricted.Summand] = []
    total = 0
    for _ in range(rng.randint(0, 12)):
        kind = rng.choice("FFTT?")
        if kind == "T" and N >= 2:
            n = rng.randint(1, N // 2)
            k = rng.randint(1, (N // n).bit_length() - 1)
            s = restricted.Summand("T", n, k)
        elif kind == "?" and N >= 1:
            s = restricted.Summand("F?", rng.randint(N // 2 + 1, N))
        else:
            s = restricted.Summand("F", rng.randint(0, N // 2))
        size = len(s.degrees(N))
        if total + size > max_dim:
            break
        total += size
        out.append(s)
    return sorted(out)


def restricted_corpus(seed: int, count: int = 1000):
    """(N, expected summands, scrambled space) triples."""
    rng = random.Random(seed)
    for _ in range(count):
        N = rng.randint(1, 32)
        summands = random_summands(rng, N)
        V = restricted.scramble(restricted.from_summands(summands, N), rng)
        yield N, summands, V


ORACLE_CASES = [
    ("K", 1, 1, None), ("K", 1, 2, None), ("K", 2, 1, None), ("K", 2, 2, None),
    ("K", 1, 0, None), ("K", 2, 0, None),
    ("cell", 1, 1, 1), ("cell", 1, 1, 2), ("cell", 1, 2, 1), ("cell", 2, 1, 1),
]


def oracle_case(kind: str, n: int, q: int, k, T: int, Q: int):
    """(label, simplicial object, chain complex) for one oracle comparison."""
    N = max(Q, 1)
    if kind == "K":
        return f"K[{n},{q}]", rchain.make_K(n, q, N, T + 1), rchain.point(q, N, n)
    return f"K[{n},{q},{k}]", rchain.make_K_cell(n, q, k, N, T + 1), rchain.cell(q, k, N, n)


def filtration_corpus(seed: int, T: int, Q: int):
    rng = random.Random(seed)
    out = [oracle_case(*case, T, Q)[::2] for case in ORACLE_CASES]
    for j in range(20):
        out.append((f"random #{j}", rchain.random_complex(rng, Q, length=3)))
    out.append(("F(0) in degree 0", rchain.point(0, Q, 0)))
    out.append(("T(1,2) in degree 0", rchain.concentrated(restricted.torsion(1, 2, Q), 0)))
    return out


# ------------------------------------------------------------------ checks

def check_1(seed: int = 0) -> CheckResult:
    failures, n = [], 0
    for N, expected, V in restricted_corpus(seed):
        n += 1
        got = restricted.decompose(V)
        if got != expected:
            failures.append((N, restricted.render(expected), restricted.render(got)))
    detail = f"{n - len(failures)}/{n} scrambled spaces decomposed back to their summands"
    if failures:
        detail += f"; first failure N={failures[0][0]}: expected {failures[0][1]}, got {failures[0][2]}"
    return CheckResult(1, "restricted decomposition round trip", not failures, detail,
                       summary={"cases": n, "failures": len(failures)})


def check_2(seed: int = 0) -> CheckResult:
    failures, n, pairs = 0, 0, 0
    for N, _, V in restricted_corpus(seed):
        n += 1
        direct = restricted.rank_family(V)
        rebuilt = restricted.summand_rank_family(restricted.decompose(V), N)
        pairs += len(direct)
        failures += direct != rebuilt
    return CheckResult(2, "rank-family invariant", failures == 0,
                       f"{n - failures}/{n} spaces agree on all {pairs} (i, r) ranks",
                       summary={"cases": n, "failures": failures, "ranks": pairs})


def check_3(seed: int = 0, count: int = 200) -> CheckResult:
    rng = random.Random(seed)
    failures = 0
    for _ in range(count):
        N = rng.randint(1, 8)
        C = rchain.random_complex(rng, N, length=3)
        R = rchain.normalize_N(rchain.dold_kan_K(C, 3))
        R = rchain.RVSComplex(R.levels[:3], R.differentials[:2])
        failures += not rchain.complexes_equal(C, R)
    return CheckResult(3, "Dold-Kan round trip N(K(C)) = C", failures == 0,
                       f"{count - failures}/{count} random 3-level complexes recovered exactly",
                       summary={"cases": count, "failures": failures})


def check_4(bound: int = 20) -> CheckResult:
    problems = []
    pairs = 0
    words = [(i, j) for i in range(1, bound + 1) for j in range(1, bound + 1) if i < 2 * j]
    words += [(a, b, c) for a in range(1, 9) for b in range(1, 9) for c in range(1, 9)
              if not delta.is_admissible((a, b, c))]
    for w in words:
        pairs += 1
        try:
            nf = delta.normal_form(w)
        except delta.FuelExhausted as exc:
            problems.append(str(exc))
            continue
        for term in nf:
            if not delta.is_admissible(term) or sum(term) != sum(w) or len(term) != len(w):
                problems.append(f"{w} -> bad term {term}")
            if delta.normal_form(term) != frozenset({term}):
                problems.append(f"{w}: normal form not idempotent on {term}")
    detail = f"{pairs} inadmissible words rewritten to admissible, sum- and length-preserving forms"
    if problems:
        detail = f"{len(problems)} problems, first: {problems[0]}"
    return CheckResult(4, "Adem engine", not problems, detail,
                       summary={"words": pairs, "problems": len(problems)})


def check_5(T: int = 6, Q: int = 6, cases=None, log: Callable[[str], None] | None = None) -> CheckResult:
    rows, mismatches = {}, []
    for case in cases or ORACLE_CASES:
        label, S, C = oracle_case(*case, T, Q)
        t0 = time.time()
        oracle = unstable.pi_U_oracle(S, T, Q).dims
        closed = unstable.pi_U_closed_form(C, T, Q).dims
        diff = unstable.first_difference(oracle, closed)
        rows[label] = {unstable._key(k): v for k, v in sorted(oracle.items())}
        if diff:
            mismatches.append(f"{label} at {diff[0]}: oracle {diff[1]}, closed form {diff[2]}")
        if log:
            log(f"    {label}: {'MATCH' if not diff else 'MISMATCH'} ({time.time() - t0:.1f}s)")
    n = len(cases or ORACLE_CASES)
    detail = f"{n - len(mismatches)}/{n} simplicial objects match the closed form for T={T}, Q={Q}"
    if mismatches:
        detail += "; " + mismatches[0]
    return CheckResult(5, "oracle vs closed form for pi_* U", not mismatches, detail, summary=rows)


def check_6(seed: int = 0, T: int = 6, Q: int = 8) -> CheckResult:
    failures = []
    corpus = filtration_corpus(seed, T, Q)
    for label, C in corpus:
        e_inf = unstable.e_infinity_length(C, T, Q)
        marg: dict = {}
        for (s, t, q), c in e_inf.items():
            marg[(t, q)] = marg.get((t, q), 0) + c
        closed = unstable.pi_U_closed_form(C, T, Q).dims
        if marg != closed:
            failures.append(label)
    detail = f"{len(corpus) - len(failures)}/{len(corpus)} complexes: filtration marginal equals pi_* U"
    if failures:
        detail += f"; first failure {failures[0]}"
    return CheckResult(6, "length-filtration consistency", not failures, detail,
                       summary={"cases": len(corpus), "failures": failures})


def _bijection_ranges(kmax: int, D: int):
    for k in range(1, kmax + 1):
        e2 = [g for g in loopspace.enum_e2(k, D) if g != "v"]
        dl = [g for g in loopspace.enum_dl(k, D) if g != "v"]
        yield k, e2, dl


def check_7(kmax: int = 4, D: int = 60) -> CheckResult:
    bad, count = [], 0
    for k, e2, dl in _bijection_ranges(kmax, D):
        for g in e2:
            count += 1
            if loopspace.inverse_map(loopspace.forward_map(g)) != g:
                bad.append(str(g))
        for d in dl:
            count += 1
            if loopspace.forward_map(loopspace.inverse_map(d)) != d:
                bad.append(str(d))
        if len(e2) != len(dl):
            bad.append(f"k={k}: {len(e2)} E2 generators vs {len(dl)} Dyer-Lashof generators")
    detail = f"{count} round trips exact for k <= {kmax}, degree <= {D}"
    if bad:
        detail = f"{len(bad)} failures, first {bad[0]}"
    return CheckResult(7, "bijection round trip", not bad, detail, summary={"round_trips": count})


def check_8(kmax: int = 4, D: int = 60) -> CheckResult:
    bad, count = [], 0
    for _, e2, _ in _bijection_ranges(kmax, D):
        for g in e2:
            count += 1
            if loopspace.forward_map(g).degree != g.total:
                bad.append(str(g))
    detail = f"{count} generators keep their total degree" if not bad else f"first failure {bad[0]}"
    return CheckResult(8, "degree preservation", not bad, detail, summary={"generators": count})


def check_9(D: int = 40) -> CheckResult:
    runs = {}
    bad = []
    for ks in ([1], [2], [3], [1, 2]):
        report = loopspace.collapse_check(ks, D)
        runs[",".join(map(str, ks))] = report.dl_series.coeffs
        if not report.equal:
            bad.append(f"degrees {ks} differ at x^{report.first_mismatch}")
    detail = f"Hilbert series equal through degree {D} for k=1, 2, 3 and the wedge 1,2"
    if bad:
        detail = "; ".join(bad)
    return CheckResult(9, "collapse at E2", not bad, detail, summary=runs)


CHECKS = {1: check_1, 2: check_2, 3: check_3, 4: check_4, 5: check_5,
          6: check_6, 7: check_7, 8: check_8, 9: check_9}

TITLES = {
    1: "restricted decomposition round trip",
    2: "rank-family invariant",
    3: "Dold-Kan round trip N(K(C)) = C",
    4: "Adem engine",
    5: "oracle vs closed form for pi_* U",
    6: "length-filtration consistency",
    7: "bijection round trip",
    8: "degree preservation",
    9: "collapse at E2",
    10: "selftest exits 0",
}


def run_check(number: int, **kwargs) -> CheckResult:
    t0 = time.time()
    try:
        result = CHECKS[number](**kwargs)
    except Exception as exc:  # a crash is a failed check, reported as such
        result = CheckResult(number, TITLES[number], False, f"raised {type(exc).__name__}: {exc}")
    result.seconds = time.time() - t0
    return result


def compare_golden(results: list[CheckResult], directory: str | Path) -> list[str]:
    """Write missing snapshots, report differences against existing ones."""
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    drift = []
    for r in results:
        f = path / f"criterion_{r.number}.json"
        data = json.loads(json.dumps(r.summary, sort_keys=True))
        if f.exists():
            if json.loads(f.read_text()) != data:
                drift.append(f"criterion {r.number} differs from {f}")
        else:
            f.write_text(json.dumps(data, sort_keys=True, indent=2) + "\n")
    return drift


def run_all(seed: int = 0, log: Callable[[str], None] = print, golden: str | None = None,
            only: list[int] | None = None) -> int:
    """Run checks 1-9, print one line each, and return the exit code (0 ok, 1 failure)."""
    results = []
    for number in only or sorted(CHECKS):
        kwargs = {"seed": seed} if number in (1, 2, 3, 6) else {}
        if number == 5:
            kwargs["log"] = log
        r = run_check(number, **kwargs)
        results.append(r)
        log(r.line())
    ok = all(r.ok for r in results)
    if golden:
        drift = compare_golden(results, golden)
        for d in drift:
            log(f"[GOLDEN] {d}")
        ok = ok and not drift
    log(f"[{'PASS' if ok else 'FAIL'}] 10. {TITLES[10]}: "
        f"{sum(r.ok for r in results)}/{len(results)} checks passed")
    return 0 if ok else 1
