"""Command-line interface: ``f2derived <command> ...``.

Exit codes: 0 success or MATCH, 1 MISMATCH or failed check, 2 bad input, 3 size guardrail.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import acceptance, delta, loopspace, rchain, restricted, unstable
from .f2core import SizeError

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_SIZE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}, line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _load_space(path: str) -> restricted.RestrictedVS:
    data = _load_json(path)
    try:
        V = restricted.RestrictedVS.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    report = restricted.validate(V)
    if not report.ok:
        raise InputError(f"{path}: invalid restricted vector space: {report}")
    return V


def _load_complex(path: str) -> rchain.RVSComplex:
    data = _load_json(path)
    try:
        C = rchain.RVSComplex.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    problems = C.check()
    if problems:
        raise InputError(f"{path}: invalid chain complex: {problems[0]}")
    return C


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _bounds(args, C: rchain.RVSComplex) -> tuple[int, int]:
    T = args.max_homotopy if args.max_homotopy is not None else 6
    Q = args.max_internal if args.max_internal is not None else C.N
    if T < 0 or Q < 0:
        raise InputError("bounds must be non-negative")
    if Q > C.N:
        raise InputError(f"--max-internal {Q} exceeds the complex's window N={C.N}")
    return T, Q


# ------------------------------------------------------------------ commands

def cmd_decompose(args) -> int:
    V = _load_space(args.path)
    summands = restricted.decompose(V)
    _emit(args, {"summands": [str(s) for s in summands], "rendered": restricted.render(summands)},
          restricted.render(summands))
    return EXIT_OK


def cmd_chain_decompose(args) -> int:
    C = _load_complex(args.path)
    parts = rchain.decompose_complex(C)
    rendered = " + ".join(str(p) for p in parts) or "0"
    _emit(args, {"summands": [str(p) for p in parts], "rendered": rendered}, rendered)
    return EXIT_OK


def cmd_pi_u(args) -> int:
    C = _load_complex(args.path)
    T, Q = _bounds(args, C)
    closed = unstable.pi_U_closed_form(C, T, Q)
    payload = closed.to_json()
    text = unstable.table(closed.dims, T, Q)
    code = EXIT_OK
    if args.oracle:
        L = args.levels if args.levels is not None else T + 1
        if L < T + 1:
            raise InputError(f"--levels {L} is too small; the oracle needs at least {T + 1}")
        S = rchain.dold_kan_K(C, L)
        oracle = unstable.pi_U_oracle(S, T, Q)
        diff = unstable.first_difference(oracle.dims, closed.dims)
        if diff is None:
            verdict = "MATCH"
        else:
            verdict = f"MISMATCH at (t,q)={diff[0]}: oracle {diff[1]}, closed form {diff[2]}"
            code = EXIT_MISMATCH
        payload["oracle"] = {"dims": oracle.to_json()["dims"], "verdict": verdict.split()[0]}
        text += "\n" + verdict
    _emit(args, payload, text)
    return code


def cmd_e_infinity(args) -> int:
    C = _load_complex(args.path)
    T, Q = _bounds(args, C)
    dims = unstable.e_infinity_length(C, T, Q)
    payload = {"dims": {unstable._key(k): v for k, v in sorted(dims.items())}}
    lines = ["  s   t   q  dim"] + [f"{s:3d} {t:3d} {q:3d} {c:4d}" for (s, t, q), c in sorted(dims.items())]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _degrees(args) -> list[int]:
    ks = args.degrees or [1]
    if any(k < 1 for k in ks):
        raise InputError("class degrees must be >= 1")
    if args.max_degree is None or args.max_degree < 0:
        raise InputError("--max-degree must be given and non-negative")
    return ks


def _listing(args, enum, describe) -> int:
    ks = _degrees(args)
    D = args.max_degree
    payload, lines = {"max_degree": D, "classes": []}, []
    for k in ks:
        gens = enum(k, D)
        entries = []
        for g in gens:
            deg = loopspace.degree_of(g, k)
            entries.append({"generator": "v" if g == "v" else str(g), "degree": deg, **describe(g)})
        entries.sort(key=lambda e: (e["degree"], e["generator"]))
        payload["classes"].append({"k": k, "generators": entries})
        label = f"v (degree {k})" if len(ks) > 1 else None
        if label:
            lines.append(label)
        lines += [f"{e['degree']:4d}  {e['generator']}" for e in entries]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_qx(args) -> int:
    return _listing(args, loopspace.enum_dl, lambda g: {} if g == "v" else {"b": list(g.b)})


def cmd_e2(args) -> int:
    return _listing(args, loopspace.enum_e2,
                    lambda g: {} if g == "v" else {"s": g.s, "a": list(g.a), "I": list(g.I)})


def cmd_collapse(args) -> int:
    ks = _degrees(args)
    report = loopspace.collapse_check(ks, args.max_degree)
    if report.equal:
        head = f"EQUAL through degree {args.max_degree}"
    else:
        head = f"DIFFERENT first at degree {report.first_mismatch}"
    text = "\n".join([head, "H_*(QX): " + " ".join(map(str, report.dl_series.coeffs)),
                      "E2:      " + " ".join(map(str, report.e2_series.coeffs))])
    _emit(args, report.to_json(), text)
    return EXIT_OK if report.equal else EXIT_MISMATCH


def cmd_adem(args) -> int:
    word = tuple(args.indices)
    if any(i < 1 for i in word):
        raise InputError("operation indices start at 1")
    nf = delta.normal_form(word)
    _emit(args, {"word": list(word), "normal_form": sorted(list(w) for w in nf)}, delta.render(nf))
    return EXIT_OK


def cmd_selftest(args) -> int:
    only = args.only or None
    if only and any(n not in acceptance.CHECKS for n in only):
        raise InputError("--only takes criterion numbers 1-9")
    return acceptance.run_all(seed=args.seed, golden=args.golden, only=only,
                              log=lambda s: print(s, flush=True))


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-internal", type=int, help="internal degree bound Q")
    common.add_argument("--max-homotopy", type=int, help="homotopy degree bound T (default 6)")
    common.add_argument("--max-degree", type=int, help="total degree bound D")
    common.add_argument("--levels", type=int, help="simplicial level bound L for the oracle")
    common.add_argument("--format", choices=["table", "json"], default="table")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--oracle", action="store_true", help="also run the brute-force oracle")
    common.add_argument("--golden", metavar="DIR", help="snapshot directory for selftest")
    common.add_argument("--degrees", type=int, nargs="+", help="degrees of the sphere classes")

    p = argparse.ArgumentParser(prog="f2derived", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, helptext, path=False):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        if path:
            sp.add_argument("path")
        sp.set_defaults(func=func)
        return sp

    add("decompose", cmd_decompose, "split a restricted vector space into F and T summands", path=True)
    add("chain-decompose", cmd_chain_decompose, "split a chain complex into points and cells", path=True)
    add("pi-u", cmd_pi_u, "homotopy of U via the closed form (optionally checked by the oracle)", path=True)
    add("e-infinity", cmd_e_infinity, "word-length filtration dimensions", path=True)
    add("e2", cmd_e2, "E2 generators of the spectral sequence")
    add("qx", cmd_qx, "Dyer-Lashof generators of H_*(QX)")
    add("collapse", cmd_collapse, "compare the Hilbert series of E2 and H_*(QX)")
    adem = add("adem", cmd_adem, "admissible normal form of a composite of delta operations")
    adem.add_argument("indices", type=int, nargs="+")
    st = add("selftest", cmd_selftest, "run acceptance checks 1-9")
    st.add_argument("--only", type=int, nargs="+", help="run just these checks")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SizeError as exc:
        print(f"size limit: {exc}; try smaller --max-homotopy or --max-internal", file=sys.stderr)
        return EXIT_SIZE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
