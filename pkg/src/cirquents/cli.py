"""Command-line front end.

Exit codes: 0 success / provable / true, 1 unprovable / false / invalid
proof, 2 parse or usage error, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from . import cl2, decide, inference as inf, resource as res, semantics, sequents
from .cirquent import (Cirquent, embed_formula, parse_cirquent, parse_sequent, render,
                       sequent_to_cirquent, to_cirquent_text)
from .errors import CapExceeded, CirquentsError, ParseError, ProofFormatError, UnsupportedError
from .formula import is_cl5_formula, parse as parse_formula, to_text

OK, NO, USAGE, CAP = 0, 1, 2, 3


class _Usage(Exception):
    pass


def _read_input(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _object(text: str, kind: Optional[str]):
    """Formula or cirquent, auto-detected by a leading '['."""
    t = text.strip()
    kind = kind or ("cirquent" if t.startswith("[") else "formula")
    if kind == "cirquent":
        return parse_cirquent(t, reserved=True)
    if kind == "formula":
        return parse_formula(t, reserved=True)
    if kind == "sequent":
        return sequent_to_cirquent(parse_sequent(t, reserved=True))
    raise _Usage(f"unsupported --kind {kind!r}")


def _as_cirquent(obj) -> Cirquent:
    return obj if isinstance(obj, Cirquent) else embed_formula(obj)


def _out(s: str):
    sys.stdout.write(s if s.endswith("\n") else s + "\n")


# ---------------------------------------------------------------------------
# verbs


def cmd_prove(a) -> int:
    text = _read_input(a.input)
    system = a.system
    if system == "affine":
        t = text.strip()
        if a.kind == "cirquent" or t.startswith("["):
            raise _Usage("affine proofs take a sequent or formula")
        s = parse_sequent(t, reserved=True)
        p = decide.prove_affine(s, max_oliterals=a.max_oliterals)
        if p is None:
            _out("UNPROVABLE")
            return NO
        _out(sequents.write_sequent_proof(p))
        return OK
    if system == "cl2":
        f = _object(text, a.kind)
        if isinstance(f, Cirquent):
            raise _Usage("CL2 proves formulas, not cirquents")
        d = cl2.prove_cl2(f, max_atoms=a.max_atoms)
        if d is None:
            _out("UNPROVABLE")
            return NO
        _out(cl2.write_derivation(d))
        return OK
    obj = _as_cirquent(_object(text, a.kind))
    if system == "ccc":
        p = decide.prove_ccc(obj, max_atoms=a.max_atoms)
        sysv = inf.CCC
    elif system in ("cl5", "cl6-check"):
        if not all(is_cl5_formula(f) for f in obj.pool):
            raise _Usage(f"{system} needs general atoms and parallel connectives only")
        p = decide.prove_cl5(obj, max_oliterals=a.max_oliterals)
        sysv = inf.CL6 if system == "cl6-check" else inf.CL5
    else:
        raise _Usage(f"unknown system {system!r}")
    if p is None:
        _out("UNPROVABLE")
        return NO
    bad = inf.check_proof(p, sysv)
    if bad:  # pragma: no cover - provers are checked by the test-suite
        for v in bad:
            print(v, file=sys.stderr)
        return NO
    _out(inf.write_proof(p))
    return OK


def cmd_check(a) -> int:
    text = _read_input(a.proof)
    name = a.system.lower()
    try:
        if name in ("affine", "classical"):
            p = sequents.read_sequent_proof(text)
            rules = sequents.AFFINE_RULES if name == "affine" else sequents.CLASSICAL_RULES
            bad = sequents.check_sequent_proof(p, rules)
        elif name == "cl2":
            d = cl2.read_derivation(text, max_atoms=a.max_atoms)
            bad = cl2.check_derivation(d, max_atoms=a.max_atoms)
        else:
            try:
                sysv = inf.system_by_name("cl6" if name == "cl6-check" else a.system)
            except ValueError as e:
                raise _Usage(str(e))
            if a.primitive:
                sysv = sysv.starred()
            p = inf.read_proof(text)
            bad = inf.check_proof(p, sysv)
    except ProofFormatError as e:
        print(f"INVALID: {e}")
        return NO
    if bad:
        print("INVALID")
        for v in bad:
            print(f"  {v}")
        return NO
    print("OK")
    return OK


def cmd_decide(a) -> int:
    obj = _object(_read_input(a.input), a.kind)
    q = a.question
    if q == "tautology":
        ans = semantics.is_tautology(obj, max_atoms=a.max_atoms)
        print("TRUE" if ans else "FALSE")
        return OK if ans else NO
    if q == "binary-instance":
        r = decide.decide_binary_instance(obj, max_oliterals=a.max_oliterals)
        if r is None:
            print("FALSE")
            return NO
        print("TRUE")
        print(f"tautology: {to_cirquent_text(r.tautology)}")
        print("coupling: " + " ".join(f"({x},{y})" for x, y in r.coupling))
        return OK
    if q == "trivial":
        arr = res.is_trivial(res.denotation(obj, a.max_ports), max_ports=a.max_ports)
        if arr is None:
            print("FALSE")
            return NO
        print("TRUE")
        sys.stdout.write(res.write_arrangement(arr))
        return OK
    raise _Usage(f"unknown question {q!r}")


def _resource_of(text: str, a) -> res.Resource:
    t = text.strip()
    if t.startswith("resource"):
        return res.parse_resource(t)
    return res.denotation(_object(t, a.kind), a.max_ports)


def cmd_resource(a) -> int:
    alpha = _resource_of(_read_input(a.input), a)
    if a.action == "table":
        print(" ".join(str(p) for p in alpha.interface) + " | value")
        for s, v in alpha.rows():
            print(f"{' '.join(s) if s else '(empty)'} | {v}")
        return OK
    if a.action == "represent":
        print(to_cirquent_text(res.represent(alpha)))
        return OK
    if a.action == "trivial":
        arr = res.is_trivial(alpha, max_ports=a.max_ports)
        if arr is None:
            print("NOT TRIVIAL")
            return NO
        sys.stdout.write(res.write_arrangement(arr) or "# empty arrangement\n")
        return OK
    raise _Usage(a.action)


def cmd_extract(a) -> int:
    try:
        p = inf.read_proof(_read_input(a.proof))
    except ProofFormatError as e:
        print(f"INVALID: {e}")
        return NO
    bad = inf.check_proof(p, inf.CL5)
    if bad:
        print("INVALID")
        for v in bad:
            print(f"  {v}")
        return NO
    arr = res.extract_arrangement(p)
    sys.stdout.write(res.write_arrangement(arr) or "# empty arrangement\n")
    return OK


def cmd_render(a) -> int:
    obj = _as_cirquent(_object(_read_input(a.input), a.kind))
    _out(render(obj, a.format))
    return OK


def cmd_convert(a) -> int:
    text = _read_input(a.input)
    if a.action == "sequent-to-cirquent":
        print(to_cirquent_text(sequent_to_cirquent(parse_sequent(text.strip(), reserved=True))))
        return OK
    try:
        p = sequents.read_sequent_proof(text)
    except ProofFormatError as e:
        print(f"INVALID: {e}")
        return NO
    _out(inf.write_proof(sequents.translate_sequent_proof(p)))
    return OK


def cmd_parse(a) -> int:
    obj = _object(_read_input(a.expr), a.kind)
    if isinstance(obj, Cirquent):
        print(to_cirquent_text(obj))
    else:
        print(to_text(obj))
    return OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kind", choices=("formula", "cirquent", "sequent"),
                        help="override input auto-detection")
    common.add_argument("--max-atoms", type=int, default=semantics.DEFAULT_MAX_ATOMS)
    common.add_argument("--max-oliterals", type=int, default=decide.DEFAULT_MAX_OLITERALS)
    common.add_argument("--max-ports", type=int, default=res.DEFAULT_MAX_PORTS)

    ap = argparse.ArgumentParser(prog="cirquents", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("prove", parents=[common], help="search for a proof")
    p.add_argument("--system", required=True, choices=("ccc", "cl5", "cl6-check", "affine", "cl2"))
    p.add_argument("input")
    p.set_defaults(fn=cmd_prove)

    p = sub.add_parser("check", parents=[common], help="check a proof file")
    p.add_argument("--system", required=True,
                   help="ccc, cl5, cl6, a letter set like '(AME|&)', affine, classical or cl2")
    p.add_argument("--primitive", action="store_true", help="require primitive cirquents")
    p.add_argument("proof")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("decide", parents=[common], help="decision procedures")
    p.add_argument("--question", required=True, choices=("tautology", "binary-instance", "trivial"))
    p.add_argument("input")
    p.set_defaults(fn=cmd_decide)

    p = sub.add_parser("resource", parents=[common], help="resource semantics")
    p.add_argument("action", choices=("table", "represent", "trivial"))
    p.add_argument("input")
    p.set_defaults(fn=cmd_resource)

    p = sub.add_parser("extract-arrangement", parents=[common],
                       help="arrangement from a CL5 proof file")
    p.add_argument("proof")
    p.set_defaults(fn=cmd_extract)

    p = sub.add_parser("render", parents=[common], help="draw a cirquent")
    p.add_argument("--format", choices=("ascii", "dot"), default="ascii")
    p.add_argument("input")
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("convert", parents=[common], help="sequent conversions")
    p.add_argument("action", choices=("sequent-to-cirquent", "translate-proof"))
    p.add_argument("input")
    p.set_defaults(fn=cmd_convert)

    p = sub.add_parser("parse", parents=[common], help="print the canonical form")
    p.add_argument("expr")
    p.set_defaults(fn=cmd_parse)
    return ap


def run(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return a.fn(a)
    except CapExceeded as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return CAP
    except (ParseError, UnsupportedError, _Usage) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except CirquentsError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
