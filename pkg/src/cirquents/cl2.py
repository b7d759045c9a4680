"""The CL2 system: elementarization, stability, Rules (a), (b), (c), and a
terminating backward prover.

Elementarization replaces each surface general atom by a constant: ``P``
becomes ``$F`` and ``!P`` becomes ``!$T``, written canonically as ``$F``.
Surface ``+`` subformulas become ``$F`` and surface ``*`` subformulas ``$T``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Tuple

from .errors import CapExceeded, ParseError, ProofFormatError
from .formula import (FALSE, TRUE, Atom, ChConj, ChDisj, Conj, Disj, Formula, FreshAtoms, Lit,
                      OccRef, Sort, atoms, is_elementary, literals, parse as parse_formula,
                      replace_at, subformula_at, to_text)
from .inference import Violation
from .semantics import DEFAULT_MAX_ATOMS, is_tautology

__all__ = ["elementarize", "is_stable", "surface_occurrences", "backward_cl2", "Candidate",
           "Derivation", "prove_cl2", "check_derivation", "write_derivation", "read_derivation",
           "measure", "is_elementary"]


def elementarize(f: Formula) -> Formula:
    if isinstance(f, Lit):
        # P -> $F and !P -> !$T, which is stored canonically as $F
        return Lit(True, FALSE) if f.atom.is_general else f
    if isinstance(f, ChDisj):
        return Lit(True, FALSE)
    if isinstance(f, ChConj):
        return Lit(True, TRUE)
    return type(f)(elementarize(f.left), elementarize(f.right))


def is_stable(f: Formula, max_atoms: int = DEFAULT_MAX_ATOMS) -> bool:
    return is_tautology(elementarize(f), max_atoms)


def surface_occurrences(f: Formula) -> List[Tuple[OccRef, Formula]]:
    """(path, subformula) for every occurrence not under a choice connective,
    in left-to-right pre-order."""
    out = []

    def go(g, path):
        out.append((path, g))
        if isinstance(g, (Conj, Disj)):
            go(g.left, path + (0,))
            go(g.right, path + (1,))

    go(f, ())
    return out


def measure(f: Formula) -> int:
    """Choice connectives plus general-atom occurrences; drops along every rule."""
    def go(g):
        if isinstance(g, Lit):
            return 1 if g.atom.is_general else 0
        return (1 if isinstance(g, (ChConj, ChDisj)) else 0) + go(g.left) + go(g.right)
    return go(f)


class Candidate(NamedTuple):
    tag: str                      # "A", "B" or "C"
    premises: Tuple[Formula, ...]
    params: tuple                 # (), (path, k) or (pos_path, neg_path, atom)


def _fresh_elementary(f: Formula) -> Atom:
    return FreshAtoms(atoms(f), elementary=True)()


def backward_cl2(f: Formula, max_atoms: int = DEFAULT_MAX_ATOMS) -> List[Candidate]:
    """All inferences with conclusion ``f``: (a) if stable, then (b), then (c)."""
    out: List[Candidate] = []
    surf = surface_occurrences(f)
    if is_stable(f, max_atoms):
        prem = []
        for path, g in surf:
            if isinstance(g, ChConj):
                prem.append(replace_at(f, path, g.left))
                prem.append(replace_at(f, path, g.right))
        out.append(Candidate("A", tuple(prem), ()))
    for path, g in surf:
        if isinstance(g, ChDisj):
            out.append(Candidate("B", (replace_at(f, path, g.left),), (path, 1)))
            out.append(Candidate("B", (replace_at(f, path, g.right),), (path, 2)))
    lits = [(path, g) for path, g in surf if isinstance(g, Lit) and g.atom.is_general]
    if lits:
        p = _fresh_elementary(f)
        for ppath, pl in lits:
            if not pl.positive:
                continue
            for npath, nl in lits:
                if nl.positive or nl.atom != pl.atom:
                    continue
                h = replace_at(replace_at(f, ppath, Lit(True, p)), npath, Lit(False, p))
                out.append(Candidate("C", (h,), (ppath, npath, p)))
    return out


# ---------------------------------------------------------------------------
# derivations


@dataclass(frozen=True)
class Derivation:
    conclusion: Formula
    tag: str
    params: tuple
    premises: Tuple["Derivation", ...] = ()

    def tags(self) -> List[str]:
        out, stack = [], [self]
        while stack:
            d = stack.pop()
            out.append(d.tag)
            stack.extend(reversed(d.premises))
        return out


def _canonical(f: Formula) -> str:
    """Text with the reserved elementary atoms renamed by first occurrence."""
    ren: Dict[str, str] = {}
    for leaf in literals(f):
        n = leaf.atom.name
        if n.startswith("_e") and n not in ren:
            ren[n] = f"_e{len(ren) + 1}"
    text = to_text(f)
    if not ren:
        return text
    return re.sub(r"_e\d+", lambda m: ren[m.group()], text)


class _Prover:
    def __init__(self, max_atoms: int):
        self.max_atoms = max_atoms
        self.memo: Dict[str, bool] = {}

    def provable(self, f: Formula) -> bool:
        k = _canonical(f)
        hit = self.memo.get(k)
        if hit is not None:
            return hit
        ok = any(all(self.provable(h) for h in cand.premises)
                 for cand in backward_cl2(f, self.max_atoms))
        self.memo[k] = ok
        return ok

    def derive(self, f: Formula) -> Derivation:
        for cand in backward_cl2(f, self.max_atoms):
            if all(self.provable(h) for h in cand.premises):
                return Derivation(f, cand.tag, cand.params,
                                  tuple(self.derive(h) for h in cand.premises))
        raise AssertionError("derive called on an unprovable formula")


def prove_cl2(f: Formula, max_atoms: int = DEFAULT_MAX_ATOMS,
              max_size: int = 40) -> Optional[Derivation]:
    """Complete backward search; None means CL2 does not prove ``f``."""
    m = measure(f)
    if m > max_size:
        raise CapExceeded(f"search measure {m} exceeds the cap of {max_size}")
    pr = _Prover(max_atoms)
    if not pr.provable(f):
        return None
    return pr.derive(f)


def check_derivation(d: Derivation, max_atoms: int = DEFAULT_MAX_ATOMS) -> List[Violation]:
    out: List[Violation] = []
    stack = [((), d)]
    while stack:
        path, q = stack.pop()
        for k in range(len(q.premises) - 1, -1, -1):
            stack.append((path + (k,), q.premises[k]))
        prem = tuple(x.conclusion for x in q.premises)
        reason = _check_step(q.conclusion, q.tag, q.params, prem, max_atoms)
        if reason:
            out.append(Violation(path, reason))
    return out


def _check_step(f, tag, params, prem, max_atoms) -> Optional[str]:
    surf = dict(surface_occurrences(f))
    if tag == "A":
        if not is_stable(f, max_atoms):
            return "rule (a) applied to an instable formula"
        want = next(c.premises for c in backward_cl2(f, max_atoms) if c.tag == "A")
        if set(prem) != set(want) or len(prem) != len(want):
            return "rule (a) premises are not the required set"
        return None
    if tag == "B":
        path, k = params
        g = surf.get(path)
        if not isinstance(g, ChDisj) or k not in (1, 2):
            return "rule (b) path is not a surface choice disjunction"
        if prem != (replace_at(f, path, g.left if k == 1 else g.right),):
            return "rule (b) premise does not match"
        return None
    if tag == "C":
        ppath, npath, p = params
        a, b = surf.get(ppath), surf.get(npath)
        if not (isinstance(a, Lit) and isinstance(b, Lit) and a.atom == b.atom
                and a.atom.is_general and a.positive and not b.positive):
            return "rule (c) paths are not a positive and a negative surface occurrence of one general atom"
        if p.sort is not Sort.ELEMENTARY or p in atoms(f):
            return "rule (c) atom is not a fresh non-logical elementary atom"
        h = replace_at(replace_at(f, ppath, Lit(True, p)), npath, Lit(False, p))
        if prem != (h,):
            return "rule (c) premise does not match"
        return None
    return f"unknown rule {tag!r}"


# ---------------------------------------------------------------------------
# derivation files


def path_text(path: OccRef) -> str:
    return "".join("R" if s else "L" for s in path) or "."


def parse_path(text: str) -> OccRef:
    if text == ".":
        return ()
    if not re.fullmatch(r"[LR]+", text):
        raise ParseError(f"bad occurrence path {text!r}")
    return tuple(1 if ch == "R" else 0 for ch in text)


def write_derivation(d: Derivation) -> str:
    ids: Dict[int, int] = {}
    lines = []
    order, stack = [], [(d, False)]
    while stack:
        q, done = stack.pop()
        if done:
            order.append(q)
            continue
        stack.append((q, True))
        stack.extend((x, False) for x in reversed(q.premises))
    for q in order:
        n = len(lines) + 1
        ids[id(q)] = n
        if q.tag == "A":
            head = "RULE_A"
        elif q.tag == "B":
            head = f"RULE_B {path_text(q.params[0])} {q.params[1]}"
        else:
            head = f"RULE_C {path_text(q.params[0])} {path_text(q.params[1])} {q.params[2].name}"
        if q.premises:
            head += " from " + " ".join(str(ids[id(x)]) for x in q.premises)
        lines.append(f"{n}: {head} expect {to_text(q.conclusion)}")
    return "\n".join(lines) + "\n"


_DLINE = re.compile(r"^(\d+):\s*RULE_([ABC])((?:\s+[^\s]+)*?)(?:\s+from\s+(\d+(?:\s+\d+)*))?\s+expect\s+(.+)$")


def read_derivation(text: str, max_atoms: int = DEFAULT_MAX_ATOMS) -> Derivation:
    nodes: Dict[int, Derivation] = {}
    last = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _DLINE.match(line)
        if not m:
            raise ProofFormatError(f"line {lineno}: cannot parse {line!r}")
        nid, tag, params, refs, expect = m.groups()
        ps = params.split()
        try:
            f = parse_formula(expect, reserved=True)
            if tag == "A":
                if ps:
                    raise ParseError("RULE_A takes no parameters")
                par: tuple = ()
            elif tag == "B":
                par = (parse_path(ps[0]), int(ps[1]))
            else:
                from .formula import atom as make_atom
                par = (parse_path(ps[0]), parse_path(ps[1]), make_atom(ps[2]))
            prem = tuple(nodes[int(x)] for x in refs.split()) if refs else ()
        except KeyError as e:
            raise ProofFormatError(f"line {lineno}: reference to undefined id {e}") from None
        except (ValueError, IndexError) as e:
            raise ProofFormatError(f"line {lineno}: {e}") from None
        reason = _check_step(f, tag, par, tuple(x.conclusion for x in prem), max_atoms)
        if reason:
            raise ProofFormatError(f"line {lineno}: {reason}")
        nodes[int(nid)] = Derivation(f, tag, par, prem)
        last = int(nid)
    if last is None:
        raise ProofFormatError("empty derivation file")
    return nodes[last]
