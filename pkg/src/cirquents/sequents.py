"""Positional sequent calculus: the six classical rules, checking, file IO,
and translation of sequent proofs into primitive cirquent proofs.

Rules (conclusion from premises)::

    AX F        !F, F
    EXCH i      G, F swapped back: premise has F at i and G at i+1
    WEAK i F    F inserted at position i
    CONTR i     F, F at i, i+1 merged
    OR i        F, G at i, i+1 merged into F | G
    AND         (Gamma, F) and (G, Delta) give Gamma, F & G, Delta
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .cirquent import Sequent, parse_sequent, sequent_to_cirquent
from .errors import ParseError, ProofFormatError, RuleError
from .formula import Conj, Disj, Formula, negate, parse as parse_formula, to_text
from . import inference as inf

SEQUENT_TAGS = ("AX", "EXCH", "WEAK", "CONTR", "OR", "AND")
AFFINE_RULES = frozenset(SEQUENT_TAGS) - {"CONTR"}
CLASSICAL_RULES = frozenset(SEQUENT_TAGS)


@dataclass(frozen=True)
class SeqRule:
    tag: str
    i: Optional[int] = None
    formula: Optional[Formula] = None

    def __str__(self):
        if self.tag == "AX":
            return f"AX {to_text(self.formula)}"
        if self.tag == "WEAK":
            return f"WEAK {self.i} {to_text(self.formula)}"
        if self.tag == "AND":
            return "AND"
        return f"{self.tag} {self.i}"


@dataclass(frozen=True)
class SequentProof:
    conclusion: Sequent
    rule: SeqRule
    premises: Tuple["SequentProof", ...] = ()


def apply_sequent(r: SeqRule, premises: Sequence[Sequent]) -> Sequent:
    t = r.tag
    want = {"AX": 0, "AND": 2}.get(t, 1)
    if len(premises) != want:
        raise RuleError(f"{t} takes {want} premise(s), got {len(premises)}")
    if t == "AX":
        return Sequent((negate(r.formula), r.formula))
    if t == "AND":
        a, b = premises
        f, g = a.formulas[-1], b.formulas[0]
        return Sequent(a.formulas[:-1] + (Conj(f, g),) + b.formulas[1:])
    (s,) = premises
    fs = s.formulas
    n = len(fs)
    if t == "WEAK":
        if r.i is None or not 1 <= r.i <= n + 1:
            raise RuleError(f"WEAK position {r.i} outside 1..{n + 1}")
        return Sequent(fs[:r.i - 1] + (r.formula,) + fs[r.i - 1:])
    if r.i is None or not 1 <= r.i < n:
        raise RuleError(f"{t} index {r.i} outside 1..{n - 1}")
    i = r.i
    if t == "EXCH":
        return Sequent(fs[:i - 1] + (fs[i], fs[i - 1]) + fs[i + 1:])
    if t == "CONTR":
        if fs[i - 1] != fs[i]:
            raise RuleError(f"formulas {i} and {i + 1} differ")
        return Sequent(fs[:i] + fs[i + 1:])
    if t == "OR":
        return Sequent(fs[:i - 1] + (Disj(fs[i - 1], fs[i]),) + fs[i + 1:])
    raise RuleError(f"unknown sequent rule {t}")


def seq_node(r: SeqRule, *premises: SequentProof) -> SequentProof:
    return SequentProof(apply_sequent(r, [p.conclusion for p in premises]), r, tuple(premises))


def _nodes(p: SequentProof):
    stack = [((), p)]
    while stack:
        path, q = stack.pop()
        yield path, q
        for k in range(len(q.premises) - 1, -1, -1):
            stack.append((path + (k,), q.premises[k]))


def _postorder(p: SequentProof) -> List[SequentProof]:
    out, stack = [], [(p, False)]
    while stack:
        q, done = stack.pop()
        if done:
            out.append(q)
            continue
        stack.append((q, True))
        for k in range(len(q.premises) - 1, -1, -1):
            stack.append((q.premises[k], False))
    return out


def check_sequent_proof(p: SequentProof, rules=CLASSICAL_RULES) -> List[inf.Violation]:
    out = []
    for path, q in _nodes(p):
        if q.rule.tag not in rules:
            out.append(inf.Violation(path, f"rule {q.rule.tag} not allowed"))
        try:
            got = apply_sequent(q.rule, [x.conclusion for x in q.premises])
        except (RuleError, ValueError) as e:
            out.append(inf.Violation(path, str(e)))
            continue
        if got != q.conclusion:
            out.append(inf.Violation(path, f"{q.rule} yields {got}, not {q.conclusion}"))
    return out


def uses_contraction(p: SequentProof) -> bool:
    return any(q.rule.tag == "CONTR" for _, q in _nodes(p))


def translate_sequent_proof(p: SequentProof) -> inf.Proof:
    """Primitive cirquent proof of the one-group cirquent of ``p``'s conclusion."""
    bad = check_sequent_proof(p)
    if bad:
        raise RuleError(f"invalid sequent proof: {bad[0]}")
    memo = {}
    for q in _postorder(p):
        r = q.rule
        prem = [memo[id(x)] for x in q.premises]
        if r.tag == "AX":
            out = inf.node(inf.ID(r.formula))
        elif r.tag == "EXCH":
            out = inf.node(inf.EXCH_F(r.i), *prem)
        elif r.tag == "WEAK":
            out = inf.node(inf.WEAK_G(1, r.i), inf.node(inf.WEAK_P(r.i, r.formula), *prem))
        elif r.tag == "CONTR":
            out = inf.node(inf.CONTR(r.i), *prem)
        elif r.tag == "OR":
            out = inf.node(inf.DISJ(r.i), *prem)
        else:
            k = len(q.premises[0].conclusion)
            out = inf.node(inf.CONJ(k), inf.node(inf.MIX(), *prem))
        memo[id(q)] = out
    root = memo[id(p)]
    assert root.conclusion == sequent_to_cirquent(p.conclusion)
    return root


# ---------------------------------------------------------------------------
# file format: "<id>: RULE params [from ids] expect <sequent>"

_LINE_RE = re.compile(r"^(\d+):\s*(\w+)(.*?)(?:\s+from\s+(\d+(?:\s+\d+)?))?(?:\s+expect\s+(.*))?$")


def write_sequent_proof(p: SequentProof) -> str:
    ids, lines = {}, []
    for q in _postorder(p):
        n = len(ids) + 1
        ids[id(q)] = n
        line = f"{n}: {q.rule}"
        if q.premises:
            line += " from " + " ".join(str(ids[id(x)]) for x in q.premises)
        lines.append(line + f" expect {q.conclusion}")
    return "\n".join(lines) + "\n"


def read_sequent_proof(text: str) -> SequentProof:
    nodes, last = {}, None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise ProofFormatError(f"line {lineno}: cannot parse {line!r}")
        nid, tag, params, refs, expect = m.groups()
        params = params.strip()
        try:
            if tag == "AX":
                r = SeqRule("AX", formula=parse_formula(params, reserved=True))
            elif tag == "WEAK":
                i, f = params.split(None, 1)
                r = SeqRule("WEAK", int(i), parse_formula(f, reserved=True))
            elif tag == "AND":
                if params:
                    raise ValueError("AND takes no parameters")
                r = SeqRule("AND")
            elif tag in SEQUENT_TAGS:
                r = SeqRule(tag, int(params))
            else:
                raise ValueError(f"unknown rule {tag!r}")
            prem = [nodes[int(x)] for x in refs.split()] if refs else []
            concl = apply_sequent(r, [x.conclusion for x in prem])
        except KeyError as e:
            raise ProofFormatError(f"line {lineno}: reference to undefined id {e}") from None
        except ValueError as e:
            raise ProofFormatError(f"line {lineno}: {e}") from None
        if expect is not None:
            try:
                want = parse_sequent(expect, reserved=True)
            except ParseError as e:
                raise ProofFormatError(f"line {lineno}: {e}") from None
            if want != concl:
                raise ProofFormatError(f"line {lineno}: expected {want}, computed {concl}")
        nodes[int(nid)] = SequentProof(concl, r, tuple(prem))
        last = int(nid)
    if last is None:
        raise ProofFormatError("empty proof file")
    return nodes[last]
