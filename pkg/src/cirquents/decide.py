"""Provers and decision procedures.

* :func:`decide_binary_instance` searches literal couplings for a normal
  binary tautology of which the input is an instance.
* :func:`prove_ccc` and :func:`prove_cl5` follow the constructive
  completeness arguments: conservative introductions, weakenings, then
  contraction (CCC) or ogroup exchange plus duplication (CL5), closed by
  identity axioms, mix and exchanges.
* :func:`prove_affine` is a terminating backward search for affine sequent
  proofs over multisets.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from . import inference as inf
from . import kernels
from .cirquent import (EMPTY, Cirquent, Sequent, embed_formula, homeless,
                       sequent_to_cirquent)
from .errors import CapExceeded, UnsupportedError
from .formula import (Conj, Disj, Formula, FreshAtoms, Lit, Substitution, has_choice,
                      literals, negate, to_text)
from .semantics import (DEFAULT_MAX_ATOMS, is_tautology, object_atoms, object_oliterals,
                        rename_oliterals)
from .sequents import SeqRule, SequentProof, seq_node

Coupling = Tuple[Tuple[int, int], ...]
DEFAULT_MAX_OLITERALS = 24
DEFAULT_MAX_OCCURRENCES = 8


def as_cirquent(obj) -> Cirquent:
    return obj if isinstance(obj, Cirquent) else embed_formula(obj)


def _require_general(c: Cirquent, what: str):
    for f in c.pool:
        if has_choice(f):
            raise UnsupportedError(f"{what} is defined for choice-free inputs only")
        for leaf in literals(f):
            if not leaf.atom.is_general:
                raise UnsupportedError(f"{what} is defined for general atoms only; found {leaf.atom}")


# ---------------------------------------------------------------------------
# couplings


class BinaryInstance(NamedTuple):
    tautology: Cirquent          # normal binary tautology D
    coupling: Coupling           # 1-based (negative, positive) oliteral positions
    substitution: Substitution   # atomic-level, sigma(D) == input


def maximal_matchings(neg: Sequence[int], pos: Sequence[int]) -> List[Tuple[Tuple[int, int], ...]]:
    """Matchings of size min(|neg|, |pos|), sorted lexicographically."""
    if len(neg) <= len(pos):
        out = [tuple(zip(neg, perm)) for perm in itertools.permutations(pos, len(neg))]
    else:
        out = [tuple(sorted(zip(perm, pos))) for perm in itertools.permutations(neg, len(pos))]
    out.sort()
    return out


def _atom_positions(c: Cirquent):
    occ = object_oliterals(c)
    per: Dict = {}
    for k, (s, a) in enumerate(occ, 1):
        per.setdefault(a, ([], []))[1 if s else 0].append(k)
    return occ, per


def couplings(c: Cirquent, max_oliterals: int = DEFAULT_MAX_OLITERALS,
              max_occurrences: int = DEFAULT_MAX_OCCURRENCES) -> Iterator[Coupling]:
    """Candidate couplings: per atom (first-occurrence order) a maximal matching.

    A tautology stays a tautology when one more complementary pair is
    identified (the result is an instance), so maximal matchings suffice.
    """
    occ, per = _atom_positions(c)
    if len(occ) > max_oliterals:
        raise CapExceeded(f"{len(occ)} oliterals exceed the cap of {max_oliterals}")
    for a, (ng, ps) in per.items():
        if len(ng) + len(ps) > max_occurrences:
            raise CapExceeded(f"atom {a} occurs {len(ng) + len(ps)} times; cap is {max_occurrences}")
    choices = [maximal_matchings(ng, ps) for ng, ps in per.values()]
    for combo in itertools.product(*choices):
        yield tuple(pair for m in combo for pair in m)


def coupling_is_tautological(prog, nvars, coupling: Coupling) -> bool:
    pairs = []
    for x, y in coupling:
        pairs.append((x - 1, y - 1))
        pairs.append((y - 1, x - 1))
    return kernels.all_true(prog, nvars, pairs)


def instance_of_coupling(c: Cirquent, coupling: Coupling) -> Tuple[Cirquent, Substitution]:
    """Rename coupled oliterals to shared fresh atoms, the rest to distinct ones."""
    fresh = FreshAtoms(object_atoms(c))
    mate = {}
    for x, y in coupling:
        mate[x] = y
        mate[y] = x
    name_of: Dict[int, object] = {}
    sigma = {}

    def rename(k, lit):
        pos = k + 1
        if pos not in name_of:
            q = fresh()
            name_of[pos] = q
            if pos in mate:
                name_of[mate[pos]] = q
            sigma[q] = Lit(True, lit.atom)
        return Lit(lit.positive, name_of[pos])

    d = rename_oliterals(c, rename)
    return d, Substitution(sigma)


def decide_binary_instance(obj, max_oliterals: int = DEFAULT_MAX_OLITERALS,
                           max_occurrences: int = DEFAULT_MAX_OCCURRENCES) -> Optional[BinaryInstance]:
    c = as_cirquent(obj)
    _require_general(c, "binary-instance decision")
    prog, n = kernels.compile_situation(c)
    for cp in couplings(c, max_oliterals, max_occurrences):
        if coupling_is_tautological(prog, n, cp):
            d, sigma = instance_of_coupling(c, cp)
            return BinaryInstance(d, cp, sigma)
    return None


# ---------------------------------------------------------------------------
# shared proof-building pieces


class _Chain:
    """Backward steps recorded from the conclusion upward."""

    def __init__(self, c: Cirquent):
        self.current = c
        self.steps: List[Tuple[inf.RuleApp, Cirquent]] = []   # (rule, its conclusion)

    def up(self, rule: inf.RuleApp, premise: Cirquent):
        self.steps.append((rule, self.current))
        self.current = premise

    def build(self, top: inf.Proof, system: inf.System) -> inf.Proof:
        p = top
        for rule, concl in reversed(self.steps):
            p = inf.node(rule, p, system=system)
            assert p.conclusion == concl, (rule, p.conclusion, concl)
        return p


def _introductions(ch: _Chain):
    """Conservative introductions on the leftmost non-homeless compound oformula."""
    while True:
        c = ch.current
        lonely = set(homeless(c))
        target = next((i for i, f in enumerate(c.pool, 1)
                       if not isinstance(f, Lit) and i not in lonely), None)
        if target is None:
            return
        f = c.pool[target - 1]
        if isinstance(f, Disj):
            ch.up(inf.DISJ(target), inf.conservative_disj_premise(c, target))
        elif isinstance(f, Conj):
            ch.up(inf.CONJ(target), inf.conservative_conj_premise(c, target))
        else:
            raise UnsupportedError("choice connectives are not handled by this prover")


def _least_pair(c: Cirquent, g: Sequence[int]) -> Tuple[int, int]:
    for a, b in itertools.combinations(g, 2):
        fa, fb = c.pool[a - 1], c.pool[b - 1]
        if fa == negate(fb):
            return a, b
    raise AssertionError("group without complementary pair in a tautology")


def _weakenings(ch: _Chain):
    """Keep one complementary pair per group; drop other arcs, then homeless oformulas."""
    c = ch.current
    keep = [_least_pair(c, g) for g in c.structure]
    for gi, g in enumerate(c.structure, 1):
        for j in g:
            if j not in keep[gi - 1]:
                cur = ch.current
                s = cur.structure
                prem = Cirquent(cur.pool, s[:gi - 1] + (tuple(x for x in s[gi - 1] if x != j),) + s[gi:])
                ch.up(inf.WEAK_G(gi, j), prem)
    for i in reversed(homeless(ch.current)):
        cur = ch.current
        prem = Cirquent(cur.pool[:i - 1] + cur.pool[i:],
                        tuple(tuple(x - 1 if x > i else x for x in g) for g in cur.structure))
        ch.up(inf.WEAK_P(i, cur.pool[i - 1]), prem)


def _split_by_contraction(ch: _Chain):
    """Give every group its own copy of each shared oformula (copies in group order)."""
    for i in range(len(ch.current.pool), 0, -1):
        holders = sum(1 for g in ch.current.structure if i in g)
        for p in range(i, i + holders - 1):
            cur = ch.current
            first = next(k for k, g in enumerate(cur.structure) if p in g)
            pool = cur.pool[:p] + (cur.pool[p - 1],) + cur.pool[p:]
            s = []
            for k, g in enumerate(cur.structure):
                ng = [x + 1 if x > p else x for x in g]
                if p in g and k != first:
                    ng = [p + 1 if x == p else x for x in ng]
                s.append(tuple(sorted(ng)))
            ch.up(inf.CONTR(p), Cirquent(pool, tuple(s)))


def _split_by_duplication(ch: _Chain):
    """Collapse identical-content ogroups with EXCH_G and backward DUP_DOWN."""
    while True:
        s = ch.current.structure
        found = None
        for g in range(len(s)):
            for h in range(g + 1, len(s)):
                if s[g] == s[h]:
                    found = (g + 1, h + 1)
                    break
            if found:
                break
        if not found:
            return
        g, h = found
        # move ogroup h down to g+1 (EXCH_G is its own inverse)
        while h > g + 1:
            ch.up(inf.EXCH_G(h - 1), inf.apply(inf.EXCH_G(h - 1), [ch.current]))
            h -= 1
        cur = ch.current
        ch.up(inf.DUP_DOWN(g), Cirquent(cur.pool, cur.structure[:g] + cur.structure[g + 1:]))


def _close(d: Cirquent, system: inf.System) -> inf.Proof:
    """Prove a primitive cirquent whose groups are complementary pairs covering the pool."""
    if not d.structure:
        assert not d.pool
        return inf.node(inf.EMPTY_AX())
    proof = None
    order: List[int] = []
    for g in d.structure:
        a, b = g
        leaf = inf.node(inf.ID(d.pool[b - 1]))
        assert leaf.conclusion.pool == (d.pool[a - 1], d.pool[b - 1])
        proof = leaf if proof is None else inf.node(inf.MIX(), proof, leaf)
        order += [a, b]
    # bubble sort the mixed pool into d's order
    order = list(order)
    changed = True
    while changed:
        changed = False
        for k in range(len(order) - 1):
            if order[k] > order[k + 1]:
                order[k], order[k + 1] = order[k + 1], order[k]
                proof = inf.node(inf.EXCH_F(k + 1), proof, system=system)
                changed = True
    assert proof.conclusion == d, (proof.conclusion, d)
    return proof


# ---------------------------------------------------------------------------
# CCC


def prove_ccc(obj, max_atoms: int = DEFAULT_MAX_ATOMS) -> Optional[inf.Proof]:
    """A CCC proof of a tautological cirquent, or None if it is not a tautology."""
    c = as_cirquent(obj)
    for f in c.pool:
        if has_choice(f):
            raise UnsupportedError("prove_ccc handles choice-free cirquents only")
        if any(leaf.atom.is_logical for leaf in literals(f)):
            raise UnsupportedError("prove_ccc does not handle the logical atoms $T/$F")
    if not is_tautology(c, max_atoms):
        return None
    ch = _Chain(c)
    _introductions(ch)
    _weakenings(ch)
    _split_by_contraction(ch)
    top = _close(ch.current, inf.CCC)
    return ch.build(top, inf.CCC)


# ---------------------------------------------------------------------------
# CL5


def prove_normal_binary(d: Cirquent) -> inf.Proof:
    """CL5 proof (no contraction) of a normal binary tautology."""
    ch = _Chain(d)
    _introductions(ch)
    _weakenings(ch)
    _split_by_duplication(ch)
    top = _close(ch.current, inf.CL5)
    return ch.build(top, inf.CL5)


def prove_cl5(obj, max_oliterals: int = DEFAULT_MAX_OLITERALS,
              max_occurrences: int = DEFAULT_MAX_OCCURRENCES) -> Optional[inf.Proof]:
    c = as_cirquent(obj)
    found = decide_binary_instance(c, max_oliterals, max_occurrences)
    if found is None:
        return None
    p = inf.substitute_proof(prove_normal_binary(found.tautology), found.substitution)
    assert p.conclusion == c
    return p


# ---------------------------------------------------------------------------
# affine sequent search


def _key(fs) -> Tuple[str, ...]:
    return tuple(sorted(to_text(f) for f in fs))


class _Affine:
    """Multiset proof search; results are small proof sketches, not positional proofs.

    Sketches: ("AX", F) | ("OR", F|G, sub) | ("AND", F&G, left_rest, right_rest, sub1, sub2)
    """

    def __init__(self):
        self.memo: Dict[Tuple[str, ...], object] = {}

    def prove(self, fs: Tuple[Formula, ...]):
        k = _key(fs)
        if k in self.memo:
            return self.memo[k]
        self.memo[k] = None   # in-progress guard (sizes strictly shrink, so unused)
        res = self._prove(fs)
        self.memo[k] = res
        return res

    def _prove(self, fs):
        present = set(fs)
        # literal axioms first, then compound ones
        for want_lit in (True, False):
            for f in fs:
                if isinstance(f, Lit) is want_lit and negate(f) in present:
                    if f == negate(f):
                        continue
                    pos_side = f if not isinstance(f, Lit) or f.positive else negate(f)
                    return ("AX", pos_side)
        for idx, f in enumerate(fs):
            if isinstance(f, Disj):
                rest = fs[:idx] + fs[idx + 1:]
                sub = self.prove(rest + (f.left, f.right))
                return None if sub is None else ("OR", f, sub)
        for idx, f in enumerate(fs):
            if not isinstance(f, Conj):
                continue
            if any(isinstance(g, Conj) and to_text(g) == to_text(f) for g in fs[:idx]):
                continue
            rest = fs[:idx] + fs[idx + 1:]
            seen = set()
            for mask in range(1 << len(rest)):
                left = tuple(g for b, g in enumerate(rest) if mask >> b & 1)
                right = tuple(g for b, g in enumerate(rest) if not mask >> b & 1)
                sig = (_key(left), _key(right))
                if sig in seen:
                    continue
                seen.add(sig)
                s1 = self.prove(left + (f.left,))
                if s1 is None:
                    continue
                s2 = self.prove(right + (f.right,))
                if s2 is not None:
                    return ("AND", f, left, right, s1, s2)
        return None


def _permute(p: SequentProof, target: Tuple[Formula, ...]) -> SequentProof:
    """Append EXCH steps turning p's conclusion into ``target`` (same multiset)."""
    cur = list(p.conclusion.formulas)
    used = [False] * len(target)
    order = []
    for f in cur:
        for k, t in enumerate(target):
            if not used[k] and t == f:
                used[k] = True
                order.append(k)
                break
        else:
            raise AssertionError("multisets differ")
    changed = True
    while changed:
        changed = False
        for k in range(len(order) - 1):
            if order[k] > order[k + 1]:
                order[k], order[k + 1] = order[k + 1], order[k]
                p = seq_node(SeqRule("EXCH", k + 1), p)
                changed = True
    assert p.conclusion.formulas == tuple(target)
    return p


def _remove_one(seq: List[Formula], f: Formula) -> int:
    k = seq.index(f)
    del seq[k]
    return k


def _realize(target: Tuple[Formula, ...], sketch) -> SequentProof:
    tag = sketch[0]
    if tag == "AX":
        pos_side = sketch[1]
        p = seq_node(SeqRule("AX", formula=pos_side))
        rest = list(target)
        _remove_one(rest, negate(pos_side))
        _remove_one(rest, pos_side)
        for g in rest:
            p = seq_node(SeqRule("WEAK", len(p.conclusion) + 1, g), p)
        return _permute(p, target)
    if tag == "OR":
        f = sketch[1]
        i = target.index(f)
        prem = target[:i] + (f.left, f.right) + target[i + 1:]
        return seq_node(SeqRule("OR", i + 1), _realize(prem, sketch[2]))
    _, f, left, right, s1, s2 = sketch
    p1 = _realize(tuple(left) + (f.left,), s1)
    p2 = _realize((f.right,) + tuple(right), s2)
    p = seq_node(SeqRule("AND"), p1, p2)
    return _permute(p, target)


def prove_affine(s: Union[Sequent, Formula], max_oliterals: int = DEFAULT_MAX_OLITERALS
                 ) -> Optional[SequentProof]:
    """Affine sequent proof (AX, EXCH, WEAK, OR, AND) or None if none exists."""
    if not isinstance(s, Sequent):
        s = Sequent((s,))
    n = sum(1 for f in s.formulas for _ in literals(f))
    if n > max_oliterals:
        raise CapExceeded(f"{n} oliterals exceed the cap of {max_oliterals}")
    for f in s.formulas:
        if has_choice(f):
            raise UnsupportedError("choice connectives are not part of the sequent calculus")
    sketch = _Affine().prove(tuple(s.formulas))
    if sketch is None:
        return None
    return _realize(tuple(s.formulas), sketch)
