"""Shared generators and corpora for the test-suite."""

from __future__ import annotations

import functools
import itertools
import random
from typing import Dict, List, Optional, Sequence, Tuple

from cirquents import inference as inf
from cirquents.cirquent import Cirquent, _norm_group, embed_formula
from cirquents.formula import (Conj, Disj, Formula, Lit, atom, lit, negate, parse, to_text)

BLASS = "((!P|!Q)&(!R|!S))|((P|R)&(Q|S))"
ALL_P_BLASS = "((!P|!P)&(!P|!P))|((P|P)&(P|P))"
FUEL = "Fuel & (Power -> Light) -> ((Fuel -> Power) -> Light)"
CONTRACTION = "P & P -> P"
DUPLICATION = "P -> P & P"
GENERATOR = "!Fuel | Power"
LAMP = "!Power | Light"
WORKED_CIRQUENT = "[ Q ; P ; !P ; P ; Q ; !P ; !Q ; P ; S & P ] {1 2 3} {3 4} {4 5 6} {5 7} {5 6 7 8}"


# ---------------------------------------------------------------------------
# random objects


def rand_formula(rng: random.Random, leaves: int, names: Sequence[str] = "PQ",
                 choice: bool = False) -> Formula:
    if leaves == 1:
        return lit(atom(rng.choice(names)), rng.random() < 0.5)
    k = rng.randint(1, leaves - 1)
    kinds = [Conj, Disj]
    if choice:
        from cirquents.formula import ChConj, ChDisj
        kinds += [ChConj, ChDisj]
    return rng.choice(kinds)(rand_formula(rng, k, names, choice),
                             rand_formula(rng, leaves - k, names, choice))


def rand_cirquent(rng: random.Random, pool_size: Optional[int] = None, groups: Optional[int] = None,
                  names: Sequence[str] = "PQR", max_leaves: int = 3) -> Cirquent:
    n = rng.randint(0, 4) if pool_size is None else pool_size
    m = rng.randint(0, 3) if groups is None else groups
    pool = tuple(rand_formula(rng, rng.randint(1, max_leaves), names) for _ in range(n))
    structure = tuple(_norm_group(j for j in range(1, n + 1) if rng.random() < 0.5)
                      for _ in range(m))
    return Cirquent(pool, structure)


def rand_model(rng: random.Random, names: Sequence[str] = "PQR") -> Dict:
    return {atom(x): rng.randint(0, 1) for x in names}


def rand_application(rng: random.Random, names: Sequence[str] = "PQR"
                     ) -> Tuple[inf.RuleApp, Tuple[Cirquent, ...], Cirquent]:
    """A random valid rule application (rule, premises, conclusion)."""
    while True:
        fam = rng.choice(inf.FAMILIES)
        got = _try_family(rng, fam, names)
        if got is not None:
            r, prem = got
            return r, prem, inf.apply(r, prem)


def _try_family(rng, fam, names):
    c = rand_cirquent(rng, names=names)
    n, m = len(c.pool), len(c.structure)
    if fam == "A":
        if rng.random() < 0.2:
            return inf.EMPTY_AX(), ()
        return inf.ID(rand_formula(rng, rng.randint(1, 3), names)), ()
    if fam == "M":
        return inf.MIX(), (c, rand_cirquent(rng, names=names))
    if fam == "E":
        if rng.random() < 0.5 and n >= 2:
            return inf.EXCH_F(rng.randint(1, n - 1)), (c,)
        if m >= 2:
            return inf.EXCH_G(rng.randint(1, m - 1)), (c,)
        return None
    if fam == "W":
        if rng.random() < 0.5 or m == 0:
            return inf.WEAK_P(rng.randint(1, n + 1), rand_formula(rng, 2, names)), (c,)
        g = rng.randint(1, m)
        free = [i for i in range(1, n + 1) if i not in c.structure[g - 1]]
        return (inf.WEAK_G(g, rng.choice(free)), (c,)) if free else None
    if fam == "D":
        if m == 0:
            return None
        g = rng.randint(1, m)
        if rng.random() < 0.5:
            return inf.DUP_DOWN(g), (c,)
        s = c.structure
        return inf.DUP_UP(g), (Cirquent(c.pool, s[:g] + (s[g - 1],) + s[g:]),)
    if fam == "C":
        if n == 0:
            return None
        i = rng.randint(1, n)
        pool = c.pool[:i] + (c.pool[i - 1],) + c.pool[i:]
        s = tuple(_norm_group([j + 1 if j > i else j for j in g]
                              + ([i + 1] if i in g and rng.random() < 0.5 else [])) for g in c.structure)
        return inf.CONTR(i), (Cirquent(pool, s),)
    if fam == "OR":
        return (inf.DISJ(rng.randint(1, n - 1)), (c,)) if n >= 2 else None
    if fam == "AND":
        # pick a conclusion with a conjunction and sample one backward premise
        f = Conj(rand_formula(rng, rng.randint(1, 2), names), rand_formula(rng, rng.randint(1, 2), names))
        i = rng.randint(1, n + 1)
        pool = c.pool[:i - 1] + (f,) + c.pool[i - 1:]
        s = tuple(_norm_group([j + 1 if j >= i else j for j in g]
                              + ([i] if rng.random() < 0.5 else [])) for g in c.structure)
        concl = Cirquent(pool, s)
        cands = list(itertools.islice(inf.backward_premises(concl, "AND"), 64))
        app, prem = rng.choice(cands)
        return app, prem
    raise AssertionError(fam)


# ---------------------------------------------------------------------------
# the exhaustive sweep corpus


# the eight symmetries: optional P/Q exchange, then optional sign flips
_SYMS = [(swap, fp, fq) for swap in (False, True) for fp in (False, True) for fq in (False, True)]


def _leaf_key(f: Lit, sym) -> str:
    swap, fp, fq = sym
    name = f.atom.name
    flip = fp if name == "P" else fq
    if swap:
        name = "Q" if name == "P" else "P"
    return ("" if f.positive != flip else "!") + name


def _node_keys(op, ka, kb) -> Tuple[str, ...]:
    """Per-symmetry keys, invariant under commuting children."""
    tag = "&" if op is Conj else "|"
    return tuple(tag + "(" + (x + "," + y if x <= y else y + "," + x) + ")" for x, y in zip(ka, kb))


@functools.lru_cache(maxsize=None)
def small_corpus(max_leaves: int = 6) -> Tuple[Formula, ...]:
    """All formulas over P, Q with at most ``max_leaves`` oliterals, one
    representative per orbit of child commutation, P/Q exchange and
    per-atom polarity flips."""
    leaves = [Lit(s, atom(x)) for x in "PQ" for s in (True, False)]
    by_size = {1: [(f, tuple(_leaf_key(f, t) for t in _SYMS)) for f in leaves]}
    for n in range(2, max_leaves + 1):
        seen, out = set(), []
        for k in range(1, n // 2 + 1):
            for a, ka in by_size[k]:
                for b, kb in by_size[n - k]:
                    for op in (Conj, Disj):
                        keys = _node_keys(op, ka, kb)
                        if keys[0] not in seen:
                            seen.add(keys[0])
                            out.append((op(a, b), keys))
        by_size[n] = out
    return tuple(f for n in range(1, max_leaves + 1) for f, keys in by_size[n]
                 if keys[0] == min(keys))


@functools.lru_cache(maxsize=None)
def random_corpus(count: int = 1000, seed: int = 20240601) -> Tuple[Formula, ...]:
    rng = random.Random(seed)
    return tuple(rand_formula(rng, rng.randint(1, 8), "PQR") for _ in range(count))


# ---------------------------------------------------------------------------
# worked proofs


def permute_pool(p: inf.Proof, target: Sequence[Formula]) -> inf.Proof:
    """Extend ``p`` by oformula exchanges until its pool reads ``target``."""
    cur = list(p.conclusion.pool)
    for pos, want in enumerate(target):
        j = next(k for k in range(pos, len(cur)) if cur[k] == want)
        while j > pos:
            p = inf.node(inf.EXCH_F(j), p)
            cur[j - 1], cur[j] = cur[j], cur[j - 1]
            j -= 1
    return p


def contraction_proof() -> inf.Proof:
    """The seven-step (AMEC|&) proof of !P | (P & P)."""
    P = parse("P")
    p = inf.node(inf.MIX(), inf.node(inf.ID(P)), inf.node(inf.ID(P)))
    p = inf.node(inf.EXCH_F(2), p)
    p = inf.node(inf.CONJ(3), p)
    p = inf.node(inf.CONTR(1), p)
    return inf.node(inf.DISJ(1), p)


def blass_proof() -> inf.Proof:
    """The (AME|&) proof of Blass's principle."""
    ids = [inf.node(inf.ID(parse(x))) for x in "PQRS"]
    p = ids[0]
    for q in ids[1:]:
        p = inf.node(inf.MIX(), p, q)
    p = permute_pool(p, [parse(x) for x in ("!P", "!Q", "!R", "!S", "P", "R", "Q", "S")])
    for i in (1, 2, 3, 4):
        p = inf.node(inf.DISJ(i), p)
    p = inf.node(inf.CONJ(3), p)
    p = inf.node(inf.CONJ(1), p)
    return inf.node(inf.DISJ(1), p)


def singleton(text: str) -> Cirquent:
    return embed_formula(parse(text))


# ---------------------------------------------------------------------------
# resources and affine proofs


def rand_resource(rng: random.Random, n: int, names: Sequence[str] = "PQR"):
    """Random monotone resource: the upward closure of a few random situations."""
    from cirquents.resource import Port, Resource, leq, situation_bits
    interface = tuple(Port(atom(rng.choice(names)), rng.random() < 0.5) for _ in range(n))
    sits = [situation_bits(r, n) for r in range(1 << n)]
    gens = [s for s in sits if rng.random() < 0.25]
    table = bytes(int(any(leq(interface, g, s) for g in gens)) for s in sits)
    return Resource(interface, table)


def rand_affine_proof(rng: random.Random, max_oliterals: int = 8, names: Sequence[str] = "PQR"):
    """A random sequent proof without contraction, built top-down."""
    from cirquents.formula import oliterals
    from cirquents.sequents import SeqRule, seq_node

    def width(p):
        return sum(len(oliterals(f)) for f in p.conclusion.formulas)

    def axiom():
        f = rand_formula(rng, rng.choice((1, 1, 1, 2)), names)
        return seq_node(SeqRule("AX", formula=f))

    pieces = [axiom()]
    for _ in range(rng.randint(1, 12)):
        p = pieces.pop(rng.randrange(len(pieces)))
        n = len(p.conclusion)
        move = rng.random()
        if move < 0.2 and n >= 2:
            p = seq_node(SeqRule("EXCH", rng.randint(1, n - 1)), p)
        elif move < 0.45 and n >= 2:
            p = seq_node(SeqRule("OR", rng.randint(1, n - 1)), p)
        elif move < 0.55 and width(p) < max_oliterals:
            p = seq_node(SeqRule("WEAK", rng.randint(1, n + 1), rand_formula(rng, 1, names)), p)
        elif move < 0.85:
            q = pieces.pop(rng.randrange(len(pieces))) if pieces else axiom()
            if width(p) + width(q) <= max_oliterals:
                p = seq_node(SeqRule("AND"), p, q)
            else:
                pieces.append(q)
        elif width(p) + 2 <= max_oliterals:
            pieces.append(axiom())
        pieces.append(p)
    return max(pieces, key=lambda p: (width(p), len(p.conclusion)))
