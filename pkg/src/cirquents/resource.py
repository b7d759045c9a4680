"""Abstract resource semantics.

A resource is an interface (sequence of ports, each an input ``-P`` or an
output ``P``) plus a monotone truth table over all situations.  Situations
are bit strings; the table is indexed by ``int(bits, 2)`` so the first
oport is the most significant bit.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from . import _pykernels, kernels
from .cirquent import Cirquent, embed_formula
from .errors import CapExceeded, ParseError, ResourceError, UnsupportedError
from .formula import Atom, Formula, Lit, atom as make_atom, has_choice, literals

DEFAULT_MAX_PORTS = 16

Allocation = Tuple[int, int]          # 1-based (oinput, ooutput)
Arrangement = Tuple[Allocation, ...]


@dataclass(frozen=True)
class Port:
    atom: Atom
    is_input: bool

    def flipped(self) -> "Port":
        return Port(self.atom, not self.is_input)

    def literal(self) -> Lit:
        return Lit(not self.is_input, self.atom)

    def __str__(self):
        return ("-" if self.is_input else "") + self.atom.name

    @staticmethod
    def of_literal(lit: Lit) -> "Port":
        if not lit.atom.is_general:
            raise UnsupportedError(f"ports are built from general atoms; got {lit.atom}")
        return Port(lit.atom, not lit.positive)

    @staticmethod
    def parse(text: str) -> "Port":
        t = text.strip()
        inp = t.startswith("-")
        name = t[1:].strip() if inp else t
        try:
            a = make_atom(name)
        except ValueError:
            raise ParseError(f"bad port {text!r}") from None
        if not a.is_general:
            raise ParseError(f"port type must be a general atom: {text!r}")
        return Port(a, inp)


Interface = Tuple[Port, ...]


def interface_text(I: Sequence[Port]) -> str:
    return "<" + ", ".join(map(str, I)) + ">"


def _index(s: Union[str, int], n: int) -> int:
    if isinstance(s, int):
        return s
    if len(s) != n or any(ch not in "01" for ch in s):
        raise ResourceError(f"{s!r} is not a situation of length {n}")
    return int(s, 2) if s else 0


def situation_bits(r: int, n: int) -> str:
    return format(r, f"0{n}b") if n else ""


def monotonicity_violation(interface: Sequence[Port], table: bytes) -> Optional[Tuple[str, str]]:
    """First covering pair (s, s') with s <_I s' but truth(s) > truth(s'), if any."""
    n = len(interface)
    full, cols = _pykernels._columns(n)
    t = int(bytes(table).translate(_pykernels._BYTE_TO_BIT)[::-1], 2) if table else 0
    for j, port in enumerate(interface):
        p = 1 << (n - 1 - j)
        zero_rows = full ^ cols[j]
        up = t >> p                      # bit r = truth of r with bit j set
        if port.is_input:
            bad = up & ~t & zero_rows    # clearing an input bit must not lose truth
        else:
            bad = t & ~up & zero_rows
        if bad:
            r = (bad & -bad).bit_length() - 1
            lo, hi = situation_bits(r, n), situation_bits(r | p, n)
            return (hi, lo) if port.is_input else (lo, hi)
    return None


class Resource:
    """Immutable (interface, truth table) pair; monotonicity checked on construction."""

    __slots__ = ("interface", "table")

    def __init__(self, interface: Iterable[Port], table, check: bool = True):
        interface = tuple(interface)
        table = bytes(table)
        n = len(interface)
        if len(table) != 1 << n:
            raise ResourceError(f"table has {len(table)} rows; interface needs {1 << n}")
        if any(b > 1 for b in table):
            raise ResourceError("truth values must be 0 or 1")
        if check:
            bad = monotonicity_violation(interface, table)
            if bad:
                raise ResourceError(f"not monotone: {bad[0]} <= {bad[1]} but truth drops")
        object.__setattr__(self, "interface", interface)
        object.__setattr__(self, "table", table)

    def __setattr__(self, k, v):
        raise AttributeError("Resource is immutable")

    def __eq__(self, other):
        return (isinstance(other, Resource) and self.interface == other.interface
                and self.table == other.table)

    def __hash__(self):
        return hash((self.interface, self.table))

    def __repr__(self):
        return f"Resource({interface_text(self.interface)}, false at {self.false_situations()})"

    @property
    def arity(self) -> int:
        return len(self.interface)

    def truth(self, s: Union[str, int]) -> int:
        return self.table[_index(s, self.arity)]

    def true_situations(self) -> List[str]:
        return [situation_bits(r, self.arity) for r, v in enumerate(self.table) if v]

    def false_situations(self) -> List[str]:
        return [situation_bits(r, self.arity) for r, v in enumerate(self.table) if not v]

    def rows(self) -> List[Tuple[str, int]]:
        return [(situation_bits(r, self.arity), v) for r, v in enumerate(self.table)]


def from_function(interface: Sequence[Port], fn) -> Resource:
    n = len(interface)
    return Resource(interface, bytes(int(bool(fn(situation_bits(r, n)))) for r in range(1 << n)))


def ports(text: str) -> Interface:
    """``"-Fuel, Power"`` -> interface."""
    return tuple(Port.parse(p) for p in text.split(",") if p.strip())


# ---------------------------------------------------------------------------
# order and operations


def leq(interface: Sequence[Port], s: str, t: str) -> bool:
    """s <=_I t: outputs compared normally, inputs reversed."""
    n = len(interface)
    if len(s) != n or len(t) != n:
        raise ResourceError("situation lengths must match the interface")
    for port, a, b in zip(interface, s, t):
        if port.is_input:
            if b > a:
                return False
        elif a > b:
            return False
    return True


def zero() -> Resource:
    return Resource((), b"\x00")


def one() -> Resource:
    return Resource((), b"\x01")


def neg(a: Resource) -> Resource:
    return Resource(tuple(p.flipped() for p in a.interface),
                    bytes(1 - v for v in a.table))


def _combine(a: Resource, b: Resource, both: bool) -> Resource:
    ones = b"\x01" * len(b.table)
    zeros = b"\x00" * len(b.table)
    if both:
        table = b"".join(b.table if v else zeros for v in a.table)
    else:
        table = b"".join(ones if v else b.table for v in a.table)
    return Resource(a.interface + b.interface, table)


def conj(a: Resource, b: Resource) -> Resource:
    return _combine(a, b, True)


def disj(a: Resource, b: Resource) -> Resource:
    return _combine(a, b, False)


def impl(a: Resource, b: Resource) -> Resource:
    return disj(neg(a), b)


def combine(op: str, *args: Resource) -> Resource:
    ops = {"neg": neg, "conj": conj, "disj": disj, "impl": impl}
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    return ops[op](*args)


def atomic(name: str) -> Resource:
    """The one-port resource P (true iff its only bit is 1)."""
    return Resource((Port(make_atom(name), False),), b"\x00\x01")


# ---------------------------------------------------------------------------
# formulas and cirquents as resources


def _cl5_ports(pool: Sequence[Formula]) -> Interface:
    out = []
    for f in pool:
        if has_choice(f):
            raise UnsupportedError("choice connectives have no resource reading here")
        out.extend(Port.of_literal(leaf) for leaf in literals(f))
    return tuple(out)


def _denotation(obj, interface, max_ports) -> Resource:
    if len(interface) > max_ports:
        raise CapExceeded(f"{len(interface)} ports exceed the cap of {max_ports}")
    prog, n = kernels.compile_situation(obj)
    return Resource(interface, kernels.table(prog, n), check=False)


def formula_to_resource(f: Formula, max_ports: int = DEFAULT_MAX_PORTS) -> Resource:
    return _denotation(f, _cl5_ports((f,)), max_ports)


def cirquent_to_resource(c: Cirquent, max_ports: int = DEFAULT_MAX_PORTS) -> Resource:
    return _denotation(c, _cl5_ports(c.pool), max_ports)


def denotation(obj, max_ports: int = DEFAULT_MAX_PORTS) -> Resource:
    if isinstance(obj, Cirquent):
        return cirquent_to_resource(obj, max_ports)
    return formula_to_resource(obj, max_ports)


# ---------------------------------------------------------------------------
# representation


def critical_situations(a: Resource) -> List[str]:
    """False situations all of whose strict <=_I-successors are true."""
    n = a.arity
    out = []
    for r, v in enumerate(a.table):
        if v:
            continue
        ok = True
        for j, port in enumerate(a.interface):
            p = 1 << (n - 1 - j)
            bit = r & p
            if port.is_input and bit:
                up = r ^ p
            elif not port.is_input and not bit:
                up = r | p
            else:
                continue
            if not a.table[up]:
                ok = False
                break
        if ok:
            out.append(situation_bits(r, n))
    return out


def represent(a: Resource) -> Cirquent:
    """Literal cirquent with one group per critical situation."""
    pool = tuple(p.literal() for p in a.interface)
    groups = []
    for s in critical_situations(a):
        # an output literal is false at bit 0, an input literal at bit 1
        groups.append(tuple(j for j, (p, b) in enumerate(zip(a.interface, s), 1)
                            if (b == "1") == p.is_input))
    return Cirquent(pool, tuple(groups))


# ---------------------------------------------------------------------------
# arrangements


class ArrangementReport(NamedTuple):
    monogamous: bool
    trivializing: bool


def _validate(a: Resource, arr: Iterable[Allocation]) -> List[Allocation]:
    out = []
    n = a.arity
    for x, y in arr:
        if not (1 <= x <= n and 1 <= y <= n):
            raise ResourceError(f"allocation ({x}, {y}) outside 1..{n}")
        px, py = a.interface[x - 1], a.interface[y - 1]
        if not px.is_input or py.is_input:
            raise ResourceError(f"allocation ({x}, {y}) must join an oinput to an ooutput")
        if px.atom != py.atom:
            raise ResourceError(f"allocation ({x}, {y}) joins ports of different types")
        out.append((x, y))
    return out


def consistent(s: str, arr: Iterable[Allocation]) -> bool:
    return all(s[x - 1] <= s[y - 1] for x, y in arr)


def is_monogamous(arr: Iterable[Allocation]) -> bool:
    used = set()
    for x, y in arr:
        if x in used or y in used:
            return False
        used.update((x, y))
    return True


def is_trivializing(a: Resource, arr: Iterable[Allocation]) -> bool:
    arr = _validate(a, arr)
    return kernels.all_true_table(a.table, a.arity, [(x - 1, y - 1) for x, y in arr])


def arrangement_checks(a: Resource, arr: Iterable[Allocation]) -> ArrangementReport:
    arr = _validate(a, arr)
    return ArrangementReport(is_monogamous(arr), is_trivializing(a, arr))


def greedy_arrangement(a: Resource) -> Arrangement:
    I = a.interface
    return tuple((x, y) for x in range(1, len(I) + 1) for y in range(1, len(I) + 1)
                 if I[x - 1].is_input and not I[y - 1].is_input and I[x - 1].atom == I[y - 1].atom)


def _maximal_matchings(inputs, outputs):
    if len(inputs) <= len(outputs):
        out = [tuple(zip(inputs, perm)) for perm in itertools.permutations(outputs, len(inputs))]
    else:
        out = [tuple(sorted(zip(perm, outputs))) for perm in itertools.permutations(inputs, len(outputs))]
    out.sort()
    return out


def monogamous_arrangements(a: Resource) -> Iterable[Arrangement]:
    """Maximal monogamous arrangements: per port type (first-occurrence order)
    a matching of oinputs to ooutputs that cannot be extended."""
    per: Dict[Atom, Tuple[List[int], List[int]]] = {}
    for j, p in enumerate(a.interface, 1):
        per.setdefault(p.atom, ([], []))[0 if p.is_input else 1].append(j)
    choices = [_maximal_matchings(i, o) for i, o in per.values()]
    for combo in itertools.product(*choices):
        yield tuple(sorted(pair for m in combo for pair in m))


def is_trivial(a: Union[Resource, Cirquent, Formula], max_ports: int = DEFAULT_MAX_PORTS
               ) -> Optional[Arrangement]:
    """First monogamous trivializing arrangement, or None.

    Adding allocations only shrinks the set of consistent situations, so it
    is enough to try the maximal monogamous arrangements.
    """
    if not isinstance(a, Resource):
        a = denotation(a, max_ports)
    if a.arity > max_ports:
        raise CapExceeded(f"{a.arity} ports exceed the cap of {max_ports}")
    for arr in monogamous_arrangements(a):
        if kernels.all_true_table(a.table, a.arity, [(x - 1, y - 1) for x, y in arr]):
            return arr
    return None


# ---------------------------------------------------------------------------
# text formats

_RES_RE = re.compile(r"^\s*resource\s*\{\s*ports\s*:\s*\[(.*?)\]\s*;\s*true\s*:\s*\[(.*?)\]\s*;?\s*\}\s*$",
                     re.S)
EMPTY_SITUATION = "e"


def to_resource_text(a: Resource) -> str:
    ports_txt = ", ".join(map(str, a.interface))
    trues = [s if s else EMPTY_SITUATION for s in a.true_situations()]
    return f"resource {{ ports: [{ports_txt}]; true: [{', '.join(trues)}] }}"


def parse_resource(text: str) -> Resource:
    m = _RES_RE.match(text)
    if not m:
        raise ParseError("expected 'resource { ports: [...]; true: [...] }'")
    interface = tuple(Port.parse(p) for p in m.group(1).split(",") if p.strip())
    n = len(interface)
    table = bytearray(1 << n)
    for s in m.group(2).split(","):
        s = s.strip()
        if not s:
            continue
        if s in (EMPTY_SITUATION, "ε"):
            s = ""
        if len(s) != n or any(ch not in "01" for ch in s):
            raise ParseError(f"bad situation {s!r} for {n} ports")
        table[int(s, 2) if s else 0] = 1
    bad = monotonicity_violation(interface, bytes(table))
    if bad:
        raise ResourceError(f"not monotone: {bad[0]} <= {bad[1]} but {bad[0]} is true and {bad[1]} false")
    return Resource(interface, bytes(table), check=False)


def write_arrangement(arr: Iterable[Allocation]) -> str:
    return "".join(f"alloc {x} -> {y}\n" for x, y in arr)


def read_arrangement(text: str) -> Arrangement:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = re.fullmatch(r"alloc\s+(\d+)\s*->\s*(\d+)", line)
        if not m:
            raise ParseError(f"line {lineno}: expected 'alloc <i> -> <j>'")
        out.append((int(m.group(1)), int(m.group(2))))
    return tuple(out)


# ---------------------------------------------------------------------------
# arrangements from CL5 proofs


def extract_arrangement(p) -> Arrangement:
    """Monogamous trivializing arrangement for the conclusion of a CL5 proof.

    Every node is paired with a normal binary cirquent B and a substitution
    sigma with sigma(B) equal to the node's conclusion: identity axioms and
    pool weakenings introduce fresh atoms, mix keeps alphabets apart, and the
    remaining rules are replayed on B.  Each atom married in the root's B
    then couples the oliterals of its two images positionwise.
    """
    from . import inference as inf
    from .cirquent import oliterals as c_oliterals
    from .formula import FreshAtoms, oliterals as f_oliterals
    from .semantics import is_normal_binary

    bad = inf.check_proof(p, inf.CL5)
    if bad:
        raise ResourceError(f"not a CL5 proof: {bad[0]}")
    c = p.conclusion
    _cl5_ports(c.pool)
    avoid = set()
    for _, q in inf.iter_nodes(p):
        for f in q.conclusion.pool:
            avoid.update(leaf.atom for leaf in literals(f))
    fresh = FreshAtoms(avoid)
    sigma: Dict[Atom, Formula] = {}
    # explicit-stack post-order so shared subproofs still get their own atoms
    results: List[Cirquent] = []
    stack = [(p, False)]
    while stack:
        q, done = stack.pop()
        if not done:
            stack.append((q, True))
            stack.extend((x, False) for x in reversed(q.premises))
            continue
        k = len(q.premises)
        prem = results[len(results) - k:] if k else []
        del results[len(results) - k:]
        r = q.rule
        if r.tag in ("ID", "WEAK_P"):
            a = fresh()
            sigma[a] = r.formula
            r = inf.ID(Lit(True, a)) if r.tag == "ID" else inf.WEAK_P(r.i, Lit(True, a))
        results.append(inf.apply(r, prem))
    (normal,) = results
    assert is_normal_binary(normal)
    full = sigma

    # global offsets of each root-B oliteral's image inside the conclusion
    positions: Dict[Atom, List[Tuple[bool, int]]] = {}
    pos = 1
    for f in normal.pool:
        for _, sign, a in f_oliterals(f):
            img = full.get(a, Lit(True, a))
            width = sum(1 for _ in literals(img))
            positions.setdefault(a, []).append((sign, pos))
            pos += width
    assert pos - 1 == len(c_oliterals(c))
    arr = []
    for a, occ in positions.items():
        if len(occ) != 2:
            continue
        (s1, p1), (s2, p2) = occ
        neg_start = p1 if not s1 else p2
        pos_start = p2 if not s1 else p1
        img = full.get(a, Lit(True, a))
        pos_lits = [sgn for _, sgn, _ in f_oliterals(img)]
        for k, sgn in enumerate(pos_lits):
            # in the positive image a positive leaf is an output; its mate in
            # the negated image is an input, and vice versa
            if sgn:
                arr.append((neg_start + k, pos_start + k))
            else:
                arr.append((pos_start + k, neg_start + k))
    arr.sort()
    res = cirquent_to_resource(c, max_ports=max(DEFAULT_MAX_PORTS, len(c_oliterals(c))))
    report = arrangement_checks(res, arr)
    if not (report.monogamous and report.trivializing):
        raise ResourceError("extracted arrangement failed verification")  # pragma: no cover
    return tuple(arr)
