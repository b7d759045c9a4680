"""The eight cirquent rules, proofs, rule-subset systems and proof checking.

Every rule application carries explicit 1-based parameters so a proof can be
re-checked mechanically.  Rule families::

    A   EMPTY, ID F            (and TOP when the system has the top axiom)
    M   MIX
    E   EXCH_F i, EXCH_G i
    W   WEAK_P i F, WEAK_G g i
    D   DUP_DOWN g, DUP_UP g
    C   CONTR i
    OR  DISJ i
    AND CONJ i
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import FrozenSet, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .cirquent import (EMPTY, Cirquent, is_primitive, merge_oformulas, merge_ogroups,
                       parse_cirquent, substitute_cirquent, to_cirquent_text, _norm_group)
from .errors import ProofFormatError, RuleError, ParseError
from .formula import (TRUE, Conj, Disj, Formula, Lit, is_elementary, negate,
                      parse as parse_formula, substitute, to_text)

FAMILY = {
    "EMPTY": "A", "ID": "A", "TOP": "A",
    "MIX": "M",
    "EXCH_F": "E", "EXCH_G": "E",
    "WEAK_P": "W", "WEAK_G": "W",
    "DUP_DOWN": "D", "DUP_UP": "D",
    "CONTR": "C",
    "DISJ": "OR",
    "CONJ": "AND",
}
FAMILIES = ("A", "M", "E", "W", "D", "C", "OR", "AND")
ARITY = {"EMPTY": 0, "ID": 0, "TOP": 0, "MIX": 2}


@dataclass(frozen=True)
class RuleApp:
    tag: str
    i: Optional[int] = None
    g: Optional[int] = None
    formula: Optional[Formula] = None

    def __post_init__(self):
        if self.tag not in FAMILY:
            raise RuleError(f"unknown rule {self.tag!r}")

    @property
    def family(self) -> str:
        return FAMILY[self.tag]

    @property
    def arity(self) -> int:
        return ARITY.get(self.tag, 1)

    def params_text(self) -> str:
        t = self.tag
        if t in ("EMPTY", "MIX", "TOP"):
            return ""
        if t == "ID":
            return to_text(self.formula)
        if t == "WEAK_P":
            return f"{self.i} {to_text(self.formula)}"
        if t == "WEAK_G":
            return f"{self.g} {self.i}"
        if t in ("DUP_DOWN", "DUP_UP", "EXCH_G"):
            return str(self.g)
        return str(self.i)

    def __str__(self):
        p = self.params_text()
        return f"{self.tag} {p}" if p else self.tag


# shorthand constructors
def EMPTY_AX():
    return RuleApp("EMPTY")


def ID(f):
    return RuleApp("ID", formula=parse_formula(f) if isinstance(f, str) else f)


def TOP():
    return RuleApp("TOP")


def MIX():
    return RuleApp("MIX")


def EXCH_F(i):
    return RuleApp("EXCH_F", i=i)


def EXCH_G(g):
    return RuleApp("EXCH_G", g=g)


def WEAK_P(i, f):
    return RuleApp("WEAK_P", i=i, formula=parse_formula(f) if isinstance(f, str) else f)


def WEAK_G(g, i):
    return RuleApp("WEAK_G", g=g, i=i)


def DUP_DOWN(g):
    return RuleApp("DUP_DOWN", g=g)


def DUP_UP(g):
    return RuleApp("DUP_UP", g=g)


def CONTR(i):
    return RuleApp("CONTR", i=i)


def DISJ(i):
    return RuleApp("DISJ", i=i)


def CONJ(i):
    return RuleApp("CONJ", i=i)


# ---------------------------------------------------------------------------
# systems


@dataclass(frozen=True)
class System:
    allowed: FrozenSet[str] = frozenset(FAMILIES)
    primitive_only: bool = False
    elementary_contraction_only: bool = False
    top_axiom: bool = False
    name: str = field(default="", compare=False)

    def allows(self, tag: str) -> bool:
        if tag == "TOP":
            return self.top_axiom
        return FAMILY[tag] in self.allowed

    def starred(self) -> "System":
        return System(self.allowed, True, self.elementary_contraction_only,
                      self.top_axiom, (self.name or "S") + "*")

    def __str__(self):
        return self.name or "(" + "".join(f for f in FAMILIES if f in self.allowed) + ")"


CCC = System(frozenset(FAMILIES), name="CCC")
CL5 = System(frozenset(FAMILIES) - {"C"}, name="CL5")
CL6 = System(frozenset(FAMILIES), elementary_contraction_only=True, top_axiom=True, name="CL6")

_LETTER = {"A": "A", "M": "M", "E": "E", "W": "W", "D": "D", "C": "C",
           "|": "OR", "∨": "OR", "V": "OR", "&": "AND", "∧": "AND"}


def system_by_name(name: str) -> System:
    """``ccc``, ``cl5``, ``cl6`` or a letter set like ``(AME|&)``; ``*`` suffix = primitive."""
    s = name.strip()
    star = s.endswith("*")
    if star:
        s = s[:-1].strip()
    low = s.lower()
    if low in ("ccc", "cl5", "cl6"):
        base = {"ccc": CCC, "cl5": CL5, "cl6": CL6}[low]
    elif s.startswith("(") and s.endswith(")"):
        fams = set()
        for ch in s[1:-1]:
            if ch.isspace():
                continue
            if ch not in _LETTER:
                raise ValueError(f"unknown rule letter {ch!r} in {name!r}")
            fams.add(_LETTER[ch])
        base = System(frozenset(fams), name=s)
    else:
        raise ValueError(f"unknown system {name!r}")
    return base.starred() if star else base


# ---------------------------------------------------------------------------
# forward application


def _swap(j: int, i: int) -> int:
    return i + 1 if j == i else (i if j == i + 1 else j)


def conj_side_conditions(c: Cirquent, i: int) -> Optional[str]:
    """None when CONJ i may be applied to ``c``; otherwise the failed condition."""
    if not 1 <= i < len(c.pool):
        return f"oformula index {i} out of range"
    s = c.structure
    for g in s:
        if i in g and i + 1 in g:
            return "an ogroup contains both conjuncts"
    for k, g in enumerate(s):
        if i in g and (k + 1 >= len(s) or i + 1 not in s[k + 1]):
            return f"ogroup {k + 1} contains the left conjunct but is not immediately followed by an ogroup containing the right one"
        if i + 1 in g and (k == 0 or i not in s[k - 1]):
            return f"ogroup {k + 1} contains the right conjunct but is not immediately preceded by an ogroup containing the left one"
    return None


def apply(r: RuleApp, premises: Sequence[Cirquent], system: Optional[System] = None) -> Cirquent:
    """Conclusion of ``r`` applied to ``premises``; raises RuleError if inapplicable."""
    if len(premises) != r.arity:
        raise RuleError(f"{r.tag} takes {r.arity} premise(s), got {len(premises)}")
    t = r.tag
    if t == "EMPTY":
        return EMPTY
    if t == "ID":
        if r.formula is None:
            raise RuleError("ID needs a formula")
        return Cirquent((negate(r.formula), r.formula), ((1, 2),))
    if t == "TOP":
        if system is not None and not system.top_axiom:
            raise RuleError("TOP axiom not available in this system")
        return Cirquent((Lit(True, TRUE),), ((1,),))
    if t == "MIX":
        a, b = premises
        k = len(a.pool)
        return Cirquent(a.pool + b.pool,
                        a.structure + tuple(tuple(j + k for j in g) for g in b.structure))
    (c,) = premises
    n, m = len(c.pool), len(c.structure)
    if t == "EXCH_F":
        i = _check(r.i, 1, n - 1, "oformula")
        pool = c.pool[:i - 1] + (c.pool[i], c.pool[i - 1]) + c.pool[i + 1:]
        return Cirquent(pool, tuple(_norm_group(_swap(j, i) for j in g) for g in c.structure))
    if t == "EXCH_G":
        g = _check(r.g, 1, m - 1, "ogroup")
        s = c.structure
        return Cirquent(c.pool, s[:g - 1] + (s[g], s[g - 1]) + s[g + 1:])
    if t == "WEAK_P":
        i = _check(r.i, 1, n + 1, "insertion position")
        if r.formula is None:
            raise RuleError("WEAK_P needs a formula")
        pool = c.pool[:i - 1] + (r.formula,) + c.pool[i - 1:]
        return Cirquent(pool, tuple(tuple(j + 1 if j >= i else j for j in g) for g in c.structure))
    if t == "WEAK_G":
        g = _check(r.g, 1, m, "ogroup")
        i = _check(r.i, 1, n, "oformula")
        if i in c.structure[g - 1]:
            raise RuleError(f"ogroup {g} already contains oformula {i}")
        s = c.structure
        return Cirquent(c.pool, s[:g - 1] + (_norm_group(s[g - 1] + (i,)),) + s[g:])
    if t == "DUP_DOWN":
        g = _check(r.g, 1, m, "ogroup")
        s = c.structure
        return Cirquent(c.pool, s[:g] + (s[g - 1],) + s[g:])
    if t == "DUP_UP":
        g = _check(r.g, 1, m - 1, "ogroup")
        s = c.structure
        if s[g - 1] != s[g]:
            raise RuleError(f"ogroups {g} and {g + 1} are not identical")
        return Cirquent(c.pool, s[:g] + s[g + 1:])
    if t == "CONTR":
        i = _check(r.i, 1, n - 1, "oformula")
        f = c.pool[i - 1]
        if f != c.pool[i]:
            raise RuleError(f"oformulas {i} and {i + 1} differ")
        if system is not None and system.elementary_contraction_only and not is_elementary(f):
            raise RuleError("contraction limited to elementary formulas")
        return merge_oformulas(c, i, f)
    if t == "DISJ":
        i = _check(r.i, 1, n - 1, "oformula")
        return merge_oformulas(c, i, Disj(c.pool[i - 1], c.pool[i]))
    if t == "CONJ":
        i = _check(r.i, 1, n - 1, "oformula")
        why = conj_side_conditions(c, i)
        if why:
            raise RuleError(f"CONJ {i}: {why}")
        out = c
        for k in range(len(c.structure) - 1, -1, -1):
            if i in c.structure[k]:
                out = merge_ogroups(out, k + 1)
        return merge_oformulas(out, i, Conj(c.pool[i - 1], c.pool[i]))
    raise RuleError(f"unhandled rule {t}")  # pragma: no cover


def _check(v, lo, hi, what) -> int:
    if v is None or not lo <= v <= hi:
        raise RuleError(f"{what} index {v} outside {lo}..{hi}")
    return v


# ---------------------------------------------------------------------------
# backward premises


def conservative_disj_premise(c: Cirquent, i: int) -> Cirquent:
    """Split ``F|G`` at ``i`` with both halves kept in every group that held it."""
    f = c.pool[i - 1]
    if not isinstance(f, Disj):
        raise RuleError(f"oformula {i} is not a disjunction")
    pool = c.pool[:i - 1] + (f.left, f.right) + c.pool[i:]
    s = []
    for g in c.structure:
        ng = [j + 1 if j > i else j for j in g]
        if i in g:
            ng.append(i + 1)
        s.append(_norm_group(ng))
    return Cirquent(pool, tuple(s))


def conservative_conj_premise(c: Cirquent, i: int) -> Cirquent:
    """Split ``F&G`` at ``i``; each group holding it becomes a F-copy then a G-copy."""
    f = c.pool[i - 1]
    if not isinstance(f, Conj):
        raise RuleError(f"oformula {i} is not a conjunction")
    pool = c.pool[:i - 1] + (f.left, f.right) + c.pool[i:]
    s = []
    for g in c.structure:
        rest = [j + 1 if j > i else j for j in g if j != i]
        if i in g:
            s.append(_norm_group(rest + [i]))
            s.append(_norm_group(rest + [i + 1]))
        else:
            s.append(_norm_group(rest))
    return Cirquent(pool, tuple(s))


def _shift_out(g, i):
    """Indices of ``g`` other than ``i``, renumbered for a pool grown at ``i``."""
    return [j + 1 if j > i else j for j in g if j != i]


def backward_premises(c: Cirquent, family: str, system: System = CCC,
                      limit: int = 10_000) -> Iterator[Tuple[RuleApp, Tuple[Cirquent, ...]]]:
    """Rule applications of ``family`` (allowed by ``system``) concluding ``c``.

    The conservative variants come first for OR/AND.  At most ``limit``
    candidates are produced.
    """
    if family not in system.allowed:
        return
    gen = _backward(c, family, system)
    for app, prem in itertools.islice(gen, limit):
        if system.primitive_only and not all(is_primitive(p) for p in prem):
            continue
        yield app, prem


def _backward(c: Cirquent, family: str, system: System):
    n, s = len(c.pool), c.structure
    if family == "A":
        if c == EMPTY:
            yield EMPTY_AX(), ()
        if n == 2 and s == ((1, 2),) and c.pool[0] == negate(c.pool[1]):
            yield ID(c.pool[1]), ()
        if system.top_axiom and c == apply(TOP(), ()):
            yield TOP(), ()
    elif family == "M":
        for k in range(n + 1):
            for m in range(len(s) + 1):
                if all(all(j <= k for j in g) for g in s[:m]) and all(all(j > k for j in g) for g in s[m:]):
                    a = Cirquent(c.pool[:k], s[:m])
                    b = Cirquent(c.pool[k:], tuple(tuple(j - k for j in g) for g in s[m:]))
                    yield MIX(), (a, b)
    elif family == "E":
        for i in range(1, n):
            yield EXCH_F(i), (apply(EXCH_F(i), [c]),)
        for g in range(1, len(s)):
            yield EXCH_G(g), (apply(EXCH_G(g), [c]),)
    elif family == "W":
        used = {j for g in s for j in g}
        for i in range(1, n + 1):
            if i not in used:
                prem = Cirquent(c.pool[:i - 1] + c.pool[i:],
                                tuple(tuple(j - 1 if j > i else j for j in g) for g in s))
                yield WEAK_P(i, c.pool[i - 1]), (prem,)
        for g in range(1, len(s) + 1):
            for i in s[g - 1]:
                prem = Cirquent(c.pool, s[:g - 1] + (tuple(j for j in s[g - 1] if j != i),) + s[g:])
                yield WEAK_G(g, i), (prem,)
    elif family == "D":
        for g in range(1, len(s)):
            if s[g - 1] == s[g]:
                yield DUP_DOWN(g), (Cirquent(c.pool, s[:g] + s[g + 1:]),)
        for g in range(1, len(s) + 1):
            yield DUP_UP(g), (Cirquent(c.pool, s[:g] + (s[g - 1],) + s[g:]),)
    elif family == "C":
        for i in range(1, n + 1):
            f = c.pool[i - 1]
            if system.elementary_contraction_only and not is_elementary(f):
                continue
            yield from _split_choices(c, i, f, f, "CONTR")
    elif family == "OR":
        for i in range(1, n + 1):
            f = c.pool[i - 1]
            if isinstance(f, Disj):
                yield from _split_choices(c, i, f.left, f.right, "DISJ")
    elif family == "AND":
        for i in range(1, n + 1):
            f = c.pool[i - 1]
            if isinstance(f, Conj):
                yield from _conj_choices(c, i)


def _split_choices(c, i, left, right, tag):
    """Premises where each group holding ``i`` keeps left, right or both halves."""
    pool = c.pool[:i - 1] + (left, right) + c.pool[i:]
    holders = [k for k, g in enumerate(c.structure) if i in g]
    # 0 = both (conservative), 1 = left only, 2 = right only
    for choice in itertools.product((0, 1, 2), repeat=len(holders)):
        s = []
        it = iter(choice)
        for g in c.structure:
            rest = _shift_out(g, i)
            if i in g:
                ch = next(it)
                rest += [i, i + 1] if ch == 0 else ([i] if ch == 1 else [i + 1])
            s.append(_norm_group(rest))
        app = RuleApp(tag, i=i)
        prem = Cirquent(pool, tuple(s))
        yield app, (prem,)


def _conj_choices(c, i):
    f = c.pool[i - 1]
    pool = c.pool[:i - 1] + (f.left, f.right) + c.pool[i:]
    holders = [k for k, g in enumerate(c.structure) if i in g]
    others = {k: _shift_out(c.structure[k], i) for k in holders}
    # for each holder, each other member goes to both sides (0), F-side (1) or G-side (2)
    per_group = [list(itertools.product((0, 1, 2), repeat=len(others[k]))) for k in holders]
    for combo in itertools.product(*per_group):
        s = []
        it = iter(combo)
        for k, g in enumerate(c.structure):
            if i not in g:
                s.append(_norm_group(_shift_out(g, i)))
                continue
            ch = next(it)
            fs = [i] + [j for j, x in zip(others[k], ch) if x != 2]
            gs = [i + 1] + [j for j, x in zip(others[k], ch) if x != 1]
            s.append(_norm_group(fs))
            s.append(_norm_group(gs))
        yield CONJ(i), (Cirquent(pool, tuple(s)),)


# ---------------------------------------------------------------------------
# proofs


@dataclass(frozen=True, eq=False)
class Proof:
    conclusion: Cirquent
    rule: RuleApp
    premises: Tuple["Proof", ...] = ()

    # iterative, so that very deep proofs compare without hitting the recursion limit
    def __eq__(self, other):
        if not isinstance(other, Proof):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if (a.rule != b.rule or len(a.premises) != len(b.premises)
                    or a.conclusion != b.conclusion):
                return False
            stack.extend(zip(a.premises, b.premises))
        return True

    def __hash__(self):
        return hash((self.conclusion, self.rule, len(self.premises)))

    def size(self) -> int:
        return sum(1 for _ in iter_nodes(self))

    def tags(self) -> List[str]:
        return [p.rule.tag for _, p in iter_nodes(self)]


def node(rule: RuleApp, *premises: Proof, system: Optional[System] = None) -> Proof:
    """Build a proof node, computing its conclusion (raises if inapplicable)."""
    return Proof(apply(rule, [p.conclusion for p in premises], system), rule, tuple(premises))


def iter_nodes(p: Proof) -> Iterator[Tuple[Tuple[int, ...], Proof]]:
    """Pre-order (path, node) pairs without recursion."""
    stack = [((), p)]
    while stack:
        path, q = stack.pop()
        yield path, q
        for k in range(len(q.premises) - 1, -1, -1):
            stack.append((path + (k,), q.premises[k]))


def postorder(p: Proof) -> List[Proof]:
    out = []
    stack = [(p, False)]
    while stack:
        q, done = stack.pop()
        if done:
            out.append(q)
            continue
        stack.append((q, True))
        for k in range(len(q.premises) - 1, -1, -1):
            stack.append((q.premises[k], False))
    return out


class Violation(NamedTuple):
    path: Tuple[int, ...]
    reason: str

    def __str__(self):
        where = "root" if not self.path else "root/" + "/".join(str(k + 1) for k in self.path)
        return f"{where}: {self.reason}"


def check_proof(p: Proof, system: System = CCC) -> List[Violation]:
    """Empty list iff ``p`` is a proof in ``system``."""
    out: List[Violation] = []
    for path, q in iter_nodes(p):
        r = q.rule
        if not system.allows(r.tag):
            out.append(Violation(path, f"rule {r.tag} not allowed in {system}"))
        if system.primitive_only and not is_primitive(q.conclusion):
            out.append(Violation(path, "cirquent is not primitive"))
        try:
            got = apply(r, [x.conclusion for x in q.premises], system)
        except RuleError as e:
            out.append(Violation(path, str(e)))
            continue
        if got != q.conclusion:
            out.append(Violation(path, f"{r} yields {to_cirquent_text(got)}, "
                                       f"not {to_cirquent_text(q.conclusion)}"))
    return out


def is_valid(p: Proof, system: System = CCC) -> bool:
    return not check_proof(p, system)


def substitute_proof(p: Proof, sigma) -> Proof:
    """Replace every oformula by its image (rules and indices unchanged)."""
    memo = {}
    for q in postorder(p):
        if id(q) in memo:
            continue
        r = q.rule
        if r.formula is not None:
            r = RuleApp(r.tag, r.i, r.g, substitute(sigma, r.formula))
        memo[id(q)] = Proof(substitute_cirquent(sigma, q.conclusion), r,
                            tuple(memo[id(x)] for x in q.premises))
    return memo[id(p)]


# ---------------------------------------------------------------------------
# proof files

_LINE_RE = re.compile(
    r"^(\d+):\s*(\w+)(.*?)(?:\s+from\s+(\d+(?:\s+\d+)?))?(?:\s+expect\s+(\[.*))?$")


def write_proof(p: Proof) -> str:
    ids = {}
    lines = []
    for q in postorder(p):
        if id(q) in ids:
            continue
        n = len(ids) + 1
        ids[id(q)] = n
        line = f"{n}: {q.rule}"
        if q.premises:
            line += " from " + " ".join(str(ids[id(x)]) for x in q.premises)
        line += " expect " + to_cirquent_text(q.conclusion)
        lines.append(line)
    return "\n".join(lines) + "\n"


def _parse_app(tag: str, params: str, lineno: int) -> RuleApp:
    params = params.strip()
    try:
        if tag in ("EMPTY", "MIX", "TOP"):
            if params:
                raise ProofFormatError(f"line {lineno}: {tag} takes no parameters")
            return RuleApp(tag)
        if tag == "ID":
            return ID(parse_formula(params, reserved=True))
        nums = params.split(None, 1)
        if tag == "WEAK_P":
            return WEAK_P(int(nums[0]), parse_formula(nums[1], reserved=True))
        ints = [int(x) for x in params.split()]
        if tag == "WEAK_G":
            g, i = ints
            return WEAK_G(g, i)
        (v,) = ints
        if tag in ("DUP_DOWN", "DUP_UP", "EXCH_G"):
            return RuleApp(tag, g=v)
        if tag in FAMILY:
            return RuleApp(tag, i=v)
    except ProofFormatError:
        raise
    except (ValueError, IndexError) as e:
        if isinstance(e, ParseError):
            raise ProofFormatError(f"line {lineno}: {e}") from None
        raise ProofFormatError(f"line {lineno}: bad parameters {params!r} for {tag}") from None
    raise ProofFormatError(f"line {lineno}: unknown rule {tag!r}")


def read_proof(text: str, system: Optional[System] = None) -> Proof:
    """Parse a proof file, recomputing every conclusion.

    Raises ProofFormatError on syntax errors, dangling references or an
    ``expect`` clause that disagrees with the recomputed cirquent, and
    RuleError (wrapped as ProofFormatError) when a rule does not apply.
    ``system`` only gates what ``apply`` checks (the top axiom, elementary
    contraction); use check_proof for rule membership.
    """
    nodes = {}
    last = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise ProofFormatError(f"line {lineno}: cannot parse {line!r}")
        nid, tag, params, refs, expect = m.groups()
        nid = int(nid)
        if nid in nodes:
            raise ProofFormatError(f"line {lineno}: duplicate id {nid}")
        app = _parse_app(tag, params, lineno)
        prem_ids = [int(x) for x in refs.split()] if refs else []
        for x in prem_ids:
            if x not in nodes:
                raise ProofFormatError(f"line {lineno}: reference to undefined id {x}")
        prem = [nodes[x] for x in prem_ids]
        try:
            concl = apply(app, [q.conclusion for q in prem], system)
        except RuleError as e:
            raise ProofFormatError(f"line {lineno}: {e}") from None
        if expect is not None:
            try:
                want = parse_cirquent(expect, reserved=True)
            except ParseError as e:
                raise ProofFormatError(f"line {lineno}: {e}") from None
            if want != concl:
                raise ProofFormatError(
                    f"line {lineno}: expected {to_cirquent_text(want)}, computed {to_cirquent_text(concl)}")
        nodes[nid] = Proof(concl, app, tuple(prem))
        last = nid
    if last is None:
        raise ProofFormatError("empty proof file")
    return nodes[last]
