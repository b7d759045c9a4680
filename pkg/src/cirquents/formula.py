"""Negation-normal propositional formulas.

Formulas are immutable trees built from literals and the four binary
connectives ``&`` (parallel conjunction), ``|`` (parallel disjunction),
``*`` (choice conjunction) and ``+`` (choice disjunction).  Negation only
ever sits on atoms; compound negations are pushed inward when parsing.

Surface syntax, tightest binding first::

    !  *  +  &  |  ->

All binary operators associate to the left except ``->``, which is
right-associative and is sugar for ``!A | B``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import ParseError


# ``print`` is deliberately left out so star-imports keep the builtin.
__all__ = ["Sort", "Atom", "TRUE", "FALSE", "atom", "Lit", "Conj", "Disj", "ChConj", "ChDisj",
           "Formula", "OccRef", "lit", "pos", "neg", "negate", "implies", "is_literal",
           "complementary", "oliterals", "literals", "atoms", "size", "subformula_at",
           "replace_at", "has_choice", "is_cl5_formula", "is_elementary", "Substitution",
           "substitute", "match_instance", "FreshAtoms", "to_text", "print_formula", "parse",
           "parse_many"]


class Sort(enum.Enum):
    GENERAL = "general"
    ELEMENTARY = "elementary"
    TRUE = "true"
    FALSE = "false"


@dataclass(frozen=True)
class Atom:
    name: str
    sort: Sort = Sort.GENERAL

    @property
    def is_logical(self) -> bool:
        return self.sort in (Sort.TRUE, Sort.FALSE)

    @property
    def is_general(self) -> bool:
        return self.sort is Sort.GENERAL

    def __str__(self):
        return self.name

    def __lt__(self, other):
        return (self.name, self.sort.value) < (other.name, other.sort.value)


TRUE = Atom("$T", Sort.TRUE)
FALSE = Atom("$F", Sort.FALSE)

_GENERAL_RE = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")
_ELEMENTARY_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
_RESERVED_RE = re.compile(r"_([ge])([1-9][0-9]*)\Z")


def atom(name: str) -> Atom:
    """Build an atom, deriving its sort from the lexeme."""
    if name == "$T":
        return TRUE
    if name == "$F":
        return FALSE
    if _GENERAL_RE.match(name):
        return Atom(name, Sort.GENERAL)
    if _ELEMENTARY_RE.match(name):
        return Atom(name, Sort.ELEMENTARY)
    m = _RESERVED_RE.match(name)
    if m:
        return Atom(name, Sort.GENERAL if m.group(1) == "g" else Sort.ELEMENTARY)
    raise ValueError(f"not an atom name: {name!r}")


# ---------------------------------------------------------------------------
# formula nodes


@dataclass(frozen=True)
class Lit:
    positive: bool
    atom: Atom

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Conj:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Disj:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class ChConj:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class ChDisj:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return to_text(self)


Formula = Union[Lit, Conj, Disj, ChConj, ChDisj]
Binary = (Conj, Disj, ChConj, ChDisj)
Choice = (ChConj, ChDisj)

# a path of 0 (left) / 1 (right) steps from the root to a subformula
OccRef = Tuple[int, ...]


def lit(name_or_atom, positive: bool = True) -> Lit:
    """Literal constructor that keeps the logical constants normalized."""
    a = atom(name_or_atom) if isinstance(name_or_atom, str) else name_or_atom
    if a.is_logical and not positive:
        return Lit(True, FALSE if a is TRUE or a == TRUE else TRUE)
    return Lit(positive, a)


def pos(name: str) -> Lit:
    return lit(name, True)


def neg(name: str) -> Lit:
    return lit(name, False)


def negate(f: Formula) -> Formula:
    """Negation pushed down to the atoms (De Morgan, choice duality)."""
    if isinstance(f, Lit):
        return lit(f.atom, not f.positive)
    if isinstance(f, Conj):
        return Disj(negate(f.left), negate(f.right))
    if isinstance(f, Disj):
        return Conj(negate(f.left), negate(f.right))
    if isinstance(f, ChConj):
        return ChDisj(negate(f.left), negate(f.right))
    return ChConj(negate(f.left), negate(f.right))


def implies(a: Formula, b: Formula) -> Formula:
    return Disj(negate(a), b)


def is_literal(f: Formula) -> bool:
    return isinstance(f, Lit)


def complementary(f: Formula, g: Formula) -> bool:
    """True for a pair of literals P, !P (in either order)."""
    return (isinstance(f, Lit) and isinstance(g, Lit) and f.atom == g.atom
            and f.positive != g.positive and not f.atom.is_logical)


# ---------------------------------------------------------------------------
# traversal


def oliterals(f: Formula) -> List[Tuple[OccRef, bool, Atom]]:
    """Literal occurrences of ``f`` in left-to-right order."""
    out: List[Tuple[OccRef, bool, Atom]] = []

    def walk(g, path):
        if isinstance(g, Lit):
            out.append((path, g.positive, g.atom))
        else:
            walk(g.left, path + (0,))
            walk(g.right, path + (1,))

    walk(f, ())
    return out


def literals(f: Formula) -> Iterator[Lit]:
    """Leaves of ``f`` in order (cheaper than :func:`oliterals`)."""
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Lit):
            yield g
        else:
            stack.append(g.right)
            stack.append(g.left)


def atoms(f: Formula) -> List[Atom]:
    """Distinct atoms of ``f`` in order of first occurrence."""
    seen: Dict[Atom, None] = {}
    for leaf in literals(f):
        seen.setdefault(leaf.atom, None)
    return list(seen)


def size(f: Formula) -> int:
    """Symbol count: one per atom occurrence, negation sign and connective."""
    if isinstance(f, Lit):
        return 1 if f.positive else 2
    return 1 + size(f.left) + size(f.right)


def subformula_at(f: Formula, path: OccRef) -> Formula:
    for step in path:
        if isinstance(f, Lit):
            raise IndexError(f"path {path} runs past a literal")
        f = f.right if step else f.left
    return f


def replace_at(f: Formula, path: OccRef, g: Formula) -> Formula:
    if not path:
        return g
    if isinstance(f, Lit):
        raise IndexError(f"path {path} runs past a literal")
    if path[0]:
        return type(f)(f.left, replace_at(f.right, path[1:], g))
    return type(f)(replace_at(f.left, path[1:], g), f.right)


def has_choice(f: Formula) -> bool:
    if isinstance(f, Lit):
        return False
    return isinstance(f, Choice) or has_choice(f.left) or has_choice(f.right)


def is_cl5_formula(f: Formula) -> bool:
    """General atoms only, parallel connectives only."""
    return not has_choice(f) and all(leaf.atom.is_general for leaf in literals(f))


def is_elementary(f: Formula) -> bool:
    """No general atoms and no choice connectives."""
    return not has_choice(f) and not any(leaf.atom.is_general for leaf in literals(f))


# ---------------------------------------------------------------------------
# substitutions


class Substitution(Mapping[Atom, Formula]):
    """Atom-to-formula map, identity outside its support.

    Logical atoms are never moved.
    """

    __slots__ = ("_map",)

    def __init__(self, mapping: Optional[Mapping[Atom, Formula]] = None, **by_name):
        m = {}
        for k, v in dict(mapping or {}).items():
            k = atom(k) if isinstance(k, str) else k
            m[k] = parse(v) if isinstance(v, str) else v
        for k, v in by_name.items():
            m[atom(k)] = parse(v) if isinstance(v, str) else v
        for k in m:
            if k.is_logical:
                raise ValueError("logical atoms cannot be substituted")
        self._map: Dict[Atom, Formula] = {k: v for k, v in m.items() if v != Lit(True, k)}

    def __getitem__(self, a: Atom) -> Formula:
        return self._map[a]

    def __iter__(self):
        return iter(self._map)

    def __len__(self):
        return len(self._map)

    def __eq__(self, other):
        if isinstance(other, Substitution):
            return self._map == other._map
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __repr__(self):
        body = ", ".join(f"{k}: {to_text(v)}" for k, v in sorted(self._map.items()))
        return f"Substitution({{{body}}})"

    def image(self, a: Atom) -> Formula:
        return self._map.get(a, Lit(True, a))

    @property
    def is_atomic_level(self) -> bool:
        return all(isinstance(v, Lit) and v.positive for v in self._map.values())

    def __call__(self, f: Formula) -> Formula:
        return substitute(self, f)

    def compose(self, first: "Substitution") -> "Substitution":
        """``self ∘ first``: apply ``first``, then ``self``."""
        out = {a: substitute(self, v) for a, v in first._map.items()}
        for a, v in self._map.items():
            out.setdefault(a, v)
        return Substitution(out)


def substitute(sigma: Mapping[Atom, Formula], f: Formula) -> Formula:
    if isinstance(f, Lit):
        if f.atom.is_logical:
            return f
        img = sigma.get(f.atom)
        if img is None:
            return f
        return img if f.positive else negate(img)
    return type(f)(substitute(sigma, f.left), substitute(sigma, f.right))


def match_instance(pattern: Formula, target: Formula,
                   binding: Optional[Dict[Atom, Formula]] = None) -> Optional[Substitution]:
    """The substitution taking ``pattern`` to ``target``, if there is one.

    Every atom occurrence of the pattern pins the image of its atom; all
    occurrences must agree.  ``binding`` lets callers thread one map through
    several formulas (it is updated in place).
    """
    b: Dict[Atom, Formula] = {} if binding is None else binding
    if not _match(pattern, target, b):
        return None
    return Substitution(b)


def _match(p, t, b) -> bool:
    if isinstance(p, Lit):
        if p.atom.is_logical:
            return p == t
        img = t if p.positive else negate(t)
        old = b.get(p.atom)
        if old is None:
            b[p.atom] = img
            return True
        return old == img
    if type(p) is not type(t):
        return False
    return _match(p.left, t.left, b) and _match(p.right, t.right, b)


class FreshAtoms:
    """Generator of atoms from the reserved ``_g<n>`` / ``_e<n>`` spaces."""

    def __init__(self, avoid=(), elementary: bool = False):
        self._prefix = "_e" if elementary else "_g"
        self._sort = Sort.ELEMENTARY if elementary else Sort.GENERAL
        self._avoid = {a.name for a in avoid}
        self._n = 0

    def __call__(self) -> Atom:
        while True:
            self._n += 1
            name = f"{self._prefix}{self._n}"
            if name not in self._avoid:
                return Atom(name, self._sort)


# ---------------------------------------------------------------------------
# printing

_PREC = {Disj: 1, Conj: 2, ChDisj: 3, ChConj: 4}
_SYM = {Disj: "|", Conj: "&", ChDisj: "+", ChConj: "*"}


def _prec(f) -> int:
    return 5 if isinstance(f, Lit) else _PREC[type(f)]


def to_text(f: Formula) -> str:
    """Canonical text with the fewest parentheses that still round-trips."""
    if isinstance(f, Lit):
        return f.atom.name if f.positive else "!" + f.atom.name
    p = _PREC[type(f)]
    left = to_text(f.left)
    right = to_text(f.right)
    if _prec(f.left) < p:
        left = f"({left})"
    if _prec(f.right) <= p:
        right = f"({right})"
    return f"{left} {_SYM[type(f)]} {right}"


# ``print`` is the name used throughout the docs; keep the builtin reachable.
print_formula = to_text


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<op>[!&|*+()])
  | (?P<const>\$[TF])
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)


def _tokenize(text: str, reserved: bool) -> List[Tuple[str, str, int]]:
    toks = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        val = m.group()
        if kind == "name":
            if val.startswith("_"):
                if not (reserved and _RESERVED_RE.match(val)):
                    raise ParseError(f"reserved or malformed atom name {val!r}", i)
            elif not (_GENERAL_RE.match(val) or _ELEMENTARY_RE.match(val)):
                raise ParseError(f"malformed atom name {val!r}", i)
        if kind != "ws":
            toks.append((kind, val, i))
        i = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    # binary operator -> (precedence, constructor); higher binds tighter
    BINOPS = {"|": (1, Disj), "&": (2, Conj), "+": (3, ChDisj), "*": (4, ChConj)}

    def __init__(self, text: str, reserved: bool):
        self.toks = _tokenize(text, reserved)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, val):
        kind, v, at = self.take()
        if v != val:
            raise ParseError(f"expected {val!r}, found {v or 'end of input'!r}", at)

    def parse(self) -> Formula:
        f = self.implication()
        kind, v, at = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected {v!r}", at)
        return f

    def implication(self) -> Formula:
        left = self.binary(1)
        if self.peek()[0] == "arrow":
            self.take()
            right = self.implication()
            return implies(left, right)
        return left

    def binary(self, min_prec: int) -> Formula:
        left = self.unary()
        while True:
            kind, v, at = self.peek()
            if kind != "op" or v not in self.BINOPS:
                return left
            prec, ctor = self.BINOPS[v]
            if prec < min_prec:
                return left
            self.take()
            right = self.binary(prec + 1)
            left = ctor(left, right)

    def unary(self) -> Formula:
        kind, v, at = self.take()
        if v == "!":
            return negate(self.unary())
        if v == "(":
            f = self.implication()
            self.expect(")")
            return f
        if kind in ("name", "const"):
            return lit(v)
        raise ParseError(f"expected a formula, found {v or 'end of input'!r}", at)


def parse(text: str, reserved: bool = False) -> Formula:
    """Parse surface syntax into a negation-normal formula.

    ``reserved=True`` additionally admits the internal ``_g<n>``/``_e<n>``
    atoms (used when reading files this package wrote itself).
    """
    return _Parser(text, reserved).parse()


def parse_many(texts: Sequence[str], reserved: bool = False) -> List[Formula]:
    return [parse(t, reserved) for t in texts]


# the documented name; only shadows the builtin inside this module's namespace
print = to_text  # noqa: A001
