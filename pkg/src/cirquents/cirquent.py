"""Cirquents: a pool of formulas plus a structure of groups over it.

Groups hold 1-based pool indices and are kept as sorted tuples.  Both the
pool and the structure are positional, so equal formulas or equal groups
may repeat.

Text form::

    [ F1 ; F2 ; F3 ] {1 2} {2 3}

``[]`` is the empty cirquent and ``{}`` an empty group.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import CirquentError, ParseError
from .formula import (Atom, Formula, OccRef, Substitution, atoms as formula_atoms,
                      oliterals as formula_oliterals, parse as parse_formula,
                      substitute, to_text, _match)

Group = Tuple[int, ...]


@dataclass(frozen=True)
class Cirquent:
    pool: Tuple[Formula, ...]
    structure: Tuple[Group, ...]

    def __post_init__(self):
        k = len(self.pool)
        for g in self.structure:
            for j in g:
                if not 1 <= j <= k:
                    raise CirquentError(f"group index {j} outside pool 1..{k}")

    def __str__(self):
        return to_cirquent_text(self)

    def __len__(self):
        return len(self.pool)

    @property
    def groups(self) -> Tuple[Group, ...]:
        return self.structure


def _norm_group(g: Iterable[int]) -> Group:
    return tuple(sorted(set(g)))


def make(pool: Sequence[Formula], structure: Sequence[Iterable[int]]) -> Cirquent:
    """Validated constructor; groups are deduplicated and sorted."""
    pool = tuple(parse_formula(f) if isinstance(f, str) else f for f in pool)
    return Cirquent(pool, tuple(_norm_group(g) for g in structure))


EMPTY = Cirquent((), ())


def embed_formula(f: Formula) -> Cirquent:
    return Cirquent((f,), ((1,),))


def singleton_formula(c: Cirquent) -> Optional[Formula]:
    """The formula F when ``c`` is the singleton cirquent of F."""
    if len(c.pool) == 1 and c.structure == ((1,),):
        return c.pool[0]
    return None


# ---------------------------------------------------------------------------
# structural edits


def merge_ogroups(c: Cirquent, i: int) -> Cirquent:
    """Replace ogroups ``i`` and ``i+1`` by their union."""
    s = c.structure
    if not 1 <= i < len(s):
        raise CirquentError(f"cannot merge ogroups {i},{i + 1} of {len(s)}")
    merged = _norm_group(s[i - 1] + s[i])
    return Cirquent(c.pool, s[:i - 1] + (merged,) + s[i + 1:])


def _reindex_merge(j: int, i: int) -> int:
    return j if j <= i else j - 1


def merge_oformulas(c: Cirquent, i: int, h: Formula) -> Cirquent:
    """Replace oformulas ``i`` and ``i+1`` by ``h``, redirecting their arcs."""
    if not 1 <= i < len(c.pool):
        raise CirquentError(f"cannot merge oformulas {i},{i + 1} of {len(c.pool)}")
    pool = c.pool[:i - 1] + (h,) + c.pool[i + 1:]
    structure = tuple(_norm_group(_reindex_merge(j, i) for j in g) for g in c.structure)
    return Cirquent(pool, structure)


def is_primitive(c: Cirquent) -> bool:
    seen = set()
    for g in c.structure:
        for j in g:
            if j in seen:
                return False
            seen.add(j)
    return True


def homeless(c: Cirquent) -> List[int]:
    """Pool indices contained in no group."""
    used = {j for g in c.structure for j in g}
    return [j for j in range(1, len(c.pool) + 1) if j not in used]


def atoms(c: Cirquent) -> List[Atom]:
    seen: Dict[Atom, None] = {}
    for f in c.pool:
        for a in formula_atoms(f):
            seen.setdefault(a, None)
    return list(seen)


def oliterals(c: Cirquent) -> List[Tuple[int, OccRef, bool, Atom]]:
    """Global oliteral sequence: (pool index, path, sign, atom) in order."""
    out = []
    for idx, f in enumerate(c.pool, 1):
        for path, sign, a in formula_oliterals(f):
            out.append((idx, path, sign, a))
    return out


def substitute_cirquent(sigma, c: Cirquent) -> Cirquent:
    return Cirquent(tuple(substitute(sigma, f) for f in c.pool), c.structure)


def match_cirquent_instance(pattern: Cirquent, target: Cirquent) -> Optional[Substitution]:
    """One substitution taking every oformula of ``pattern`` to ``target``'s."""
    if pattern.structure != target.structure or len(pattern.pool) != len(target.pool):
        return None
    b: Dict[Atom, Formula] = {}
    for p, t in zip(pattern.pool, target.pool):
        if not _match(p, t, b):
            return None
    return Substitution(b)


# ---------------------------------------------------------------------------
# sequents


@dataclass(frozen=True)
class Sequent:
    formulas: Tuple[Formula, ...]

    def __post_init__(self):
        if not self.formulas:
            raise CirquentError("a sequent must be nonempty")

    def __str__(self):
        return " , ".join(to_text(f) for f in self.formulas)

    def __len__(self):
        return len(self.formulas)


def sequent(*formulas) -> Sequent:
    return Sequent(tuple(parse_formula(f) if isinstance(f, str) else f for f in formulas))


def parse_sequent(text: str, reserved: bool = False) -> Sequent:
    parts = [p for p in text.split(",")]
    if not text.strip() or any(not p.strip() for p in parts):
        raise ParseError("empty formula in sequent", 0)
    return Sequent(tuple(parse_formula(p, reserved) for p in parts))


def sequent_to_cirquent(s: Sequent) -> Cirquent:
    return Cirquent(tuple(s.formulas), (tuple(range(1, len(s.formulas) + 1)),))


def cirquent_group_to_sequent(c: Cirquent, g: int) -> Sequent:
    if not is_primitive(c):
        raise CirquentError("cirquent is not primitive")
    if not 1 <= g <= len(c.structure):
        raise CirquentError(f"no ogroup {g}")
    return Sequent(tuple(c.pool[j - 1] for j in c.structure[g - 1]))


# ---------------------------------------------------------------------------
# text format

_GROUP_RE = re.compile(r"\{([^{}]*)\}")


def to_cirquent_text(c: Cirquent) -> str:
    if not c.pool:
        pool = "[]"
    else:
        pool = "[ " + " ; ".join(to_text(f) for f in c.pool) + " ]"
    groups = " ".join("{" + " ".join(map(str, g)) + "}" for g in c.structure)
    return f"{pool} {groups}" if groups else pool


def parse_cirquent(text: str, reserved: bool = False) -> Cirquent:
    s = text.strip()
    if not s.startswith("["):
        raise ParseError("cirquent must start with '['", 0)
    close = s.find("]")
    if close < 0:
        raise ParseError("unterminated pool", len(s))
    inner = s[1:close]
    pool: List[Formula] = []
    if inner.strip():
        offset = text.find("[") + 1
        for part in inner.split(";"):
            if not part.strip():
                raise ParseError("empty pool entry", offset)
            try:
                pool.append(parse_formula(part, reserved))
            except ParseError as e:
                pos = None if e.position is None else offset + e.position
                raise ParseError(str(e).split(" (at position")[0], pos) from None
            offset += len(part) + 1
    rest = s[close + 1:]
    groups = []
    pos = 0
    for m in _GROUP_RE.finditer(rest):
        if rest[pos:m.start()].strip():
            raise ParseError(f"unexpected text {rest[pos:m.start()].strip()!r}", close + 1 + pos)
        body = m.group(1).split()
        try:
            groups.append([int(x) for x in body])
        except ValueError:
            raise ParseError(f"bad group {m.group()!r}", close + 1 + m.start()) from None
        pos = m.end()
    if rest[pos:].strip():
        raise ParseError(f"unexpected text {rest[pos:].strip()!r}", close + 1 + pos)
    try:
        return make(pool, groups)
    except CirquentError as e:
        raise ParseError(str(e), close + 1) from None


# ---------------------------------------------------------------------------
# rendering


def render(c: Cirquent, format: str = "ascii") -> str:
    if format == "ascii":
        return _render_ascii(c)
    if format == "dot":
        return _render_dot(c)
    raise ValueError(f"unknown render format {format!r}")


def _render_ascii(c: Cirquent) -> str:
    labels = [to_text(f) for f in c.pool]
    gap = 3
    centers = []
    col = 0
    for lab in labels:
        centers.append(col + len(lab) // 2)
        col += len(lab) + gap
    width = max(col - gap, 1)
    ng = len(c.structure)
    if ng:
        # spread markers over the same width, widening when crowded
        width = max(width, 2 * ng - 1)
        if ng == 1:
            gcols = [width // 2] if labels else [0]
        else:
            gcols = [round(k * (width - 1) / (ng - 1)) for k in range(ng)]
    else:
        gcols = []
    line = "-" * (width + 2)
    formula_row = " " + "   ".join(labels)
    if not ng:
        return line if not labels else "\n".join([line, formula_row])
    nrows = 3
    rows = [[" "] * (width + 2) for _ in range(nrows)]
    for gi, g in enumerate(c.structure):
        for j in g:
            fc, gc = centers[j - 1] + 1, gcols[gi] + 1
            ch = "|" if fc == gc else ("\\" if gc > fc else "/")
            for r in range(nrows):
                x = round(fc + (gc - fc) * (r + 0.5) / nrows)
                cur = rows[r][x]
                rows[r][x] = ch if cur in (" ", ch) else "x"
    markers = [" "] * (width + 2)
    for gc in gcols:
        markers[gc + 1] = "*"
    out = [line, formula_row] + ["".join(r).rstrip() for r in rows]
    out.append("".join(markers).rstrip())
    return "\n".join(out)


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _render_dot(c: Cirquent) -> str:
    lines = ["digraph cirquent {", "  rankdir=BT;"]
    for i, f in enumerate(c.pool, 1):
        lines.append(f'  f{i} [shape=box, label="{_dot_escape(to_text(f))}"];')
    for g in range(1, len(c.structure) + 1):
        lines.append(f"  g{g} [shape=point];")
    for g, members in enumerate(c.structure, 1):
        for j in members:
            lines.append(f"  g{g} -> f{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
