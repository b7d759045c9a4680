"""Classical models, occurrence-level situations, tautologies and binarity."""

from __future__ import annotations

import enum
from typing import Dict, List, Mapping, Sequence, Tuple, Union

from . import kernels
from .cirquent import Cirquent, atoms as cirquent_atoms, oliterals as cirquent_oliterals
from .errors import CapExceeded, EvaluationError
from .formula import (Atom, Conj, Disj, Formula, FreshAtoms, Lit, Sort, Substitution,
                      atoms as formula_atoms, has_choice, oliterals as formula_oliterals)

Obj = Union[Cirquent, Formula]
DEFAULT_MAX_ATOMS = 20


def object_atoms(obj: Obj) -> List[Atom]:
    """Non-logical atoms in first-occurrence order."""
    al = cirquent_atoms(obj) if isinstance(obj, Cirquent) else formula_atoms(obj)
    return [a for a in al if not a.is_logical]


def object_oliterals(obj: Obj) -> List[Tuple[bool, Atom]]:
    """(sign, atom) for each literal occurrence, in global order."""
    if isinstance(obj, Cirquent):
        return [(s, a) for _, _, s, a in cirquent_oliterals(obj)]
    return [(s, a) for _, s, a in formula_oliterals(obj)]


def _eval_formula(f: Formula, value) -> bool:
    if isinstance(f, Lit):
        s = f.atom.sort
        if s is Sort.TRUE or s is Sort.FALSE:
            v = s is Sort.TRUE
        else:
            v = bool(value(f))
        return v if f.positive else not v
    if isinstance(f, Conj):
        return _eval_formula(f.left, value) and _eval_formula(f.right, value)
    if isinstance(f, Disj):
        return _eval_formula(f.left, value) or _eval_formula(f.right, value)
    raise EvaluationError("choice connectives have no classical truth value")


def _eval(obj: Obj, value) -> int:
    if isinstance(obj, Cirquent):
        return int(all(any(_eval_formula(obj.pool[j - 1], value) for j in g)
                       for g in obj.structure))
    return int(_eval_formula(obj, value))


def eval_model(obj: Obj, model: Mapping[Atom, int]) -> int:
    """Classical truth of a formula or cirquent in a model (1 or 0)."""
    def value(lit):
        try:
            return model[lit.atom]
        except KeyError:
            raise EvaluationError(f"model has no value for atom {lit.atom}") from None
    return _eval(obj, value)


def _bits(s) -> List[int]:
    if isinstance(s, str):
        if any(ch not in "01" for ch in s):
            raise EvaluationError(f"not a bit string: {s!r}")
        return [int(ch) for ch in s]
    return [int(bool(b)) for b in s]


def eval_situation(obj: Obj, situation) -> int:
    """Occurrence-level truth: the k-th oatom reads the k-th bit."""
    bits = _bits(situation)
    n = len(object_oliterals(obj))
    if len(bits) != n:
        raise EvaluationError(f"situation has {len(bits)} bits, object has {n} oatoms")
    # leaves are read left to right; logical constants still consume a bit
    it = iter(bits)
    if isinstance(obj, Cirquent):
        vals = [_eval_seq(f, it) for f in obj.pool]
        return int(all(any(vals[j - 1] for j in g) for g in obj.structure))
    return int(_eval_seq(obj, it))


def _eval_seq(f: Formula, it) -> bool:
    """Evaluate without short-circuit so every leaf consumes exactly one bit."""
    if isinstance(f, Lit):
        b = next(it)
        s = f.atom.sort
        v = (s is Sort.TRUE) if s in (Sort.TRUE, Sort.FALSE) else bool(b)
        return v if f.positive else not v
    left = _eval_seq(f.left, it)
    right = _eval_seq(f.right, it)
    if isinstance(f, Conj):
        return left and right
    if isinstance(f, Disj):
        return left or right
    raise EvaluationError("choice connectives have no classical truth value")


def model_situation(obj: Obj, model: Mapping[Atom, int]) -> str:
    """The situation induced by a model (equal bits for equal atoms)."""
    out = []
    for _, a in object_oliterals(obj):
        if a.is_logical:
            out.append("1" if a.sort is Sort.TRUE else "0")
        else:
            out.append(str(int(bool(model[a]))))
    return "".join(out)


def is_tautology(obj: Obj, max_atoms: int = DEFAULT_MAX_ATOMS) -> bool:
    """True in every model, decided by exhaustive truth tables."""
    al = object_atoms(obj)
    if len(al) > max_atoms:
        raise CapExceeded(f"{len(al)} atoms exceed the cap of {max_atoms}")
    if len(al) > kernels.MAX_VARS:
        raise CapExceeded(f"{len(al)} atoms exceed the kernel limit of {kernels.MAX_VARS}")
    _reject_choice(obj)
    index = {a: k for k, a in enumerate(al)}
    return kernels.all_true(kernels.compile_model(obj, index), len(al))


def truth_table(obj: Obj, max_atoms: int = DEFAULT_MAX_ATOMS) -> Tuple[List[Atom], bytes]:
    al = object_atoms(obj)
    if len(al) > max_atoms:
        raise CapExceeded(f"{len(al)} atoms exceed the cap of {max_atoms}")
    _reject_choice(obj)
    index = {a: k for k, a in enumerate(al)}
    return al, kernels.table(kernels.compile_model(obj, index), len(al))


def _reject_choice(obj: Obj):
    pool = obj.pool if isinstance(obj, Cirquent) else (obj,)
    if any(has_choice(f) for f in pool):
        raise EvaluationError("choice connectives have no classical truth value")


# ---------------------------------------------------------------------------
# binarity


class Binarity(enum.Enum):
    NOT_BINARY = "not_binary"
    BINARY = "binary"
    NORMAL_BINARY = "normal_binary"


def binarity(obj: Obj) -> Binarity:
    """Logical atoms are not counted."""
    signs: Dict[Atom, List[bool]] = {}
    for s, a in object_oliterals(obj):
        if not a.is_logical:
            signs.setdefault(a, []).append(s)
    normal = True
    for ss in signs.values():
        if len(ss) > 2:
            return Binarity.NOT_BINARY
        if len(ss) == 2 and ss[0] == ss[1]:
            normal = False
    return Binarity.NORMAL_BINARY if normal else Binarity.BINARY


def is_binary(obj: Obj) -> bool:
    return binarity(obj) is not Binarity.NOT_BINARY


def is_normal_binary(obj: Obj) -> bool:
    return binarity(obj) is Binarity.NORMAL_BINARY


def _rename_occurrences(f: Formula, rename, counter) -> Formula:
    """Rebuild ``f``, asking ``rename(k, lit)`` for the k-th leaf's new literal."""
    if isinstance(f, Lit):
        k = counter[0]
        counter[0] += 1
        return rename(k, f)
    return type(f)(_rename_occurrences(f.left, rename, counter),
                   _rename_occurrences(f.right, rename, counter))


def rename_oliterals(obj: Obj, rename) -> Obj:
    """Apply ``rename(global_index, lit) -> Lit`` to every literal occurrence."""
    counter = [0]
    if isinstance(obj, Cirquent):
        return Cirquent(tuple(_rename_occurrences(f, rename, counter) for f in obj.pool),
                        obj.structure)
    return _rename_occurrences(obj, rename, counter)


def normalize_binary(b: Obj) -> Tuple[Obj, Substitution]:
    """Rename one of each same-sign occurrence pair to a fresh atom.

    Returns ``(c, sigma)`` with ``c`` normal binary and ``sigma(c) == b``.
    """
    if not is_binary(b):
        raise EvaluationError("object is not binary")
    occ = object_oliterals(b)
    seen: Dict[Atom, bool] = {}
    targets = set()
    for k, (s, a) in enumerate(occ):
        if a.is_logical:
            continue
        if a in seen and seen[a] == s:
            targets.add(k)
        seen[a] = s
    fresh = FreshAtoms(object_atoms(b))
    sigma: Dict[Atom, Formula] = {}

    def rename(k, lit):
        if k not in targets:
            return lit
        q = fresh()
        sigma[q] = Lit(True, lit.atom)
        return Lit(lit.positive, q)

    return rename_oliterals(b, rename), Substitution(sigma)
