"""Backend selection for the truth-table kernels plus program compilation.

The compiled extension is used when it was built and importable; setting
``CIRQUENTS_PURE_PYTHON=1`` forces the pure-Python fallback.  ``BACKEND``
names the active one (``"cython"`` or ``"python"``).
"""

import os

from . import _pykernels

VAR, NVAR, CONST, AND, OR = range(5)

if os.environ.get("CIRQUENTS_PURE_PYTHON") == "1":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
        BACKEND = "python"

MAX_VARS = _impl.MAX_VARS
all_true = _impl.all_true
table = _impl.table
all_true_table = _impl.all_true_table


def backend(name):
    """The kernel module for ``name`` (``"python"`` or ``"cython"``)."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels
        return _ckernels
    raise ValueError(name)


# ---------------------------------------------------------------------------
# compilation of formulas / cirquents into postfix programs


def _emit_formula(f, var_of, out):
    """Append the program for ``f``; ``var_of(leaf_index, lit)`` gives the variable."""
    from .formula import Conj, Disj, Lit, Sort

    counter = [0]

    def go(g):
        if isinstance(g, Lit):
            k = counter[0]
            counter[0] += 1
            s = g.atom.sort
            if s is Sort.TRUE or s is Sort.FALSE:
                val = (s is Sort.TRUE) == g.positive
                out.extend((CONST, 1 if val else 0))
            else:
                out.extend((VAR if g.positive else NVAR, var_of(k, g)))
            return
        if not isinstance(g, (Conj, Disj)):
            raise ValueError("choice connectives have no classical truth table")
        go(g.left)
        go(g.right)
        out.extend((AND if isinstance(g, Conj) else OR, 0))

    go(f)
    return counter[0]


def _emit_cirquent(pool, structure, emit, out):
    """AND over groups of OR over members; ``emit(i, out)`` writes oformula i."""
    if not structure:
        out.extend((CONST, 1))
        return
    for gi, g in enumerate(structure):
        if not g:
            out.extend((CONST, 0))
        else:
            for k, j in enumerate(g):
                emit(j, out)
                if k:
                    out.extend((OR, 0))
        if gi:
            out.extend((AND, 0))


def compile_model(obj, atom_index):
    """Program over atoms (``atom_index`` maps Atom -> variable)."""
    from .cirquent import Cirquent

    out = []
    var_of = lambda k, lit: atom_index[lit.atom]  # noqa: E731
    if isinstance(obj, Cirquent):
        _emit_cirquent(obj.pool, obj.structure,
                       lambda j, o: _emit_formula(obj.pool[j - 1], var_of, o), out)
    else:
        _emit_formula(obj, var_of, out)
    return out


def compile_situation(obj):
    """Program over oliteral occurrences (one variable per oatom, in order).

    Returns ``(program, nvars)``.
    """
    from .cirquent import Cirquent

    out = []
    if isinstance(obj, Cirquent):
        offsets = []
        total = 0
        scratch = []
        for f in obj.pool:
            offsets.append(total)
            total += _emit_formula(f, lambda k, lit: 0, scratch)

        def emit(j, o):
            base = offsets[j - 1]
            _emit_formula(obj.pool[j - 1], lambda k, lit: base + k, o)

        _emit_cirquent(obj.pool, obj.structure, emit, out)
        return out, total
    n = _emit_formula(obj, lambda k, lit: k, out)
    return out, n
