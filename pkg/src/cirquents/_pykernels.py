"""Pure-Python truth-table kernels.

Rows are packed into one big integer per variable (bit r = value in row r),
so a whole truth table is evaluated with a handful of bignum operations.
Row r assigns variable j the bit ``(r >> (n-1-j)) & 1``: variable 0 is the
most significant bit of the row index.

Programs are flat postfix int sequences of (opcode, argument) pairs:
0 VAR j, 1 NVAR j, 2 CONST b, 3 AND, 4 OR.
"""

from functools import lru_cache

MAX_VARS = 30


@lru_cache(maxsize=64)
def _columns(n):
    rows = 1 << n
    full = (1 << rows) - 1
    cols = []
    for j in range(n):
        p = 1 << (n - 1 - j)
        block = ((1 << p) - 1) << p
        repunit = full // ((1 << (2 * p)) - 1)
        cols.append(block * repunit)
    return full, tuple(cols)


def _check(n):
    if not 0 <= n <= MAX_VARS:
        raise ValueError(f"variable count {n} outside 0..{MAX_VARS}")


def _eval(prog, n):
    full, cols = _columns(n)
    stack = []
    push = stack.append
    for pc in range(0, len(prog), 2):
        op = prog[pc]
        arg = prog[pc + 1]
        if op == 0:
            push(cols[arg])
        elif op == 1:
            push(full ^ cols[arg])
        elif op == 2:
            push(full if arg else 0)
        elif op == 3:
            b = stack.pop()
            stack[-1] &= b
        else:
            b = stack.pop()
            stack[-1] |= b
    return stack[0], full, cols


def _violations(pairs, full, cols):
    bad = 0
    for x, y in pairs:
        bad |= cols[x] & (full ^ cols[y])
    return bad


def all_true(prog, nvars, pairs=()):
    """True iff the program holds in every row where bit x <= bit y for all pairs."""
    _check(nvars)
    v, full, cols = _eval(prog, nvars)
    return (v | _violations(pairs, full, cols)) == full


def _to_bytes(v, n):
    rows = 1 << n
    bits = format(v, f"0{rows}b")[::-1]
    return bits.encode("ascii").translate(_BIT_TO_BYTE)


_BIT_TO_BYTE = bytes.maketrans(b"01", b"\x00\x01")
_BYTE_TO_BIT = bytes.maketrans(b"\x00\x01", b"01")


def table(prog, nvars):
    """Truth table as ``bytes`` of 0/1, one entry per row."""
    _check(nvars)
    v, _, _ = _eval(prog, nvars)
    return _to_bytes(v, nvars)


def all_true_table(tbl, nvars, pairs=()):
    """Like :func:`all_true` for an explicit table."""
    _check(nvars)
    full, cols = _columns(nvars)
    v = int(bytes(tbl).translate(_BYTE_TO_BIT)[::-1], 2) if tbl else 0
    return (v | _violations(pairs, full, cols)) == full
