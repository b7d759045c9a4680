# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled truth-table kernels (same contract as ``_pykernels``).

Rows are processed 64 at a time: bit t of block b is row 64*b + t.
"""

from libc.stdint cimport uint64_t, int32_t
from libc.stdlib cimport malloc, free

DEF ALL = 0xFFFFFFFFFFFFFFFF

MAX_VARS = 30

cdef uint64_t PAT[6]
PAT[0] = 0xAAAAAAAAAAAAAAAA
PAT[1] = 0xCCCCCCCCCCCCCCCC
PAT[2] = 0xF0F0F0F0F0F0F0F0
PAT[3] = 0xFF00FF00FF00FF00
PAT[4] = 0xFFFF0000FFFF0000
PAT[5] = 0xFFFFFFFF00000000


cdef inline uint64_t _col(int j, int n, Py_ssize_t b) nogil:
    cdef int k = n - 1 - j
    if k >= 6:
        return ALL if (b >> (k - 6)) & 1 else 0
    return PAT[k]


cdef uint64_t _eval_block(const int32_t* prog, Py_ssize_t plen, int n, Py_ssize_t b,
                          uint64_t* stack) nogil:
    cdef Py_ssize_t pc
    cdef int sp = 0
    cdef int32_t op, arg
    for pc in range(0, plen, 2):
        op = prog[pc]
        arg = prog[pc + 1]
        if op == 0:
            stack[sp] = _col(arg, n, b)
            sp += 1
        elif op == 1:
            stack[sp] = ~_col(arg, n, b)
            sp += 1
        elif op == 2:
            stack[sp] = ALL if arg else 0
            sp += 1
        elif op == 3:
            sp -= 1
            stack[sp - 1] &= stack[sp]
        else:
            sp -= 1
            stack[sp - 1] |= stack[sp]
    return stack[0]


cdef class _Buf:
    cdef int32_t* prog
    cdef Py_ssize_t plen
    cdef int32_t* pairs
    cdef Py_ssize_t npairs
    cdef uint64_t* stack

    def __cinit__(self, prog, pairs, int n):
        cdef Py_ssize_t k
        self.plen = len(prog)
        self.npairs = len(pairs)
        self.prog = <int32_t*> malloc((self.plen + 1) * sizeof(int32_t))
        self.pairs = <int32_t*> malloc((2 * self.npairs + 1) * sizeof(int32_t))
        self.stack = <uint64_t*> malloc((self.plen // 2 + 1) * sizeof(uint64_t))
        if not self.prog or not self.pairs or not self.stack:
            raise MemoryError()
        for k in range(self.plen):
            self.prog[k] = prog[k]
            if k % 2 == 1 and self.prog[k - 1] <= 1 and not 0 <= self.prog[k] < n:
                raise ValueError(f"variable {self.prog[k]} out of range")
        k = 0
        for x, y in pairs:
            if not (0 <= x < n and 0 <= y < n):
                raise ValueError("pair variable out of range")
            self.pairs[k] = x
            self.pairs[k + 1] = y
            k += 2

    def __dealloc__(self):
        free(self.prog)
        free(self.pairs)
        free(self.stack)


cdef inline uint64_t _bad(_Buf buf, int n, Py_ssize_t b) nogil:
    cdef uint64_t bad = 0
    cdef Py_ssize_t k
    for k in range(buf.npairs):
        bad |= _col(buf.pairs[2 * k], n, b) & ~_col(buf.pairs[2 * k + 1], n, b)
    return bad


cdef inline uint64_t _mask(int n):
    if n >= 6:
        return ALL
    return ((<uint64_t> 1) << (1 << n)) - 1


def _check(int n):
    if not 0 <= n <= MAX_VARS:
        raise ValueError(f"variable count {n} outside 0..{MAX_VARS}")


def all_true(prog, int nvars, pairs=()):
    _check(nvars)
    cdef _Buf buf = _Buf(prog, pairs, nvars)
    cdef Py_ssize_t nblocks = 1 if nvars < 6 else (<Py_ssize_t> 1) << (nvars - 6)
    cdef uint64_t mask = _mask(nvars)
    cdef Py_ssize_t b
    cdef bint ok = True
    with nogil:
        for b in range(nblocks):
            if ((_eval_block(buf.prog, buf.plen, nvars, b, buf.stack) | _bad(buf, nvars, b)) & mask) != mask:
                ok = False
                break
    return ok


def table(prog, int nvars):
    _check(nvars)
    cdef _Buf buf = _Buf(prog, (), nvars)
    cdef Py_ssize_t rows = (<Py_ssize_t> 1) << nvars
    cdef Py_ssize_t nblocks = 1 if nvars < 6 else rows >> 6
    cdef Py_ssize_t b, t, width = 64 if nvars >= 6 else rows
    cdef uint64_t w
    out = bytearray(rows)
    cdef unsigned char* p = out
    with nogil:
        for b in range(nblocks):
            w = _eval_block(buf.prog, buf.plen, nvars, b, buf.stack)
            for t in range(width):
                p[b * 64 + t] = (w >> t) & 1
    return bytes(out)


def all_true_table(tbl, int nvars, pairs=()):
    _check(nvars)
    cdef const unsigned char[:] view = tbl
    cdef Py_ssize_t rows = (<Py_ssize_t> 1) << nvars
    if view.shape[0] != rows:
        raise ValueError("table length does not match variable count")
    cdef _Buf buf = _Buf((), pairs, nvars)
    cdef Py_ssize_t r, k
    cdef int x, y
    cdef bint consistent
    cdef bint ok = True
    with nogil:
        for r in range(rows):
            if view[r]:
                continue
            consistent = True
            for k in range(buf.npairs):
                x = (r >> (nvars - 1 - buf.pairs[2 * k])) & 1
                y = (r >> (nvars - 1 - buf.pairs[2 * k + 1])) & 1
                if x > y:
                    consistent = False
                    break
            if consistent:
                ok = False
                break
    return ok
