# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernel: exhaustive bit-parallel evaluation of postfix
propositional code over all assignments.

Lane layout per assignment index: bits 0..5 select a lane inside a 64-bit
word, the next `chunk_log` bits select a word inside a chunk buffer, and the
remaining high bits are swept by an outer loop.
"""

from libc.stdlib cimport free, malloc

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #define FO2KC_POPCNT(x) __builtin_popcountll(x)
    #else
    static int FO2KC_POPCNT(unsigned long long x) {
        int c = 0;
        while (x) { x &= x - 1; c++; }
        return c;
    }
    #endif
    """
    int FO2KC_POPCNT(unsigned long long x) nogil

DEF OP_CONST = 0
DEF OP_LIT = 1
DEF OP_NOT = 2
DEF OP_AND = 3
DEF OP_OR = 4

DEF WORD_LOG = 6
DEF CHUNK_LOG_MAX = 12

cdef unsigned long long ALL_ONES = <unsigned long long> 0xFFFFFFFFFFFFFFFFULL

cdef unsigned long long[6] WORD_PAT
WORD_PAT[0] = <unsigned long long> 0xAAAAAAAAAAAAAAAAULL
WORD_PAT[1] = <unsigned long long> 0xCCCCCCCCCCCCCCCCULL
WORD_PAT[2] = <unsigned long long> 0xF0F0F0F0F0F0F0F0ULL
WORD_PAT[3] = <unsigned long long> 0xFF00FF00FF00FF00ULL
WORD_PAT[4] = <unsigned long long> 0xFFFF0000FFFF0000ULL
WORD_PAT[5] = <unsigned long long> 0xFFFFFFFF00000000ULL


cdef inline void _fill(unsigned long long *row, Py_ssize_t nwords,
                       unsigned long long value) nogil:
    cdef Py_ssize_t w
    for w in range(nwords):
        row[w] = value


cdef inline void _fill_lit(unsigned long long *row, Py_ssize_t nwords,
                           int idx, int chunk_log,
                           unsigned long long outer) nogil:
    # idx is the 0-based variable index.
    cdef Py_ssize_t w
    if idx < WORD_LOG:
        _fill(row, nwords, WORD_PAT[idx])
    elif idx < WORD_LOG + chunk_log:
        for w in range(nwords):
            if (w >> (idx - WORD_LOG)) & 1:
                row[w] = ALL_ONES
            else:
                row[w] = 0
    else:
        if (outer >> (idx - WORD_LOG - chunk_log)) & 1:
            _fill(row, nwords, ALL_ONES)
        else:
            _fill(row, nwords, 0)


def count_sat(code, int nvars):
    """Number of assignments of variables 1..nvars satisfying the code."""
    cdef int[::1] ops = code.ops
    cdef int[::1] args = code.args
    cdef Py_ssize_t nops = ops.shape[0]
    cdef int max_stack = code.max_stack

    cdef int chunk_log = nvars - WORD_LOG
    if chunk_log < 0:
        chunk_log = 0
    if chunk_log > CHUNK_LOG_MAX:
        chunk_log = CHUNK_LOG_MAX
    cdef Py_ssize_t nwords = (<Py_ssize_t> 1) << chunk_log
    cdef int outer_bits = nvars - WORD_LOG - chunk_log
    if outer_bits < 0:
        outer_bits = 0
    cdef unsigned long long n_outer = (<unsigned long long> 1) << outer_bits

    # Lanes beyond 2**nvars are garbage; mask them out of the last popcount.
    cdef unsigned long long lane_mask = ALL_ONES
    if nvars < WORD_LOG:
        lane_mask = ((<unsigned long long> 1) << (1 << nvars)) - 1

    cdef unsigned long long *stack = <unsigned long long *> malloc(
        <size_t> max_stack * nwords * sizeof(unsigned long long))
    if stack is NULL:
        raise MemoryError()

    cdef unsigned long long total = 0
    cdef unsigned long long outer
    cdef Py_ssize_t sp, i, w
    cdef int op, arg
    cdef unsigned long long *top
    cdef unsigned long long *below
    try:
        with nogil:
            for outer in range(n_outer):
                sp = 0
                for i in range(nops):
                    op = ops[i]
                    arg = args[i]
                    if op == OP_LIT:
                        _fill_lit(stack + sp * nwords, nwords, arg - 1,
                                  chunk_log, outer)
                        sp += 1
                    elif op == OP_AND:
                        top = stack + (sp - 1) * nwords
                        below = stack + (sp - 2) * nwords
                        for w in range(nwords):
                            below[w] &= top[w]
                        sp -= 1
                    elif op == OP_OR:
                        top = stack + (sp - 1) * nwords
                        below = stack + (sp - 2) * nwords
                        for w in range(nwords):
                            below[w] |= top[w]
                        sp -= 1
                    elif op == OP_NOT:
                        top = stack + (sp - 1) * nwords
                        for w in range(nwords):
                            top[w] = ~top[w]
                    else:
                        _fill(stack + sp * nwords, nwords,
                              ALL_ONES if arg else 0)
                        sp += 1
                top = stack
                for w in range(nwords):
                    total += FO2KC_POPCNT(top[w] & lane_mask)
    finally:
        free(stack)
    return total


def enum_sat(code, int nvars, object limit):
    """Satisfying assignments as integers (bit i-1 = value of variable i).

    Raises ValueError when more than `limit` assignments exist.
    """
    cdef int[::1] ops = code.ops
    cdef int[::1] args = code.args
    cdef Py_ssize_t nops = ops.shape[0]
    cdef int max_stack = code.max_stack

    cdef int chunk_log = nvars - WORD_LOG
    if chunk_log < 0:
        chunk_log = 0
    if chunk_log > CHUNK_LOG_MAX:
        chunk_log = CHUNK_LOG_MAX
    cdef Py_ssize_t nwords = (<Py_ssize_t> 1) << chunk_log
    cdef int outer_bits = nvars - WORD_LOG - chunk_log
    if outer_bits < 0:
        outer_bits = 0
    cdef unsigned long long n_outer = (<unsigned long long> 1) << outer_bits

    cdef unsigned long long lane_mask = ALL_ONES
    if nvars < WORD_LOG:
        lane_mask = ((<unsigned long long> 1) << (1 << nvars)) - 1

    cdef unsigned long long cap = limit

    cdef unsigned long long *stack = <unsigned long long *> malloc(
        <size_t> max_stack * nwords * sizeof(unsigned long long))
    if stack is NULL:
        raise MemoryError()

    found = []
    cdef unsigned long long outer, value, base, low
    cdef Py_ssize_t sp, i, w
    cdef int op, arg
    cdef unsigned long long *top
    cdef unsigned long long *below
    cdef int lane
    try:
        for outer in range(n_outer):
            sp = 0
            with nogil:
                for i in range(nops):
                    op = ops[i]
                    arg = args[i]
                    if op == OP_LIT:
                        _fill_lit(stack + sp * nwords, nwords, arg - 1,
                                  chunk_log, outer)
                        sp += 1
                    elif op == OP_AND:
                        top = stack + (sp - 1) * nwords
                        below = stack + (sp - 2) * nwords
                        for w in range(nwords):
                            below[w] &= top[w]
                        sp -= 1
                    elif op == OP_OR:
                        top = stack + (sp - 1) * nwords
                        below = stack + (sp - 2) * nwords
                        for w in range(nwords):
                            below[w] |= top[w]
                        sp -= 1
                    elif op == OP_NOT:
                        top = stack + (sp - 1) * nwords
                        for w in range(nwords):
                            top[w] = ~top[w]
                    else:
                        _fill(stack + sp * nwords, nwords,
                              ALL_ONES if arg else 0)
                        sp += 1
            for w in range(nwords):
                value = stack[w] & lane_mask
                if value == 0:
                    continue
                base = (outer << (WORD_LOG + chunk_log)) | (
                    (<unsigned long long> w) << WORD_LOG)
                while value:
                    low = value & (~value + 1)
                    lane = FO2KC_POPCNT(low - 1)
                    found.append(base | <unsigned long long> lane)
                    if (<unsigned long long> len(found)) > cap:
                        raise ValueError(
                            "more than %d satisfying assignments" % limit)
                    value ^= low
    finally:
        free(stack)
    return found
