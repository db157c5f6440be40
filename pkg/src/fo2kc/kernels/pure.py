"""Pure-Python counting kernel.

Assignments are enumerated in wide bit-parallel lanes: the low variables are
mapped to bit positions of a big integer, and whatever does not fit is swept
by an outer loop.  Python's arbitrary-precision bitwise operations make this
surprisingly competitive with the compiled kernel.
"""

from ..prop import OP_AND, OP_CONST, OP_LIT, OP_NOT, OP_OR

# 2**16 lanes per big-int word keeps intermediate values at 8 KiB.
LANE_LOG_MAX = 16


def _patterns(lane_log):
    """Truth pattern of lane variable i across all 2**lane_log lanes."""
    width = 1 << lane_log
    pats = []
    for i in range(lane_log):
        p = ((1 << (1 << i)) - 1) << (1 << i)
        span = 1 << (i + 1)
        while span < width:
            p |= p << span
            span <<= 1
        pats.append(p)
    return pats


def count_sat(code, nvars):
    """Number of assignments of 1..nvars satisfying the postfix code."""
    lane_log = min(nvars, LANE_LOG_MAX)
    width = 1 << lane_log
    mask = (1 << width) - 1
    pats = _patterns(lane_log)
    ops = code.ops
    args = code.args
    total = 0
    for outer in range(1 << (nvars - lane_log)):
        stack = []
        push = stack.append
        pop = stack.pop
        for op, arg in zip(ops, args):
            if op == OP_LIT:
                idx = arg - 1
                if idx < lane_log:
                    push(pats[idx])
                else:
                    push(mask if (outer >> (idx - lane_log)) & 1 else 0)
            elif op == OP_AND:
                v = pop()
                stack[-1] &= v
            elif op == OP_OR:
                v = pop()
                stack[-1] |= v
            elif op == OP_NOT:
                stack[-1] ^= mask
            else:
                push(mask if arg else 0)
        total += stack[-1].bit_count()
    return total


def enum_sat(code, nvars, limit):
    """Satisfying assignments as integers (bit i-1 = value of variable i).

    Raises ValueError when more than `limit` assignments exist.
    """
    lane_log = min(nvars, LANE_LOG_MAX)
    width = 1 << lane_log
    mask = (1 << width) - 1
    pats = _patterns(lane_log)
    ops = code.ops
    args = code.args
    found = []
    for outer in range(1 << (nvars - lane_log)):
        stack = []
        push = stack.append
        pop = stack.pop
        for op, arg in zip(ops, args):
            if op == OP_LIT:
                idx = arg - 1
                if idx < lane_log:
                    push(pats[idx])
                else:
                    push(mask if (outer >> (idx - lane_log)) & 1 else 0)
            elif op == OP_AND:
                v = pop()
                stack[-1] &= v
            elif op == OP_OR:
                v = pop()
                stack[-1] |= v
            elif op == OP_NOT:
                stack[-1] ^= mask
            else:
                push(mask if arg else 0)
        r = stack[-1]
        base = outer << lane_log
        while r:
            low = r & -r
            lane = low.bit_length() - 1
            found.append(base | lane)
            if len(found) > limit:
                raise ValueError("more than %d satisfying assignments" % limit)
            r ^= low
    return found
