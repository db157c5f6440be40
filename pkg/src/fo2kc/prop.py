"""Propositional formulas over integer variables.

Groundings, CNF conversion and the counting kernels all work on this little
AST.  Variables are 1-based DIMACS-style integers.
"""

from array import array


class PropNode:
    __slots__ = ()


class PVar(PropNode):
    __slots__ = ("var",)

    def __init__(self, var):
        self.var = var

    def __repr__(self):
        return "v%d" % self.var

    def __eq__(self, other):
        return isinstance(other, PVar) and other.var == self.var

    def __hash__(self):
        return hash(("v", self.var))


class PNeg(PropNode):
    __slots__ = ("child",)

    def __init__(self, child):
        self.child = child

    def __repr__(self):
        return "~%r" % (self.child,)

    def __eq__(self, other):
        return isinstance(other, PNeg) and other.child == self.child

    def __hash__(self):
        return hash(("n", self.child))


class PConj(PropNode):
    __slots__ = ("children",)

    def __init__(self, children):
        self.children = tuple(children)

    def __repr__(self):
        return "And(%s)" % ", ".join(repr(c) for c in self.children)

    def __eq__(self, other):
        return isinstance(other, PConj) and other.children == self.children

    def __hash__(self):
        return hash(("a", self.children))


class PDisj(PropNode):
    __slots__ = ("children",)

    def __init__(self, children):
        self.children = tuple(children)

    def __repr__(self):
        return "Or(%s)" % ", ".join(repr(c) for c in self.children)

    def __eq__(self, other):
        return isinstance(other, PDisj) and other.children == self.children

    def __hash__(self):
        return hash(("o", self.children))


class PConst(PropNode):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = bool(value)

    def __repr__(self):
        return "T" if self.value else "F"

    def __eq__(self, other):
        return isinstance(other, PConst) and other.value == self.value

    def __hash__(self):
        return hash(("c", self.value))


TRUE = PConst(True)
FALSE = PConst(False)


class MissingVariable(KeyError):
    """An evaluation needed a variable the assignment does not define."""


def eval_prop(formula, assignment):
    """Evaluate under a total assignment (mapping var -> bool)."""
    if isinstance(formula, PVar):
        try:
            return bool(assignment[formula.var])
        except KeyError:
            raise MissingVariable(formula.var) from None
    if isinstance(formula, PNeg):
        return not eval_prop(formula.child, assignment)
    if isinstance(formula, PConj):
        return all(eval_prop(c, assignment) for c in formula.children)
    if isinstance(formula, PDisj):
        return any(eval_prop(c, assignment) for c in formula.children)
    if isinstance(formula, PConst):
        return formula.value
    raise TypeError("not a propositional formula: %r" % (formula,))


def prop_vars(formula):
    """Set of variables occurring in the formula."""
    out = set()
    stack = [formula]
    while stack:
        f = stack.pop()
        if isinstance(f, PVar):
            out.add(f.var)
        elif isinstance(f, PNeg):
            stack.append(f.child)
        elif isinstance(f, (PConj, PDisj)):
            stack.extend(f.children)
    return out


def simplify(formula):
    """Constant-fold and flatten; logically equivalent output."""
    if isinstance(formula, (PVar, PConst)):
        return formula
    if isinstance(formula, PNeg):
        c = simplify(formula.child)
        if isinstance(c, PConst):
            return FALSE if c.value else TRUE
        if isinstance(c, PNeg):
            return c.child
        return PNeg(c)
    if isinstance(formula, PConj):
        kids = []
        for c in formula.children:
            c = simplify(c)
            if isinstance(c, PConst):
                if not c.value:
                    return FALSE
                continue
            if isinstance(c, PConj):
                kids.extend(c.children)
            else:
                kids.append(c)
        if not kids:
            return TRUE
        if len(kids) == 1:
            return kids[0]
        return PConj(kids)
    if isinstance(formula, PDisj):
        kids = []
        for c in formula.children:
            c = simplify(c)
            if isinstance(c, PConst):
                if c.value:
                    return TRUE
                continue
            if isinstance(c, PDisj):
                kids.extend(c.children)
            else:
                kids.append(c)
        if not kids:
            return FALSE
        if len(kids) == 1:
            return kids[0]
        return PDisj(kids)
    raise TypeError("not a propositional formula: %r" % (formula,))


# Postfix opcodes consumed by the counting kernels.
OP_CONST = 0
OP_LIT = 1
OP_NOT = 2
OP_AND = 3
OP_OR = 4


class Code:
    """Flat postfix program; the kernels evaluate it over assignment lanes."""

    __slots__ = ("ops", "args", "max_stack")

    def __init__(self, ops, args, max_stack):
        self.ops = ops
        self.args = args
        self.max_stack = max_stack

    def __len__(self):
        return len(self.ops)


def compile_code(formula):
    """Lower a propositional formula to postfix code (n-ary nodes chained)."""
    ops = array("i")
    args = array("i")
    depth = 0
    max_depth = 0

    def push(op, arg):
        nonlocal depth, max_depth
        ops.append(op)
        args.append(arg)
        if op in (OP_CONST, OP_LIT):
            depth += 1
            max_depth = max(max_depth, depth)
        elif op in (OP_AND, OP_OR):
            depth -= 1

    def emit(f):
        if isinstance(f, PVar):
            push(OP_LIT, f.var)
        elif isinstance(f, PConst):
            push(OP_CONST, 1 if f.value else 0)
        elif isinstance(f, PNeg):
            emit(f.child)
            push(OP_NOT, 0)
        elif isinstance(f, (PConj, PDisj)):
            combine = OP_AND if isinstance(f, PConj) else OP_OR
            if not f.children:
                push(OP_CONST, 1 if combine == OP_AND else 0)
                return
            emit(f.children[0])
            for c in f.children[1:]:
                emit(c)
                push(combine, 0)
        else:
            raise TypeError("not a propositional formula: %r" % (f,))

    emit(formula)
    return Code(ops, args, max_depth)
