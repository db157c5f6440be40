"""Grounding sentences over finite domains, plus the brute-force oracle.

Ground atoms are numbered 1..V in block order: first one block per element
(unary atoms in predicate order, then diagonal atoms R(e_i,e_i) in predicate
order), then one block per element pair (i,j) with i<j in lexicographic
order (per binary predicate: R(e_i,e_j) then R(e_j,e_i)).  The compiler's
branching and the OBDD variable order both follow this numbering.
"""

from dataclasses import dataclass

from . import kernels
from .errors import ResourceCapError
from .prop import (
    FALSE,
    TRUE,
    PConj,
    PDisj,
    PNeg,
    PVar,
    compile_code,
    eval_prop,
    simplify,
)
from .syntax import And, Atom, Iff, Implies, Not, Or

BRUTE_FORCE_CAP = 30


@dataclass(frozen=True)
class GroundAtom:
    pred: int
    args: tuple


class AtomTable:
    """Bijection between ground atoms and propositional variable ids."""

    def __init__(self, vocabulary, n):
        self.vocabulary = vocabulary
        self.n = n
        self._var_of = {}
        self._atom_of = [None]  # 1-based
        self.blocks = []
        unary = vocabulary.unary()
        binary = vocabulary.binary()
        for i in range(1, n + 1):
            block = []
            for p in unary:
                block.append(self._add(GroundAtom(p, (i,))))
            for p in binary:
                block.append(self._add(GroundAtom(p, (i, i))))
            self.blocks.append(("elem", (i,), block))
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                block = []
                for p in binary:
                    block.append(self._add(GroundAtom(p, (i, j))))
                    block.append(self._add(GroundAtom(p, (j, i))))
                self.blocks.append(("pair", (i, j), block))

    def _add(self, atom):
        var = len(self._atom_of)
        self._atom_of.append(atom)
        self._var_of[atom] = var
        return var

    @property
    def num_vars(self):
        return len(self._atom_of) - 1

    def var(self, atom):
        return self._var_of[atom]

    def atom(self, var):
        return self._atom_of[var]

    def __contains__(self, atom):
        return atom in self._var_of

    def elem_block(self, i):
        return self.blocks[i - 1][2]

    def pair_block(self, i, j):
        return self.blocks[self.pair_block_index(i, j)][2]

    def pair_block_index(self, i, j):
        # lexicographic rank of (i,j) among pairs, offset past element blocks
        n = self.n
        rank = (i - 1) * n - (i - 1) * i // 2 + (j - i - 1)
        return n + rank

    def describe(self, var):
        atom = self._atom_of[var]
        name = self.vocabulary.name(atom.pred)
        return "%s(%s)" % (name, ",".join("e%d" % e for e in atom.args))


def _ground_body(f, env, table):
    if isinstance(f, Atom):
        elems = tuple(env[v] for v in f.args)
        return PVar(table.var(GroundAtom(f.pred, elems)))
    if isinstance(f, Not):
        return PNeg(_ground_body(f.child, env, table))
    if isinstance(f, And):
        return PConj(tuple(_ground_body(c, env, table) for c in f.children))
    if isinstance(f, Or):
        return PDisj(tuple(_ground_body(c, env, table) for c in f.children))
    if isinstance(f, Implies):
        return PDisj((PNeg(_ground_body(f.left, env, table)),
                      _ground_body(f.right, env, table)))
    if isinstance(f, Iff):
        left = _ground_body(f.left, env, table)
        right = _ground_body(f.right, env, table)
        return PConj((PDisj((PNeg(left), right)), PDisj((PNeg(right), left))))
    raise TypeError("not a formula: %r" % (f,))


def _ground_conjunct(prefix, body, env, table, n):
    if not prefix:
        return _ground_body(body, env, table)
    (kind, var), rest = prefix[0], prefix[1:]
    parts = []
    for e in range(1, n + 1):
        env[var] = e
        parts.append(_ground_conjunct(rest, body, env, table, n))
    env.pop(var, None)
    if kind == "forall":
        return TRUE if not parts else (parts[0] if len(parts) == 1 else PConj(parts))
    return FALSE if not parts else (parts[0] if len(parts) == 1 else PDisj(parts))


def ground(sentence, n):
    """Propositional grounding of a sentence over a domain of n elements."""
    if n < 0:
        raise ValueError("domain size must be non-negative")
    table = AtomTable(sentence.vocabulary, n)
    parts = [_ground_conjunct(c.prefix, c.body, {}, table, n)
             for c in sentence.conjuncts]
    if not parts:
        formula = TRUE
    elif len(parts) == 1:
        formula = parts[0]
    else:
        formula = PConj(parts)
    return formula, table


def eval_ground(formula, assignment):
    """Evaluate a ground formula under a total assignment (var -> bool)."""
    return eval_prop(formula, assignment)


def brute_force_count(sentence, n, cap=BRUTE_FORCE_CAP):
    """Exact model count of the grounding by exhaustive assignment scan.

    This is the oracle of record for every expected value in the test suite;
    it shares no code with the compiler.  Refuses groundings with more than
    `cap` atoms.
    """
    formula, table = ground(sentence, n)
    nvars = table.num_vars
    if nvars > cap:
        raise ResourceCapError(
            "grounding has %d atoms, brute-force cap is %d" % (nvars, cap))
    return kernels.count_sat(compile_code(simplify(formula)), nvars)


def brute_force_models(sentence, n, cap=BRUTE_FORCE_CAP, limit=1000000):
    """All models of the grounding as {var: bool} dicts, by exhaustive scan."""
    formula, table = ground(sentence, n)
    nvars = table.num_vars
    if nvars > cap:
        raise ResourceCapError(
            "grounding has %d atoms, brute-force cap is %d" % (nvars, cap))
    code = compile_code(simplify(formula))
    masks = kernels.enum_sat(code, nvars, limit)
    out = []
    for mask in masks:
        out.append({v: bool((mask >> (v - 1)) & 1) for v in range(1, nvars + 1)})
    return out
