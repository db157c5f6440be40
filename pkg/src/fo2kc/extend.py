"""Extendability checks: can a partial type assignment still reach a model?

Stage I reduces to a scan over bounded census templates.  Stage II reduces
to configuration satisfiability of a domain-independent bookkeeping sentence
built once per compilation: fresh predicates mark the pivot element (T), the
elements whose pair with the pivot is already fixed (Q and the binary D),
and the elements still owed a witness for each existential conjunct (Z_k).
"""

from dataclasses import dataclass, field

from .config import TemplateStore
from .syntax import And, Atom, Conjunct, Implies, Not, Or, Sentence
from .snf import to_snf
from .types import TypeTables


class CompileState:
    """Mutable per-compilation context: unary choices, processed pair
    choices, the witness matrix, and the partial census."""

    def __init__(self, n, tables):
        self.n = n
        self.tables = tables
        self.m = tables.snf.m
        self.full = (1 << self.m) - 1
        self.unary_choice = [None] * n
        self.pair_choice = {}
        self.partial = [0] * tables.q
        self.assigned = 0
        # satisfied[l] is a bitmask over existential conjuncts with a witness
        self.satisfied = [0] * n

    def assign_unary(self, i, t):
        """Choose unary type t for element i (1-based)."""
        self.unary_choice[i - 1] = t
        self.partial[t] += 1
        self.assigned += 1
        self.satisfied[i - 1] = self.tables.beta_diag[t]

    def retract_unary(self, i):
        t = self.unary_choice[i - 1]
        self.unary_choice[i - 1] = None
        self.partial[t] -= 1
        self.assigned -= 1
        self.satisfied[i - 1] = 0

    def assign_pair(self, i, j, bits):
        """Choose binary type bits for the pair (i, j); returns an undo token."""
        fwd, bwd = self.tables.pair_beta_masks(bits)
        old = (self.satisfied[i - 1], self.satisfied[j - 1])
        self.satisfied[i - 1] |= fwd
        self.satisfied[j - 1] |= bwd
        self.pair_choice[(i, j)] = bits
        return old

    def retract_pair(self, i, j, undo):
        self.satisfied[i - 1], self.satisfied[j - 1] = undo
        del self.pair_choice[(i, j)]

    def recompute_satisfaction(self):
        """Witness matrix rebuilt from scratch (consistency spot-checks)."""
        out = [0] * self.n
        for idx, t in enumerate(self.unary_choice):
            if t is not None:
                out[idx] = self.tables.beta_diag[t]
        for (i, j), bits in self.pair_choice.items():
            fwd, bwd = self.tables.pair_beta_masks(bits)
            out[i - 1] |= fwd
            out[j - 1] |= bwd
        return out


def extendable_stage1(state, store):
    """Stage-I check for the census prefix currently in `state`."""
    return store.stage1_extendable(tuple(state.partial), state.n)


@dataclass
class AuxSentence:
    """Bookkeeping sentence for Stage-II checks plus its cached tables."""

    snf: "SnfSentence"
    tables: TypeTables
    store: TemplateStore
    base_tables: TypeTables
    t_pred: int
    q_pred: int
    d_pred: int
    z_preds: tuple
    _z_index: dict = field(default_factory=dict)
    _w_index: dict = field(default_factory=dict)
    _unary_map: dict = field(default_factory=dict)

    def map_unary(self, base_type, pivot, row_done, z_mask):
        """Aux unary type id for a base type with the given flags, or None
        when the combination is invalid (such contexts cannot extend)."""
        key = (base_type, pivot, row_done, z_mask)
        try:
            return self._unary_map[key]
        except KeyError:
            pass
        base_layout = self.base_tables.layout
        layout = self.tables.layout
        base_bits = self.base_tables.unary[base_type].bits
        m = self.base_tables.snf.m
        bits = 0
        for slot, (kind, p) in enumerate(layout.unary_slots):
            if kind == "u":
                if p == self.t_pred:
                    value = pivot
                elif p == self.q_pred:
                    value = row_done
                elif p in self._z_index:
                    value = (z_mask >> self._z_index[p]) & 1
                else:
                    value = (base_bits >> base_layout.u_slot[p]) & 1
            else:
                if p == self.d_pred:
                    value = pivot  # D(x,x) holds exactly on the pivot
                elif p in self._w_index:
                    # witness-closure diagonal: Z_k(x) -> beta_k(x,x) & ~D(x,x)
                    k = self._w_index[p]
                    z = (z_mask >> k) & 1
                    beta = (self.base_tables.beta_diag[base_type] >> k) & 1
                    value = (not z) or (beta and not pivot)
                else:
                    value = (base_bits >> base_layout.d_slot[p]) & 1
            if value:
                bits |= 1 << slot
        result = self.tables.unary_index.get(bits)
        self._unary_map[key] = result
        return result


def build_aux_sentence(snf, base_tables=None, cap=None):
    """Construct the Stage-II bookkeeping sentence and its tables."""
    if base_tables is None:
        base_tables = TypeTables(snf)
    vocab = snf.vocabulary.copy()
    t_pred = vocab.add(vocab.fresh_name("_T"), 1)
    q_pred = vocab.add(vocab.fresh_name("_Q"), 1)
    d_pred = vocab.add(vocab.fresh_name("_D"), 2)
    z_preds = tuple(
        vocab.add(vocab.fresh_name("_Z%d" % (k + 1)), 1) for k in range(snf.m))

    x, y = "x", "y"
    conjuncts = []
    if snf.phi != And(()):
        conjuncts.append(Conjunct((("forall", x), ("forall", y)), snf.phi))
    conjuncts.append(Conjunct(
        (("forall", x), ("forall", y)),
        Implies(And((Atom(t_pred, (x,)), Atom(q_pred, (y,)))),
                And((Atom(d_pred, (x, y)), Atom(d_pred, (y, x)))))))
    conjuncts.append(Conjunct(
        (("forall", x), ("forall", y)),
        Implies(Atom(d_pred, (x, y)),
                Or((And((Atom(t_pred, (x,)), Atom(q_pred, (y,)))),
                    And((Atom(t_pred, (y,)), Atom(q_pred, (x,)))))))))
    for k, beta in enumerate(snf.betas):
        conjuncts.append(Conjunct(
            (("forall", x), ("exists", y)),
            Implies(Atom(z_preds[k], (x,)),
                    And((Atom(beta, (x, y)), Not(Atom(d_pred, (x, y))))))))

    aux_snf = to_snf(Sentence(vocab, tuple(conjuncts)))
    kwargs = {} if cap is None else {"cap": cap}
    tables = TypeTables(aux_snf, **kwargs)
    return AuxSentence(
        snf=aux_snf,
        tables=tables,
        store=TemplateStore(aux_snf, tables),
        base_tables=base_tables,
        t_pred=t_pred,
        q_pred=q_pred,
        d_pred=d_pred,
        z_preds=z_preds,
        _z_index={p: k for k, p in enumerate(z_preds)},
        _w_index={p: k for k, p in enumerate(aux_snf.betas)},
    )


def induced_aux_config(state, aux, i, j):
    """Census over {e_i..e_n} for the bookkeeping sentence, after the pair
    (i, j) has been chosen; None when some element maps to no valid type."""
    counts = [0] * aux.tables.q
    full = state.full
    for elem in range(i, state.n + 1):
        pivot = 1 if elem == i else 0
        row_done = 1 if i <= elem <= j else 0
        z_mask = (~state.satisfied[elem - 1]) & full
        tid = aux.map_unary(state.unary_choice[elem - 1], pivot, row_done, z_mask)
        if tid is None:
            return None
        counts[tid] += 1
    return tuple(counts)


def extendable_stage2(state, aux, pair):
    """Stage-II check after the pair's binary type was applied to `state`."""
    i, j = pair
    cfg = induced_aux_config(state, aux, i, j)
    if cfg is None:
        return False
    return aux.store.config_satisfiable(cfg)
