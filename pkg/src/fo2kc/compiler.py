"""Two-stage compilation of normalized sentences into block-ordered
circuits: first branch on unary types per element, then on binary types per
element pair in lexicographic order, pruning branches that cannot extend to
a model and reusing subcircuits whose residual subproblems coincide.

Cache keys: Stage I keys on the sequence of unary equivalence-class ids of
the choices so far; Stage II keys on the witness matrix plus the valid-cell
contents of all unprocessed pairs.  Equal keys imply logically equivalent
subcircuits, so cache hits redirect edges to the cached root.
"""

import sys
import time
from dataclasses import dataclass, field

from .circuit import Circuit
from .config import TemplateStore
from .extend import (
    CompileState,
    build_aux_sentence,
    extendable_stage1,
    extendable_stage2,
    induced_aux_config,
)
from .ground import AtomTable
from .types import SLOT_CAP, TypeTables


@dataclass
class CompileOptions:
    enable_stage1_cache: bool = True
    enable_stage2_cache: bool = True
    enable_postprocess: bool = True
    enable_stats: bool = False


@dataclass
class CompileStats:
    stage1_expanded: int = 0
    stage2_expanded: int = 0
    stage1_lookups: int = 0
    stage1_hits: int = 0
    stage2_lookups: int = 0
    stage2_hits: int = 0
    extend_checks_stage1: int = 0
    extend_fail_stage1: int = 0
    extend_checks_stage2: int = 0
    extend_fail_stage2: int = 0
    nodes_before: int = 0
    edges_before: int = 0
    nodes_after: int = 0
    edges_after: int = 0
    seconds: float = 0.0

    @property
    def expanded_calls(self):
        return self.stage1_expanded + self.stage2_expanded

    def to_text(self):
        pairs = [
            ("stage1_expanded", self.stage1_expanded),
            ("stage2_expanded", self.stage2_expanded),
            ("stage1_lookups", self.stage1_lookups),
            ("stage1_hits", self.stage1_hits),
            ("stage2_lookups", self.stage2_lookups),
            ("stage2_hits", self.stage2_hits),
            ("extend_checks_stage1", self.extend_checks_stage1),
            ("extend_fail_stage1", self.extend_fail_stage1),
            ("extend_checks_stage2", self.extend_checks_stage2),
            ("extend_fail_stage2", self.extend_fail_stage2),
            ("nodes_before", self.nodes_before),
            ("edges_before", self.edges_before),
            ("nodes_after", self.nodes_after),
            ("edges_after", self.edges_after),
            ("seconds", "%.6f" % self.seconds),
        ]
        return "\n".join("%s=%s" % kv for kv in pairs) + "\n"


class CompilerContext:
    """Domain-independent precomputation for one sentence: type tables,
    template store and the Stage-II bookkeeping sentence.  Reusable across
    domain sizes."""

    def __init__(self, snf, slot_cap=SLOT_CAP):
        self.snf = snf
        self.tables = TypeTables(snf, slot_cap)
        self.store = TemplateStore(snf, self.tables)
        self.aux = build_aux_sentence(snf, self.tables, cap=slot_cap)


def cache_key_stage1(tables, state, i):
    """Level plus unary-class ids of the elements chosen so far."""
    class_ids = tables.class_ids
    return (i, tuple(class_ids[t] for t in state.unary_choice[: i - 1]))


def cache_key_stage2(tables, state, pairs, p):
    """Pair position, witness matrix, and the valid-cell content of every
    unprocessed pair (elementwise unary types enter only through those)."""
    choice = state.unary_choice
    matrix = tuple(
        tables.cell_content_id(choice[a - 1], choice[b - 1])
        for a, b in pairs[p:])
    return (p, tuple(state.satisfied), matrix)


def compile_circuit(snf, n, options=None, context=None, trace=None):
    """Compile the grounding of a normalized sentence over n elements.

    Returns (circuit, atom_table, stats).  The circuit is deterministic and
    decomposable by construction and logically equivalent to the grounding;
    an unsatisfiable grounding yields the empty-disjunction circuit.
    """
    options = options or CompileOptions()
    ctx = context or CompilerContext(snf)
    tables, store, aux = ctx.tables, ctx.store, ctx.aux
    start = time.perf_counter()
    table = AtomTable(snf.vocabulary, n)
    circuit = Circuit(table.num_vars)
    stats = CompileStats()

    needed_depth = n + n * n // 2 + 100
    if sys.getrecursionlimit() < needed_depth:
        sys.setrecursionlimit(needed_depth)

    if snf.requires_nonempty and n == 0:
        # an exists-only conjunct is unsatisfiable over the empty domain
        circuit.root = circuit.disj((), tag=("dec", 0))
        stats.seconds = time.perf_counter() - start
        return circuit, table, stats

    state = CompileState(n, tables)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    true_node = circuit.conj(())
    stage1_cache = {}
    stage2_cache = {}
    conjunct_cache = {}

    def block_conjunct(block_idx, var_list, bits):
        key = (block_idx, bits)
        node = conjunct_cache.get(key)
        if node is None:
            kids = tuple(
                circuit.literal(v if (bits >> s) & 1 else -v)
                for s, v in enumerate(var_list))
            node = circuit.conj(kids, tag=("blk", block_idx))
            conjunct_cache[key] = node
        return node

    def decision(branches, block_idx):
        if len(branches) == 1:
            return branches[0]
        return circuit.disj(branches, tag=("dec", block_idx))

    def stage1(i):
        if i > n:
            return stage2(0)
        key = None
        if options.enable_stage1_cache:
            key = cache_key_stage1(tables, state, i)
            stats.stage1_lookups += 1
            node = stage1_cache.get(key)
            if node is not None:
                stats.stage1_hits += 1
                return node
        stats.stage1_expanded += 1
        block_idx = i - 1
        var_list = table.elem_block(i)
        branches = []
        for t in range(tables.q):
            state.assign_unary(i, t)
            stats.extend_checks_stage1 += 1
            ok = extendable_stage1(state, store)
            if trace is not None:
                trace("stage1", (i,), tables.unary[t].bits,
                      tuple(state.partial), ok)
            if ok:
                child = stage1(i + 1)
                branches.append(circuit.conj(
                    (block_conjunct(block_idx, var_list, tables.unary[t].bits),
                     child),
                    tag=("dec", block_idx)))
            else:
                stats.extend_fail_stage1 += 1
            state.retract_unary(i)
        node = decision(branches, block_idx)
        if key is not None:
            stage1_cache[key] = node
        return node

    def stage2(p):
        if p >= len(pairs):
            return true_node
        key = None
        if options.enable_stage2_cache:
            key = cache_key_stage2(tables, state, pairs, p)
            stats.stage2_lookups += 1
            node = stage2_cache.get(key)
            if node is not None:
                stats.stage2_hits += 1
                return node
        stats.stage2_expanded += 1
        i, j = pairs[p]
        block_idx = n + p
        var_list = table.blocks[block_idx][2]
        t_i = state.unary_choice[i - 1]
        t_j = state.unary_choice[j - 1]
        branches = []
        for bt in tables.binary_types(t_i, t_j):
            undo = state.assign_pair(i, j, bt.bits)
            stats.extend_checks_stage2 += 1
            ok = extendable_stage2(state, aux, (i, j))
            if trace is not None:
                trace("stage2", (i, j), bt.bits,
                      induced_aux_config(state, aux, i, j), ok)
            if ok:
                child = stage2(p + 1)
                branches.append(circuit.conj(
                    (block_conjunct(block_idx, var_list, bt.bits), child),
                    tag=("dec", block_idx)))
            else:
                stats.extend_fail_stage2 += 1
            state.retract_pair(i, j, undo)
        node = decision(branches, block_idx)
        if key is not None:
            stage2_cache[key] = node
        return node

    circuit.root = stage1(1)
    stats.nodes_before = circuit.node_count()
    stats.edges_before = circuit.edge_count()
    if stats.expanded_calls > stats.edges_before + 1:
        raise AssertionError(
            "expanded-call bound violated: %d calls > %d edges + 1"
            % (stats.expanded_calls, stats.edges_before))
    if options.enable_postprocess:
        circuit = postprocess(circuit)
        stats.nodes_after = circuit.node_count()
        stats.edges_after = circuit.edge_count()
    else:
        stats.nodes_after = stats.nodes_before
        stats.edges_after = stats.edges_before
    stats.seconds = time.perf_counter() - start
    return circuit, table, stats


def postprocess(circuit):
    """Splice every non-root conjunction/disjunction that has exactly one
    parent of the same kind into that parent (breadth-first from the root);
    logically equivalent, never adds edges."""
    from collections import deque

    reachable = circuit.reachable()
    children = {}
    parents = {}
    for node in reachable:
        if circuit.kinds[node] != "L":
            children[node] = list(circuit.payload[node])
            for c in circuit.payload[node]:
                parents.setdefault(c, set()).add(node)

    removed = set()
    queue = deque([circuit.root])
    visited = {circuit.root}
    while queue:
        u = queue.popleft()
        for c in children.get(u, ()):
            if c not in visited:
                visited.add(c)
                queue.append(c)
        if u == circuit.root or circuit.kinds[u] == "L":
            continue
        us_parents = parents.get(u, set())
        if len(us_parents) != 1:
            continue
        (p,) = us_parents
        if p in removed or circuit.kinds[p] != circuit.kinds[u]:
            continue
        idx = children[p].index(u)
        merged = children[p][:idx] + children[u] + children[p][idx + 1:]
        seen = set()
        deduped = []
        for c in merged:
            if c not in seen:
                seen.add(c)
                deduped.append(c)
        children[p] = deduped
        for c in children[u]:
            ps = parents.get(c)
            if ps is not None:
                ps.discard(u)
                ps.add(p)
        removed.add(u)
        del children[u]

    out = Circuit(circuit.num_vars, circuit.universe)
    mapping = {}
    stack = [(circuit.root, False)]
    seen = set()
    while stack:
        node, expanded = stack.pop()
        if expanded:
            if circuit.kinds[node] == "L":
                mapping[node] = out.literal(circuit.payload[node])
            else:
                kids = tuple(mapping[c] for c in children[node])
                if circuit.kinds[node] == "A":
                    mapping[node] = out.conj(kids, tag=circuit.tags[node])
                else:
                    mapping[node] = out.disj(kids, tag=circuit.tags[node])
            continue
        if node in seen:
            continue
        seen.add(node)
        stack.append((node, True))
        if circuit.kinds[node] != "L":
            for c in reversed(children[node]):
                if c not in seen:
                    stack.append((c, False))
    out.root = mapping[circuit.root]
    return out
