"""Ordered binary decision diagrams derived from block-structured circuits.

Each block decision node becomes a fragment testing the block's variables in
atom-table order: assignments matching a retained type route to that
branch's diagram, every other assignment routes to terminal 0.  Identical
(variable, low, high) triples are merged by default.
"""

from dataclasses import dataclass, field


class UnsupportedCircuitError(ValueError):
    """The circuit does not carry the block decision structure."""


TERM_FALSE = 0
TERM_TRUE = 1


@dataclass
class Obdd:
    num_vars: int
    nodes: list = field(default_factory=list)  # ids 0/1 are the terminals
    root: int = TERM_FALSE
    reduced: bool = True

    def var(self, node):
        if node in (TERM_FALSE, TERM_TRUE):
            return self.num_vars + 1
        return self.nodes[node][0]

    def node_count(self):
        return len(self.nodes) - 2

    def edge_count(self):
        return 2 * self.node_count()


def to_obdd(circuit, table, reduce=True):
    """Transform a compiled block-structured circuit into an OBDD over the
    atom-table variable order.  Circuits that lost their block tags (after
    conditioning, for example) are rejected."""
    obdd = Obdd(num_vars=circuit.num_vars, nodes=[None, None], reduced=reduce)
    unique = {}

    def mknode(var, lo, hi):
        if reduce and lo == hi:
            return lo
        key = (var, lo, hi)
        if reduce:
            node = unique.get(key)
            if node is None:
                node = len(obdd.nodes)
                obdd.nodes.append(key)
                unique[key] = node
            return node
        node = len(obdd.nodes)
        obdd.nodes.append(key)
        return node

    memo = {}

    def walk(node):
        mapped = memo.get(node)
        if mapped is not None:
            return mapped
        if circuit.is_true(node):
            memo[node] = TERM_TRUE
            return TERM_TRUE
        if circuit.is_false(node):
            memo[node] = TERM_FALSE
            return TERM_FALSE
        tag = circuit.tags[node]
        if not tag or tag[0] != "dec":
            raise UnsupportedCircuitError(
                "node %d lacks a block decision tag" % node)
        block_idx = tag[1]
        var_list = table.blocks[block_idx][2]
        if circuit.kinds[node] == "O":
            branch_nodes = circuit.payload[node]
        else:
            branch_nodes = (node,)
        branches = []
        for b in branch_nodes:
            if circuit.kinds[b] != "A":
                raise UnsupportedCircuitError(
                    "decision branch %d is not a conjunction" % b)
            conj = cont = None
            for c in circuit.payload[b]:
                ctag = circuit.tags[c]
                if ctag and ctag[0] == "blk" and ctag[1] == block_idx:
                    conj = c
                else:
                    cont = c
            if conj is None:
                raise UnsupportedCircuitError(
                    "decision branch %d lacks its block conjunct" % b)
            bits = []
            lits = {abs(circuit.payload[c]): circuit.payload[c] > 0
                    for c in circuit.payload[conj]}
            for v in var_list:
                if v not in lits:
                    raise UnsupportedCircuitError(
                        "block conjunct does not cover variable %d" % v)
                bits.append(lits[v])
            target = walk(cont) if cont is not None else TERM_TRUE
            branches.append((tuple(bits), target))

        def fragment(pos, remaining):
            if not remaining:
                return TERM_FALSE
            if pos == len(var_list):
                assert len(remaining) == 1
                return remaining[0][1]
            lo = fragment(pos + 1, [br for br in remaining if not br[0][pos]])
            hi = fragment(pos + 1, [br for br in remaining if br[0][pos]])
            return mknode(var_list[pos], lo, hi)

        result = fragment(0, branches)
        memo[node] = result
        return result

    obdd.root = walk(circuit.root)
    return obdd


def validate_order(obdd):
    """Variable indices must strictly increase from every node to its
    children; raises ValueError otherwise."""
    for node in range(2, len(obdd.nodes)):
        var, lo, hi = obdd.nodes[node]
        for child in (lo, hi):
            if obdd.var(child) <= var:
                raise ValueError(
                    "order violation at node %d: var %d -> child var %d"
                    % (node, var, obdd.var(child)))


def obdd_count(obdd):
    """Exact satisfying-assignment count over all num_vars variables,
    scaling skipped levels by powers of two."""
    validate_order(obdd)
    memo = {TERM_FALSE: 0, TERM_TRUE: 1}
    order = []
    stack = [obdd.root]
    seen = set()
    while stack:
        node = stack.pop()
        if node in seen or node in (TERM_FALSE, TERM_TRUE):
            continue
        seen.add(node)
        order.append(node)
        _, lo, hi = obdd.nodes[node]
        stack.extend((lo, hi))
    for node in sorted(order, key=obdd.var, reverse=True):
        var, lo, hi = obdd.nodes[node]
        total = 0
        for child in (lo, hi):
            total += memo[child] << (obdd.var(child) - var - 1)
        memo[node] = total
    return memo[obdd.root] << (obdd.var(obdd.root) - 1)


def export_obdd(obdd, sink):
    """Text dump: root and variable count on the header line, then one node
    per line `<id> <var> <lo> <hi>` with terminals written as T0/T1."""

    def ref(node):
        if node == TERM_FALSE:
            return "T0"
        if node == TERM_TRUE:
            return "T1"
        return str(node)

    sink.write("obdd root=%s vars=%d nodes=%d reduced=%d\n"
               % (ref(obdd.root), obdd.num_vars, obdd.node_count(),
                  1 if obdd.reduced else 0))
    for node in range(2, len(obdd.nodes)):
        var, lo, hi = obdd.nodes[node]
        sink.write("%d %d %s %s\n" % (node, var, ref(lo), ref(hi)))
