"""Decomposable, deterministic circuit arena and its tractable queries:
exact model counting, ordered model enumeration, conditioning, structural
verification, and c2d-style NNF serialization.

Node kinds: 'L' literal leaf, 'A' conjunction, 'O' disjunction.  TRUE is the
empty conjunction and FALSE the empty disjunction.  Size means edge count.
"""

import itertools
from dataclasses import dataclass, field

LIT = "L"
AND = "A"
OR = "O"


class VerificationError(ValueError):
    """The circuit failed structural d-DNNF verification."""


class Circuit:
    def __init__(self, num_vars, universe=None):
        self.num_vars = num_vars
        # universe: sorted tuple of variable ids counting opens the count
        # over; conditioning removes variables from it
        self.universe = tuple(range(1, num_vars + 1)) if universe is None else tuple(universe)
        self.kinds = []
        self.payload = []  # literal for L nodes, child id tuple otherwise
        self.tags = []
        self.root = None
        self._lit_nodes = {}
        self._digests = None

    # -- construction ----------------------------------------------------

    def literal(self, lit):
        """Shared leaf for a signed variable."""
        node = self._lit_nodes.get(lit)
        if node is None:
            node = self._push(LIT, lit, None)
            self._lit_nodes[lit] = node
        return node

    def conj(self, children, tag=None):
        return self._push(AND, tuple(children), tag)

    def disj(self, children, tag=None):
        return self._push(OR, tuple(children), tag)

    def _push(self, kind, payload, tag):
        self.kinds.append(kind)
        self.payload.append(payload)
        self.tags.append(tag)
        self._digests = None
        return len(self.kinds) - 1

    def children(self, node):
        return self.payload[node] if self.kinds[node] != LIT else ()

    def is_true(self, node):
        return self.kinds[node] == AND and not self.payload[node]

    def is_false(self, node):
        return self.kinds[node] == OR and not self.payload[node]

    # -- structure -------------------------------------------------------

    def reachable(self):
        """Reachable node ids in topological order (children first)."""
        seen = set()
        order = []
        stack = [(self.root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if node in seen:
                continue
            seen.add(node)
            stack.append((node, True))
            if self.kinds[node] != LIT:
                for c in reversed(self.payload[node]):
                    if c not in seen:
                        stack.append((c, False))
        return order

    def node_count(self):
        return len(self.reachable())

    def edge_count(self):
        return sum(len(self.payload[n]) for n in self.reachable()
                   if self.kinds[n] != LIT)

    def digest(self, node):
        """Variable set of the subcircuit as a bitmask (bit v-1 for var v)."""
        if self._digests is None:
            self._digests = {}
        d = self._digests.get(node)
        if d is None:
            for u in self.reachable_from(node):
                if u in self._digests:
                    continue
                if self.kinds[u] == LIT:
                    self._digests[u] = 1 << (abs(self.payload[u]) - 1)
                else:
                    acc = 0
                    for c in self.payload[u]:
                        acc |= self._digests[c]
                    self._digests[u] = acc
            d = self._digests[node]
        return d

    def reachable_from(self, node):
        seen = set()
        order = []
        stack = [(node, False)]
        while stack:
            u, expanded = stack.pop()
            if expanded:
                order.append(u)
                continue
            if u in seen:
                continue
            seen.add(u)
            stack.append((u, True))
            if self.kinds[u] != LIT:
                for c in reversed(self.payload[u]):
                    if c not in seen:
                        stack.append((c, False))
        return order


def _false_circuit(num_vars, universe=None):
    c = Circuit(num_vars, universe)
    c.root = c.disj(())
    return c


def _decision_literals(circuit, child):
    """Signed literals asserted by a decision branch: immediate literal
    children plus literals inside block-conjunct children."""
    lits = []
    if circuit.kinds[child] == LIT:
        return [circuit.payload[child]]
    if circuit.kinds[child] != AND:
        return lits
    for c in circuit.payload[child]:
        if circuit.kinds[c] == LIT:
            lits.append(circuit.payload[c])
        elif (circuit.kinds[c] == AND and circuit.tags[c]
              and circuit.tags[c][0] == "blk"):
            for cc in circuit.payload[c]:
                if circuit.kinds[cc] == LIT:
                    lits.append(circuit.payload[cc])
    return lits


EXHAUSTIVE_DETERMINISM_VARS = 20


@dataclass
class VerifyReport:
    decomposability_failures: list = field(default_factory=list)
    determinism_failures: list = field(default_factory=list)
    unverified_or_nodes: list = field(default_factory=list)

    @property
    def decomposable(self):
        return not self.decomposability_failures

    @property
    def deterministic(self):
        return not self.determinism_failures

    @property
    def fully_verified(self):
        return (self.decomposable and self.deterministic
                and not self.unverified_or_nodes)

    @property
    def ok(self):
        return self.decomposable and self.deterministic


def _sat_masks(circuit, or_node):
    """Satisfying-assignment bitmask per child over the disjunction's
    variables; used for exhaustive pairwise-inconsistency checks."""
    vars_sorted = []
    d = circuit.digest(or_node)
    v = 1
    while d:
        if d & 1:
            vars_sorted.append(v)
        d >>= 1
        v += 1
    pos = {v: i for i, v in enumerate(vars_sorted)}
    width = 1 << len(vars_sorted)
    mask = (1 << width) - 1
    from .kernels.pure import _patterns

    pats = _patterns(len(vars_sorted))
    memo = {}
    for u in circuit.reachable_from(or_node):
        kind = circuit.kinds[u]
        if kind == LIT:
            lit = circuit.payload[u]
            p = pats[pos[abs(lit)]]
            memo[u] = p if lit > 0 else p ^ mask
        elif kind == AND:
            acc = mask
            for c in circuit.payload[u]:
                acc &= memo[c]
            memo[u] = acc
        else:
            acc = 0
            for c in circuit.payload[u]:
                acc |= memo[c]
            memo[u] = acc
    return [memo[c] for c in circuit.payload[or_node]]


def verify_dnnf(circuit):
    """Check decomposability exactly and determinism structurally (decision
    nodes) or exhaustively (untagged small disjunctions); larger untagged
    disjunctions are reported as unverified rather than guessed."""
    report = VerifyReport()
    for node in circuit.reachable():
        kind = circuit.kinds[node]
        if kind == AND:
            acc = 0
            for c in circuit.payload[node]:
                d = circuit.digest(c)
                if acc & d:
                    report.decomposability_failures.append(node)
                    break
                acc |= d
        elif kind == OR:
            children = circuit.payload[node]
            if len(children) <= 1:
                continue
            tag = circuit.tags[node]
            if tag and tag[0] == "dec":
                lit_sets = [_decision_literals(circuit, c) for c in children]
                for a, b in itertools.combinations(range(len(children)), 2):
                    sa = set(lit_sets[a])
                    if not any(-lit in sa for lit in lit_sets[b]):
                        report.determinism_failures.append(node)
                        break
            elif circuit.digest(node).bit_count() <= EXHAUSTIVE_DETERMINISM_VARS:
                masks = _sat_masks(circuit, node)
                for a, b in itertools.combinations(range(len(children)), 2):
                    if masks[a] & masks[b]:
                        report.determinism_failures.append(node)
                        break
            else:
                report.unverified_or_nodes.append(node)
    return report


def model_count(circuit, verify=True):
    """Exact satisfying-assignment count over the circuit's variable
    universe (missing variables are free)."""
    if verify:
        report = verify_dnnf(circuit)
        if not report.ok:
            raise VerificationError(
                "not a verified d-DNNF: decomposability failures %s, "
                "determinism failures %s" % (report.decomposability_failures,
                                             report.determinism_failures))
    counts = {}
    for node in circuit.reachable():
        kind = circuit.kinds[node]
        if kind == LIT:
            counts[node] = 1
        elif kind == AND:
            c = 1
            for child in circuit.payload[node]:
                c *= counts[child]
            counts[node] = c
        else:
            width = circuit.digest(node).bit_count()
            total = 0
            for child in circuit.payload[node]:
                gap = width - circuit.digest(child).bit_count()
                total += counts[child] << gap
            counts[node] = total
    root_gap = len(circuit.universe) - circuit.digest(circuit.root).bit_count()
    return counts[circuit.root] << root_gap


def evaluate(circuit, assignment):
    """Truth value under a total assignment (mapping var -> bool)."""
    memo = {}
    for node in circuit.reachable():
        kind = circuit.kinds[node]
        if kind == LIT:
            lit = circuit.payload[node]
            memo[node] = bool(assignment[abs(lit)]) == (lit > 0)
        elif kind == AND:
            memo[node] = all(memo[c] for c in circuit.payload[node])
        else:
            memo[node] = any(memo[c] for c in circuit.payload[node])
    return memo[circuit.root]


def _free_var_expansions(variables):
    """All assignments of the given variables, ascending var id, False first."""
    variables = sorted(variables)
    for bits in range(1 << len(variables)):
        yield {v: bool((bits >> i) & 1) for i, v in enumerate(variables)}


def _mask_vars(mask):
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def enumerate_models(circuit, limit=None):
    """Satisfying assignments as {var: bool} dicts over the universe, in
    deterministic branch order; at most `limit` when given."""

    def gen(node):
        kind = circuit.kinds[node]
        if kind == LIT:
            lit = circuit.payload[node]
            yield {abs(lit): lit > 0}
        elif kind == AND:
            children = circuit.payload[node]

            def product(idx, acc):
                if idx == len(children):
                    yield dict(acc)
                    return
                for sub in gen(children[idx]):
                    acc.update(sub)
                    yield from product(idx + 1, acc)
                    for k in sub:
                        del acc[k]

            yield from product(0, {})
        else:
            node_digest = circuit.digest(node)
            for child in circuit.payload[node]:
                free = _mask_vars(node_digest & ~circuit.digest(child))
                for sub in gen(child):
                    for pad in _free_var_expansions(free):
                        out = dict(sub)
                        out.update(pad)
                        yield out

    def full():
        root_free = [v for v in circuit.universe
                     if not (circuit.digest(circuit.root) >> (v - 1)) & 1]
        for sub in gen(circuit.root):
            for pad in _free_var_expansions(root_free):
                out = dict(sub)
                out.update(pad)
                yield out

    stream = full()
    if limit is not None:
        stream = itertools.islice(stream, limit)
    return stream


def condition(circuit, literals):
    """Replace conditioned leaves by constants and simplify upward.

    `literals` is a {var: bool} mapping or an iterable of signed variables;
    passing both signs of one variable yields the FALSE circuit.  The
    conditioned variables leave the counting universe.
    """
    if isinstance(literals, dict):
        assignment = {int(v): bool(b) for v, b in literals.items()}
        contradictory = False
    else:
        assignment = {}
        contradictory = False
        for lit in literals:
            v = abs(int(lit))
            val = lit > 0
            if v in assignment and assignment[v] != val:
                contradictory = True
            assignment[v] = val
    universe_set = set(circuit.universe)
    for v in assignment:
        if v not in universe_set:
            raise ValueError("variable %d is not in the circuit universe" % v)
    new_universe = tuple(v for v in circuit.universe if v not in assignment)
    if contradictory:
        return _false_circuit(circuit.num_vars, new_universe)

    out = Circuit(circuit.num_vars, new_universe)
    true_node = out.conj(())
    false_node = out.disj(())
    mapping = {}
    for node in circuit.reachable():
        kind = circuit.kinds[node]
        if kind == LIT:
            lit = circuit.payload[node]
            v = abs(lit)
            if v in assignment:
                mapping[node] = true_node if assignment[v] == (lit > 0) else false_node
            else:
                mapping[node] = out.literal(lit)
        elif kind == AND:
            kids = []
            dead = False
            for c in circuit.payload[node]:
                mc = mapping[c]
                if mc == false_node:
                    dead = True
                    break
                if mc == true_node:
                    continue
                kids.append(mc)
            if dead:
                mapping[node] = false_node
            elif not kids:
                mapping[node] = true_node
            elif len(kids) == 1:
                mapping[node] = kids[0]
            else:
                mapping[node] = out.conj(kids)
        else:
            kids = []
            any_true = False
            for c in circuit.payload[node]:
                mc = mapping[c]
                if mc == true_node:
                    any_true = True
                    break
                if mc == false_node:
                    continue
                kids.append(mc)
            if any_true:
                mapping[node] = true_node
            elif not kids:
                mapping[node] = false_node
            elif len(kids) == 1:
                mapping[node] = kids[0]
            else:
                mapping[node] = out.disj(kids)
    out.root = mapping[circuit.root]
    return out


# -- NNF interchange -----------------------------------------------------


def export_nnf(circuit, sink):
    """Write the c2d-style format: header `nnf V E N`, then one node per
    line (`L lit`, `A c ids...`, `O j c ids...`), children strictly
    backward, root last.  TRUE is `A 0`, FALSE is `O 0 0`."""
    if tuple(circuit.universe) != tuple(range(1, circuit.num_vars + 1)):
        raise ValueError("only circuits over the full variable range export")
    order = circuit.reachable()
    index = {node: i for i, node in enumerate(order)}
    edges = sum(len(circuit.payload[n]) for n in order if circuit.kinds[n] != LIT)
    sink.write("nnf %d %d %d\n" % (len(order), edges, circuit.num_vars))
    for node in order:
        kind = circuit.kinds[node]
        if kind == LIT:
            sink.write("L %d\n" % circuit.payload[node])
        elif kind == AND:
            kids = circuit.payload[node]
            sink.write("A %d%s\n" % (
                len(kids), "".join(" %d" % index[c] for c in kids)))
        else:
            kids = circuit.payload[node]
            sink.write("O 0 %d%s\n" % (
                len(kids), "".join(" %d" % index[c] for c in kids)))


def import_nnf(source):
    """Parse the NNF format back into a Circuit (tags are not preserved)."""
    lines = [ln.strip() for ln in source.read().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty NNF input")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "nnf":
        raise ValueError("malformed NNF header: %r" % lines[0])
    num_nodes, num_edges, num_vars = int(head[1]), int(head[2]), int(head[3])
    if num_nodes != len(lines) - 1:
        raise ValueError("header announces %d nodes, found %d"
                         % (num_nodes, len(lines) - 1))
    circuit = Circuit(num_vars)
    ids = []
    edge_total = 0
    for lineno, line in enumerate(lines[1:]):
        parts = line.split()
        if parts[0] == "L":
            if len(parts) != 2:
                raise ValueError("malformed literal line: %r" % line)
            lit = int(parts[1])
            if not (1 <= abs(lit) <= num_vars):
                raise ValueError("literal %d out of range" % lit)
            ids.append(circuit.literal(lit))
            continue
        if parts[0] == "A":
            count, kids = int(parts[1]), [int(p) for p in parts[2:]]
        elif parts[0] == "O":
            count, kids = int(parts[2]), [int(p) for p in parts[3:]]
        else:
            raise ValueError("unknown node line: %r" % line)
        if len(kids) != count:
            raise ValueError("child count mismatch on line: %r" % line)
        for k in kids:
            if k < 0 or k >= lineno:
                raise ValueError("child reference %d not strictly backward "
                                 "on line %d" % (k, lineno + 1))
        edge_total += count
        children = tuple(ids[k] for k in kids)
        ids.append(circuit.conj(children) if parts[0] == "A"
                   else circuit.disj(children))
    if edge_total != num_edges:
        raise ValueError("header announces %d edges, found %d"
                         % (num_edges, edge_total))
    circuit.root = ids[-1]
    return circuit


def structurally_equal(a, b):
    """Equality up to node renumbering (kinds, literals, child shape)."""
    if a.num_vars != b.num_vars:
        return False
    oa, ob = a.reachable(), b.reachable()
    if len(oa) != len(ob):
        return False
    pairing = {}
    for na, nb in zip(oa, ob):
        if a.kinds[na] != b.kinds[nb]:
            return False
        if a.kinds[na] == LIT:
            if a.payload[na] != b.payload[nb]:
                return False
        else:
            ca, cb = a.payload[na], b.payload[nb]
            if len(ca) != len(cb):
                return False
            if any(pairing.get(x) != y for x, y in zip(ca, cb)):
                return False
        pairing[na] = nb
    return pairing.get(a.root) == b.root


def export_dot(circuit, sink, table=None):
    """Graphviz rendering; literal labels use the atom table when given."""
    sink.write("digraph circuit {\n")
    for node in circuit.reachable():
        kind = circuit.kinds[node]
        if kind == LIT:
            lit = circuit.payload[node]
            if table is not None:
                name = table.describe(abs(lit))
                label = name if lit > 0 else "~" + name
            else:
                label = str(lit)
            sink.write('  n%d [shape=box, label="%s"];\n' % (node, label))
        else:
            symbol = "AND" if kind == AND else "OR"
            if circuit.is_true(node):
                symbol = "TRUE"
            elif circuit.is_false(node):
                symbol = "FALSE"
            sink.write('  n%d [label="%s"];\n' % (node, symbol))
            for c in circuit.payload[node]:
                sink.write("  n%d -> n%d;\n" % (node, c))
    sink.write("}\n")
