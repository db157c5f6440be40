"""Exhaustive DPLL satisfiability and model counting over clause sets.

Used as an independent validation path (completion-satisfiability checks,
count cross-checks on DIMACS exports) next to the bit-parallel enumerator.
The counter does unit propagation, connected-component decomposition and
component caching; nothing here knows about types or circuits.
"""


def _propagate(clauses):
    """Unit-propagate. Returns (reduced set, assigned literals) or None."""
    clauses = set(clauses)
    assigned = set()
    while True:
        unit = None
        for c in clauses:
            if not c:
                return None
            if len(c) == 1:
                unit = next(iter(c))
                break
        if unit is None:
            return clauses, assigned
        assigned.add(unit)
        reduced = set()
        for c in clauses:
            if unit in c:
                continue
            if -unit in c:
                c = c - {-unit}
                if not c:
                    return None
            reduced.add(c)
        clauses = reduced


def _vars_of(clauses):
    return {abs(lit) for c in clauses for lit in c}


def _components(clauses):
    parent = {}

    def find(v):
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    for c in clauses:
        it = iter(c)
        first = abs(next(it))
        parent.setdefault(first, first)
        for lit in it:
            v = abs(lit)
            parent.setdefault(v, v)
            a, b = find(first), find(v)
            if a != b:
                parent[a] = b
    groups = {}
    for c in clauses:
        root = find(abs(next(iter(c))))
        groups.setdefault(root, []).append(c)
    return list(groups.values())


def _pick_var(clauses):
    best = min(clauses, key=lambda c: (len(c), min(abs(lit) for lit in c)))
    return min(abs(lit) for lit in best)


def _count(clauses_key, memo):
    """Model count over exactly the variables of clauses_key."""
    cached = memo.get(clauses_key)
    if cached is not None:
        return cached
    prop = _propagate(clauses_key)
    if prop is None:
        memo[clauses_key] = 0
        return 0
    clauses, assigned = prop
    freed = len(_vars_of(clauses_key)) - len(assigned) - len(_vars_of(clauses))
    result = 1 << freed
    for comp in _components(clauses):
        v = _pick_var(comp)
        comp_set = frozenset(comp)
        sub = _count(frozenset(comp_set | {frozenset((v,))}), memo) + _count(
            frozenset(comp_set | {frozenset((-v,))}), memo)
        result *= sub
        if not result:
            break
    memo[clauses_key] = result
    return result


def dpll_count(clauses, num_vars):
    """Exact number of assignments of 1..num_vars satisfying all clauses."""
    cls = frozenset(frozenset(c) for c in clauses)
    if frozenset() in cls:
        return 0
    used = _vars_of(cls)
    return _count(cls, {}) << (num_vars - len(used))


def dpll_sat(clauses):
    """Satisfiability of a clause set."""
    prop = _propagate(frozenset(frozenset(c) for c in clauses))
    if prop is None:
        return False
    clauses, _ = prop
    for comp in _components(clauses):
        v = _pick_var(comp)
        comp_set = frozenset(comp)
        if not dpll_sat(comp_set | {frozenset((v,))}) and not dpll_sat(
                comp_set | {frozenset((-v,))}):
            return False
    return True
