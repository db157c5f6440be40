"""Configurations: census vectors over valid unary types.

A configuration is satisfiable when some model realizes exactly those
per-type element counts.  Satisfiability of arbitrary configurations reduces
to finitely many bounded template configurations related by the order
`preceq`; the template bound depends only on the number of existential
conjuncts.  All answers are memoized per sentence in a TemplateStore.
"""

from itertools import product

from .errors import ResourceCapError


def preceq(a, b):
    """a ⪯ b: zero entries of a force zeros in b, positive entries are ≤."""
    if len(a) != len(b):
        raise ValueError("configuration length mismatch: %d vs %d" % (len(a), len(b)))
    for x, y in zip(a, b):
        if x == 0:
            if y != 0:
                return False
        elif x > y:
            return False
    return True


def delta_bound(m):
    """Template entry bound for a sentence with m existential conjuncts."""
    return max(m * (m + 1), 2 * m + 1)


class TemplateStore:
    """Per-sentence memo store for configuration satisfiability answers."""

    def __init__(self, snf, tables):
        self.snf = snf
        self.tables = tables
        self.delta = delta_bound(snf.m)
        self.base_memo = {}
        self.capped_memo = {}
        self.stage1_memo = {}

    @property
    def q(self):
        return self.tables.q

    def default_cap(self):
        return max(self.q * self.delta, 8)

    # -- exact-census model search -------------------------------------

    def base_config_sat(self, cfg, cap=None):
        """Does a model exist whose per-type census equals cfg exactly?

        Decided by depth-first search over pair type choices with witness
        bookkeeping; independent of the extendability machinery.
        """
        cfg = tuple(cfg)
        if len(cfg) != self.q:
            raise ValueError("configuration has length %d, expected %d"
                             % (len(cfg), self.q))
        cached = self.base_memo.get(cfg)
        if cached is not None:
            return cached
        total = sum(cfg)
        limit = cap if cap is not None else self.default_cap()
        if total > limit:
            raise ResourceCapError(
                "configuration total %d exceeds the search bound %d"
                % (total, limit))
        result = self._search(cfg, total)
        self.base_memo[cfg] = result
        return result

    def _search(self, cfg, total):
        tables = self.tables
        m = self.snf.m
        full = (1 << m) - 1
        elems = []
        for t, count in enumerate(cfg):
            elems.extend([t] * count)
        if total == 0:
            return True
        if m == 0:
            # no witness obligations: pairs choose independently
            for a in range(total):
                for b in range(a + 1, total):
                    if not tables.binary_types(elems[a], elems[b]):
                        return False
            return True
        sat = [tables.beta_diag[t] for t in elems]
        if total == 1:
            return sat[0] == full
        pairs = [(a, b) for a in range(total) for b in range(a + 1, total)]
        last = len(pairs) - 1

        def dfs(idx):
            a, b = pairs[idx]
            cell = tables.binary_types(elems[a], elems[b])
            if not cell:
                return False

            # element a is complete after pair (a, total-1); the final pair
            # also completes element total-1
            def ranked(bt):
                fwd, bwd = tables.pair_beta_masks(bt.bits)
                gain = bin((fwd & ~sat[a]) | (bwd & ~sat[b])).count("1")
                return (-gain, bt.id)

            for bt in sorted(cell, key=ranked):
                fwd, bwd = tables.pair_beta_masks(bt.bits)
                old_a, old_b = sat[a], sat[b]
                sat[a] |= fwd
                sat[b] |= bwd
                ok = True
                if b == total - 1 and sat[a] != full:
                    ok = False
                if ok and idx == last and sat[b] != full:
                    ok = False
                if ok:
                    if idx == last:
                        return True
                    if dfs(idx + 1):
                        return True
                sat[a], sat[b] = old_a, old_b
            return False

        return dfs(0)

    # -- template characterization -------------------------------------

    def config_satisfiable(self, cfg):
        """Satisfiability of an arbitrary configuration via bounded templates.

        True iff some satisfiable template with the same support and entries
        in 1..min(delta, cfg_i) exists.  Memoized on the entrywise cap
        min(cfg_i, delta), which the criterion depends on exclusively.
        """
        cfg = tuple(cfg)
        if len(cfg) != self.q:
            raise ValueError("configuration has length %d, expected %d"
                             % (len(cfg), self.q))
        capped = tuple(min(c, self.delta) for c in cfg)
        cached = self.capped_memo.get(capped)
        if cached is not None:
            return cached
        support = [i for i, c in enumerate(capped) if c > 0]
        result = False
        ranges = [range(capped[i], 0, -1) for i in support]
        for choice in product(*ranges):
            template = [0] * self.q
            for i, v in zip(support, choice):
                template[i] = v
            if self.base_config_sat(tuple(template)):
                result = True
                break
        self.capped_memo[capped] = result
        return result

    def find_template(self, cfg):
        """Witnessing satisfiable template below cfg, or None."""
        cfg = tuple(cfg)
        capped = tuple(min(c, self.delta) for c in cfg)
        support = [i for i, c in enumerate(capped) if c > 0]
        ranges = [range(capped[i], 0, -1) for i in support]
        for choice in product(*ranges):
            template = [0] * self.q
            for i, v in zip(support, choice):
                template[i] = v
            if self.base_config_sat(tuple(template)):
                return tuple(template)
        return None

    # -- Stage-I extendability core ------------------------------------

    def stage1_extendable(self, partial, n):
        """Can a census prefix `partial` be completed to a model of size n?

        True iff some satisfiable template t in {0..delta}^q has support
        covering the prefix support and the remaining slots suffice:
        n - |partial| >= sum_i max(t_i - partial_i, 0).
        """
        slack = n - sum(partial)
        if slack < 0:
            return False
        cap_slack = min(slack, self.q * self.delta)
        key = (tuple(min(c, self.delta) for c in partial), cap_slack)
        cached = self.stage1_memo.get(key)
        if cached is not None:
            return cached
        capped, budget = key
        result = self._stage1_scan(capped, budget)
        self.stage1_memo[key] = result
        return result

    def _stage1_scan(self, capped, budget):
        delta = self.delta
        template = [0] * self.q

        def choices(i):
            base = capped[i]
            if base > 0:
                order = sorted(range(1, delta + 1),
                               key=lambda v: (max(v - base, 0), v))
            else:
                order = list(range(0, delta + 1))
            return order

        def dfs(i, remaining):
            if i == self.q:
                return self.base_config_sat(tuple(template))
            for v in choices(i):
                cost = max(v - capped[i], 0)
                if cost > remaining:
                    continue
                template[i] = v
                if dfs(i + 1, remaining - cost):
                    template[i] = 0
                    return True
                template[i] = 0
            return False

        return dfs(0, budget)
