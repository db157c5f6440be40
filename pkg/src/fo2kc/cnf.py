"""CNF conversion and DIMACS export.

Small formulas are converted by plain distribution; above a literal-count
threshold the conversion switches to definitional (Tseitin-style) clauses
with biconditional definitions, so the clause set has exactly one model per
model of the source formula.  Auxiliary variables are numbered after all
atom variables, making the atom projection a prefix slice.
"""

from .prop import PConj, PConst, PDisj, PNeg, PVar, simplify

DIRECT_LITERAL_THRESHOLD = 4000


def _to_nnf(f, negate=False):
    if isinstance(f, PVar):
        return -f.var if negate else f.var
    if isinstance(f, PConst):
        return PConst(f.value != negate)
    if isinstance(f, PNeg):
        return _to_nnf(f.child, not negate)
    if isinstance(f, PConj):
        kids = tuple(_to_nnf(c, negate) for c in f.children)
        return PDisj(kids) if negate else PConj(kids)
    if isinstance(f, PDisj):
        kids = tuple(_to_nnf(c, negate) for c in f.children)
        return PConj(kids) if negate else PDisj(kids)
    raise TypeError("not a propositional formula: %r" % (f,))


def _direct_size(f, cap):
    """(clauses, literals) after distribution, or None when above cap."""
    if isinstance(f, int):
        return 1, 1
    if isinstance(f, PConst):
        return (0, 0) if f.value else (1, 0)
    if isinstance(f, PConj):
        clauses = literals = 0
        for c in f.children:
            sub = _direct_size(c, cap)
            if sub is None:
                return None
            clauses += sub[0]
            literals += sub[1]
            if literals > cap:
                return None
        return clauses, literals
    if isinstance(f, PDisj):
        clauses, literals = 1, 0
        for c in f.children:
            sub = _direct_size(c, cap)
            if sub is None:
                return None
            sc, sl = sub
            if sc == 0:  # a TRUE disjunct absorbs the clause set
                return 0, 0
            literals = literals * sc + sl * clauses
            clauses = clauses * sc
            if literals > cap or clauses > cap:
                return None
        return clauses, literals
    raise TypeError(f)


def _distribute(f):
    """NNF formula -> list of clauses (tuples of literals)."""
    if isinstance(f, int):
        return [(f,)]
    if isinstance(f, PConst):
        return [] if f.value else [()]
    if isinstance(f, PConj):
        out = []
        for c in f.children:
            out.extend(_distribute(c))
        return out
    if isinstance(f, PDisj):
        out = [()]
        for c in f.children:
            sub = _distribute(c)
            if not sub:  # TRUE disjunct
                return []
            out = [base + extra for base in out for extra in sub]
        return out
    raise TypeError(f)


def _tseitin(f, next_var, clauses):
    """Emit biconditional definition clauses; return the defining literal."""
    if isinstance(f, int):
        return f, next_var
    if isinstance(f, PConst):
        v = next_var
        next_var += 1
        clauses.append((v,) if f.value else (-v,))
        return v, next_var
    lits = []
    for c in f.children:
        lit, next_var = _tseitin(c, next_var, clauses)
        lits.append(lit)
    v = next_var
    next_var += 1
    if isinstance(f, PConj):
        for lit in lits:
            clauses.append((-v, lit))
        clauses.append(tuple([v] + [-lit for lit in lits]))
    else:
        for lit in lits:
            clauses.append((v, -lit))
        clauses.append(tuple([-v] + lits))
    return v, next_var


def to_clauses(formula, num_atom_vars, threshold=DIRECT_LITERAL_THRESHOLD):
    """Convert to CNF.

    Returns (clauses, total_vars).  total_vars > num_atom_vars exactly when
    definitional clauses were emitted; the extra variables are functionally
    determined, so the clause set has the same model count as the formula.
    """
    f = _to_nnf(simplify(formula))
    if isinstance(f, PConst):
        return ([] if f.value else [()]), num_atom_vars
    if isinstance(f, int):
        return [(f,)], num_atom_vars
    if _direct_size(f, threshold) is not None:
        seen = set()
        clauses = []
        for clause in _distribute(f):
            dedup = tuple(dict.fromkeys(clause))
            if any(-lit in dedup for lit in dedup):
                continue  # tautological clause
            if dedup not in seen:
                seen.add(dedup)
                clauses.append(dedup)
        return clauses, num_atom_vars
    clauses = []
    root, next_var = _tseitin(f, num_atom_vars + 1, clauses)
    clauses.append((root,))
    return clauses, next_var - 1


def export_dimacs(formula, table, sink, threshold=DIRECT_LITERAL_THRESHOLD):
    """Write the grounding as DIMACS CNF with an atom map comment block."""
    clauses, total_vars = to_clauses(formula, table.num_vars, threshold)
    for v in range(1, table.num_vars + 1):
        sink.write("c atom %d %s\n" % (v, table.describe(v)))
    if total_vars > table.num_vars:
        sink.write("c aux vars %d..%d (definitional)\n"
                   % (table.num_vars + 1, total_vars))
    sink.write("p cnf %d %d\n" % (total_vars, len(clauses)))
    for clause in clauses:
        sink.write(" ".join(str(lit) for lit in clause))
        sink.write(" 0\n" if clause else "0\n")


def parse_dimacs(text):
    """Parse DIMACS CNF text -> (clauses, num_vars)."""
    clauses = []
    num_vars = None
    current = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError("malformed problem line: %r" % raw)
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(tuple(current))
    if num_vars is None:
        raise ValueError("missing problem line")
    return clauses, num_vars
