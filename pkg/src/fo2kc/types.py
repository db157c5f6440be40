"""Unary and binary type enumeration over the normalized matrix.

A unary type fixes one bit per unary predicate (P(x)) and one bit per binary
predicate (the diagonal R(x,x)); a binary type fixes two bits per binary
predicate (R(x,y) and R(y,x)).  Types are stored as slot bitmasks with slot 0
in the least significant bit, and enumerated in ascending bitmask order,
which fixes the configuration coordinate order once and for all.

Validity is decided by evaluating the matrix bit-parallel across all
candidate bitmasks at once (candidates are lanes of one big integer).
"""

from typing import NamedTuple

from .errors import ResourceCapError
from .kernels.pure import _patterns
from .syntax import And, Atom, Iff, Implies, Not, Or

SLOT_CAP = 24


class UnaryType(NamedTuple):
    id: int
    bits: int


class BinaryType(NamedTuple):
    id: int
    bits: int


class SlotLayout:
    """Slot positions for unary and binary type bitmasks of a vocabulary."""

    def __init__(self, vocabulary):
        self.vocabulary = vocabulary
        self.unary_slots = []  # ('u', pred) then ('d', pred)
        self.u_slot = {}
        self.d_slot = {}
        for p in vocabulary.unary():
            self.u_slot[p] = len(self.unary_slots)
            self.unary_slots.append(("u", p))
        for p in vocabulary.binary():
            self.d_slot[p] = len(self.unary_slots)
            self.unary_slots.append(("d", p))
        self.binary_slots = []  # ('f', pred) then ('b', pred), per predicate
        self.f_slot = {}
        self.b_slot = {}
        for p in vocabulary.binary():
            self.f_slot[p] = len(self.binary_slots)
            self.binary_slots.append(("f", p))
            self.b_slot[p] = len(self.binary_slots)
            self.binary_slots.append(("b", p))

    def unary_literal_text(self, slot, value):
        kind, p = self.unary_slots[slot]
        name = self.vocabulary.name(p)
        text = "%s(x)" % name if kind == "u" else "%s(x,x)" % name
        return text if value else "~" + text

    def binary_literal_text(self, slot, value):
        kind, p = self.binary_slots[slot]
        name = self.vocabulary.name(p)
        text = "%s(x,y)" % name if kind == "f" else "%s(y,x)" % name
        return text if value else "~" + text


def _eval_patterns(f, atom_fn, mask):
    """Bit-parallel evaluation of a quantifier-free formula over lanes."""
    if isinstance(f, Atom):
        return atom_fn(f)
    if isinstance(f, Not):
        return _eval_patterns(f.child, atom_fn, mask) ^ mask
    if isinstance(f, And):
        out = mask
        for c in f.children:
            out &= _eval_patterns(c, atom_fn, mask)
        return out
    if isinstance(f, Or):
        out = 0
        for c in f.children:
            out |= _eval_patterns(c, atom_fn, mask)
        return out
    if isinstance(f, Implies):
        left = _eval_patterns(f.left, atom_fn, mask)
        return (left ^ mask) | _eval_patterns(f.right, atom_fn, mask)
    if isinstance(f, Iff):
        left = _eval_patterns(f.left, atom_fn, mask)
        right = _eval_patterns(f.right, atom_fn, mask)
        return (left ^ right) ^ mask
    raise TypeError("not a quantifier-free formula: %r" % (f,))


class TypeTables:
    """Valid unary types, per-pair valid binary types, and the derived
    equivalence data used for subcircuit caching."""

    def __init__(self, snf, cap=SLOT_CAP):
        self.snf = snf
        self.layout = SlotLayout(snf.vocabulary)
        self.cap = cap
        nslots = len(self.layout.unary_slots)
        if nslots > cap:
            raise ResourceCapError(
                "unary slot count %d exceeds the enumeration cap %d"
                % (nslots, cap))
        if len(self.layout.binary_slots) > cap:
            raise ResourceCapError(
                "binary slot count %d exceeds the enumeration cap %d"
                % (len(self.layout.binary_slots), cap))
        self.unary = self._enumerate_unary()
        self.unary_index = {t.bits: t.id for t in self.unary}
        # beta_diag[t] = bitmask over k of whether the k-th witness predicate
        # holds on the diagonal in type t
        self.beta_diag = []
        for t in self.unary:
            mask = 0
            for k, b in enumerate(snf.betas):
                if (t.bits >> self.layout.d_slot[b]) & 1:
                    mask |= 1 << k
            self.beta_diag.append(mask)
        self._cells = {}
        self._cell_ids = {}
        self._pair_beta = {}
        self._class_ids = None
        self._bin_pats = None

    @property
    def q(self):
        return len(self.unary)

    def _enumerate_unary(self):
        slots = len(self.layout.unary_slots)
        pats = _patterns(slots)
        mask = (1 << (1 << slots)) - 1

        def atom_fn(atom):
            if len(atom.args) == 1:
                slot = self.layout.u_slot[atom.pred]
            else:
                slot = self.layout.d_slot[atom.pred]
            return pats[slot]

        phi = self.snf.phi
        valid = _eval_patterns(phi, atom_fn, mask) if phi != And(()) else mask
        out = []
        for bits in range(1 << slots):
            if (valid >> bits) & 1:
                out.append(UnaryType(len(out), bits))
        return out

    def binary_types(self, t1, t2):
        """Valid binary types for the ordered unary type pair (t1, t2)."""
        key = (t1, t2)
        cell = self._cells.get(key)
        if cell is not None:
            return cell
        slots = len(self.layout.binary_slots)
        if self._bin_pats is None:
            self._bin_pats = _patterns(slots)
        pats = self._bin_pats
        mask = (1 << (1 << slots)) - 1
        ubits = (self.unary[t1].bits, self.unary[t2].bits)

        def atom_fn_for(env):
            def atom_fn(atom):
                if len(atom.args) == 1:
                    elem = env[atom.args[0]]
                    slot = self.layout.u_slot[atom.pred]
                    return mask if (ubits[elem] >> slot) & 1 else 0
                a, b = (env[atom.args[0]], env[atom.args[1]])
                if a == b:
                    slot = self.layout.d_slot[atom.pred]
                    return mask if (ubits[a] >> slot) & 1 else 0
                if (a, b) == (0, 1):
                    return pats[self.layout.f_slot[atom.pred]]
                return pats[self.layout.b_slot[atom.pred]]
            return atom_fn

        phi = self.snf.phi
        if phi != And(()):
            valid = (_eval_patterns(phi, atom_fn_for({"x": 0, "y": 1}), mask)
                     & _eval_patterns(phi, atom_fn_for({"x": 1, "y": 0}), mask))
        else:
            valid = mask
        cell = []
        for bits in range(1 << slots):
            if (valid >> bits) & 1:
                cell.append(BinaryType(len(cell), bits))
        cell = tuple(cell)
        self._cells[key] = cell
        return cell

    def cell_content_id(self, t1, t2):
        """Canonical id of the literal content of a cell; two cells get the
        same id exactly when they hold the same binary types."""
        content = tuple(t.bits for t in self.binary_types(t1, t2))
        cid = self._cell_ids.get(content)
        if cid is None:
            cid = len(self._cell_ids)
            self._cell_ids[content] = cid
        return cid

    def pair_beta_masks(self, bits):
        """(forward, backward) witness masks over k for a binary type mask."""
        masks = self._pair_beta.get(bits)
        if masks is None:
            fwd = bwd = 0
            for k, b in enumerate(self.snf.betas):
                if (bits >> self.layout.f_slot[b]) & 1:
                    fwd |= 1 << k
                if (bits >> self.layout.b_slot[b]) & 1:
                    bwd |= 1 << k
            masks = (fwd, bwd)
            self._pair_beta[bits] = masks
        return masks

    @property
    def class_ids(self):
        """Unary equivalence classes: equal witness diagonals and equal
        binary-type cells (by literal content) against every unary type."""
        if self._class_ids is None:
            keys = {}
            ids = []
            for t in range(self.q):
                row = tuple(
                    tuple(bt.bits for bt in self.binary_types(t, t2))
                    for t2 in range(self.q))
                key = (self.beta_diag[t], row)
                if key not in keys:
                    keys[key] = len(keys)
                ids.append(keys[key])
            self._class_ids = ids
        return self._class_ids

    def describe_unary(self, t):
        bits = self.unary[t].bits
        return " ".join(
            self.layout.unary_literal_text(s, (bits >> s) & 1)
            for s in range(len(self.layout.unary_slots)))

    def describe_binary(self, bt):
        bits = bt.bits if isinstance(bt, BinaryType) else bt
        return " ".join(
            self.layout.binary_literal_text(s, (bits >> s) & 1)
            for s in range(len(self.layout.binary_slots)))

    def dump(self):
        """Stable text layout of all tables (golden-file friendly)."""
        lines = ["unary types (q=%d):" % self.q]
        for t in self.unary:
            lines.append("  u%d: %s" % (t.id, self.describe_unary(t.id)))
        lines.append("classes: %s" % (self.class_ids,))
        lines.append("binary types:")
        for t1 in range(self.q):
            for t2 in range(self.q):
                cell = self.binary_types(t1, t2)
                body = "; ".join(self.describe_binary(bt) for bt in cell)
                lines.append("  B(u%d,u%d): {%s}" % (t1, t2, body))
        return "\n".join(lines) + "\n"


def enumerate_unary_types(snf, cap=SLOT_CAP):
    return TypeTables(snf, cap).unary


def enumerate_binary_types(snf, t1, t2, cap=SLOT_CAP, tables=None):
    if tables is None:
        tables = TypeTables(snf, cap)
    return tables.binary_types(t1, t2)


def unary_class_partition(tables):
    return list(tables.class_ids)
