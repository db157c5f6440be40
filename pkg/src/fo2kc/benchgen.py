"""Built-in benchmark sentences.

`generate` returns sentence source text in the package grammar.  The
ui-bj family takes the unary count i and binary count j as parameters; the
u4-b2 variants differ in the orientation constraint per binary predicate
(symmetric / asymmetric / free) and the interaction constraint between the
two predicates (same-direction disjoint / bidirectional disjoint / converse
coupled / overlap allowed).
"""

import re

from .syntax import parse_sentence

_RB = """\
forall x. (R(x) | B(x)) & (~R(x) | ~B(x))
forall x forall y. (E(x,y) -> E(y,x)) & (E(x,y) -> ((R(x) & B(y)) | (B(x) & R(y))))
"""

_E = """\
forall x. ~E(x,x)
forall x forall y. E(x,y) -> E(y,x)
forall x exists y. E(x,y)
"""

_P = """\
forall x exists y. P(x,y)
forall x exists y. P(y,x)
"""

_D = """\
forall x. ~E(x,x)
forall x forall y. E(x,y) -> E(y,x)
forall x exists y. ~D(x) -> (E(x,y) & D(y))
"""


def _core(i, j):
    colors = ["C%d(x)" % c for c in range(1, i + 1)]
    edges = ["E%d(x,y)" % k for k in range(1, j + 1)]
    lines = ["forall x. exactlyone[%s]" % ", ".join(colors)]
    guard = " & ".join("(~C%d(x) | ~C%d(y))" % (c, c) for c in range(1, i + 1))
    lines.append("forall x forall y. (%s) -> (%s)" % (" | ".join(edges), guard))
    for k in range(1, j + 1):
        lines.append("forall x exists y. E%d(x,y)" % k)
    return lines


def _symmetric(j):
    parts = ["(E%d(x,y) -> E%d(y,x))" % (k, k) for k in range(1, j + 1)]
    return ["forall x forall y. " + " & ".join(parts)]


def _asymmetric(j):
    parts = ["(E%d(x,y) -> ~E%d(y,x))" % (k, k) for k in range(1, j + 1)]
    return ["forall x forall y. " + " & ".join(parts)]


def _same_direction_disjoint(j):
    return ["forall x forall y. ~E%d(x,y) | ~E%d(x,y)" % (k, k2)
            for k in range(1, j + 1) for k2 in range(k + 1, j + 1)]


def _ui_bj(i, j):
    return _core(i, j) + _symmetric(j) + _same_direction_disjoint(j)


def _u4_b2_variant(suffix):
    core = _core(4, 2)
    if suffix == "ad":
        return core + _asymmetric(2) + _same_direction_disjoint(2)
    if suffix == "so":
        return core + _symmetric(2)
    if suffix == "cc":
        return core + [
            "forall x forall y. E1(x,y) -> (E2(y,x) & ~E1(y,x))",
            "forall x forall y. E2(x,y) -> (E1(y,x) & ~E2(y,x))",
        ]
    if suffix == "fd":
        return core + [
            "forall x forall y. E1(x,y) -> (~E2(x,y) & ~E2(y,x))",
            "forall x forall y. E2(x,y) -> (~E1(x,y) & ~E1(y,x))",
        ]
    if suffix == "ao":
        return core + _asymmetric(2)
    if suffix == "fo":
        return core
    raise ValueError("unknown u4-b2 variant: %s" % suffix)


_FAMILY_RE = re.compile(r"u(\d+)-b(\d+)")
_VARIANT_RE = re.compile(r"u4-b2-(ad|so|cc|fd|ao|fo)")

_FIXED = {"rb": _RB, "e": _E, "p": _P, "d": _D, "rbe": _RB + _E}


def benchmark_names():
    return ["rb", "e", "rbe", "p", "d", "ui-bj",
            "u4-b2-ad", "u4-b2-so", "u4-b2-cc", "u4-b2-fd", "u4-b2-ao",
            "u4-b2-fo"]


def generate(name, i=None, j=None):
    """Source text of a named benchmark sentence."""
    if name in _FIXED:
        return _FIXED[name]
    m = _VARIANT_RE.fullmatch(name)
    if m:
        return "\n".join(_u4_b2_variant(m.group(1))) + "\n"
    if name == "ui-bj":
        if not i or not j or i < 1 or j < 1:
            raise ValueError("ui-bj needs parameters i >= 1 and j >= 1")
        return "\n".join(_ui_bj(i, j)) + "\n"
    m = _FAMILY_RE.fullmatch(name)
    if m:
        return "\n".join(_ui_bj(int(m.group(1)), int(m.group(2)))) + "\n"
    raise ValueError("unknown benchmark: %s" % name)


def generate_sentence(name, i=None, j=None):
    return parse_sentence(generate(name, i, j))
