"""Normalization into the shape: one universal matrix over (x,y) plus a list
of single-atom existential conjuncts, with fresh binary predicates defined by
biconditionals folded into the matrix.

Models of the normalized sentence project one-to-one onto models of the
input, so counting and enumeration answers carry back unchanged.
"""

from dataclasses import dataclass, field

from .syntax import And, Atom, Conjunct, Iff, Sentence, subst_vars


class UnsupportedPrefixError(ValueError):
    """Quantifier prefix outside the supported fragment."""


@dataclass
class SnfSentence:
    vocabulary: "Vocabulary"
    phi: "Formula"  # quantifier-free matrix over x,y; And(()) when empty
    betas: tuple  # m binary predicate indices, one per existential conjunct
    aux_preds: frozenset  # predicate indices absent from the original sentence
    original: Sentence
    requires_nonempty: bool = False
    _sentence: Sentence = field(default=None, repr=False, compare=False)

    @property
    def m(self):
        return len(self.betas)

    def to_sentence(self):
        """The normal form as a plain Sentence (usable for grounding)."""
        if self._sentence is None:
            conjuncts = []
            if self.phi != And(()):
                conjuncts.append(Conjunct((("forall", "x"), ("forall", "y")), self.phi))
            for b in self.betas:
                conjuncts.append(
                    Conjunct((("forall", "x"), ("exists", "y")), Atom(b, ("x", "y"))))
            self._sentence = Sentence(self.vocabulary, tuple(conjuncts))
        return self._sentence

    def project_model(self, assignment, table):
        """Strip introduced predicates from a model of the normalized grounding."""
        out = {}
        for var, value in assignment.items():
            atom = table.atom(var)
            if atom.pred not in self.aux_preds:
                out[atom] = bool(value)
        return out


def _is_positive_xy_atom(f, vocab):
    return (isinstance(f, Atom) and f.args == ("x", "y")
            and vocab.arity(f.pred) == 2)


def to_snf(sentence):
    """Normalize a sentence; rejects exists-forall and exists-exists prefixes."""
    vocab = sentence.vocabulary.copy()
    original_count = len(vocab)
    phi_parts = []
    existentials = []
    requires_nonempty = False

    for conj in sentence.conjuncts:
        kinds = tuple(kind for kind, _ in conj.prefix)
        names = tuple(var for _, var in conj.prefix)
        if kinds == ("forall",):
            phi_parts.append(subst_vars(conj.body, {names[0]: "x"}))
        elif kinds == ("exists",):
            requires_nonempty = True
            existentials.append(subst_vars(conj.body, {names[0]: "y"}))
        elif kinds == ("forall", "forall"):
            phi_parts.append(subst_vars(conj.body, {names[0]: "x", names[1]: "y"}))
        elif kinds == ("forall", "exists"):
            existentials.append(subst_vars(conj.body, {names[0]: "x", names[1]: "y"}))
        else:
            raise UnsupportedPrefixError(
                "quantifier prefix %s is outside the supported fragment"
                % "".join("∃" if k == "exists" else "∀" for k in kinds))

    betas = []
    for k, body in enumerate(existentials):
        if _is_positive_xy_atom(body, vocab):
            betas.append(body.pred)
            continue
        name = vocab.fresh_name("_b%d" % (k + 1))
        b = vocab.add(name, 2)
        betas.append(b)
        phi_parts.append(Iff(Atom(b, ("x", "y")), body))

    phi = phi_parts[0] if len(phi_parts) == 1 else And(tuple(phi_parts))
    aux = frozenset(range(original_count, len(vocab)))
    return SnfSentence(
        vocabulary=vocab,
        phi=phi,
        betas=tuple(betas),
        aux_preds=aux,
        original=sentence,
        requires_nonempty=requires_nonempty,
    )


def project_model(snf, assignment, table):
    return snf.project_model(assignment, table)
