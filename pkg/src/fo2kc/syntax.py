"""Two-variable first-order syntax: AST, text grammar, parser and printer.

The text format is line oriented (UTF-8): one quantified conjunct per line,
`#` starts a comment, and an optional `predicates:` header pins the
vocabulary order.  Example::

    predicates: R/1, B/1, E/2
    forall x. (R(x) | B(x)) & (~R(x) | ~B(x))
    forall x forall y. E(x,y) -> E(y,x)

Only the variables x and y exist; constants and function symbols do not.
"""

import re
from dataclasses import dataclass


class ParseError(ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = "line %d, column %d: %s" % (line, column, message)
        super().__init__(message)


class Vocabulary:
    """Ordered predicate symbols; declaration order fixes the global index."""

    def __init__(self, predicates=()):
        self.predicates = []
        self._index = {}
        for name, arity in predicates:
            self.add(name, arity)

    def add(self, name, arity):
        if arity not in (1, 2):
            raise ValueError("arity of %s must be 1 or 2, got %d" % (name, arity))
        if name in self._index:
            idx = self._index[name]
            if self.predicates[idx][1] != arity:
                raise ValueError("predicate %s redeclared with arity %d" % (name, arity))
            return idx
        idx = len(self.predicates)
        self.predicates.append((name, arity))
        self._index[name] = idx
        return idx

    def index(self, name):
        return self._index[name]

    def __contains__(self, name):
        return name in self._index

    def name(self, idx):
        return self.predicates[idx][0]

    def arity(self, idx):
        return self.predicates[idx][1]

    def __len__(self):
        return len(self.predicates)

    def unary(self):
        return [i for i, (_, a) in enumerate(self.predicates) if a == 1]

    def binary(self):
        return [i for i, (_, a) in enumerate(self.predicates) if a == 2]

    def copy(self):
        return Vocabulary(self.predicates)

    def fresh_name(self, stem):
        if stem not in self._index:
            return stem
        k = 1
        while "%s%d" % (stem, k) in self._index:
            k += 1
        return "%s%d" % (stem, k)

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and other.predicates == self.predicates

    def __repr__(self):
        return "Vocabulary(%r)" % (self.predicates,)


@dataclass(frozen=True)
class Atom:
    pred: int
    args: tuple


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Or:
    children: tuple


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


Formula = (Atom, Not, And, Or, Implies, Iff)


@dataclass(frozen=True)
class Conjunct:
    """One quantified line: prefix of ('forall'|'exists', var) pairs + body."""

    prefix: tuple
    body: "Formula"


@dataclass(frozen=True)
class Sentence:
    vocabulary: Vocabulary
    conjuncts: tuple


def formula_vars(f):
    """Variables occurring in a quantifier-free formula."""
    if isinstance(f, Atom):
        return set(f.args)
    if isinstance(f, Not):
        return formula_vars(f.child)
    if isinstance(f, (And, Or)):
        out = set()
        for c in f.children:
            out |= formula_vars(c)
        return out
    if isinstance(f, (Implies, Iff)):
        return formula_vars(f.left) | formula_vars(f.right)
    raise TypeError("not a formula: %r" % (f,))


def subst_vars(f, mapping):
    """Rename variables of a quantifier-free formula."""
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(mapping.get(a, a) for a in f.args))
    if isinstance(f, Not):
        return Not(subst_vars(f.child, mapping))
    if isinstance(f, And):
        return And(tuple(subst_vars(c, mapping) for c in f.children))
    if isinstance(f, Or):
        return Or(tuple(subst_vars(c, mapping) for c in f.children))
    if isinstance(f, Implies):
        return Implies(subst_vars(f.left, mapping), subst_vars(f.right, mapping))
    if isinstance(f, Iff):
        return Iff(subst_vars(f.left, mapping), subst_vars(f.right, mapping))
    raise TypeError("not a formula: %r" % (f,))


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<lpar>\()|(?P<rpar>\))|(?P<lbrack>\[)|(?P<rbrack>\])"
    r"|(?P<comma>,)|(?P<dot>\.)|(?P<neg>~)|(?P<and>&)|(?P<or>\|)"
    r"|(?P<iff><->)|(?P<imp>->)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))"
)


class _Parser:
    def __init__(self, vocabulary):
        self.vocab = vocabulary
        self.tokens = []
        self.pos = 0
        self.line_no = 0

    def error(self, message, token=None):
        if token is None:
            token = self.peek()
        col = token[2] if token else 1
        raise ParseError(message, self.line_no, col)

    def tokenize(self, line, line_no):
        self.line_no = line_no
        self.tokens = []
        self.pos = 0
        i = 0
        while i < len(line):
            m = _TOKEN_RE.match(line, i)
            if not m or m.end() == m.start():
                stripped = line[i:].lstrip()
                if not stripped:
                    break
                col = len(line) - len(stripped) + 1
                raise ParseError("unexpected character %r" % stripped[0], line_no, col)
            kind = m.lastgroup
            text = m.group(kind)
            self.tokens.append((kind, text, m.start(kind) + 1))
            i = m.end()

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, kind=None, text=None):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of line", self.line_no,
                             len(self.tokens) and self.tokens[-1][2] or 1)
        if kind is not None and tok[0] != kind:
            self.error("expected %s" % kind, tok)
        if text is not None and tok[1] != text:
            self.error("expected %r" % text, tok)
        self.pos += 1
        return tok

    def parse_conjunct(self):
        prefix = []
        seen = set()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "ident" or tok[1] not in ("forall", "exists"):
                break
            kind = self.take()[1]
            var_tok = self.take("ident")
            var = var_tok[1]
            if var not in ("x", "y"):
                self.error("variable must be x or y, got %r" % var, var_tok)
            if var in seen:
                self.error("variable %s bound twice" % var, var_tok)
            seen.add(var)
            prefix.append((kind, var))
        if not prefix:
            self.error("conjunct must start with a quantifier")
        self.take("dot")
        body = self.parse_iff()
        tok = self.peek()
        if tok is not None:
            self.error("trailing input", tok)
        free = formula_vars(body) - seen
        if free:
            raise ParseError("free variable %s" % min(free), self.line_no, 1)
        return Conjunct(tuple(prefix), body)

    def parse_iff(self):
        left = self.parse_implies()
        while self.peek() and self.peek()[0] == "iff":
            self.take("iff")
            left = Iff(left, self.parse_implies())
        return left

    def parse_implies(self):
        left = self.parse_or()
        if self.peek() and self.peek()[0] == "imp":
            self.take("imp")
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self):
        items = [self.parse_and()]
        while self.peek() and self.peek()[0] == "or":
            self.take("or")
            items.append(self.parse_and())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def parse_and(self):
        items = [self.parse_unary()]
        while self.peek() and self.peek()[0] == "and":
            self.take("and")
            items.append(self.parse_unary())
        return items[0] if len(items) == 1 else And(tuple(items))

    def parse_unary(self):
        tok = self.peek()
        if tok and tok[0] == "neg":
            self.take("neg")
            return Not(self.parse_unary())
        return self.parse_atomic()

    def parse_atomic(self):
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of line")
        if tok[0] == "lpar":
            self.take("lpar")
            body = self.parse_iff()
            self.take("rpar")
            return body
        if tok[0] == "ident" and tok[1] == "exactlyone":
            return self.parse_exactlyone()
        if tok[0] == "ident":
            return self.parse_atom()
        self.error("expected an atom, '~' or '('", tok)

    def parse_exactlyone(self):
        self.take("ident")
        self.take("lbrack")
        atoms = [self.parse_atom()]
        while self.peek() and self.peek()[0] == "comma":
            self.take("comma")
            atoms.append(self.parse_atom())
        self.take("rbrack")
        parts = [Or(tuple(atoms)) if len(atoms) > 1 else atoms[0]]
        for i in range(len(atoms)):
            for j in range(i + 1, len(atoms)):
                parts.append(Or((Not(atoms[i]), Not(atoms[j]))))
        return And(tuple(parts)) if len(parts) > 1 else parts[0]

    def parse_atom(self):
        name_tok = self.take("ident")
        name = name_tok[1]
        if name in ("forall", "exists", "exactlyone"):
            self.error("%r is a keyword" % name, name_tok)
        self.take("lpar")
        args = [self._parse_var()]
        if self.peek() and self.peek()[0] == "comma":
            self.take("comma")
            args.append(self._parse_var())
        if self.peek() and self.peek()[0] == "comma":
            self.error("predicates take at most 2 arguments", self.peek())
        self.take("rpar")
        if name in self.vocab and self.vocab.arity(self.vocab.index(name)) != len(args):
            self.error("predicate %s used with inconsistent arity" % name, name_tok)
        try:
            idx = self.vocab.add(name, len(args))
        except ValueError as exc:
            self.error(str(exc), name_tok)
        return Atom(idx, tuple(args))

    def _parse_var(self):
        tok = self.take("ident")
        if tok[1] not in ("x", "y"):
            self.error("variable must be x or y, got %r" % tok[1], tok)
        return tok[1]


_HEADER_RE = re.compile(r"^\s*predicates\s*:\s*(.*)$")


def parse_sentence(text):
    """Parse sentence source text into a Sentence."""
    vocab = Vocabulary()
    parser = _Parser(vocab)
    conjuncts = []
    saw_conjunct = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        header = _HEADER_RE.match(line)
        if header:
            if saw_conjunct or len(vocab):
                raise ParseError("predicates header must come first", line_no, 1)
            for part in header.group(1).split(","):
                part = part.strip()
                m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\s*/\s*([12])", part)
                if not m:
                    raise ParseError("bad predicate declaration %r" % part, line_no, 1)
                vocab.add(m.group(1), int(m.group(2)))
            continue
        parser.tokenize(line, line_no)
        conjuncts.append(parser.parse_conjunct())
        saw_conjunct = True
    return Sentence(vocab, tuple(conjuncts))


_PREC = {Atom: 6, Not: 5, And: 4, Or: 3, Implies: 2, Iff: 1}


def format_formula(f, vocab, need=0):
    prec = _PREC[type(f)]
    if isinstance(f, Atom):
        s = "%s(%s)" % (vocab.name(f.pred), ",".join(f.args))
    elif isinstance(f, Not):
        s = "~" + format_formula(f.child, vocab, 5)
    elif isinstance(f, And):
        s = " & ".join(format_formula(c, vocab, 5) for c in f.children)
    elif isinstance(f, Or):
        s = " | ".join(format_formula(c, vocab, 4) for c in f.children)
    elif isinstance(f, Implies):
        s = "%s -> %s" % (
            format_formula(f.left, vocab, 3),
            format_formula(f.right, vocab, 2),
        )
    else:
        s = "%s <-> %s" % (
            format_formula(f.left, vocab, 1),
            format_formula(f.right, vocab, 2),
        )
    if prec < need:
        return "(" + s + ")"
    return s


def format_sentence(sentence, header=True):
    """Render a Sentence in the text grammar; parses back to an equal value."""
    lines = []
    if header:
        decls = ", ".join("%s/%d" % (n, a) for n, a in sentence.vocabulary.predicates)
        if decls:
            lines.append("predicates: " + decls)
    for conj in sentence.conjuncts:
        prefix = " ".join("%s %s" % (kind, var) for kind, var in conj.prefix)
        lines.append("%s. %s" % (prefix, format_formula(conj.body, sentence.vocabulary)))
    return "\n".join(lines) + "\n"
