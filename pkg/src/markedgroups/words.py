"""Freely reduced words over signed generator indices, plus the word grammar."""

import re
from itertools import groupby
from dataclasses import dataclass


def free_reduce(letters):
    out = []
    for x in letters:
        if x == 0:
            raise ValueError("letter 0 is not a generator")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """Reduced word; letter i stands for generator i, -i for its inverse."""

    letters: tuple
    arity: int

    def __post_init__(self):
        red = free_reduce(self.letters)
        object.__setattr__(self, "letters", red)
        if self.arity < 1:
            raise ValueError("arity must be positive")
        for x in red:
            if abs(x) > self.arity:
                raise ValueError(f"letter {x} exceeds arity {self.arity}")

    @classmethod
    def gen(cls, i, arity):
        return cls((i,), arity)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other):
        return Word(self.letters + other.letters, max(self.arity, other.arity))

    def __pow__(self, n):
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n), self.arity)

    def inverse(self):
        return Word(tuple(-x for x in reversed(self.letters)), self.arity)

    def conj(self, other):
        """other^-1 * self * other."""
        return other.inverse() * self * other

    def is_trivial(self):
        return not self.letters

    def widen(self, arity):
        return Word(self.letters, max(arity, self.arity))

    def substitute(self, images):
        """Replace generator i by the word images[i-1]."""
        out = ()
        arity = max((w.arity for w in images), default=1)
        for x in self.letters:
            w = images[abs(x) - 1]
            out += w.letters if x > 0 else w.inverse().letters
        return Word(out, arity)

    def to_text(self, names=None):
        if not self.letters:
            return "1"
        parts = []
        for x, run in groupby(self.letters):
            e = len(list(run)) * (1 if x > 0 else -1)
            name = names[abs(x) - 1] if names else f"g{abs(x)}"
            parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts)

    def __str__(self):
        return self.to_text()


def commutator(u, v):
    """[u,v] = u v u^-1 v^-1, the convention used throughout the package."""
    return u * v * u.inverse() * v.inverse()


def cyclic_reduce(w):
    """Return (conjugator u, cyclically reduced c) with w = u c u^-1."""
    letters = list(w.letters)
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == -letters[j]:
        i += 1
        j -= 1
    u = Word(tuple(letters[:i]), w.arity)
    c = Word(tuple(letters[i:j + 1]), w.arity)
    return u, c


def rotations(letters):
    return [letters[i:] + letters[:i] for i in range(len(letters))]


def canonical_cyclic(w):
    """Length-lex least rotation of a cyclically reduced word or of its inverse."""
    letters = w.letters
    inv = w.inverse().letters
    cands = rotations(letters) + rotations(inv)
    return min(cands, key=_lex_key) if cands else ()


def _lex_key(letters):
    # order 1 < -1 < 2 < -2 < ... matching the label order used by BFS
    return tuple(2 * abs(x) - (x > 0) for x in letters)


def length_lex_key(w):
    letters = w.letters if isinstance(w, Word) else w
    return (len(letters), _lex_key(letters))


def reduced_words(arity, length):
    """All reduced words of the given length, in length-lex order."""
    labels = sorted([i for i in range(1, arity + 1)] + [-i for i in range(1, arity + 1)],
                    key=lambda x: 2 * abs(x) - (x > 0))

    def rec(prefix, n):
        if n == 0:
            yield prefix
            return
        for x in labels:
            if prefix and prefix[-1] == -x:
                continue
            yield from rec(prefix + (x,), n - 1)

    yield from rec((), length)


# ---------------------------------------------------------------- grammar

class WordSyntaxError(ValueError):
    def __init__(self, msg, pos, text):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>=>|!=|[\[\](),^~=&|!*.]))")


def tokenize(text):
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise WordSyntaxError("unexpected character", pos, text)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text, lookup):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.lookup = lookup

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None, kind=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise WordSyntaxError(f"expected {value!r}", tok[2], self.text)
        if kind is not None and tok[0] != kind:
            raise WordSyntaxError(f"expected {kind}", tok[2], self.text)
        self.i += 1
        return tok

    def error(self, msg):
        raise WordSyntaxError(msg, self.peek()[2], self.text)

    # word := factor+
    def word(self):
        factors = []
        while True:
            kind, val, _ = self.peek()
            if kind == "name" or val in ("(", "[", "~") or (kind == "int" and val == "1"):
                factors.append(self.factor())
            elif val in ("*", "."):
                self.take()
            else:
                break
        if not factors:
            self.error("expected a word")
        out = ()
        for f in factors:
            out += f
        return free_reduce(out)

    def factor(self):
        kind, val, pos = self.peek()
        if val == "~":
            self.take()
            base = _inv(self.factor())
            return base
        if val == "(":
            self.take()
            base = self.word()
            self.take(")")
        elif val == "[":
            self.take()
            u = self.word()
            self.take(",")
            v = self.word()
            self.take("]")
            base = free_reduce(u + v + _inv(u) + _inv(v))
        elif kind == "int" and val == "1":
            self.take()
            base = ()
        elif kind == "name":
            self.take()
            base = self.lookup(val, pos)
        else:
            self.error("expected a generator")
        while self.peek()[1] == "^":
            self.take()
            _, n, _ = self.take(kind="int")
            n = int(n)
            base = free_reduce((base if n >= 0 else _inv(base)) * abs(n))
        return base


def _inv(letters):
    return tuple(-x for x in reversed(letters))


def _name_lookup(arity, names, text):
    table = {}
    if names:
        for i, nm in enumerate(names):
            table[nm] = i + 1

    def single(name, pos):
        if name in table:
            return table[name]
        m = re.fullmatch(r"[gx](\d+)", name)
        if m:
            i = int(m.group(1))
            if 1 <= i <= arity:
                return i
            raise WordSyntaxError(f"generator {name} exceeds arity {arity}", pos, text)
        return None

    def lookup(name, pos):
        i = single(name, pos)
        if i is not None:
            return (i,)
        # juxtaposed names without spaces, e.g. "g1g2" or "xy"
        out, k = [], 0
        while k < len(name):
            for end in range(len(name), k, -1):
                i = single(name[k:end], pos + k)
                if i is not None:
                    out.append(i)
                    k = end
                    break
            else:
                raise WordSyntaxError(f"unknown generator {name[k:]!r}", pos + k, text)
        return tuple(out)

    return lookup


def parse_word(text, arity, names=None):
    """Parse juxtaposition, ^INT, ~ (inverse) and [u,v]; returns a reduced Word."""
    p = _Parser(text, _name_lookup(arity, names, text))
    letters = p.word()
    if p.peek()[0] != "end":
        p.error("trailing input")
    return Word(letters, arity)


# ------------------------------------------------------------- sentences

@dataclass(frozen=True)
class UniversalSentence:
    """Universally quantified boolean combination of atoms w = 1."""

    nvars: int
    formula: tuple
    names: tuple = ()

    def atoms(self):
        out = []

        def walk(f):
            if f[0] == "atom":
                out.append(f[1])
            else:
                for g in f[1:]:
                    walk(g)

        walk(self.formula)
        return out

    def evaluate(self, truth):
        """truth(word) -> bool for the atom word = 1."""
        return _eval(self.formula, truth)


def _eval(f, truth):
    tag = f[0]
    if tag == "atom":
        return truth(f[1])
    if tag == "not":
        return not _eval(f[1], truth)
    if tag == "and":
        return all(_eval(g, truth) for g in f[1:])
    if tag == "or":
        return any(_eval(g, truth) for g in f[1:])
    raise ValueError(tag)


class _SentenceParser(_Parser):
    def __init__(self, text, variables):
        self.vars = list(variables) if variables else []
        self.fixed = bool(variables)
        super().__init__(text, self._var)

    def _var(self, name, pos):
        if name in self.vars:
            return (self.vars.index(name) + 1,)
        if self.fixed:
            raise WordSyntaxError(f"unknown variable {name!r}", pos, self.text)
        self.vars.append(name)
        return (len(self.vars),)

    def formula(self):
        left = self.disj()
        if self.peek()[1] == "=>":
            self.take()
            right = self.formula()
            return ("or", ("not", left), right)
        return left

    def disj(self):
        parts = [self.conj()]
        while self.peek()[1] == "|":
            self.take()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else ("or", *parts)

    def conj(self):
        parts = [self.unary()]
        while self.peek()[1] == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else ("and", *parts)

    def unary(self):
        if self.peek()[1] == "!":
            self.take()
            return ("not", self.unary())
        if self.peek()[1] == "(":
            save = self.i
            nvars = len(self.vars)
            try:
                self.take()
                f = self.formula()
                self.take(")")
                return f
            except WordSyntaxError:
                self.i = save
                del self.vars[nvars:]
        return self.atom()

    def atom(self):
        letters = self.word()
        tok = self.peek()
        if tok[1] not in ("=", "!="):
            self.error("expected '=1' or '!=1'")
        self.take()
        _, one, pos = self.take(kind="int")
        if one != "1":
            raise WordSyntaxError("atoms compare with 1", pos, self.text)
        atom = ("atom", letters)
        return atom if tok[1] == "=" else ("not", atom)


def parse_sentence(text, variables=None):
    """Parse e.g. '[x,y]=1 & [y,z]=1 => [x,z]=1'. Variables are named in order of first use."""
    p = _SentenceParser(text, variables)
    f = p.formula()
    if p.peek()[0] != "end":
        p.error("trailing input")
    n = max(len(p.vars), 1)
    f = _wrap(f, n)
    return UniversalSentence(n, f, tuple(p.vars))


def _wrap(f, n):
    if f[0] == "atom":
        return ("atom", Word(f[1], n))
    return (f[0], *(_wrap(g, n) for g in f[1:]))


# commutative transitivity needs the middle element to be nontrivial
COMMTRANS = "([x,y]=1 & [y,z]=1 & y!=1) => [x,z]=1"
COMMTRANS_LITERAL = "[x,y]=1 & [y,z]=1 => [x,z]=1"
CENTRAL_IF_BICOMMUTING = "([a,b]=1 & [a,c]=1 & [b,c]!=1) => [a,z]=1"
