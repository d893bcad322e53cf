"""Group descriptors such as "Z^2 x Z/6", "(F2) wr (Z)", "N2_2/5", "(Z/2)wrXGrig"."""

import re

from .models import (BaumslagSolitar, Direct, FinAbelian, Free, FreeMetabelian, FreeProd,
                     Grigorchuk, Hall, NilC2, PermWreathGrig, Wreath)


class GroupSyntaxError(ValueError):
    def __init__(self, msg, pos, text):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.pos = pos


_ATOMS = [
    ("zpow", re.compile(r"Z\^(\d+)")),
    ("zmod", re.compile(r"Z/(\d+)")),
    ("bs", re.compile(r"BS\(1,\s*(\d+)\)")),
    ("nil", re.compile(r"N2_(\d+)(?:/(\d+))?")),
    ("fm", re.compile(r"FM(\d+)")),
    ("free", re.compile(r"F(\d+)")),
    ("grig", re.compile(r"Grig")),
    ("z", re.compile(r"Z")),
    ("one", re.compile(r"1")),
]
_OPS = [("wrx", re.compile(r"wrXGrig")), ("wr", re.compile(r"wr")),
        ("x", re.compile(r"x")), ("*", re.compile(r"\*"))]


class _GroupParser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def fail(self, msg):
        raise GroupSyntaxError(msg, self.pos, self.text)

    def expr(self):
        left = self.term()
        while True:
            self.skip()
            for name, rx in _OPS:
                m = rx.match(self.text, self.pos)
                if m:
                    break
            else:
                return left
            self.pos = m.end()
            if name == "wrx":
                left = PermWreathGrig(left)
                continue
            right = self.term()
            if name == "x":
                left = _direct(left, right)
            elif name == "*":
                left = FreeProd(left, right)
            else:
                left = Wreath(left, right)

    def term(self):
        self.skip()
        if self.text.startswith("(", self.pos):
            self.pos += 1
            g = self.expr()
            self.skip()
            if not self.text.startswith(")", self.pos):
                self.fail("expected ')'")
            self.pos += 1
            return g
        if self.text.startswith("Hall(", self.pos):
            start = self.pos + 5
            end = self.text.find(")", start)
            if end < 0:
                self.fail("unterminated Hall(...)")
            from .hall import load_colouring
            self.pos = end + 1
            return Hall(load_colouring(self.text[start:end].strip()))
        for name, rx in _ATOMS:
            m = rx.match(self.text, self.pos)
            if m:
                self.pos = m.end()
                return _atom(name, m, self)
        self.fail("expected a group")


def _atom(name, m, parser):
    if name == "z":
        return FinAbelian([0])
    if name == "one":
        return FinAbelian([])
    if name == "grig":
        return Grigorchuk()
    n = int(m.group(1))
    if name == "zpow":
        return FinAbelian([0] * n)
    if name == "zmod":
        if n < 1:
            parser.fail("Z/0 is not allowed; write Z")
        return FinAbelian([] if n == 1 else [n])
    if name == "free":
        return Free(n)
    if name == "fm":
        return FreeMetabelian(n)
    if name == "bs":
        return BaumslagSolitar(n)
    if name == "nil":
        mod = int(m.group(2)) if m.group(2) else 0
        return NilC2(n, mod)
    raise AssertionError(name)


def _direct(a, b):
    if isinstance(a, FinAbelian) and isinstance(b, FinAbelian):
        return FinAbelian(a.factors + b.factors)
    return Direct(a, b)


def parse_group(text):
    """Parse a group descriptor into a model carrying its default generating set."""
    p = _GroupParser(text)
    g = p.expr()
    p.skip()
    if p.pos != len(text):
        p.fail("trailing input")
    return g
