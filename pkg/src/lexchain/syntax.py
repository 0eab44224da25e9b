"""Text syntax for chains and elements.

    chain := "fin(" INT ")" | "omega" | "omegastar"
           | "pow(" chain "," elem "," chain ")"
           | "le0(" chain "," elem ")" | "lt0(" chain "," elem ")"
           | "solve1(" chain "," elem ")" | "solve2(..)" | "solve3(..)"
    elem  := "f" INT | "n" INT | "s" INT | "{" [pair ("," pair)*] "}"
           | "stage(" INT "," elem ")"
    pair  := elem ":" elem

Whitespace between tokens is ignored.
"""
from __future__ import annotations

import re

from .chains import (
    Fin,
    FinIdx,
    Fix,
    HetProd,
    Kind,
    MapElem,
    Nat,
    Omega,
    OmegaStar,
    Pow,
    SegLE,
    SegLT,
    StageElem,
    StarIdx,
    TupleElem,
)
from .errors import ExprSyntaxError

_TOKEN = re.compile(r"\s*(?:(?P<word>[a-z]+)(?P<num>\d*)|(?P<int>\d+)|(?P<punct>[(),{}:]))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if rest.strip():
                raise ExprSyntaxError(f"unexpected character {rest.lstrip()[0]!r}",
                                      len(text) - len(rest.lstrip()))
            break
        start = m.end() - len(m.group(0).lstrip())
        if m.group("word"):
            tokens.append(("word", (m.group("word"), m.group("num")), start))
        elif m.group("int"):
            tokens.append(("int", int(m.group("int")), start))
        else:
            tokens.append((m.group("punct"), None, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r}, found {self._show(tok)}", tok[2])
        self.i += 1
        return tok

    @staticmethod
    def _show(tok) -> str:
        if tok[0] == "end":
            return "end of input"
        if tok[0] == "word":
            return repr("".join(tok[1]))
        if tok[0] == "int":
            return repr(str(tok[1]))
        return repr(tok[0])

    def integer(self, word_num: str, pos: int) -> int:
        if word_num:
            return int(word_num)
        return self.take("int")[1]

    def done(self):
        self.take("end")

    def chain(self):
        tok = self.take("word")
        (name, num), pos = tok[1], tok[2]
        if not num and name in ("solve", "le", "lt") and self.peek()[0] == "int":
            num = str(self.take("int")[1])
        word = name + num
        if word == "fin":
            self.take("(")
            n = self.take("int")[1]
            self.take(")")
            return Fin(n)
        if word == "omega":
            return Omega()
        if word == "omegastar":
            return OmegaStar()
        if word == "pow":
            self.take("(")
            base = self.chain()
            self.take(",")
            zero = self.elem()
            self.take(",")
            exp = self.chain()
            self.take(")")
            return Pow(base, zero, exp)
        if word in ("le0", "lt0", "solve1", "solve2", "solve3"):
            self.take("(")
            of = self.chain()
            self.take(",")
            e = self.elem()
            self.take(")")
            if word == "le0":
                return SegLE(of, e)
            if word == "lt0":
                return SegLT(of, e)
            return Fix(Kind(int(num)), of, e)
        raise ExprSyntaxError(f"unknown chain constructor {word!r}", pos)

    def elem(self):
        tok = self.peek()
        if tok[0] == "{":
            self.i += 1
            pairs = []
            if self.peek()[0] != "}":
                while True:
                    k = self.elem()
                    self.take(":")
                    v = self.elem()
                    pairs.append((k, v))
                    if self.peek()[0] != ",":
                        break
                    self.i += 1
            self.take("}")
            return MapElem(tuple(pairs))
        tok = self.take("word")
        (name, num), pos = tok[1], tok[2]
        if name == "stage" and not num:
            self.take("(")
            n = self.take("int")[1]
            self.take(",")
            inner = self.elem()
            self.take(")")
            return StageElem(n, inner)
        if name in ("f", "n", "s"):
            value = self.integer(num, pos)
            return {"f": FinIdx, "n": Nat, "s": StarIdx}[name](value)
        raise ExprSyntaxError(f"unknown element {name + num!r}", pos)


def parse_chain(text: str):
    p = _Parser(text)
    c = p.chain()
    p.done()
    return c


def parse_elem(text: str):
    p = _Parser(text)
    e = p.elem()
    p.done()
    return e


def format_elem(e) -> str:
    match e:
        case FinIdx(i=i):
            return f"f{i}"
        case Nat(i=i):
            return f"n{i}"
        case StarIdx(k=k):
            return f"s{k}"
        case MapElem(pairs=pairs):
            return "{" + ", ".join(f"{format_elem(k)}:{format_elem(v)}" for k, v in pairs) + "}"
        case StageElem(n=n, inner=inner):
            return f"stage({n}, {format_elem(inner)})"
        case TupleElem(values=values):
            # display only; products have no text syntax
            return "(" + ", ".join(format_elem(v) for v in values) + ")"
    raise TypeError(f"not an element: {e!r}")


def format_chain(c) -> str:
    match c:
        case Fin(n=n):
            return f"fin({n})"
        case Omega():
            return "omega"
        case OmegaStar():
            return "omegastar"
        case Pow(base=base, zero=zero, exp=exp):
            return f"pow({format_chain(base)}, {format_elem(zero)}, {format_chain(exp)})"
        case SegLE(of=of, bound=b):
            return f"le0({format_chain(of)}, {format_elem(b)})"
        case SegLT(of=of, bound=b):
            return f"lt0({format_chain(of)}, {format_elem(b)})"
        case Fix(kind=kind, base=base, zero=zero):
            return f"solve{int(kind)}({format_chain(base)}, {format_elem(zero)})"
        case HetProd(factors=factors):
            inner = ", ".join(f"({format_chain(f)}, {format_elem(z)})" for f, z in factors)
            return f"het({inner})"
    raise TypeError(f"not a chain: {c!r}")
