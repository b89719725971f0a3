"""Parser for the presentation text format ``gens: a,b; rels: aa, bbb, (ab)^3``.

Generators are single lowercase letters; the uppercase letter denotes the
inverse.  Relators may use parentheses and integer exponents ``^n``.
"""
from __future__ import annotations

from ..errors import ParseError
from .words import Presentation, Word


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


class _WordParser:
    def __init__(self, text: str, start: int, end: int, index: dict[str, int]):
        self.text = text
        self.pos = start
        self.end = end
        self.index = index

    def error(self, msg: str):
        raise ParseError(msg, *_position(self.text, self.pos))

    def skip(self):
        while self.pos < self.end and self.text[self.pos].isspace():
            self.pos += 1

    def parse(self) -> Word:
        w = self.sequence()
        self.skip()
        if self.pos != self.end:
            self.error(f"unexpected {self.text[self.pos]!r}")
        return w

    def sequence(self) -> Word:
        letters: list[int] = []
        while True:
            self.skip()
            if self.pos >= self.end or self.text[self.pos] == ")":
                return Word(letters)
            letters.extend(self.factor())

    def factor(self) -> Word:
        ch = self.text[self.pos]
        if ch == "(":
            self.pos += 1
            base = self.sequence()
            self.skip()
            if self.pos >= self.end or self.text[self.pos] != ")":
                self.error("missing ')'")
            self.pos += 1
        elif ch == "1":
            self.pos += 1
            base = Word()
        elif ch.isalpha():
            g = self.index.get(ch.lower())
            if g is None:
                self.error(f"unknown generator {ch!r}")
            base = Word([g + 1 if ch.islower() else -(g + 1)])
            self.pos += 1
        else:
            self.error(f"unexpected {ch!r}")
        self.skip()
        if self.pos < self.end and self.text[self.pos] == "^":
            self.pos += 1
            self.skip()
            start = self.pos
            if self.pos < self.end and self.text[self.pos] in "+-":
                self.pos += 1
            while self.pos < self.end and self.text[self.pos].isdigit():
                self.pos += 1
            try:
                n = int(self.text[start:self.pos])
            except ValueError:
                self.pos = start
                self.error("expected integer exponent")
            base = base ** n
        return base


def parse_presentation(text: str) -> Presentation:
    gens_at = text.find("gens:")
    if gens_at < 0:
        raise ParseError("expected 'gens:'", *_position(text, 0))
    rels_at = text.find("rels:", gens_at)
    semi = text.find(";", gens_at)
    gens_end = semi if semi >= 0 and (rels_at < 0 or semi < rels_at) else (rels_at if rels_at >= 0 else len(text))
    names: list[str] = []
    offset = gens_at + len("gens:")
    for chunk in text[offset:gens_end].split(","):
        name = chunk.strip()
        here = offset + (len(chunk) - len(chunk.lstrip()))
        offset += len(chunk) + 1
        if not name:
            if chunk.strip() == "" and text[gens_at + 5:gens_end].strip() == "":
                continue
            raise ParseError("empty generator name", *_position(text, here))
        if len(name) != 1 or not name.islower():
            raise ParseError(f"generator {name!r} must be a single lowercase letter",
                             *_position(text, here))
        if name in names:
            raise ParseError(f"duplicate generator {name!r}", *_position(text, here))
        names.append(name)
    index = {n: i for i, n in enumerate(names)}
    relators: list[Word] = []
    if rels_at >= 0:
        start = rels_at + len("rels:")
        end = len(text)
        pieces = []
        cur = start
        for i in range(start, end):
            if text[i] == ",":
                pieces.append((cur, i))
                cur = i + 1
        pieces.append((cur, end))
        for a, b in pieces:
            # trailing ';' terminator is allowed
            while b > a and text[b - 1] in "; \n\t":
                b -= 1
            if text[a:b].strip() == "":
                continue
            relators.append(_WordParser(text, a, b, index).parse())
    return Presentation(tuple(names), tuple(relators))
