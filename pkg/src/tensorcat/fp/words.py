"""Free-group words and finite presentations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


def _free_reduce(letters: Iterable[int]) -> list[int]:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("letter 0 is not a generator")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


class Word(tuple):
    """A freely reduced word; letter ``i`` is generator ``i`` (1-based), ``-i`` its inverse."""

    __slots__ = ()

    def __new__(cls, letters: Iterable[int] = ()):
        return super().__new__(cls, _free_reduce(int(x) for x in letters))

    def __mul__(self, other):
        return Word(tuple(self) + tuple(other))

    def inverse(self) -> "Word":
        return Word(-x for x in reversed(self))

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(tuple(base) * abs(n))

    def cyclically_reduced(self) -> "Word":
        lo, hi = 0, len(self)
        while hi - lo >= 2 and self[lo] == -self[hi - 1]:
            lo += 1
            hi -= 1
        return Word(self[lo:hi])

    def __repr__(self):
        return f"Word({list(self)!r})"


@dataclass(frozen=True)
class Presentation:
    generator_names: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        names = tuple(self.generator_names)
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        k = len(names)
        rels = tuple(Word(r) for r in self.relators)
        for r in rels:
            for x in r:
                if not 1 <= abs(x) <= k:
                    raise ValueError(f"letter {x} out of range for {k} generators")
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "relators", rels)

    @property
    def generator_count(self) -> int:
        return len(self.generator_names)

    @classmethod
    def from_relators(cls, generator_count: int, relators: Sequence[Iterable[int]],
                      names: Sequence[str] | None = None) -> "Presentation":
        if names is None:
            names = default_names(generator_count)
        return cls(tuple(names), tuple(Word(r) for r in relators))

    def word_str(self, w: Word) -> str:
        return format_word(w, self.generator_names)

    def to_text(self) -> str:
        rels = ", ".join(self.word_str(r) for r in self.relators)
        return f"gens: {','.join(self.generator_names)}; rels: {rels}"


def default_names(k: int) -> list[str]:
    if k <= 26:
        return [chr(ord("a") + i) for i in range(k)]
    return [f"x{i}" for i in range(k)]


def format_word(w: Word, names: Sequence[str]) -> str:
    if not w:
        return "1"
    single = all(len(n) == 1 and n.islower() for n in names)
    if single:
        return "".join(names[x - 1] if x > 0 else names[-x - 1].upper() for x in w)
    return "*".join(names[x - 1] if x > 0 else f"{names[-x - 1]}^-1" for x in w)
