"""Word, simplex and particle-decomposition representations of channel inputs.

A word is a plain tuple of ints over ``{0, ..., P}``.  Nonzero symbols are
"particles" (shift channel) or "packets" (queue channel).  A binary word of
weight ``W`` is identified with the nondecreasing integer tuple

    0 <= s_1 <= s_2 <= ... <= s_W <= n - W

obtained by taking the 1-indexed positions of its ones and subtracting
``(1, 2, ..., W)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

Word = tuple[int, ...]


@dataclass(frozen=True)
class SimplexPoint:
    coords: tuple[int, ...]
    bound: int

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError(f"negative simplex bound {self.bound}")
        prev = 0
        for c in self.coords:
            if c < prev or c > self.bound:
                raise ValueError(f"{self.coords} is not in the simplex with bound {self.bound}")
            prev = c

    @property
    def weight(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class Decomposition:
    indicator: Word
    types: Word

    def __post_init__(self):
        if sum(self.indicator) != len(self.types):
            raise ValueError("indicator weight does not match the number of particle types")
        if any(b not in (0, 1) for b in self.indicator):
            raise ValueError("indicator must be binary")
        if any(t < 1 for t in self.types):
            raise ValueError("particle types must be >= 1")


def parse_word(text: str) -> Word:
    """Parse the digit-string form, e.g. ``"010001"``."""
    text = text.strip()
    if not text.isdigit() and text != "":
        raise ValueError(f"not a digit string: {text!r}")
    return tuple(int(ch) for ch in text)


def format_word(x: Iterable[int]) -> str:
    x = tuple(x)
    if any(s < 0 or s > 9 for s in x):
        raise ValueError("text form only supports symbols 0..9")
    return "".join(str(s) for s in x)


def check_word(x: Word, P: int) -> None:
    for s in x:
        if s < 0 or s > P:
            raise ValueError(f"symbol {s} outside alphabet 0..{P}")


def weight(x: Word) -> int:
    return sum(1 for s in x if s)


def positions(x: Word) -> list[int]:
    """1-indexed positions of the nonzero symbols."""
    return [i + 1 for i, s in enumerate(x) if s]


def to_simplex(x: Word) -> SimplexPoint:
    """Map the indicator of ``x`` to its simplex point."""
    pos = positions(x)
    return SimplexPoint(tuple(p - i for i, p in enumerate(pos, start=1)), len(x) - len(pos))


def from_simplex(p: SimplexPoint, n: int) -> Word:
    W = p.weight
    if p.bound != n - W:
        raise ValueError(f"simplex bound {p.bound} does not match n - W = {n - W}")
    z = [0] * n
    for i, c in enumerate(p.coords, start=1):
        z[c + i - 1] = 1
    return tuple(z)


def coords_to_word(coords: Iterable[int], n: int, types: Iterable[int] | None = None) -> Word:
    """Place particles at simplex coordinates; ``types`` defaults to all ones."""
    coords = tuple(coords)
    types = tuple(types) if types is not None else (1,) * len(coords)
    word = from_simplex(SimplexPoint(coords, n - len(coords)), n)
    return compose(Decomposition(word, types))


def decompose(x: Word) -> Decomposition:
    return Decomposition(tuple(1 if s else 0 for s in x), tuple(s for s in x if s))


def compose(d: Decomposition) -> Word:
    it = iter(d.types)
    return tuple(next(it) if b else 0 for b in d.indicator)


def simplex_points(W: int, bound: int) -> Iterator[tuple[int, ...]]:
    """All points of the simplex of dimension ``W`` and side ``bound``, lexicographic."""
    if W == 0:
        yield ()
        return
    # nondecreasing tuples <-> W-subsets of range(bound + W)
    for comb in combinations(range(bound + W), W):
        yield tuple(c - i for i, c in enumerate(comb))


def constant_weight_words(n: int, W: int, P: int = 1) -> list[Word]:
    """All words of length ``n`` with exactly ``W`` nonzero symbols, sorted."""
    from itertools import product

    out = []
    for pos in combinations(range(n), W):
        for types in product(range(1, P + 1), repeat=W):
            z = [0] * n
            for p, t in zip(pos, types):
                z[p] = t
            out.append(tuple(z))
    out.sort()
    return out
