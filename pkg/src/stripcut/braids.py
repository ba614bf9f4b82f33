"""Braid words in Artin generators and band generators.

Text grammar, one token per letter, separated by whitespace::

    s3      sigma_3
    S3      sigma_3 inverse
    d1.4    band generator Delta_{1,4} (half twist reversing punctures 1..4)
    D1.4    its inverse
    s2^3    any token may carry an integer exponent suffix
    -n 5    fixes the strand count

Band generator indices are 1-based, ``1 <= i < j <= n``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = ["BraidParseError", "Letter", "BraidWord", "parse_braid"]

_TOKEN = re.compile(r"^([sSdD])(\d+)(?:\.(\d+))?(?:\^(-?\d+))?$")


class BraidParseError(ValueError):
    """Bad braid text. ``token`` is 1-based, ``offset`` is the character offset."""

    def __init__(self, message: str, token: int = 0, offset: int = 0):
        super().__init__(f"{message} (token {token}, offset {offset})")
        self.reason = message
        self.token = token
        self.offset = offset


@dataclass(frozen=True)
class Letter:
    """One generator raised to a nonzero power; Artin letters have ``j == i + 1``."""

    kind: str  # "s" or "d"
    i: int
    j: int
    exp: int

    def __post_init__(self):
        if self.kind not in ("s", "d"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.exp == 0:
            raise ValueError("exponent must be nonzero")
        if not 1 <= self.i < self.j:
            raise ValueError(f"bad generator indices {self.i}, {self.j}")
        if self.kind == "s" and self.j != self.i + 1:
            raise ValueError("Artin generator must span adjacent punctures")

    @classmethod
    def sigma(cls, i: int, exp: int = 1) -> "Letter":
        return cls("s", i, i + 1, exp)

    @classmethod
    def band(cls, i: int, j: int, exp: int = 1) -> "Letter":
        return cls("d", i, j, exp)

    def inverse(self) -> "Letter":
        return Letter(self.kind, self.i, self.j, -self.exp)

    def artin(self) -> list[tuple[int, int]]:
        """Expansion into (i, +-1) Artin letters, in written order."""
        if self.kind == "s":
            unit = [(self.i, 1)]
        else:
            unit = [(k, 1) for top in range(self.j - 1, self.i - 1, -1)
                    for k in range(self.i, top + 1)]
        if self.exp < 0:
            unit = [(k, -e) for k, e in reversed(unit)]
        return unit * abs(self.exp)

    def to_text(self) -> str:
        head = self.kind if self.exp > 0 else self.kind.upper()
        body = f"{self.i}" if self.kind == "s" else f"{self.i}.{self.j}"
        return head + body + (f"^{abs(self.exp)}" if abs(self.exp) != 1 else "")


@dataclass(frozen=True)
class BraidWord:
    """A braid on ``n`` strands. Letters act right to left on curves."""

    n: int
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"strand count must be at least 3, got {self.n}")
        for let in self.letters:
            if let.j > self.n:
                raise ValueError(f"generator {let.to_text()} out of range for n={self.n}")

    @classmethod
    def from_artin(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "BraidWord":
        return cls(n, tuple(Letter.sigma(i, e) for i, e in pairs))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if other.n != self.n:
            raise ValueError("strand counts differ")
        return BraidWord(self.n, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.n, tuple(let.inverse() for let in reversed(self.letters)))

    def power(self, m: int) -> "BraidWord":
        if m < 0:
            return self.inverse().power(-m)
        return BraidWord(self.n, self.letters * m)

    def artin(self) -> list[tuple[int, int]]:
        return [a for let in self.letters for a in let.artin()]

    def merged(self) -> "BraidWord":
        """Collapse adjacent powers of the same generator; drop cancelled letters."""
        out: list[Letter] = []
        for let in self.letters:
            if out and (out[-1].kind, out[-1].i, out[-1].j) == (let.kind, let.i, let.j):
                e = out[-1].exp + let.exp
                out.pop()
                if e:
                    out.append(Letter(let.kind, let.i, let.j, e))
            else:
                out.append(let)
        return BraidWord(self.n, tuple(out))

    def rotations(self) -> list["BraidWord"]:
        k = len(self.letters)
        return [BraidWord(self.n, self.letters[r:] + self.letters[:r]) for r in range(max(k, 1))]

    def tokens(self) -> list[str]:
        return [let.to_text() for let in self.letters]

    def to_text(self) -> str:
        return " ".join(self.tokens())

    def __str__(self) -> str:
        return self.to_text() or "(identity)"


def parse_braid(text: str, n: int | None = None) -> BraidWord:
    """Parse braid text. An explicit ``n`` argument wins over ``-n`` in the text."""
    letters: list[Letter] = []
    where: list[tuple[int, int]] = []
    text_n = None
    spans = [(m.group(0), m.start()) for m in re.finditer(r"\S+", text)]
    pos = 0
    while pos < len(spans):
        tok, off = spans[pos]
        if tok == "-n":
            if pos + 1 >= len(spans):
                raise BraidParseError("-n needs a value", pos + 1, off)
            val, voff = spans[pos + 1]
            if not re.fullmatch(r"\d+", val):
                raise BraidParseError(f"bad strand count {val!r}", pos + 2, voff)
            text_n = int(val)
            pos += 2
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise BraidParseError(f"unrecognized token {tok!r}", pos + 1, off)
        kind, a, b, e = m.groups()
        exp = int(e) if e is not None else 1
        if exp == 0:
            raise BraidParseError(f"zero exponent in {tok!r}", pos + 1, off)
        if kind.isupper():
            exp = -exp
        i = int(a)
        where.append((pos + 1, off))
        if kind in "sS":
            if b is not None:
                raise BraidParseError(f"Artin generator takes one index: {tok!r}", pos + 1, off)
            if i < 1:
                raise BraidParseError(f"index must be positive in {tok!r}", pos + 1, off)
            letters.append(Letter.sigma(i, exp))
        else:
            if b is None:
                raise BraidParseError(f"band generator needs i.j: {tok!r}", pos + 1, off)
            j = int(b)
            if not 1 <= i < j:
                raise BraidParseError(f"band generator needs 1 <= i < j: {tok!r}", pos + 1, off)
            letters.append(Letter.band(i, j, exp))
        pos += 1
    if n is None:
        n = text_n
    if n is None:
        n = max([let.j for let in letters] + [3])
    if n < 3:
        raise BraidParseError(f"strand count must be at least 3, got {n}", 0, 0)
    for let, (tok_no, off) in zip(letters, where):
        if let.j > n:
            raise BraidParseError(f"generator {let.to_text()} out of range for n={n}", tok_no, off)
    return BraidWord(n, tuple(letters))
