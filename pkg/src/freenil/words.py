"""Free-group word calculus for a compact surface with boundary.

The fundamental group of a genus-g surface with n > 0 boundary circles is
free on 2g + n - 1 generators: x_1, ..., x_{n-1} (boundary loops),
m_1, ..., m_g (handle meridians) and l_1, ..., l_g (handle longitudes).
Words are kept freely reduced at all times, so structural equality is
equality in the free group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "Signature",
    "Word",
    "WordError",
    "commutator",
    "boundary_word",
    "parse_word",
]


class WordError(ValueError):
    """Raised for malformed words or mismatched signatures."""


@dataclass(frozen=True, order=True)
class Signature:
    """Surface type (genus, number of boundary components)."""

    g: int
    n: int

    def __post_init__(self) -> None:
        if self.g < 0:
            raise WordError(f"genus must be >= 0, got {self.g}")
        if self.n < 1:
            raise WordError(f"need at least one boundary component, got n={self.n}")

    @property
    def rank(self) -> int:
        """Rank of the free group: 2g + n - 1."""
        return 2 * self.g + self.n - 1

    # Generators are indexed 0..rank-1 in the fixed total order
    # x_1 < ... < x_{n-1} < m_1 < ... < m_g < l_1 < ... < l_g.
    # This order matters: it makes Hall trees built from x-letters alone
    # an initial segment of the alphabet, which downstream lattice
    # computations rely on.

    def kind(self, idx: int) -> str:
        """'x', 'm' or 'l' for a generator index."""
        if not 0 <= idx < self.rank:
            raise WordError(f"generator index {idx} out of range for {self}")
        if idx < self.n - 1:
            return "x"
        if idx < self.n - 1 + self.g:
            return "m"
        return "l"

    def x(self, i: int) -> int:
        """Index of x_i (1-based)."""
        if not 1 <= i <= self.n - 1:
            raise WordError(f"x{i} out of range for {self}")
        return i - 1

    def m(self, j: int) -> int:
        if not 1 <= j <= self.g:
            raise WordError(f"m{j} out of range for {self}")
        return self.n - 1 + j - 1

    def l(self, j: int) -> int:
        if not 1 <= j <= self.g:
            raise WordError(f"l{j} out of range for {self}")
        return self.n - 1 + self.g + j - 1

    def gen_name(self, idx: int) -> str:
        kind = self.kind(idx)
        if kind == "x":
            return f"x{idx + 1}"
        if kind == "m":
            return f"m{idx - (self.n - 1) + 1}"
        return f"l{idx - (self.n - 1) - self.g + 1}"

    def parse_gen(self, token: str) -> int:
        if len(token) < 2 or token[0] not in "xml" or not token[1:].isdigit():
            raise WordError(f"bad generator token {token!r}")
        i = int(token[1:])
        try:
            return {"x": self.x, "m": self.m, "l": self.l}[token[0]](i)
        except WordError:
            raise WordError(f"generator {token!r} out of range for g={self.g}, n={self.n}")

    def generators(self) -> list[int]:
        return list(range(self.rank))


def _reduce(pairs: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Freely reduce a sequence of (generator, exponent) pairs."""
    out: list[list[int]] = []
    for gen, exp in pairs:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            out[-1][1] += exp
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([gen, exp])
    return tuple((g, e) for g, e in out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; the empty tuple of syllables is the identity."""

    sig: Signature
    syllables: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def identity(sig: Signature) -> "Word":
        return Word(sig)

    @staticmethod
    def from_pairs(sig: Signature, pairs: Iterable[tuple[int, int]]) -> "Word":
        pairs = list(pairs)
        for gen, _ in pairs:
            if not 0 <= gen < sig.rank:
                raise WordError(f"generator index {gen} out of range for {sig}")
        return Word(sig, _reduce(pairs))

    @staticmethod
    def gen(sig: Signature, idx: int, exp: int = 1) -> "Word":
        return Word.from_pairs(sig, [(idx, exp)])

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.syllables)

    def __mul__(self, other: "Word") -> "Word":
        if self.sig != other.sig:
            raise WordError("cannot multiply words over different signatures")
        return Word(self.sig, _reduce(self.syllables + other.syllables))

    def inverse(self) -> "Word":
        return Word(self.sig, tuple((g, -e) for g, e in reversed(self.syllables)))

    def __pow__(self, k: int) -> "Word":
        if k == 0:
            return Word.identity(self.sig)
        base = self if k > 0 else self.inverse()
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    def conjugate_by(self, w: "Word") -> "Word":
        """w^-1 * self * w."""
        return w.inverse() * self * w

    def abelianization(self) -> list[int]:
        """Total exponent of each generator."""
        v = [0] * self.sig.rank
        for gen, exp in self.syllables:
            v[gen] += exp
        return v

    def __str__(self) -> str:
        if not self.syllables:
            return ""
        parts = []
        for gen, exp in self.syllables:
            name = self.sig.gen_name(gen)
            parts.append(name if exp == 1 else f"{name}^{exp}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


def commutator(a: Word, b: Word) -> Word:
    """[a, b] = a^-1 b^-1 a b."""
    if a.sig != b.sig:
        raise WordError("commutator of words over different signatures")
    return a.inverse() * b.inverse() * a * b


def boundary_word(sig: Signature) -> Word:
    """The last boundary component: x_1 ... x_{n-1} [m_1,l_1] ... [m_g,l_g]."""
    w = Word.identity(sig)
    for i in range(1, sig.n):
        w = w * Word.gen(sig, sig.x(i))
    for j in range(1, sig.g + 1):
        w = w * commutator(Word.gen(sig, sig.m(j)), Word.gen(sig, sig.l(j)))
    return w


def parse_word(sig: Signature, text: str) -> Word:
    """Parse whitespace-separated tokens like ``x1 m2^-3 l1``; "" is the identity.

    Parse failures carry ``text`` and ``pos`` (character offset of the bad
    token) so callers can print caret diagnostics.
    """
    pairs: list[tuple[int, int]] = []
    scan = 0
    for token in text.split():
        pos = text.index(token, scan)
        scan = pos + len(token)
        try:
            if "^" in token:
                head, _, tail = token.partition("^")
                try:
                    exp = int(tail)
                except ValueError:
                    raise WordError(f"bad exponent in token {token!r}")
            else:
                head, exp = token, 1
            pairs.append((sig.parse_gen(head), exp))
        except WordError as err:
            err.text = text
            err.pos = pos
            raise
    return Word.from_pairs(sig, pairs)
