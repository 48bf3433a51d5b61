"""Truncated Magnus expansion.

Each generator goes to 1 + (its own noncommuting variable); a word expands
multiplicatively into an integer power series truncated at a fixed total
degree. The lowest nonzero degree of the expansion minus 1 decides
membership in terms of the lower central series, which turns equality in
F/F_k into comparison of finitely many integer coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .words import Signature, Word

__all__ = [
    "TruncatedSeries",
    "DepthTooSmall",
    "AtLeast",
    "expand",
    "depth",
    "equal_mod",
    "leading_part",
]


class DepthTooSmall(ValueError):
    """The word does not lie deep enough in the lower central series."""


# Monomials are tuples of generator indices; () is the unit monomial.
Monomial = tuple[int, ...]


@dataclass(frozen=True)
class AtLeast:
    """Depth result meaning "at least this value" (truncation saw nothing)."""

    value: int

    def __ge__(self, other: int) -> bool:
        return True

    def __lt__(self, other: int) -> bool:
        return False


@dataclass(frozen=True)
class TruncatedSeries:
    sig: Signature
    bound: int
    coeffs: dict[Monomial, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.bound < 0:
            raise ValueError(f"degree bound must be >= 0, got {self.bound}")

    @staticmethod
    def unit(sig: Signature, bound: int) -> "TruncatedSeries":
        return TruncatedSeries(sig, bound, {(): 1})

    @staticmethod
    def zero(sig: Signature, bound: int) -> "TruncatedSeries":
        return TruncatedSeries(sig, bound, {})

    def _check(self, other: "TruncatedSeries") -> None:
        if self.sig != other.sig:
            raise ValueError("series over different signatures")
        if self.bound != other.bound:
            raise ValueError(
                f"mixed truncation bounds {self.bound} and {other.bound}"
            )

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        coeffs = dict(self.coeffs)
        for mono, c in other.coeffs.items():
            new = coeffs.get(mono, 0) + c
            if new:
                coeffs[mono] = new
            else:
                coeffs.pop(mono, None)
        return TruncatedSeries(self.sig, self.bound, coeffs)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(
            self.sig, self.bound, {m: -c for m, c in self.coeffs.items()}
        )

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        coeffs: dict[Monomial, int] = {}
        for ma, ca in self.coeffs.items():
            room = self.bound - len(ma)
            for mb, cb in other.coeffs.items():
                if len(mb) > room:
                    continue
                mono = ma + mb
                new = coeffs.get(mono, 0) + ca * cb
                if new:
                    coeffs[mono] = new
                else:
                    coeffs.pop(mono, None)
        return TruncatedSeries(self.sig, self.bound, coeffs)

    def homogeneous(self, k: int) -> "TruncatedSeries":
        return TruncatedSeries(
            self.sig, self.bound, {m: c for m, c in self.coeffs.items() if len(m) == k}
        )

    def min_degree(self) -> int | None:
        """Lowest degree with a nonzero coefficient, or None if zero."""
        if not self.coeffs:
            return None
        return min(len(m) for m in self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse of a series with constant term 1."""
        if self.coeffs.get((), 0) != 1:
            raise ValueError("only series with constant term 1 are invertible here")
        u = self - TruncatedSeries.unit(self.sig, self.bound)
        out = TruncatedSeries.unit(self.sig, self.bound)
        term = TruncatedSeries.unit(self.sig, self.bound)
        for _ in range(self.bound):
            term = term * (-u)
            if term.is_zero():
                break
            out = out + term
        return out

    def __pow__(self, e: int) -> "TruncatedSeries":
        base = self if e >= 0 else self.inverse()
        out = TruncatedSeries.unit(self.sig, self.bound)
        for _ in range(abs(e)):
            out = out * base
        return out

    def retruncate(self, bound: int) -> "TruncatedSeries":
        """Lower (or keep) the truncation bound."""
        if bound > self.bound:
            raise ValueError("cannot raise a truncation bound")
        return TruncatedSeries(
            self.sig, bound, {m: c for m, c in self.coeffs.items() if len(m) <= bound}
        )

    def _var_name(self, idx: int) -> str:
        return self.sig.gen_name(idx).upper()

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for mono in sorted(self.coeffs, key=lambda m: (len(m), m)):
            c = self.coeffs[mono]
            body = "".join(self._var_name(i) for i in mono) or "1"
            mag = abs(c)
            term = body if mag == 1 else (f"{mag}" if body == "1" else f"{mag}{body}")
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {term}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"TruncatedSeries(bound={self.bound}, {str(self)})"


def _gen_power(sig: Signature, idx: int, exp: int, bound: int) -> TruncatedSeries:
    """(1 + V)^exp truncated; negative exp uses the generalized binomial."""
    coeffs: dict[Monomial, int] = {}
    for t in range(bound + 1):
        if exp >= 0:
            if t > exp:
                break
            c = math.comb(exp, t)
        else:
            c = (-1) ** t * math.comb(-exp + t - 1, t)
        if c:
            coeffs[(idx,) * t] = c
    return TruncatedSeries(sig, bound, coeffs)


def expand(w: Word, bound: int) -> TruncatedSeries:
    """Magnus expansion of a word, truncated at total degree ``bound``."""
    out = TruncatedSeries.unit(w.sig, bound)
    for gen, exp in w:
        out = out * _gen_power(w.sig, gen, exp, bound)
    return out


def depth(w: Word, bound: int) -> int | AtLeast:
    """Lowest degree of expand(w) - 1, or AtLeast(bound+1)."""
    if bound < 1:
        raise ValueError("depth needs bound >= 1")
    s = expand(w, bound) - TruncatedSeries.unit(w.sig, bound)
    d = s.min_degree()
    return AtLeast(bound + 1) if d is None else d


def equal_mod(a: Word, b: Word, k: int) -> bool:
    """Equality in F/F_k: expansions agree through degree k-1."""
    if k < 1:
        raise ValueError("level must be >= 1")
    if a.sig != b.sig:
        raise ValueError("words over different signatures")
    return expand(a, k - 1).coeffs == expand(b, k - 1).coeffs


def leading_part(w: Word, k: int) -> TruncatedSeries:
    """Degree-k homogeneous part of expand(w) - 1 for a word of depth >= k."""
    s = expand(w, k) - TruncatedSeries.unit(w.sig, k)
    d = s.min_degree()
    if d is not None and d < k:
        raise DepthTooSmall(f"word has depth {d} < {k}")
    return s.homogeneous(k)
