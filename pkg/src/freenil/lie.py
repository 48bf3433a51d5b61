"""Graded free Lie algebra over the surface homology.

Hall bases are classical P. Hall sets for the fixed generator order: a
bracket tree [s, t] is basic when s < t in the degree-then-ordinal order
and the left subtree of t does not exceed s. With this convention the
degree-2 basis is {[u, v] : u < v}, so brackets of a fixed generator with
later ones form a subset of the basis, a fact the kernel computations
depend on.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache

from .magnus import TruncatedSeries, expand, leading_part
from .words import Signature, Word, commutator

__all__ = [
    "NotLie",
    "HallRegistry",
    "LieVector",
    "registry",
    "witt_rank",
    "hall_basis",
    "tree_str",
    "bracket",
    "lie_to_series",
    "series_to_lie",
    "lie_to_word",
    "apply_linear",
    "word_normal_form",
    "series_normal_form",
]


class NotLie(ValueError):
    """A homogeneous series that is not the image of a Lie element."""


# A Hall tree is a generator index (leaf) or a pair of Hall trees.
Tree = int | tuple


def tree_degree(t: Tree) -> int:
    if isinstance(t, int):
        return 1
    return tree_degree(t[0]) + tree_degree(t[1])


class HallRegistry:
    """All Hall trees for one free rank, generated degree by degree.

    Ordinals extend the degree order and are what the Hall condition
    compares. Thread-safe: generation happens under a lock, lookups read
    immutable snapshots.
    """

    def __init__(self, r: int):
        self.r = r
        self._bases: list[list[Tree]] = [[]]  # index by degree, degree 0 unused
        self._ordinal: dict[Tree, int] = {}
        self._bracket_memo: dict[tuple[Tree, Tree], dict[Tree, int]] = {}
        self._image_memo: dict[Tree, dict[tuple[int, ...], int]] = {}
        self._lock = threading.RLock()

    def basis(self, k: int) -> list[Tree]:
        if k < 1:
            raise ValueError("degree must be >= 1")
        with self._lock:
            while len(self._bases) <= k:
                self._grow()
            return self._bases[k]

    def ordinal(self, t: Tree) -> int:
        return self._ordinal[t]

    def _grow(self) -> None:
        d = len(self._bases)
        if d == 1:
            new = list(range(self.r))
        else:
            candidates = []
            for ds in range(1, d):
                for s in self._bases[ds]:
                    for t in self._bases[d - ds]:
                        if self._ordinal[s] < self._ordinal[t] and self._is_hall_pair(s, t):
                            candidates.append((s, t))
            candidates.sort(key=lambda p: (self._ordinal[p[0]], self._ordinal[p[1]]))
            new = [(s, t) for s, t in candidates]
        for t in new:
            self._ordinal[t] = len(self._ordinal)
        self._bases.append(new)

    def _is_hall_pair(self, s: Tree, t: Tree) -> bool:
        return isinstance(t, int) or self._ordinal[t[0]] <= self._ordinal[s]

    def index_in_degree(self, t: Tree) -> int:
        k = tree_degree(t)
        return self.basis(k).index(t)

    def bracket_trees(self, s: Tree, t: Tree) -> dict[Tree, int]:
        """[s, t] of two Hall trees as a Hall-basis combination."""
        self.basis(tree_degree(s) + tree_degree(t))  # ensure ordinals exist
        return self._bracket_rec(s, t)

    def _bracket_rec(self, s: Tree, t: Tree) -> dict[Tree, int]:
        if s == t:
            return {}
        if self._ordinal[s] > self._ordinal[t]:
            return {h: -c for h, c in self._bracket_rec(t, s).items()}
        key = (s, t)
        memo = self._bracket_memo
        if key in memo:
            return memo[key]
        if self._is_hall_pair(s, t):
            out = {(s, t): 1}
        else:
            # t = (u, v) with u > s: [s,[u,v]] = [[s,u],v] + [u,[s,v]]
            u, v = t
            out: dict[Tree, int] = {}
            for h, c in self._bracket_rec(s, u).items():
                for h2, c2 in self._bracket_rec(h, v).items():
                    out[h2] = out.get(h2, 0) + c * c2
            for h, c in self._bracket_rec(s, v).items():
                for h2, c2 in self._bracket_rec(u, h).items():
                    out[h2] = out.get(h2, 0) + c * c2
            out = {h: c for h, c in out.items() if c}
        memo[key] = out
        return out

    def ring_image(self, t: Tree) -> dict[tuple[int, ...], int]:
        """Image of a Hall tree under leaf -> variable, bracket -> ab - ba."""
        if isinstance(t, int):
            return {(t,): 1}
        memo = self._image_memo
        if t in memo:
            return memo[t]
        a = self.ring_image(t[0])
        b = self.ring_image(t[1])
        out: dict[tuple[int, ...], int] = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                for mono, sgn in ((ma + mb, 1), (mb + ma, -1)):
                    val = out.get(mono, 0) + sgn * ca * cb
                    if val:
                        out[mono] = val
                    else:
                        out.pop(mono, None)
        memo[t] = out
        return out


_registries: dict[int, HallRegistry] = {}
_registries_lock = threading.Lock()


def registry(r: int) -> HallRegistry:
    with _registries_lock:
        reg = _registries.get(r)
        if reg is None:
            reg = _registries[r] = HallRegistry(r)
        return reg


@lru_cache(maxsize=None)
def _mobius(d: int) -> int:
    if d == 1:
        return 1
    out, p, rest = 1, 2, d
    while p * p <= rest:
        if rest % p == 0:
            rest //= p
            if rest % p == 0:
                return 0
            out = -out
        p += 1
    if rest > 1:
        out = -out
    return out


def witt_rank(r: int, k: int) -> int:
    """Rank of the degree-k part of the free Lie algebra on r generators."""
    if r < 0 or k < 1:
        raise ValueError("need r >= 0 and k >= 1")
    total = sum(_mobius(d) * r ** (k // d) for d in range(1, k + 1) if k % d == 0)
    return total // k


def hall_basis(sig: Signature, k: int) -> list[Tree]:
    return registry(sig.rank).basis(k)


def tree_str(sig: Signature, t: Tree) -> str:
    if isinstance(t, int):
        return sig.gen_name(t)
    return f"[{tree_str(sig, t[0])},{tree_str(sig, t[1])}]"


@dataclass(frozen=True)
class LieVector:
    """Integer coordinates relative to the degree-k Hall basis."""

    sig: Signature
    degree: int
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        expected = witt_rank(self.sig.rank, self.degree)
        if len(self.coords) != expected:
            raise ValueError(
                f"expected {expected} coordinates at degree {self.degree}, "
                f"got {len(self.coords)}"
            )

    @staticmethod
    def zero(sig: Signature, k: int) -> "LieVector":
        return LieVector(sig, k, (0,) * witt_rank(sig.rank, k))

    @staticmethod
    def unit(sig: Signature, k: int, idx: int) -> "LieVector":
        c = [0] * witt_rank(sig.rank, k)
        c[idx] = 1
        return LieVector(sig, k, tuple(c))

    @staticmethod
    def from_trees(sig: Signature, k: int, combo: dict[Tree, int]) -> "LieVector":
        reg = registry(sig.rank)
        basis = reg.basis(k)
        pos = {t: i for i, t in enumerate(basis)}
        c = [0] * len(basis)
        for t, coef in combo.items():
            c[pos[t]] += coef
        return LieVector(sig, k, tuple(c))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "LieVector") -> None:
        if self.sig != other.sig or self.degree != other.degree:
            raise ValueError("Lie vectors of mismatched signature or degree")

    def __add__(self, other: "LieVector") -> "LieVector":
        self._check(other)
        return LieVector(
            self.sig, self.degree, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self) -> "LieVector":
        return LieVector(self.sig, self.degree, tuple(-a for a in self.coords))

    def __sub__(self, other: "LieVector") -> "LieVector":
        return self + (-other)

    def scale(self, c: int) -> "LieVector":
        return LieVector(self.sig, self.degree, tuple(c * a for a in self.coords))

    def __str__(self) -> str:
        basis = hall_basis(self.sig, self.degree)
        parts = [
            f"{c}*{tree_str(self.sig, t)}" for t, c in zip(basis, self.coords) if c
        ]
        return " + ".join(parts) if parts else "0"


def bracket(a: LieVector, b: LieVector) -> LieVector:
    """Lie bracket in Hall coordinates."""
    if a.sig != b.sig:
        raise ValueError("bracket of vectors over different signatures")
    reg = registry(a.sig.rank)
    k = a.degree + b.degree
    combo: dict[Tree, int] = {}
    ba = reg.basis(a.degree)
    bb = reg.basis(b.degree)
    for i, ca in enumerate(a.coords):
        if not ca:
            continue
        for j, cb in enumerate(b.coords):
            if not cb:
                continue
            for t, c in reg.bracket_trees(ba[i], bb[j]).items():
                combo[t] = combo.get(t, 0) + ca * cb * c
    return LieVector.from_trees(a.sig, k, combo)


def lie_to_series(v: LieVector, bound: int | None = None) -> TruncatedSeries:
    """Ring-commutator image of a Lie vector (homogeneous of its degree)."""
    reg = registry(v.sig.rank)
    basis = reg.basis(v.degree)
    bound = v.degree if bound is None else bound
    coeffs: dict[tuple[int, ...], int] = {}
    for t, c in zip(basis, v.coords):
        if not c:
            continue
        for mono, x in reg.ring_image(t).items():
            val = coeffs.get(mono, 0) + c * x
            if val:
                coeffs[mono] = val
            else:
                coeffs.pop(mono, None)
    return TruncatedSeries(v.sig, bound, coeffs)


@lru_cache(maxsize=None)
def _hall_image_system(r: int, k: int):
    """Monomial positions and SNF of the Hall-image matrix at (r, k)."""
    from . import zlinalg

    reg = registry(r)
    basis = reg.basis(k)
    images = [reg.ring_image(t) for t in basis]
    monos = sorted({m for img in images for m in img})
    pos = {m: i for i, m in enumerate(monos)}
    a = zlinalg.zeros(len(monos), len(basis))
    for j, img in enumerate(images):
        for m, c in img.items():
            a[pos[m]][j] = c
    return pos, zlinalg.smith(a, cols=len(basis))


def series_to_lie(sig: Signature, h: TruncatedSeries, k: int) -> LieVector:
    """Hall coordinates of a homogeneous degree-k series, if it is Lie."""
    from . import zlinalg

    if any(len(m) != k for m in h.coeffs):
        raise NotLie(f"series is not homogeneous of degree {k}")
    pos, s = _hall_image_system(sig.rank, k)
    if any(m not in pos for m in h.coeffs):
        raise NotLie("series has a monomial no Lie element produces")
    b = [0] * len(pos)
    for m, c in h.coeffs.items():
        b[pos[m]] = c
    x = zlinalg.solve_with(s, b)
    if x is None:
        raise NotLie("series is not in the span of the Hall basis images")
    return LieVector(sig, k, tuple(x))


def _apply_linear_tree(reg: HallRegistry, m: tuple, t: Tree) -> dict[Tree, int]:
    if isinstance(t, int):
        return {j: m[j][t] for j in range(reg.r) if m[j][t]}
    a = _apply_linear_tree(reg, m, t[0])
    b = _apply_linear_tree(reg, m, t[1])
    out: dict[Tree, int] = {}
    for ha, ca in a.items():
        for hb, cb in b.items():
            for h, c in reg.bracket_trees(ha, hb).items():
                val = out.get(h, 0) + ca * cb * c
                if val:
                    out[h] = val
                else:
                    out.pop(h, None)
    return out


def apply_linear(m: list[list[int]], v: LieVector) -> LieVector:
    """Functorial extension of a degree-1 linear map to degree k.

    ``m`` is an r x r matrix in column convention: column i is the image
    of generator i. Leaves of each Hall tree are mapped and the result is
    re-normalized into Hall coordinates.
    """
    reg = registry(v.sig.rank)
    basis = reg.basis(v.degree)
    mm = tuple(tuple(row) for row in m)
    combo: dict[Tree, int] = {}
    for t, c in zip(basis, v.coords):
        if c:
            for h, c2 in _apply_linear_tree(reg, mm, t).items():
                combo[h] = combo.get(h, 0) + c * c2
    return LieVector.from_trees(v.sig, v.degree, combo)


def _tree_word(sig: Signature, t: Tree) -> Word:
    if isinstance(t, int):
        return Word.gen(sig, t)
    return commutator(_tree_word(sig, t[0]), _tree_word(sig, t[1]))


def lie_to_word(v: LieVector) -> Word:
    """A group word of depth >= k whose degree-k leading part realizes v."""
    out = Word.identity(v.sig)
    basis = hall_basis(v.sig, v.degree)
    for t, c in zip(basis, v.coords):
        if c:
            out = out * _tree_word(v.sig, t) ** c
    return out


def word_normal_form(w: Word, level: int) -> Word:
    """Canonical bounded-length representative of w modulo F_level.

    Peels the expansion one degree at a time: words equal mod F_level get
    the identical normal form, and repeated composition cannot blow up
    word length.
    """
    if level < 2:
        return Word.identity(w.sig)
    # expand the (possibly very long) input once; each peeling step only
    # expands the short accumulated prefix
    return series_normal_form(w.sig, expand(w, level - 1), level)


def series_normal_form(sig: Signature, sw: TruncatedSeries, level: int) -> Word:
    """The word_normal_form representative of any word expanding to sw."""
    if level < 2:
        return Word.identity(sig)
    bound = level - 1
    if sw.bound < bound:
        raise ValueError("series truncated below the requested level")
    sw = sw.retruncate(bound)
    unit = TruncatedSeries.unit(sig, bound)
    u = Word.identity(sig)
    for d in range(1, level):
        r = expand(u.inverse(), bound) * sw - unit
        md = r.min_degree()
        if md is not None and md == d:
            c = series_to_lie(sig, r.homogeneous(d), d)
            u = u * lie_to_word(c)
    return u
