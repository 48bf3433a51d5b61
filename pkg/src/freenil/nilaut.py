"""Automorphisms of free nilpotent quotients F/F_l.

A NilAut stores one image word per generator; two values are the same
automorphism when the images agree modulo F_l. The module provides the
group operations, the boundary-fixing membership test with its
certificate, the K/A truncation filtration, the graded invariant theta
and its constructive inverse, and the abelianized block-matrix test.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from . import filtration, zlinalg
from .filtration import GradedTuple, ad_matrix, pk_apply, pk_matrix
from .lie import (
    LieVector,
    apply_linear,
    lie_to_word,
    series_to_lie,
    series_normal_form,
    witt_rank,
    word_normal_form,
)
from .magnus import TruncatedSeries, depth, equal_mod, expand, leading_part
from .words import Signature, Word, boundary_word, parse_word

__all__ = [
    "NilAut",
    "NotAutomorphism",
    "NotMember",
    "AdSolveFailed",
    "NotInKernel",
    "AutStarCertificate",
    "compose",
    "truncate",
    "invert",
    "aut_star_membership",
    "kfilter_member",
    "afilter_member",
    "theta",
    "realize",
    "aut_star_H_member",
]


class NotAutomorphism(ValueError):
    pass


class NotMember(Exception):
    """Failure of the boundary-fixing membership test, with a reason."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


class AdSolveFailed(ValueError):
    """No graded conjugator exists; the input was not a filtration member."""


class NotInKernel(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class NilAut:
    """Endomorphism of F/F_l by generator images (words read modulo F_l)."""

    sig: Signature
    level: int
    images: tuple[Word, ...]

    def __post_init__(self) -> None:
        if self.level < 2:
            raise ValueError("level must be >= 2")
        if len(self.images) != self.sig.rank:
            raise ValueError("need one image per generator")

    @staticmethod
    def identity(sig: Signature, level: int) -> "NilAut":
        return NilAut(sig, level, tuple(Word.gen(sig, i) for i in range(sig.rank)))

    @staticmethod
    def from_images(sig: Signature, level: int, images: dict[int, Word]) -> "NilAut":
        base = [Word.gen(sig, i) for i in range(sig.rank)]
        for idx, w in images.items():
            base[idx] = w
        return NilAut(sig, level, tuple(base))

    def apply(self, w: Word) -> Word:
        out = Word.identity(self.sig)
        for gen, exp in w:
            out = out * self.images[gen] ** exp
        return out

    def apply_series(self, w: Word, bound: int) -> TruncatedSeries:
        """Expansion of apply(w) without building the (long) image word.

        Generator-image expansions are cached on the instance, so mapping
        many words through the same automorphism stays cheap.
        """
        try:
            cache = self._series_cache
        except AttributeError:
            cache = {}
            object.__setattr__(self, "_series_cache", cache)
        out = TruncatedSeries.unit(self.sig, bound)
        for gen, exp in w:
            key = (gen, bound)
            pair = cache.get(key)
            if pair is None:
                s = expand(self.images[gen], bound)
                pair = (s, s.inverse())
                cache[key] = pair
            base = pair[0] if exp >= 0 else pair[1]
            for _ in range(abs(exp)):
                out = out * base
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NilAut):
            return NotImplemented
        if self.sig != other.sig or self.level != other.level:
            return False
        return all(
            equal_mod(a, b, self.level) for a, b in zip(self.images, other.images)
        )

    def abelianization(self) -> zlinalg.IntMatrix:
        """Induced matrix on H, column convention: column i = image of gen i."""
        r = self.sig.rank
        out = zlinalg.zeros(r, r)
        for i, w in enumerate(self.images):
            for row, e in enumerate(w.abelianization()):
                out[row][i] = e
        return out

    def is_automorphism(self) -> bool:
        # determinant +-1 suffices: on a nilpotent quotient every such
        # endomorphism is onto, and the quotient is Hopfian
        return abs(zlinalg.det(self.abelianization())) == 1

    def to_json(self) -> str:
        return json.dumps(
            {
                "g": self.sig.g,
                "n": self.sig.n,
                "level": self.level,
                "images": {
                    self.sig.gen_name(i): str(w) for i, w in enumerate(self.images)
                },
            },
            indent=2,
        ) + "\n"

    @staticmethod
    def from_json(text: str) -> "NilAut":
        data = json.loads(text)
        sig = Signature(data["g"], data["n"])
        images = {}
        for name, wtext in data["images"].items():
            images[sig.parse_gen(name)] = parse_word(sig, wtext)
        return NilAut.from_images(sig, data["level"], images)


def compose(phi: NilAut, psi: NilAut) -> NilAut:
    """phi after psi: generator images phi(psi(gen))."""
    if phi.sig != psi.sig or phi.level != psi.level:
        raise ValueError("compose needs matching signature and level")
    # normalize so chained compositions keep image words short; done in
    # series space so the intermediate image word is never materialized
    bound = phi.level - 1
    return NilAut(
        phi.sig,
        phi.level,
        tuple(
            series_normal_form(phi.sig, phi.apply_series(w, bound), phi.level)
            for w in psi.images
        ),
    )


def truncate(phi: NilAut, t: int) -> NilAut:
    if t > phi.level:
        raise ValueError("cannot truncate upward")
    return NilAut(phi.sig, t, phi.images)


@lru_cache(maxsize=None)
def _ad_smith(g: int, n: int, gen: int, k: int) -> zlinalg.SmithDecomposition:
    sig = Signature(g, n)
    return zlinalg.smith(ad_matrix(sig, gen, k), cols=witt_rank(sig.rank, k))


@lru_cache(maxsize=None)
def _pk_smith(g: int, n: int, k: int) -> zlinalg.SmithDecomposition:
    sig = Signature(g, n)
    return zlinalg.smith(pk_matrix(sig, k), cols=sig.rank * witt_rank(sig.rank, k))


@lru_cache(maxsize=None)
def _xlattice_smith(g: int, n: int, k: int) -> zlinalg.SmithDecomposition:
    """SNF of (a_1..a_{n-1}) -> sum_i [x_i, a_i], degree k to k+1."""
    sig = Signature(g, n)
    nk = witt_rank(sig.rank, k)
    cols_per = [ad_matrix(sig, sig.x(i), k) for i in range(1, n)]
    rows = witt_rank(sig.rank, k + 1)
    a = [[0] * ((n - 1) * nk) for _ in range(rows)]
    for b, block in enumerate(cols_per):
        for rr in range(rows):
            a[rr][b * nk : (b + 1) * nk] = block[rr]
    return zlinalg.smith(a, cols=(n - 1) * nk)


def _solve_ad(phi_sig: Signature, gen: int, target: LieVector) -> list[int] | None:
    s = _ad_smith(phi_sig.g, phi_sig.n, gen, target.degree - 1)
    return zlinalg.solve_with(s, list(target.coords))


def _conjugating_witness(phi: NilAut, i: int) -> Word:
    """A word a with phi(x_i) = a^-1 x_i a mod F_l, built degree by degree."""
    sig = phi.sig
    gen = sig.x(i)
    x = Word.gen(sig, gen)
    img = phi.images[gen]
    if img.abelianization() != x.abelianization():
        raise NotMember("XImageNotConjugate", f"x{i} image has wrong homology class")
    alpha = Word.identity(sig)
    for d in range(1, phi.level - 1):
        cur = alpha * img * alpha.inverse()
        err = x.inverse() * cur
        dd = depth(err, d + 1)
        if not isinstance(dd, int):
            continue
        # cur = x_i * err with err of depth d+1; conjugating by a word c of
        # depth d turns the leading error e into e - [x_i, cbar]
        eps = series_to_lie(sig, leading_part(err, d + 1), d + 1)
        sol = _solve_ad(sig, gen, eps)
        if sol is None:
            raise NotMember(
                "XImageNotConjugate", f"x{i} image is not a conjugate at degree {d + 1}"
            )
        c = lie_to_word(LieVector(sig, d, tuple(sol)))
        alpha = c * alpha
    return alpha


@dataclass(frozen=True)
class AutStarCertificate:
    """Witness data for membership: replaying it yields a lift one level up
    whose image of the boundary word is the boundary word."""

    phi: NilAut
    conjugators: tuple[Word, ...]
    a_corrections: tuple[LieVector, ...]
    b_corrections: tuple[LieVector, ...]
    c_corrections: tuple[LieVector, ...]
    boundary: Word

    def lift(self) -> NilAut:
        """The corrected conjugation-form lift at level l+1."""
        sig = self.phi.sig
        images: dict[int, Word] = {}
        for i in range(1, sig.n):
            a = self.conjugators[i - 1] * lie_to_word(self.a_corrections[i - 1])
            images[sig.x(i)] = Word.gen(sig, sig.x(i)).conjugate_by(a)
        for j in range(1, sig.g + 1):
            images[sig.m(j)] = self.phi.images[sig.m(j)] * lie_to_word(
                self.b_corrections[j - 1]
            )
            images[sig.l(j)] = self.phi.images[sig.l(j)] * lie_to_word(
                self.c_corrections[j - 1]
            )
        return NilAut.from_images(sig, self.phi.level + 1, images)

    def verify(self) -> bool:
        lifted = self.lift()
        return equal_mod(lifted.apply(self.boundary), self.boundary, self.phi.level + 1)


def aut_star_membership(phi: NilAut) -> AutStarCertificate:
    """Decide whether phi admits a conjugation-form lift one level up that
    fixes the boundary word, and return the witness.

    For a fixed phi the only lift freedom that can move the boundary image
    at degree l is retargeting the conjugators by degree l-1 elements,
    contributing sum_i [x_i, a_i]; multipliers on the m/l image lifts sit
    in degree l and only reach degree l+1 inside the boundary commutators.
    """
    if not phi.is_automorphism():
        raise NotAutomorphism("input is not an automorphism")
    sig = phi.sig
    l = phi.level
    conjugators = tuple(_conjugating_witness(phi, i) for i in range(1, sig.n))
    lift0 = AutStarCertificate(
        phi,
        conjugators,
        tuple(LieVector.zero(sig, l - 1) for _ in range(sig.n - 1)),
        tuple(LieVector.zero(sig, l - 1) for _ in range(sig.g)),
        tuple(LieVector.zero(sig, l - 1) for _ in range(sig.g)),
        boundary_word(sig),
    )
    bdry = lift0.boundary
    xi = lift0.lift().apply(bdry) * bdry.inverse()
    d = depth(xi, l)
    if isinstance(d, int) and d < l:
        raise NotMember("BoundaryObstruction", f"boundary moves already at degree {d}")
    if not isinstance(d, int):
        return lift0
    eps = series_to_lie(sig, leading_part(xi, l), l)
    s = _xlattice_smith(sig.g, sig.n, l - 1)
    sol = zlinalg.solve_with(s, [-c for c in eps.coords])
    if sol is None:
        raise NotMember("BoundaryObstruction", f"degree-{l} obstruction not correctable")
    nk = witt_rank(sig.rank, l - 1)
    a_corr = tuple(
        LieVector(sig, l - 1, tuple(sol[b * nk : (b + 1) * nk]))
        for b in range(sig.n - 1)
    )
    cert = AutStarCertificate(
        phi,
        conjugators,
        a_corr,
        lift0.b_corrections,
        lift0.c_corrections,
        bdry,
    )
    if not cert.verify():
        raise AssertionError("certificate replay failed")
    return cert


def kfilter_member(phi: NilAut, k: int) -> bool:
    """Trivial action on F/F_k."""
    if k >= phi.level:
        raise ValueError("need k < level")
    return truncate(phi, k) == NilAut.identity(phi.sig, k)


def afilter_member(phi: NilAut, k: int) -> bool:
    """Trivial on F/F_k and fixing each x_i one level further up."""
    if not kfilter_member(phi, k):
        return False
    if k + 1 > phi.level:
        raise ValueError("need k + 1 <= level")
    sig = phi.sig
    return all(
        equal_mod(phi.images[sig.x(i)], Word.gen(sig, sig.x(i)), k + 1)
        for i in range(1, sig.n)
    )


def theta(phi: NilAut) -> GradedTuple:
    """Graded invariant of a member of the A-filtration at level k+2.

    Beta and gamma are the degree-k leading parts of m_j^-1 phi(m_j) and
    l_j^-1 phi(l_j); alpha_i solves [x_i, alpha_i] = leading degree-(k+1)
    part of x_i^-1 phi(x_i), which is unique because ad x_i is injective
    in degrees >= 2. The result lies in the degree-k bracket kernel.
    """
    sig = phi.sig
    k = phi.level - 2
    if k < 2:
        raise ValueError("theta needs level >= 4")
    if not afilter_member(phi, k):
        raise ValueError("input is not in the A-filtration at this level")
    betas, gammas = [], []
    for j in range(1, sig.g + 1):
        for gen, acc in ((sig.m(j), betas), (sig.l(j), gammas)):
            w = Word.gen(sig, gen).inverse() * phi.images[gen]
            acc.append(series_to_lie(sig, leading_part(w, k), k))
    alphas = []
    for i in range(1, sig.n):
        gen = sig.x(i)
        w = Word.gen(sig, gen).inverse() * phi.images[gen]
        eps = series_to_lie(sig, leading_part(w, k + 1), k + 1)
        sol = _solve_ad(sig, gen, eps)
        if sol is None:
            raise AdSolveFailed(f"no conjugator class for x{i}")
        alphas.append(LieVector(sig, k, tuple(sol)))
    t = GradedTuple(sig, k, tuple(alphas), tuple(betas), tuple(gammas))
    if not pk_apply(t).is_zero():
        raise AdSolveFailed("extracted tuple is outside the bracket kernel")
    return t


def realize(t: GradedTuple) -> NilAut:
    """A level-(k+2) member of the A-filtration with theta equal to t.

    The naive generator images move the boundary word at degree k+2; the
    error is absorbed by a solve over the full degree-(k+1) bracket
    lattice, whose a/b/c blocks adjust the conjugators and the m/l
    images. Solvability is guaranteed by surjectivity of the bracket map.
    """
    sig = t.sig
    k = t.degree
    if k < 2:
        raise ValueError("realize needs degree >= 2")
    if not pk_apply(t).is_zero():
        raise NotInKernel("tuple is not in the bracket kernel")
    level = k + 2
    images: dict[int, Word] = {}
    conj = {}
    for i in range(1, sig.n):
        conj[i] = lie_to_word(t.alphas[i - 1])
        images[sig.x(i)] = Word.gen(sig, sig.x(i)).conjugate_by(conj[i])
    for j in range(1, sig.g + 1):
        images[sig.m(j)] = Word.gen(sig, sig.m(j)) * lie_to_word(t.betas[j - 1])
        images[sig.l(j)] = Word.gen(sig, sig.l(j)) * lie_to_word(t.gammas[j - 1])
    phi0 = NilAut.from_images(sig, level, images)
    bdry = boundary_word(sig)
    xi = phi0.apply(bdry) * bdry.inverse()
    d = depth(xi, level)
    if isinstance(d, int) and d < level:
        raise AssertionError("kernel tuple still moves the boundary early")
    if isinstance(d, int):
        eps = series_to_lie(sig, leading_part(xi, level), level)
        sol = zlinalg.solve_with(
            _pk_smith(sig.g, sig.n, k + 1), [-c for c in eps.coords]
        )
        if sol is None:
            raise AssertionError("full bracket lattice failed to absorb the boundary error")
        corr = GradedTuple.from_coords(sig, k + 1, sol)
        for i in range(1, sig.n):
            a = conj[i] * lie_to_word(corr.alphas[i - 1])
            images[sig.x(i)] = Word.gen(sig, sig.x(i)).conjugate_by(a)
        for j in range(1, sig.g + 1):
            images[sig.m(j)] = images[sig.m(j)] * lie_to_word(corr.betas[j - 1])
            images[sig.l(j)] = images[sig.l(j)] * lie_to_word(corr.gammas[j - 1])
        phi0 = NilAut.from_images(sig, level, images)
    return phi0


def invert(phi: NilAut) -> NilAut:
    """Two-sided inverse at the same level, by graded correction."""
    if not phi.is_automorphism():
        raise NotAutomorphism("cannot invert a non-automorphism")
    sig = phi.sig
    minv = zlinalg.inverse_unimodular(phi.abelianization())
    images = []
    for i in range(sig.rank):
        w = Word.identity(sig)
        for row in range(sig.rank):
            if minv[row][i]:
                w = w * Word.gen(sig, row, minv[row][i])
        images.append(w)
    psi = NilAut(sig, phi.level, tuple(images))
    for d in range(2, phi.level):
        cur = compose(phi, psi)
        new_images = []
        for i in range(sig.rank):
            err = Word.gen(sig, i).inverse() * cur.images[i]
            dd = depth(err, d)
            if isinstance(dd, int) and dd < d:
                raise AssertionError("graded inversion lost a degree")
            if isinstance(dd, int):
                eps = series_to_lie(sig, leading_part(err, d), d)
                wbar = apply_linear(minv, -eps)
                new_images.append(psi.images[i] * lie_to_word(wbar))
            else:
                new_images.append(psi.images[i])
        psi = NilAut(sig, phi.level, tuple(new_images))
    return psi


def aut_star_H_member(sig: Signature, a: zlinalg.IntMatrix) -> bool:
    """Block test on H (column convention): x-columns are fixed, m/l columns
    stay in the m/l span up to x-rows, and the m/l block is symplectic for
    the intersection form m_j . l_j = 1."""
    r = sig.rank
    if len(a) != r or any(len(row) != r for row in a):
        raise ValueError(f"expected a {r} x {r} matrix")
    nx = sig.n - 1
    for j in range(nx):
        for i in range(r):
            if a[i][j] != (1 if i == j else 0):
                return False
    # x-rows of the m/l columns are the unconstrained block
    p = [[a[nx + i][nx + j] for j in range(2 * sig.g)] for i in range(2 * sig.g)]
    g2 = 2 * sig.g
    jmat = zlinalg.zeros(g2, g2)
    for j in range(sig.g):
        jmat[j][sig.g + j] = 1
        jmat[sig.g + j][j] = -1
    pt = [[p[i][j] for i in range(g2)] for j in range(g2)]
    return zlinalg.mat_mul(pt, zlinalg.mat_mul(jmat, p)) == jmat
