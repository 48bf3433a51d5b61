"""Symbolic homology cylinders at a fixed truncation level.

A model stores only its longitude tuple (mu entries for the x-letters,
mu' and mu'' for each handle); the induced automorphism is derived from
the defining relations

    x_i -> mu_i^-1 x_i mu_i,   m_j -> m_j mu'_j,   l_j -> l_j mu''_j,

so the two invariants can never disagree. A model is admissible when the
derived automorphism passes the boundary-fixing membership test, which
is the strongest level-k condition visible to the algebra.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import nilaut
from .filtration import GradedTuple, pk_matrix
from .lie import (
    LieVector,
    lie_to_word,
    series_normal_form,
    series_to_lie,
    witt_rank,
    word_normal_form,
)
from .magnus import depth, equal_mod, expand, leading_part
from .nilaut import NilAut, NotMember, aut_star_membership
from .words import Signature, Word, boundary_word, commutator, parse_word

__all__ = [
    "CylModel",
    "InadmissibleModel",
    "QueryAboveLevel",
    "derive_eta",
    "compose",
    "identity_model",
    "framing",
    "is_zero_framed",
    "dehn_twist_model",
    "frame_normalize",
    "filtration_member",
    "h15_member",
    "split_projection_f",
    "random_model",
]


class InadmissibleModel(Exception):
    """The longitude tuple does not derive a boundary-fixing automorphism."""


class QueryAboveLevel(ValueError):
    pass


class NotInH15(ValueError):
    pass


@dataclass(frozen=True)
class CylModel:
    """Longitude data at a fixed level; entries are words read mod F_level.

    ``build`` is the public constructor and enforces admissibility;
    ``unchecked`` skips the gate for internal staging and for exercising
    the predicates on raw tuples.
    """

    sig: Signature
    level: int
    mu: tuple[Word, ...]
    mu_p: tuple[Word, ...]
    mu_pp: tuple[Word, ...]

    def __post_init__(self) -> None:
        if self.level < 2:
            raise ValueError("level must be >= 2")
        if len(self.mu) != self.sig.n - 1:
            raise ValueError("mu block has wrong length")
        if len(self.mu_p) != self.sig.g or len(self.mu_pp) != self.sig.g:
            raise ValueError("mu'/mu'' blocks have wrong length")

    @staticmethod
    def unchecked(
        sig: Signature,
        level: int,
        mu: tuple[Word, ...],
        mu_p: tuple[Word, ...] = (),
        mu_pp: tuple[Word, ...] = (),
    ) -> "CylModel":
        return CylModel(sig, level, tuple(mu), tuple(mu_p), tuple(mu_pp))

    @staticmethod
    def build(
        sig: Signature,
        level: int,
        mu: tuple[Word, ...],
        mu_p: tuple[Word, ...] = (),
        mu_pp: tuple[Word, ...] = (),
    ) -> "CylModel":
        model = CylModel.unchecked(sig, level, mu, mu_p, mu_pp)
        try:
            aut_star_membership(derive_eta(model))
        except NotMember as exc:
            raise InadmissibleModel(str(exc)) from exc
        return model

    def entries(self) -> tuple[Word, ...]:
        return self.mu + self.mu_p + self.mu_pp

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CylModel):
            return NotImplemented
        if self.sig != other.sig or self.level != other.level:
            return False
        return all(
            equal_mod(a, b, self.level)
            for a, b in zip(self.entries(), other.entries())
        )

    __hash__ = None  # type: ignore[assignment]

    def to_json(self) -> str:
        return json.dumps(
            {
                "g": self.sig.g,
                "n": self.sig.n,
                "level": self.level,
                "mu": [str(w) for w in self.entries()],
            },
            indent=2,
        ) + "\n"

    @staticmethod
    def from_json(text: str, checked: bool = True) -> "CylModel":
        data = json.loads(text)
        sig = Signature(data["g"], data["n"])
        words = [parse_word(sig, w) for w in data["mu"]]
        if len(words) != sig.rank:
            raise ValueError("mu list must have one word per generator")
        n1 = sig.n - 1
        args = (
            sig,
            data["level"],
            tuple(words[:n1]),
            tuple(words[n1 : n1 + sig.g]),
            tuple(words[n1 + sig.g :]),
        )
        return CylModel.build(*args) if checked else CylModel.unchecked(*args)


def derive_eta(model: CylModel) -> NilAut:
    """The automorphism of F/F_level defined by the longitude relations."""
    sig = model.sig
    images: dict[int, Word] = {}
    for i in range(1, sig.n):
        images[sig.x(i)] = Word.gen(sig, sig.x(i)).conjugate_by(model.mu[i - 1])
    for j in range(1, sig.g + 1):
        images[sig.m(j)] = Word.gen(sig, sig.m(j)) * model.mu_p[j - 1]
        images[sig.l(j)] = Word.gen(sig, sig.l(j)) * model.mu_pp[j - 1]
    return NilAut.from_images(sig, model.level, images)


def identity_model(sig: Signature, level: int) -> CylModel:
    e = Word.identity(sig)
    return CylModel.unchecked(
        sig, level, (e,) * (sig.n - 1), (e,) * sig.g, (e,) * sig.g
    )


def compose(a: CylModel, b: CylModel) -> CylModel:
    """Stacking law: entries of a times the a-action on entries of b."""
    if a.sig != b.sig or a.level != b.level:
        raise ValueError("compose needs matching signature and level")
    eta = derive_eta(a)
    bound = a.level - 1

    def law(x: Word, y: Word) -> Word:
        s = expand(x, bound) * eta.apply_series(y, bound)
        return series_normal_form(a.sig, s, a.level)

    return CylModel.unchecked(
        a.sig,
        a.level,
        tuple(law(x, y) for x, y in zip(a.mu, b.mu)),
        tuple(law(x, y) for x, y in zip(a.mu_p, b.mu_p)),
        tuple(law(x, y) for x, y in zip(a.mu_pp, b.mu_pp)),
    )


def framing(model: CylModel) -> list[int]:
    """Self-linking integers: the x_i exponent sum of mu_i."""
    out = []
    for i in range(1, model.sig.n):
        out.append(model.mu[i - 1].abelianization()[model.sig.x(i)])
    return out


def is_zero_framed(model: CylModel) -> bool:
    return all(t == 0 for t in framing(model))


def dehn_twist_model(sig: Signature, i: int, t: int, level: int) -> CylModel:
    """Boundary Dehn twist: mu_i = x_i^t, everything else trivial."""
    if not 1 <= i <= sig.n - 1:
        raise ValueError(f"boundary index {i} out of range")
    e = Word.identity(sig)
    mu = [e] * (sig.n - 1)
    mu[i - 1] = Word.gen(sig, sig.x(i), t)
    return CylModel.unchecked(sig, level, tuple(mu), (e,) * sig.g, (e,) * sig.g)


def frame_normalize(model: CylModel) -> tuple[CylModel, list[int]]:
    """Split off the framing: returns (zero-framed model, framing vector)."""
    fv = framing(model)
    out = model
    for i, t in enumerate(fv, start=1):
        if t:
            out = compose(out, dehn_twist_model(model.sig, i, -t, model.level))
    return out, fv


def filtration_member(model: CylModel, which: str, k: int) -> bool:
    """Membership in H(k) (all entries trivial mod F_k) or H0[k]
    (mu trivial one level lower, mu'/mu'' trivial mod F_k), inside the
    zero-framed subgroup."""
    if k > model.level:
        raise QueryAboveLevel(f"query level {k} exceeds model level {model.level}")
    if which not in ("H", "H0"):
        raise ValueError("which must be 'H' or 'H0'")
    if not is_zero_framed(model):
        return False
    e = Word.identity(model.sig)
    mu_level = k if which == "H" else k - 1
    return all(equal_mod(w, e, mu_level) for w in model.mu) and all(
        equal_mod(w, e, k) for w in model.mu_p + model.mu_pp
    )


def h15_member(model: CylModel) -> bool:
    """Does the level-2 action keep the handle span inside itself?"""
    if not is_zero_framed(model):
        return False
    sig = model.sig
    for w in model.mu_p + model.mu_pp:
        ab = w.abelianization()
        if any(ab[sig.x(i)] for i in range(1, sig.n)):
            return False
    return True


def split_projection_f(model: CylModel) -> CylModel:
    """The unique level-2 model with trivial handle entries whose mu
    classes agree with the input below each index, carry the transposed
    linking numbers above it, and bracket to zero against the x_i."""
    if not h15_member(model):
        raise NotInH15("model is not in the half-level subgroup")
    sig = model.sig
    ab = [model.mu[i - 1].abelianization() for i in range(1, sig.n)]
    words = []
    for i in range(1, sig.n):
        w = Word.identity(sig)
        for r in range(1, sig.n):
            if r < i:
                e = ab[i - 1][sig.x(r)]
            elif r == i:
                e = 0
            else:
                e = ab[r - 1][sig.x(i)]
            if e:
                w = w * Word.gen(sig, sig.x(r), e)
        words.append(w)
    e0 = Word.identity(sig)
    return CylModel.unchecked(
        sig, 2, tuple(words), (e0,) * sig.g, (e0,) * sig.g
    )


def _boundary_fixup(model: CylModel) -> CylModel:
    """Append graded corrections so the derived map fixes the boundary
    word through degree level, using the surjective bracket lattice."""
    from . import zlinalg

    sig = model.sig
    bdry = boundary_word(sig)
    mu = list(model.mu)
    mu_p = list(model.mu_p)
    mu_pp = list(model.mu_pp)
    for target in range(3, model.level + 1):
        cur = CylModel.unchecked(sig, model.level, tuple(mu), tuple(mu_p), tuple(mu_pp))
        err = derive_eta(cur).apply(bdry) * bdry.inverse()
        d = depth(err, target)
        if not isinstance(d, int):
            continue
        if d < target:
            raise AssertionError(f"seed moved the boundary at degree {d}")
        eps = series_to_lie(sig, leading_part(err, target), target)
        sol = zlinalg.solve_with(
            nilaut._pk_smith(sig.g, sig.n, target - 1), [-c for c in eps.coords]
        )
        if sol is None:
            raise AssertionError("bracket lattice failed to absorb the boundary error")
        corr = GradedTuple.from_coords(sig, target - 1, sol)
        for i in range(sig.n - 1):
            mu[i] = mu[i] * lie_to_word(corr.alphas[i])
        for j in range(sig.g):
            mu_p[j] = mu_p[j] * lie_to_word(corr.betas[j])
            mu_pp[j] = mu_pp[j] * lie_to_word(corr.gammas[j])
    return CylModel.unchecked(sig, model.level, tuple(mu), tuple(mu_p), tuple(mu_pp))


def _seed_models(
    sig: Signature, level: int, rng, want_h15: bool, mixing: bool = False
) -> list[CylModel]:
    """Elementary admissible building blocks."""
    e = Word.identity(sig)
    seeds: list[CylModel] = []
    bdry = boundary_word(sig)

    def blank() -> tuple[list[Word], list[Word], list[Word]]:
        return [e] * (sig.n - 1), [e] * sig.g, [e] * sig.g

    # symmetric linking between two boundary strands: fixes the degree-2
    # obstruction because the two cross terms cancel
    if sig.n >= 3:
        i, r = sorted(rng.sample(range(1, sig.n), 2))
        a = rng.choice([-2, -1, 1, 2])
        mu, mp, mpp = blank()
        mu[i - 1] = Word.gen(sig, sig.x(r), a)
        mu[r - 1] = Word.gen(sig, sig.x(i), a)
        seeds.append(_boundary_fixup(CylModel.unchecked(sig, level, tuple(mu), tuple(mp), tuple(mpp))))

    # handle transvections; these fix the boundary word exactly
    for _ in range(2):
        if sig.g >= 1:
            j = rng.randrange(1, sig.g + 1)
            mu, mp, mpp = blank()
            mword = Word.gen(sig, sig.m(j))
            lword = Word.gen(sig, sig.l(j))
            if rng.random() < 0.5:
                mp[j - 1] = mword.inverse() * lword * mword
            else:
                mpp[j - 1] = lword.inverse() * mword * lword
            seeds.append(CylModel.unchecked(sig, level, tuple(mu), tuple(mp), tuple(mpp)))

    # handle-to-boundary mixing: mu_i = l_j^-1 with mu'_j = x_i cancels
    # its own degree-2 cross term. Opt-in only: strand content in the
    # handle multipliers makes framing non-additive under composition.
    if mixing and sig.g >= 1 and sig.n >= 2 and not want_h15:
        i = rng.randrange(1, sig.n)
        j = rng.randrange(1, sig.g + 1)
        mu, mp, mpp = blank()
        mu[i - 1] = Word.gen(sig, sig.l(j), -1)
        mp[j - 1] = Word.gen(sig, sig.x(i))
        seeds.append(_boundary_fixup(CylModel.unchecked(sig, level, tuple(mu), tuple(mp), tuple(mpp))))

    # conjugation by a power of the boundary word (framing is split off)
    if sig.rank >= 1 and bdry:
        t = rng.choice([-1, 1])
        mu = [bdry ** t] * (sig.n - 1)
        mp = [commutator(Word.gen(sig, sig.m(j)), bdry ** t) for j in range(1, sig.g + 1)]
        mpp = [commutator(Word.gen(sig, sig.l(j)), bdry ** t) for j in range(1, sig.g + 1)]
        inner = CylModel.unchecked(sig, level, tuple(mu), tuple(mp), tuple(mpp))
        seeds.append(frame_normalize(inner)[0])

    # deep entries from the degree-2 bracket kernel
    if level >= 4:
        from .filtration import dk_basis

        basis = dk_basis(sig, 2)
        if basis:
            t = basis[rng.randrange(len(basis))]
            mu = [lie_to_word(v) for v in t.alphas]
            mp = [lie_to_word(v) for v in t.betas]
            mpp = [lie_to_word(v) for v in t.gammas]
            seeds.append(_boundary_fixup(CylModel.unchecked(sig, level, tuple(mu), tuple(mp), tuple(mpp))))
    return seeds


def random_model(
    sig: Signature,
    level: int,
    rng,
    zero_framed: bool = False,
    h15: bool = False,
    mixing: bool = False,
    verify: bool = True,
) -> CylModel:
    """A pseudorandom admissible model, built from elementary admissible
    pieces composed in random order."""
    out = identity_model(sig, level)
    seeds = _seed_models(sig, level, rng, want_h15=h15, mixing=mixing)
    rng.shuffle(seeds)
    for s in seeds[: rng.randrange(1, len(seeds) + 1)] if seeds else []:
        out = compose(out, s)
    if zero_framed or h15:
        out = frame_normalize(out)[0]
    else:
        for i in range(1, sig.n):
            t = rng.randint(-2, 2)
            if t:
                out = compose(out, dehn_twist_model(sig, i, t, level))
    if verify:
        out = CylModel.build(sig, level, out.mu, out.mu_p, out.mu_pp)
    return out
