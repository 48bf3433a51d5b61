"""Named verification suites.

Each suite binds one structural fact about the graded machinery to an
executable check over a parameter grid, and reports per-case results
with a replayable witness on failure. Randomized suites are driven by
an explicit seed so identical invocations produce identical reports.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from math import comb
from typing import Callable

from . import zlinalg
from .words import Signature, Word, boundary_word
from .magnus import equal_mod
from .lie import LieVector, lie_to_word, registry, witt_rank
from .filtration import (
    GradedTuple,
    ad_matrix,
    dk_basis,
    dk_prime_basis,
    dk_prime_rank,
    dk_rank,
    h3_rank,
    pk_matrix,
)
from . import nilaut
from .nilaut import NilAut, aut_star_H_member, aut_star_membership, realize, theta
from . import cylmodel
from .cylmodel import (
    compose,
    derive_eta,
    framing,
    random_model,
    split_projection_f,
)

__all__ = ["SuiteReport", "SUITES", "run_suite"]


@dataclass
class Case:
    key: str
    ok: bool
    witness: dict | None = None


@dataclass
class SuiteReport:
    """Outcome of one suite run over its parameter grid."""

    suite: str
    params: dict
    cases: list[Case] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cases)

    def add(self, key: str, ok: bool, witness: dict | None = None) -> None:
        self.cases.append(Case(key, ok, witness if not ok else None))

    def render(self) -> str:
        # wall time is deliberately omitted: report text must be
        # byte-identical across identical invocations
        lines = [f"suite {self.suite} " + json.dumps(self.params, sort_keys=True)]
        for c in sorted(self.cases, key=lambda c: c.key):
            lines.append(f"  {c.key}: {'pass' if c.ok else 'FAIL'}")
        lines.append(
            f"{'PASS' if self.ok else 'FAIL'} "
            f"({sum(c.ok for c in self.cases)}/{len(self.cases)} cases)"
        )
        return "\n".join(lines)

    def failures(self) -> list[Case]:
        return [c for c in self.cases if not c.ok]


def _signatures(rmax: int, min_n: int = 1) -> list[Signature]:
    out = []
    for g in range(0, rmax // 2 + 1):
        for n in range(min_n, rmax + 2):
            r = 2 * g + n - 1
            if 1 <= r <= rmax:
                out.append(Signature(g, n))
    out.sort(key=lambda s: (s.rank, s.g))
    return out


def suite_witt(rmax: int = 4, kmax: int = 8, **_: object) -> SuiteReport:
    rep = SuiteReport("witt", {"rmax": rmax, "kmax": kmax})
    for r in range(1, rmax + 1):
        for k in range(1, kmax + 1):
            got = len(registry(r).basis(k))
            want = witt_rank(r, k)
            rep.add(
                f"r={r} k={k}",
                got == want,
                {"r": r, "k": k, "hall": got, "witt": want},
            )
    return rep


def suite_dk_rank(rmax: int = 4, kmax: int = 5, **_: object) -> SuiteReport:
    rep = SuiteReport("dk-rank", {"rmax": rmax, "kmax": kmax})
    for sig in _signatures(rmax):
        r = sig.rank
        for k in range(2, kmax + 1):
            got = dk_rank(sig, k)
            want = r * witt_rank(r, k) - witt_rank(r, k + 1)
            rep.add(
                f"g={sig.g} n={sig.n} k={k}",
                got == want,
                {"g": sig.g, "n": sig.n, "k": k, "rank": got, "formula": want},
            )
    return rep


def _alpha_restricted_kernel(sig: Signature, k: int) -> list[list[int]]:
    """Basis of Ker p_k intersected with the alpha-only coordinate block."""
    nk = witt_rank(sig.rank, k)
    a = pk_matrix(sig, k)
    cols = sig.rank * nk
    rows = [row[:] for row in a]
    # pin the beta and gamma blocks to zero with unit constraint rows
    for j in range((sig.n - 1) * nk, cols):
        extra = [0] * cols
        extra[j] = 1
        rows.append(extra)
    return zlinalg.kernel_basis(rows, cols)


def suite_lemma_dprime(rmax: int = 4, kmax: int = 4, **_: object) -> SuiteReport:
    rep = SuiteReport("lemma-dprime", {"rmax": rmax, "kmax": kmax})
    for sig in _signatures(rmax, min_n=2):
        for k in range(2, kmax + 1):
            restricted = _alpha_restricted_kernel(sig, k)
            prime = [t.coords() for t in dk_prime_basis(sig, k)]
            ok = len(restricted) == len(prime)
            width = sig.rank * witt_rank(sig.rank, k)
            if ok and prime:
                # equal saturated lattices: mutual integral membership
                sa = zlinalg.smith([list(col) for col in zip(*restricted)], len(restricted))
                sb = zlinalg.smith([list(col) for col in zip(*prime)], len(prime))
                ok = all(zlinalg.solve_with(sa, list(v)) is not None for v in prime) and all(
                    zlinalg.solve_with(sb, list(v)) is not None for v in restricted
                )
            elif ok:
                ok = not restricted
            rep.add(
                f"g={sig.g} n={sig.n} k={k}",
                ok,
                {"g": sig.g, "n": sig.n, "k": k, "restricted": len(restricted), "prime": len(prime), "width": width},
            )
    # first-quotient count rides along at k=1: rank D_1(H') - (n-1)
    for n in range(2, 7):
        sig = Signature(0, n)
        got = dk_prime_rank(sig, 1) - (n - 1) if n >= 2 else 0
        want = (n - 1) * (n - 2) // 2
        rep.add(f"first-quotient n={n}", got == want, {"n": n, "got": got, "want": want})
    return rep


def suite_ad_inject(rmax: int = 4, **_: object) -> SuiteReport:
    rep = SuiteReport("ad-inject", {"rmax": rmax})
    for sig in _signatures(rmax, min_n=2):
        for i in range(1, sig.n):
            for k in (2, 3, 4):
                m = ad_matrix(sig, sig.x(i), k)
                nk = witt_rank(sig.rank, k)
                got = zlinalg.rank(m, nk)
                rep.add(
                    f"g={sig.g} n={sig.n} i={i} k={k}",
                    got == nk,
                    {"g": sig.g, "n": sig.n, "i": i, "k": k, "rank": got, "cols": nk},
                )
            # at k=1 the kernel is exactly the span of x_i
            m1 = ad_matrix(sig, sig.x(i), 1)
            ker = zlinalg.kernel_basis(m1, sig.rank)
            ok = len(ker) == 1 and all(
                abs(c) == (1 if t == sig.x(i) else 0) for t, c in enumerate(ker[0])
            )
            rep.add(
                f"g={sig.g} n={sig.n} i={i} k=1",
                ok,
                {"g": sig.g, "n": sig.n, "i": i, "kernel": ker},
            )
    return rep


def _tuple_sum(a: GradedTuple, b: GradedTuple) -> GradedTuple:
    return GradedTuple.from_coords(
        a.sig, a.degree, [x + y for x, y in zip(a.coords(), b.coords())]
    )


def _random_kernel_element(sig: Signature, k: int, rng: random.Random) -> GradedTuple:
    basis = dk_basis(sig, k)
    out = GradedTuple.zero(sig, k)
    for t in basis:
        c = rng.randint(-2, 2)
        if c:
            out = _tuple_sum(out, GradedTuple.from_coords(sig, k, [c * x for x in t.coords()]))
    return out


def suite_theta(
    g: int = 0, n: int = 4, k: int = 2, trials: int = 100, seed: int = 0, **_: object
) -> SuiteReport:
    rep = SuiteReport("theta", {"g": g, "n": n, "k": k, "trials": trials, "seed": seed})
    sig = Signature(g, n)
    rng = random.Random(seed)
    for t in range(trials):
        v = _random_kernel_element(sig, k, rng)
        phi = realize(v)
        back = theta(phi)
        rep.add(
            f"roundtrip {t:03d}",
            back.coords() == v.coords(),
            {"target": v.coords(), "got": back.coords()},
        )
    for t in range(trials):
        va = _random_kernel_element(sig, k, rng)
        vb = _random_kernel_element(sig, k, rng)
        pa, pb = realize(va), realize(vb)
        combined = theta(nilaut.compose(pb, pa))
        want = _tuple_sum(va, vb)
        rep.add(
            f"additivity {t:03d}",
            combined.coords() == want.coords(),
            {"a": va.coords(), "b": vb.coords(), "got": combined.coords()},
        )
    return rep


def suite_crossed_hom(trials: int = 200, seed: int = 0, **_: object) -> SuiteReport:
    rep = SuiteReport("crossed-hom", {"trials": trials, "seed": seed})
    rng = random.Random(seed)
    sigs = [Signature(0, 3), Signature(0, 4), Signature(1, 1), Signature(1, 2)]
    for t in range(trials):
        sig = sigs[t % len(sigs)]
        level = 3 + (t // len(sigs)) % 2
        a = random_model(sig, level, rng)
        b = random_model(sig, level, rng)
        lhs = derive_eta(compose(a, b))
        rhs = nilaut.compose(derive_eta(a), derive_eta(b))
        rep.add(
            f"intertwine {t:03d}",
            lhs == rhs,
            {"g": sig.g, "n": sig.n, "level": level, "a": a.to_json(), "b": b.to_json()},
        )
    # entrywise multiplicativity on pairs trivial one level down
    for k in (3, 4):
        for sig in (Signature(0, 3), Signature(1, 2)):
            deep = dk_basis(sig, k - 1)
            picks = []
            for tvec in deep[:2]:
                mu = tuple(lie_to_word(v) for v in tvec.alphas)
                mp = tuple(lie_to_word(v) for v in tvec.betas)
                mpp = tuple(lie_to_word(v) for v in tvec.gammas)
                m = cylmodel._boundary_fixup(
                    cylmodel.CylModel.unchecked(sig, k, mu, mp, mpp)
                )
                picks.append(cylmodel.CylModel.build(sig, k, m.mu, m.mu_p, m.mu_pp))
            if len(picks) < 2:
                continue
            a, b = picks
            c = compose(a, b)
            ok = all(
                equal_mod(wa * wb, wc, k)
                for wa, wb, wc in zip(a.entries(), b.entries(), c.entries())
            )
            rep.add(
                f"entrywise g={sig.g} n={sig.n} k={k}",
                ok,
                {"a": a.to_json(), "b": b.to_json(), "ab": c.to_json()},
            )
    return rep


def suite_h3_coker(rmax: int = 3, kmax: int = 4, **_: object) -> SuiteReport:
    rep = SuiteReport("h3-coker", {"rmax": rmax, "kmax": kmax})
    for sig in _signatures(rmax):
        for k in range(2, kmax + 1):
            tail = sum(dk_rank(sig, i) for i in range(k + 1, 2 * k - 1))
            got = dk_rank(sig, k)
            want = h3_rank(sig, k) - tail
            rep.add(
                f"g={sig.g} n={sig.n} k={k}",
                got == want,
                {"g": sig.g, "n": sig.n, "k": k, "dk": got, "h3_minus_tail": want},
            )
    return rep


def suite_lift_aut(trials: int = 100, seed: int = 0, **_: object) -> SuiteReport:
    rep = SuiteReport("lift-aut", {"trials": trials, "seed": seed})
    rng = random.Random(seed)
    sigs = [Signature(0, 3), Signature(1, 1), Signature(1, 2)]
    for t in range(trials):
        sig = sigs[t % len(sigs)]
        level = 3 if t % 2 else 2
        m = random_model(sig, level, rng, mixing=True)
        phi = derive_eta(m)
        cert = aut_star_membership(phi)
        ok = cert is not None
        lifted = None
        if ok:
            lifted = cert.lift()
            ok = (
                lifted.is_automorphism()
                and nilaut.truncate(lifted, level) == phi
                and cert.verify()
            )
        rep.add(
            f"lift {t:03d}",
            ok,
            {"g": sig.g, "n": sig.n, "level": level, "model": m.to_json()},
        )
    return rep


def suite_split_f(trials: int = 100, seed: int = 0, **_: object) -> SuiteReport:
    rep = SuiteReport("split-f", {"trials": trials, "seed": seed})
    rng = random.Random(seed)
    sigs = [Signature(0, 3), Signature(0, 4), Signature(1, 2)]
    for t in range(trials):
        sig = sigs[t % len(sigs)]
        a = random_model(sig, 2, rng, h15=True)
        b = random_model(sig, 2, rng, h15=True)
        fa, fb = split_projection_f(a), split_projection_f(b)
        lhs = split_projection_f(compose(a, b))
        rhs = compose(fa, fb)
        rep.add(
            f"hom {t:03d}",
            lhs == rhs,
            {"g": sig.g, "n": sig.n, "a": a.to_json(), "b": b.to_json()},
        )
    return rep


def suite_autstar_h(trials: int = 100, seed: int = 0, **_: object) -> SuiteReport:
    rep = SuiteReport("autstar-h", {"trials": trials, "seed": seed})
    rng = random.Random(seed)
    sigs = [Signature(0, 4), Signature(1, 1), Signature(1, 2)]
    for t in range(trials):
        sig = sigs[t % len(sigs)]
        m = random_model(sig, 3, rng, zero_framed=True, mixing=True)
        a = derive_eta(m).abelianization()
        rep.add(
            f"member {t:03d}",
            aut_star_H_member(sig, a),
            {"g": sig.g, "n": sig.n, "matrix": a, "model": m.to_json()},
        )
    # perturbed matrices must fail the block test
    for t in range(trials // 2):
        sig = sigs[t % len(sigs)]
        r = sig.rank
        a = zlinalg.eye(r)
        kind = t % 3
        if kind == 0 and sig.n >= 2:
            # x-block off the identity
            a[sig.x(1)][sig.x(1)] = 2
        elif kind == 1 and sig.g >= 1 and sig.n >= 2:
            # nonzero lower-left block
            a[sig.m(1)][sig.x(1)] = 1
        else:
            # symplectic violation in the handle block
            if sig.g >= 1:
                a[sig.m(1)][sig.m(1)] = 2
            else:
                a[sig.x(1)][sig.x(2)] = 1
                a[sig.x(1)][sig.x(1)] = 0
                a[sig.x(2)][sig.x(1)] = 1
                a[sig.x(2)][sig.x(2)] = 0
        rep.add(
            f"violation {t:03d}",
            not aut_star_H_member(sig, a),
            {"g": sig.g, "n": sig.n, "matrix": a},
        )
    return rep


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "witt": suite_witt,
    "dk-rank": suite_dk_rank,
    "lemma-dprime": suite_lemma_dprime,
    "ad-inject": suite_ad_inject,
    "theta": suite_theta,
    "crossed-hom": suite_crossed_hom,
    "h3-coker": suite_h3_coker,
    "lift-aut": suite_lift_aut,
    "split-f": suite_split_f,
    "autstar-h": suite_autstar_h,
}


def run_suite(name: str, **params: object) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    t0 = time.monotonic()
    rep = SUITES[name](**params)
    rep.wall_time = time.monotonic() - t0
    return rep
