"""Automorphisms of free nilpotent quotients and their filtration."""

import random

import pytest

from freenil import nilaut
from freenil.words import Signature, Word, boundary_word, parse_word
from freenil.magnus import depth, equal_mod
from freenil.filtration import GradedTuple, dk_basis
from freenil.nilaut import (
    NilAut,
    NotMember,
    aut_star_H_member,
    aut_star_membership,
    invert,
    realize,
    theta,
    truncate,
)
from freenil.cylmodel import derive_eta, random_model

S03 = Signature(0, 3)
S11 = Signature(1, 1)
S12 = Signature(1, 2)


def sl2_aut(a, b, c, d, level=2):
    """Automorphism of the genus-one quotient from an integer matrix."""
    sig = S11
    m, l = Word.gen(sig, 0), Word.gen(sig, 1)
    return NilAut(sig, level, (m ** a * l ** b, m ** c * l ** d))


class TestNilAut:
    def test_identity_fixes_everything(self):
        e = NilAut.identity(S12, 3)
        w = parse_word(S12, "x1 m1 l1^-1")
        assert e.apply(w) == w

    def test_abelianization_column_convention(self):
        phi = sl2_aut(1, 1, 0, 1)
        assert phi.abelianization() == [[1, 0], [1, 1]]

    def test_is_automorphism(self):
        assert sl2_aut(2, 1, 1, 1).is_automorphism()
        assert not NilAut(S11, 2, (Word.gen(S11, 0, 2), Word.gen(S11, 1))).is_automorphism()

    def test_equality_is_modular(self):
        # images differing by deep commutators are the same level-2 map
        a = NilAut.identity(S03, 2)
        c = parse_word(S03, "x1^-1 x2^-1 x1 x2")
        b = NilAut(S03, 2, (Word.gen(S03, 0) * c, Word.gen(S03, 1)))
        assert a == b
        assert truncate(b, 2) == a

    def test_json_round_trip(self):
        phi = sl2_aut(2, 1, 1, 1, level=3)
        again = NilAut.from_json(phi.to_json())
        assert again == phi

    def test_compose_against_direct_application(self):
        rng = random.Random(3)
        for _ in range(5):
            a = derive_eta(random_model(S12, 3, rng))
            b = derive_eta(random_model(S12, 3, rng))
            ab = nilaut.compose(a, b)
            for i in range(S12.rank):
                assert equal_mod(ab.images[i], a.apply(b.images[i]), 3)


class TestAutStar:
    def test_symplectic_accepted(self):
        cert = aut_star_membership(sl2_aut(2, 1, 1, 1))
        lifted = cert.lift()
        assert lifted.level == 3
        assert lifted.is_automorphism()
        # the lift moves the boundary word only beyond the lifted level
        bdry = boundary_word(S11)
        err = lifted.apply(bdry) * bdry.inverse()
        d = depth(err, lifted.level)
        assert not isinstance(d, int) or d >= lifted.level
        assert cert.verify()

    def test_determinant_minus_one_rejected(self):
        with pytest.raises(NotMember):
            aut_star_membership(sl2_aut(0, 1, 1, 0))

    def test_strand_image_must_be_conjugate(self):
        phi = NilAut.from_images(
            S03, 2, {0: Word.gen(S03, 0, -1)}
        )
        with pytest.raises(NotMember) as err:
            aut_star_membership(phi)
        assert err.value.reason in ("XImageNotConjugate", "BoundaryObstruction")

    def test_derived_automorphisms_are_members(self):
        rng = random.Random(4)
        for sig in (S03, S12):
            for level in (2, 3):
                phi = derive_eta(random_model(sig, level, rng, mixing=True))
                cert = aut_star_membership(phi)
                assert cert.verify()

    def test_block_matrix_test(self):
        # upper block-triangular with symplectic handle block passes
        a = [[1, 2, 3], [0, 1, 1], [0, 1, 2]]
        assert aut_star_H_member(S12, a)
        # non-symplectic handle block fails
        b = [[1, 0, 0], [0, 2, 0], [0, 0, 1]]
        assert not aut_star_H_member(S12, b)
        # nonzero lower-left block fails
        c = [[1, 0, 0], [1, 1, 0], [0, 0, 1]]
        assert not aut_star_H_member(S12, c)
        # x-block must be the identity
        d = [[2, 0, 0], [0, 1, 0], [0, 0, 1]]
        assert not aut_star_H_member(S12, d)


class TestThetaRealize:
    @pytest.mark.parametrize("g,n,k", [(0, 4, 2), (1, 2, 2), (0, 3, 3)])
    def test_round_trip_on_basis(self, g, n, k):
        sig = Signature(g, n)
        for t in dk_basis(sig, k)[:4]:
            phi = realize(t)
            assert phi.level == k + 2
            assert theta(phi).coords() == t.coords()

    def test_additive_on_pairs(self):
        sig = Signature(0, 4)
        basis = dk_basis(sig, 3)
        a, b = basis[0], basis[1]
        combined = theta(nilaut.compose(realize(b), realize(a)))
        assert combined.coords() == (a + b).coords()

    def test_zero_realizes_to_identity_class(self):
        sig = Signature(0, 3)
        z = GradedTuple.zero(sig, 2)
        assert theta(realize(z)).coords() == z.coords()


class TestInvert:
    @pytest.mark.parametrize("level", [2, 3, 4])
    def test_two_sided_inverse(self, level):
        rng = random.Random(level)
        phi = derive_eta(random_model(S12, level, rng, mixing=True))
        psi = invert(phi)
        ident = NilAut.identity(S12, level)
        assert nilaut.compose(phi, psi) == ident
        assert nilaut.compose(psi, phi) == ident
