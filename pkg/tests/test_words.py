"""Free-group word arithmetic and parsing."""

import pytest
from hypothesis import given, settings, strategies as st

from freenil.words import (
    Signature,
    Word,
    WordError,
    boundary_word,
    commutator,
    parse_word,
)

S03 = Signature(0, 3)
S12 = Signature(1, 2)


def words(sig, max_len=8):
    pair = st.tuples(
        st.integers(0, sig.rank - 1), st.integers(-3, 3).filter(bool)
    )
    return st.lists(pair, max_size=max_len).map(
        lambda ps: Word.from_pairs(sig, ps)
    )


class TestSignature:
    def test_rank(self):
        assert S03.rank == 2
        assert S12.rank == 3
        assert Signature(2, 1).rank == 4

    def test_flat_indices(self):
        assert S12.x(1) == 0
        assert S12.m(1) == 1
        assert S12.l(1) == 2

    def test_gen_names_round_trip(self):
        for idx in S12.generators():
            assert S12.parse_gen(S12.gen_name(idx)) == idx

    def test_bad_generator(self):
        with pytest.raises(WordError):
            S03.parse_gen("x3")
        with pytest.raises(WordError):
            S03.parse_gen("m1")

    def test_invalid_signature(self):
        with pytest.raises(ValueError):
            Signature(-1, 2)
        with pytest.raises(ValueError):
            Signature(0, 0)


class TestWord:
    def test_free_reduction(self):
        w = Word.from_pairs(S03, [(0, 2), (0, -2), (1, 1)])
        assert list(w) == [(1, 1)]

    def test_merge_adjacent(self):
        w = Word.from_pairs(S03, [(0, 1), (0, 2)])
        assert list(w) == [(0, 3)]

    def test_cancellation_cascades(self):
        # x1 x2 x2^-1 x1^-1 collapses entirely
        w = Word.from_pairs(S03, [(0, 1), (1, 1), (1, -1), (0, -1)])
        assert not w

    def test_str(self):
        w = parse_word(S12, "x1 m1^-2 l1")
        assert str(w) == "x1 m1^-2 l1"
        assert str(Word.identity(S12)) == ""

    @settings(max_examples=50, deadline=None)
    @given(words(S12))
    def test_parse_str_round_trip(self, w):
        assert parse_word(S12, str(w)) == w

    @settings(max_examples=50, deadline=None)
    @given(words(S12), words(S12))
    def test_inverse_law(self, a, b):
        assert (a * b).inverse() == b.inverse() * a.inverse()
        assert not (a * a.inverse())

    @settings(max_examples=30, deadline=None)
    @given(words(S03), st.integers(-3, 3))
    def test_power_abelianization(self, w, k):
        ab = (w ** k).abelianization()
        assert ab == [k * c for c in w.abelianization()]

    def test_conjugate(self):
        a, b = Word.gen(S03, 0), Word.gen(S03, 1)
        assert a.conjugate_by(b) == b.inverse() * a * b

    def test_mismatched_signatures(self):
        with pytest.raises(WordError):
            Word.gen(S03, 0) * Word.gen(S12, 0)


class TestCommutatorAndBoundary:
    def test_commutator_convention(self):
        # [a, b] = a^-1 b^-1 a b
        a, b = Word.gen(S03, 0), Word.gen(S03, 1)
        assert commutator(a, b) == a.inverse() * b.inverse() * a * b

    def test_boundary_planar(self):
        assert str(boundary_word(S03)) == "x1 x2"

    def test_boundary_genus(self):
        assert str(boundary_word(S12)) == "x1 m1^-1 l1^-1 m1 l1"
        assert str(boundary_word(Signature(1, 1))) == "m1^-1 l1^-1 m1 l1"

    def test_boundary_abelianizes_to_x_sum(self):
        ab = boundary_word(S12).abelianization()
        assert ab == [1, 0, 0]


class TestParsing:
    def test_exponents(self):
        w = parse_word(S03, "x1^3 x2^-1")
        assert list(w) == [(0, 3), (1, -1)]

    def test_empty_is_identity(self):
        assert parse_word(S03, "") == Word.identity(S03)
        assert parse_word(S03, "   ") == Word.identity(S03)

    def test_bad_exponent(self):
        with pytest.raises(WordError):
            parse_word(S03, "x1^two")

    def test_error_carries_position(self):
        with pytest.raises(WordError) as err:
            parse_word(S03, "x1 q7 x2")
        assert err.value.pos == 3
        assert err.value.text == "x1 q7 x2"

    def test_out_of_range_generator(self):
        with pytest.raises(WordError):
            parse_word(S03, "x3")
