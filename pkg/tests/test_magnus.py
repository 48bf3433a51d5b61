"""Truncated series arithmetic and the Magnus expansion."""

import pytest
from hypothesis import given, settings, strategies as st

from freenil.words import Signature, Word, commutator, parse_word
from freenil.magnus import (
    AtLeast,
    DepthTooSmall,
    TruncatedSeries,
    depth,
    equal_mod,
    expand,
    leading_part,
)

S03 = Signature(0, 3)
S12 = Signature(1, 2)


def words(sig, max_len=6):
    pair = st.tuples(
        st.integers(0, sig.rank - 1), st.integers(-2, 2).filter(bool)
    )
    return st.lists(pair, max_size=max_len).map(
        lambda ps: Word.from_pairs(sig, ps)
    )


class TestExpansion:
    def test_generator(self):
        s = expand(Word.gen(S03, 0), 3)
        assert s.coeffs == {(): 1, (0,): 1}

    def test_positive_power_binomials(self):
        s = expand(Word.gen(S03, 0, 3), 3)
        assert s.coeffs == {(): 1, (0,): 3, (0, 0): 3, (0, 0, 0): 1}

    def test_negative_power_binomials(self):
        # (1+X)^-1 = 1 - X + X^2 - X^3 + ...
        s = expand(Word.gen(S03, 0, -1), 3)
        assert s.coeffs == {(): 1, (0,): -1, (0, 0): 1, (0, 0, 0): -1}

    def test_commutator_leading_term(self):
        w = commutator(Word.gen(S03, 0), Word.gen(S03, 1))
        s = expand(w, 2)
        assert s.coeffs == {(): 1, (0, 1): 1, (1, 0): -1}

    def test_str_ordering(self):
        w = commutator(Word.gen(S03, 0), Word.gen(S03, 1))
        assert str(expand(w, 2)) == "1 + X1X2 - X2X1"

    def test_identity(self):
        assert str(expand(Word.identity(S03), 3)) == "1"

    @settings(max_examples=40, deadline=None)
    @given(words(S12), words(S12))
    def test_multiplicative(self, a, b):
        assert expand(a * b, 3).coeffs == (expand(a, 3) * expand(b, 3)).coeffs

    @settings(max_examples=30, deadline=None)
    @given(words(S12))
    def test_inverse_series(self, w):
        unit = TruncatedSeries.unit(S12, 3)
        assert (expand(w, 3) * expand(w.inverse(), 3)).coeffs == unit.coeffs
        assert (expand(w, 3) * expand(w, 3).inverse()).coeffs == unit.coeffs


class TestSeriesArithmetic:
    def test_bound_mismatch(self):
        a = TruncatedSeries.unit(S03, 2)
        b = TruncatedSeries.unit(S03, 3)
        with pytest.raises(ValueError):
            a * b

    def test_pow_negative(self):
        s = expand(Word.gen(S03, 1), 4)
        assert (s ** -2).coeffs == expand(Word.gen(S03, 1, -2), 4).coeffs

    def test_retruncate_only_down(self):
        s = expand(Word.gen(S03, 0), 3)
        assert s.retruncate(1).coeffs == {(): 1, (0,): 1}
        with pytest.raises(ValueError):
            s.retruncate(4)

    def test_inverse_needs_unit_constant(self):
        with pytest.raises(ValueError):
            TruncatedSeries.zero(S03, 2).inverse()


class TestDepth:
    def test_generator_depth(self):
        assert depth(Word.gen(S03, 0), 4) == 1

    def test_commutator_depth(self):
        c = commutator(Word.gen(S03, 0), Word.gen(S03, 1))
        assert depth(c, 4) == 2

    def test_nested_commutator_depth(self):
        c = commutator(Word.gen(S03, 0), Word.gen(S03, 1))
        cc = commutator(c, Word.gen(S03, 1))
        assert depth(cc, 4) == 3

    def test_identity_depth_is_bounded_below(self):
        d = depth(Word.identity(S03), 4)
        assert isinstance(d, AtLeast)
        assert d >= 999  # AtLeast compares as always-greater


class TestEqualModAndLeading:
    def test_equal_mod_commutator(self):
        a, b = Word.gen(S03, 0), Word.gen(S03, 1)
        assert equal_mod(a * b, b * a, 2)
        assert not equal_mod(a * b, b * a, 3)

    def test_leading_part_commutator(self):
        c = commutator(Word.gen(S03, 0), Word.gen(S03, 1))
        h = leading_part(c, 2)
        assert h.coeffs == {(0, 1): 1, (1, 0): -1}

    def test_leading_part_depth_guard(self):
        with pytest.raises(DepthTooSmall):
            leading_part(Word.gen(S03, 0), 2)

    def test_surface_relation_depth(self):
        # x1 x2 equals the planar boundary word exactly
        w = parse_word(S03, "x1 x2") * parse_word(S03, "x2^-1 x1^-1")
        assert isinstance(depth(w, 5), AtLeast)
