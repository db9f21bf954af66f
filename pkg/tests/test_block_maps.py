"""
Unit tests for sliding block codes.
"""
import unittest
import sys
import os
from itertools import product

import numpy as np

# Add the parent directory to the path to import from src
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.components.block_maps import (
    BlockMap,
    apply_to_sequence,
    apply_to_word,
    build_collapse,
    build_letter_collapse,
    build_pi,
    build_pi_factors,
    build_reduction,
    collapsed_symbols,
    compose,
    identity,
    preimage_census,
    smallest_disjoint_r,
    table_map,
)
from src.components.language import build_language
from src.components.words import (
    Alphabet,
    DomainError,
    EventuallyPeriodicSequence,
    PeriodicSequence,
    Word,
    shift,
    window,
)
from src.generators.families import recurrent_sharp_family, stitched_family
from src.generators.schedule import GrowthFunction, make_schedule


TERNARY = Alphabet.integers(0, 2)
BINARY = Alphabet.integers(0, 1)


def random_table(rng, width, target_size):
    return {bytes(w): int(rng.integers(0, target_size)) for w in product(range(3), repeat=width)}


class TestBlockMapCoherence(unittest.TestCase):
    """Test cases for applying block maps to words and sequences."""

    def setUp(self):
        self.rng = np.random.default_rng(2024)
        self.seq = PeriodicSequence(self.rng.integers(0, 3, size=997).astype(np.uint8).tobytes(), TERNARY)
        self.f = table_map(random_table(self.rng, 3, 3), 1, TERNARY, TERNARY, name="f")
        self.g = table_map(random_table(self.rng, 2, 2), 0, TERNARY, BINARY, name="g")

    def test_word_and_sequence_agree(self):
        """Test f(x)[lo..hi] equals f applied to x[lo-m..hi+a]."""
        image = apply_to_sequence(self.f, self.seq)
        for lo in self.rng.integers(-5000, 5000, size=20).tolist():
            hi = lo + int(self.rng.integers(0, 40))
            expected = apply_to_word(self.f, window(self.seq, lo - 1, hi + 1))
            self.assertEqual(window(image, lo, hi), expected)

    def test_compose_equals_sequential(self):
        """Test (g . f)(x) == g(f(x)) on a long two-sided range."""
        gf = compose(self.g, self.f)
        self.assertEqual((gf.memory, gf.anticipation), (1, 2))
        direct = apply_to_sequence(gf, self.seq).block(-10000, 10000)
        sequential = apply_to_sequence(self.g, apply_to_sequence(self.f, self.seq)).block(-10000, 10000)
        self.assertTrue(np.array_equal(direct, sequential))

    def test_word_image_length(self):
        """Test the image of a word is shorter by memory plus anticipation."""
        w = Word.of(0, 1, 2, 2, 1, 0)
        self.assertEqual(len(apply_to_word(self.f, w)), 4)
        with self.assertRaises(DomainError):
            apply_to_word(self.f, Word.of(0, 1))

    def test_identity(self):
        """Test the identity map leaves a sequence unchanged."""
        image = apply_to_sequence(identity(TERNARY), self.seq)
        self.assertEqual(window(image, -50, 50), window(self.seq, -50, 50))

    def test_memory_on_right_infinite(self):
        """Test maps with memory cannot act on right-infinite sequences."""
        seq = EventuallyPeriodicSequence(b"", bytes([0, 1, 2]), TERNARY)
        with self.assertRaises(DomainError):
            apply_to_sequence(self.f, seq)

    def test_rule_outside_target(self):
        """Test a rule emitting a foreign symbol is caught."""
        bad = BlockMap(0, 0, TERNARY, BINARY, lambda w: 2, name="bad")
        with self.assertRaises(DomainError):
            bad.image(bytes([0]))

    def test_mixed_table_widths(self):
        """Test rule tables must use one window length."""
        with self.assertRaises(DomainError):
            table_map({bytes([0]): 1, bytes([0, 1]): 0}, 0, TERNARY, TERNARY)


class TestBlockMapLaws(unittest.TestCase):
    """Test cases for the sliding-block-code laws on many random windows."""

    def setUp(self):
        self.rng = np.random.default_rng(7)
        self.seq = PeriodicSequence(self.rng.integers(0, 3, size=1009).astype(np.uint8).tobytes(), TERNARY)
        self.f = table_map(random_table(self.rng, 4, 3), 2, TERNARY, TERNARY, name="f")

    def test_coherence_on_ten_thousand_windows(self):
        """Test f(x)[lo..hi] equals f applied to x[lo-m..hi+a] on 10^4 random windows."""
        image = apply_to_sequence(self.f, self.seq)
        los = self.rng.integers(-10000, 10000, size=10000).tolist()
        spans = self.rng.integers(0, 12, size=10000).tolist()
        for lo, span in zip(los, spans):
            hi = lo + span
            expected = apply_to_word(self.f, window(self.seq, lo - 2, hi + 1))
            self.assertEqual(window(image, lo, hi), expected)

    def test_shift_equivariance(self):
        """Test f(shift^k x) equals shift^k f(x)."""
        image = apply_to_sequence(self.f, self.seq)
        for k in (-1000, -7, 1, 13, 4321):
            shifted = apply_to_sequence(self.f, shift(self.seq, k))
            self.assertTrue(np.array_equal(shifted.block(-500, 500), image.block(-500 + k, 500 + k)))


class TestPiFactorsOnFamilies(unittest.TestCase):
    """Test cases for pi and its two factors on the recurrent families."""

    def assert_composition(self, x):
        r = smallest_disjoint_r(x)
        languages = x.minimal_languages(r)
        phi, psi = build_pi_factors(languages, r, x.alphabet)
        pi = build_pi(languages, r, x.alphabet)
        self.assertEqual((phi.width, psi.width, pi.width), (r, 2, r + 1))
        direct = apply_to_sequence(compose(psi, phi), x).block(-10000, 10000)
        sequential = apply_to_sequence(psi, apply_to_sequence(phi, x)).block(-10000, 10000)
        self.assertTrue(np.array_equal(direct, sequential))
        self.assertTrue(np.array_equal(apply_to_sequence(pi, x).block(-10000, 10000), sequential))

    def test_recurrent_family(self):
        """Test psi . phi equals psi after phi on the recurrent family."""
        self.assert_composition(recurrent_sharp_family(make_schedule(2, 0, GrowthFunction.sqrt())))

    def test_stitched_family(self):
        """Test psi . phi equals psi after phi on the stitched family."""
        self.assert_composition(stitched_family(make_schedule(2, 1, GrowthFunction.sqrt())))


class TestFactorMaps(unittest.TestCase):
    """Test cases for pi, collapse and reduction maps."""

    def test_build_pi(self):
        """Test pi collapses each minimal language and marks the boundaries."""
        pi = build_pi([frozenset({bytes([0])}), frozenset({bytes([1])})], 1, TERNARY)
        a1, a2 = collapsed_symbols(pi, 2)
        marker = pi.target.symbols[-1]
        self.assertEqual(pi.width, 2)
        self.assertEqual(pi.target.render(a1), "A")
        self.assertEqual(pi.target.render(a2), "B")
        image = apply_to_word(pi, Word.of(0, 0, 2, 1, 1))
        self.assertEqual(image, Word.of(a1, marker, marker, a2))

    def test_build_pi_rejects_overlap(self):
        """Test overlapping minimal languages are rejected."""
        with self.assertRaises(DomainError):
            build_pi([frozenset({bytes([0, 1])}), frozenset({bytes([0, 1]), bytes([1, 0])})], 2, TERNARY)

    def test_build_collapse(self):
        """Test the collapse map writes 0 exactly on the minimal words."""
        everything = frozenset(bytes(w) for w in product(range(2), repeat=2))
        f = build_collapse(frozenset({bytes([0, 0])}), 2, BINARY, everything)
        self.assertEqual(apply_to_word(f, Word.of(0, 0, 1, 0, 0)), Word.of(0, 1, 1, 0))
        with self.assertRaises(DomainError):
            build_collapse(everything, 2, BINARY, everything)

    def test_build_reduction(self):
        """Test the reduction map keeps only the marker."""
        f = build_reduction(TERNARY, 2)
        self.assertEqual(apply_to_word(f, Word.of(2, 0, 1, 2)), Word.of(0, 1, 1, 0))
        with self.assertRaises(DomainError):
            build_reduction(BINARY, 2)

    def test_preimage_census(self):
        """Test every 2-word of 0011 maps onto 00 under the letter collapse."""
        table = build_language(PeriodicSequence(bytes([0, 0, 1, 1]), BINARY), 3)
        f = build_letter_collapse(BINARY, BINARY, {1: 0})
        self.assertEqual(preimage_census(f, table, 2), {bytes([0, 0]): 4})


if __name__ == '__main__':
    unittest.main()
