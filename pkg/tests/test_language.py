"""
Unit tests for language tables and eventual periodicity detection.
"""
import unittest
import sys
import os

import numpy as np

# Add the parent directory to the path to import from src
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.components.language import (
    SaturationPolicy,
    build_language,
    detect_eventual_periodicity,
    factors_of,
    window_counts,
)
from src.components.words import (
    Alphabet,
    ArraySequence,
    DomainError,
    EventuallyPeriodicSequence,
    PeriodicSequence,
    Word,
)


BINARY = Alphabet.from_renderings(["0", "1"])


class TestWindowCounts(unittest.TestCase):
    """Test cases for the suffix-ordering word counts."""

    def test_periodic_block(self):
        """Test counts of a repeated 0011 block."""
        data = np.tile(np.array([0, 0, 1, 1], dtype=np.uint8), 100)
        self.assertEqual(window_counts(data, 5), [2, 4, 4, 4, 4])

    def test_matches_brute_force(self):
        """Test counts agree with brute-force factor sets on random data."""
        rng = np.random.default_rng(11)
        data = rng.integers(0, 3, size=500).astype(np.uint8)
        counts = window_counts(data, 8)
        for n in range(1, 9):
            self.assertEqual(counts[n - 1], len(factors_of(data, n)))

    def test_factors_of(self):
        """Test the brute-force factor set of a short word."""
        self.assertEqual(factors_of(bytes([0, 1, 1]), 2), {bytes([0, 1]), bytes([1, 1])})


class TestBuildLanguage(unittest.TestCase):
    """Test cases for build_language."""

    def test_periodic_point(self):
        """Test a period-2 point has two words of every length, all saturated."""
        table = build_language(PeriodicSequence(bytes([0, 1]), BINARY), 6)
        for n in range(1, 8):
            self.assertEqual(table.count(n), 2)
            self.assertTrue(table.is_saturated(n))
        self.assertEqual(table.right_extensions(Word.of(0)), frozenset({1}))
        self.assertEqual(table.left_extensions(Word.of(0)), frozenset({1}))

    def test_sorted_words_and_membership(self):
        """Test canonical order and the membership operator."""
        table = build_language(PeriodicSequence(bytes([0, 0, 1, 1]), BINARY), 3)
        self.assertEqual(table.sorted_words(2), [Word.of(0, 0), Word.of(0, 1), Word.of(1, 0), Word.of(1, 1)])
        self.assertIn(Word.of(0, 0, 1), table)
        self.assertNotIn(Word.of(0, 1, 0), table)
        self.assertNotIn(Word.of(0, 0, 1, 1, 0), table)

    def test_right_special_words(self):
        """Test extension sets of the 0011 point: only 0 and 1 branch."""
        table = build_language(PeriodicSequence(bytes([0, 0, 1, 1]), BINARY), 3)
        self.assertEqual(table.right_extensions(Word.of(0)), frozenset({0, 1}))
        self.assertEqual(table.right_extensions(Word.of(0, 0)), frozenset({1}))

    def test_finite_data_saturation(self):
        """Test short random data leaves the long levels unsaturated."""
        rng = np.random.default_rng(3)
        seq = ArraySequence(rng.integers(0, 2, size=64).astype(np.uint8), BINARY)
        table = build_language(seq, 20, SaturationPolicy(initial_window=16, cap=1 << 10))
        self.assertEqual(table.window, (0, 63))
        self.assertFalse(table.is_saturated(21))

    def test_cap_stops_growth(self):
        """Test the window never grows past the cap."""
        seq = ArraySequence(np.zeros(5000, dtype=np.uint8), BINARY)
        table = build_language(seq, 4, SaturationPolicy(initial_window=16, cap=256))
        self.assertLessEqual(table.width, 256)

    def test_rejects_nonpositive_n_max(self):
        """Test n_max must be positive."""
        with self.assertRaises(DomainError):
            build_language(PeriodicSequence(bytes([0]), BINARY), 0)


class TestDetectEventualPeriodicity(unittest.TestCase):
    """Test cases for detect_eventual_periodicity."""

    def test_right_tail(self):
        """Test the least period and onset of an eventually periodic tail."""
        seq = EventuallyPeriodicSequence(bytes([1, 1, 1]), bytes([0, 1]), BINARY)
        found = detect_eventual_periodicity(seq, "right", 64)
        self.assertEqual(found.period, 2)
        self.assertEqual(found.onset, 2)

    def test_both_tails_of_periodic_point(self):
        """Test both directions of a bi-infinite periodic point."""
        seq = PeriodicSequence(bytes([0, 0, 1, 1]), BINARY)
        for direction in ("left", "right"):
            found = detect_eventual_periodicity(seq, direction, 256)
            self.assertEqual(found.period, 4)
            self.assertEqual(found.direction, direction)

    def test_nothing_found(self):
        """Test random data has no short period inside the horizon."""
        rng = np.random.default_rng(5)
        seq = ArraySequence(rng.integers(0, 2, size=400).astype(np.uint8), BINARY)
        self.assertIsNone(detect_eventual_periodicity(seq, "right", 400))

    def test_left_needs_bi_infinite(self):
        """Test reading to the left of a right-infinite sequence is rejected."""
        seq = EventuallyPeriodicSequence(b"", bytes([0, 1]), BINARY)
        with self.assertRaises(DomainError):
            detect_eventual_periodicity(seq, "left", 64)


if __name__ == '__main__':
    unittest.main()
