"""
Unit tests for alphabets, words and sequence views.
"""
import unittest
import sys
import os

import numpy as np

# Add the parent directory to the path to import from src
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.components.words import (
    Alphabet,
    ArraySequence,
    DomainError,
    EventuallyPeriodicSequence,
    PeriodicSequence,
    SequenceKind,
    TwoSidedSequence,
    Word,
    restrict_right,
    shift,
    window,
)


BINARY = Alphabet.from_renderings(["0", "1"])


class TestAlphabet(unittest.TestCase):
    """Test cases for Alphabet."""

    def test_from_renderings(self):
        """Test symbols are numbered in rendering order."""
        abc = Alphabet.from_renderings(["a", "b", "c"])
        self.assertEqual(abc.symbols, (0, 1, 2))
        self.assertEqual(abc.render(2), "c")
        self.assertEqual(abc.parse("b"), 1)
        self.assertTrue(abc.single_char)

    def test_integers(self):
        """Test the integer alphabet renders multi-digit symbols with spaces."""
        digits = Alphabet.integers(0, 11)
        self.assertEqual(len(digits), 12)
        self.assertFalse(digits.single_char)
        self.assertEqual(digits.render_word(Word.of(10, 2)), "10 2")

    def test_rejects_duplicates(self):
        """Test duplicate renderings and symbols are rejected."""
        with self.assertRaises(DomainError):
            Alphabet.from_renderings(["a", "a"])
        with self.assertRaises(DomainError):
            Alphabet((1, 1), ("a", "b"))

    def test_rejects_bad_tokens(self):
        """Test whitespace and comment markers are not valid renderings."""
        for token in ["", "a b", "#x"]:
            with self.assertRaises(DomainError):
                Alphabet.from_renderings([token, "z"])

    def test_extended(self):
        """Test fresh symbols avoid the existing ones."""
        alphabet = Alphabet((0, 2), ("a", "c"))
        extended, fresh = alphabet.extended(["b", "d"])
        self.assertEqual(fresh, (1, 3))
        self.assertEqual(extended.render(1), "b")

    def test_unknown_symbol(self):
        """Test lookups outside the alphabet raise DomainError."""
        with self.assertRaises(DomainError):
            BINARY.index(7)
        with self.assertRaises(DomainError):
            BINARY.parse("2")


class TestWord(unittest.TestCase):
    """Test cases for Word."""

    def test_parse_and_render(self):
        """Test parsing a rendered word gives it back."""
        w = Word.parse(BINARY, "0110")
        self.assertEqual(w.symbols, bytes([0, 1, 1, 0]))
        self.assertEqual(w.render(BINARY), "0110")

    def test_slicing_and_concatenation(self):
        """Test slices are words and indexing gives symbols."""
        w = Word.of(0, 1, 1, 0)
        self.assertEqual(w[1:3], Word.of(1, 1))
        self.assertEqual(w[0], 0)
        self.assertEqual(w + Word.of(1), Word.of(0, 1, 1, 0, 1))
        self.assertEqual(len(w), 4)

    def test_is_constant(self):
        """Test constant detection, including the empty word."""
        self.assertTrue(Word.of(1, 1, 1).is_constant())
        self.assertTrue(Word().is_constant())
        self.assertFalse(Word.of(1, 0).is_constant())

    def test_over_checks_alphabet(self):
        """Test Word.over rejects foreign symbols."""
        with self.assertRaises(DomainError):
            Word.over(BINARY, [0, 2])

    def test_sort_key(self):
        """Test words order by length first."""
        words = [Word.of(1), Word.of(0, 0), Word.of(0)]
        self.assertEqual(sorted(words, key=Word.sort_key), [Word.of(0), Word.of(1), Word.of(0, 0)])


class TestSequences(unittest.TestCase):
    """Test cases for the lazily evaluated sequences."""

    def test_periodic_both_directions(self):
        """Test a bi-infinite periodic point repeats on both sides of the origin."""
        seq = PeriodicSequence(bytes([0, 0, 1]), BINARY)
        self.assertEqual(window(seq, -3, 5), Word.of(0, 0, 1, 0, 0, 1, 0, 0, 1))
        self.assertEqual(seq.symbol_at(-1), 1)

    def test_eventually_periodic(self):
        """Test the prefix comes before the repeated period."""
        seq = EventuallyPeriodicSequence(bytes([1, 1]), bytes([0, 1]), BINARY)
        self.assertEqual(window(seq, 0, 5), Word.of(1, 1, 0, 1, 0, 1))
        with self.assertRaises(DomainError):
            seq.block(-1, 2)

    def test_two_sided(self):
        """Test the left half is read outwards from the origin."""
        left = EventuallyPeriodicSequence(bytes([1]), bytes([0]), BINARY)
        right = PeriodicSequence(bytes([1]), BINARY, kind=SequenceKind.RIGHT_INFINITE)
        seq = TwoSidedSequence(left, right, BINARY, left.provenance)
        self.assertEqual(window(seq, -3, 1), Word.of(0, 0, 1, 1, 1))

    def test_shift(self):
        """Test shift(seq, k)[i] == seq[i + k] and shifts compose."""
        data = np.arange(10, dtype=np.uint8) % 2
        seq = ArraySequence(data, BINARY)
        shifted = shift(shift(seq, 3), 2)
        for i in range(5):
            self.assertEqual(shifted.symbol_at(i), seq.symbol_at(i + 5))
        with self.assertRaises(DomainError):
            shift(seq, -1)

    def test_restrict_right(self):
        """Test restriction of a bi-infinite sequence starts at the given index."""
        seq = PeriodicSequence(bytes([0, 1, 1]), BINARY)
        tail = restrict_right(seq, -1)
        self.assertIs(tail.kind, SequenceKind.RIGHT_INFINITE)
        self.assertEqual(window(tail, 0, 3), Word.of(1, 0, 1, 1))

    def test_array_bounds(self):
        """Test finite data reports its index range and rejects reads past it."""
        seq = ArraySequence(np.array([0, 1, 1, 0, 1], dtype=np.uint8), BINARY,
                            origin=2, kind=SequenceKind.BI_INFINITE)
        self.assertEqual(seq.first_index, -2)
        self.assertEqual(seq.last_index, 2)
        self.assertEqual(window(seq, -2, 0), Word.of(0, 1, 1))
        with self.assertRaises(DomainError):
            seq.block(0, 3)

    def test_array_rejects_foreign_symbols(self):
        """Test data must use the declared alphabet."""
        with self.assertRaises(DomainError):
            ArraySequence(np.array([0, 2], dtype=np.uint8), BINARY)

    def test_invalid_range(self):
        """Test lo > hi is rejected."""
        seq = PeriodicSequence(bytes([0, 1]), BINARY)
        with self.assertRaises(DomainError):
            seq.block(3, 2)


if __name__ == '__main__':
    unittest.main()
