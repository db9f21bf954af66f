"""
Unit tests for utility functions.
"""
import unittest
import sys
import os

# Add the parent directory to the path to import from src
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.calculations.utils import (
    validate_family_params,
    parse_int_list,
    sanitize_token,
    format_error_message,
    truncate_text
)
from src.components.words import DomainError
from src.generators.schedule import ScheduleSearchError


class TestValidateFamilyParams(unittest.TestCase):
    """Test cases for validate_family_params function."""

    def test_valid_params(self):
        """Test validation of admissible (j, i) pairs."""
        for j, i in [(2, 0), (2, 1), (2, 2), (5, 3)]:
            is_valid, error_message = validate_family_params(j, i)
            self.assertTrue(is_valid)
            self.assertEqual(error_message, "")

    def test_too_few_subsystems(self):
        """Test that j below 2 is rejected."""
        is_valid, error_message = validate_family_params(1, 0)
        self.assertFalse(is_valid)
        self.assertEqual(error_message, "j must be at least 2.")

    def test_i_out_of_range(self):
        """Test that i must lie in 0..j."""
        is_valid, error_message = validate_family_params(3, 4)
        self.assertFalse(is_valid)
        self.assertIn("between 0 and j = 3", error_message)
        is_valid, _ = validate_family_params(3, -1)
        self.assertFalse(is_valid)


class TestParseIntList(unittest.TestCase):
    """Test cases for parse_int_list function."""

    def test_single_and_many(self):
        """Test parsing of one and several integers."""
        self.assertEqual(parse_int_list("1000"), [1000])
        self.assertEqual(parse_int_list("1, 10 ,100"), [1, 10, 100])

    def test_rejects_garbage(self):
        """Test that malformed lists raise ValueError."""
        for text in ["", "1,,2", "a,b", "1.5", "-3"]:
            with self.assertRaises(ValueError):
                parse_int_list(text)

    def test_rejects_zero(self):
        """Test that entries must be positive."""
        with self.assertRaises(ValueError):
            parse_int_list("0,5")


class TestSanitizeToken(unittest.TestCase):
    """Test cases for sanitize_token function."""

    def test_normal_token(self):
        """Test sanitization of a normal token."""
        self.assertEqual(sanitize_token("ab"), "ab")

    def test_control_characters(self):
        """Test removal of control characters and surrounding whitespace."""
        self.assertEqual(sanitize_token("  x\x00\x07y \n"), "xy")

    def test_empty_input(self):
        """Test sanitization of empty input."""
        self.assertEqual(sanitize_token(""), "")
        self.assertEqual(sanitize_token(None), "")


class TestFormatErrorMessage(unittest.TestCase):
    """Test cases for format_error_message function."""

    def test_domain_error(self):
        """Test formatting of domain errors."""
        result = format_error_message(DomainError("bad alphabet"))
        self.assertEqual(result, "Invalid argument: bad alphabet.")

    def test_schedule_error(self):
        """Test formatting of schedule search errors."""
        result = format_error_message(ScheduleSearchError("too large"))
        self.assertIn("Exponent schedule cannot be resolved", result)

    def test_file_not_found(self):
        """Test formatting of missing files."""
        result = format_error_message(FileNotFoundError("x.txt"))
        self.assertIn("File not found", result)

    def test_unknown_error(self):
        """Test formatting of unknown error types."""
        result = format_error_message(RuntimeError("Something went wrong"))
        self.assertIn("An unexpected error occurred", result)
        self.assertIn("Something went wrong", result)


class TestTruncateText(unittest.TestCase):
    """Test cases for truncate_text function."""

    def test_short_text(self):
        """Test truncation of text shorter than limit."""
        self.assertEqual(truncate_text("short", 10), "short")

    def test_long_text(self):
        """Test truncation of text longer than limit."""
        result = truncate_text("This is a very long text that should be truncated", 20)
        self.assertEqual(len(result), 20)
        self.assertTrue(result.endswith("..."))

    def test_exact_length(self):
        """Test truncation of text at exact limit."""
        self.assertEqual(truncate_text("x" * 10, 10), "x" * 10)


if __name__ == '__main__':
    unittest.main()
