"""
Utility functions for input validation and error handling.
"""
import re
from typing import List, Tuple

_INTEGER_LIST = re.compile(r"^\s*\d+(\s*,\s*\d+)*\s*$")


def validate_family_params(j: int, i: int) -> Tuple[bool, str]:
    """
    Validate the (j, i) parameters of the recurrent families.

    Args:
        j (int): number of minimal subsystems
        i (int): number of stitched Sturmian letters

    Returns:
        Tuple[bool, str]: (is_valid, error_message)
    """
    if j < 2:
        return False, "j must be at least 2."
    if not 0 <= i <= j:
        return False, f"i must lie between 0 and j = {j}."
    return True, ""


def parse_int_list(text: str) -> List[int]:
    """
    Parse a comma separated list of positive integers such as "1000,10000".

    Args:
        text (str): the list as typed on the command line

    Returns:
        List[int]: the integers in order
    """
    if not text or not _INTEGER_LIST.match(text):
        raise ValueError(f"expected a comma separated list of integers, got {text!r}")
    values = [int(part) for part in text.split(",")]
    if any(v < 1 for v in values):
        raise ValueError("list entries must be positive")
    return values


def sanitize_token(text: str) -> str:
    """Strip control characters and surrounding whitespace from a symbol token."""
    if not text:
        return ""
    cleaned = "".join(char for char in text if ord(char) >= 32)
    return cleaned.strip()


def format_error_message(error: Exception) -> str:
    """
    Format error messages for user display.

    Args:
        error (Exception): The exception to format

    Returns:
        str: one-line message
    """
    error_type = type(error).__name__

    error_mappings = {
        'CodingAmbiguityError': f'Sturmian coding is ambiguous at the maximum precision: {error}. '
                                'Pick another starting point.',
        'ScheduleSearchError': f'Exponent schedule cannot be resolved: {error}.',
        'SequenceFormatError': f'Malformed input file: {error}.',
        'DomainError': f'Invalid argument: {error}.',
        'FileNotFoundError': f'File not found: {error}.',
    }

    return error_mappings.get(error_type, f"An unexpected error occurred: {str(error)}")


def truncate_text(text: str, max_length: int = 100) -> str:
    """
    Truncate text to a maximum length with ellipsis.

    Args:
        text (str): Text to truncate
        max_length (int): Maximum length before truncation

    Returns:
        str: Truncated text
    """
    if len(text) <= max_length:
        return text
    return text[:max_length-3] + "..."
