"""
Components package: words, sequences, language tables and block maps.
"""

from .block_maps import BlockMap, apply_to_sequence, apply_to_word, build_collapse, build_pi, build_pi_factors, compose
from .language import LanguageTable, SaturationPolicy, build_language, detect_eventual_periodicity
from .words import Alphabet, DomainError, SequenceKind, SymbolicSequence, Word, shift, window

__all__ = [
    'BlockMap', 'apply_to_sequence', 'apply_to_word', 'build_collapse', 'build_pi', 'build_pi_factors', 'compose',
    'LanguageTable', 'SaturationPolicy', 'build_language', 'detect_eventual_periodicity',
    'Alphabet', 'DomainError', 'SequenceKind', 'SymbolicSequence', 'Word', 'shift', 'window',
]
