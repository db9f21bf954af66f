"""
Generators package: Sturmian codings, exponent schedules and the sequence families built from them.
"""

from .families import (
    FamilySequence,
    from_tails,
    nonrecurrent_example,
    periodic,
    recurrent_sharp_family,
    staircase,
    stitched_family,
    transitive_family,
)
from .schedule import (
    ExponentSchedule,
    GrowthFunction,
    RunLengthSchedule,
    ScheduleSearchError,
    make_schedule,
    ruler,
)
from .sturmian import (
    CodingAmbiguityError,
    SturmianParams,
    central_lengths,
    characteristic_word,
    continued_fraction,
    parse_slope,
    sturmian,
)

__all__ = [
    'FamilySequence', 'from_tails', 'nonrecurrent_example', 'periodic', 'recurrent_sharp_family',
    'staircase', 'stitched_family', 'transitive_family',
    'ExponentSchedule', 'GrowthFunction', 'RunLengthSchedule', 'ScheduleSearchError', 'make_schedule', 'ruler',
    'CodingAmbiguityError', 'SturmianParams', 'central_lengths', 'characteristic_word', 'continued_fraction',
    'parse_slope', 'sturmian',
]
