"""
Calculations package: complexity statistics, empirical measures and input helpers.
"""

from .complexity import (
    BoundMode,
    BoundSpec,
    ComplexityProfile,
    SpecialWordReport,
    Verdict,
    bound_report,
    census_bound,
    check_counting,
    factor_preimage_check,
    minimal_candidates,
    morse_hedlund_classify,
    profile,
    special_census,
)
from .measures import (
    EmpiricalMeasure,
    WeakMetricSpec,
    empirical,
    ergodicity_probe,
    extract_generic_candidates,
    generic_limit_probe,
    point_mass,
    rs_window_cover_check,
    settling_verdict,
    shift_average_check,
    weak_distance,
)
from .utils import format_error_message, parse_int_list, sanitize_token, truncate_text, validate_family_params

__all__ = [
    'BoundMode', 'BoundSpec', 'ComplexityProfile', 'SpecialWordReport', 'Verdict', 'bound_report',
    'census_bound', 'check_counting', 'factor_preimage_check', 'minimal_candidates', 'morse_hedlund_classify',
    'profile', 'special_census',
    'EmpiricalMeasure', 'WeakMetricSpec', 'empirical', 'ergodicity_probe', 'extract_generic_candidates',
    'generic_limit_probe', 'point_mass', 'rs_window_cover_check', 'settling_verdict', 'shift_average_check',
    'weak_distance',
    'format_error_message', 'parse_int_list', 'sanitize_token', 'truncate_text', 'validate_family_params',
]
