"""
The experiment catalog.

Every entry names what it verifies, the tag and text of the statement it
reproduces and its default parameters. Defaults are chosen so the schedule families saturate at
least three generations, or 200 levels, within the default cap.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import pandas as pd

from ..components.words import DomainError
from ..integrations.config import Settings
from . import runners
from .report import Findings

Runner = Callable[[Dict[str, Any], Settings, Findings], None]


@dataclass(frozen=True)
class ExperimentSpec:
    """
    A named, fully deterministic experiment.

    ``tag`` is the short label of the statement it reproduces and ``anchor`` the
    statement itself; ``variants`` maps a tag suffix to parameter overrides.
    """

    name: str
    claim: str
    defaults: Dict[str, Any]
    runner: Runner = field(repr=False, compare=False)
    tag: str = ""
    anchor: str = ""
    variants: Dict[str, Dict[str, Any]] = field(default_factory=dict, compare=False)

    def resolve(self, overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Defaults with ``overrides`` applied; unknown keys are rejected."""
        params = dict(self.defaults)
        for key, value in (overrides or {}).items():
            if key not in params:
                raise DomainError(f"{self.name} has no parameter {key!r} (known: {', '.join(sorted(params))})")
            params[key] = value
        return params


CATALOG: List[ExperimentSpec] = [
    ExperimentSpec(
        "recurrent-bounds",
        "A recurrent point with j minimal subsystems, i of them infinite, has c(n) - (j+i)n unbounded "
        "from below along every tail, and the bounds are sharp: the recurrent family stays under "
        "(j+1)n + g(n) and under jn + g(n) at the start of each generation; stitching i letters adds exactly in.",
        {
            "j": [2, 3],
            "growth": ["log2", "sqrt"],
            "margin": 1,
            "n_max": 200,
            "stitched": [[2, 1], [3, 1], [3, 2]],
            "stitched_growth": "sqrt",
            "stitched_n_max": 100,
        },
        runners.recurrent_bounds,
        tag="T1.1",
        anchor="the following bounds hold and are sharp",
    ),
    ExperimentSpec(
        "transitive-bounds",
        "For j >= 3 a transitive point with j minimal subsystems has c(n) - jn tending to infinity, "
        "and the transitive family stays below jn + g(n).",
        {"j": [3, 4], "growth": ["sqrt"], "margin": 1, "n_max": 200},
        runners.transitive_bounds,
        tag="T1.2",
        anchor="liminf (c_X(n) - (j+i)n) = infinity for a transitive X with j >= 3 minimal subsystems",
    ),
    ExperimentSpec(
        "sturmian-exact",
        "A Sturmian coding has exactly n + 1 words of each length n.",
        {"beta": "golden", "x0": None, "n_max": 200},
        runners.sturmian_exact,
        tag="T2.1",
        anchor="c_X(n) = n+1 for all n >= 1",
    ),
    ExperimentSpec(
        "morse-hedlund",
        "c(n) <= n for some n forces eventual periodicity; the period is recovered from both tails.",
        {"words": ["01", "0011"], "n_max": 16, "horizon": 4096},
        runners.morse_hedlund,
        tag="T2.2",
        anchor="if there exists n >= 1 such that c_X(n) <= n, then X is a finite set of periodic points",
    ),
    ExperimentSpec(
        "single-minimal-bound",
        "A recurrent non-minimal point has c(n) - 3n/2 unbounded along a subsequence.",
        {"j": 2, "growth": "sqrt", "n_max": 200, "stitched": [2, 1], "stitched_n_max": 100},
        runners.single_minimal_bound,
        tag="T2.3",
        anchor="if X is not minimal, then c_X(n) - 1.5n is unbounded along a subsequence, and this bound is sharp",
    ),
    ExperimentSpec(
        "infinite-minimal-collapse",
        "A recurrent point with an infinite minimal subsystem has c(n) - 5n/2 unbounded along a subsequence; "
        "collapsing that subsystem to a fixed point loses at least n words of each length.",
        {"j": 2, "i": 1, "growth": "sqrt", "n_max": 100},
        runners.infinite_minimal_collapse,
        tag="T2.5",
        anchor="if X properly contains an infinite minimal subsystem, then c_X(n) - 2.5n is unbounded "
        "along a subsequence, and this bound is sharp",
    ),
    ExperimentSpec(
        "nonrecurrent-exact",
        "The two nonrecurrent witnesses have exact complexity: n + 1 then 2n - N + 1 for one infinite "
        "minimal subsystem, and 2n up to N for two.",
        {"N": [5, 10, 20], "cases": ["i1", "i2"], "n_max": 150},
        runners.nonrecurrent_exact,
        tag="T4.1",
        anchor="liminf (c_X(n) - (i+1)n) > -infinity, and the -infinity cannot be replaced by any integer",
        variants={"i1": {"cases": ["i1"]}, "i2": {"cases": ["i2"]}},
    ),
    ExperimentSpec(
        "transitive-census",
        "The transitive family has j right-special words of each length, and j + 1 exactly on the "
        "ranges (n_k, n_k + n_(k-1)].",
        {"j": [3, 4], "growth": "sqrt", "n_max": 200},
        runners.transitive_census,
        tag="T4.2",
        anchor="the bound c_X(n) - (j+i)n unbounded along a subsequence holds and is sharp",
    ),
    ExperimentSpec(
        "factor-preimage",
        "The map collapsing the minimal subsystems satisfies c_X(n) >= c_pi(X)(n - r) + in, and the "
        "collapsed constant words are right- and left-special in the image.",
        {"j": 2, "i": 1, "growth": "sqrt", "n_max": 60},
        runners.factor_preimage,
        tag="L3.1",
        anchor="for every n > r, c_X(n) >= c_pi(X)(n-r) + in",
    ),
    ExperimentSpec(
        "special-census",
        "The recurrent family has at least j and at most j + 2 right-special words of each length, "
        "j on the gaps between generations.",
        {"j": [2, 3], "growth": ["sqrt", "log2"], "n_max": 200},
        runners.right_special_census,
        tag="P3.8",
        anchor="#RS(n) <= j + 2, and #RS(n) <= j between generations",
    ),
    ExperimentSpec(
        "staircase-generic",
        "The staircase 0 11 000 1111 ... is generic for the average of the two point masses.",
        {"n": 1000000, "depth": 4, "lengths": [10000, 100000, 1000000], "tolerance": 0.01},
        runners.staircase_generic,
        tag="§5-staircase",
        anchor="the staircase is generic for (delta_0 + delta_1)/2",
    ),
    ExperimentSpec(
        "generic-extraction",
        "A point with fewer than g right-special words at a level where c(n) < 2gn has at most g - 1 "
        "generic measures, recovered from the right-special words.",
        {
            "staircase_g": 3,
            "sturmian_g": 2,
            "beta": "golden",
            "x0": None,
            "n_max": 30,
            "cover_max_n": 30,
            "tolerance": 0.02,
            "ergodic_starts": [0, 10007, 50021],
            "ergodic_length": 20000,
        },
        runners.generic_extraction,
        tag="T1.4-extract",
        anchor="if liminf (c_X(n) - gn) = -infinity, then X has at most g-1 generic measures",
    ),
]

_BY_KEY: Dict[str, ExperimentSpec] = {key: spec for spec in CATALOG for key in (spec.name, spec.tag)}


def get_experiment(key: str) -> ExperimentSpec:
    """The experiment with this name or tag."""
    try:
        return _BY_KEY[key]
    except KeyError:
        raise DomainError(f"unknown experiment {key!r}; run 'list' for the catalog") from None


def select_experiment(selector: str) -> Tuple[ExperimentSpec, Dict[str, Any]]:
    """
    Resolve a name, a tag, or a tag with a variant suffix such as ``T4.1-i2``.

    Returns:
        Tuple[ExperimentSpec, Dict[str, Any]]: the experiment and the overrides its variant implies
    """
    if selector in _BY_KEY:
        return _BY_KEY[selector], {}
    base, sep, variant = selector.rpartition("-")
    spec = _BY_KEY.get(base) if sep else None
    if spec is None or variant not in spec.variants:
        raise DomainError(f"unknown experiment {selector!r}; run 'list' for the catalog")
    return spec, dict(spec.variants[variant])


def list_experiments() -> pd.DataFrame:
    """One row per experiment: tag, name, anchor, claim and default parameters."""
    return pd.DataFrame(
        {
            "tag": [spec.tag for spec in CATALOG],
            "name": [spec.name for spec in CATALOG],
            "anchor": [spec.anchor for spec in CATALOG],
            "claim": [spec.claim for spec in CATALOG],
            "defaults": [spec.defaults for spec in CATALOG],
        }
    )
