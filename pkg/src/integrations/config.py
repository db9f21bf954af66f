"""
Workbench settings.

Resolution order (local first):
1) .workbench/settings.toml, section [workbench]
2) WORKBENCH_* environment variables
3) built-in defaults

Expected settings.toml structure:

[workbench]
CAP = 67108864
INITIAL_WINDOW = 1024
TRUNCATION = 16
GUARD_BITS = 64
PRECISION_BITS = 256
OUT_DIR = "reports"
FORMAT = "tsv"
NMAX = 200
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, replace
from typing import Any, Dict, Optional

import toml

from ..components.language import DEFAULT_CAP, DEFAULT_INITIAL_WINDOW, SaturationPolicy
from ..generators.sturmian import DEFAULT_GUARD_BITS, DEFAULT_PRECISION_BITS

logger = logging.getLogger(__name__)

SETTINGS_PATH = os.path.join(".workbench", "settings.toml")
ENV_PREFIX = "WORKBENCH_"
FORMATS = ("tsv", "json")

_INTEGER_KEYS = ("CAP", "INITIAL_WINDOW", "TRUNCATION", "GUARD_BITS", "PRECISION_BITS", "NMAX")


@dataclass(frozen=True)
class Settings:
    cap: int = DEFAULT_CAP
    initial_window: int = DEFAULT_INITIAL_WINDOW
    truncation: int = 16
    guard_bits: int = DEFAULT_GUARD_BITS
    precision_bits: int = DEFAULT_PRECISION_BITS
    out_dir: str = "reports"
    format: str = "tsv"
    n_max: int = 200

    def policy(self) -> SaturationPolicy:
        return SaturationPolicy(initial_window=self.initial_window, cap=self.cap)

    def with_overrides(self, **overrides: Any) -> "Settings":
        """Copy with the non-None overrides applied (CLI flags)."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


_FIELDS = {
    "CAP": "cap",
    "INITIAL_WINDOW": "initial_window",
    "TRUNCATION": "truncation",
    "GUARD_BITS": "guard_bits",
    "PRECISION_BITS": "precision_bits",
    "OUT_DIR": "out_dir",
    "FORMAT": "format",
    "NMAX": "n_max",
}


def _load_settings_file(path: str) -> Optional[Dict[str, Any]]:
    """Load the [workbench] table of a settings file if present."""
    if not os.path.exists(path):
        return None
    try:
        with open(path, "r") as f:
            data = toml.load(f)
    except (OSError, toml.TomlDecodeError) as e:
        logger.warning("could not load %s: %s", path, e)
        return None
    section = data.get("workbench")
    return section if isinstance(section, dict) else None


def _coerce(key: str, value: Any, default: Any) -> Any:
    if key in _INTEGER_KEYS:
        try:
            number = int(value)
        except (TypeError, ValueError):
            logger.warning("setting %s=%r is not an integer; using %r", key, value, default)
            return default
        if number < 1:
            logger.warning("setting %s=%r must be positive; using %r", key, value, default)
            return default
        return number
    if key == "FORMAT" and str(value) not in FORMATS:
        logger.warning("setting FORMAT=%r is not one of %s; using %r", value, FORMATS, default)
        return default
    return str(value)


def load_settings(path: str = SETTINGS_PATH, environ: Optional[Dict[str, str]] = None) -> Settings:
    """
    Resolve the workbench settings.

    Args:
        path: settings file location
        environ: environment mapping (defaults to os.environ)

    Returns:
        Settings: file values, then environment values, then defaults
    """
    env = os.environ if environ is None else environ
    defaults = Settings()
    from_file = _load_settings_file(path) or {}
    values: Dict[str, Any] = {}
    for key, attr in _FIELDS.items():
        default = getattr(defaults, attr)
        if key in from_file:
            values[attr] = _coerce(key, from_file[key], default)
        elif ENV_PREFIX + key in env:
            values[attr] = _coerce(key, env[ENV_PREFIX + key], default)
    if from_file:
        logger.info("using %s for workbench settings", path)
    return replace(defaults, **values)
