"""Enumeration caps and seeds.

``MODPIMAGE_CAP`` in the environment overrides every enumeration cap.
"""

from __future__ import annotations

import os

DEFAULT_ENUMERATION_CAP = 2**26
DEFAULT_CENSUS_CAP = 10**8
FIELD_CAP = 2**16
DEFAULT_SEED = 20240501

# multiplicity_report stability heuristic
MIN_MULTIPLICITY = 5


def _env_cap() -> int | None:
    raw = os.environ.get("MODPIMAGE_CAP")
    if not raw:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"MODPIMAGE_CAP must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError("MODPIMAGE_CAP must be positive")
    return value


def enumeration_cap(override: int | None = None) -> int:
    if override is not None:
        return override
    return _env_cap() or DEFAULT_ENUMERATION_CAP


def census_cap(override: int | None = None) -> int:
    if override is not None:
        return override
    return _env_cap() or DEFAULT_CENSUS_CAP
