"""Size caps shared by the constructors and the search routines.

Defaults can be overridden with the ``MXK_CAPS`` environment variable, e.g.
``MXK_CAPS="columns=5000,iso=14"``.
"""

from __future__ import annotations

import os

DEFAULT_CAPS = {
    "field": 1024,  # largest q for field_make
    "group": 64,  # largest group order
    "columns": 2048,  # largest linear matroid
    "iso": 16,  # largest ground set for isomorphism search
    "edges": 14,  # frame_circuits enumeration
    "theta": 12,  # exhaustive theta-property check
    "towers": 4,  # largest tower order for enumeration
    "graph": 12,  # exhaustive graph minor search
    "minor_elements": 64,  # minor-search ground set
    "minor_rank": 8,
}


class CapExceeded(ValueError):
    """Raised when an input is larger than the configured cap."""


def caps() -> dict:
    out = dict(DEFAULT_CAPS)
    raw = os.environ.get("MXK_CAPS", "").strip()
    if raw:
        for item in raw.split(","):
            if not item.strip():
                continue
            key, _, value = item.partition("=")
            key = key.strip()
            if key not in out:
                raise ValueError(f"unknown cap {key!r} in MXK_CAPS")
            out[key] = int(value)
    return out


def cap(name: str) -> int:
    return caps()[name]


def check_cap(name: str, value: int, what: str = "", override: int | None = None) -> None:
    limit = cap(name) if override is None else override
    if value > limit:
        label = what or name
        raise CapExceeded(
            f"{label} = {value} exceeds the {name} cap of {limit}; "
            f"raise it with MXK_CAPS={name}=<n>"
        )
