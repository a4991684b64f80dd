"""Numerical tolerance policy shared across modules."""
from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    residual: float = 1e-9
    selfadjoint: float = 1e-12
    ybe: float = 1e-8
    fingerprint: float = 1e-8
    classify: float = 1e-6
    identity: float = 1e-12
    pf: float = 1e-10
    fixture: float = 1e-9


TOLERANCES = Tolerances()


def default_precision() -> int:
    """Working precision in bits, overridable through CELLFORGE_PRECISION."""
    raw = os.environ.get("CELLFORGE_PRECISION", "53")
    try:
        bits = int(raw)
    except ValueError as exc:
        raise ValueError(f"CELLFORGE_PRECISION must be an integer, got {raw!r}") from exc
    if bits < 53:
        raise ValueError(f"CELLFORGE_PRECISION must be >= 53, got {bits}")
    return bits
