from __future__ import annotations

from dataclasses import dataclass, field

import mpmath


def fmt(x, digits: int = 20) -> str:
    """Deterministic decimal string for an mpmath number."""
    return mpmath.nstr(x, digits, min_fixed=-5, max_fixed=20) if x is not None else ""


@dataclass
class CableInvariantResult:
    """A computed invariant value with its numerical diagnostics.

    ``cancellation_ratio`` is ``|value| / max_term``; ``is_zero`` is set when
    the value sits under the zero threshold ``2**(-prec/2) * max_term``.
    ``status`` is ``"ok"`` or ``"unresolved"`` (precision cap reached; then
    ``candidates`` holds the last two disagreeing values).
    """

    value: mpmath.mpc
    error_bound: mpmath.mpf
    max_term: mpmath.mpf
    method: str
    prec_used: int
    m: int | None = None
    N: int | None = None
    is_zero: bool = False
    status: str = "ok"
    candidates: tuple = field(default_factory=tuple)
    in_S_m: bool | None = None

    @property
    def cancellation_ratio(self):
        if not self.max_term:
            return mpmath.mpf(0)
        return abs(self.value) / self.max_term

    @property
    def resolved(self) -> bool:
        return self.status == "ok"

    def to_json(self) -> dict:
        out = {
            "m": self.m,
            "N": self.N,
            "method": self.method,
            "re": fmt(self.value.real),
            "im": fmt(self.value.imag),
            "error_bound": fmt(self.error_bound, 6),
            "max_term": fmt(self.max_term, 20),
            "cancellation_ratio": fmt(self.cancellation_ratio, 6),
            "prec_used": self.prec_used,
            "in_S_m": self.in_S_m,
            "is_zero": self.is_zero,
            "status": self.status,
        }
        if self.candidates:
            out["candidates"] = [[fmt(c.real), fmt(c.imag)] for c in self.candidates]
        return out
