"""Empirical checks on keystream statistics and counter wraparound."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import NotFullPeriod, WindowTooLong
from .field import FieldParams
from .prf import COUNTER, Keystream, PrfKey, _bits_for
from .attacks._core import sliding_windows

__all__ = [
    "pattern_census",
    "weil_check",
    "WeilReport",
    "wrapped_counter_bits",
    "minimal_period",
    "period_probe",
]

MAX_PATTERN_LENGTH = 24


def pattern_census(ks: Keystream, l: int) -> dict[int, int]:
    """Counts of every l-bit pattern over all ``M - l + 1`` sliding windows.

    Patterns are packed with the window's first bit as bit 0.
    """
    if l < 1 or l > min(ks.length, MAX_PATTERN_LENGTH):
        raise WindowTooLong(f"pattern length {l} not in [1, min(M={ks.length}, 24)]")
    counts = np.bincount(np.asarray(sliding_windows(ks.bits, l), dtype=np.int64),
                         minlength=1 << l)
    return {pattern: int(c) for pattern, c in enumerate(counts)}


@dataclass(frozen=True)
class WeilReport:
    l: int
    order: int
    expected: float
    max_deviation: float
    constant: float
    bound: float
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)

    def to_text(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in self.to_dict().items())

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def weil_check(ks: Keystream, l: int, constant: float | None = None) -> WeilReport:
    """Largest ``|count - p^r / 2^l|`` against ``c * sqrt(p^r)`` with ``c = l``."""
    F = ks.params
    if ks.mode != COUNTER or ks.start != 0 or ks.length != F.order:
        raise NotFullPeriod("weil_check needs a counter keystream with start 0 and M = p^r")
    c = float(l if constant is None else constant)
    expected = F.order / 2**l
    dev = max(abs(v - expected) for v in pattern_census(ks, l).values())
    bound = c * math.sqrt(F.order)
    return WeilReport(l, F.order, expected, dev, c, bound, dev <= bound)


def wrapped_counter_bits(key: PrfKey, params: FieldParams, M: int) -> np.ndarray:
    """Counter-mode bits with the index reduced mod ``p^r``."""
    period = _bits_for(key, [params.from_int(n) for n in range(params.order)], params)
    reps = -(-M // params.order)
    return np.tile(np.asarray(period, dtype=np.uint8), reps)[:M]


def minimal_period(bits) -> int:
    """Smallest ``P`` with ``bits[i] == bits[i + P]`` throughout (prefix function)."""
    s = list(bits)
    n = len(s)
    if n == 0:
        return 0
    pi = [0] * n
    k = 0
    for i in range(1, n):
        while k and s[i] != s[k]:
            k = pi[k - 1]
        if s[i] == s[k]:
            k += 1
        pi[i] = k
    return n - pi[-1]


def period_probe(key: PrfKey, params: FieldParams, periods: int = 2) -> int:
    if periods < 2:
        raise ValueError("periods must be >= 2")
    if params.order > 10**5:
        raise ValueError("period_probe is limited to p^r <= 10^5")
    return minimal_period(wrapped_counter_bits(key, params, periods * params.order))
