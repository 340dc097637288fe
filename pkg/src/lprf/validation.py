"""Input validation helpers shared by the estimators, stats and CLI."""

from __future__ import annotations

import numbers
import warnings

import numpy as np

from .exceptions import WindowTooLong
from .prf import Keystream

__all__ = [
    "check_keystream",
    "check_window",
    "check_random_state",
    "default_window",
    "unicity_slack",
]

UNICITY_SLACK_BITS = 6
WINDOW_FORMULA = "U = ceil(log2(p^r)) + 6, clamped to M"


def unicity_slack(order: int) -> int:
    return (order - 1).bit_length() + UNICITY_SLACK_BITS


def default_window(order: int, M: int) -> int:
    return max(1, min(unicity_slack(order), M))


def check_keystream(ks, mode: str | None = None) -> Keystream:
    if not isinstance(ks, Keystream):
        raise TypeError(f"expected a Keystream, got {type(ks).__name__}")
    if mode is not None and ks.mode != mode:
        raise ValueError(f"expected a {mode} keystream, got {ks.mode}")
    if ks.length == 0:
        raise ValueError("keystream is empty")
    return ks


def check_window(U: int | None, ks: Keystream, *, warn_unicity: bool = True) -> int:
    """Resolve ``U`` (``None`` -> default formula) and check it fits ``ks``."""
    M = ks.length
    if U is None:
        U = default_window(ks.params.order, M)
    if not isinstance(U, numbers.Integral) or U < 1:
        raise ValueError(f"window must be a positive integer, got {U!r}")
    U = int(U)
    if U > M:
        raise WindowTooLong(f"window {U} exceeds keystream length {M}")
    if warn_unicity and 2**U < 64 * ks.params.order:
        warnings.warn(
            f"window {U} gives 2^U < 64 p^r; expect spurious table hits",
            RuntimeWarning, stacklevel=3,
        )
    return U


def check_random_state(seed) -> np.random.Generator:
    """Turn ``None``, an int, a SeedSequence or a Generator into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, (numbers.Integral, np.random.SeedSequence)):
        return np.random.default_rng(seed)
    raise ValueError(f"{seed!r} cannot seed a numpy Generator")


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)
