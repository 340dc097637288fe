"""Base-p counter encoding, carry differentials and differential signatures."""

from __future__ import annotations

from dataclasses import dataclass

from .exceptions import OutOfRange
from .field import FieldElement, FieldParams

__all__ = [
    "DifferentialSignature",
    "encode_counter",
    "counter_delta",
    "p_adic_valuation",
    "signature",
    "signature_class_count",
    "signature_period_exponent",
]

# Below this order signature_class_count enumerates every window start.
_ENUMERATION_LIMIT = 10**6


def p_adic_valuation(n: int, p: int) -> int:
    if n <= 0:
        raise ValueError("valuation is only defined for positive integers")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def encode_counter(n: int, params: FieldParams) -> FieldElement:
    """Map ``0 <= n < p^r`` to the polynomial whose coefficients are its base-p digits."""
    if not 0 <= n < params.order:
        raise OutOfRange(f"counter {n} outside [0, {params.order})")
    return params.from_int(n)


def counter_delta(n: int, params: FieldParams) -> FieldElement:
    """``encode_counter(n + 1) - encode_counter(n)``: ones through degree v_p(n + 1)."""
    if not 0 <= n < params.order - 1:
        raise OutOfRange(f"counter {n} outside [0, {params.order - 1})")
    k = p_adic_valuation(n + 1, params.p)
    return params([1] * (k + 1) + [0] * (params.r - k - 1))


def _coeff_width(p: int) -> int:
    return (p - 1).bit_length()


@dataclass(frozen=True)
class DifferentialSignature:
    """Cumulative differences ``X_{n+i} - X_n`` over a window of length U."""

    deltas: tuple[FieldElement, ...]
    canonical_key: bytes

    @property
    def window(self) -> int:
        return len(self.deltas)

    @classmethod
    def from_deltas(cls, deltas, params: FieldParams) -> DifferentialSignature:
        deltas = tuple(deltas)
        width = _coeff_width(params.p)
        acc = 0
        for d in deltas:
            for c in d.coeffs:
                acc = (acc << width) | c
        nbits = width * params.r * len(deltas)
        return cls(deltas, acc.to_bytes((nbits + 7) // 8, "big"))


def signature(n: int, U: int, params: FieldParams) -> DifferentialSignature:
    if U < 1:
        raise OutOfRange("window length must be >= 1")
    if n < 0 or n + U - 1 >= params.order:
        raise OutOfRange(f"window [{n}, {n + U - 1}] leaves [0, {params.order})")
    base = encode_counter(n, params)
    deltas = [params.zero]
    for i in range(1, U):
        deltas.append(encode_counter(n + i, params) - base)
    return DifferentialSignature.from_deltas(deltas, params)


def _valuation_profile(n: int, U: int, p: int) -> tuple[int, ...]:
    # the signature of window n is determined by the carry depths v_p(n+i), 0 < i < U
    return tuple(p_adic_valuation(n + i, p) for i in range(1, U))


def signature_period_exponent(U: int, p: int) -> int:
    """Smallest ``c`` with ``p**c >= U``."""
    c = 0
    while p**c < U:
        c += 1
    return c


def _representative_starts(U: int, params: FieldParams) -> set[int]:
    # Window starts whose carry profiles cover every profile that occurs.
    # With L = U - 1 increments and e minimal with p^e > L, a window of
    # increments [n+1, n+L] holds at most one multiple t of p^e; the profile
    # depends only on (n+1) mod p^e and, if t exists, on v_p(t) in [e, r).
    p, r, q = params.p, params.r, params.order
    L = U - 1
    e = 0
    while p**e <= L:
        e += 1
    block = p**e
    last = q - U  # largest valid start
    starts = set()
    if L == 0:
        return {0}
    if e >= r:
        return set(range(0, last + 1))
    for s in range(block):  # s = (n + 1) mod p^e
        offset = (-s) % block  # position of the multiple of p^e among the increments
        if offset < L:
            for d in range(e, r):
                n = p**d - offset - 1
                if 0 <= n <= last:
                    starts.add(n)
        else:
            n = s - 1 if s >= 1 else None
            if n is not None and 0 <= n <= last:
                starts.add(n)
    return starts


def signature_class_count(U: int, params: FieldParams, *, method: str = "auto") -> int:
    """Exact number of distinct signatures over all valid window starts."""
    if not 1 <= U < params.order:
        raise OutOfRange(f"window length {U} outside [1, {params.order})")
    if method == "auto":
        method = "enumerate" if params.order <= _ENUMERATION_LIMIT else "residue"
    p = params.p
    if method == "enumerate":
        starts = range(params.order - U + 1)
    elif method == "residue":
        starts = _representative_starts(U, params)
    else:
        raise ValueError(f"unknown method {method!r}")
    return len({_valuation_profile(n, U, p) for n in starts})
