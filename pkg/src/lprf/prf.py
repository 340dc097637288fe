"""Legendre PRF evaluation and keystream generation.

A key of degree ``d`` holds ``(K_{d-1}, ..., K_0)`` and evaluates
``L(x^d + K_{d-1} x^{d-1} + ... + K_0)``; the symbol maps to a bit as
``{0, +1} -> 0`` and ``-1 -> 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .encoding import encode_counter
from .exceptions import NotPrimitive, OutOfRange
from .field import FieldElement, FieldParams

__all__ = [
    "PrfKey",
    "Keystream",
    "prf_eval",
    "keystream_counter",
    "keystream_geometric",
    "reference_bit",
    "symbol_bit",
    "pack_bits",
    "unpack_bits",
    "random_key",
]

COUNTER = "counter"
GEOMETRIC = "geometric"


def symbol_bit(symbol: int) -> int:
    return 1 if symbol == -1 else 0


@dataclass(frozen=True)
class PrfKey:
    """Secret coefficients ordered from ``K_{d-1}`` down to ``K_0``."""

    coefficients: tuple[FieldElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if not self.coefficients:
            raise ValueError("a key needs at least one coefficient")
        f = self.coefficients[0].field
        for c in self.coefficients:
            f._check(c)

    @classmethod
    def linear(cls, K: FieldElement) -> PrfKey:
        return cls((K,))

    @property
    def degree(self) -> int:
        return len(self.coefficients)

    @property
    def field(self) -> FieldParams:
        return self.coefficients[0].field

    def polynomial(self, x: FieldElement) -> FieldElement:
        acc = x.field.one
        for k in self.coefficients:
            acc = acc * x + k
        return acc


def random_key(params: FieldParams, rng: np.random.Generator, degree: int = 1) -> PrfKey:
    """Uniform key; a degree-1 key is drawn from the nonzero elements."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if degree == 1:
        return PrfKey.linear(params.random_element(rng, nonzero=True))
    return PrfKey(tuple(params.random_element(rng) for _ in range(degree)))


def prf_eval(key: PrfKey, x: FieldElement, params: FieldParams) -> int:
    return symbol_bit(params.legendre(key.polynomial(x)))


def pack_bits(bits) -> bytes:
    """Little-endian within bytes: stream bit i is bit (i % 8) of byte i // 8."""
    arr = np.asarray(bits, dtype=np.uint8)
    return np.packbits(arr, bitorder="little").tobytes()


def unpack_bits(packed: bytes, length: int) -> np.ndarray:
    arr = np.unpackbits(np.frombuffer(packed, dtype=np.uint8), bitorder="little")
    if arr.size < length:
        raise ValueError(f"packed data holds {arr.size} bits, need {length}")
    return arr[:length]


@dataclass(frozen=True, eq=False)
class Keystream:
    """Packed PRF output plus how it was generated (never the key)."""

    params: FieldParams
    mode: str
    length: int
    packed: bytes
    start: int | None = None
    generator: FieldElement | None = None
    _bits: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.mode not in (COUNTER, GEOMETRIC):
            raise ValueError(f"unknown keystream mode {self.mode!r}")
        if len(self.packed) != (self.length + 7) // 8:
            raise ValueError("packed length does not match bit count")
        if self.mode == COUNTER:
            if self.start is None or self.start < 0 or self.start + self.length > self.params.order:
                raise OutOfRange("counter keystream must satisfy start + M <= p^r")
        else:
            if self.generator is None or not self.params.is_primitive(self.generator):
                raise NotPrimitive("geometric keystream needs a primitive generator")
        bits = unpack_bits(self.packed, self.length)
        bits.setflags(write=False)
        object.__setattr__(self, "_bits", bits)

    @classmethod
    def from_bits(cls, params, mode, bits, **kw) -> Keystream:
        bits = np.asarray(bits, dtype=np.uint8)
        return cls(params, mode, int(bits.size), pack_bits(bits), **kw)

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    def __len__(self):
        return self.length

    def __eq__(self, other):
        if not isinstance(other, Keystream):
            return NotImplemented
        return (self.params == other.params and self.mode == other.mode
                and self.length == other.length and self.packed == other.packed
                and self.start == other.start and self.generator == other.generator)

    def queries(self) -> list[FieldElement]:
        """The field inputs the PRF was evaluated on, in stream order."""
        F = self.params
        if self.mode == COUNTER:
            return [encode_counter(self.start + i, F) for i in range(self.length)]
        out, acc = [], F.one
        for _ in range(self.length):
            acc = acc * self.generator
            out.append(acc)
        return out


def _bits_for(key: PrfKey, xs: Sequence[FieldElement], params: FieldParams) -> list[int]:
    leg = params._legendre_coeffs
    if key.degree == 1:
        K = key.coefficients[0].coeffs
        p = params.p
        return [1 if leg(tuple((a + b) % p for a, b in zip(x.coeffs, K))) == -1 else 0
                for x in xs]
    return [prf_eval(key, x, params) for x in xs]


def keystream_counter(key: PrfKey, start: int, M: int, params: FieldParams) -> Keystream:
    """Bits ``prf(encode_counter(start + i))`` for ``0 <= i < M``."""
    if start < 0 or M < 0 or start + M > params.order:
        raise OutOfRange(f"counter range [{start}, {start + M}) exceeds p^r = {params.order}")
    xs = [encode_counter(start + i, params) for i in range(M)]
    return Keystream.from_bits(params, COUNTER, _bits_for(key, xs, params), start=start)


def keystream_geometric(key: PrfKey, g: FieldElement, M: int, params: FieldParams) -> Keystream:
    """Bits ``prf(g^i)`` for ``1 <= i <= M`` using one multiplication per step."""
    if not params.is_primitive(g):
        raise NotPrimitive(f"{g!r} does not generate the multiplicative group")
    if not 1 <= M <= params.order - 1:
        raise OutOfRange(f"geometric keystream length must lie in [1, {params.order - 1}]")
    xs, acc = [], params.one
    for _ in range(M):
        acc = acc * g
        xs.append(acc)
    return Keystream.from_bits(params, GEOMETRIC, _bits_for(key, xs, params), generator=g)


def reference_bit(m: int, g: FieldElement, params: FieldParams) -> int:
    """The keyless reference ``L(g^m + 1)`` as a bit."""
    if not 1 <= m <= params.order - 1:
        raise OutOfRange(f"reference exponent {m} outside [1, {params.order - 1}]")
    return symbol_bit(params.legendre(params.pow(g, m) + params.one))
