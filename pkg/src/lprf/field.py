"""Arithmetic in GF(p^r) as polynomials over Z_p modulo a monic irreducible.

Elements are fixed-length coefficient tuples, constant term first, so the
integer view ``sum(c_i * p**i)`` is exactly the base-p counter encoding.

>>> F = make_field(3, 2)
>>> F.describe()
'p=3 r=2 I=1,0,1'
>>> x = F([0, 1])
>>> (x * x).coeffs
(2, 0)
"""

from __future__ import annotations

import itertools
import re
from typing import Iterable, Iterator, Sequence

import numpy as np

from .exceptions import (
    CompositeP,
    DegreeMismatch,
    DivisionByZero,
    FieldMismatch,
    FieldTooLarge,
    InternalError,
    NotInGroup,
    ReduciblePolynomial,
    ZeroToZero,
)

__all__ = [
    "FieldParams",
    "FieldElement",
    "make_field",
    "is_irreducible",
    "find_generator",
    "dlog_bruteforce",
    "is_prime",
    "prime_factors",
    "MAX_ORDER",
]

MAX_ORDER = 2**40
# Fields up to this order memoise Legendre symbols by coefficient tuple.
LEGENDRE_CACHE_LIMIT = 2**20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division, ascending."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# -- dense polynomials over Z_p (little-endian lists, trimmed) ---------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    a = [c % p for c in a]
    _trim(a)
    n = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= n:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - n
        for k, fk in enumerate(f):
            a[shift + k] = (a[shift + k] - c * fk) % p
        _trim(a)
    return a


def _poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    return _poly_mod(prod, f, p)


def _poly_pow_mod(a: Sequence[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, f, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin's distinct-degree test for a monic ``f`` over Z_p.

    ``f`` is a little-endian coefficient sequence with ``f[-1] == 1``.
    """
    f = [c % p for c in f]
    n = len(f) - 1
    if n < 1 or f[-1] != 1:
        raise ValueError("f must be monic of degree >= 1")
    if n == 1:
        return True
    x = [0, 1]
    # frob[k] = x^(p^k) mod f
    frob = [_poly_mod(x, f, p)]
    for _ in range(n):
        frob.append(_poly_pow_mod(frob[-1], p, f, p))
    for q in prime_factors(n):
        h = list(frob[n // q]) + [0] * 2
        h[1] -= 1
        if len(_poly_gcd(h, f, p)) != 1:
            return False
    return frob[n] == _poly_mod(x, f, p)


def _smallest_irreducible(p: int, r: int) -> tuple[int, ...]:
    # lexicographic on (c0, c1, ..., c_{r-1}), constant term varying slowest
    if r == 1:
        return (0, 1)
    # c0 = 0 means divisible by x
    for c0 in range(1, p):
        for rest in itertools.product(range(p), repeat=r - 1):
            f = (c0,) + rest + (1,)
            if is_irreducible(f, p):
                return f
    raise ReduciblePolynomial(f"no irreducible of degree {r} over Z_{p}")  # unreachable


class FieldParams:
    """The field GF(p^r) = Z_p[x] / I(x).

    Instances are immutable apart from an internal Legendre memo; equality
    and hashing use ``(p, r, irreducible)`` only.
    """

    def __init__(self, p: int, r: int, irreducible: Sequence[int], *, allow_large: bool = False):
        if not isinstance(p, (int, np.integer)) or not is_prime(int(p)) or p < 3:
            raise CompositeP(f"p={p} is not an odd prime")
        if r < 1:
            raise DegreeMismatch(f"extension degree must be >= 1, got {r}")
        p, r = int(p), int(r)
        irreducible = tuple(int(c) % p for c in irreducible)
        if len(irreducible) != r + 1:
            raise DegreeMismatch(f"irreducible has degree {len(irreducible) - 1}, expected {r}")
        if irreducible[-1] != 1:
            raise DegreeMismatch("irreducible polynomial must be monic")
        order = p**r
        if order > MAX_ORDER and not allow_large:
            raise FieldTooLarge(f"p^r = {order} exceeds desk-scale ceiling 2^40")
        if not is_irreducible(irreducible, p):
            raise ReduciblePolynomial(f"{irreducible} is reducible over Z_{p}")

        self.p = p
        self.r = r
        self.irreducible = irreducible
        self.order = order
        self.half_order = (order - 1) // 2
        self.order_factors = tuple(prime_factors(order - 1))
        self._low = irreducible[:-1]
        self._legendre_cache: dict[tuple[int, ...], int] | None = (
            {} if order <= LEGENDRE_CACHE_LIMIT else None
        )
        self.zero = FieldElement(self, (0,) * r)
        self.one = FieldElement(self, (1,) + (0,) * (r - 1))
        self.minus_one = FieldElement(self, (p - 1,) + (0,) * (r - 1))

    # -- construction helpers ---------------------------------------------

    def __call__(self, coeffs: Iterable[int] | int | FieldElement) -> FieldElement:
        if isinstance(coeffs, FieldElement):
            self._check(coeffs)
            return coeffs
        if isinstance(coeffs, (int, np.integer)):
            return self.from_int(int(coeffs))
        coeffs = tuple(int(c) % self.p for c in coeffs)
        if len(coeffs) != self.r:
            raise DegreeMismatch(f"expected {self.r} coefficients, got {len(coeffs)}")
        return FieldElement(self, coeffs)

    def from_int(self, n: int) -> FieldElement:
        """Element whose coefficients are the base-p digits of ``n`` (mod p^r)."""
        n %= self.order
        digits = []
        for _ in range(self.r):
            n, d = divmod(n, self.p)
            digits.append(d)
        return FieldElement(self, tuple(digits))

    def elements(self, nonzero: bool = False) -> Iterator[FieldElement]:
        for n in range(1 if nonzero else 0, self.order):
            yield self.from_int(n)

    def random_element(self, rng: np.random.Generator, nonzero: bool = False) -> FieldElement:
        return self.from_int(int(rng.integers(1 if nonzero else 0, self.order)))

    # -- identity ---------------------------------------------------------

    def _key(self):
        return (self.p, self.r, self.irreducible)

    def __eq__(self, other):
        return isinstance(other, FieldParams) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FieldParams({self.describe()!r})"

    def __getstate__(self):
        return {"p": self.p, "r": self.r, "irreducible": self.irreducible}

    def __setstate__(self, state):
        self.__init__(state["p"], state["r"], state["irreducible"], allow_large=True)

    def describe(self) -> str:
        return f"p={self.p} r={self.r} I={','.join(map(str, self.irreducible))}"

    @classmethod
    def parse(cls, text: str, *, allow_large: bool = False) -> FieldParams:
        m = re.fullmatch(r"\s*p=(\d+)\s+r=(\d+)\s+I=([\d,]+)\s*", text)
        if not m:
            raise ValueError(f"malformed field description: {text!r}")
        coeffs = [int(c) for c in m.group(3).split(",")]
        return cls(int(m.group(1)), int(m.group(2)), coeffs, allow_large=allow_large)

    def _check(self, *elems: FieldElement) -> None:
        for e in elems:
            if e.field is not self and e.field != self:
                raise FieldMismatch(f"element of {e.field.describe()} used in {self.describe()}")

    # -- arithmetic -------------------------------------------------------

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self._check(a, b)
        p = self.p
        return FieldElement(self, tuple((x + y) % p for x, y in zip(a.coeffs, b.coeffs)))

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self._check(a, b)
        p = self.p
        return FieldElement(self, tuple((x - y) % p for x, y in zip(a.coeffs, b.coeffs)))

    def neg(self, a: FieldElement) -> FieldElement:
        self._check(a)
        p = self.p
        return FieldElement(self, tuple(-x % p for x in a.coeffs))

    def _mul_coeffs(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p, r, low = self.p, self.r, self._low
        prod = [0] * (2 * r - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        # x^r == -sum(low[k] x^k)
        for d in range(2 * r - 2, r - 1, -1):
            c = prod[d] % p
            if c:
                base = d - r
                for k, ik in enumerate(low):
                    if ik:
                        prod[base + k] -= c * ik
        return tuple(c % p for c in prod[:r])

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self._check(a, b)
        return FieldElement(self, self._mul_coeffs(a.coeffs, b.coeffs))

    def _pow_coeffs(self, a: tuple[int, ...], e: int) -> tuple[int, ...]:
        result = self.one.coeffs
        base = a
        while e:
            if e & 1:
                result = self._mul_coeffs(result, base)
            e >>= 1
            if e:
                base = self._mul_coeffs(base, base)
        return result

    def pow(self, a: FieldElement, e: int) -> FieldElement:
        self._check(a)
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0 and a.is_zero():
            raise ZeroToZero("0^0 is undefined")
        return FieldElement(self, self._pow_coeffs(a.coeffs, e))

    def inv(self, a: FieldElement) -> FieldElement:
        self._check(a)
        if a.is_zero():
            raise DivisionByZero("zero has no inverse")
        return FieldElement(self, self._pow_coeffs(a.coeffs, self.order - 2))

    def legendre(self, a: FieldElement) -> int:
        """Quadratic character via Euler's criterion: 0, +1 or -1."""
        self._check(a)
        return self._legendre_coeffs(a.coeffs)

    def _legendre_coeffs(self, coeffs: tuple[int, ...]) -> int:
        cache = self._legendre_cache
        if cache is not None:
            hit = cache.get(coeffs)
            if hit is not None:
                return hit
        if not any(coeffs):
            value = 0
        else:
            t = self._pow_coeffs(coeffs, self.half_order)
            if t == self.one.coeffs:
                value = 1
            elif t == self.minus_one.coeffs:
                value = -1
            else:
                raise InternalError(f"Euler exponentiation gave {t} in {self.describe()}")
        if cache is not None:
            cache[coeffs] = value
        return value

    def is_primitive(self, g: FieldElement) -> bool:
        self._check(g)
        if g.is_zero():
            return False
        n = self.order - 1
        one = self.one.coeffs
        return all(self._pow_coeffs(g.coeffs, n // q) != one for q in self.order_factors)


class FieldElement:
    """Immutable element of a :class:`FieldParams`."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldParams, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __int__(self):
        p = self.field.p
        n = 0
        for c in reversed(self.coeffs):
            n = n * p + c
        return n

    __index__ = __int__

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.coeffs == other.coeffs and self.field == other.field
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"FieldElement({list(self.coeffs)})"

    def __str__(self):
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c:
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                coef = str(c) if (c != 1 or i == 0) else ""
                terms.append(coef + mono)
        return " + ".join(terms) or "0"

    def __add__(self, other):
        return self.field.add(self, other)

    def __sub__(self, other):
        return self.field.sub(self, other)

    def __neg__(self):
        return self.field.neg(self)

    def __mul__(self, other):
        return self.field.mul(self, other)

    def __pow__(self, e):
        return self.field.pow(self, e)

    def inverse(self) -> FieldElement:
        return self.field.inv(self)

    def legendre(self) -> int:
        return self.field.legendre(self)


def make_field(p: int, r: int, irreducible: Sequence[int] | None = None, *,
               allow_large: bool = False) -> FieldParams:
    """Build GF(p^r); without ``irreducible`` pick the lexicographically
    smallest monic irreducible of degree ``r`` (constant term first)."""
    if not is_prime(p) or p < 3:
        raise CompositeP(f"p={p} is not an odd prime")
    if r < 1:
        raise DegreeMismatch(f"extension degree must be >= 1, got {r}")
    if p**r > MAX_ORDER and not allow_large:
        raise FieldTooLarge(f"p^r = {p**r} exceeds desk-scale ceiling 2^40")
    if irreducible is None:
        irreducible = _smallest_irreducible(p, r)
    return FieldParams(p, r, irreducible, allow_large=allow_large)


def find_generator(params: FieldParams, rng: np.random.Generator | None = None,
                   max_samples: int = 256) -> FieldElement:
    """A primitive element, by seeded sampling with an exhaustive fallback.

    Without ``rng`` the smallest generator in integer order is returned.
    """
    if rng is not None:
        for _ in range(max_samples):
            g = params.random_element(rng, nonzero=True)
            if params.is_primitive(g):
                return g
    for g in params.elements(nonzero=True):
        if params.is_primitive(g):
            return g
    raise InternalError("multiplicative group has no generator")  # unreachable


def dlog_bruteforce(params: FieldParams, g: FieldElement, target: FieldElement) -> int:
    """Smallest ``i >= 0`` with ``g**i == target``; test oracle only."""
    if params.order > 10**6:
        raise ValueError("dlog_bruteforce is limited to fields of order <= 10^6")
    if target.is_zero():
        raise NotInGroup("zero is not in the multiplicative group")
    params._check(g, target)
    acc = params.one.coeffs
    want = target.coeffs
    for i in range(params.order - 1):
        if acc == want:
            return i
        acc = params._mul_coeffs(acc, g.coeffs)
    raise NotInGroup(f"{target!r} is not a power of {g!r}")
