"""Exact scalar arithmetic over QQ, prime fields and their extensions.

Field objects are small immutable values.  Their elements are stored *raw* for
speed: :class:`fractions.Fraction` for QQ, ``int`` in ``[0, p)`` for GF(p) and a
``k``-tuple of such ints (coefficients of ``1, a, ..., a^(k-1)``) for GF(p^k).
:class:`Scalar` wraps a raw value together with its field for callers that
want operator syntax.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator, Sequence

__all__ = [
    "Field",
    "Rationals",
    "PrimeField",
    "ExtensionField",
    "QQ",
    "Scalar",
    "FieldError",
    "field_make",
    "is_prime",
    "multiplicative_order",
    "is_irreducible",
    "find_irreducible",
]

MAX_PRIME = 2**61


class FieldError(ValueError):
    """Bad field description or a field mismatch."""


# -- primality ---------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3 * 10**24)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factor_small(n: int) -> list[int]:
    """Distinct prime factors of n by trial division (n is a group order here)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


# -- dense polynomials over GF(p), lists low degree first --------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def _pdivmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    r = list(a)
    _trim(r)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(r) - len(b) + 1, 0)
    while len(r) >= len(b):
        c = r[-1] * inv % p
        shift = len(r) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            r[shift + i] = (r[shift + i] - c * bi) % p
        _trim(r)
    return _trim(q), r


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _ppowmod(base: list[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), mod, p)[1]
        base = _pdivmod(_pmul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin-style test: gcd(m, X^(p^i) - X) is constant for 1 <= i <= k/2.

    ``modulus`` is a coefficient list, constant term first, monic.
    """
    m = _trim(list(modulus))
    k = len(m) - 1
    if k < 1 or m[-1] != 1:
        return False
    if k == 1:
        return True
    xp = [0, 1]
    for _ in range(k // 2):
        xp = _ppowmod(xp, p, m, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(m, _trim(diff), p)) > 1:
            return False
    return True


def find_irreducible(p: int, k: int, seed: int | None = 0) -> tuple[int, ...]:
    """Seeded random search for a monic irreducible polynomial of degree k."""
    rng = random.Random(seed)
    while True:
        cand = [rng.randrange(p) for _ in range(k)] + [1]
        if cand[0] != 0 and is_irreducible(cand, p):
            return tuple(cand)


# -- fields ------------------------------------------------------------------


class Field:
    """Common interface; concrete fields implement the raw-element operations."""

    characteristic: int = 0
    zero: Any
    one: Any

    is_finite = False

    def add(self, a, b):  # pragma: no cover - interface
        raise NotImplementedError

    def sub(self, a, b):  # pragma: no cover
        raise NotImplementedError

    def neg(self, a):  # pragma: no cover
        raise NotImplementedError

    def mul(self, a, b):  # pragma: no cover
        raise NotImplementedError

    def inv(self, a):  # pragma: no cover
        raise NotImplementedError

    def from_int(self, n: int):  # pragma: no cover
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def coerce(self, v):
        """Turn an int, Fraction, Scalar or raw element into a raw element of this field."""
        if isinstance(v, Scalar):
            if v.field != self:
                raise FieldError(f"scalar over {v.field} used in {self}")
            return v.value
        if isinstance(v, bool):
            v = int(v)
        if isinstance(v, int):
            return self.from_int(v)
        if isinstance(v, Fraction):
            return self.div(self.from_int(v.numerator), self.from_int(v.denominator))
        return self.check(v)

    def check(self, v):
        return v

    def __call__(self, v) -> "Scalar":
        return Scalar(self, self.coerce(v))

    def format(self, a) -> str:
        return str(a)


@dataclass(frozen=True)
class Rationals(Field):
    """The field QQ; elements are Fractions."""

    def __post_init__(self):
        object.__setattr__(self, "zero", Fraction(0))
        object.__setattr__(self, "one", Fraction(1))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / a

    def div(self, a, b):
        return a / b

    def from_int(self, n):
        return Fraction(n)

    def check(self, v):
        if not isinstance(v, Fraction):
            raise FieldError(f"not an element of QQ: {v!r}")
        return v

    def random(self, rng: random.Random, bound: int = 10):
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))

    def __str__(self) -> str:
        return "QQ"


QQ = Rationals()


@dataclass(frozen=True)
class PrimeField(Field):
    """GF(p) with p < 2**61; elements are ints in [0, p)."""

    p: int

    def __post_init__(self):
        if not 2 <= self.p < MAX_PRIME or not is_prime(self.p):
            raise FieldError(f"GF({self.p}): modulus must be a prime below 2^61")
        object.__setattr__(self, "zero", 0)
        object.__setattr__(self, "one", 1)

    is_finite = True

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def k(self) -> int:
        return 1

    @property
    def size(self) -> int:
        return self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.p)

    def pow(self, a, e):
        return pow(a, e, self.p)

    def from_int(self, n):
        return n % self.p

    def check(self, v):
        if not isinstance(v, int) or not 0 <= v < self.p:
            raise FieldError(f"not a canonical element of GF({self.p}): {v!r}")
        return v

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def __str__(self) -> str:
        return f"GF({self.p})"


@dataclass(frozen=True)
class ExtensionField(Field):
    """GF(p^k) = GF(p)[a]/(modulus(a)); elements are k-tuples of ints in [0, p).

    ``modulus`` lists coefficients constant term first and is monic of degree k.
    """

    p: int
    k: int
    modulus: tuple[int, ...]

    is_finite = True

    def __post_init__(self):
        if not 2 <= self.p < MAX_PRIME or not is_prime(self.p):
            raise FieldError(f"GF({self.p},{self.k}): p must be a prime below 2^61")
        if self.k < 2:
            raise FieldError("extension degree must be >= 2 (use PrimeField for k = 1)")
        if len(self.modulus) != self.k + 1 or not is_irreducible(self.modulus, self.p):
            raise FieldError(f"modulus {self.modulus} is not monic irreducible of degree {self.k}")
        object.__setattr__(self, "zero", (0,) * self.k)
        object.__setattr__(self, "one", (1,) + (0,) * (self.k - 1))

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def size(self) -> int:
        return self.p**self.k

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        p, k, m = self.p, self.k, self.modulus
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d] % p
            if c:
                s = d - k
                for i in range(k):
                    prod[s + i] -= c * m[i]
        return tuple(c % p for c in prod[:k])

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of 0")
        return self.pow(a, self.size - 2)

    def from_int(self, n):
        return (n % self.p,) + (0,) * (self.k - 1)

    def gen(self):
        """The class of X, i.e. a root of the modulus."""
        return (0, 1) + (0,) * (self.k - 2)

    def check(self, v):
        if (
            not isinstance(v, tuple)
            or len(v) != self.k
            or not all(isinstance(c, int) and 0 <= c < self.p for c in v)
        ):
            raise FieldError(f"not a canonical element of {self}: {v!r}")
        return v

    def elements(self) -> Iterator[tuple[int, ...]]:
        # constant coefficient varies fastest; prime subfield comes first
        for digits in itertools.product(range(self.p), repeat=self.k):
            yield tuple(reversed(digits))

    def random(self, rng: random.Random):
        return tuple(rng.randrange(self.p) for _ in range(self.k))

    def format(self, a) -> str:
        terms = []
        for i, c in enumerate(a):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "a" if i == 1 else f"a^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"

    def __str__(self) -> str:
        return f"GF({self.p},{self.k})"


# -- scalars -----------------------------------------------------------------


@dataclass(frozen=True)
class Scalar:
    """A field element with its field attached."""

    field: Field
    value: Any

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldError(f"field mismatch: {self.field} vs {other.field}")
            return other.value
        return self.field.coerce(other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Scalar(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return Scalar(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return Scalar(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.coerce(other)
        except (FieldError, TypeError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __str__(self) -> str:
        return self.field.format(self.value)


# -- construction from text --------------------------------------------------

_SPEC_RE = re.compile(r"^\s*(?:(QQ)|GF\(\s*(\d+)\s*(?:,\s*(\d+)\s*)?\))\s*$")


def field_make(text: str, seed: int | None = 0, modulus: Sequence[int] | None = None) -> Field:
    """Build a field from ``QQ``, ``GF(p)`` or ``GF(p,k)``.

    For ``GF(p,k)`` with ``k >= 2`` and no explicit ``modulus``, an irreducible
    modulus is found by seeded random search, so a fixed seed always yields
    the same field.

    >>> field_make("GF(5)")
    PrimeField(p=5)
    """
    m = _SPEC_RE.match(text)
    if not m:
        raise FieldError(f"cannot parse field {text!r}; expected QQ, GF(p) or GF(p,k)")
    if m.group(1):
        return QQ
    p = int(m.group(2))
    k = int(m.group(3)) if m.group(3) is not None else 1
    if k < 1:
        raise FieldError(f"extension degree must be >= 1, got {k}")
    if not is_prime(p) or p >= MAX_PRIME:
        raise FieldError(f"{p} is not a prime below 2^61")
    if k == 1:
        return PrimeField(p)
    if modulus is None:
        modulus = find_irreducible(p, k, seed)
    return ExtensionField(p, k, tuple(modulus))


def prime_subfield(field: Field) -> Field:
    if isinstance(field, ExtensionField):
        return PrimeField(field.p)
    return field


def multiplicative_order(a, p: int) -> int:
    """Order of ``a`` in GF(p)^*.

    ``a`` may be an int or a :class:`Scalar` over GF(p).
    """
    if isinstance(a, Scalar):
        a = a.value
    a %= p
    if a == 0:
        raise ValueError("0 has no multiplicative order")
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    order = p - 1
    for q in _factor_small(p - 1):
        while order % q == 0 and pow(a, order // q, p) == 1:
            order //= q
    return order
