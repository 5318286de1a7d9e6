"""Points of the projective plane in canonical form."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .fields import Field, FieldError, Rationals, Scalar

__all__ = ["ProjPoint", "enumerate_p2", "MAX_ENUM_Q"]

MAX_ENUM_Q = 2**20


def _canonical(field: Field, coords: Sequence) -> tuple:
    if all(field.is_zero(c) for c in coords):
        raise ValueError("[0, 0, 0] is not a projective point")
    if isinstance(field, Rationals):
        # primitive integer vector, first nonzero coordinate positive
        den = 1
        for c in coords:
            den = math.lcm(den, c.denominator)
        ints = [(c * den).numerator for c in coords]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        first = next(v for v in ints if v)
        if first < 0:
            g = -g
        return tuple(Fraction(v // g) for v in ints)
    first = next(c for c in coords if not field.is_zero(c))
    if first == field.one:
        return tuple(coords)
    inv = field.inv(first)
    return tuple(field.mul(c, inv) for c in coords)


@dataclass(frozen=True, order=False)
class ProjPoint:
    """A point of P^2 with canonical coordinates.

    Over a finite field the first nonzero coordinate is 1.  Over QQ the
    coordinates form a primitive integer vector whose first nonzero entry is
    positive, so ``[0, -2, 3]`` is stored as ``[0, 2, -3]``.
    Structural equality is projective equality.
    """

    field: Field
    coords: tuple

    @classmethod
    def of(cls, field: Field, coords: Sequence) -> "ProjPoint":
        if len(coords) != 3:
            raise ValueError("a point of P^2 has three coordinates")
        raw = tuple(field.coerce(c) for c in coords)
        return cls(field, _canonical(field, raw))

    @classmethod
    def from_raw(cls, field: Field, coords: Sequence) -> "ProjPoint":
        """Canonicalize raw field elements (no coercion)."""
        return cls(field, _canonical(field, tuple(coords)))

    def scalars(self) -> tuple[Scalar, Scalar, Scalar]:
        return tuple(Scalar(self.field, c) for c in self.coords)  # type: ignore[return-value]

    def over(self, field: Field, fn=None) -> "ProjPoint":
        """Image under a coefficient map (default: coerce integers into ``field``)."""
        if fn is None:
            if isinstance(self.field, Rationals):
                return ProjPoint.of(field, [int(c) for c in self.coords])
            if getattr(field, "p", None) != getattr(self.field, "p", None):
                raise FieldError(f"no embedding {self.field} -> {field}")
            fn = field.from_int if isinstance(self.coords[0], int) else (lambda v: v)
        return ProjPoint.from_raw(field, [fn(c) for c in self.coords])

    def sort_key(self) -> tuple:
        """Key consistent with the order of :func:`enumerate_p2`."""
        zeros = 0
        for c in self.coords:
            if self.field.is_zero(c):
                zeros += 1
            else:
                break
        return (zeros, tuple(_elem_key(c) for c in self.coords))

    def __lt__(self, other: "ProjPoint") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return "[" + ",".join(self.field.format(c) if not isinstance(c, Fraction) else str(c) for c in self.coords) + "]"

    def __repr__(self) -> str:
        return f"ProjPoint({self.field}, {self})"

    def to_json(self) -> list:
        out = []
        for c in self.coords:
            if isinstance(c, Fraction):
                out.append(str(c))
            elif isinstance(c, tuple):
                out.append(list(c))
            else:
                out.append(c)
        return out


def _elem_key(c):
    if isinstance(c, tuple):
        return tuple(reversed(c))
    return c


def enumerate_p2(field: Field) -> Iterator[ProjPoint]:
    """All q^2 + q + 1 points of P^2(F_q): [1,a,b], then [0,1,c], then [0,0,1]."""
    if not field.is_finite:
        raise FieldError("P^2 can only be enumerated over a finite field")
    if field.size > MAX_ENUM_Q:
        raise ValueError(f"q = {field.size} exceeds the enumeration guard {MAX_ENUM_Q}")
    one, zero = field.one, field.zero
    elems = list(field.elements())
    for a in elems:
        for b in elems:
            yield ProjPoint(field, (one, a, b))
    for c in elems:
        yield ProjPoint(field, (zero, one, c))
    yield ProjPoint(field, (zero, zero, one))
