"""The quadratic birational map f = h o g used throughout the tests and demos.

g = [xy, xy + yz, z^2] is a quadratic involution-type map, h = [x, x - 2z,
-x + y + 3z] is linear, and f = h o g = [xy, xy - 2z^2, yz + 3z^2].  Over QQ
f is algebraically stable with deg f^n = 2^n; modulo an odd prime p the orbit
of [0,-2,3] falls into I(f) and degree growth slows down.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cremona import CremonaMap
from .fields import QQ, Field
from .parsing import parse_triple
from .cremona import map_new
from .points import ProjPoint

__all__ = ["ExampleMaps", "example_maps", "G_TEXT", "H_TEXT", "F_TEXT", "F_INV_TEXT"]

G_TEXT = "[x*y, x*y + y*z, z^2]"
H_TEXT = "[x, x - 2*z, -x + y + 3*z]"
F_TEXT = "[x*y, x*y - 2*z^2, y*z + 3*z^2]"
F_INV_TEXT = "[2*x^2 - 2*x*y, (-3*x + 3*y + 2*z)^2, (x - y)*(-3*x + 3*y + 2*z)]"

#: raw triple of f^-1 o f before the common factor 4*y*z^2 is removed
RAW_INVERSE_COMPOSITE = "[4*x*y*z^2, 4*y^2*z^2, 4*y*z^3]"


@dataclass(frozen=True)
class ExampleMaps:
    g: CremonaMap
    h: CremonaMap
    f: CremonaMap
    f_inv: CremonaMap
    indeterminacy: tuple[ProjPoint, ...]
    inverse_indeterminacy: tuple[ProjPoint, ...]


def _map(text: str, field: Field) -> CremonaMap:
    return map_new(*parse_triple(text, field))


def example_maps(field: Field = QQ) -> ExampleMaps:
    """Build g, h, f, f^-1 and the indeterminacy points over ``field``."""
    pts = lambda *cs: tuple(ProjPoint.of(field, c) for c in cs)  # noqa: E731
    return ExampleMaps(
        g=_map(G_TEXT, field),
        h=_map(H_TEXT, field),
        f=_map(F_TEXT, field),
        f_inv=_map(F_INV_TEXT, field),
        indeterminacy=pts((1, 0, 0), (0, 1, 0)),
        inverse_indeterminacy=pts((1, 1, 0), (0, -2, 3)),
    )
