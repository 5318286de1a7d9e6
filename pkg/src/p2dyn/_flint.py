"""Bridge between HPoly and python-flint multivariate polynomials (QQ and GF(p))."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

try:
    import flint
except ImportError:  # pragma: no cover - flint is a declared dependency
    flint = None

available = flint is not None

_NAMES = ("x", "y", "z")


@lru_cache(maxsize=None)
def _ctx(field):
    from .fields import Rationals

    if isinstance(field, Rationals):
        return flint.fmpq_mpoly_ctx.get(_NAMES, ordering="deglex")
    return flint.nmod_mpoly_ctx.get(_NAMES, ordering="deglex", modulus=field.p)


def to_flint(P):
    from .fields import Rationals

    ctx = _ctx(P.field)
    if isinstance(P.field, Rationals):
        return ctx.from_dict({e: flint.fmpq(v.numerator, v.denominator) for e, v in P._c.items()})
    return ctx.from_dict(P._c)


def _exp(e):
    return (int(e[0]), int(e[1]), int(e[2]))


def from_flint(field, fp, degree=None):
    from .fields import Rationals
    from .hpoly import HPoly

    d = fp.to_dict()
    if isinstance(field, Rationals):
        c = {_exp(e): Fraction(int(v.p), int(v.q)) for e, v in d.items()}
    else:
        c = {_exp(e): int(v) for e, v in d.items()}
    if degree is None:
        degree = sum(next(iter(c))) if c else 0
    return HPoly._raw(field, c, degree)


def mul(P, Q):
    return from_flint(P.field, to_flint(P) * to_flint(Q), P.degree + Q.degree)


def exact_div(P, Q):
    q, r = divmod(to_flint(P), to_flint(Q))
    if not r.is_zero():
        raise ValueError("polynomial division is not exact")
    return from_flint(P.field, q, P.degree - Q.degree)


def gcd(P, Q):
    return from_flint(P.field, to_flint(P).gcd(to_flint(Q)))


def substitute(P, g, degree):
    gs = [to_flint(gi) for gi in g]
    return from_flint(P.field, to_flint(P).compose(*gs), degree)
