"""Sparse homogeneous polynomials in x, y, z.

An :class:`HPoly` is immutable: a field, a degree and a dict mapping exponent
triples ``(a, b, c)`` with ``a + b + c == degree`` to nonzero raw field
elements.  The zero polynomial has no terms and degree 0.

Heavy operations over QQ and GF(p) go through python-flint; everything has a
pure-Python kernel as well (the only one used over GF(p^k)).  Use
:func:`pure_python` to force the pure kernels, e.g. to cross-check results.
"""

from __future__ import annotations

import contextlib
import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from . import _flint
from .fields import ExtensionField, Field, FieldError, PrimeField, Rationals, Scalar

__all__ = [
    "HPoly",
    "DegreeOverflow",
    "hp_eval",
    "hp_gcd",
    "jacobian_det",
    "monomials",
    "dense_size",
    "set_term_cap",
    "get_term_cap",
    "term_cap",
    "pure_python",
]

VARS = ("x", "y", "z")

DEFAULT_TERM_CAP = 2_000_000
_state = {"cap": DEFAULT_TERM_CAP, "flint": _flint.available}


class DegreeOverflow(ArithmeticError):
    """An operation would produce more terms than the configured cap."""

    def __init__(self, degree: int, bound: int, cap: int):
        self.degree = degree
        self.bound = bound
        self.cap = cap
        super().__init__(f"degree overflow: result of degree {degree} may have {bound} terms (cap {cap})")


def set_term_cap(cap: int) -> None:
    if cap < 1:
        raise ValueError("term cap must be positive")
    _state["cap"] = cap


def get_term_cap() -> int:
    return _state["cap"]


@contextlib.contextmanager
def term_cap(cap: int):
    old = _state["cap"]
    set_term_cap(cap)
    try:
        yield
    finally:
        _state["cap"] = old


@contextlib.contextmanager
def pure_python():
    """Disable the flint backend inside the block."""
    old = _state["flint"]
    _state["flint"] = False
    try:
        yield
    finally:
        _state["flint"] = old


def _use_flint(field: Field) -> bool:
    return _state["flint"] and isinstance(field, (Rationals, PrimeField))


def dense_size(d: int) -> int:
    """Number of monomials of degree d in three variables."""
    return (d + 1) * (d + 2) // 2


def _check_cap(degree: int, bound: int) -> None:
    cap = _state["cap"]
    bound = min(bound, dense_size(degree))
    if bound > cap:
        raise DegreeOverflow(degree, bound, cap)


def monomials(d: int) -> list[tuple[int, int, int]]:
    """Exponent triples of degree d in descending graded-lex order."""
    return [(a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1)]


class HPoly:
    __slots__ = ("field", "degree", "_c", "_hash")

    def __init__(self, field: Field, terms: Mapping | Iterable = (), degree: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        c: dict[tuple[int, int, int], object] = {}
        add = field.add
        for exp, coeff in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != 3 or min(exp) < 0:
                raise ValueError(f"bad exponent {exp}")
            v = field.coerce(coeff)
            c[exp] = add(c[exp], v) if exp in c else v
        c = {e: v for e, v in c.items() if not field.is_zero(v)}
        degs = {sum(e) for e in c}
        if len(degs) > 1:
            raise ValueError(f"not homogeneous: degrees {sorted(degs)}")
        if c:
            d = degs.pop()
            if degree is not None and degree != d:
                raise ValueError(f"terms have degree {d}, expected {degree}")
        else:
            d = 0
        self.field = field
        self.degree = d
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, field: Field, coeffs: dict, degree: int) -> "HPoly":
        # trusted constructor: coeffs already canonical, nonzero and homogeneous
        obj = cls.__new__(cls)
        obj.field = field
        obj.degree = degree if coeffs else 0
        obj._c = coeffs
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field: Field) -> "HPoly":
        return cls._raw(field, {}, 0)

    @classmethod
    def const(cls, field: Field, value=1) -> "HPoly":
        v = field.coerce(value)
        return cls._raw(field, {} if field.is_zero(v) else {(0, 0, 0): v}, 0)

    @classmethod
    def monomial(cls, field: Field, exp: Sequence[int], coeff=1) -> "HPoly":
        return cls(field, {tuple(exp): coeff})

    @classmethod
    def var(cls, field: Field, name: str) -> "HPoly":
        exp = [0, 0, 0]
        exp[VARS.index(name)] = 1
        return cls._raw(field, {tuple(exp): field.one}, 1)

    @classmethod
    def gens(cls, field: Field) -> tuple["HPoly", "HPoly", "HPoly"]:
        return tuple(cls.var(field, v) for v in VARS)  # type: ignore[return-value]

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[tuple[int, int, int], object], ...]:
        """(exponent, raw coefficient) pairs in descending graded-lex order."""
        return tuple(sorted(self._c.items(), reverse=True))

    def coeffs(self) -> dict:
        return dict(self._c)

    def coeff(self, exp) -> Scalar:
        return Scalar(self.field, self._c.get(tuple(exp), self.field.zero))

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self) -> Iterator:
        return iter(self.terms)

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return self.degree == 0

    def leading_exp(self) -> tuple[int, int, int]:
        return max(self._c)

    def leading_coeff(self):
        return self._c[max(self._c)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, HPoly):
            return NotImplemented
        return self.field == other.field and self.degree == other.degree and self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, self.degree, frozenset(self._c.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"HPoly({self.field}, {self})"

    def __str__(self) -> str:
        return format_poly(self)

    # -- arithmetic ---------------------------------------------------------

    def _same(self, other: "HPoly") -> None:
        if self.field != other.field:
            raise FieldError(f"field mismatch: {self.field} vs {other.field}")

    def _lift(self, other) -> "HPoly":
        if isinstance(other, HPoly):
            self._same(other)
            return other
        return HPoly.const(self.field, other)

    def __add__(self, other) -> "HPoly":
        other = self._lift(other)
        if not other._c:
            return self
        if not self._c:
            return other
        if self.degree != other.degree:
            raise ValueError(f"not homogeneous: adding degrees {self.degree} and {other.degree}")
        f = self.field
        c = dict(self._c)
        for e, v in other._c.items():
            if e in c:
                s = f.add(c[e], v)
                if f.is_zero(s):
                    del c[e]
                else:
                    c[e] = s
            else:
                c[e] = v
        return HPoly._raw(f, c, self.degree)

    __radd__ = __add__

    def __neg__(self) -> "HPoly":
        f = self.field
        return HPoly._raw(f, {e: f.neg(v) for e, v in self._c.items()}, self.degree)

    def __sub__(self, other) -> "HPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "HPoly":
        return self._lift(other) + (-self)

    def scale(self, s) -> "HPoly":
        f = self.field
        s = f.coerce(s)
        if f.is_zero(s):
            return HPoly.zero(f)
        return HPoly._raw(f, {e: f.mul(v, s) for e, v in self._c.items()}, self.degree)

    def __mul__(self, other) -> "HPoly":
        if not isinstance(other, HPoly):
            return self.scale(other)
        self._same(other)
        if not self._c or not other._c:
            return HPoly.zero(self.field)
        d = self.degree + other.degree
        _check_cap(d, len(self._c) * len(other._c))
        if _use_flint(self.field) and len(self._c) * len(other._c) > 64:
            return _flint.mul(self, other)
        return HPoly._raw(self.field, _mul_dicts(self.field, self._c, other._c), d)

    def __rmul__(self, other) -> "HPoly":
        return self.scale(other)

    def __pow__(self, e: int) -> "HPoly":
        if e < 0:
            raise ValueError("negative power")
        if not self._c:
            return HPoly.const(self.field, 1 if e == 0 else 0)
        _check_cap(self.degree * e, len(self._c) ** e if e < 64 else dense_size(self.degree * e))
        result = HPoly.const(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def exact_div(self, other: "HPoly") -> "HPoly":
        """Exact quotient; raises ValueError when ``other`` does not divide ``self``."""
        self._same(other)
        if not other._c:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self._c:
            return self
        if _use_flint(self.field):
            return _flint.exact_div(self, other)
        return HPoly._raw(self.field, _exact_div_dicts(self.field, self._c, other._c), self.degree - other.degree)

    def diff(self, var: int | str) -> "HPoly":
        """Partial derivative with respect to x, y or z (or index 0, 1, 2)."""
        i = VARS.index(var) if isinstance(var, str) else var
        f = self.field
        c = {}
        for e, v in self._c.items():
            if e[i]:
                w = f.mul(v, f.from_int(e[i]))
                if not f.is_zero(w):
                    ne = list(e)
                    ne[i] -= 1
                    c[tuple(ne)] = w
        return HPoly._raw(f, c, self.degree - 1)

    def __call__(self, *pt) -> Scalar:
        if len(pt) == 1:
            pt = tuple(pt[0])
        return hp_eval(self, pt)

    def eval_raw(self, coords: Sequence) -> object:
        """Evaluate at raw field coordinates; returns a raw element."""
        f = self.field
        pw = [[f.one] for _ in range(3)]
        acc = f.zero
        for e, v in self._c.items():
            t = v
            for i in range(3):
                k = e[i]
                if k:
                    row = pw[i]
                    while len(row) <= k:
                        row.append(f.mul(row[-1], coords[i]))
                    t = f.mul(t, row[k])
            acc = f.add(acc, t)
        return acc

    def normalized(self) -> "HPoly":
        """Canonical associate: monic over finite fields, primitive integral with
        positive leading coefficient over QQ.  Zero stays zero."""
        if not self._c:
            return self
        return self.scale(normalizing_factor(self.field, [self]))

    def map_coeffs(self, field: Field, fn) -> "HPoly":
        """Apply a ring homomorphism ``fn`` (raw -> raw in ``field``) to every coefficient."""
        c = {}
        for e, v in self._c.items():
            w = fn(v)
            if not field.is_zero(w):
                c[e] = w
        return HPoly._raw(field, c, self.degree)

    def substitute(self, g: Sequence["HPoly"]) -> "HPoly":
        """``self(g0, g1, g2)`` for homogeneous g_i of one common degree."""
        return substitute(self, g)


# -- helpers over raw coefficient dicts --------------------------------------


def _mul_dicts(f: Field, a: dict, b: dict) -> dict:
    out: dict = {}
    if isinstance(f, PrimeField):
        p = f.p
        for (a0, a1, a2), u in a.items():
            for (b0, b1, b2), v in b.items():
                k = (a0 + b0, a1 + b1, a2 + b2)
                out[k] = out.get(k, 0) + u * v
        return {k: v % p for k, v in out.items() if v % p}
    if isinstance(f, Rationals):
        for (a0, a1, a2), u in a.items():
            for (b0, b1, b2), v in b.items():
                k = (a0 + b0, a1 + b1, a2 + b2)
                out[k] = out.get(k, 0) + u * v
        return {k: v for k, v in out.items() if v}
    add, mul, zero = f.add, f.mul, f.zero
    for (a0, a1, a2), u in a.items():
        for (b0, b1, b2), v in b.items():
            k = (a0 + b0, a1 + b1, a2 + b2)
            out[k] = add(out.get(k, zero), mul(u, v))
    return {k: v for k, v in out.items() if v != zero}


def _exact_div_dicts(f: Field, num: dict, den: dict) -> dict:
    rem = dict(num)
    lead = max(den)
    inv = f.inv(den[lead])
    q: dict = {}
    while rem:
        e = max(rem)
        shift = (e[0] - lead[0], e[1] - lead[1], e[2] - lead[2])
        if min(shift) < 0:
            raise ValueError("polynomial division is not exact")
        c = f.mul(rem[e], inv)
        q[shift] = c
        for de, dv in den.items():
            k = (de[0] + shift[0], de[1] + shift[1], de[2] + shift[2])
            nv = f.sub(rem.get(k, f.zero), f.mul(c, dv))
            if f.is_zero(nv):
                rem.pop(k, None)
            else:
                rem[k] = nv
    return q


def normalizing_factor(field: Field, polys: Sequence[HPoly]):
    """Scalar that puts a tuple of polynomials in canonical joint form.

    The leading coefficient of the first nonzero polynomial becomes 1 (finite
    fields) or all coefficients become coprime integers with that leading
    coefficient positive (QQ).
    """
    first = next(P for P in polys if P._c)
    lc = first.leading_coeff()
    if isinstance(field, Rationals):
        den = 1
        for P in polys:
            for v in P._c.values():
                den = math.lcm(den, v.denominator)
        num = 0
        for P in polys:
            for v in P._c.values():
                num = math.gcd(num, (v * den).numerator)
        s = Fraction(den, num)
        return -s if lc < 0 else s
    return field.inv(lc)


def substitute(P: HPoly, g: Sequence[HPoly]) -> HPoly:
    field = P.field
    for gi in g:
        P._same(gi)
    dg = max(gi.degree for gi in g)
    if any(gi.degree != dg for gi in g if not gi.is_zero()):
        raise ValueError("substituted polynomials must share one degree")
    if P.is_zero():
        return P
    D = P.degree * dg
    bound = 0
    sizes = [max(len(gi), 1) for gi in g]
    for e in P._c:
        bound += sizes[0] ** e[0] * sizes[1] ** e[1] * sizes[2] ** e[2]
        if bound > dense_size(D):
            break
    _check_cap(D, bound)
    if _use_flint(field):
        return _flint.substitute(P, g, D)
    powers = [[HPoly.const(field, 1)] for _ in range(3)]
    acc: dict = {}
    for e, v in P._c.items():
        t = HPoly.const(field, v)
        for i in range(3):
            row = powers[i]
            while len(row) <= e[i]:
                row.append(row[-1] * g[i])
            if e[i]:
                t = t * row[e[i]]
        for k, w in t._c.items():
            acc[k] = field.add(acc[k], w) if k in acc else w
    acc = {k: w for k, w in acc.items() if not field.is_zero(w)}
    return HPoly._raw(field, acc, D)


# -- evaluation ----------------------------------------------------------------


def hp_eval(P: HPoly, pt) -> Scalar:
    """Value of P at a projective point (canonical representative) or raw coordinates."""
    from .cremona import ProjPoint  # local import: cremona depends on hpoly

    if isinstance(pt, ProjPoint):
        if pt.field != P.field:
            raise FieldError(f"point over {pt.field}, polynomial over {P.field}")
        coords = pt.coords
    else:
        coords = tuple(P.field.coerce(c) for c in pt)
    return Scalar(P.field, P.eval_raw(coords))


# -- gcd -----------------------------------------------------------------------
#
# Pure kernel: strip the common power of z, dehomogenize at z = 1, and compute
# the gcd in (k[y])[x] with the subresultant PRS plus content recursion.


def _u_trim(a: list, f: Field) -> list:
    while a and f.is_zero(a[-1]):
        a.pop()
    return a


def _u_add(a, b, f):
    n = max(len(a), len(b))
    out = [f.add(a[i] if i < len(a) else f.zero, b[i] if i < len(b) else f.zero) for i in range(n)]
    return _u_trim(out, f)


def _u_sub(a, b, f):
    n = max(len(a), len(b))
    out = [f.sub(a[i] if i < len(a) else f.zero, b[i] if i < len(b) else f.zero) for i in range(n)]
    return _u_trim(out, f)


def _u_mul(a, b, f):
    if not a or not b:
        return []
    out = [f.zero] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if f.is_zero(u):
            continue
        for j, v in enumerate(b):
            out[i + j] = f.add(out[i + j], f.mul(u, v))
    return _u_trim(out, f)


def _u_divmod(a, b, f):
    r = list(a)
    _u_trim(r, f)
    inv = f.inv(b[-1])
    q = [f.zero] * max(len(r) - len(b) + 1, 0)
    while len(r) >= len(b):
        c = f.mul(r[-1], inv)
        s = len(r) - len(b)
        q[s] = c
        for i, v in enumerate(b):
            r[s + i] = f.sub(r[s + i], f.mul(c, v))
        r.pop()
        _u_trim(r, f)
    return _u_trim(q, f), r


def _u_exact(a, b, f):
    q, r = _u_divmod(a, b, f)
    if r:
        raise ArithmeticError("inexact division in k[y]")
    return q


def _u_gcd(a, b, f):
    a, b = _u_trim(list(a), f), _u_trim(list(b), f)
    while b:
        a, b = b, _u_divmod(a, b, f)[1]
    if a:
        inv = f.inv(a[-1])
        a = [f.mul(c, inv) for c in a]
    return a


def _u_pow(a, e, f):
    out = [f.one]
    for _ in range(e):
        out = _u_mul(out, a, f)
    return out


# bivariate: list indexed by power of x of univariate-in-y lists


def _b_content(A, f):
    g: list = []
    for c in A:
        g = _u_gcd(g, c, f)
        if len(g) == 1:
            break
    return g


def _b_scale_div(A, c, f):
    return [_u_exact(ci, c, f) for ci in A]


def _b_prem(A, B, f):
    """Pseudo-remainder lc(B)^(degA - degB + 1) * A mod B in (k[y])[x]."""
    R = [list(c) for c in A]
    db = len(B) - 1
    lb = B[-1]
    steps = len(A) - len(B) + 1
    while len(R) - 1 >= db and R:
        lr = R[-1]
        s = len(R) - 1 - db
        R = [_u_mul(c, lb, f) for c in R]
        for i, bc in enumerate(B):
            R[s + i] = _u_sub(R[s + i], _u_mul(lr, bc, f), f)
        while R and not R[-1]:
            R.pop()
        steps -= 1
    if steps > 0:
        m = _u_pow(lb, steps, f)
        R = [_u_mul(c, m, f) for c in R]
    return R


def _b_gcd(A, B, f):
    if not A:
        return B
    if not B:
        return A
    ca, cb = _b_content(A, f), _b_content(B, f)
    cont = _u_gcd(ca, cb, f)
    A, B = _b_scale_div(A, ca, f), _b_scale_div(B, cb, f)
    if len(A) < len(B):
        A, B = B, A
    if len(B) == 1:
        return [cont]
    g = [f.one]
    h = [f.one]
    while True:
        delta = len(A) - len(B)
        R = _b_prem(A, B, f)
        if not R:
            break
        if len(R) == 1:
            return [cont]
        den = _u_mul(g, _u_pow(h, delta, f), f)
        A, B = B, [_u_exact(c, den, f) for c in R]
        g = A[-1]
        if delta == 0:
            pass
        else:
            h = _u_exact(_u_pow(g, delta, f), _u_pow(h, delta - 1, f), f)
    pp = _b_scale_div(B, _b_content(B, f), f)
    return [_u_mul(cont, c, f) for c in pp]


def _dehomogenize(P: HPoly, zpow: int):
    f = P.field
    degx = max(e[0] for e in P._c)
    A: list = [[] for _ in range(degx + 1)]
    for (a, b, _c), v in P._c.items():
        row = A[a]
        while len(row) <= b:
            row.append(f.zero)
        row[b] = v
    return A


def _pure_gcd(P: HPoly, Q: HPoly) -> HPoly:
    f = P.field
    zp = min(e[2] for e in P._c)
    zq = min(e[2] for e in Q._c)
    m = min(zp, zq)
    A = _dehomogenize(P, zp)
    B = _dehomogenize(Q, zq)
    G = _b_gcd(A, B, f)
    D = max((a + b for a, row in enumerate(G) for b, v in enumerate(row) if not f.is_zero(v)), default=0)
    c = {}
    for a, row in enumerate(G):
        for b, v in enumerate(row):
            if not f.is_zero(v):
                c[(a, b, D - a - b + m)] = v
    return HPoly._raw(f, c, D + m)


def hp_gcd(P: HPoly, Q: HPoly) -> HPoly:
    """Normalized greatest common divisor of two homogeneous polynomials."""
    P._same(Q)
    if P.is_zero() and Q.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if P.is_zero():
        return Q.normalized()
    if Q.is_zero():
        return P.normalized()
    if P.is_constant() or Q.is_constant():
        return HPoly.const(P.field, 1)
    if _use_flint(P.field):
        return _flint.gcd(P, Q).normalized()
    return _pure_gcd(P, Q).normalized()


def hp_gcd_many(polys: Iterable[HPoly]) -> HPoly:
    g = None
    for P in polys:
        if P.is_zero():
            continue
        g = P.normalized() if g is None else hp_gcd(g, P)
        if g.is_constant():
            break
    if g is None:
        raise ValueError("gcd of zero polynomials is undefined")
    return g


# -- Jacobian ------------------------------------------------------------------


def jacobian_det(f: Sequence[HPoly]) -> HPoly:
    """Determinant of the 3x3 matrix of partials of (f0, f1, f2)."""
    if len(f) != 3:
        raise ValueError("need three components")
    nz = [P for P in f if not P.is_zero()]
    if not nz:
        raise ValueError("all components are zero")
    field = nz[0].field
    for P in f:
        nz[0]._same(P)
    d = nz[0].degree
    if any(P.degree != d for P in nz):
        raise ValueError("components must share one degree")
    J = [[P.diff(i) for i in range(3)] for P in f]
    det = (
        J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1])
        - J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0])
        + J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0])
    )
    if det.is_zero():
        return HPoly.zero(field)
    return det


# -- printing ------------------------------------------------------------------


def _coeff_text(field: Field, v) -> tuple[bool, str]:
    """(negative?, magnitude text) for a raw coefficient."""
    if isinstance(field, Rationals):
        neg = v < 0
        a = -v if neg else v
        return neg, str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
    if isinstance(field, ExtensionField):
        s = field.format(v)
        return False, s if "+" not in s else f"({s})"
    return False, str(v)


def format_poly(P: HPoly) -> str:
    """Text form accepted by :func:`p2dyn.parsing.parse_poly`, e.g. ``x*y - 2*z^2``."""
    if P.is_zero():
        return "0"
    f = P.field
    one = f.one
    out = []
    for e, v in P.terms:
        neg, mag = _coeff_text(f, v)
        mono = "*".join(
            (VARS[i] if e[i] == 1 else f"{VARS[i]}^{e[i]}") for i in range(3) if e[i]
        )
        if mono:
            abs_one = (v == one) or (neg and -v == one)
            body = mono if abs_one else f"{mag}*{mono}"
        else:
            body = mag
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
