"""Birational self-maps of the projective plane.

A :class:`CremonaMap` is a triple of homogeneous polynomials of one degree,
stored in lowest terms and jointly normalized, so two maps are equal exactly
when they are the same rational map.  ``compose(f, g)`` (also ``f @ g``)
applies ``g`` first.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .fields import ExtensionField, Field, FieldError, PrimeField, Rationals, is_prime
from .hpoly import (
    DegreeOverflow,
    HPoly,
    format_poly,
    hp_gcd_many,
    jacobian_det,
    monomials,
    normalizing_factor,
    substitute,
)
from .points import ProjPoint, enumerate_p2

__all__ = [
    "CremonaMap",
    "MapError",
    "ProjPoint",
    "DegreeSequence",
    "ReductionReport",
    "StabilityVerdict",
    "StableUpTo",
    "UnstableAt",
    "StableProven",
    "map_new",
    "identity",
    "linear_map",
    "compose",
    "compose_raw",
    "verify_inverse",
    "evaluate",
    "indeterminacy_points",
    "iterate_degrees",
    "reduce_mod_p",
    "stability_witness",
    "find_inverse",
    "change_field",
]

log = logging.getLogger(__name__)


class MapError(ValueError):
    """The given triple does not define a rational self-map of P^2."""


def _coeff_rank(field: Field, polys: Sequence[HPoly]) -> int:
    exps = sorted({e for P in polys for e in P.coeffs()})
    rows = [[P.coeffs().get(e, field.zero) for e in exps] for P in polys]
    return linalg.rank(field, rows) if exps else 0


class CremonaMap:
    """Reduced, normalized triple [f0, f1, f2]; build with :func:`map_new`."""

    __slots__ = ("field", "components", "degree", "_jac", "_hash")

    def __init__(self, field: Field, components: tuple[HPoly, HPoly, HPoly], degree: int):
        # trusted: use map_new for untrusted input
        self.field = field
        self.components = components
        self.degree = degree
        self._jac = None
        self._hash = None

    def __eq__(self, other) -> bool:
        if not isinstance(other, CremonaMap):
            return NotImplemented
        return self.field == other.field and self.components == other.components

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, self.components))
        return self._hash

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i: int) -> HPoly:
        return self.components[i]

    def __matmul__(self, other: "CremonaMap") -> "CremonaMap":
        return compose(self, other)

    def __call__(self, pt: ProjPoint) -> ProjPoint | None:
        return evaluate(self, pt)

    def __str__(self) -> str:
        return "[" + ", ".join(format_poly(P) for P in self.components) + "]"

    def __repr__(self) -> str:
        return f"CremonaMap({self.field}, {self})"

    @property
    def jacobian(self) -> HPoly:
        if self._jac is None:
            self._jac = jacobian_det(self.components)
        return self._jac

    def is_identity(self) -> bool:
        return self == identity(self.field)

    def is_linear(self) -> bool:
        return self.degree == 1

    def is_dominant(self) -> bool:
        """Components linearly independent (necessary for birationality)."""
        return _coeff_rank(self.field, self.components) == 3

    def iterate(self, n: int) -> "CremonaMap":
        if n < 0:
            raise ValueError("use an explicit inverse for negative powers")
        g = identity(self.field)
        for _ in range(n):
            g = compose(self, g)
        return g

    def over(self, field: Field) -> "CremonaMap":
        return change_field(self, field)


def _reduce_triple(field: Field, polys: Sequence[HPoly]) -> tuple[tuple[HPoly, HPoly, HPoly], HPoly]:
    g = hp_gcd_many(polys)
    if not g.is_constant():
        polys = [P.exact_div(g) for P in polys]
    s = normalizing_factor(field, polys)
    return tuple(P.scale(s) for P in polys), g  # type: ignore[return-value]


def map_new(p0: HPoly, p1: HPoly, p2: HPoly) -> CremonaMap:
    """Build a map from three homogeneous polynomials.

    The common factor of the triple is divided out, so the degree of the
    result may be lower than the input degree.
    """
    polys = (p0, p1, p2)
    field = p0.field
    for P in polys:
        if P.field != field:
            raise FieldError(f"component fields differ: {p0.field} vs {P.field}")
    nz = [P for P in polys if not P.is_zero()]
    if not nz:
        raise MapError("all components are zero")
    if len({P.degree for P in nz}) > 1:
        raise MapError(f"components have different degrees {[P.degree for P in polys]}")
    if _coeff_rank(field, polys) < 2:
        raise MapError("components are pairwise proportional: the image is a single point")
    comps, _ = _reduce_triple(field, polys)
    d = max(P.degree for P in comps if not P.is_zero())
    return CremonaMap(field, comps, d)


def identity(field: Field) -> CremonaMap:
    return CremonaMap(field, HPoly.gens(field), 1)


def linear_map(field: Field, matrix: Sequence[Sequence]) -> CremonaMap:
    """The linear map pt -> A pt for a 3x3 matrix A."""
    gens = HPoly.gens(field)
    comps = []
    for row in matrix:
        P = HPoly.zero(field)
        for a, g in zip(row, gens):
            P = P + g.scale(a)
        comps.append(P)
    return map_new(*comps)


def compose_raw(f: CremonaMap, g: CremonaMap) -> tuple[HPoly, HPoly, HPoly]:
    """Substitute g into f without cancelling the common factor."""
    if f.field != g.field:
        raise FieldError(f"cannot compose maps over {f.field} and {g.field}")
    return tuple(substitute(P, g.components) for P in f.components)  # type: ignore[return-value]


def compose(f: CremonaMap, g: CremonaMap) -> CremonaMap:
    """f o g (g is applied first), reduced to lowest terms.

    Raises :class:`~p2dyn.hpoly.DegreeOverflow` when the substituted triple
    would exceed the term cap.
    """
    raw = compose_raw(f, g)
    if log.isEnabledFor(logging.DEBUG):
        log.debug("compose: raw triple [%s]", ", ".join(format_poly(P) for P in raw))
    return map_new(*raw)


def verify_inverse(f: CremonaMap, g: CremonaMap) -> bool:
    """True iff g o f is the identity."""
    return compose(g, f).is_identity()


def evaluate(f: CremonaMap, pt: ProjPoint) -> ProjPoint | None:
    """f(pt), or None when pt lies in the indeterminacy set I(f)."""
    if pt.field != f.field:
        raise FieldError(f"point over {pt.field}, map over {f.field}")
    field = f.field
    vals = [P.eval_raw(pt.coords) for P in f.components]
    if all(field.is_zero(v) for v in vals):
        return None
    return ProjPoint.from_raw(field, vals)


def indeterminacy_points(f: CremonaMap) -> list[ProjPoint]:
    """I(f) over a finite field, by enumerating all of P^2(F_q)."""
    if not f.field.is_finite:
        raise FieldError("indeterminacy points are only computed over finite fields")
    field = f.field
    out = []
    for pt in enumerate_p2(field):
        if all(field.is_zero(P.eval_raw(pt.coords)) for P in f.components):
            out.append(pt)
    return out


# -- change of field -----------------------------------------------------------


def _coeff_hom(src: Field, dst: Field):
    """Ring homomorphism between raw elements for the supported field pairs."""
    if src == dst:
        return lambda v: v
    if isinstance(src, Rationals) and isinstance(dst, (PrimeField, ExtensionField)):
        p = dst.p

        def red(v: Fraction):
            if v.denominator % p == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            return dst.div(dst.from_int(v.numerator), dst.from_int(v.denominator))

        return red
    if isinstance(src, PrimeField) and isinstance(dst, ExtensionField) and src.p == dst.p:
        return dst.from_int
    raise FieldError(f"no coefficient map {src} -> {dst}")


def change_field(f: CremonaMap, field: Field) -> CremonaMap:
    """Base change of a map (QQ -> GF(q) reduces, GF(p) -> GF(p^k) embeds)."""
    hom = _coeff_hom(f.field, field)
    return map_new(*(P.map_coeffs(field, hom) for P in f.components))


# -- degree sequences ----------------------------------------------------------


@dataclass
class DegreeSequence:
    """Degrees of f, f^2, ..., f^N.

    ``termination`` is ``"completed"``, ``"term_cap_hit"`` or
    ``"map_degenerated"``; ``stopped_at`` is the first n that could not be
    computed.  ``method`` is ``"compose"`` (exact) or ``"line"`` (restriction
    to random lines; each value is at most the true degree and equals it
    unless every line used passes through a base point of f^n).
    """

    source: str
    records: list[tuple[int, int]]
    termination: str = "completed"
    stopped_at: int | None = None
    method: str = "compose"
    notes: list[str] = dc_field(default_factory=list)

    @classmethod
    def from_degrees(cls, degrees: Sequence[int], source: str = "given") -> "DegreeSequence":
        return cls(source, [(i + 1, int(d)) for i, d in enumerate(degrees)], method="given")

    @property
    def degrees(self) -> list[int]:
        return [d for _, d in self.records]

    def __len__(self) -> int:
        return len(self.records)

    def get(self, n: int) -> int | None:
        if 1 <= n <= len(self.records):
            return self.records[n - 1][1]
        return None

    def first_drop(self) -> int | None:
        """Least n with deg f^n < (deg f)^n, or None if none recorded."""
        if not self.records:
            return None
        d = self.records[0][1]
        for n, dn in self.records:
            if dn < d**n:
                return n
        return None

    def submultiplicativity_violations(self) -> list[tuple[int, int]]:
        """Pairs (m, n) with deg f^(m+n) > 2 deg f^m deg f^n (should be empty)."""
        bad = []
        N = len(self.records)
        for m in range(1, N + 1):
            for n in range(m, N + 1 - m):
                if self.get(m + n) > 2 * self.get(m) * self.get(n):
                    bad.append((m, n))
        return bad


def iterate_degrees(
    f: CremonaMap,
    N: int,
    *,
    method: str = "compose",
    term_cap: int | None = None,
    seed: int = 0,
    lines: int = 2,
) -> DegreeSequence:
    """Degree sequence of f by repeated left composition f o f^(n-1).

    ``method="line"`` follows the restriction of f^n to random lines instead
    of the full polynomials; see :class:`DegreeSequence` for its guarantee.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    if method == "line":
        return _line_degrees(f, N, seed=seed, lines=lines)
    if method != "compose":
        raise ValueError(f"unknown method {method!r}")
    from . import hpoly

    seq = DegreeSequence(str(f), [(1, f.degree)])
    cap_ctx = hpoly.term_cap(term_cap) if term_cap else _null()
    with cap_ctx:
        g = f
        for n in range(2, N + 1):
            try:
                g = compose(f, g)
            except DegreeOverflow as exc:
                seq.termination, seq.stopped_at = "term_cap_hit", n
                seq.notes.append(str(exc))
                break
            except MapError as exc:
                seq.termination, seq.stopped_at = "map_degenerated", n
                seq.notes.append(str(exc))
                break
            seq.records.append((n, g.degree))
    return seq


class _null:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def _line_degrees(f: CremonaMap, N: int, seed: int, lines: int) -> DegreeSequence:
    import flint

    rng = random.Random(seed)
    field = f.field
    runs = []
    for _ in range(max(1, lines)):
        if isinstance(field, Rationals):
            R = flint.fmpq_poly
            conv = lambda v: flint.fmpq(v.numerator, v.denominator)  # noqa: E731
            line = [R([rng.randint(-97, 97), rng.randint(-97, 97)]) for _ in range(3)]
            gcd = lambda a, b: a.gcd(b)  # noqa: E731
        else:
            p = field.p
            k = field.k
            K = k * max(2, math.ceil(80 / (k * math.log2(p))))
            F = flint.fq_default_ctx(p, K)
            R = flint.fq_default_poly_ctx(F)
            if k == 1:
                conv = lambda v, F=F: F(v)  # noqa: E731
            else:
                alpha = R([F(c) for c in field.modulus]).roots()[0][0]
                pw = [F(1)]
                for _ in range(k - 1):
                    pw.append(pw[-1] * alpha)

                def conv(v, pw=pw, F=F):
                    acc = F(0)
                    for c, a in zip(v, pw):
                        if c:
                            acc += c * a
                    return acc

            def rnd(F=F, K=K):
                return F([rng.randrange(p) for _ in range(K)])

            line = [R([rnd(), rnd()]) for _ in range(3)]
            gcd = lambda a, b: a.gcd(b)  # noqa: E731
        comps = [[(e, conv(v)) for e, v in P.coeffs().items()] for P in f.components]
        cur = line
        degs = []
        stopped = None
        for n in range(1, N + 1):
            pw = [[None] for _ in range(3)]
            new = []
            for terms in comps:
                acc = R(0)
                for e, c in terms:
                    t = R([c])
                    for i in range(3):
                        if e[i]:
                            row = pw[i]
                            if row[0] is None:
                                row[0] = R([1])
                            while len(row) <= e[i]:
                                row.append(row[-1] * cur[i])
                            t = t * row[e[i]]
                    acc = acc + t
                new.append(acc)
            g = new[0]
            for h in new[1:]:
                g = gcd(g, h)
            if g.is_zero():
                stopped = n
                break
            if g.degree() > 0:
                new = [h // g for h in new]
            nonconst = [h for h in new if not h.is_zero()]
            d = max(h.degree() for h in nonconst)
            cur = new
            degs.append(d)
        runs.append((degs, stopped))
    N_ok = min(len(d) for d, _ in runs)
    best = [max(run[0][i] for run in runs) for i in range(N_ok)]
    seq = DegreeSequence(str(f), [(i + 1, d) for i, d in enumerate(best)], method="line")
    if any(run[0][:N_ok] != best for run in runs):
        seq.notes.append("random lines disagreed; the maximum was kept")
    if N_ok < N:
        seq.termination, seq.stopped_at = "map_degenerated", N_ok + 1
    return seq


# -- reduction modulo p ----------------------------------------------------------


@dataclass
class ReductionReport:
    prime: int
    degree_before: int
    degree_after: int
    birational_verified: bool | None
    degenerate: bool = False
    notes: list[str] = dc_field(default_factory=list)


def reduce_mod_p(
    f: CremonaMap, p: int, candidate_inverse: CremonaMap | None = None
) -> tuple[CremonaMap, ReductionReport]:
    """Reduce a map over QQ modulo a prime.

    The primitive integer form is reduced coefficientwise and re-reduced by
    gcd, so the degree may drop.  A degenerate result (components linearly
    dependent, so the map is not dominant) is returned with
    ``degenerate=True`` rather than rejected, unless it is not a map at all.
    """
    if not isinstance(f.field, Rationals):
        raise FieldError("reduce_mod_p expects a map over QQ")
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    Fp = PrimeField(p)
    hom = _coeff_hom(f.field, Fp)
    reduced = [P.map_coeffs(Fp, hom) for P in f.components]
    if all(P.is_zero() for P in reduced):
        raise MapError(f"all components vanish modulo {p}")
    g = map_new(*reduced)
    report = ReductionReport(p, f.degree, g.degree, None)
    if g.degree < f.degree:
        report.notes.append(f"degree drops from {f.degree} to {g.degree} modulo {p}")
    if not g.is_dominant():
        report.degenerate = True
        report.birational_verified = False
        for i in range(3):
            for j in range(i + 1, 3):
                if _coeff_rank(Fp, [g[i], g[j]]) < 2:
                    report.notes.append(f"components {i} and {j} are proportional modulo {p}")
        report.notes.append("components are linearly dependent: the map is not dominant, hence not birational")
        return g, report
    if candidate_inverse is not None:
        try:
            inv, _ = reduce_mod_p(candidate_inverse, p)
            report.birational_verified = verify_inverse(g, inv)
        except MapError as exc:
            report.birational_verified = False
            report.notes.append(f"inverse does not reduce: {exc}")
    return g, report


# -- algebraic stability ---------------------------------------------------------


@dataclass(frozen=True)
class StabilityVerdict:
    orbits: dict = dc_field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class StableUpTo(StabilityVerdict):
    """No tracked orbit met I(f) within N steps."""

    N: int = 0


@dataclass(frozen=True)
class UnstableAt(StabilityVerdict):
    """``f^step(witness)`` lies in I(f); ``path`` lists witness, f(witness), ..."""

    step: int = 0
    witness: ProjPoint | None = None
    path: tuple = ()


@dataclass(frozen=True)
class StableProven(StabilityVerdict):
    """Every tracked orbit closed into a cycle disjoint from I(f)."""


def stability_witness(
    f: CremonaMap, inverse_images: Iterable[ProjPoint] | None = None, N: int = 64
) -> StabilityVerdict:
    """Follow the forward orbits of the points of I(f^-1).

    A point whose orbit reaches I(f) after ``n`` steps witnesses that f is
    not algebraically stable.  An orbit that revisits a point is periodic from
    then on and can never reach I(f); if all orbits do, stability is proven.
    Otherwise (only possible over QQ) the verdict is :class:`StableUpTo`.
    Over a finite field ``inverse_images`` defaults to I(f^-1), computed from
    a searched inverse.
    """
    if inverse_images is None:
        if not f.field.is_finite:
            raise ValueError("supply I(f^-1) explicitly over QQ")
        inv = find_inverse(f)
        if inv is None:
            raise MapError("no inverse found; supply the points of I(f^-1)")
        inverse_images = indeterminacy_points(inv)
    orbits: dict = {}
    hits = []
    all_cycled = True
    for start in inverse_images:
        path = [start]
        seen = {start}
        pt = start
        cycled = False
        limit = None if f.field.is_finite else N
        while limit is None or len(path) <= limit:
            nxt = evaluate(f, pt)
            if nxt is None:
                hits.append((len(path) - 1, start, tuple(path)))
                break
            if nxt in seen:
                cycled = True
                break
            path.append(nxt)
            seen.add(nxt)
            pt = nxt
        orbits[start] = tuple(path)
        all_cycled = all_cycled and cycled
    if hits:
        step, start, path = min(hits, key=lambda h: (h[0], h[1].sort_key()))
        return UnstableAt(orbits, step, start, path)
    if all_cycled:
        return StableProven(orbits)
    return StableUpTo(orbits, N)


# -- inverse search --------------------------------------------------------------


def find_inverse(f: CremonaMap, degree: int | None = None) -> CremonaMap | None:
    """Search for g of the given degree (default deg f) with g o f = identity.

    The conditions ``x_j g_i(f) = x_i g_j(f)`` are linear in the coefficients
    of g; a nonzero kernel vector is turned into a map and checked with
    :func:`verify_inverse`.  Returns None when no inverse of that degree exists.
    """
    field = f.field
    e = f.degree if degree is None else degree
    monos = monomials(e)
    M = len(monos)
    images = []
    for a, b, c in monos:
        images.append(f[0] ** a * f[1] ** b * f[2] ** c)
    gens = HPoly.gens(field)
    rows_by_exp: dict = {}
    # unknown index i*M + m is the coefficient of monomial m in g_i
    for i, j in ((0, 1), (0, 2), (1, 2)):
        for m, img in enumerate(images):
            for sign, comp, var in ((1, i, gens[j]), (-1, j, gens[i])):
                for exp, v in (img * var).coeffs().items():
                    row = rows_by_exp.setdefault((i, j, exp), {})
                    col = comp * M + m
                    w = v if sign == 1 else field.neg(v)
                    row[col] = field.add(row.get(col, field.zero), w)
    rows = [[r.get(c, field.zero) for c in range(3 * M)] for r in rows_by_exp.values()]
    basis = linalg.kernel(field, rows, 3 * M)
    for vec in basis:
        comps = [HPoly(field, {monos[m]: vec[i * M + m] for m in range(M)}) for i in range(3)]
        try:
            g = map_new(*comps)
        except MapError:
            continue
        if verify_inverse(f, g):
            return g
    return None
