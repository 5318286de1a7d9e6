"""Exhaustive dynamics on P^2(F_q): orbits, periodic points, density, PGL_3 sweeps."""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

from . import linalg
from .cremona import CremonaMap, MapError, compose, evaluate, iterate_degrees, linear_map
from .fields import Field, FieldError
from .hpoly import DegreeOverflow, HPoly, monomials
from .points import ProjPoint, enumerate_p2

__all__ = [
    "OrbitRecord",
    "DensityReport",
    "SweepStats",
    "enumerate_p2",
    "orbit",
    "successor_table",
    "periodic_census",
    "census_records",
    "density_check",
    "random_pgl3",
    "pgl3_stability_sweep",
]


@dataclass(frozen=True)
class OrbitRecord:
    """Outcome of following one orbit.

    ``abort`` is None, ``"indeterminacy"`` (the point reached after
    ``abort_step`` evaluations lies in I(f)) or ``"step_cap"``.  ``cycle`` is
    0 when the orbit was aborted.  ``critical`` is set when some visited point
    lies on the Jacobian locus.
    """

    start: ProjPoint
    tail: int
    cycle: int
    abort: str | None = None
    abort_step: int | None = None
    critical: bool = False

    def to_json(self) -> dict:
        return {
            "start": self.start.to_json(),
            "tail": self.tail,
            "cycle": self.cycle,
            "abort": self.abort,
            "abort_step": self.abort_step,
            "critical": self.critical,
        }


def _require_finite(field: Field) -> None:
    if not field.is_finite:
        raise FieldError("finite-field dynamics needs GF(p) or GF(p^k)")


def orbit(f: CremonaMap, start: ProjPoint, cap: int | None = None) -> OrbitRecord:
    """Follow ``start`` under f with Brent's cycle detection.

    The default step cap is the number of points of P^2(F_q), which every
    orbit respects.
    """
    _require_finite(f.field)
    if start.field != f.field:
        raise FieldError(f"point over {start.field}, map over {f.field}")
    q = f.field.size
    if cap is None:
        cap = q * q + q + 2
    jac = f.jacobian
    field = f.field

    def on_jac(pt):
        return field.is_zero(jac.eval_raw(pt.coords))

    # Brent: find the cycle length lam, then the tail mu
    power = lam = 1
    tortoise = start
    hare = evaluate(f, start)
    steps = 1
    if hare is None:
        return OrbitRecord(start, 0, 0, "indeterminacy", 0, on_jac(start))
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        nxt = evaluate(f, hare)
        if nxt is None:
            return _aborted(f, start, steps, on_jac)
        hare = nxt
        lam += 1
        steps += 1
        if steps > cap:
            return OrbitRecord(start, 0, 0, "step_cap", steps, False)
    tortoise = hare = start
    for _ in range(lam):
        hare = evaluate(f, hare)
    mu = 0
    while tortoise != hare:
        tortoise = evaluate(f, tortoise)
        hare = evaluate(f, hare)
        mu += 1
    critical = False
    pt = start
    for _ in range(mu + lam):
        critical = critical or on_jac(pt)
        pt = evaluate(f, pt)
    return OrbitRecord(start, mu, lam, None, None, critical)


def _aborted(f, start, steps, on_jac):
    pt = start
    critical = False
    for _ in range(steps + 1):
        critical = critical or on_jac(pt)
        pt = evaluate(f, pt)
    return OrbitRecord(start, 0, 0, "indeterminacy", steps, critical)


def _successors(f: CremonaMap, pts: list[ProjPoint]) -> list[tuple[ProjPoint | None, bool]]:
    jac = f.jacobian
    field = f.field
    return [(evaluate(f, pt), field.is_zero(jac.eval_raw(pt.coords))) for pt in pts]


def successor_table(f: CremonaMap, threads: int = 1) -> tuple[list[ProjPoint], dict, dict]:
    """Evaluate f and the Jacobian at every point of P^2(F_q).

    Returns (points in canonical order, point -> image or None, point -> on
    Jacobian locus).  Work is split into contiguous chunks, so the merged
    result does not depend on ``threads``.
    """
    _require_finite(f.field)
    pts = list(enumerate_p2(f.field))
    threads = max(1, threads)
    if threads == 1:
        rows = _successors(f, pts)
    else:
        size = -(-len(pts) // threads)
        chunks = [pts[i : i + size] for i in range(0, len(pts), size)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = [r for part in pool.map(lambda c: _successors(f, c), chunks) for r in part]
    succ = {pt: r[0] for pt, r in zip(pts, rows)}
    crit = {pt: r[1] for pt, r in zip(pts, rows)}
    return pts, succ, crit


def census_records(
    f: CremonaMap, max_period: int | None = None, threads: int = 1
) -> list[tuple[ProjPoint, int, bool]]:
    """(point, period, critical) for every periodic point of period <= max_period.

    ``critical`` is set when some point of the cycle lies on the Jacobian
    locus.  The functional graph of f on P^2(F_q) is built once and its
    cycles are read off, which classifies every point.
    """
    pts, succ, crit = successor_table(f, threads)
    if max_period is None:
        max_period = len(pts)
    done: set = set()
    period: dict[ProjPoint, int] = {}
    for s in pts:
        if s in done:
            continue
        path = []
        pos: dict[ProjPoint, int] = {}
        pt = s
        while pt is not None and pt not in done:
            pos[pt] = len(path)
            done.add(pt)
            path.append(pt)
            pt = succ[pt]
        if pt is not None and pt in pos:
            cyc = path[pos[pt] :]
            for c in cyc:
                period[c] = len(cyc)
    out = []
    for pt in pts:
        n = period.get(pt)
        if n is None or n > max_period:
            continue
        c, bad = pt, False
        for _ in range(n):
            bad = bad or crit[c]
            c = succ[c]
        out.append((pt, n, bad))
    return out


def periodic_census(
    f: CremonaMap,
    max_period: int | None = None,
    noncritical_only: bool = False,
    threads: int = 1,
) -> list[tuple[ProjPoint, int]]:
    """All periodic points of exact period <= max_period, in canonical order.

    With ``noncritical_only`` a point is kept only if its whole cycle avoids
    the Jacobian locus; cycle points avoid I(f) automatically, since each has
    an image.
    """
    return [
        (pt, n)
        for pt, n, critical in census_records(f, max_period, threads)
        if not (noncritical_only and critical)
    ]


# -- density proxy --------------------------------------------------------------


@dataclass
class DensityReport:
    """Whether the points lie on some curve of degree D.

    ``contained`` is True iff the m x M evaluation matrix of the degree-D
    monomials has rank < M; then ``curve`` is a nonzero polynomial vanishing
    at every point.  Density over a finite field is only approximated this
    way: containment in no curve of degree <= D.
    """

    points: int
    D: int
    monomials: int
    rank: int
    contained: bool
    curve: HPoly | None = None

    @property
    def verdict(self) -> str:
        return f"ContainedInCurve({self.D})" if self.contained else f"NotContained({self.D})"

    def to_json(self) -> dict:
        return {
            "points": self.points,
            "D": self.D,
            "monomials": self.monomials,
            "rank": self.rank,
            "verdict": self.verdict,
            "curve": str(self.curve) if self.curve is not None else None,
        }


def density_check(points: list[ProjPoint], D: int) -> DensityReport:
    if not points:
        raise ValueError("empty point list")
    if D < 1:
        raise ValueError("D must be at least 1")
    field = points[0].field
    if any(pt.field != field for pt in points):
        raise FieldError("points over different fields")
    monos = monomials(D)
    rows = []
    for pt in points:
        pw = [[field.pow(c, k) for k in range(D + 1)] for c in pt.coords]
        rows.append([field.mul(field.mul(pw[0][a], pw[1][b]), pw[2][c]) for a, b, c in monos])
    M = len(monos)
    r = linalg.rank(field, rows)
    curve = None
    if r < M:
        vec = linalg.kernel(field, rows, M)[0]
        curve = HPoly(field, {monos[i]: v for i, v in enumerate(vec)}).normalized()
    return DensityReport(len(points), D, M, r, r < M, curve)


# -- PGL_3 sweeps ------------------------------------------------------------------


def _det3(field: Field, A) -> object:
    f = field
    m = lambda a, b: f.mul(a, b)  # noqa: E731
    t1 = m(A[0][0], f.sub(m(A[1][1], A[2][2]), m(A[1][2], A[2][1])))
    t2 = m(A[0][1], f.sub(m(A[1][0], A[2][2]), m(A[1][2], A[2][0])))
    t3 = m(A[0][2], f.sub(m(A[1][0], A[2][1]), m(A[1][1], A[2][0])))
    return f.add(f.sub(t1, t2), t3)


def random_pgl3(field: Field, rng: random.Random) -> list[list]:
    """Uniform invertible 3x3 matrix by rejection sampling on the determinant."""
    while True:
        A = [[field.random(rng) for _ in range(3)] for _ in range(3)]
        if not field.is_zero(_det3(field, A)):
            return A


@dataclass
class SweepStats:
    field: str
    trials: int
    N: int
    seed: int
    full_growth: int
    degree: int
    samples: list = dc_field(default_factory=list)

    @property
    def fraction(self) -> float:
        return self.full_growth / self.trials

    def to_json(self) -> dict:
        return {
            "field": self.field,
            "trials": self.trials,
            "N": self.N,
            "seed": self.seed,
            "degree": self.degree,
            "full_growth": self.full_growth,
            "fraction": f"{self.full_growth}/{self.trials}",
            "fraction_decimal": round(self.fraction, 6),
            "degree_sequences": self.samples,
        }


def pgl3_stability_sweep(f: CremonaMap, trials: int, N: int, seed: int = 0) -> SweepStats:
    """Fraction of random A in PGL_3(F_q) with deg (A o f)^s = d^s for all s <= N."""
    _require_finite(f.field)
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = random.Random(seed)
    d = f.degree
    hits = 0
    samples = []
    for _ in range(trials):
        A = random_pgl3(f.field, rng)
        g = compose(linear_map(f.field, A), f)
        try:
            seq = iterate_degrees(g, N)
            degs = seq.degrees
        except (DegreeOverflow, MapError):
            degs = []
        ok = len(degs) == N and all(degs[s - 1] == d**s for s in range(1, N + 1))
        hits += ok
        samples.append(degs)
    return SweepStats(str(f.field), trials, N, seed, hits, d, samples)
