"""Certified bounds on the first dynamical degree and degree-growth heuristics.

Every certificate is an exact :class:`~fractions.Fraction`.  Irrational
quantities (sqrt(2), n-th roots) are bracketed with rationals and rounded
toward soundness: lower bounds down, upper bounds up.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cremona import DegreeSequence

__all__ = [
    "Bound",
    "Lambda1Bounds",
    "GrowthClass",
    "sqrt2_bracket",
    "iroot",
    "nth_root_bracket",
    "thm31_applicable",
    "thm31_lower_bound",
    "cor32_lower_bound",
    "submult_upper_bound",
    "bounds_from_sequence",
    "largest_real_root",
    "classify_growth",
]

C36 = 3**36
C18 = 3**18
DEFAULT_PREC = 64


# -- rational brackets -----------------------------------------------------------


def sqrt2_bracket(prec: int = DEFAULT_PREC) -> tuple[Fraction, Fraction]:
    """Consecutive convergents p/q of sqrt(2) with lo < sqrt(2) < hi and hi - lo < 2^-prec."""
    p, q = 1, 1
    lo = hi = None
    eps = Fraction(1, 2**prec)
    while True:
        r = Fraction(p, q)
        if p * p - 2 * q * q < 0:
            lo = r
        else:
            hi = r
        if lo is not None and hi is not None and hi - lo < eps:
            return lo, hi
        p, q = p + 2 * q, p + q


def iroot(a: int, n: int) -> int:
    """floor(a^(1/n)) for integers a >= 0, n >= 1."""
    if a < 0 or n < 1:
        raise ValueError("iroot needs a >= 0 and n >= 1")
    if a < 2 or n == 1:
        return a
    x = 1 << -(-a.bit_length() // n)
    while True:
        y = ((n - 1) * x + a // x ** (n - 1)) // n
        if y >= x:
            break
        x = y
    while x**n > a:
        x -= 1
    while (x + 1) ** n <= a:
        x += 1
    return x


def nth_root_bracket(x: Fraction, n: int, prec: int = DEFAULT_PREC) -> tuple[Fraction, Fraction]:
    """Dyadic lo <= x^(1/n) <= hi with hi - lo <= 2^-prec (x >= 0)."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative radicand")
    scale = 2 ** (prec * n)
    num, den = x.numerator * scale, x.denominator
    a = num // den
    r = iroot(a, n)
    lo = Fraction(r, 2**prec)
    exact = r**n * den == num
    hi = lo if exact else Fraction(r + 1, 2**prec)
    return lo, hi


# -- bounds ----------------------------------------------------------------------


@dataclass(frozen=True)
class Bound:
    """One certificate.  ``kind`` is ``thm31``, ``cor32`` (lower) or ``submult`` (upper)."""

    n: int
    kind: str
    value: Fraction
    useful: bool = True

    @property
    def is_lower(self) -> bool:
        return self.kind != "submult"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "kind": self.kind,
            "value": str(self.value),
            "decimal": f"{float(self.value):.12f}",
            "useful": self.useful,
        }


def _check_degrees(*ds: int) -> None:
    for d in ds:
        if not isinstance(d, int) or d < 1:
            raise ValueError(f"degrees must be integers >= 1, got {d!r}")


def thm31_applicable(d1: int, d2: int) -> bool:
    """q >= 1 where q = d2 / (3^18 sqrt(2) d1), decided in integers."""
    return d2 * d2 >= 2 * C36 * d1 * d1


def _q_lower(d1: int, d2: int, prec: int) -> Fraction:
    s_lo, _ = sqrt2_bracket(prec + 8)
    # 1/sqrt(2) = sqrt(2)/2, so a lower bracket of sqrt(2) gives a lower bracket of q
    return Fraction(d2) * s_lo / (2 * C18 * d1)


def thm31_value(q: Fraction) -> Fraction:
    """((4*3^36 - 1) q^2 + 1) / (4*3^36 q), increasing in q for q >= 1."""
    q = Fraction(q)
    return ((4 * C36 - 1) * q * q + 1) / (4 * C36 * q)


def thm31_lower_bound(d1: int, d2: int, n: int = 1, prec: int = DEFAULT_PREC) -> Bound | None:
    """Lower bound for lambda_1(f) from d1 = deg f^n and d2 = deg f^(2n).

    Returns None (not applicable) unless d2^2 >= 2 * 3^36 * d1^2.
    """
    _check_degrees(d1, d2, n)
    if not thm31_applicable(d1, d2):
        return None
    B = thm31_value(_q_lower(d1, d2, prec))
    lo, _ = nth_root_bracket(B, n, prec)
    # applicability alone gives lambda_1 > 1
    return Bound(n, "thm31", max(lo, Fraction(1)))


def cor32_lower_bound(d1: int, d2: int, n: int = 1, prec: int = DEFAULT_PREC) -> Bound | None:
    """Lower bracket of (q_n / 2)^(1/n).

    None when q_n < 1.  For 1 <= q_n < 2 the value is below 1 and the bound
    is returned with ``useful=False``.
    """
    _check_degrees(d1, d2, n)
    if not thm31_applicable(d1, d2):
        return None
    useful = d2 * d2 >= 8 * C36 * d1 * d1
    lo, _ = nth_root_bracket(_q_lower(d1, d2, prec) / 2, n, prec)
    if useful:
        lo = max(lo, Fraction(1))
    return Bound(n, "cor32", lo, useful)


def submult_upper_bound(dn: int, n: int, prec: int = DEFAULT_PREC) -> Bound:
    """Upper bracket of (2 deg f^n)^(1/n), an upper bound for lambda_1(f)."""
    _check_degrees(dn, n)
    _, hi = nth_root_bracket(Fraction(2 * dn), n, prec)
    return Bound(n, "submult", hi)


@dataclass
class Lambda1Bounds:
    entries: list[Bound] = field(default_factory=list)

    @property
    def lowers(self) -> list[Bound]:
        return [b for b in self.entries if b.is_lower]

    @property
    def uppers(self) -> list[Bound]:
        return [b for b in self.entries if not b.is_lower]

    @property
    def best_lower(self) -> Bound | None:
        useful = [b for b in self.lowers if b.useful]
        return max(useful, key=lambda b: (b.value, -b.n)) if useful else None

    @property
    def best_upper(self) -> Bound | None:
        ups = self.uppers
        return min(ups, key=lambda b: (b.value, b.n)) if ups else None

    def first(self, kind: str) -> Bound | None:
        """Earliest useful certificate of one kind."""
        hits = [b for b in self.entries if b.kind == kind and b.useful]
        return min(hits, key=lambda b: b.n) if hits else None

    def consistent(self) -> bool:
        lo, hi = self.best_lower, self.best_upper
        return lo is None or hi is None or lo.value <= hi.value

    def to_json(self) -> dict:
        lo, hi = self.best_lower, self.best_upper
        return {
            "entries": [b.to_json() for b in self.entries],
            "best_lower": lo.to_json() if lo else None,
            "best_upper": hi.to_json() if hi else None,
        }


def bounds_from_sequence(seq: DegreeSequence | Sequence[int], prec: int = DEFAULT_PREC) -> Lambda1Bounds:
    """Apply the three bounds at every n for which deg f^(2n) is also recorded.

    A one-term sequence has no such pair; it still yields the n = 1 upper bound.
    """
    degs = seq.degrees if isinstance(seq, DegreeSequence) else [int(d) for d in seq]
    if not degs:
        raise ValueError("empty degree sequence")
    out = Lambda1Bounds()
    N = len(degs)
    usable = range(1, N // 2 + 1) if N >= 2 else range(1, 2)
    for n in usable:
        d1 = degs[n - 1]
        out.entries.append(submult_upper_bound(d1, n, prec))
        if 2 * n <= N:
            d2 = degs[2 * n - 1]
            for op in (thm31_lower_bound, cor32_lower_bound):
                b = op(d1, d2, n, prec)
                if b is not None:
                    out.entries.append(b)
    return out


# -- the root polynomial x^n - 2 x^(n-1) + 1 -------------------------------------


def _root_poly(n: int, x: Fraction) -> Fraction:
    return x**n - 2 * x ** (n - 1) + 1


def largest_real_root(n: int, tol: Fraction | float = Fraction(1, 10**12)) -> tuple[Fraction, Fraction]:
    """Rational bracket (lo, hi) of width <= tol around the largest real root
    of x^n - 2 x^(n-1) + 1.

    For n > 2 the search starts from [2 - (2/3)^(n-1), 2 - (1/2)^(n-1)],
    where the polynomial changes sign; for n = 2 the root is exactly 1.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if n == 2:
        lo, hi = Fraction(0), Fraction(2)
        if _root_poly(2, Fraction(1)) == 0:
            return Fraction(1), Fraction(1)
    else:
        lo = 2 - Fraction(2, 3) ** (n - 1)
        hi = 2 - Fraction(1, 2) ** (n - 1)
    flo = _root_poly(n, lo)
    if flo == 0:
        return lo, lo
    if _root_poly(n, hi) == 0:
        return hi, hi
    while hi - lo > tol:
        mid = (lo + hi) / 2
        fm = _root_poly(n, mid)
        if fm == 0:
            return mid, mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def root_bracket_check(n: int, lo: Fraction, hi: Fraction) -> bool:
    """The polynomial changes sign on [lo, hi] (or lo == hi is an exact root)."""
    if lo == hi:
        return _root_poly(n, lo) == 0
    return _root_poly(n, lo) * _root_poly(n, hi) < 0


# -- growth heuristics -----------------------------------------------------------

EXP_RATIO = 1.25


@dataclass(frozen=True)
class GrowthClass:
    """Heuristic verdict: ``bounded``, ``linear``, ``quadratic``, ``exponential``
    or ``inconclusive``.  ``estimate`` is c for linear (d ~ c n) and quadratic
    (d ~ c n^2) growth and lambda for exponential growth."""

    kind: str
    estimate: float | None = None
    diagnostics: dict = field(default_factory=dict, compare=False)
    heuristic: bool = True

    def to_json(self) -> dict:
        return {"kind": self.kind, "estimate": self.estimate, "heuristic": True, "diagnostics": self.diagnostics}


def classify_growth(seq: DegreeSequence | Sequence[int]) -> GrowthClass:
    """Classify a degree sequence from its second half.

    * bounded: the tail is constant;
    * linear: first differences of the tail are constant and positive;
    * quadratic: second differences of the tail are constant and positive;
    * exponential: every tail ratio d(n+1)/d(n) is at least 1.25.

    Finitely many terms never prove any of these, hence the ``heuristic`` flag.
    """
    degs = seq.degrees if isinstance(seq, DegreeSequence) else [int(d) for d in seq]
    if len(degs) < 6:
        raise ValueError("need at least 6 terms to classify growth")
    w = max(4, len(degs) // 2)
    tail = degs[-w:]
    d1 = [b - a for a, b in zip(tail, tail[1:])]
    d2 = [b - a for a, b in zip(d1, d1[1:])]
    ratios = [b / a for a, b in zip(tail, tail[1:]) if a]
    diag = {"window": w, "first_differences": d1, "second_differences": d2, "ratios": [round(r, 6) for r in ratios]}
    if len(set(tail)) == 1:
        return GrowthClass("bounded", None, diag)
    if len(set(d1)) == 1 and d1[0] > 0:
        return GrowthClass("linear", float(d1[0]), diag)
    if len(d2) >= 2 and len(set(d2)) == 1 and d2[0] > 0:
        return GrowthClass("quadratic", d2[0] / 2, diag)
    if ratios and len(ratios) == len(tail) - 1 and min(ratios) >= EXP_RATIO:
        lam = (tail[-1] / tail[0]) ** (1 / (len(tail) - 1))
        return GrowthClass("exponential", lam, diag)
    return GrowthClass("inconclusive", None, diag)
