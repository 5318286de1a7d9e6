"""
Periodic points over finite fields
==================================

Exhaustive census of periodic points of f mod 5 over GF(5^k), keeping only
cycles that avoid the Jacobian locus, and a test of whether they lie on a
low-degree curve.
"""

from p2dyn import PrimeField, density_check, example_maps, field_make, periodic_census
from p2dyn.cremona import change_field

f5 = change_field(example_maps().f, PrimeField(5))
for k in (1, 2, 3):
    fk = f5 if k == 1 else change_field(f5, field_make(f"GF(5,{k})"))
    census = periodic_census(fk, noncritical_only=True)
    periods = sorted({n for _, n in census})
    pts = [pt for pt, _ in census]
    verdicts = [density_check(pts, D).verdict for D in (1, 2, 3)]
    print(f"GF(5^{k}): {len(census):4d} points, periods {periods}, {verdicts}")

# over GF(25) all non-critical periodic points sit on one line
census = periodic_census(change_field(f5, field_make("GF(5,2)")), noncritical_only=True)
rep = density_check([pt for pt, _ in census], 1)
print("GF(25) points lie on the curve", rep.curve, "= 0")
