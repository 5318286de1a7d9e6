"""
Losing stability modulo p
=========================

For each odd prime p, n_p is the order of 2 modulo p.  The orbit of [0,-2,3]
under f mod p reaches the indeterminacy point [0,1,0] after n_p - 2 steps,
the degree sequence drops below 2^n at n = n_p, and the growth rate is the
largest real root of x^n_p - 2 x^(n_p - 1) + 1.
"""

from fractions import Fraction

from p2dyn import example_maps, iterate_degrees, largest_real_root, multiplicative_order
from p2dyn import reduce_mod_p, stability_witness

ex = example_maps()
print(f"{'p':>3} {'n_p':>4} {'unstable at':>12} {'first drop':>11} {'growth rate':>14}")
for p in (3, 5, 7, 11, 13):
    n_p = multiplicative_order(2, p)
    fp, report = reduce_mod_p(ex.f, p, ex.f_inv)
    assert report.birational_verified
    v = stability_witness(fp)
    seq = iterate_degrees(fp, n_p + 1, method="line")
    lo, hi = largest_real_root(n_p, Fraction(1, 10**12))
    print(f"{p:>3} {n_p:>4} {v.step:>12} {seq.first_drop():>11} {float(lo):>14.10f}")

# modulo 2 two components coincide and the map is not even dominant
g, report = reduce_mod_p(ex.f, 2, ex.f_inv)
print("mod 2:", g, "|", "; ".join(report.notes))
