"""
Degree growth and the first dynamical degree
============================================

Degree sequences over QQ and modulo primes, certified lambda_1 brackets, and a
map with linear degree growth for contrast.
"""

from p2dyn import QQ, PrimeField, bounds_from_sequence, classify_growth, example_maps, iterate_degrees
from p2dyn.cremona import change_field
from p2dyn.parsing import parse_triple
from p2dyn.cremona import map_new

ex = example_maps()

# over QQ the degrees double at every step
seq = iterate_degrees(ex.f, 8)
print("QQ      :", seq.degrees, "->", classify_growth(seq).kind)

# modulo p the orbit of a contracted curve lands in I(f) and growth slows down
for p in (3, 5, 7):
    s = iterate_degrees(change_field(ex.f, PrimeField(p)), 8)
    print(f"GF({p:<2})  :", s.degrees, " first drop at n =", s.first_drop())

# the random-line method reaches further for the same cost
s = iterate_degrees(change_field(ex.f, PrimeField(11)), 12, method="line")
print("GF(11)  :", s.degrees)

# certified bounds need a large jump between deg f^n and deg f^2n;
# with d_n = 2^n the lower certificates first apply at n = 30
b = bounds_from_sequence([2**n for n in range(1, 63)])
lo, hi = b.best_lower, b.best_upper
print(f"2^n     : {float(lo.value):.6f} <= lambda_1 <= {float(hi.value):.6f}")
print("          lower bound as an exact fraction has", len(str(lo.value)), "characters")

# a map preserving the pencil of lines through [0,1,0] grows linearly
jonq = map_new(*parse_triple("[x*z, x*y, z^2]", QQ))
s = iterate_degrees(jonq, 10)
g = classify_growth(s)
print("[xz,xy,z^2]:", s.degrees, "->", g.kind, "with slope", g.estimate)
