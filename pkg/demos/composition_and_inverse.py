"""
Composing plane Cremona maps
============================

Build the quadratic map f = h o g from a quadratic map g and a linear map h,
watch a common factor cancel when f is composed with its inverse, and check
where f is undefined.
"""

import logging

from p2dyn import QQ, PrimeField, ProjPoint, compose, evaluate, example_maps, verify_inverse
from p2dyn.cremona import change_field, compose_raw, indeterminacy_points

ex = example_maps()
print("g  =", ex.g)
print("h  =", ex.h)

# composition applies the right-hand map first
f = compose(ex.h, ex.g)
print("h o g =", f, "  same as built-in f:", f == ex.f)

# before cancellation the composite carries the factor 4*y*z^2
print("raw f^-1 o f =", list(map(str, compose_raw(ex.f_inv, f))))
print("reduced      =", compose(ex.f_inv, f))

# the same raw triple is logged at DEBUG level during verification
logging.basicConfig(level=logging.DEBUG, format="  log: %(message)s")
print("inverse verified:", verify_inverse(f, ex.f_inv))
logging.getLogger().setLevel(logging.WARNING)

# f is undefined exactly where all three components vanish
print("f([1,0,0]) =", evaluate(f, ProjPoint.of(QQ, [1, 0, 0])))
print("f([1,1,1]) =", evaluate(f, ProjPoint.of(QQ, [1, 1, 1])))

# over a finite field the indeterminacy points can be listed exhaustively
F7 = PrimeField(7)
print("I(f) over GF(7)    =", [str(p) for p in indeterminacy_points(change_field(f, F7))])
print("I(f^-1) over GF(7) =", [str(p) for p in indeterminacy_points(change_field(ex.f_inv, F7))])
