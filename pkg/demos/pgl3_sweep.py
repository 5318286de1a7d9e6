"""
Perturbing by linear maps
=========================

Compose f mod 5 with random invertible linear maps A and count how often
A o f keeps the maximal degrees 2, 4, 8.  Larger fields make accidental
degree drops rarer.
"""

from p2dyn import PrimeField, example_maps, field_make, pgl3_stability_sweep
from p2dyn.cremona import change_field

f5 = change_field(example_maps().f, PrimeField(5))
for field in (PrimeField(5), field_make("GF(5,2)")):
    f = f5 if field == PrimeField(5) else change_field(f5, field)
    st = pgl3_stability_sweep(f, 200, 3, seed=1)
    print(f"{str(field):9} {st.full_growth}/{st.trials} keep full growth up to n = {st.N}")
    drops = [s for s in st.samples if s != [2, 4, 8]]
    print("          typical drops:", sorted({tuple(s) for s in drops})[:4])
