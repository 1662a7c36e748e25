"""
Compiling a spin polynomial to weighted MaxSAT
==============================================

Each degree-k term becomes 2^(k-1) weighted clauses whose satisfied weight is
an affine, decreasing image of the energy, so any MaxSAT solver doubles as a
PUBO minimizer.  The offset and scale ride along as WCNF comments.
"""

from itertools import product

from qubocut import PuboPolynomial, pubo_to_wcnf, write_wcnf

poly = PuboPolynomial(3, {(): 1.0, (0, 1): 2.0, (1, 2): -1.0, (0, 1, 2): 1.0})
inst = pubo_to_wcnf(poly)

print(f"variables: {inst.num_vars}, clauses: {len(inst.clauses)}, "
      f"scale: {inst.scale}, offset: {inst.offset}")
print(write_wcnf(inst))

# the affine identity holds at every assignment
print(f"{'spins':>12} {'energy':>7} {'satisfied':>10} {'sat/scale+offset':>17}")
for s in product((1, -1), repeat=3):
    energy = poly.evaluate(s)
    sat = inst.satisfied_weight(s)
    recon = sat / inst.scale + inst.offset
    assert recon == -energy
    print(f"{str(s):>12} {energy:>7.1f} {sat:>10} {recon:>17.1f}")
print("satisfied/scale + offset == -E everywhere")
