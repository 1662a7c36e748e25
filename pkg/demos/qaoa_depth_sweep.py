"""
QAOA approximation ratio against circuit depth
==============================================

Optimize the angles of depth-p circuits on one MaxCut instance and watch the
approximation ratio climb with p.  The budget is deliberately small so the
sweep finishes in seconds; the acceptance suite runs the full-budget version.
"""

import numpy as np

import qubocut as qc
from qubocut.qaoa import optimize

g = qc.random_regular(10, 3, seed=3)
poly = qc.maxcut_to_qubo(g)
e_min, _ = qc.brute_force_min(poly)
print(f"n={g.num_vertices} m={g.num_edges} E_min={e_min}")

print(f"{'p':>3} {'ratio':>8} {'<E>':>9} {'evals':>6}")
for p in range(5):
    result = optimize(poly, p=p, budget=400, starts=2, seed=3, e_min=e_min)
    print(f"{p:>3} {result.ratio:>8.4f} {result.expectation:>9.4f} "
          f"{result.evals_used:>6}")

# the uniform state (p=0) sits exactly at -M/2
uniform = optimize(poly, p=0, budget=1, starts=1, seed=0, e_min=e_min)
assert abs(uniform.expectation + g.num_edges / 2) < 1e-12
print(f"p=0 expectation equals -M/2 = {-g.num_edges / 2}")
