"""
How many spins does the reduction save?
=======================================

Ensemble statistics for the qubit reduction 1 - |B|/n on random regular and
Erdos-Renyi graphs.  Sparse regular graphs keep sizable cores; dense random
graphs are all boundary, so nothing is saved.
"""

import numpy as np

import qubocut as qc

SEEDS = 40


def reduction_means(make_graph):
    base_vals, ref_vals = [], []
    for seed in range(SEEDS):
        g = make_graph(seed)
        base = qc.detect_multilevel(g, seed=seed)
        ref = qc.refine_boundary(g, base, seed=seed)
        n = g.num_vertices
        base_vals.append(1.0 - base.boundary.sum() / n)
        ref_vals.append(1.0 - ref.boundary.sum() / n)
    return np.mean(base_vals), np.mean(ref_vals)


print(f"{'family':>22} {'baseline':>9} {'refined':>8}")
for n in (60, 100):
    b, r = reduction_means(lambda s: qc.random_regular(n, 3, seed=s))
    print(f"{f'3-regular n={n}':>22} {b:>9.3f} {r:>8.3f}")
for n in (60, 100):
    b, r = reduction_means(lambda s: qc.random_regular(n, 4, seed=s))
    print(f"{f'4-regular n={n}':>22} {b:>9.3f} {r:>8.3f}")
for n in (40, 60):
    b, r = reduction_means(lambda s: qc.random_erdos_renyi(n, 0.3, seed=s))
    print(f"{f'ER p=0.3 n={n}':>22} {b:>9.3f} {r:>8.3f}")
