"""
Interpolating a spin polynomial from its value table
====================================================

The Walsh-Hadamard transform turns the 2^M values of a function on spin
configurations into the coefficients of the unique multilinear polynomial
that produces them.  This is how quenched community tables become boundary
polynomials.
"""

import numpy as np

from qubocut import PuboPolynomial, table_to_polynomial
from qubocut.wht import fwht

rng = np.random.default_rng(0)

# a random table over 3 spins: index = bitmask, variable 0 is the top bit
table = rng.integers(-4, 5, size=8).astype(np.float64)
print("table:", table)

# coefficients come from the symmetric transform divided by 2^M
coeffs = fwht(table) / len(table)
print("wht/8:", coeffs)

poly = table_to_polynomial(table)
print("terms:", poly.terms)

# reconstruction is exact at every configuration
for mask in range(8):
    s = [1 - 2 * ((mask >> (2 - i)) & 1) for i in range(3)]
    assert poly.evaluate(s) == table[mask]
print("reconstruction exact at all 8 masks")

# the transform is its own inverse up to 2^M
again = fwht(fwht(table)) / len(table)
print("involution max error:", np.max(np.abs(again - table)))
