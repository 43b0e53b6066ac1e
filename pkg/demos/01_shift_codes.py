"""
Zero-error codes for the shift channel
======================================

A word of length n with W ones is a point of a simplex: subtract (1, 2, ..., W)
from the positions of its ones.  A channel that may push every particle up to K
cells to the right turns a point x into any point of the little cube
x + {0..K}^W (clipped to keep the order).  Picking the points whose coordinates
are all multiples of K + 1 packs these cubes without overlap and without gaps.
"""

from itertools import product

import numpy as np

from zeroshift.channels import ShiftSpec, sample_shift, shift_outputs
from zeroshift.codes import (
    construct_shift_cw_code,
    decode,
    lift_to_pary,
    shift_code_count,
    shift_cw_count,
)
from zeroshift.core import format_word, parse_word, to_simplex
from zeroshift.oracle import max_code_size, perfect_cover_check, verify_correction

# The simplex view of a word
x = parse_word("010001")
print(format_word(x), "->", to_simplex(x))

# What the channel can do to one word
spec = ShiftSpec(1, 0, 1)
print("outputs of 101 with K=1:", sorted(format_word(z) for z in shift_outputs(parse_word("101"), spec)))

# The lattice code with n=9, W=2, K=1, drawn on the 8x8 triangle of points
code = construct_shift_cw_code(9, 2, 1)
points = {to_simplex(w).coords for w in code}
print(f"\n{len(code)} codewords; o marks a codeword, . any other point")
for s2 in range(7, -1, -1):
    row = "".join("o" if (s1, s2) in points else ("." if s1 <= s2 else " ") for s1 in range(8))
    print(f"  {s2} {row}")

# It is zero-error, it tiles the simplex, and nothing larger exists
print("\nzero-error:", bool(verify_correction(code)))
print("covers every input:", bool(perfect_cover_check(code)))
print("largest possible code (exhaustive search):", max_code_size(9, 2, spec))

# Decoding is a floor to the lattice
rng = np.random.default_rng(1)
for w in code.words[:4]:
    z = sample_shift(w, spec, rng)
    print(f"  sent {format_word(w)}  got {format_word(z)}  decoded {format_word(decode(code, z))}")

# Particle types ride along for free: each codeword carries P^W fillings
lifted = lift_to_pary(code, 3)
print(f"\nwith 3 particle types: {len(lifted)} codewords = 3^2 x {len(code)}")

# Sizes over all weights follow a short linear recurrence
print("\n n  sum over W   recurrence")
for n in range(0, 13, 3):
    by_weight = sum(shift_cw_count(n, W, 1, 2) for W in range(n + 1))
    print(f"{n:2d}  {by_weight:10d}   {shift_code_count(n, 1, 2):10d}")

# Exhaustive check on a small grid: the lattice is always as large as possible
worse = [(n, W, K) for n, W, K in product(range(1, 8), range(0, 3), range(0, 3))
         if W <= n and max_code_size(n, W, ShiftSpec(1, 0, K)) != shift_cw_count(n, W, K)]
print("\ninstances where a larger code exists:", worse)
