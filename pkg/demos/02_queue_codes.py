"""
Codes for a FIFO queue with bounded service time
================================================

Packets enter a single server in the slots where the input word has a symbol,
wait while the server is busy, and leave after a service time of at most K
slots.  If every packet (but the last) is followed by K empty slots, no packet
ever waits, and the queue behaves like the shift channel.  That suggests a
code: reserve the gaps, then build the shift lattice in what is left.
"""

import numpy as np

from zeroshift.channels import QueueSpec, queue_outputs, sample_queue
from zeroshift.codes import (
    construct_queue_code,
    decode,
    greedy_reverse_lex,
    queue_code_count,
)
from zeroshift.core import format_word, parse_word, to_simplex
from zeroshift.oracle import estimate_Lav, max_code_size, verify_correction

phi = (0.2, 0.3, 0.5)
spec = QueueSpec(1, 2, phi)
print("outputs of 11 with K=1:", sorted(format_word(z) for z in queue_outputs(parse_word("11"), QueueSpec(1, 1))))

spaced = construct_queue_code(10, 2, 2, phi)
greedy = greedy_reverse_lex(10, 2, spec)
print("\nspaced lattice:", sorted(to_simplex(w).coords for w in spaced))
print("greedy        :", sorted(to_simplex(w).coords for w in greedy))
print("both zero-error:", bool(verify_correction(spaced)) and bool(verify_correction(greedy)))
print("largest possible:", max_code_size(10, 2, spec))

rng = np.random.default_rng(5)
print("\na few transmissions over the queue")
for w in spaced.words[:4]:
    z = sample_queue(w, spec, rng)
    print(f"  {format_word(w)} -> {format_word(z):<12} -> {format_word(decode(spaced, z))}")

# The spacing keeps outputs short: at most K slots past the end
est = estimate_Lav(spaced, spec, 100000, rng)
print(f"\nmean output length {est.mean:.3f} +- {est.stderr:.3f}  (n = {spaced.n})")

# Back-to-back packets pile up instead: n (1 + E[kappa]) on average
ones = np.ones(40, dtype=int)
lengths = [len(sample_queue(tuple(ones), spec, rng)) for _ in range(20000)]
print(f"40 packets back to back: mean length {np.mean(lengths):.2f}, expected {40 * (1 + spec.Ekappa):.2f}")

# The spaced construction is not always the largest code.  At weight 3 the
# greedy search and the exhaustive optimum find room for more codewords.
print("\n n  W  K  spaced  greedy  optimum")
for n, W, K in [(7, 2, 1), (9, 2, 1), (5, 3, 1), (7, 3, 1), (9, 3, 1), (10, 3, 2)]:
    q = QueueSpec(1, K)
    print(f"{n:2d} {W:2d} {K:2d}  {queue_code_count(n, W, K):6d}  "
          f"{len(greedy_reverse_lex(n, W, q)):6d}  {max_code_size(n, W, q):7d}")
