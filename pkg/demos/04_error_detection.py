"""
Detecting shifts instead of correcting them
===========================================

A detecting code only has to notice that something moved.  When particles may
move both left and right, fixing the sum of the simplex coordinates does the
job: a move changes the sum unless some particles go left and others right, and
the lattice spacing rules that out.
"""

from zeroshift.capacity import detection_capacity, shift_capacity
from zeroshift.channels import QueueSpec, ShiftSpec, outputs
from zeroshift.codes import Code, construct_detection_code, detect
from zeroshift.core import format_word, parse_word, to_simplex
from zeroshift.oracle import verify_correction, verify_detection

pair = Code([parse_word("10000"), parse_word("00100")], 5, ShiftSpec(1, -1, 1), kind="detection")
for spec in (ShiftSpec(1, -1, 1), ShiftSpec(1, 0, 2)):
    print(f"{{10000, 00100}} on {spec}: detecting = {bool(verify_detection(pair, spec))}")

# The output frame starts one cell early to make room for left shifts.
# Sending 10000 and seeing the particle left, in place, or right of its cell:
for z in ("1000000", "0100000", "0010000"):
    print(f"receive {z} on SHIFT(1;-1,1): {detect(pair, parse_word(z))}")

spec = ShiftSpec(1, -1, 1)
code = construct_detection_code(9, 2, spec)
print(f"\nbest fixed-sum code for n=9, W=2 on {spec}: a={code.meta['a']}, size {len(code)}")
print("  points:", sorted(to_simplex(w).coords for w in code))
print("  detecting:", bool(verify_detection(code, spec)))
print("  also corrects SHIFT(1;0,1):", bool(verify_correction(code, ShiftSpec(1, 0, 1))))

print("\ndetection capacity on SHIFT(P;0,K) vs correction capacity")
for P in (1, 2, 3):
    for K in (1, 3):
        print(f"  P={P} K={K}: detect {detection_capacity(ShiftSpec(P, 0, K)):.4f}   "
              f"correct {shift_capacity(P, K):.4f}")

# On the queue the receiver reads only the first n slots and counts packets
q = QueueSpec(1, 1)
qcode = construct_detection_code(7, 2, q)
x = qcode.words[0]
print(f"\nqueue code a={qcode.meta['a']}, {len(qcode)} words; outputs of {format_word(x)}:")
for z in sorted(outputs(x, q)):
    print(f"  {format_word(z):<9} {detect(qcode, z)}")
