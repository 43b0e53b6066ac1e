from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zeroshift.channels import QueueSpec, ShiftSpec, outputs, sample, sample_shift
from zeroshift.codes import (
    CLEAN,
    DETECTION,
    ERROR_DETECTED,
    Code,
    DecodeError,
    GuardExceeded,
    InfeasibleError,
    construct_dense_queue_code,
    construct_detection_code,
    construct_queue_code,
    construct_shift_code,
    construct_shift_cw_code,
    decode,
    decode_queue_point,
    decode_shift_point,
    detect,
    dumps_code,
    greedy_reverse_lex,
    lift_to_pary,
    loads_code,
    queue_code_count,
    shift_code_count,
    shift_cw_count,
)
from zeroshift.core import format_word, parse_word, to_simplex
from zeroshift.oracle import verify_correction, verify_detection

LATTICE_9_2_1 = {(0, 0), (0, 2), (0, 4), (0, 6), (2, 2), (2, 4), (2, 6), (4, 4), (4, 6), (6, 6)}
SPACED_10_2_2 = {(0, 2), (0, 5), (0, 8), (3, 5), (3, 8), (6, 8)}
GREEDY_10_2_2 = {(0, 0), (0, 5), (0, 8), (3, 3), (3, 8), (6, 6)}


def coords(code):
    return {to_simplex(w).coords for w in code}


# -- shift lattice codes -----------------------------------------------------------


def test_lattice_code_n9_w2_k1():
    code = construct_shift_cw_code(9, 2, 1)
    assert coords(code) == LATTICE_9_2_1
    assert code.construction == "shift-lattice"
    assert code.channel == ShiftSpec(1, 0, 1)


def test_lattice_small_cases():
    assert [format_word(w) for w in construct_shift_cw_code(5, 0, 3)] == ["00000"]
    code = construct_shift_cw_code(5, 1, 2)
    assert {format_word(w) for w in code} == {"10000", "00010"}
    assert len(code) == comb(1 + 4 // 3, 1)


def test_lattice_count_matches_formula():
    for n in range(0, 13):
        for W in range(n + 1):
            for K in range(4):
                assert len(construct_shift_cw_code(n, W, K)) == shift_cw_count(n, W, K)


def test_lattice_codes_are_zero_error():
    for n in range(0, 11):
        for W in range(min(n, 4) + 1):
            for K in range(4):
                code = construct_shift_cw_code(n, W, K)
                assert verify_correction(code)
                for P in (2, 3):
                    assert verify_correction(lift_to_pary(code, P))


def test_lift_examples():
    code = Code([parse_word("01")], 2, ShiftSpec(1, 0, 1))
    assert {format_word(w) for w in lift_to_pary(code, 2)} == {"01", "02"}
    base = construct_shift_cw_code(9, 2, 1)
    assert lift_to_pary(base, 1) == base
    assert len(lift_to_pary(base, 3)) == 9 * len(base) == shift_cw_count(9, 2, 1, P=3)


def test_lift_rejects_pary_input():
    code = Code([(2, 0)], 2, ShiftSpec(2, 0, 1))
    with pytest.raises(ValueError):
        lift_to_pary(code, 3)


def test_shift_code_count_examples():
    assert [shift_code_count(n, 1, 1) for n in range(7)] == [1, 2, 3, 5, 8, 13, 21]
    assert shift_code_count(2, 3, 2) == 7
    for P in (1, 2, 5):
        for K in range(4):
            assert shift_code_count(0, K, P) == 1


def test_shift_code_count_is_exact_for_large_n():
    # equality of two big-int computations, far past float precision
    n, K, P = 300, 2, 3
    total = sum(shift_cw_count(n, W, K, P) for W in range(n + 1))
    assert shift_code_count(n, K, P) == total
    assert total.bit_length() > 300


def test_full_shift_code_union_of_weights():
    code = construct_shift_code(6, 1, 2)
    assert len(code) == shift_code_count(6, 1, 2)
    assert verify_correction(code)


# -- queue codes -------------------------------------------------------------------


def test_spaced_queue_code_n10_w2_k2():
    code = construct_queue_code(10, 2, 2)
    assert coords(code) == SPACED_10_2_2
    assert len(code) == queue_code_count(10, 2, 2) == 6
    assert verify_correction(code)


def test_queue_code_examples():
    code = construct_queue_code(4, 4, 0)
    assert [format_word(w) for w in code] == ["1111"]
    assert len(construct_queue_code(7, 2, 1)) == comb(4, 2)


def test_queue_code_count_examples():
    assert queue_code_count(10, 2, 2, 1) == 6
    assert queue_code_count(7, 2, 1, 3) == 54
    assert queue_code_count(8, 0, 3, 2) == 1
    with pytest.raises(ValueError):
        queue_code_count(9, 2, 2)  # 9 is not 1 mod 3
    with pytest.raises(ValueError):
        queue_code_count(1, 2, 2)  # too short for the spacing


def test_queue_code_infeasible():
    with pytest.raises(InfeasibleError):
        construct_queue_code(4, 3, 1)


def test_queue_code_pads_length():
    code = construct_queue_code(9, 2, 2)
    assert code.n == 10
    assert code.meta["padded_from"] == 9
    assert len(code) == queue_code_count(10, 2, 2)


def test_queue_codes_are_zero_error():
    for n in range(1, 11):
        for W in range(min(n, 4) + 1):
            for K in range(4):
                try:
                    code = construct_queue_code(n, W, K)
                except InfeasibleError:
                    continue
                assert verify_correction(code), (n, W, K)
                for P in (2, 3):
                    assert verify_correction(lift_to_pary(code, P))
                if (n - 1) % (K + 1) == 0 and n >= W * (K + 1) - K:
                    assert len(code) == queue_code_count(n, W, K)


def test_dense_queue_code():
    spec_phi = (0.5, 0.5)
    code = construct_dense_queue_code(3, 2, 1, spec_phi)
    assert len(code) == 8
    assert code.construction == "dense"
    assert verify_correction(code)


# -- greedy ------------------------------------------------------------------------


def test_greedy_queue_n10_w2_k2():
    code = greedy_reverse_lex(10, 2, QueueSpec(1, 2))
    assert coords(code) == GREEDY_10_2_2
    assert verify_correction(code)


def test_greedy_examples():
    assert len(greedy_reverse_lex(9, 2, ShiftSpec(1, 0, 1))) == 10
    assert {format_word(w) for w in greedy_reverse_lex(3, 1, ShiftSpec(1, 0, 0))} == {"100", "010", "001"}


def test_greedy_matches_lattice_on_shift():
    for n in range(1, 10):
        for W in range(min(n, 3) + 1):
            for K in range(4):
                greedy = greedy_reverse_lex(n, W, ShiftSpec(1, 0, K))
                assert len(greedy) == shift_cw_count(n, W, K)
                assert verify_correction(greedy)


def test_greedy_guard():
    with pytest.raises(GuardExceeded):
        greedy_reverse_lex(30, 5, ShiftSpec(1, 0, 1), max_candidates=1000)


# -- detection ---------------------------------------------------------------------


def test_detection_shift_example():
    code = construct_detection_code(9, 2, ShiftSpec(1, -1, 1), a=6)
    assert coords(code) == {(0, 6), (2, 4)}
    assert code.kind == DETECTION
    zero = construct_detection_code(9, 2, ShiftSpec(1, -1, 1), a=0)
    assert coords(zero) == {(0, 0)}


def test_detection_queue_example():
    code = construct_detection_code(5, 2, QueueSpec(1, 1), a=1)
    assert coords(code) == {(0, 1)}
    assert [format_word(w) for w in code] == ["10100"]


def test_detection_auto_picks_largest_smallest_a():
    spec = ShiftSpec(1, -1, 1)
    best = construct_detection_code(9, 2, spec)
    sizes = {}
    for a in range(0, 2 * 7 + 1):
        try:
            sizes[a] = len(construct_detection_code(9, 2, spec, a=a))
        except InfeasibleError:
            sizes[a] = 0
    top = max(sizes.values())
    assert len(best) == top
    assert best.meta["a"] == min(a for a, s in sizes.items() if s == top)
    # pigeonhole guarantee over the parent lattice code
    assert len(best) * (2 * 7 + 1) >= len(construct_shift_cw_code(9, 2, 1))


def test_detection_codes_verify():
    for n in range(1, 9):
        for W in range(1, min(n, 3) + 1):
            for K1, K2 in [(-1, 1), (-2, 1), (-2, 2), (0, 2), (-1, 0)]:
                spec = ShiftSpec(1, K1, K2)
                assert verify_detection(construct_detection_code(n, W, spec), spec)
            for K in range(3):
                spec = QueueSpec(1, K)
                assert verify_detection(construct_detection_code(n, W, spec), spec)


def test_detection_lifted():
    spec = ShiftSpec(2, -1, 1)
    code = construct_detection_code(6, 2, spec)
    assert code.P == 2
    assert verify_detection(code)


def test_detect_examples():
    code = Code([parse_word("10000"), parse_word("00100")], 5, ShiftSpec(1, -1, 1), kind=DETECTION)
    # SHIFT(1;-1,1) frames are 7 cells; 10000 left in place reads 0100000
    assert detect(code, parse_word("0100000")) == CLEAN
    assert detect(code, parse_word("0010000")) == ERROR_DETECTED
    fooled = Code(list(code), 5, ShiftSpec(1, 0, 2), kind=DETECTION)
    # 10000 shifted by two reads as the other codeword
    assert detect(fooled, parse_word("0010000")) == CLEAN


def test_detect_queue_reads_first_n_slots(rng):
    spec = QueueSpec(1, 1)
    code = construct_detection_code(6, 2, spec)
    for x in code:
        assert detect(code, x) == CLEAN
        for z in outputs(x, spec):
            if z != x:
                assert detect(code, z) == ERROR_DETECTED


# -- decoding ----------------------------------------------------------------------


@pytest.mark.parametrize("z, K, x", [((3, 5), 1, (2, 4)), ((0, 0), 1, (0, 0)), ((5, 7), 2, (3, 6))])
def test_decode_shift_point(z, K, x):
    assert decode_shift_point(z, K) == x


@pytest.mark.parametrize("z, x", [((1, 3), (0, 2)), ((0, 5), (0, 5)), ((7, 9), (6, 8))])
def test_decode_queue_point(z, x):
    assert decode_queue_point(z, 10, 2, 2) == x


def test_decode_queue_point_rejects_foreign_output():
    with pytest.raises(DecodeError):
        decode_queue_point((0, 1), 10, 2, 2)


def test_decoders_invert_every_output():
    cases = [construct_shift_cw_code(9, 2, 1), construct_shift_cw_code(8, 3, 2),
             lift_to_pary(construct_shift_cw_code(7, 2, 1), 2),
             construct_queue_code(10, 2, 2), construct_queue_code(9, 3, 1),
             greedy_reverse_lex(10, 2, QueueSpec(1, 2)),
             construct_dense_queue_code(3, 2, 1)]
    for code in cases:
        for x in code:
            for z in outputs(x, code.channel):
                assert decode(code, z) == x


def test_decode_shift_random_trials(rng):
    code = construct_shift_cw_code(12, 3, 2)
    words = code.words
    picks = rng.integers(len(words), size=100000)
    for i in picks:
        assert decode(code, sample_shift(words[i], code.channel, rng)) == words[i]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 4), st.integers(0, 3), st.integers(0, 2**32 - 1))
def test_queue_code_round_trip(n, W, K, seed):
    W = min(W, n)
    try:
        code = construct_queue_code(n, W, K, phi=[1 / (K + 1)] * (K + 1))
    except InfeasibleError:
        return
    rng = np.random.default_rng(seed)
    for x in code.words[:20]:
        assert decode(code, sample(x, code.channel, rng)) == x


# -- code files --------------------------------------------------------------------


def test_code_file_round_trip():
    for code in [construct_shift_cw_code(9, 2, 1), construct_queue_code(10, 2, 2),
                 construct_detection_code(9, 2, ShiftSpec(1, -1, 1))]:
        text = dumps_code(code)
        assert text.splitlines()[0].startswith(f"n={code.n} P={code.P} channel=")
        again = loads_code(text)
        assert again.words == code.words
        assert again.channel == code.channel
        assert again.kind == code.kind
        assert again.construction == code.construction


def test_code_validation():
    with pytest.raises(ValueError):
        Code([], 3, ShiftSpec(1, 0, 1))
    with pytest.raises(ValueError):
        Code([(1, 0)], 3, ShiftSpec(1, 0, 1))
    with pytest.raises(ValueError):
        Code([(2, 0, 0)], 3, ShiftSpec(1, 0, 1))


def test_mixed_weight_union_is_zero_error():
    # weights never mix on either channel, so a union of constant-weight codes stays zero-error
    union = Code([w for W in range(4) for w in construct_shift_cw_code(7, W, 1)], 7, ShiftSpec(1, 0, 1))
    assert len(union) == sum(shift_cw_count(7, W, 1) for W in range(4))
    assert verify_correction(union)
