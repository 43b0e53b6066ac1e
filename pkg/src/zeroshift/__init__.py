"""Zero-error codes and capacities for P-ary shift channels and FIFO queues."""

from .capacity import (
    Capacity,
    RootProblem,
    appendix_sweep,
    char_root,
    ct_queue_capacity,
    ct_shift_capacity,
    cw_rate_queue,
    cw_rate_shift,
    detection_capacity,
    finite_length_table,
    optimal_weight,
    queue_capacity,
    shift_capacity,
)
from .channels import (
    CTQueueSpec,
    CTShiftSpec,
    OutputSet,
    QueueSpec,
    ShiftSpec,
    can_produce,
    confusable,
    queue_outputs,
    sample_queue,
    sample_shift,
    shift_outputs,
)
from .codes import (
    Code,
    construct_dense_queue_code,
    construct_detection_code,
    construct_queue_code,
    construct_shift_code,
    construct_shift_cw_code,
    decode,
    decode_queue_point,
    decode_shift,
    decode_shift_point,
    detect,
    greedy_reverse_lex,
    lift_to_pary,
    queue_code_count,
    shift_code_count,
    shift_cw_count,
)
from .core import (
    Decomposition,
    SimplexPoint,
    compose,
    decompose,
    format_word,
    from_simplex,
    parse_word,
    to_simplex,
)
from .oracle import (
    estimate_Lav,
    max_code_size,
    perfect_cover_check,
    verify_correction,
    verify_detection,
)

__version__ = "0.1.0"
