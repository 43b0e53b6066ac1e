"""Zero-error code constructions, decoders and exact cardinalities.

Correction codes
    * ``shift-lattice``: constant-weight words whose simplex coordinates are all
      multiples of ``K + 1``; optimal for ``SHIFT(1; K)``.  Lifting to ``P`` types
      fills every particle with any of the ``P`` types.
    * ``queue-spaced``: the same lattice built after forcing at least ``K`` empty
      slots after each of the first ``W - 1`` packets.
    * ``dense``: ``{1..P}^n`` for the queue, useful when ``log P / (E[kappa] + 1)``
      beats the spaced codes.
    * ``greedy-revlex``: greedy selection over words in reverse lexicographic order.

Detection codes
    * ``detect-shift``: lattice words with a fixed coordinate sum ``a``.
    * ``detect-queue``: all simplex points with coordinate sum ``a``.

Cardinalities are Python ints, so they stay exact however large they grow.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field, replace
from itertools import product
from math import comb
from typing import Iterable, TextIO

from .channels import (
    ChannelSpec,
    QueueSpec,
    ShiftSpec,
    can_produce,
    embed,
    outputs,
    parse_spec,
)
from .core import (
    Word,
    check_word,
    coords_to_word,
    constant_weight_words,
    decompose,
    format_word,
    parse_word,
    positions,
    simplex_points,
    weight,
)

CORRECTION = "correction"
DETECTION = "detection"

CLEAN = "clean"
ERROR_DETECTED = "error_detected"

# greedy search refuses instances with more candidate words than this
MAX_GREEDY_CANDIDATES = 20000


class InfeasibleError(ValueError):
    pass


class DecodeError(ValueError):
    """The received word cannot have come from any codeword."""


class GuardExceeded(RuntimeError):
    """A brute-force routine was asked to enumerate more than its limit."""


@dataclass(frozen=True)
class Code:
    words: tuple[Word, ...]
    n: int
    channel: ChannelSpec
    kind: str = CORRECTION
    construction: str = "custom"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        words = tuple(sorted(set(tuple(w) for w in self.words)))
        if not words:
            raise ValueError("a code must be nonempty")
        for w in words:
            if len(w) != self.n:
                raise ValueError(f"word {w} has length {len(w)}, expected {self.n}")
            check_word(w, self.channel.P)
        if self.kind not in (CORRECTION, DETECTION):
            raise ValueError(f"unknown code kind {self.kind!r}")
        object.__setattr__(self, "words", words)

    @property
    def P(self) -> int:
        return self.channel.P

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, x):
        return tuple(x) in set(self.words)

    def weights(self) -> set[int]:
        return {weight(w) for w in self.words}


# ---------------------------------------------------------------------------
# counts


def shift_cw_count(n: int, W: int, K: int, P: int = 1) -> int:
    """Size of the optimal weight-``W`` code for ``SHIFT(P; K)``."""
    if not 0 <= W <= n:
        return 0
    return P**W * comb(W + (n - W) // (K + 1), W)


def shift_code_count(n: int, K: int, P: int = 1) -> int:
    """Size of the optimal (all weights) code for ``SHIFT(P; K)``, via
    ``M(n) = P M(n-1) + M(n-K-1)`` seeded with ``M(n) = 1 + P + ... + P^n`` for
    ``n <= K``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    M = []
    geometric = 0
    for m in range(n + 1):
        if m <= K:
            geometric += P**m
            M.append(geometric)
        else:
            M.append(P * M[m - 1] + M[m - K - 1])
    return M[n]


def queue_code_count(n: int, W: int, K: int, P: int = 1) -> int:
    """Size of the spaced lattice queue code, ``P^W binom((n+K)/(K+1), W)``.

    Defined for ``n >= W(K+1) - K`` and ``n = 1 (mod K+1)``; other inputs raise.
    It matches the exhaustive optimum for ``W <= 2`` on every small instance we
    searched, but at ``W = 3`` larger codes exist (for ``QUEUE(1;1)`` and
    ``n = 7`` the optimum is 5, the formula gives 4); see
    :func:`greedy_reverse_lex` for a construction that reaches the optimum there.
    """
    if W == 0:
        return 1
    if n < W * (K + 1) - K:
        raise ValueError(f"n={n} < W(K+1) - K = {W * (K + 1) - K}")
    if (n - 1) % (K + 1):
        raise ValueError(f"n={n} is not 1 mod {K + 1}")
    return P**W * comb((n + K) // (K + 1), W)


# ---------------------------------------------------------------------------
# correction codes


def lattice_points(W: int, bound: int, step: int) -> list[tuple[int, ...]]:
    """Points of the simplex ``0 <= s_1 <= ... <= s_W <= bound`` with every
    coordinate a multiple of ``step``."""
    return [tuple(step * c for c in s) for s in simplex_points(W, bound // step)]


def construct_shift_cw_code(n: int, W: int, K: int) -> Code:
    if not 0 <= W <= n:
        raise InfeasibleError(f"need 0 <= W <= n, got W={W}, n={n}")
    if K < 0:
        raise ValueError("K must be >= 0")
    words = [coords_to_word(c, n) for c in lattice_points(W, n - W, K + 1)]
    return Code(words, n, ShiftSpec(1, 0, K), construction="shift-lattice", meta={"W": W})


def lift_to_pary(indicator_code: Code, P: int) -> Code:
    """All words over ``{0..P}`` whose indicator is a codeword of ``indicator_code``."""
    if indicator_code.P != 1 and any(s > 1 for w in indicator_code for s in w):
        raise ValueError("lift_to_pary needs a binary code")
    words = []
    for w in indicator_code:
        pos = [i for i, s in enumerate(w) if s]
        for fill in product(range(1, P + 1), repeat=len(pos)):
            z = list(w)
            for i, t in zip(pos, fill):
                z[i] = t
            words.append(tuple(z))
    channel = replace(indicator_code.channel, P=P)
    return Code(words, indicator_code.n, channel, indicator_code.kind,
                indicator_code.construction, dict(indicator_code.meta))


def construct_shift_code(n: int, K: int, P: int = 1) -> Code:
    """Optimal code for ``SHIFT(P; K)`` over all weights (union of the constant-weight codes)."""
    words = []
    for W in range(n + 1):
        words.extend(construct_shift_cw_code(n, W, K).words)
    return lift_to_pary(Code(words, n, ShiftSpec(1, 0, K), construction="shift-lattice"), P)


def _queue_length(n: int, K: int) -> int:
    """Smallest length >= n that is 1 mod K+1."""
    return n + (1 - n) % (K + 1)


def construct_queue_code(n: int, W: int, K: int, phi: Iterable[float] = ()) -> Code:
    """Spaced lattice code for ``QUEUE(1; K; phi)``.

    ``n`` is zero-padded up to the next length that is 1 mod ``K + 1``; the padded
    length is the code length and ``meta["padded_from"]`` keeps the request.
    """
    if W < 0 or K < 0:
        raise ValueError("need W >= 0 and K >= 0")
    if W > 0 and n - W - (W - 1) * K < 0:
        raise InfeasibleError(f"n={n} too short for {W} packets spaced by {K}")
    N = _queue_length(n, K)
    free = N - W - max(W - 1, 0) * K
    words = []
    for t in lattice_points(W, free, K + 1):
        words.append(coords_to_word([c + i * K for i, c in enumerate(t)], N))
    meta = {"W": W}
    if N != n:
        meta["padded_from"] = n
    return Code(words, N, QueueSpec(1, K, tuple(phi)), construction="queue-spaced", meta=meta)


def construct_dense_queue_code(n: int, P: int, K: int, phi: Iterable[float] = ()) -> Code:
    """``{1..P}^n``: every slot carries a packet, information is in the types only."""
    words = list(product(range(1, P + 1), repeat=n))
    return Code(words, n, QueueSpec(P, K, tuple(phi)), construction="dense")


def _revlex_key(w: Word):
    return w[::-1]


def greedy_reverse_lex(n: int, W: int, spec: ChannelSpec,
                       max_candidates: int = MAX_GREEDY_CANDIDATES) -> Code:
    """Greedy code: scan weight-``W`` words with the rightmost symbol most
    significant and keep each word whose outputs miss all outputs kept so far."""
    candidates = constant_weight_words(n, W, spec.P)
    if len(candidates) > max_candidates:
        raise GuardExceeded(f"{len(candidates)} candidates > limit {max_candidates}")
    candidates.sort(key=_revlex_key)
    covered: set = set()
    chosen = []
    for x in candidates:
        outs = outputs(x, spec).outputs
        if covered.isdisjoint(outs):
            chosen.append(x)
            covered |= outs
    return Code(chosen, n, spec, construction="greedy-revlex", meta={"W": W})


# ---------------------------------------------------------------------------
# detection codes


def detection_modulus(spec: ShiftSpec) -> int:
    return min(-spec.K1, spec.K2) + 1


def _detection_points(n: int, W: int, spec) -> list[tuple[int, ...]]:
    if isinstance(spec, ShiftSpec):
        if not spec.K1 <= 0 <= spec.K2:
            raise ValueError(f"detection needs K1 <= 0 <= K2, got {spec}")
        return lattice_points(W, n - W, detection_modulus(spec))
    if isinstance(spec, QueueSpec):
        return list(simplex_points(W, n - W))
    raise TypeError(f"no detection codes for {spec}")


def construct_detection_code(n: int, W: int, spec: ChannelSpec, a: int | str = "auto") -> Code:
    """Constant-weight zero-error-detecting code with coordinate sum ``a``.

    ``a="auto"`` picks the sum with the most codewords (smallest on ties).
    """
    if not 0 <= W <= n:
        raise InfeasibleError(f"need 0 <= W <= n, got W={W}, n={n}")
    points = _detection_points(n, W, spec)
    by_sum: dict[int, list] = {}
    for p in points:
        by_sum.setdefault(sum(p), []).append(p)
    if a == "auto":
        a = max(sorted(by_sum), key=lambda s: (len(by_sum[s]), -s))
    elif not 0 <= a <= W * (n - W):
        raise ValueError(f"a={a} outside [0, {W * (n - W)}]")
    if a not in by_sum:
        raise InfeasibleError(f"no codeword has coordinate sum {a}")
    words = [coords_to_word(p, n) for p in by_sum[a]]
    construction = "detect-shift" if isinstance(spec, ShiftSpec) else "detect-queue"
    code = Code(words, n, spec, DETECTION, construction, {"W": W, "a": a})
    if spec.P == 1:
        return code
    binary = Code(words, n, replace(spec, P=1), DETECTION, construction, code.meta)
    return lift_to_pary(binary, spec.P)


def detect(code: Code, z: Word) -> str:
    """Receiver verdict for a detection code: ``"clean"`` or ``"error_detected"``.

    Shift: ``z`` is the full output frame; it is clean iff it equals a codeword
    left in place.  Queue: only the first ``n`` slots are read, and the packets
    counted there must be all of them.
    """
    z = tuple(z)
    spec = code.channel
    if isinstance(spec, QueueSpec):
        head = z[: code.n]
        if weight(head) != weight(z):
            return ERROR_DETECTED
        return CLEAN if head in code else ERROR_DETECTED
    framed = {embed(w, spec) for w in code}
    return CLEAN if z in framed else ERROR_DETECTED


# ---------------------------------------------------------------------------
# decoding


def decode_shift_point(z: Iterable[int], K: int) -> tuple[int, ...]:
    """Round each simplex coordinate of an output down to a multiple of ``K + 1``.

    >>> decode_shift_point((3, 5), 1)
    (2, 4)
    """
    return tuple(c // (K + 1) * (K + 1) for c in z)


def decode_queue_point(z: Iterable[int], n: int, W: int, K: int) -> tuple[int, ...]:
    """Simplex-coordinate decoder for ``construct_queue_code(n, W, K)``.

    The ``(i - 1) K`` spacing is removed, the reduced point is decoded as a shift
    output, and the spacing is put back.
    """
    z = tuple(z)
    if len(z) != W:
        raise DecodeError(f"expected {W} coordinates, got {len(z)}")
    reduced = [c - i * K for i, c in enumerate(z)]
    if any(c < 0 for c in reduced):
        raise DecodeError(f"{z} lies left of every codeword of the spaced code")
    x = tuple(c + i * K for i, c in enumerate(decode_shift_point(reduced, K)))
    if x and x[-1] > _queue_length(n, K) - W:
        raise DecodeError(f"{z} decodes outside the input simplex")
    if any(a > b for a, b in zip(x, x[1:])):
        raise DecodeError(f"{z} decodes to an unordered point {x}")
    return x


def decode_shift(z: Word, K: int, n: int, spacing: int = 0) -> Word:
    """Decode an output word of the lattice codes back to a word of length ``n``.

    ``z`` is read in the normalized frame (index 1 is the first cell a codeword can
    occupy).  With ``spacing=K`` this is the decoder of the spaced queue code.
    """
    z = tuple(z)
    d = decompose(z)
    W = len(d.types)
    coords = [p - (i + 1) for i, p in enumerate(positions(z))]
    if spacing:
        x = decode_queue_point(coords, n, W, spacing)
    else:
        x = decode_shift_point(coords, K)
    if x and x[-1] > n - W:
        raise DecodeError(f"{z} decodes outside the input simplex")
    return coords_to_word(x, n, d.types)


def decode(code: Code, z: Word) -> Word:
    """Recover the transmitted codeword of a zero-error correcting code."""
    z = tuple(z)
    spec = code.channel
    if code.construction == "shift-lattice" and isinstance(spec, ShiftSpec):
        x = decode_shift(z, spec.K, code.n)
    elif code.construction == "queue-spaced" and isinstance(spec, QueueSpec):
        x = decode_shift(z, spec.K, code.n, spacing=spec.K)
    elif code.construction == "dense":
        # FIFO keeps the order, every slot held a packet
        x = decompose(z).types
    else:
        hits = [w for w in code if can_produce(w, z, spec)]
        if len(hits) != 1:
            raise DecodeError(f"{len(hits)} codewords can produce {z}")
        return hits[0]
    if x not in code:
        raise DecodeError(f"{z} decodes to {x}, not a codeword")
    return x


# ---------------------------------------------------------------------------
# code files

_HEADER_RE = re.compile(
    r"^n=(?P<n>\d+) P=(?P<P>\d+) channel=(?P<channel>\S+) kind=(?P<kind>\w+) construction=(?P<construction>\S+)$"
)


def dump_code(code: Code, fp: TextIO) -> None:
    fp.write(f"n={code.n} P={code.P} channel={code.channel} kind={code.kind} "
             f"construction={code.construction}\n")
    for w in code:
        fp.write(format_word(w) + "\n")


def dumps_code(code: Code) -> str:
    buf = io.StringIO()
    dump_code(code, buf)
    return buf.getvalue()


def load_code(fp: TextIO) -> Code:
    lines = [ln.strip() for ln in fp if ln.strip()]
    if not lines:
        raise ValueError("empty code file")
    m = _HEADER_RE.match(lines[0])
    if not m:
        raise ValueError(f"bad header line {lines[0]!r}")
    channel = parse_spec(m["channel"])
    if channel.P != int(m["P"]):
        raise ValueError("header P disagrees with the channel")
    words = [parse_word(ln) for ln in lines[1:]]
    return Code(words, int(m["n"]), channel, m["kind"], m["construction"])


def loads_code(text: str) -> Code:
    return load_code(io.StringIO(text))
