"""Brute-force ground truth for codes and formulas.

Everything here works from explicitly enumerated output sets, never from the
closed-form confusability rule in :mod:`zeroshift.channels`, so the two can be
checked against each other.  Enumeration is bounded by :data:`LIMITS`; going
over a limit raises :class:`GuardExceeded` instead of truncating.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .channels import (
    ChannelSpec,
    QueueSpec,
    ShiftSpec,
    embed,
    outputs,
    sample_queue_lengths,
    shift_outputs,
)
from .codes import Code, GuardExceeded
from .core import Word, constant_weight_words, decompose, format_word, weight


@dataclass
class Limits:
    max_vertices: int = 5000
    max_outputs: int = 2_000_000


LIMITS = Limits()


@dataclass
class Verdict:
    ok: bool
    instance: str
    witness: tuple | None = None
    elapsed: float = 0.0

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        witness = None
        if self.witness is not None:
            witness = [format_word(w) if all(0 <= s <= 9 for s in w) else list(w)
                       for w in self.witness]
        return {
            "instance": self.instance,
            "verdict": "verified" if self.ok else "refuted",
            "witness": witness,
            "elapsed": round(self.elapsed, 6),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _max_outputs_per_word(code: Code, spec: ChannelSpec) -> int:
    if not isinstance(spec, (ShiftSpec, QueueSpec)):
        raise TypeError(f"cannot enumerate outputs of {spec}")
    return (spec.K + 1) ** max(code.weights())


def _guard_outputs(count: int, limits: Limits) -> None:
    if count > limits.max_outputs:
        raise GuardExceeded(f"would enumerate up to {count} outputs > limit {limits.max_outputs}")


def _instance(code: Code, spec: ChannelSpec, what: str) -> str:
    return f"{what} n={code.n} |C|={len(code)} construction={code.construction} channel={spec}"


def verify_correction(code: Code, spec: ChannelSpec | None = None, limits: Limits = LIMITS) -> Verdict:
    """Zero-error correction: no two codewords share an output."""
    spec = code.channel if spec is None else spec
    t0 = time.perf_counter()
    _guard_outputs(len(code) * _max_outputs_per_word(code, spec), limits)
    owner: dict[Word, Word] = {}
    for x in code:
        for z in outputs(x, spec).outputs:
            y = owner.setdefault(z, x)
            if y != x:
                return Verdict(False, _instance(code, spec, "correction"), (y, x, z),
                               time.perf_counter() - t0)
    return Verdict(True, _instance(code, spec, "correction"), None, time.perf_counter() - t0)


def verify_detection(code: Code, spec: ChannelSpec | None = None, limits: Limits = LIMITS) -> Verdict:
    """Zero-error detection: no codeword can produce a different codeword."""
    spec = code.channel if spec is None else spec
    if isinstance(spec, ShiftSpec) and not spec.K1 <= 0 <= spec.K2:
        raise ValueError(f"detection needs K1 <= 0 <= K2, got {spec}")
    t0 = time.perf_counter()
    _guard_outputs(len(code) * _max_outputs_per_word(code, spec), limits)
    framed = {}
    for y in code:
        e = embed(y, spec)
        if e is not None:
            framed[e] = y
    for x in code:
        for z in outputs(x, spec).outputs:
            y = framed.get(z)
            if y is not None and y != x:
                return Verdict(False, _instance(code, spec, "detection"), (x, y),
                               time.perf_counter() - t0)
    return Verdict(True, _instance(code, spec, "detection"), None, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# confusability graph and exact maximum independent set


@dataclass
class ConfusabilityGraph:
    vertices: list[Word]
    adjacency: list[int] = field(repr=False)  # bitmask of neighbours

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i] >> j & 1)

    def edges(self):
        for i, mask in enumerate(self.adjacency):
            for j in range(i + 1, len(self.vertices)):
                if mask >> j & 1:
                    yield i, j


def confusability_graph(n: int, W: int, spec: ChannelSpec, limits: Limits = LIMITS) -> ConfusabilityGraph:
    vertices = constant_weight_words(n, W, spec.P)
    if len(vertices) > limits.max_vertices:
        raise GuardExceeded(f"{len(vertices)} vertices > limit {limits.max_vertices}")
    _guard_outputs(len(vertices) * (spec.K + 1) ** W, limits)
    index = {v: i for i, v in enumerate(vertices)}
    producers: dict[Word, int] = {}
    for v in vertices:
        bit = 1 << index[v]
        for z in outputs(v, spec).outputs:
            producers[z] = producers.get(z, 0) | bit
    adj = [0] * len(vertices)
    for mask in producers.values():
        if mask & (mask - 1):
            m = mask
            while m:
                low = m & -m
                adj[low.bit_length() - 1] |= mask
                m ^= low
    for i in range(len(adj)):
        adj[i] &= ~(1 << i)
    return ConfusabilityGraph(vertices, adj)


def maximum_independent_set(adjacency: list[int], order: list[int] | None = None) -> list[int]:
    """Exact maximum independent set by branch and bound.

    Searches for a maximum clique of the complement graph; the bound at each node
    is the number of colours in a greedy colouring of the candidates, where a
    colour class is a set of pairwise-confusable vertices (at most one of them can
    be taken).
    """
    N = len(adjacency)
    everyone = (1 << N) - 1
    comp = [everyone & ~adjacency[v] & ~(1 << v) for v in range(N)]
    order = list(range(N)) if order is None else list(order)
    best: list[int] = []

    def colour_sort(cand):
        # returns vertices and their colour bounds, in increasing colour
        verts, bounds = [], []
        uncoloured = [v for v in order if cand >> v & 1]
        colour = 0
        while uncoloured:
            colour += 1
            cls_mask = 0
            rest = []
            for v in uncoloured:
                # same colour = independent in the complement = confusable in the original
                if comp[v] & cls_mask:
                    rest.append(v)
                else:
                    cls_mask |= 1 << v
                    verts.append(v)
                    bounds.append(colour)
            uncoloured = rest
        return verts, bounds

    def expand(chosen, cand):
        nonlocal best
        verts, bounds = colour_sort(cand)
        for v, b in zip(reversed(verts), reversed(bounds)):
            if len(chosen) + b <= len(best):
                return
            new = cand & comp[v]
            chosen.append(v)
            if new:
                expand(chosen, new)
            elif len(chosen) > len(best):
                best = list(chosen)
            chosen.pop()
            cand &= ~(1 << v)

    if N:
        expand([], everyone)
    return sorted(best)


def max_code_size(n: int, W: int, spec: ChannelSpec, limits: Limits = LIMITS,
                  order: list[int] | None = None) -> int:
    """Largest zero-error code of length ``n`` and weight ``W``, by exhaustive search."""
    g = confusability_graph(n, W, spec, limits)
    return len(maximum_independent_set(g.adjacency, order))


def max_code(n: int, W: int, spec: ChannelSpec, limits: Limits = LIMITS) -> Code:
    g = confusability_graph(n, W, spec, limits)
    words = [g.vertices[i] for i in maximum_independent_set(g.adjacency)]
    return Code(words, n, spec, construction="exhaustive")


# ---------------------------------------------------------------------------
# covering


def perfect_cover_check(code: Code, spec: ShiftSpec | None = None, limits: Limits = LIMITS) -> Verdict:
    """Do the output sets of the codewords cover every input word of the same weight?

    Works on indicators in the ``SHIFT(1; 0, K2 - K1)`` frame.
    """
    spec = code.channel if spec is None else spec
    if not isinstance(spec, ShiftSpec):
        raise TypeError("perfect_cover_check is for shift channels")
    ws = code.weights()
    if len(ws) != 1:
        raise ValueError("perfect_cover_check needs a constant-weight code")
    (W,) = ws
    t0 = time.perf_counter()
    binary = ShiftSpec(1, 0, spec.K)
    indicators = {decompose(x).indicator for x in code}
    _guard_outputs(len(indicators) * (spec.K + 1) ** W, limits)
    covered = set()
    for x in indicators:
        covered |= shift_outputs(x, binary).outputs
    instance = f"cover n={code.n} W={W} |C|={len(code)} channel={spec}"
    for y in constant_weight_words(code.n, W, 1):
        if embed(y, binary) not in covered:
            return Verdict(False, instance, (y,), time.perf_counter() - t0)
    return Verdict(True, instance, None, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# average output length


class LavEstimate(NamedTuple):
    mean: float
    stderr: float


def estimate_Lav(code: Code, spec: ChannelSpec | None, trials: int, rng: np.random.Generator) -> LavEstimate:
    """Monte Carlo mean output length over uniformly drawn codewords."""
    spec = code.channel if spec is None else spec
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if isinstance(spec, ShiftSpec):
        # every shift output spans the whole frame
        return LavEstimate(float(code.n + spec.K), 0.0)
    if not isinstance(spec, QueueSpec):
        raise TypeError(f"cannot simulate {spec}")
    picks = rng.integers(len(code), size=trials)
    counts = np.bincount(picks, minlength=len(code))
    lengths = []
    for idx in np.flatnonzero(counts):
        x = code.words[idx]
        if weight(x) == 0:
            lengths.append(np.full(counts[idx], len(x), dtype=np.int64))
        else:
            lengths.append(sample_queue_lengths(x, spec, rng, int(counts[idx])))
    L = np.concatenate(lengths).astype(float)
    stderr = float(L.std(ddof=1) / np.sqrt(trials)) if trials > 1 else float("nan")
    return LavEstimate(float(L.mean()), stderr)
