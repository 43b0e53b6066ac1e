"""Shift and FIFO-queue channel models.

Shift channel ``SHIFT(P; K1, K2)``: every particle moves between ``K1`` and
``K2`` cells to the right, particles never swap or collide.  Outputs are words
over the cells ``1 + K1, ..., n + K2`` (length ``n + K2 - K1``); index ``t`` of an
output word is cell ``t + 1 + K1``.

Queue channel ``QUEUE(P; K; phi)``: a discrete-time single-server FIFO queue.
Packet ``l`` sent in slot ``i_l`` leaves in slot
``j_l = max(i_l, j_{l-1} + 1) + kappa_l`` with ``kappa_l ~ phi`` on ``{0..K}``.
The output has length ``max(n, j_m)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .core import Word, decompose, positions, to_simplex


@dataclass(frozen=True)
class ShiftSpec:
    P: int
    K1: int
    K2: int

    def __post_init__(self):
        if self.P < 1:
            raise ValueError("P must be >= 1")
        if self.K1 > self.K2:
            raise ValueError("need K1 <= K2")
        if self.K2 < 0:
            raise ValueError("need K2 >= 0")

    @property
    def K(self) -> int:
        """Width of the shift window; codes only depend on this."""
        return self.K2 - self.K1

    def normalized(self) -> "ShiftSpec":
        return ShiftSpec(self.P, 0, self.K)

    def __str__(self):
        return f"SHIFT({self.P};{self.K1},{self.K2})"


@dataclass(frozen=True)
class QueueSpec:
    P: int
    K: int
    phi: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.P < 1:
            raise ValueError("P must be >= 1")
        if self.K < 0:
            raise ValueError("K must be >= 0")
        phi = self.phi or tuple([1.0 / (self.K + 1)] * (self.K + 1))
        phi = tuple(float(p) for p in phi)
        if len(phi) != self.K + 1:
            raise ValueError(f"phi must have K + 1 = {self.K + 1} entries, got {len(phi)}")
        if any(p <= 0 for p in phi):
            raise ValueError("phi must be strictly positive on 0..K")
        if abs(sum(phi) - 1.0) > 1e-9:
            raise ValueError(f"phi sums to {sum(phi)}, not 1")
        object.__setattr__(self, "phi", phi)

    @property
    def Ekappa(self) -> float:
        return sum(k * p for k, p in enumerate(self.phi))

    def __str__(self):
        return f"QUEUE({self.P};{self.K};{','.join(repr(p) for p in self.phi)})"


@dataclass(frozen=True)
class CTShiftSpec:
    P: int
    tau: float
    Tres: float

    def __post_init__(self):
        if self.tau <= 0 or self.Tres < 0:
            raise ValueError("need tau > 0 and Tres >= 0")

    def __str__(self):
        return f"CTSHIFT({self.P};{self.tau!r};{self.Tres!r})"


@dataclass(frozen=True)
class CTQueueSpec:
    P: int
    tau: float
    Tproc: float
    Ekappa: float

    def __post_init__(self):
        if self.tau <= 0 or self.Tproc < 0:
            raise ValueError("need tau > 0 and Tproc >= 0")
        if not 0 <= self.Ekappa <= self.Tproc:
            raise ValueError("need 0 <= Ekappa <= Tproc")

    def __str__(self):
        return f"CTQUEUE({self.P};{self.tau!r};{self.Tproc!r};{self.Ekappa!r})"


ChannelSpec = Union[ShiftSpec, QueueSpec, CTShiftSpec, CTQueueSpec]

_SPEC_RE = re.compile(r"^(SHIFT|QUEUE|CTSHIFT|CTQUEUE)\((.*)\)$")


def parse_phi(text: str) -> tuple[float, ...]:
    """Parse ``"0.5,0.25,0.25"`` or ``"1/3,1/3,1/3"``."""
    try:
        return tuple(float(Fraction(tok.strip())) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ValueError(f"bad phi {text!r}: {exc}") from None


def parse_spec(text: str) -> ChannelSpec:
    m = _SPEC_RE.match(text.strip())
    if not m:
        raise ValueError(f"unrecognised channel {text!r}")
    kind, body = m.groups()
    parts = body.split(";")
    try:
        if kind == "SHIFT":
            P, window = parts
            K1, K2 = window.split(",")
            return ShiftSpec(int(P), int(K1), int(K2))
        if kind == "QUEUE":
            P, K, phi = parts
            return QueueSpec(int(P), int(K), parse_phi(phi))
        if kind == "CTSHIFT":
            P, tau, Tres = parts
            return CTShiftSpec(int(P), float(tau), float(Tres))
        P, tau, Tproc, Ek = parts
        return CTQueueSpec(int(P), float(tau), float(Tproc), float(Ek))
    except ValueError as exc:
        raise ValueError(f"bad channel {text!r}: {exc}") from None


@dataclass(frozen=True)
class OutputSet:
    outputs: frozenset
    offset: int = 0

    def __len__(self):
        return len(self.outputs)

    def __contains__(self, z):
        return tuple(z) in self.outputs

    def __iter__(self):
        return iter(sorted(self.outputs))

    def normalized(self) -> "OutputSet":
        """Move the reference point ``offset`` cells, giving the ``SHIFT(P; 0, K2 - K1)`` frame.

        Output words are stored relative to their first cell, so only the offset changes.
        """
        return OutputSet(self.outputs, 0)


def _check_shift(spec):
    if not isinstance(spec, ShiftSpec):
        raise TypeError(f"expected a ShiftSpec, got {type(spec).__name__}")


def _check_queue(spec):
    if not isinstance(spec, QueueSpec):
        raise TypeError(f"expected a QueueSpec, got {type(spec).__name__}")


def shift_outputs(x: Word, spec: ShiftSpec) -> OutputSet:
    _check_shift(spec)
    x = tuple(x)
    n, K1, K2 = len(x), spec.K1, spec.K2
    length = n + K2 - K1
    pos = positions(x)
    types = [x[p - 1] for p in pos]
    found = set()
    cells = [0] * len(pos)

    def rec(l, prev):
        if l == len(pos):
            z = [0] * length
            for c, t in zip(cells, types):
                z[c - 1 - K1] = t
            found.add(tuple(z))
            return
        for j in range(max(pos[l] + K1, prev + 1), pos[l] + K2 + 1):
            cells[l] = j
            rec(l + 1, j)

    rec(0, K1)  # first usable cell is 1 + K1
    return OutputSet(frozenset(found), K1)


def queue_outputs(x: Word, spec: QueueSpec) -> OutputSet:
    _check_queue(spec)
    x = tuple(x)
    n, K = len(x), spec.K
    pos = positions(x)
    types = [x[p - 1] for p in pos]
    found = set()
    slots = [0] * len(pos)

    def rec(l, prev):
        if l == len(pos):
            z = [0] * max(n, prev)
            for s, t in zip(slots, types):
                z[s - 1] = t
            found.add(tuple(z))
            return
        start = max(pos[l], prev + 1)
        for kappa in range(K + 1):
            slots[l] = start + kappa
            rec(l + 1, start + kappa)

    rec(0, 0)
    return OutputSet(frozenset(found), 0)


def outputs(x: Word, spec: ChannelSpec) -> OutputSet:
    if isinstance(spec, ShiftSpec):
        return shift_outputs(x, spec)
    if isinstance(spec, QueueSpec):
        return queue_outputs(x, spec)
    raise TypeError(f"no finite output set for {spec}")


def embed(y: Word, spec: ChannelSpec) -> Word | None:
    """Place an input word in the output frame, as the output ``y`` would look if
    nothing moved.  ``None`` when some particle of ``y`` falls outside the frame."""
    y = tuple(y)
    if isinstance(spec, QueueSpec):
        return y
    _check_shift(spec)
    n, K1, K2 = len(y), spec.K1, spec.K2
    z = [0] * (n + K2 - K1)
    for cell, s in enumerate(y, start=1):
        if s:
            t = cell - 1 - K1
            if not 0 <= t < len(z):
                return None
            z[t] = s
    return tuple(z)


def can_produce(x: Word, z: Word, spec: ChannelSpec) -> bool:
    """Direct test of ``x ~> z`` without enumerating the output set."""
    x, z = tuple(x), tuple(z)
    dx, dz = decompose(x), decompose(z)
    if dx.types != dz.types:
        return False
    px, pz = positions(x), positions(z)
    if isinstance(spec, ShiftSpec):
        if len(z) != len(x) + spec.K:
            return False
        # output index t (1-based) is cell t + K1
        return all(spec.K1 <= (j + spec.K1) - i <= spec.K2 for i, j in zip(px, pz))
    _check_queue(spec)
    n = len(x)
    if len(z) < n or (len(z) > n and z[-1] == 0):
        return False
    prev = 0
    for i, j in zip(px, pz):
        if not 0 <= j - max(i, prev + 1) <= spec.K:
            return False
        prev = j
    return True


def sample_shift(x: Word, spec: ShiftSpec, rng: np.random.Generator) -> Word:
    """Draw one output of the shift channel.

    Only positivity of each output is fixed by the model; this sampler moves the
    particles left to right, drawing each new cell uniformly from the cells still
    allowed given the previous particle.
    """
    _check_shift(spec)
    x = tuple(x)
    K1, K2 = spec.K1, spec.K2
    z = [0] * (len(x) + K2 - K1)
    prev = K1
    for i in positions(x):
        lo = max(i + K1, prev + 1)
        j = int(rng.integers(lo, i + K2 + 1))
        z[j - 1 - K1] = x[i - 1]
        prev = j
    return tuple(z)


def _draw_kappa(spec: QueueSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    cdf = np.cumsum(spec.phi)
    return np.minimum(np.searchsorted(cdf, rng.random(size), side="right"), spec.K)


def sample_queue(x: Word, spec: QueueSpec, rng: np.random.Generator) -> Word:
    _check_queue(spec)
    x = tuple(x)
    pos = positions(x)
    kappas = _draw_kappa(spec, rng, len(pos))
    slots = []
    prev = 0
    for i, kappa in zip(pos, kappas.tolist()):
        prev = max(i, prev + 1) + kappa
        slots.append(prev)
    z = [0] * max(len(x), prev)
    for i, j in zip(pos, slots):
        z[j - 1] = x[i - 1]
    return tuple(z)


def sample_queue_lengths(x: Word, spec: QueueSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    """Output lengths of ``size`` independent transmissions of ``x``."""
    _check_queue(spec)
    prev = np.zeros(size, dtype=np.int64)
    for i in positions(x):
        kappa = _draw_kappa(spec, rng, size)
        prev = np.maximum(i, prev + 1) + kappa
    return np.maximum(len(x), prev)


def sample(x: Word, spec: ChannelSpec, rng: np.random.Generator) -> Word:
    if isinstance(spec, ShiftSpec):
        return sample_shift(x, spec, rng)
    if isinstance(spec, QueueSpec):
        return sample_queue(x, spec, rng)
    raise TypeError(f"cannot sample {spec}")


def confusable(x: Word, y: Word, spec: ChannelSpec) -> bool:
    """Whether ``x`` and ``y`` can produce a common output."""
    x, y = tuple(x), tuple(y)
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if isinstance(spec, ShiftSpec):
        if decompose(x).types != decompose(y).types:
            return False
        sx, sy = to_simplex(x).coords, to_simplex(y).coords
        return all(abs(a - b) <= spec.K for a, b in zip(sx, sy))
    if isinstance(spec, QueueSpec):
        if decompose(x).types != decompose(y).types:
            return False
        return not queue_outputs(x, spec).outputs.isdisjoint(queue_outputs(y, spec).outputs)
    raise TypeError(f"confusability not defined for {spec}")
