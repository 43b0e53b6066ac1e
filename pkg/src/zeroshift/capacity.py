"""Zero-error capacities of the shift and queue channels, in bits.

Everything for the shift channel goes through one root problem: the unique
positive root ``r`` of ``x^m - Peff x^(m-1) - 1`` with ``m = K + 1`` (or a real
exponent for continuous time) and ``Peff = P`` (or ``2^C0`` with extra noise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .channels import QueueSpec, ShiftSpec
from .codes import shift_code_count, shift_cw_count


class Capacity(NamedTuple):
    value: float
    regime: str


@dataclass(frozen=True)
class RootProblem:
    Peff: float
    m: float

    def __post_init__(self):
        if not self.Peff > 0:
            raise ValueError(f"Peff must be positive, got {self.Peff}")
        if not self.m >= 1:
            raise ValueError(f"m must be >= 1, got {self.m}")


def _require_int(name, value, low):
    if isinstance(value, bool) or int(value) != value or value < low:
        raise ValueError(f"{name} must be an integer >= {low}, got {value!r}")
    return int(value)


def char_root(p: RootProblem | float, m: float | None = None) -> float:
    """Unique positive root of ``x^m - Peff x^(m-1) - 1``.

    Accepts a :class:`RootProblem` or ``char_root(Peff, m)``.  The root lies in
    ``(Peff, Peff + 1]``, where ``x^(m-1) (x - Peff) - 1`` is strictly increasing;
    bisection on that bracket is finished by a few Newton steps.
    """
    if not isinstance(p, RootProblem):
        p = RootProblem(float(p), float(m))
    P, m = p.Peff, p.m

    def f(x):
        return x ** (m - 1) * (x - P) - 1.0

    def df(x):
        return x ** (m - 2) * (m * x - (m - 1) * P)

    lo, hi = P, P + 1.0
    if f(hi) == 0.0:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-9 * hi:
            break
    x = 0.5 * (lo + hi)
    for _ in range(5):
        step = f(x) / df(x)
        x_new = x - step
        if not lo <= x_new <= hi:
            break
        x = x_new
        if abs(step) <= 1e-16 * x:
            break
    return x


def shift_capacity(P: int, K: int, C0: float | None = None) -> float:
    """``log2 r`` for ``SHIFT(P; K)``; with ``C0`` the particle alphabet is replaced
    by a noisy one of zero-error capacity ``C0`` bits."""
    P = _require_int("P", P, 1)
    K = _require_int("K", K, 0)
    Peff = float(P) if C0 is None else 2.0 ** _check_C0(C0)
    return math.log2(char_root(Peff, K + 1))


def _check_C0(C0):
    if C0 < 0:
        raise ValueError("C0 must be >= 0")
    return float(C0)


def queue_capacity(P: int, K: int, Ekappa: float, C0: float | None = None) -> Capacity:
    """Best of spacing packets by ``K`` empty slots (``sparse``) and sending a packet
    in every slot (``dense``)."""
    P = _require_int("P", P, 1)
    K = _require_int("K", K, 0)
    if not 0 <= Ekappa <= K:
        raise ValueError(f"Ekappa={Ekappa} outside [0, {K}]")
    if C0 is None:
        sparse = math.log2(P + 1) / (K + 1)
        dense = math.log2(P) / (Ekappa + 1)
    else:
        C0 = _check_C0(C0)
        sparse = math.log2(2.0**C0 + 1) / (K + 1)
        dense = C0 / (Ekappa + 1)
    return Capacity(sparse, "sparse") if sparse >= dense else Capacity(dense, "dense")


def binary_entropy(p):
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -p * np.log2(p) - (1 - p) * np.log2(1 - p)
    h = np.where((p <= 0) | (p >= 1), 0.0, h)
    return h if h.ndim else float(h)


def _check_w(w):
    arr = np.asarray(w, dtype=float)
    if np.any((arr < 0) | (arr > 1)):
        raise ValueError("w must lie in [0, 1]")
    return arr


def cw_rate_shift(P: float, K: float, w):
    """Asymptotic rate of the optimal codes with a fraction ``w`` of occupied cells.

    Vectorized in ``w``; ``P`` and ``K`` may be real.
    """
    w = _check_w(w)
    occ = (w * K + 1) / (K + 1)
    rate = occ * binary_entropy(w * (K + 1) / (w * K + 1)) + w * np.log2(P)
    return rate if np.ndim(rate) else float(rate)


def cw_rate_queue(P: int, K: int, Ekappa: float, w):
    """Constant-weight queue rate: spaced lattice below ``w = 1/(K+1)``, the
    single back-to-back word (times ``P^W`` types) from there on."""
    w = _check_w(w)
    logP = math.log2(P)
    sparse = binary_entropy(np.minimum(w * (K + 1), 1.0)) / (K + 1) + w * logP
    dense = w * logP / np.maximum(1.0, w * (Ekappa + 1))
    rate = np.where(w < 1.0 / (K + 1), sparse, dense)
    return rate if np.ndim(rate) else float(rate)


def optimal_weight(P: float, K: float) -> float:
    """Maximizer of :func:`cw_rate_shift` over ``w``, ``P / ((K+1)(r-P) + P)``."""
    r = char_root(P, K + 1)
    return P / ((K + 1) * (r - P) + P)


def ct_shift_capacity(P: int, tau: float, Tres: float) -> float:
    """Bits per second; ``1/tau log2 v`` with exponent ``max(Tres/tau, 1)``."""
    P = _require_int("P", P, 1)
    if tau <= 0 or Tres < 0:
        raise ValueError("need tau > 0 and Tres >= 0")
    m = max(Tres / tau, 1.0)
    return math.log2(char_root(float(P), m)) / tau


def ct_queue_capacity(P: int, tau: float, Tproc: float, Ekappa: float) -> Capacity:
    P = _require_int("P", P, 1)
    if tau <= 0 or Tproc < 0:
        raise ValueError("need tau > 0 and Tproc >= 0")
    if not 0 <= Ekappa <= Tproc:
        raise ValueError(f"Ekappa={Ekappa} outside [0, {Tproc}]")
    sparse = math.log2(P + 1) / max(Tproc, tau)
    dense = math.log2(P) / max(Ekappa, tau)
    return Capacity(sparse, "sparse") if sparse >= dense else Capacity(dense, "dense")


def detection_capacity(spec: ShiftSpec | QueueSpec) -> float:
    """Zero-error-detection capacity in bits per slot."""
    if isinstance(spec, ShiftSpec):
        if not spec.K1 <= 0 <= spec.K2:
            raise ValueError(f"detection needs K1 <= 0 <= K2, got {spec}")
        return shift_capacity(spec.P, min(-spec.K1, spec.K2))
    if isinstance(spec, QueueSpec):
        return math.log2(spec.P + 1)
    raise TypeError(f"no detection capacity for {spec}")


# ---------------------------------------------------------------------------
# finite length


@dataclass
class FiniteLengthRow:
    n: int
    log2_M: float
    residual: float
    W: int
    log2_M_cw: float
    cw_residual: float


def finite_length_table(P: int, K: int, n_max: int, n_min: int = 0) -> list[FiniteLengthRow]:
    """Exact ``log2`` code sizes against ``n`` times the capacity.

    ``residual = log2 M(n) - n R*`` settles to a constant; ``cw_residual`` uses the
    weight ``round(w* n)`` and adds back ``1/2 log2 n``, so it stays bounded.
    """
    R = shift_capacity(P, K)
    w_opt = optimal_weight(P, K)
    rows = []
    M = [shift_code_count(m, K, P) for m in range(min(n_max, K) + 1)]
    for n in range(n_min, n_max + 1):
        while len(M) <= n:
            m = len(M)
            M.append(P * M[m - 1] + M[m - K - 1])
        W = min(n, max(0, round(w_opt * n)))
        Mcw = shift_cw_count(n, W, K, P)
        logM, logMcw = _log2_int(M[n]), _log2_int(Mcw)
        half_log_n = 0.5 * math.log2(n) if n > 0 else 0.0
        rows.append(FiniteLengthRow(n, logM, logM - n * R, W, logMcw, logMcw - n * R + half_log_n))
    return rows


def _log2_int(v: int) -> float:
    # float(v) overflows past ~2^1024
    shift = max(v.bit_length() - 64, 0)
    return math.log2(v >> shift) + shift


# ---------------------------------------------------------------------------
# property sweeps over real parameters


def dr_dK(P: float, K: float) -> float:
    """Closed-form derivative of the root in ``K``."""
    r = char_root(P, K + 1)
    return -(r - P) * r * math.log(r) / ((K + 1) * (r - P) + P)


@dataclass
class SweepReport:
    P: np.ndarray
    K: np.ndarray
    r: np.ndarray
    log_r: np.ndarray
    w_opt: np.ndarray
    deriv_error: float
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _signs(name, values, violations, tol):
    """Record entries of a difference array that are negative beyond ``tol``."""
    bad = np.argwhere(values < -tol)
    for idx in bad[:5]:
        violations.append(f"{name}: {values[tuple(idx)]:.3e} at grid index {tuple(int(i) for i in idx)}")
    if len(bad) > 5:
        violations.append(f"{name}: {len(bad) - 5} more")


def appendix_sweep(P_range: Sequence[float], K_range: Sequence[float],
                   w_grid: Sequence[float] | None = None, fd_step: float = 1e-4,
                   deriv_tol: float = 1e-6, tol: float = 1e-12) -> SweepReport:
    """Evaluate ``r``, ``log r``, ``w*`` and ``R(w)`` on a real ``P x K`` grid and
    check the shape claims: monotonicity and convexity/concavity signs of the
    finite differences, the closed-form ``dr/dK`` against a central difference,
    and the limits of ``w*``.  ``tol`` absorbs floating-point noise in differences.
    """
    Ps = np.asarray(P_range, dtype=float)
    Ks = np.asarray(K_range, dtype=float)
    if np.any(Ps < 1) or np.any(Ks < 0):
        raise ValueError("need P >= 1 and K >= 0")
    r = np.array([[char_root(P, K + 1) for K in Ks] for P in Ps])
    log_r = np.log2(r)
    w_opt = Ps[:, None] / ((Ks[None, :] + 1) * (r - Ps[:, None]) + Ps[:, None])
    v: list[str] = []

    # along K (axis 1)
    _signs("r decreasing in K", -np.diff(r, axis=1), v, tol)
    _signs("r convex in K", np.diff(r, 2, axis=1), v, tol)
    _signs("log r decreasing in K", -np.diff(log_r, axis=1), v, tol)
    _signs("log r convex in K", np.diff(log_r, 2, axis=1), v, tol)
    # along P (axis 0)
    _signs("r increasing in P", np.diff(r, axis=0), v, tol)
    _signs("r convex in P", np.diff(r, 2, axis=0), v, tol)
    _signs("log r increasing in P", np.diff(log_r, axis=0), v, tol)
    _signs("w* increasing in P", np.diff(w_opt, axis=0), v, tol)
    big = Ps >= 2
    if big.sum() >= 3:
        _signs("log r concave in P>=2", -np.diff(log_r[big], 2, axis=0), v, tol)
        _signs("w* concave in P>=2", -np.diff(w_opt[big], 2, axis=0), v, tol)
    if big.any():
        _signs("w* increasing in K for P>=2", np.diff(w_opt[big], axis=1), v, tol)
    one = Ps == 1
    if one.any():
        _signs("w* decreasing in K for P=1", -np.diff(w_opt[one], axis=1), v, tol)
    if np.any(w_opt >= 1):
        v.append("w* < 1 violated")

    # R(w) on a w grid: decreasing convex in K, increasing concave in P, concave in w
    w = np.linspace(0.0, 1.0, 41) if w_grid is None else np.asarray(w_grid, dtype=float)
    R = np.array([[cw_rate_shift(P, K, w) for K in Ks] for P in Ps])  # (P, K, w)
    _signs("R(w) decreasing in K", -np.diff(R, axis=1), v, tol)
    _signs("R(w) convex in K", np.diff(R, 2, axis=1), v, tol)
    _signs("R(w) increasing in P", np.diff(R, axis=0), v, tol)
    _signs("R(w) concave in P", -np.diff(R, 2, axis=0), v, tol)
    _signs("R(w) concave in w", -np.diff(R, 2, axis=2), v, tol)

    # closed-form derivative against a central difference
    err = 0.0
    for P in Ps:
        for K in Ks:
            h = fd_step
            if K < h:
                # exponent K + 1 may not drop below 1: second order forward difference
                fd = (-3 * char_root(P, 1) + 4 * char_root(P, 1 + h) - char_root(P, 1 + 2 * h)) / (2 * h)
            else:
                fd = (char_root(P, K + 1 + h) - char_root(P, K + 1 - h)) / (2 * h)
            err = max(err, abs(fd - dr_dK(P, K)))
    if err > deriv_tol:
        v.append(f"dr/dK closed form off by {err:.3e} > {deriv_tol:g}")

    return SweepReport(Ps, Ks, r, log_r, w_opt, err, v)
