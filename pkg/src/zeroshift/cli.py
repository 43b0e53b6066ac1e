"""Command line entry point: ``zeroshift <command> ...``.

Exit codes: 0 ok/verified, 1 refuted or failed, 2 usage error, 3 guard exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import capacity as cap
from .channels import QueueSpec, ShiftSpec, embed, parse_phi, sample
from .codes import (
    CLEAN,
    CORRECTION,
    DETECTION,
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
    detect,
    dump_code,
    greedy_reverse_lex,
    lattice_points,
    lift_to_pary,
    load_code,
    queue_code_count,
    shift_code_count,
    shift_cw_count,
)
from .oracle import LIMITS, Limits, verify_correction, verify_detection

EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if x is None or x == "":
        return ""
    if isinstance(x, float):
        return f"{x:.6f}"
    return str(x)


def write_csv(header, rows, out=None):
    w = csv.writer(out or sys.stdout, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


# ---------------------------------------------------------------------------
# channel flags


def add_channel_flags(p, required=True):
    p.add_argument("--channel", choices=["shift", "queue", "ctshift", "ctqueue"], required=required)
    p.add_argument("--P", type=int, default=None, help="number of particle/packet types")
    p.add_argument("--K", type=int, default=None, help="shift window (shift) or max processing time (queue)")
    p.add_argument("--K1", type=int, default=None)
    p.add_argument("--K2", type=int, default=None)
    p.add_argument("--phi", type=str, default=None, help="processing-time law, e.g. 0.5,0.25,0.25")
    p.add_argument("--Ekappa", type=float, default=None, help="mean processing time")


def shift_from_flags(args) -> ShiftSpec:
    P = args.P if args.P is not None else 1
    if args.K1 is not None or args.K2 is not None:
        if args.K is not None:
            raise UsageError("give either --K or --K1/--K2, not both")
        if args.K1 is None or args.K2 is None:
            raise UsageError("--K1 and --K2 go together")
        return ShiftSpec(P, args.K1, args.K2)
    if args.K is None:
        raise UsageError("shift channel needs --K or --K1/--K2")
    return ShiftSpec(P, 0, args.K)


def queue_from_flags(args) -> QueueSpec:
    P = args.P if args.P is not None else 1
    if args.K1 is not None or args.K2 is not None:
        raise UsageError("--K1/--K2 only apply to the shift channel")
    if args.phi is not None:
        phi = parse_phi(args.phi)
        K = len(phi) - 1
        if args.K is not None and args.K != K:
            raise UsageError(f"--phi has {len(phi)} entries but --K is {args.K}")
        return QueueSpec(P, K, phi)
    if args.K is None:
        raise UsageError("queue channel needs --K or --phi")
    return QueueSpec(P, args.K)


def spec_from_flags(args):
    if args.channel is None:
        return None
    if args.channel == "shift":
        return shift_from_flags(args)
    if args.channel == "queue":
        return queue_from_flags(args)
    raise UsageError(f"--channel {args.channel} has no discrete code model")


# ---------------------------------------------------------------------------
# capacity


def cmd_capacity(args) -> int:
    P = args.P if args.P is not None else 1
    if args.channel == "shift":
        spec = shift_from_flags(args)
        if args.detection:
            K = min(-spec.K1, spec.K2)
            value = cap.detection_capacity(spec)
        else:
            K = spec.K
            value = cap.shift_capacity(P, K, args.C0)
        Peff = P if args.C0 is None else 2.0**args.C0
        r = cap.char_root(Peff, K + 1)
        w = Peff / ((K + 1) * (r - Peff) + Peff)
        header = ["channel", "P", "K", "Ekappa", "capacity", "regime", "w_opt", "r"]
        row = ["shift", P, K, "", value, "", w, r]
    elif args.channel == "queue":
        spec = queue_from_flags(args)
        Ek = args.Ekappa if args.Ekappa is not None else spec.Ekappa
        if args.detection:
            value, regime = cap.detection_capacity(spec), ""
        else:
            value, regime = cap.queue_capacity(P, spec.K, Ek, args.C0)
        header = ["channel", "P", "K", "Ekappa", "capacity", "regime", "w_opt", "r"]
        row = ["queue", P, spec.K, Ek, value, regime, "", ""]
    elif args.channel == "ctshift":
        if args.tau is None or args.Tres is None:
            raise UsageError("ctshift needs --tau and --Tres")
        value = cap.ct_shift_capacity(P, args.tau, args.Tres)
        r = cap.char_root(P, max(args.Tres / args.tau, 1.0))
        header = ["channel", "P", "Tres", "Ekappa", "capacity", "regime", "w_opt", "r"]
        row = ["ctshift", P, float(args.Tres), "", value, "", "", r]
    else:
        if args.tau is None or args.Tproc is None or args.Ekappa is None:
            raise UsageError("ctqueue needs --tau, --Tproc and --Ekappa")
        value, regime = cap.ct_queue_capacity(P, args.tau, args.Tproc, args.Ekappa)
        header = ["channel", "P", "Tproc", "Ekappa", "capacity", "regime", "w_opt", "r"]
        row = ["ctqueue", P, float(args.Tproc), args.Ekappa, value, regime, "", ""]
    if args.format == "json":
        print(json.dumps({h: v for h, v in zip(header, row) if v != ""}))
    else:
        write_csv(header, [row])
    return EXIT_OK


# ---------------------------------------------------------------------------
# construct


def _expected_size(args, spec, code: Code) -> tuple[str, int]:
    P = spec.P
    if code.kind == DETECTION:
        W = args.W
        if isinstance(spec, ShiftSpec):
            step = min(-spec.K1, spec.K2) + 1
            parent = P**W * len(lattice_points(W, args.n - W, step))
        else:
            parent = P**W * math.comb(args.n, W)
        return "pigeonhole_bound", -(-parent // (W * (args.n - W) + 1))
    if code.construction == "greedy-revlex":
        return "greedy_size", len(code)
    if isinstance(spec, ShiftSpec):
        if args.W is None:
            return "recurrence_count", shift_code_count(args.n, spec.K, P)
        return "formula_count", shift_cw_count(args.n, args.W, spec.K, P)
    if code.construction == "dense":
        return "formula_count", P**code.n
    try:
        return "formula_count", queue_code_count(code.n, args.W, spec.K, P)
    except ValueError:
        return "lattice_count", len(code)


def cmd_construct(args) -> int:
    spec = spec_from_flags(args)
    if args.n is None:
        raise UsageError("construct needs --n")
    kind = args.kind
    if kind == DETECTION:
        if args.W is None:
            raise UsageError("detection codes need --W")
        a = args.a if args.a == "auto" else int(args.a)
        code = construct_detection_code(args.n, args.W, spec, a)
    elif args.construction == "greedy":
        if args.W is None:
            raise UsageError("greedy construction needs --W")
        code = greedy_reverse_lex(args.n, args.W, spec)
    elif isinstance(spec, ShiftSpec):
        if args.W is None:
            code = construct_shift_code(args.n, spec.K, spec.P)
        else:
            code = lift_to_pary(construct_shift_cw_code(args.n, args.W, spec.K), spec.P)
        # the lattice only depends on K2 - K1; keep the requested window in the file
        code = Code(code.words, code.n, spec, code.kind, code.construction, code.meta)
    elif args.construction == "dense":
        code = construct_dense_queue_code(args.n, spec.P, spec.K, spec.phi)
    else:
        if args.W is None:
            raise UsageError("queue codes need --W")
        code = lift_to_pary(construct_queue_code(args.n, args.W, spec.K, spec.phi), spec.P)
    label, expected = _expected_size(args, spec, code)
    if args.output:
        with open(args.output, "w") as fp:
            dump_code(code, fp)
    else:
        dump_code(code, sys.stdout)
    summary = {"size": len(code), label: expected, "n": code.n}
    if "padded_from" in code.meta:
        summary["padded_from"] = code.meta["padded_from"]
    if "a" in code.meta:
        summary["a"] = code.meta["a"]
    print(json.dumps(summary), file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify / simulate


def _load(args) -> tuple[Code, object]:
    with open(args.code) as fp:
        code = load_code(fp)
    spec = spec_from_flags(args) or code.channel
    return code, spec


def cmd_verify(args) -> int:
    code, spec = _load(args)
    kind = args.kind or code.kind
    limits = LIMITS
    if args.max_outputs is not None:
        limits = Limits(LIMITS.max_vertices, args.max_outputs)
    check = verify_detection if kind == DETECTION else verify_correction
    verdict = check(code, spec, limits)
    print(verdict.to_json())
    return EXIT_OK if verdict else EXIT_REFUTED


def cmd_simulate(args) -> int:
    code, spec = _load(args)
    if not isinstance(spec, (ShiftSpec, QueueSpec)):
        raise UsageError("simulate needs a shift or queue channel")
    rng = np.random.default_rng(args.seed)
    picks = rng.integers(len(code), size=args.trials)
    lengths = np.empty(args.trials)
    ok = 0
    for t, idx in enumerate(picks):
        x = code.words[idx]
        z = sample(x, spec, rng)
        lengths[t] = len(z)
        if code.kind == CORRECTION:
            try:
                ok += decode(code, z) == x
            except DecodeError:
                pass
        else:
            clean = detect(code, z) == CLEAN
            ok += clean == (z == embed(x, spec))
    Lav = float(lengths.mean())
    stderr = float(lengths.std(ddof=1) / math.sqrt(args.trials)) if args.trials > 1 else 0.0
    report = {
        "code_size": len(code),
        "trials": args.trials,
        "seed": args.seed,
        "success_rate": ok / args.trials,
        "Lav": Lav,
        "Lav_stderr": stderr,
        "rate": math.log2(len(code)) / Lav,
    }
    print(json.dumps(report))
    if ok != args.trials:
        print(f"internal consistency error: {args.trials - ok} of {args.trials} rounds failed "
              "on a code that should be zero-error", file=sys.stderr)
        return EXIT_REFUTED
    return EXIT_OK


# ---------------------------------------------------------------------------
# tables and sweeps


def parse_range(text: str, integer: bool = False) -> list[float]:
    """``"3"``, ``"1:4"`` or ``"0:10:0.25"`` (inclusive)."""
    parts = text.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"bad range {text!r}") from None
    if len(nums) == 1:
        vals = nums
    elif len(nums) in (2, 3):
        lo, hi = nums[0], nums[1]
        step = nums[2] if len(nums) == 3 else 1.0
        if step <= 0 or hi < lo:
            raise UsageError(f"bad range {text!r}")
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        vals = [lo + i * step for i in range(count)]
    else:
        raise UsageError(f"bad range {text!r}")
    if integer:
        if any(v != int(v) for v in vals):
            raise UsageError(f"{text!r} must be integers")
        return [int(v) for v in vals]
    return vals


def _table_rows(P, K, nmax, nmin=0):
    for row in cap.finite_length_table(P, K, nmax, nmin):
        yield [P, K, row.n, row.log2_M, row.residual, row.W, row.log2_M_cw, row.cw_residual]


TABLE_HEADER = ["P", "K", "n", "log2_M", "residual", "W", "log2_M_cw", "cw_residual"]


def cmd_table(args) -> int:
    rows = []
    for P in parse_range(args.P, integer=True):
        for K in parse_range(args.K, integer=True):
            rows.extend(_table_rows(P, K, args.nmax, args.nmin))
    write_csv(TABLE_HEADER, rows)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.finite_length:
        return cmd_table(args)
    Ps = parse_range(args.P)
    Ks = parse_range(args.K)
    report = cap.appendix_sweep(Ps, Ks)
    rows = []
    for i, P in enumerate(report.P):
        for j, K in enumerate(report.K):
            rows.append([float(P), float(K), float(report.r[i, j]), float(report.log_r[i, j]),
                         float(report.w_opt[i, j])])
    write_csv(["P", "K", "r", "log2_r", "w_opt"], rows)
    print(f"violations: {len(report.violations)}", file=sys.stderr)
    for v in report.violations:
        print(f"  {v}", file=sys.stderr)
    print(f"max |dr/dK closed form - finite difference|: {report.deriv_error:.3e}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_REFUTED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zeroshift", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="zero-error (or detection) capacity of one channel")
    add_channel_flags(p)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--Tres", type=float, default=None)
    p.add_argument("--Tproc", type=float, default=None)
    p.add_argument("--C0", type=float, default=None, help="zero-error capacity of the per-particle noise")
    p.add_argument("--detection", action="store_true")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("construct", help="build a code and write it in the code-file format")
    add_channel_flags(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--W", type=int, default=None)
    p.add_argument("--kind", choices=[CORRECTION, DETECTION], default=CORRECTION)
    p.add_argument("--construction", choices=["lattice", "greedy", "dense"], default="lattice")
    p.add_argument("--a", default="auto", help="coordinate sum of a detection code, or 'auto'")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="brute-force zero-error check of a code file")
    p.add_argument("code")
    add_channel_flags(p, required=False)
    p.add_argument("--kind", choices=[CORRECTION, DETECTION], default=None)
    p.add_argument("--max-outputs", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="transmit, sample and decode a code file")
    p.add_argument("code")
    add_channel_flags(p, required=False)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    for name, helptext in [("table", "finite-length residuals of the optimal code sizes"),
                           ("sweep", "monotonicity/convexity sweep over real P, K")]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--P", default="1")
        p.add_argument("--K", default="1")
        p.add_argument("--nmax", type=int, default=200)
        p.add_argument("--nmin", type=int, default=0)
        if name == "sweep":
            p.add_argument("--finite-length", action="store_true")
            p.set_defaults(func=cmd_sweep)
        else:
            p.set_defaults(func=cmd_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, InfeasibleError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
