"""Configuration-driven experiment runner.

Every lab operation is reachable through a subcommand; each run writes a
CSV table (and optionally a static SVG plot), prints a one-line verdict,
and exits with a machine-readable status:

    0  consistent / converging / decaying / verified / no violations
    1  violated / not converging / not decaying / unverified
    2  inconclusive
    3  usage or configuration error

Options resolve in three layers: built-in defaults, then a flat
``key = value`` config file (``--config``), then command-line flags.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from . import counterexample as cex
from .convergence import (
    ConvergenceVerdict,
    DecayVerdict,
    GridSpec,
    classify_decay,
    col_diff_tail_sup,
    col_tail_sup,
    jk_decay,
    log_integral_bound,
    loglog_decay,
    mixed_diff_tail,
    rational_point_convergence,
    regular_remainder_sup,
    row_diff_tail_sup,
    row_tail_sup,
    tail_decay_report,
)
from .kernels import direct_sine_sum, kernel_bound_sweep, sbp_decompose
from .membership import (
    BoundFamily,
    BoundSpec,
    Verdict,
    divisor_embedding_check,
    embedding_check,
    gm_membership_scan,
    membership_scan,
)
from .output import write_csv, write_polyline_svg
from .sequences import (
    HORIZON_LIMIT,
    additive_rule,
    geometric_double_rule,
    geometric_rule,
    power_double_rule,
    power_rule,
    table_rule,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3


class UsageError(Exception):
    """Configuration problem; carries the offending field name."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"field '{field}': {message}")


def _read_config(path: str) -> dict[str, str]:
    cfg: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError("config", str(exc)) from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError("config", f"line {lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        cfg[key.strip()] = value.strip()
    return cfg


class Options:
    """Flag > config-file > default resolution with typed casting."""

    def __init__(self, args: argparse.Namespace, cfg: dict[str, str]):
        self._args = vars(args)
        self._cfg = cfg

    def get(self, name: str, default=None, cast=str):
        val = self._args.get(name.replace("-", "_"))
        if val is None and name in self._cfg:
            val = self._cfg[name]
        if val is None:
            return default
        if isinstance(val, str) and cast is not str:
            try:
                val = cast(val)
            except ValueError:
                raise UsageError(name, f"cannot parse {val!r}") from None
        return val


def _positive(name: str, value: float) -> float:
    if not value > 0:
        raise UsageError(name, f"must be positive, got {value}")
    return value


def _step(name: str, value: int) -> int:
    if value < 1:
        raise UsageError(name, f"must be >= 1, got {value}")
    return int(value)


def _cap(name: str, value: int) -> int:
    value = int(value)
    if not 1 <= value <= HORIZON_LIMIT:
        raise UsageError(name, f"must be in [1, {HORIZON_LIMIT}], got {value}")
    return value


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _load_table(path: str):
    """CSV rows (j, k, re[, im]) with implicit zeros elsewhere."""
    entries = []
    try:
        with open(path, newline="") as fh:
            for i, row in enumerate(csv.reader(fh)):
                if not row or not row[0].strip():
                    continue
                try:
                    j, k = int(row[0]), int(row[1])
                except ValueError:
                    if i == 0:
                        continue  # header row
                    raise UsageError("table-file", f"row {i + 1}: bad indices") from None
                if j < 1 or k < 1 or len(row) < 3:
                    raise UsageError("table-file", f"row {i + 1}: need j,k >= 1 and a value")
                re = float(row[2])
                im = float(row[3]) if len(row) > 3 and row[3].strip() else 0.0
                entries.append((j, k, complex(re, im)))
    except OSError as exc:
        raise UsageError("table-file", str(exc)) from None
    if not entries:
        raise UsageError("table-file", "no entries")
    jmax = max(e[0] for e in entries)
    kmax = max(e[1] for e in entries)
    if jmax * kmax > (1 << 22):
        raise UsageError("table-file", "support box too large")
    arr = np.zeros((jmax, kmax), dtype=complex)
    for j, k, v in entries:
        arr[j - 1, k - 1] = v
    return table_rule(arr, label=f"table({path})")


def _double_rule(opt: Options, p_builds_seq: bool = False):
    kind = opt.get("seq", "geometric")
    if kind == "geometric":
        return geometric_double_rule(_positive("ratio", opt.get("ratio", 0.5, float)))
    if kind == "power":
        return power_double_rule(_positive("exponent", opt.get("exponent", 2.0, float)))
    if kind == "separable":
        q = _positive("ratio", opt.get("ratio", 0.5, float))
        return additive_rule(geometric_rule(q), geometric_rule(q))
    if kind == "proposition":
        return cex.double_rule(_seq_p(opt, p_builds_seq))
    if kind == "table":
        path = opt.get("table-file")
        if not path:
            raise UsageError("table-file", "required when seq=table")
        return _load_table(path)
    raise UsageError("seq", f"unknown sequence {kind!r}")


def _single_rule(opt: Options, p_builds_seq: bool = False):
    kind = opt.get("seq", "geometric")
    if kind == "geometric":
        return geometric_rule(_positive("ratio", opt.get("ratio", 0.5, float)))
    if kind == "power":
        return power_rule(_positive("exponent", opt.get("exponent", 2.0, float)))
    if kind == "proposition":
        return cex.single_rule(_seq_p(opt, p_builds_seq))
    raise UsageError("seq", f"no single-sequence form for {kind!r}")


def _seq_p(opt: Options, p_builds_seq: bool = False) -> float:
    """Construction exponent of the proposition sequence.

    ``--seq-p`` always wins; ``--p`` doubles as the construction exponent
    only on subcommands where it has no role of its own.
    """
    p = opt.get("seq-p", None, float)
    if p is None and p_builds_seq:
        p = opt.get("p", None, float)
    if p is None:
        p = 2.0
    if not p > 1:
        raise UsageError("seq-p", "construction exponent must exceed 1")
    return p


def _bound_spec(opt: Options) -> BoundSpec:
    name = opt.get("family", "max-window")
    try:
        family = BoundFamily(name)
    except ValueError:
        raise UsageError("family", f"unknown family {name!r}") from None
    lam = _step("lambda", opt.get("lambda", 2, int))
    cap = _cap("cap", opt.get("cap", 1 << 15, int))
    try:
        return BoundSpec(family, lam=lam, horizon_cap=cap)
    except ValueError as exc:
        raise UsageError("lambda", str(exc)) from None


def _blocks(opt: Options) -> list[tuple[int, int]]:
    spec = opt.get("blocks")
    if spec:
        out = []
        for part in spec.split(","):
            if "x" not in part:
                raise UsageError("blocks", f"expected MxN, got {part!r}")
            a, b = part.split("x", 1)
            out.append((_step("blocks", int(a)), _step("blocks", int(b))))
        return out
    octaves = opt.get("octaves", "1:6")
    try:
        lo, hi = (int(t) for t in octaves.split(":"))
    except ValueError:
        raise UsageError("octaves", f"expected LO:HI, got {octaves!r}") from None
    if lo < 0 or hi < lo:
        raise UsageError("octaves", "need 0 <= LO <= HI")
    fixed_m = opt.get("fixed-m", None, int)
    if fixed_m is not None:
        return [(_step("fixed-m", fixed_m), 2**t) for t in range(lo, hi + 1)]
    return [(2**t, 2**t) for t in range(lo, hi + 1)]


def _outdir(opt: Options) -> Path:
    out = Path(opt.get("out", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _verdict_exit(verdict) -> int:
    if verdict in (Verdict.CONSISTENT, ConvergenceVerdict.CONVERGING, DecayVerdict.DECAYING):
        return EXIT_PASS
    if verdict in (Verdict.VIOLATED, ConvergenceVerdict.NOT_CONVERGING,
                   DecayVerdict.NOT_DECAYING):
        return EXIT_FAIL
    return EXIT_INCONCLUSIVE


# ---------------------------------------------------------------------------
# subcommand handlers


def _run_membership(opt: Options) -> int:
    p = _positive("p", opt.get("p", 1.0, float))
    r = _step("r", opt.get("r", 1, int))
    spec = _bound_spec(opt)
    out = _outdir(opt)
    if opt.get("single", False):
        seq = _single_rule(opt)
        blocks1 = sorted({m for m, _ in _blocks(opt)})
        report = gm_membership_scan(seq, p, r, spec, blocks1)
    else:
        report = membership_scan(_double_rule(opt), p, r, spec, _blocks(opt))
    write_csv(out / "membership.csv",
              ["m", "n", "axis", "lhs", "rhs", "ratio", "truncated"],
              [(e.m, e.n, e.axis, e.lhs, e.rhs, e.ratio, e.truncated)
               for e in report.per_block])
    print(f"membership: {report.verdict.value} c_estimate={report.c_estimate:.6g} "
          f"growth_fit={report.growth_fit:.4g}")
    return _verdict_exit(report.verdict)


def _run_embedding(opt: Options) -> int:
    c = _double_rule(opt)
    blocks = _blocks(opt)
    out = _outdir(opt)
    p1 = opt.get("p1", None, float)
    p2 = opt.get("p2", None, float)
    r1 = opt.get("r1", None, int)
    r2 = opt.get("r2", None, int)
    if p1 is not None and p2 is not None:
        r = _step("r", opt.get("r", 1, int))
        if not 0 < p1 <= p2:
            raise UsageError("p1", "need 0 < p1 <= p2")
        report = embedding_check(c, r, p1, p2, blocks)
        kind = f"p-norm p1={p1:g} p2={p2:g}"
    elif r1 is not None and r2 is not None:
        p = _positive("p", opt.get("p", 1.0, float))
        if p < 1:
            raise UsageError("p", "divisor embedding needs p >= 1")
        if r1 < 1 or r2 % r1 != 0:
            raise UsageError("r1", "r1 must divide r2")
        report = divisor_embedding_check(c, p, r1, r2, blocks)
        kind = f"step r1={r1} r2={r2}"
    else:
        raise UsageError("p1", "give either --p1/--p2 or --r1/--r2")
    write_csv(out / "embedding.csv",
              ["m", "n", "axis", "lhs", "bound"],
              [(v.m, v.n, v.axis, v.lhs, v.bound) for v in report.violations])
    print(f"embedding ({kind}): {'ok' if report.ok else 'violated'} "
          f"checked={report.checked} violations={len(report.violations)}")
    return EXIT_PASS if report.ok else EXIT_FAIL


def _run_sbp(opt: Options) -> int:
    seq = _single_rule(opt)
    n = _step("start", opt.get("start", 1, int))
    m = _step("end", opt.get("end", 50, int))
    if m < n:
        raise UsageError("end", "need end >= start")
    r = _step("r", opt.get("r", 1, int))
    x = opt.get("x", 1.0, float)
    dec = sbp_decompose(seq, n, m, r, x)
    direct = direct_sine_sum(seq, n, m, x)
    err = abs(dec.total - direct) / (1.0 + abs(direct))
    out = _outdir(opt)
    write_csv(out / "sbp.csv",
              ["component", "re", "im"],
              [("main_term", dec.main_term.real, dec.main_term.imag),
               ("upper_boundary", dec.upper_boundary.real, dec.upper_boundary.imag),
               ("lower_boundary", dec.lower_boundary.real, dec.lower_boundary.imag),
               ("total", dec.total.real, dec.total.imag),
               ("direct_sum", direct.real, direct.imag),
               ("relative_error", err, 0.0)])
    ok = err <= 1e-12
    print(f"sbp: {'exact' if ok else 'MISMATCH'} relative_error={err:.3e}")
    return EXIT_PASS if ok else EXIT_FAIL


def _run_kernel_bound(opt: Options) -> int:
    r = _step("r", opt.get("r", 1, int))
    points = _step("points", opt.get("points", 1000, int))
    k_max = int(opt.get("k-max", 100, int))
    if k_max < 0:
        raise UsageError("k-max", "must be >= 0")
    sweeps = kernel_bound_sweep(r, points, k_max)
    out = _outdir(opt)
    write_csv(out / "kernel_bound.csv",
              ["band", "half", "points", "k_max", "max_ratio", "violations"],
              [(s.band, s.half, s.points, s.k_max, s.max_ratio, s.violations)
               for s in sweeps])
    bad = sum(s.violations for s in sweeps)
    worst = max(s.max_ratio for s in sweeps)
    print(f"kernel-bound: {'ok' if bad == 0 else 'violated'} "
          f"max_ratio={worst:.6f} violations={bad}")
    return EXIT_PASS if bad == 0 else EXIT_FAIL


def _grid_kv(opt: Options) -> dict[str, str]:
    """Compact grid spec: ``--grid r=3,points=2,exclusion=1e-6``."""
    text = opt.get("grid")
    if not text:
        return {}
    out = {}
    for part in text.split(","):
        if "=" not in part:
            raise UsageError("grid", f"expected key=value, got {part!r}")
        key, value = part.split("=", 1)
        if key.strip() not in ("r", "points", "exclusion"):
            raise UsageError("grid", f"unknown grid key {key.strip()!r}")
        out[key.strip()] = value.strip()
    return out


def _run_converge(opt: Options) -> int:
    c = _double_rule(opt, p_builds_seq=True)
    thresholds = opt.get("thresholds", [8, 16, 24, 40], _int_list)
    cap = _cap("cap", opt.get("cap", 8192, int))
    caps = (cap, cap)
    rational = opt.get("at-rational")
    kv = _grid_kv(opt)
    gr = opt.get("grid-r", None, int)
    if gr is None:
        gr = int(kv["r"]) if "r" in kv else opt.get("r", 3, int)
    gr = _step("grid-r", gr)
    if rational:
        try:
            l1, l2 = (int(t) for t in rational.split(","))
        except ValueError:
            raise UsageError("at-rational", "expected L1,L2") from None
        try:
            profile = rational_point_convergence(c, gr, l1, l2, thresholds, caps)
        except ValueError as exc:
            raise UsageError("at-rational", str(exc)) from None
        where = f"rational point ({l1},{l2}) of step {gr}"
    else:
        ppb = opt.get("points-per-band", None, int)
        if ppb is None:
            ppb = int(kv["points"]) if "points" in kv else 2
        excl = opt.get("exclusion", None, float)
        if excl is None:
            excl = float(kv["exclusion"]) if "exclusion" in kv else 1e-6
        try:
            grid = GridSpec(r=gr, points_per_band=_step("points-per-band", ppb),
                            exclusion_radius=excl)
        except ValueError as exc:
            raise UsageError("grid-r", str(exc)) from None
        profile = regular_remainder_sup(c, grid, thresholds, caps)
        where = f"grid r={gr} ({profile.grid_size} points)"
    out = _outdir(opt)
    write_csv(out / "profile.csv",
              ["threshold", "sup", "m", "n", "x", "y"],
              [(e.threshold, e.sup, e.m, e.n, e.x, e.y) for e in profile.entries])
    if not opt.get("no-plot", False) and profile.entries:
        write_polyline_svg(out / "profile.svg",
                           [("sup", [e.threshold for e in profile.entries],
                             [max(e.sup, 1e-300) for e in profile.entries])],
                           title=f"remainder sup vs threshold [{c.label}]", log_y=True)
    print(f"converge: {profile.verdict.value} at {where} "
          f"exact={str(profile.exact).lower()} caps={profile.caps}")
    return _verdict_exit(profile.verdict)


_TAIL_CONDITIONS = ("row-tail", "col-tail", "mixed-diff-tail",
                    "row-diff-tail", "col-diff-tail")


def _run_decay(opt: Options) -> int:
    c = _double_rule(opt)
    condition = opt.get("condition", "jk")
    thresholds = opt.get("thresholds", [16, 64, 256, 1024, 4096], _int_list)
    horizon = _cap("horizon", opt.get("horizon", 1 << 13, int))
    if condition == "jk":
        report = jk_decay(c, thresholds, horizon)
    elif condition == "loglog":
        report = loglog_decay(c, thresholds, horizon)
    elif condition in _TAIL_CONDITIONS:
        p = _positive("p", opt.get("p", 2.0, float))
        r = _step("r", opt.get("r", 1, int))

        def fn(m: int, n: int) -> tuple[float, bool]:
            if condition == "row-tail":
                est = row_tail_sup(c, max(m, 2), n, horizon)
                return est.value, est.conclusive
            if condition == "col-tail":
                est = col_tail_sup(c, m, max(n, 2), horizon)
                return est.value, est.conclusive
            if condition == "mixed-diff-tail":
                return mixed_diff_tail(c, p, r, m, n, horizon), True
            if condition == "row-diff-tail":
                return row_diff_tail_sup(c, p, r, m, n, horizon), True
            return col_diff_tail_sup(c, p, r, m, n, horizon), True

        report = tail_decay_report(fn, thresholds, horizon)
    else:
        raise UsageError("condition", f"unknown condition {condition!r}")
    verdict = classify_decay(report)
    out = _outdir(opt)
    write_csv(out / "decay.csv", ["m", "n", "value"],
              [(s.m, s.n, s.value) for s in report.samples])
    if not opt.get("no-plot", False):
        write_polyline_svg(out / "decay.svg",
                           [("max_tail", report.thresholds,
                             [max(t, 1e-300) for t in report.max_tail])],
                           title=f"{condition} tail vs threshold [{c.label}]", log_y=True)
    tails = " ".join(f"{t:.4g}" for t in report.max_tail)
    print(f"decay ({condition}): {verdict.value} max_tail=[{tails}] "
          f"trend_fit={report.trend_fit:.4g}")
    return _verdict_exit(verdict)


def _run_log_integral(opt: Options) -> int:
    n = _step("n", opt.get("n", 1, int))
    N = _step("N", opt.get("N", 100, int))
    p = opt.get("p", 2.0, float)
    if p < 1:
        raise UsageError("p", "need p >= 1")
    value, bound = log_integral_bound(n, N, p)
    out = _outdir(opt)
    write_csv(out / "log_integral.csv", ["n", "N", "p", "value", "bound"],
              [(n, N, p, value, bound)])
    ok = value <= bound + 1e-12
    print(f"log-integral: {'ok' if ok else 'violated'} value={value:.12g} bound={bound:.12g}")
    return EXIT_PASS if ok else EXIT_FAIL


def _run_counterexample(opt: Options) -> int:
    action = opt.get("action", "certify")
    out = _outdir(opt)
    p = _seq_p(opt, p_builds_seq=True)
    if action == "certify":
        n_max = int(opt.get("n-max", 10000, int))
        if n_max < 0 or 6 * n_max + 5 > HORIZON_LIMIT:
            raise UsageError("n-max", "out of range")
        cert = cex.divergence_certificate(n_max, p)
        write_csv(out / "certificate.csv",
                  ["N", "partial_sum", "lower_bound", "margin"],
                  zip(cert.n_values.tolist(), cert.partial_sums.tolist(),
                      cert.lower_bounds.tolist(),
                      (cert.partial_sums - cert.lower_bounds).tolist()))
        if not opt.get("no-plot", False):
            stride = max(1, len(cert) // 512)
            write_polyline_svg(
                out / "certificate.svg",
                [("partial_sum", cert.n_values[::stride], cert.partial_sums[::stride]),
                 ("lower_bound", cert.n_values[::stride], cert.lower_bounds[::stride])],
                title=f"divergence certificate (p={p:g})")
        print(f"counterexample certify: {'verified' if cert.verified else 'FAILED'} "
              f"rows={len(cert)} final_margin={cert.partial_sums[-1] - cert.lower_bounds[-1]:.6g}")
        return EXIT_PASS if cert.verified else EXIT_FAIL
    if action == "ratio":
        m = _step("fixed-m", opt.get("fixed-m", 16, int))
        octaves = opt.get("octaves", "4:12")
        try:
            lo, hi = (int(t) for t in octaves.split(":"))
        except ValueError:
            raise UsageError("octaves", f"expected LO:HI, got {octaves!r}") from None
        q = _positive("norm-exponent", opt.get("norm-exponent", 1.0, float))
        restricted = bool(opt.get("restricted", False))
        ns = [2**t for t in range(lo, hi + 1)]
        ratios = [cex.violation_ratio(m, n, p, norm_exponent=q, restricted=restricted)
                  for n in ns]
        write_csv(out / "ratio.csv", ["n", "ratio"], zip(ns, ratios))
        slope = float(np.polyfit(np.log2(ns), np.log2(ratios), 1)[0]) \
            if len(ns) >= 2 and all(v > 0 for v in ratios) else math.nan
        growing = not math.isnan(slope) and slope > 0.05
        print(f"counterexample ratio: {'growing' if growing else 'bounded'} "
              f"slope={slope:.4g} norm_exponent={q:g}")
        return EXIT_FAIL if growing else EXIT_PASS
    raise UsageError("action", f"unknown action {action!r}")


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("usage", message)


def _add_seq_flags(sp):
    sp.add_argument("--seq", choices=["geometric", "power", "separable",
                                      "proposition", "table"])
    sp.add_argument("--ratio", type=float)
    sp.add_argument("--exponent", type=float)
    sp.add_argument("--seq-p", type=float)
    sp.add_argument("--table-file")


def _add_common(sp):
    sp.add_argument("--config")
    sp.add_argument("--out")
    sp.add_argument("--no-plot", action="store_const", const=True)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dgmlab", description=__doc__,
                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("membership", help="class membership scan")
    _add_seq_flags(sp)
    _add_common(sp)
    sp.add_argument("--p", type=float)
    sp.add_argument("--r", type=int)
    sp.add_argument("--family", choices=[f.value for f in BoundFamily])
    sp.add_argument("--lambda", type=int)
    sp.add_argument("--cap", type=int)
    sp.add_argument("--blocks")
    sp.add_argument("--octaves")
    sp.add_argument("--fixed-m", type=int)
    sp.add_argument("--single", action="store_const", const=True)
    sp.set_defaults(handler=_run_membership)

    sp = sub.add_parser("embedding", help="p-norm or step embedding check")
    _add_seq_flags(sp)
    _add_common(sp)
    sp.add_argument("--p", type=float)
    sp.add_argument("--p1", type=float)
    sp.add_argument("--p2", type=float)
    sp.add_argument("--r", type=int)
    sp.add_argument("--r1", type=int)
    sp.add_argument("--r2", type=int)
    sp.add_argument("--blocks")
    sp.add_argument("--octaves")
    sp.add_argument("--fixed-m", type=int)
    sp.set_defaults(handler=_run_embedding)

    sp = sub.add_parser("sbp", help="summation-by-parts decomposition")
    _add_seq_flags(sp)
    _add_common(sp)
    sp.add_argument("--start", type=int)
    sp.add_argument("--end", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--x", type=float)
    sp.set_defaults(handler=_run_sbp)

    sp = sub.add_parser("kernel-bound", help="half-band kernel bound sweep")
    _add_common(sp)
    sp.add_argument("--r", type=int)
    sp.add_argument("--points", type=int)
    sp.add_argument("--k-max", type=int)
    sp.set_defaults(handler=_run_kernel_bound)

    sp = sub.add_parser("converge", help="regular-convergence remainder profile")
    _add_seq_flags(sp)
    _add_common(sp)
    sp.add_argument("--p", type=float)
    sp.add_argument("--r", type=int)
    sp.add_argument("--grid", help="compact form: r=3,points=2,exclusion=1e-6")
    sp.add_argument("--grid-r", type=int)
    sp.add_argument("--points-per-band", type=int)
    sp.add_argument("--exclusion", type=float)
    sp.add_argument("--thresholds", type=_int_list)
    sp.add_argument("--cap", type=int)
    sp.add_argument("--at-rational")
    sp.set_defaults(handler=_run_converge)

    sp = sub.add_parser("decay", help="decay/tail condition report")
    _add_seq_flags(sp)
    _add_common(sp)
    sp.add_argument("--condition", choices=["jk", "loglog", *_TAIL_CONDITIONS])
    sp.add_argument("--thresholds", type=_int_list)
    sp.add_argument("--horizon", type=int)
    sp.add_argument("--p", type=float)
    sp.add_argument("--r", type=int)
    sp.set_defaults(handler=_run_decay)

    sp = sub.add_parser("log-integral", help="log-integral inequality value")
    _add_common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--N", type=int)
    sp.add_argument("--p", type=float)
    sp.set_defaults(handler=_run_log_integral)

    sp = sub.add_parser("counterexample", help="sharpness example tools")
    sp.add_argument("action", choices=["certify", "ratio"])
    _add_common(sp)
    sp.add_argument("--p", type=float)
    sp.add_argument("--seq-p", type=float)
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--fixed-m", type=int)
    sp.add_argument("--octaves")
    sp.add_argument("--norm-exponent", type=float)
    sp.add_argument("--restricted", action="store_const", const=True)
    sp.set_defaults(handler=_run_counterexample)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = _read_config(args.config) if getattr(args, "config", None) else {}
        opt = Options(args, cfg)
        return args.handler(opt)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
