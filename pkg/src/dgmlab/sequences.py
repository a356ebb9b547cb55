"""Single and double complex sequences as evaluation rules.

A rule is a pure function of its integer index (index pair for double
sequences).  Rules may carry structure hints -- a vectorized evaluator, a
multiplicative factorization ``c[j,k] = u[j] * v[k]``, a bounded support
box, a tail envelope -- that let the heavier scans pick fast exact paths.
The hints never change semantics: every consumer falls back to plain
pointwise evaluation when a hint is absent.

This module also provides the step difference operators and the block
p-norms that the class scanners and convergence checks are built from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

# Hard ceiling on any index horizon accepted by the lab; keeps desk runs
# bounded regardless of configuration.
HORIZON_LIMIT = 2**24


def _check_horizon(value: int, name: str = "horizon") -> int:
    value = int(value)
    if value < 1 or value > HORIZON_LIMIT:
        raise ValueError(f"{name} must be in [1, {HORIZON_LIMIT}], got {value}")
    return value


@dataclass(frozen=True)
class TailEnvelope:
    """Separable decay envelope ``|c[j,k]| <= amp * f(j) * g(k)``.

    ``kind`` selects the factor shape: ``"geometric"`` means
    ``f(j) = a_j**j`` with ``0 < a_j < 1``; ``"polynomial"`` means
    ``f(j) = j**-a_j``.  Tails may be infinite (slow decay); consumers
    treat an infinite residual as "inconclusive", never as zero.
    """

    amp: float
    kind: str
    a_j: float
    a_k: float

    def __post_init__(self):
        if self.kind not in ("geometric", "polynomial"):
            raise ValueError(f"unknown envelope kind {self.kind!r}")
        if self.kind == "geometric" and not (0 < self.a_j < 1 and 0 < self.a_k < 1):
            raise ValueError("geometric envelope needs ratios in (0, 1)")

    def f(self, j: float) -> float:
        return self.a_j**j if self.kind == "geometric" else float(j) ** -self.a_j

    def g(self, k: float) -> float:
        return self.a_k**k if self.kind == "geometric" else float(k) ** -self.a_k

    def f_tail(self, start: int) -> float:
        """Upper bound on ``sum_{j >= start} f(j)``; may be ``inf``."""
        return _factor_tail(self.kind, self.a_j, start)

    def g_tail(self, start: int) -> float:
        return _factor_tail(self.kind, self.a_k, start)


def _factor_tail(kind: str, a: float, start: int) -> float:
    if kind == "geometric":
        return a**start / (1.0 - a)
    if a <= 1.0:
        return math.inf
    # integral comparison: sum_{j>=s} j^-a <= s^-a + s^(1-a)/(a-1)
    s = float(max(start, 1))
    return s**-a + s ** (1.0 - a) / (a - 1.0)


@dataclass(frozen=True)
class SingleTailEnvelope:
    """One-dimensional envelope ``|a_k| <= amp * f(k)`` (same kinds)."""

    amp: float
    kind: str
    a: float

    def f(self, k: float) -> float:
        return self.a**k if self.kind == "geometric" else float(k) ** -self.a

    def tail(self, start: int) -> float:
        return self.amp * _factor_tail(self.kind, self.a, start)


@dataclass(frozen=True)
class SequenceRule:
    """Complex sequence ``{a_k}`` defined for ``k >= first_index``.

    ``eval`` must be pure: repeated calls with the same index return the
    same value.  ``array_eval``, when given, must agree with ``eval``
    elementwise on integer arrays.
    """

    eval: Callable[[int], complex]
    label: str = ""
    first_index: int = 1
    array_eval: Callable[[np.ndarray], np.ndarray] | None = None
    real: bool = False
    tail: SingleTailEnvelope | None = None

    def values(self, ks) -> np.ndarray:
        """Evaluate at every index of ``ks`` (any integer array shape)."""
        ks = np.asarray(ks, dtype=np.int64)
        if self.array_eval is not None:
            return np.asarray(self.array_eval(ks), dtype=complex)
        flat = np.array([self.eval(int(k)) for k in ks.ravel()], dtype=complex)
        return flat.reshape(ks.shape)


@dataclass(frozen=True)
class DoubleSequenceRule:
    """Complex double sequence ``{c_jk}``, total on ``j, k >= 1``.

    ``factors = (u, v)`` declares ``c[j,k] = u[j] * v[k]`` exactly;
    ``support = (J, K)`` declares ``c[j,k] = 0`` whenever ``j > J`` or
    ``k > K``.
    """

    eval: Callable[[int, int], complex]
    label: str = ""
    array_eval: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    factors: tuple[SequenceRule, SequenceRule] | None = None
    support: tuple[int, int] | None = None
    real: bool = False
    tail: TailEnvelope | None = None

    def values(self, js, ks) -> np.ndarray:
        """Elementwise evaluation on broadcastable integer index arrays."""
        js = np.asarray(js, dtype=np.int64)
        ks = np.asarray(ks, dtype=np.int64)
        if self.array_eval is not None:
            out = np.asarray(self.array_eval(js, ks), dtype=complex)
            shape = np.broadcast_shapes(js.shape, ks.shape)
            if out.shape != shape:
                out = np.broadcast_to(out, shape).copy()
            return out
        jb, kb = np.broadcast_arrays(js, ks)
        flat = np.array(
            [self.eval(int(j), int(k)) for j, k in zip(jb.ravel(), kb.ravel())],
            dtype=complex,
        )
        return flat.reshape(jb.shape)


# ---------------------------------------------------------------------------
# difference operators


def step_diff(seq: SequenceRule, k: int, r: int) -> complex:
    """Step-r forward difference ``a_k - a_{k+r}``."""
    return seq.eval(k) - seq.eval(k + r)


def row_diff(c: DoubleSequenceRule, j: int, k: int, r: int) -> complex:
    """Difference along the row index: ``c[j,k] - c[j+r,k]``."""
    return c.eval(j, k) - c.eval(j + r, k)


def col_diff(c: DoubleSequenceRule, j: int, k: int, r: int) -> complex:
    """Difference along the column index: ``c[j,k] - c[j,k+r]``."""
    return c.eval(j, k) - c.eval(j, k + r)


def mixed_diff(c: DoubleSequenceRule, j: int, k: int, r: int) -> complex:
    """Mixed difference, the row difference of the column difference.

    Equals ``c[j,k] - c[j+r,k] - c[j,k+r] + c[j+r,k+r]``.
    """
    return c.eval(j, k) - c.eval(j + r, k) - c.eval(j, k + r) + c.eval(j + r, k + r)


def step_diff_values(seq: SequenceRule, ks, r: int) -> np.ndarray:
    """Vectorized ``a_k - a_{k+r}`` over an index array."""
    ks = np.asarray(ks, dtype=np.int64)
    return seq.values(ks) - seq.values(ks + r)


def row_diff_values(c: DoubleSequenceRule, js, ks, r: int) -> np.ndarray:
    if c.factors is not None:
        u, v = c.factors
        return step_diff_values(u, js, r) * v.values(ks)
    return c.values(js, ks) - c.values(np.asarray(js) + r, ks)


def col_diff_values(c: DoubleSequenceRule, js, ks, r: int) -> np.ndarray:
    if c.factors is not None:
        u, v = c.factors
        return u.values(js) * step_diff_values(v, ks, r)
    return c.values(js, ks) - c.values(js, np.asarray(ks) + r)


def mixed_diff_values(c: DoubleSequenceRule, js, ks, r: int) -> np.ndarray:
    if c.factors is not None:
        u, v = c.factors
        return step_diff_values(u, js, r) * step_diff_values(v, ks, r)
    js = np.asarray(js, dtype=np.int64)
    ks = np.asarray(ks, dtype=np.int64)
    return (
        c.values(js, ks)
        - c.values(js + r, ks)
        - c.values(js, ks + r)
        + c.values(js + r, ks + r)
    )


# ---------------------------------------------------------------------------
# block p-norms


def block_p_norm(seq: SequenceRule, m: int, p: float, r: int) -> float:
    """``(sum_{k=m}^{2m-1} |a_k - a_{k+r}|^p)^(1/p)`` over one dyadic block."""
    if m < seq.first_index:
        raise ValueError(f"block start {m} below first index {seq.first_index}")
    if p <= 0:
        raise ValueError("p must be positive")
    if r < 1:
        raise ValueError("step r must be >= 1")
    d = np.abs(step_diff_values(seq, np.arange(m, 2 * m), r))
    return float(np.sum(d**p) ** (1.0 / p))


def double_block_p_norm(c: DoubleSequenceRule, m: int, n: int, p: float, r: int) -> float:
    """Mixed-difference block p-norm over ``[m, 2m) x [n, 2n)``.

    For product rules the mixed difference factorizes, so the double norm
    is the product of the two single block norms; used as the fast path.
    """
    if m < 1 or n < 1:
        raise ValueError("block starts must be >= 1")
    if p <= 0:
        raise ValueError("p must be positive")
    if r < 1:
        raise ValueError("step r must be >= 1")
    if c.factors is not None:
        u, v = c.factors
        return block_p_norm(u, m, p, r) * block_p_norm(v, n, p, r)
    js = np.arange(m, 2 * m)[:, None]
    ks = np.arange(n, 2 * n)[None, :]
    d = np.abs(mixed_diff_values(c, js, ks, r))
    return float(np.sum(d**p) ** (1.0 / p))


def window_diff_p_norm(seq: SequenceRule, start: int, length: int, p: float, r: int) -> float:
    """Step-r difference p-norm over an arbitrary window ``[start, start+length)``.

    The dyadic ``block_p_norm`` is the ``length == start`` special case;
    the shifted windows appear in the divisor-embedding chain.
    """
    if length < 1:
        raise ValueError("window length must be >= 1")
    d = np.abs(step_diff_values(seq, np.arange(start, start + length), r))
    return float(np.sum(d**p) ** (1.0 / p))


# ---------------------------------------------------------------------------
# rule constructors


def rule_from_function(fn: Callable[[int], complex], label: str = "",
                       first_index: int = 1) -> SequenceRule:
    return SequenceRule(eval=fn, label=label, first_index=first_index)


def rule_from_values(values, label: str = "", first_index: int = 1,
                     tail: SingleTailEnvelope | None = None) -> SequenceRule:
    """Array-backed sequence; indices beyond the array evaluate to 0."""
    arr = np.asarray(values, dtype=complex)

    def ev(k: int) -> complex:
        i = k - first_index
        return complex(arr[i]) if 0 <= i < arr.size else 0j

    def aev(ks: np.ndarray) -> np.ndarray:
        idx = ks - first_index
        ok = (idx >= 0) & (idx < arr.size)
        out = np.zeros(ks.shape, dtype=complex)
        out[ok] = arr[idx[ok]]
        return out

    return SequenceRule(eval=ev, label=label, first_index=first_index,
                        array_eval=aev, real=bool(np.isrealobj(values)), tail=tail)


def product_rule(u: SequenceRule, v: SequenceRule, label: str = "",
                 tail: TailEnvelope | None = None) -> DoubleSequenceRule:
    """Double rule ``c[j,k] = u[j] * v[k]``."""

    def aev(js: np.ndarray, ks: np.ndarray) -> np.ndarray:
        return u.values(js) * v.values(ks)

    return DoubleSequenceRule(
        eval=lambda j, k: u.eval(j) * v.eval(k),
        label=label or f"{u.label}*{v.label}",
        array_eval=aev,
        factors=(u, v),
        real=u.real and v.real,
        tail=tail,
    )


def additive_rule(u: SequenceRule, v: SequenceRule, label: str = "") -> DoubleSequenceRule:
    """Double rule ``c[j,k] = u[j] + v[k]``; its mixed differences vanish."""

    def aev(js: np.ndarray, ks: np.ndarray) -> np.ndarray:
        return u.values(js) + v.values(ks)

    return DoubleSequenceRule(
        eval=lambda j, k: u.eval(j) + v.eval(k),
        label=label or f"{u.label}+{v.label}",
        array_eval=aev,
        real=u.real and v.real,
    )


def table_rule(table, label: str = "", first_index: int = 1) -> DoubleSequenceRule:
    """Double rule backed by a 2-D array; zero outside the support box."""
    arr = np.asarray(table, dtype=complex)
    if arr.ndim != 2:
        raise ValueError("table must be two-dimensional")
    rows, cols = arr.shape

    def ev(j: int, k: int) -> complex:
        a, b = j - first_index, k - first_index
        return complex(arr[a, b]) if 0 <= a < rows and 0 <= b < cols else 0j

    def aev(js: np.ndarray, ks: np.ndarray) -> np.ndarray:
        jb, kb = np.broadcast_arrays(js - first_index, ks - first_index)
        ok = (jb >= 0) & (jb < rows) & (kb >= 0) & (kb < cols)
        out = np.zeros(jb.shape, dtype=complex)
        out[ok] = arr[jb[ok], kb[ok]]
        return out

    return DoubleSequenceRule(
        eval=ev, label=label, array_eval=aev,
        support=(first_index + rows - 1, first_index + cols - 1),
        real=bool(np.isrealobj(table)),
    )


def geometric_rule(ratio: float = 0.5) -> SequenceRule:
    """``a_k = ratio**k`` with a geometric tail envelope."""
    if not 0 < ratio < 1:
        raise ValueError("ratio must be in (0, 1)")
    return SequenceRule(
        eval=lambda k: complex(ratio**k),
        label=f"geometric({ratio})",
        array_eval=lambda ks: (float(ratio) ** ks).astype(complex),
        real=True,
        tail=SingleTailEnvelope(amp=1.0, kind="geometric", a=ratio),
    )


def power_rule(exponent: float = 2.0) -> SequenceRule:
    """``a_k = k**-exponent`` with a polynomial tail envelope."""
    if exponent <= 0:
        raise ValueError("exponent must be positive")
    return SequenceRule(
        eval=lambda k: complex(float(k) ** -exponent),
        label=f"power({exponent})",
        array_eval=lambda ks: (ks.astype(float) ** -exponent).astype(complex),
        real=True,
        tail=SingleTailEnvelope(amp=1.0, kind="polynomial", a=exponent),
    )


def constant_rule(value: complex = 0j) -> SequenceRule:
    return SequenceRule(
        eval=lambda k: complex(value),
        label=f"const({value})",
        array_eval=lambda ks: np.full(ks.shape, complex(value)),
        real=(complex(value).imag == 0.0),
    )


def geometric_double_rule(ratio: float = 0.5) -> DoubleSequenceRule:
    """``c[j,k] = ratio**(j+k)`` as a product rule with a tight envelope."""
    g = geometric_rule(ratio)
    return product_rule(
        g, g, label=f"geometric2({ratio})",
        tail=TailEnvelope(amp=1.0, kind="geometric", a_j=ratio, a_k=ratio),
    )


def power_double_rule(exponent: float = 2.0) -> DoubleSequenceRule:
    """``c[j,k] = (j*k)**-exponent`` as a product rule."""
    g = power_rule(exponent)
    return product_rule(
        g, g, label=f"power2({exponent})",
        tail=TailEnvelope(amp=1.0, kind="polynomial", a_j=exponent, a_k=exponent),
    )


def zero_double_rule() -> DoubleSequenceRule:
    z = constant_rule(0j)
    return product_rule(z, z, label="zero")


def transpose_rule(c: DoubleSequenceRule) -> DoubleSequenceRule:
    """Rule with the roles of the two indices swapped."""
    return DoubleSequenceRule(
        eval=lambda j, k: c.eval(k, j),
        label=f"T({c.label})",
        array_eval=(None if c.array_eval is None
                    else lambda js, ks: c.array_eval(ks, js)),
        factors=(None if c.factors is None else (c.factors[1], c.factors[0])),
        support=(None if c.support is None else (c.support[1], c.support[0])),
        real=c.real,
        tail=(None if c.tail is None
              else TailEnvelope(c.tail.amp, c.tail.kind, c.tail.a_k, c.tail.a_j)),
    )
