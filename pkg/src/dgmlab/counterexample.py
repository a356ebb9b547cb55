"""The sharpness example: a product double sequence that separates the
p-norm variation classes and makes the double sine series diverge at
(2*pi/3, 2*pi/3).

The single sequence is defined by residue of n:

    a_n = 3 / (n ln(n+1))                                   n = 1 (mod 3)
    a_n = 1 / (n ln(n+1))                                   n = 2 (mod 3)
    a_n = 1 / (n ln(n+1))                                   n = 3 (mod 6)
    a_n = 1 / ((n-3) ln(n-2)) + 1 / (n^(1+1/p) ln(n+1))     n = 0 (mod 6)

with construction exponent p > 1, and c_mn = a_m * a_n.  The fourth case
first occurs at n = 6, where n - 3 = 3 and ln(n - 2) > 0, so no extra
domain guard is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .membership import BoundFamily, BoundSpec, rhs_col_bound
from .sequences import (
    DoubleSequenceRule,
    SequenceRule,
    SingleTailEnvelope,
    TailEnvelope,
    product_rule,
)

SIN_2PI3 = math.sin(2.0 * math.pi / 3.0)  # = sqrt(3)/2


def _validate_p(p: float) -> float:
    if not p > 1.0:
        raise ValueError("construction exponent p must exceed 1")
    return float(p)


def single_term(n: int, p: float) -> float:
    """a_n of the sharpness sequence; positive for every n >= 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _validate_p(p)
    if n % 3 == 1:
        return 3.0 / (n * math.log(n + 1))
    if n % 6 == 0:
        return 1.0 / ((n - 3) * math.log(n - 2)) + 1.0 / (n ** (1.0 + 1.0 / p) * math.log(n + 1))
    return 1.0 / (n * math.log(n + 1))


def single_values(ns, p: float) -> np.ndarray:
    """Vectorized ``a_n`` over an integer array."""
    _validate_p(p)
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size and ns.min() < 1:
        raise ValueError("indices must be >= 1")
    nf = ns.astype(float)
    denom = nf * np.log(nf + 1.0)
    out = np.where(ns % 3 == 1, 3.0 / denom, 1.0 / denom)
    six = ns % 6 == 0
    if np.any(six):
        nf6 = nf[six]
        out[six] = 1.0 / ((nf6 - 3.0) * np.log(nf6 - 2.0)) + 1.0 / (
            nf6 ** (1.0 + 1.0 / p) * np.log(nf6 + 1.0)
        )
    return out


def single_rule(p: float) -> SequenceRule:
    _validate_p(p)
    # n * a_n is bounded by the n = 1 value, giving a crude 1/n envelope;
    # it is not summable, so tail checks on this rule stay inconclusive.
    amp = 3.0 / math.log(2.0)
    return SequenceRule(
        eval=lambda n: complex(single_term(n, p)),
        label=f"proposition(p={p})",
        array_eval=lambda ns: single_values(ns, p).astype(complex),
        real=True,
        tail=SingleTailEnvelope(amp=amp, kind="polynomial", a=1.0),
    )


def double_rule(p: float) -> DoubleSequenceRule:
    """c_mn = a_m * a_n as a product rule."""
    s = single_rule(p)
    amp = (3.0 / math.log(2.0)) ** 2
    return product_rule(
        s, s, label=f"proposition2(p={p})",
        tail=TailEnvelope(amp=amp, kind="polynomial", a_j=1.0, a_k=1.0),
    )


def double_term(m: int, n: int, p: float) -> float:
    return single_term(m, p) * single_term(n, p)


@dataclass(frozen=True)
class DivergenceCertificate:
    """Partial sums at x0 = 2*pi/3 against a divergent lower-bound sequence.

    ``partial_sums[N]`` is ``S_N = sum_{k=1}^{6N+5} a_k sin(k x0)``,
    computed through the exact mod-6 grouping
    ``S_N = sin(x0) * sum_{k=0}^{N} [(a_{6k+1} - a_{6k+2}) + (a_{6k+4} - a_{6k+5})]``;
    ``lower_bounds[N]`` is ``L_N = 4 sin(x0) * sum_{k=0}^{N} 1/((6k+5) ln(6k+5))``,
    which increases without bound.  ``verified`` asserts S_N >= L_N for
    every N in range.
    """

    n_values: np.ndarray
    partial_sums: np.ndarray
    lower_bounds: np.ndarray
    verified: bool

    def __len__(self) -> int:
        return self.n_values.size


def divergence_certificate(n_max: int, p: float) -> DivergenceCertificate:
    """Certificate rows for N = 0..n_max."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    _validate_p(p)
    ks = np.arange(0, n_max + 1, dtype=np.int64)
    bracket = (single_values(6 * ks + 1, p) - single_values(6 * ks + 2, p)
               + single_values(6 * ks + 4, p) - single_values(6 * ks + 5, p))
    s = SIN_2PI3 * np.cumsum(bracket)
    lower = 4.0 * SIN_2PI3 * np.cumsum(1.0 / ((6.0 * ks + 5.0) * np.log(6.0 * ks + 5.0)))
    verified = bool(np.all(s >= lower))
    return DivergenceCertificate(ks, s, lower, verified)


def violation_ratio(m: int, n: int, p: float, spec: BoundSpec | None = None,
                    norm_exponent: float = 1.0, restricted: bool = False) -> float:
    """Column-inequality ratio for c_mn = a_m a_n at block (m, n).

    With ``norm_exponent = 1`` the ratio grows without bound, witnessing
    that the sequence leaves the p = 1 class; with ``norm_exponent = p``
    it stays bounded.  ``restricted=True`` keeps only the k = 3 (mod 6)
    differences, the part carrying the ``n^(-1/p)`` term; its log-log
    slope reaches the asymptotic exponent ``1 - 1/p`` already at desk
    horizons, whereas the full sum approaches it only slowly from below.
    """
    if m < 1 or n < 1:
        raise ValueError("block indices must be >= 1")
    _validate_p(p)
    if norm_exponent <= 0:
        raise ValueError("norm exponent must be positive")
    if spec is None:
        spec = BoundSpec(BoundFamily.MAX_WINDOW, lam=2)
    c = double_rule(p)
    ks = np.arange(n, 2 * n, dtype=np.int64)
    diffs = np.abs(single_values(ks, p) - single_values(ks + 3, p)) * single_term(m, p)
    if restricted:
        diffs = diffs[ks % 6 == 3]
    lhs = float(np.sum(diffs**norm_exponent) ** (1.0 / norm_exponent))
    rhs = rhs_col_bound(c, m, n, spec)
    if rhs.value <= 0:
        return math.inf if lhs > 0 else 0.0
    return lhs / rhs.value
