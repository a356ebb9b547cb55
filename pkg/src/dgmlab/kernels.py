"""Dirichlet-type kernels, step-r summation by parts, and half-band bounds.

The kernels are

    cos-kernel(k, r, x) = cos((k + r/2) x) / (2 sin(r x / 2))
    sin-kernel(k, r, x) = sin((k + r/2) x) / (2 sin(r x / 2))

with singularities at x = 2*l*pi/r.  On the half-bands between
consecutive singular points, |sin(rx/2)| admits the linear lower bound
(Jordan's inequality) that turns the summation-by-parts identity into a
computable envelope for sine-series partial sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sequences import SequenceRule, step_diff_values

TWO_PI = 2.0 * math.pi

# |sin(rx/2)| at or below this is treated as singular
SIN_GUARD = 1e-12

# distance from a half-band endpoint (in band units rx/pi) treated as "on it"
EDGE_GUARD = 1e-12


class SingularAbscissa(ValueError):
    """x is (numerically) a multiple of 2*pi/r, where the kernels blow up."""

    def __init__(self, x: float, r: int, nearest: float):
        self.x = x
        self.r = r
        self.nearest = nearest
        super().__init__(
            f"x={x!r} is singular for step r={r}; nearest singular abscissa {nearest!r}"
        )


def nearest_singularity(x: float, r: int) -> float:
    l = round(abs(r) * x / TWO_PI)
    return TWO_PI * l / abs(r)


def _half_denominator(r: int, x: float) -> float:
    """sin(r x / 2), raising on the excluded abscissas 2*l*pi/r."""
    s = math.sin(0.5 * r * x)
    if abs(s) <= SIN_GUARD:
        raise SingularAbscissa(x, abs(r), nearest_singularity(x, r))
    return s


def dirichlet_cos(k: int, r: int, x: float) -> float:
    """Cosine-numerator Dirichlet-type kernel; r may be negative."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return math.cos((k + 0.5 * r) * x) / (2.0 * _half_denominator(r, x))


def dirichlet_sin(k: int, r: int, x: float) -> float:
    """Sine-numerator Dirichlet-type kernel; r may be negative."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return math.sin((k + 0.5 * r) * x) / (2.0 * _half_denominator(r, x))


def band_index(x: float, r: int) -> tuple[int, int]:
    """Band l = floor(rx / 2pi) and half (0: first, 1: second) containing x.

    Raises ValueError when x sits on a half-band endpoint.
    """
    if r < 1:
        raise ValueError("step r must be >= 1")
    t = r * x / math.pi
    l = math.floor(t / 2.0)
    u = t - 2 * l
    if min(u, abs(u - 1.0), 2.0 - u) <= EDGE_GUARD:
        raise ValueError(f"x={x!r} lies on a half-band endpoint for r={r}")
    return l, (0 if u < 1.0 else 1)


def kernel_band_bound(x: float, r: int, l: int) -> float:
    """Envelope for |cos-kernel(k, +-r, x)| on the half-band containing x.

    First half-band (2l*pi/r, (2l+1)*pi/r): 1 / (2 (rx/pi - 2l)).
    Second half-band: 1 / (2 (2(l+1) - rx/pi)).  Valid for every k >= 0
    because |sin(rx/2)| >= (2/pi) * distance-to-band-edge there.
    """
    got_l, half = band_index(x, r)
    if got_l != l:
        raise ValueError(f"x={x!r} lies in band {got_l}, not the requested band {l}")
    u = r * x / math.pi - 2 * l
    return 1.0 / (2.0 * u) if half == 0 else 1.0 / (2.0 * (2.0 - u))


@dataclass(frozen=True)
class SbpDecomposition:
    """The three terms of the step-r summation-by-parts identity.

    ``total`` always equals ``main_term + upper_boundary + lower_boundary``
    and must reproduce ``sum_{k=n}^{m} a_k sin(kx)`` exactly (to roundoff).
    """

    main_term: complex
    upper_boundary: complex
    lower_boundary: complex

    @property
    def total(self) -> complex:
        return self.main_term + self.upper_boundary + self.lower_boundary


def sbp_decompose(seq: SequenceRule, n: int, m: int, r: int, x: float) -> SbpDecomposition:
    """Summation by parts with step r for ``sum_{k=n}^{m} a_k sin(kx)``.

    main term:      -sum_{k=n}^{m}     (a_k - a_{k+r}) cos-kernel(k,  r, x)
    upper boundary: +sum_{k=m+1}^{m+r} a_k             cos-kernel(k, -r, x)
    lower boundary: -sum_{k=n}^{n+r-1} a_k             cos-kernel(k, -r, x)
    """
    if m < n:
        raise ValueError("need m >= n")
    if r < 1:
        raise ValueError("step r must be >= 1")
    s = _half_denominator(r, x)

    ks = np.arange(n, m + 1)
    # exactly rounded accumulation and exact-angle kernels: the identity
    # balances kernel-sized cancellations that plain float products and
    # pairwise summation only resolve to ~1e-12 at desk lengths
    kern = _cos_exact(ks + 0.5 * r, x) / (2.0 * s)
    main = -_exact_sum(step_diff_values(seq, ks, r) * kern)

    # kernel at step -r: cos((k - r/2) x) / (2 sin(-rx/2)) = -cos((k - r/2) x) / (2 s)
    up = np.arange(m + 1, m + r + 1)
    upper = _exact_sum(seq.values(up) * (-_cos_exact(up - 0.5 * r, x) / (2.0 * s)))
    low = np.arange(n, n + r)
    lower = -_exact_sum(seq.values(low) * (-_cos_exact(low - 0.5 * r, x) / (2.0 * s)))
    return SbpDecomposition(main, upper, lower)


def _exact_sum(terms: np.ndarray) -> complex:
    return complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist()))


_SPLIT = 134217729.0  # 2**27 + 1, Veltkamp splitting constant


def _cos_exact(a: np.ndarray, b: float) -> np.ndarray:
    """cos(a * b) evaluated at the exact real product.

    Dekker two-product recovers the rounding residual of a * b; a
    first-order angle correction then removes it (the residual is ~1e-14
    radians, so the second-order term is far below one ulp).
    """
    a = np.asarray(a, dtype=float)
    prod = a * b
    a1 = a * _SPLIT
    ah = a1 - (a1 - a)
    al = a - ah
    b1 = b * _SPLIT
    bh = b1 - (b1 - b)
    bl = b - bh
    err = ((ah * bh - prod) + ah * bl + al * bh) + al * bl
    return np.cos(prod) - err * np.sin(prod)


def direct_sine_sum(seq: SequenceRule, n: int, m: int, x: float) -> complex:
    """Direct evaluation of ``sum_{k=n}^{m} a_k sin(kx)``.

    The independent oracle for the decomposition; switches to exactly
    rounded (compensated) accumulation for long sums.
    """
    ks = np.arange(n, m + 1)
    terms = seq.values(ks) * np.sin(ks * x)
    if terms.size <= 100_000:
        return complex(np.sum(terms))
    re = math.fsum(terms.real.tolist())
    im = math.fsum(terms.imag.tolist())
    return complex(re, im)


@dataclass(frozen=True)
class PartialSumBound:
    """Kernel-based envelope for |sum_{k=n}^{N} a_k sin(kx)|.

    ``value = prefactor * term_sum`` where ``prefactor`` is the half-band
    kernel bound.  ``stated_prefactor`` is the looser constant that the
    bound is usually quoted with (identical on first half-bands, twice the
    kernel bound on second half-bands); both are recorded, the tighter one
    is used.
    """

    value: float
    prefactor: float
    stated_prefactor: float
    term_sum: float
    band: int
    half: int


def partial_sum_bound(seq: SequenceRule, n: int, N: int, r: int, x: float) -> PartialSumBound:
    """Evaluate the summation-by-parts envelope on x's half-band.

    term_sum = sum_{k=n}^{N} |a_k - a_{k+r}| + sum_{k=N+1}^{N+r} |a_k|
               + sum_{k=n}^{n+r-1} |a_k|.
    """
    if N < n:
        raise ValueError("need N >= n")
    l, half = band_index(x, r)
    pref = kernel_band_bound(x, r, l)
    ks = np.arange(n, N + 1)
    term_sum = float(
        np.sum(np.abs(step_diff_values(seq, ks, r)))
        + np.sum(np.abs(seq.values(np.arange(N + 1, N + r + 1))))
        + np.sum(np.abs(seq.values(np.arange(n, n + r))))
    )
    if half == 0:
        stated = math.pi / (2.0 * (r * x - 2.0 * math.pi * l))
    else:
        stated = math.pi / (2.0 * (l + 1) * math.pi - r * x)
    return PartialSumBound(pref * term_sum, pref, stated, term_sum, l, half)


@dataclass(frozen=True)
class HalfBandSweep:
    band: int
    half: int
    points: int
    k_max: int
    max_ratio: float
    violations: int


def half_bands(r: int, upper: float = math.pi) -> list[tuple[int, int, float, float]]:
    """(band, half, lo, hi) for every half-band inside (0, upper]."""
    out = []
    i = 0
    while i * math.pi / r < upper - 1e-15:
        lo = i * math.pi / r
        hi = min((i + 1) * math.pi / r, upper)
        out.append((i // 2, i % 2, lo, hi))
        i += 1
    return out


def kernel_bound_sweep(r: int, points: int, k_max: int,
                       upper: float = math.pi) -> list[HalfBandSweep]:
    """Grid-verify |cos-kernel(k, +-r, x)| <= kernel_band_bound on each half-band.

    ``ratio`` is kernel magnitude over the bound; a ratio above 1 + 1e-12
    counts as a violation (there should be none).
    """
    if points < 2 or k_max < 0:
        raise ValueError("need points >= 2 and k_max >= 0")
    reports = []
    ks = np.arange(0, k_max + 1)[:, None]
    for band, half, lo, hi in half_bands(r, upper):
        width = hi - lo
        xs = np.linspace(lo + width / (points + 1), hi - width / (points + 1), points)
        u = r * xs / math.pi - 2 * band
        bound = np.where(u < 1.0, 1.0 / (2.0 * u), 1.0 / (2.0 * (2.0 - u)))
        denom = 2.0 * np.abs(np.sin(0.5 * r * xs))
        worst = 0.0
        bad = 0
        for sign in (1, -1):
            mag = np.abs(np.cos((ks + 0.5 * sign * r) * xs[None, :])) / denom[None, :]
            ratio = mag / bound[None, :]
            worst = max(worst, float(np.max(ratio)))
            bad += int(np.count_nonzero(ratio > 1.0 + 1e-12))
        reports.append(HalfBandSweep(band, half, points, k_max, worst, bad))
    return reports
