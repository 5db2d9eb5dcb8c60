"""Monte Carlo estimators of the drift coefficient with 95% intervals.

Standard deviations are the population form ``sqrt(m2 - m1**2)`` and all
means are compensated sums (``math.fsum``), so pooled results do not depend
on the order in which samples were produced.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientSamples

Z95 = 1.96


@dataclass(frozen=True)
class EstimateWithCI:
    value: float
    sample_std: float
    n: int
    ci_low: float
    ci_high: float

    @property
    def half_width(self) -> float:
        return 0.5 * (self.ci_high - self.ci_low)

    def contains(self, x: float) -> bool:
        return self.ci_low <= x <= self.ci_high

    def overlaps(self, other: "EstimateWithCI") -> bool:
        return self.ci_low <= other.ci_high and other.ci_low <= self.ci_high

    def __str__(self) -> str:
        return f"{self.value:.4g} [{self.ci_low:.4g}, {self.ci_high:.4g}] (n={self.n})"


def _mean(a) -> float:
    return math.fsum(a) / len(a)


def _moments(a: np.ndarray) -> tuple[float, float]:
    m1 = _mean(a)
    m2 = _mean(a * a)
    return m1, math.sqrt(max(m2 - m1 * m1, 0.0))


def _as_array(samples, need: int = 2) -> np.ndarray:
    a = np.asarray(samples, dtype=float).ravel()
    if a.size < need:
        raise InsufficientSamples(f"need at least {need} samples, got {a.size}")
    return a


def ci_95(samples) -> EstimateWithCI:
    """Mean with the normal 95% interval ``mean +- 1.96 std / sqrt(n)``."""
    a = _as_array(samples)
    m, s = _moments(a)
    h = Z95 * s / math.sqrt(a.size)
    return EstimateWithCI(m, s, a.size, m - h, m + h)


def _path_integral(item) -> float:
    x = getattr(item, "x", None)
    return float(x[-1]) if x is not None else float(item)


def path_integrals(trajectories) -> np.ndarray:
    """Integral of y over each path, from trajectories or the integrals themselves."""
    return np.array([_path_integral(t) for t in trajectories], dtype=float)


def direct_variance_estimator(trajectories, T: float) -> EstimateWithCI:
    """``(1/T) E (int_0^T y dt)^2`` from independent paths of horizon ``T``.

    The spread is the fourth-moment form ``sqrt(E X^4 / T^2 - value^2)``.
    """
    X = _as_array(path_integrals(trajectories))
    sq = X * X / T
    value = _mean(sq)
    second = _mean(sq * sq)
    s = math.sqrt(max(second - value * value, 0.0))
    h = Z95 * s / math.sqrt(X.size)
    return EstimateWithCI(value, s, X.size, value - h, value + h)


def mean_zero_check(trajectories) -> EstimateWithCI:
    """Mean displacement with its 95% interval; the symmetric dynamics predict 0."""
    return ci_95(_as_array(path_integrals(trajectories)))


def cycle_drift_estimator(cycles) -> tuple[EstimateWithCI, EstimateWithCI]:
    """Ratio of the mean squared cycle integral to the mean cycle duration.

    Returns ``(ratio, tau)``.  The ratio interval takes the lower numerator
    bound over the upper duration bound and vice versa.  ``ratio.sample_std``
    is the linearized (delta-method) spread of the ratio.
    """
    if len(cycles) < 2:
        raise InsufficientSamples(f"need at least 2 cycles, got {len(cycles)}")
    sq = np.array([c.full_integral for c in cycles], dtype=float) ** 2
    dur = np.array([c.duration for c in cycles], dtype=float)
    n = len(cycles)
    d_mean, d_std = _moments(sq)
    tau = ci_95(dur)
    ratio = d_mean / tau.value
    hd = Z95 * d_std / math.sqrt(n)
    ht = Z95 * tau.sample_std / math.sqrt(n)
    lo = (d_mean - hd) / (tau.value + ht)
    hi = (d_mean + hd) / (tau.value - ht) if tau.value > ht else math.inf
    lin = (sq - ratio * dur) / tau.value
    _, lin_std = _moments(lin)
    return EstimateWithCI(ratio, lin_std, n, lo, hi), tau


def _square_interval(lo: float, hi: float) -> tuple[float, float]:
    if lo <= 0.0 <= hi:
        return 0.0, max(lo * lo, hi * hi)
    a, b = lo * lo, hi * hi
    return min(a, b), max(a, b)


def _divide_interval(nlo, nhi, dlo, dhi):
    if dlo <= 0.0:
        return -math.inf, math.inf
    lo = nlo / (dhi if nlo >= 0 else dlo)
    hi = nhi / (dlo if nhi >= 0 else dhi)
    return lo, hi


def half_cycle_estimator(cycles) -> EstimateWithCI:
    """Drift from first half-cycles: ``(E a^2 - (E a)^2) / E theta``.

    ``a`` is the velocity integral from the cycle start to its mid point,
    sign-aligned to a start on the upper boundary, and ``theta`` the
    half-cycle duration.  The interval combines the three component
    intervals by worst-case interval arithmetic.
    """
    if len(cycles) < 2:
        raise InsufficientSamples(f"need at least 2 half-cycles, got {len(cycles)}")
    a = np.array([c.s * c.half_integral for c in cycles], dtype=float)
    theta = np.array([c.half_duration for c in cycles], dtype=float)
    first = ci_95(a)
    second = ci_95(a * a)
    dur = ci_95(theta)
    value = (second.value - first.value**2) / dur.value
    sq_lo, sq_hi = _square_interval(first.ci_low, first.ci_high)
    lo, hi = _divide_interval(second.ci_low - sq_hi, second.ci_high - sq_lo, dur.ci_low, dur.ci_high)
    return EstimateWithCI(value, math.nan, len(cycles), lo, hi)


def half_integral_means(cycles) -> tuple[EstimateWithCI, EstimateWithCI]:
    """Mean half-cycle integral over upper-start and lower-start cycles separately."""
    plus = [c.half_integral for c in cycles if c.s > 0]
    minus = [c.half_integral for c in cycles if c.s < 0]
    return ci_95(plus), ci_95(minus)


def relative_error_pct(lhs: float, rhs: float) -> float:
    return 100.0 * abs(lhs - rhs) / abs(rhs)


@dataclass(frozen=True)
class DriftReport:
    """One parameter set: direct, cycle-ratio and half-cycle estimates."""

    c0: float
    k: float
    Y: float
    T: float
    dt: float
    MC: int
    lhs: EstimateWithCI
    rhs: EstimateWithCI
    simplified: EstimateWithCI
    tau_mean: EstimateWithCI

    @property
    def relative_error(self) -> float:
        return relative_error_pct(self.lhs.value, self.rhs.value)

    def csv_row(self) -> list[str]:
        return [
            repr(self.Y), repr(self.c0), repr(self.k), repr(self.T), repr(self.dt), str(self.MC),
            repr(self.lhs.value), repr(self.lhs.half_width),
            repr(self.rhs.value), repr(self.rhs.half_width),
            repr(self.tau_mean.value), repr(self.tau_mean.half_width),
            repr(self.simplified.value), repr(self.relative_error),
        ]


REPORT_COLUMNS = ("Y", "c0", "k", "T", "dt", "MC", "lhs", "lhs_ci", "rhs", "rhs_ci",
                  "tau_mean", "tau_ci", "simplified", "rel_err_pct")
