"""Empirical validation: histograms, KS and chi-square goodness of fit,
moment checks, and hitting-time statistics for the recurrence dichotomy.

The KS distance against a closed-form density is the primary pass/fail
criterion.  Its threshold max(1.36/sqrt(n), 0.03) combines the asymptotic
5 percent null quantile with an allowance for the order-one weak bias of
the time discretization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, InfiniteMomentError
from .integrators import PathEnsemble
from .measures import DensitySpec, cdf_values

KS_BIAS_ALLOWANCE = 0.03


@dataclass(frozen=True)
class Histogram:
    """Plain counts-in-bins summary; edges strictly increasing."""

    edges: np.ndarray
    counts: np.ndarray
    n_total: int

    def __post_init__(self):
        if np.any(np.diff(self.edges) <= 0):
            raise DomainError("histogram edges must be strictly increasing")
        if int(self.counts.sum()) != self.n_total:
            raise DomainError("histogram counts do not add up to n_total")

    def density(self) -> np.ndarray:
        """Bar heights normalized to unit area."""
        widths = np.diff(self.edges)
        return self.counts / (self.n_total * widths)


@dataclass(frozen=True)
class GofReport:
    ks_statistic: float
    ks_threshold: float
    chi2_statistic: float
    chi2_dof: int
    passed: bool


def freedman_diaconis_bins(samples: np.ndarray) -> int:
    """Freedman-Diaconis rule, clipped to [8, 256]."""
    q75, q25 = np.percentile(samples, [75, 25])
    iqr = q75 - q25
    if iqr <= 0:
        return 8
    width = 2.0 * iqr / len(samples) ** (1.0 / 3.0)
    n = int(np.ceil((samples.max() - samples.min()) / width)) if width > 0 else 8
    return min(256, max(8, n))


def histogram(samples, bins: int | None = None) -> Histogram:
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise DomainError("cannot histogram an empty sample")
    if bins is None:
        bins = freedman_diaconis_bins(samples)
    counts, edges = np.histogram(samples, bins=bins)
    return Histogram(edges=edges, counts=counts, n_total=samples.size)


def ks_distance(sorted_samples: np.ndarray, cdf_at_samples: np.ndarray) -> float:
    """sup_x |F_n(x) - F(x)| evaluated at the sample points."""
    n = sorted_samples.size
    grid_hi = np.arange(1, n + 1) / n
    grid_lo = np.arange(0, n) / n
    return float(max(np.max(grid_hi - cdf_at_samples), np.max(cdf_at_samples - grid_lo)))


def ks_two_sample(x: np.ndarray, y: np.ndarray) -> float:
    """Two-sample KS distance between empirical CDFs."""
    x = np.sort(np.asarray(x, dtype=float))
    y = np.sort(np.asarray(y, dtype=float))
    pooled = np.concatenate([x, y])
    fx = np.searchsorted(x, pooled, side="right") / x.size
    fy = np.searchsorted(y, pooled, side="right") / y.size
    return float(np.max(np.abs(fx - fy)))


def ks_against(samples, spec: DensitySpec, threshold: float | None = None) -> GofReport:
    """One-sample KS test of samples against a closed-form invariant density.

    Samples outside the support are treated as conclusive evidence against
    the law (D = 1).  A chi-square statistic over Freedman-Diaconis bins is
    reported informationally; the pass flag uses KS only.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.size < 100:
        raise DomainError(f"need at least 100 samples, got {samples.size}")
    n = samples.size
    if threshold is None:
        threshold = max(1.36 / math.sqrt(n), KS_BIAS_ALLOWANCE)
    if not np.all(spec.contains(samples)):
        return GofReport(ks_statistic=1.0, ks_threshold=threshold,
                         chi2_statistic=math.inf, chi2_dof=0, passed=False)
    xs = np.sort(samples)
    F = cdf_values(spec, xs)
    D = ks_distance(xs, F)

    hist = histogram(xs)
    edge_cdf = cdf_values(spec, hist.edges)
    expected = n * np.diff(edge_cdf)
    mask = expected > 1e-12
    chi2 = float(np.sum((hist.counts[mask] - expected[mask]) ** 2 / expected[mask]))
    dof = int(mask.sum()) - 1
    return GofReport(ks_statistic=D, ks_threshold=threshold,
                     chi2_statistic=chi2, chi2_dof=dof, passed=D <= threshold)


def hitting_fraction(ensemble: PathEnsemble, a: float) -> float:
    """Fraction of paths whose radial record dips to or below level a."""
    if a <= 0:
        raise DomainError(f"level must be positive, got {a}")
    if ensemble.record != "full":
        raise DomainError("hitting_fraction needs a full-record ensemble")
    if ensemble.s is None or ensemble.s.ndim != 2:
        raise DomainError("hitting_fraction needs radial path records")
    return float(np.mean(ensemble.s.min(axis=1) <= a))


def _moment_is_finite(spec: DensitySpec, k: int) -> bool:
    g, d = spec.params.gamma, spec.params.d
    if spec.kind == "energy_p0":
        return k < g - d + 1
    if spec.kind == "momentum_component":
        return k < g - 2
    return True  # compact support or exponential decay


def theoretical_moment(spec: DensitySpec, k: int) -> float:
    """k-th moment of the density by quadrature; raises when divergent."""
    if k < 0:
        raise DomainError(f"moment order must be >= 0, got {k}")
    if not _moment_is_finite(spec, k):
        raise InfiniteMomentError(
            f"moment of order {k} diverges for {spec.kind} with "
            f"(d, gamma) = ({spec.params.d}, {spec.params.gamma})")
    lo, hi = spec.support
    lo = lo if math.isfinite(lo) else -np.inf
    hi = hi if math.isfinite(hi) else np.inf
    val, _ = integrate.quad(lambda x: x ** k * spec.pdf(x), lo, hi, limit=200)
    return val


def moment_check(samples, spec: DensitySpec, k: int):
    """Compare the empirical k-th moment against quadrature.

    Returns (empirical, theoretical, z_score) with the z-score based on the
    empirical standard error of x^k.
    """
    samples = np.asarray(samples, dtype=float)
    theo = theoretical_moment(spec, k)
    powers = samples ** k
    emp = float(np.mean(powers))
    se = float(np.std(powers, ddof=1)) / math.sqrt(samples.size)
    z = (emp - theo) / se if se > 0 else math.inf
    return emp, theo, z
