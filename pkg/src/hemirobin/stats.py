"""
Statistics over Robin clusters and spectra: the limit law of the RN gaps
within a cluster, cluster means, the lambda^(1/4) gap constants and the
nearest-neighbour spacing distribution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .errors import DomainError
from .spectrum import Cluster, Spectrum

__all__ = [
    "GapSample",
    "SpacingHistogram",
    "GapBoundConstants",
    "szego_cdf",
    "szego_density",
    "cluster_gap_mean",
    "szego_ks_distance",
    "gap_bound_constants",
    "spacing_distribution",
    "large_gap_count",
    "tail_constant",
]

KS_MIN_ELL = 50


def szego_density(y, sigma: float):
    """16 sigma^2 / (pi^2 y^3 sqrt(1 - (4 sigma/(pi y))^2)) on (4 sigma/pi, inf)."""
    y = np.asarray(y, dtype=float)
    a = 4.0 * sigma / math.pi
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(y > a, a * a / (y**3 * np.sqrt(1.0 - (a / y) ** 2)), 0.0)
    return out if out.ndim else float(out)


def szego_cdf(y, sigma: float):
    """Limit CDF of the RN gaps in a cluster: sqrt(1 - (4 sigma/(pi y))^2) for y > 4 sigma/pi."""
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    y = np.asarray(y, dtype=float)
    a = 4.0 * sigma / math.pi
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.where(y > a, np.sqrt(np.clip(1.0 - (a / y) ** 2, 0.0, 1.0)), 0.0)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class GapSample:
    """RN gaps of one cluster together with their orders."""

    ell: int
    sigma: float
    m: np.ndarray
    gaps: np.ndarray

    @classmethod
    def from_cluster(cls, cluster: Cluster) -> "GapSample":
        return cls(cluster.ell, cluster.sigma, cluster.m, cluster.gaps)


def cluster_gap_mean(cluster: Cluster) -> float:
    if cluster.size == 0:
        raise DomainError("empty cluster")
    return float(np.mean(cluster.gaps))


def szego_ks_distance(sample: GapSample) -> float:
    """Kolmogorov-Smirnov distance between the gaps with m < ell and the limit law.

    The m = ell gap grows like sqrt(ell) and is left out.
    """
    if sample.ell < KS_MIN_ELL:
        raise DomainError(f"insufficient sample: need ell >= {KS_MIN_ELL}, got {sample.ell}")
    gaps = np.asarray(sample.gaps)[np.asarray(sample.m) < sample.ell]
    return float(sps.kstest(gaps, lambda y: szego_cdf(y, sample.sigma)).statistic)


@dataclass(frozen=True)
class GapBoundConstants:
    """Empirical constants in d_n <= C lambda_n(0)^(1/4) sigma.

    ``C_emp`` is the maximum over all n >= 1. ``c_emp`` is the maximum over
    the m = ell records, the family that attains the growth rate;
    ``ell_ratio`` lists that family's ratios for ell = 1..ell_max.
    """

    C_emp: float
    c_emp: float
    ell_ratio: np.ndarray


def gap_bound_constants(robin: Spectrum, neumann: Spectrum) -> GapBoundConstants:
    if robin.ell_max != neumann.ell_max or len(robin) != len(neumann):
        raise DomainError("spectra must cover the same clusters")
    if robin.ell_max < 10:
        raise DomainError("need ell_max >= 10")
    if neumann.sigma != 0 or not robin.sigma > 0:
        raise DomainError("expected a Robin spectrum and the Neumann spectrum")
    if not (np.array_equal(robin.ell, neumann.ell) and np.array_equal(robin.m, neumann.m)):
        raise DomainError("spectra are not ordered alike")
    # index n carries the same (ell, m) in both, so d_n is the cancellation-free gap
    lam0 = neumann.lambdas
    d = robin.gaps
    sigma = robin.sigma
    ratio = d[1:] / (lam0[1:] ** 0.25 * sigma)
    top = (robin.m == robin.ell) & (robin.ell >= 1)
    ell_order = np.argsort(robin.ell[top])
    top_ratio = (robin.gaps[top] / ((robin.ell[top] * (robin.ell[top] + 1.0)) ** 0.25 * sigma))[ell_order]
    return GapBoundConstants(float(ratio.max()), float(top_ratio.max()), top_ratio)


@dataclass(frozen=True)
class SpacingHistogram:
    """Histogram of unit-mean nearest-neighbour spacings.

    ``counts`` covers ``bin_edges``; spacings past the last edge are counted
    in ``overflow`` so that ``counts.sum() + overflow == n_samples``.
    """

    bin_edges: np.ndarray
    counts: np.ndarray
    n_samples: int
    mean_raw_spacing: float
    spacings: np.ndarray
    overflow: int = 0

    @property
    def density(self) -> np.ndarray:
        return self.counts / (self.n_samples * np.diff(self.bin_edges))

    def tail_fraction(self, y: float) -> float:
        """Fraction of normalized spacings exceeding y."""
        return float(np.count_nonzero(self.spacings > y)) / self.n_samples


def spacing_distribution(lambdas, bins=100, range=(0.0, 5.0)) -> SpacingHistogram:
    """Nearest-neighbour spacings of a sorted spectrum, normalized to mean 1.

    ``lambdas`` is a :class:`Spectrum` or a sorted array of eigenvalues.
    """
    lam = lambdas.lambdas if isinstance(lambdas, Spectrum) else np.asarray(lambdas, dtype=float)
    if lam.size < 2:
        raise DomainError("need at least two eigenvalues")
    raw = np.diff(lam)
    if np.any(raw < 0):
        raise DomainError("eigenvalues must be sorted")
    mean = float(raw.mean())
    s = raw / mean
    counts, edges = np.histogram(s, bins=bins, range=range)
    overflow = int(np.count_nonzero(s > edges[-1]))
    # np.histogram drops values below the first edge; spacings are >= 0 = edges[0]
    return SpacingHistogram(edges, counts, int(s.size), mean, s, overflow)


def large_gap_count(lambdas, y: float, N: int | None = None) -> int:
    """#{n < N : lambda_{n+1} - lambda_n > y} for unnormalized y."""
    lam = np.asarray(lambdas.lambdas if isinstance(lambdas, Spectrum) else lambdas, dtype=float)
    raw = np.diff(lam)
    if N is not None:
        raw = raw[:N]
    return int(np.count_nonzero(raw > y))


def tail_constant(lambdas, ys, Ns) -> float:
    """Smallest A with count(N, y) <= A (N^(3/4)/y + sqrt(N)) over the given grid."""
    lam = np.asarray(lambdas.lambdas if isinstance(lambdas, Spectrum) else lambdas, dtype=float)
    best = 0.0
    for N in Ns:
        for y in ys:
            count = large_gap_count(lam, y, N)
            best = max(best, count / (N**0.75 / y + math.sqrt(N)))
    return best
