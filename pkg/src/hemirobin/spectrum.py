"""
Desymmetrized Robin spectrum of the hemisphere, organized in clusters.

For each l >= 0 the cluster E_l(sigma) holds the floor(l/2) + 1 eigenvalues
Lambda_{l,m} = nu (nu + 1) with nu = nu_{l,m}(sigma) in (l, l + 1) and
m = l, l - 2, ... The clusters lie in disjoint intervals (l(l+1), (l+1)(l+2)),
so the global order is the concatenation of the clusters.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DomainError
from .secular import admissible_orders, solve_deltas

__all__ = [
    "EigenvalueRecord",
    "Cluster",
    "Spectrum",
    "neumann_cluster",
    "robin_cluster",
    "make_cluster",
    "cluster_start_index",
    "build_spectrum",
    "rn_gap_exact",
    "gap_asymptotic",
    "delta_asymptotic",
]


@dataclass(frozen=True)
class EigenvalueRecord:
    """One desymmetrized eigenvalue ``lam = nu (nu + 1)``.

    ``rn_gap`` is the Robin-Neumann gap ``lam - ell (ell + 1)``, computed as
    ``delta (2 ell + 1 + delta)`` to avoid cancellation; ``n`` is the global
    0-based index, or -1 for records not yet placed in a spectrum.
    """

    ell: int
    m: int
    sigma: float
    nu: float
    lam: float
    delta: float
    rn_gap: float
    n: int = -1


def _records(ell, m, sigma, nu, lam, delta, gap, n) -> tuple[EigenvalueRecord, ...]:
    return tuple(
        EigenvalueRecord(int(a), int(b), float(sigma), float(c), float(d), float(e), float(f), int(g))
        for a, b, c, d, e, f, g in zip(ell, m, nu, lam, delta, gap, n)
    )


@dataclass(frozen=True)
class Cluster:
    """The cluster E_ell(sigma), entries ordered by increasing m (and lambda)."""

    ell: int
    sigma: float
    m: np.ndarray = field(repr=False)
    delta: np.ndarray = field(repr=False)
    start_index: int = 0

    @property
    def size(self) -> int:
        return int(self.m.size)

    @property
    def nu(self) -> np.ndarray:
        return self.ell + self.delta

    @property
    def lambdas(self) -> np.ndarray:
        nu = self.nu
        return nu * (nu + 1.0)

    @property
    def gaps(self) -> np.ndarray:
        return self.delta * (2 * self.ell + 1 + self.delta)

    @cached_property
    def entries(self) -> tuple[EigenvalueRecord, ...]:
        ell = np.full(self.size, self.ell)
        n = self.start_index + np.arange(self.size)
        return _records(ell, self.m, self.sigma, self.nu, self.lambdas, self.delta, self.gaps, n)


def cluster_start_index(ell: int) -> int:
    """Number of eigenvalues below cluster ell: sum_{l' < ell} (floor(l'/2) + 1)."""
    if ell < 0:
        raise DomainError(f"ell must be nonnegative, got {ell}")
    return ell + (ell - 1) ** 2 // 4 if ell else 0


def neumann_cluster(ell: int) -> Cluster:
    if ell < 0:
        raise DomainError(f"ell must be nonnegative, got {ell}")
    m = admissible_orders(ell)
    return Cluster(ell, 0.0, m, np.zeros(m.size), cluster_start_index(ell))


def robin_cluster(ell: int, sigma: float) -> Cluster:
    if ell < 0:
        raise DomainError(f"ell must be nonnegative, got {ell}")
    if not sigma > 0:
        raise DomainError(f"robin_cluster requires sigma > 0, got {sigma}")
    m = admissible_orders(ell)
    return Cluster(ell, float(sigma), m, solve_deltas(ell, m, sigma), cluster_start_index(ell))


def make_cluster(ell: int, sigma: float) -> Cluster:
    """Neumann cluster for sigma == 0, Robin cluster otherwise."""
    return neumann_cluster(ell) if sigma == 0 else robin_cluster(ell, sigma)


@dataclass(frozen=True)
class Spectrum:
    """Globally sorted desymmetrized spectrum for clusters 0..ell_max.

    Stored column-wise; :attr:`eigenvalues` materializes the records.
    """

    sigma: float
    ell_max: int
    ell: np.ndarray = field(repr=False)
    m: np.ndarray = field(repr=False)
    delta: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return int(self.ell.size)

    @property
    def nu(self) -> np.ndarray:
        return self.ell + self.delta

    @property
    def lambdas(self) -> np.ndarray:
        nu = self.nu
        return nu * (nu + 1.0)

    @property
    def gaps(self) -> np.ndarray:
        return self.delta * (2 * self.ell + 1 + self.delta)

    @cached_property
    def eigenvalues(self) -> tuple[EigenvalueRecord, ...]:
        return _records(
            self.ell, self.m, self.sigma, self.nu, self.lambdas, self.delta, self.gaps, np.arange(len(self))
        )

    def cluster(self, ell: int) -> Cluster:
        lo = cluster_start_index(ell)
        hi = cluster_start_index(ell + 1)
        return Cluster(ell, self.sigma, self.m[lo:hi], self.delta[lo:hi], lo)


def build_spectrum(sigma: float, ell_max: int, workers: int | None = None) -> Spectrum:
    """Assemble clusters 0..ell_max and sort by (lambda, ell, m).

    ``workers`` > 1 solves clusters on a thread pool. The sigma = 0 spectrum
    is exact (no root solves).
    """
    if ell_max < 0:
        raise DomainError(f"ell_max must be nonnegative, got {ell_max}")
    if sigma < 0:
        raise DomainError(f"sigma must be nonnegative, got {sigma}")
    ells = range(ell_max + 1)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            clusters = list(pool.map(lambda l: make_cluster(l, sigma), ells))
    else:
        clusters = [make_cluster(l, sigma) for l in ells]
    ell = np.concatenate([np.full(c.size, c.ell) for c in clusters])
    m = np.concatenate([c.m for c in clusters])
    delta = np.concatenate([c.delta for c in clusters])
    nu = ell + delta
    order = np.lexsort((m, ell, nu * (nu + 1.0)))
    return Spectrum(float(sigma), int(ell_max), ell[order], m[order], delta[order])


def rn_gap_exact(record: EigenvalueRecord) -> float:
    """delta (2 ell + 1 + delta)."""
    return record.delta * (2 * record.ell + 1 + record.delta)


def _check_asymptotic_args(ell, m, sigma):
    if ell < 1 or m < 0 or m > ell or (ell - m) % 2:
        raise DomainError(f"need 0 <= m <= ell, ell >= 1, m = ell mod 2; got ell={ell}, m={m}")
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")


def gap_asymptotic(ell: int, m: int, sigma: float) -> float:
    """Leading-order RN gap: (2 sigma/pi)(2 ell + 1)/sqrt(ell^2 - m^2), or
    (2 sigma/sqrt(pi)) sqrt(ell) when m = ell."""
    _check_asymptotic_args(ell, m, sigma)
    if m == ell:
        return 2.0 * sigma * math.sqrt(ell / math.pi)
    return (2.0 * sigma / math.pi) * (2 * ell + 1) / math.sqrt((ell - m) * (ell + m))


def delta_asymptotic(ell: int, m: int, sigma: float) -> float:
    """Leading-order offset: 2 sigma / (pi sqrt(ell^2 - m^2)), or sigma/sqrt(pi ell) when m = ell."""
    _check_asymptotic_args(ell, m, sigma)
    if m == ell:
        return sigma / math.sqrt(math.pi * ell)
    return 2.0 * sigma / (math.pi * math.sqrt((ell - m) * (ell + m)))
