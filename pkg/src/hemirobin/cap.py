"""
Eigenvalues of the Laplacian on the spherical cap {theta <= theta0}.

In sector m the eigenfunctions are e^{i m phi} P_nu^m(cos theta) and the degree
nu is fixed by the boundary condition at x0 = cos(theta0). With outward normal
derivative -sin(theta0) d/dx, the residuals are

    Dirichlet  P_nu^m(x0)
    Neumann    sin(theta0) P_nu^m'(x0)
    Robin      sigma P_nu^m(x0) - sin(theta0) P_nu^m'(x0)

For each m the residual is scanned on a grid of step 1/20 in nu, sign
changes are refined with Brent's method, and the m loop stops once three
consecutive orders have no root below ``nu_max``.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize
from scipy import stats as sps

from .errors import DomainError
from .specfun import DEFAULT_CONTROL, LegendreArgs, legendre_P, legendre_P_dx, legendre_table
from .stats import SpacingHistogram, spacing_distribution

__all__ = [
    "BoundaryCondition",
    "CapProblem",
    "CapEigenvalue",
    "CapSpectrum",
    "CapSpacingReport",
    "GridWarning",
    "cap_residual",
    "cap_roots_for_order",
    "cap_spectrum",
    "cap_spacing_report",
    "weyl_count",
]

GRID_STEPS_PER_UNIT = 20
NU_TOL = 1e-12
EMPTY_ORDERS_TO_STOP = 3
MIN_SPACING_SAMPLE = 500


class GridWarning(UserWarning):
    """The scan grid may have stepped over a pair of close roots."""


@dataclass(frozen=True)
class BoundaryCondition:
    kind: str
    sigma: float = 0.0

    def __post_init__(self):
        if self.kind not in ("dirichlet", "neumann", "robin"):
            raise DomainError(f"unknown boundary condition {self.kind!r}")
        if self.kind == "robin" and not self.sigma >= 0:
            raise DomainError(f"Robin parameter must be nonnegative, got {self.sigma}")

    @classmethod
    def dirichlet(cls):
        return cls("dirichlet")

    @classmethod
    def neumann(cls):
        return cls("neumann")

    @classmethod
    def robin(cls, sigma: float):
        return cls("robin", float(sigma))

    def __str__(self):
        return f"robin({self.sigma:g})" if self.kind == "robin" else self.kind


@dataclass(frozen=True)
class CapProblem:
    theta0: float
    bc: BoundaryCondition
    nu_max: float

    def __post_init__(self):
        if not 0.0 < self.theta0 < math.pi:
            raise DomainError(f"theta0 must lie in (0, pi), got {self.theta0}")
        if not self.nu_max > 0:
            raise DomainError(f"nu_max must be positive, got {self.nu_max}")

    @property
    def x0(self) -> float:
        # cos(pi/2) rounds to 6e-17; keep the hemisphere edge exactly at 0
        return 0.0 if self.theta0 == math.pi / 2 else math.cos(self.theta0)

    @property
    def area(self) -> float:
        return 2.0 * math.pi * (1.0 - math.cos(self.theta0))


@dataclass(frozen=True)
class CapEigenvalue:
    """Eigenvalue lam = nu (nu + 1) in sector m.

    ``residual`` is the boundary residual of the normalized Ferrers function
    sqrt(Gamma(nu-m+1)/Gamma(nu+m+1)) P_nu^m at the accepted root.
    """

    m: int
    nu: float
    lam: float
    residual: float


@dataclass(frozen=True)
class CapSpectrum:
    problem: CapProblem
    eigenvalues: tuple[CapEigenvalue, ...]
    counts_per_m: dict[int, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([e.lam for e in self.eigenvalues])

    @property
    def nus(self) -> np.ndarray:
        return np.array([e.nu for e in self.eigenvalues])


def _combine(bc: BoundaryCondition, theta0: float, p, d):
    if bc.kind == "dirichlet":
        return p
    if bc.kind == "neumann":
        return math.sin(theta0) * d
    return bc.sigma * p - math.sin(theta0) * d


def cap_residual(m: int, nu: float, problem: CapProblem, normalized: bool = False) -> float:
    """Boundary residual at the cap edge.

    With ``normalized=True`` the Ferrers function is scaled by
    sqrt(Gamma(nu-m+1)/Gamma(nu+m+1)), which keeps the residual O(1) and
    does not change its sign; this needs nu > m - 1.
    """
    x0 = problem.x0
    if normalized:
        if nu <= m - 1:
            raise DomainError("normalized residual needs nu > m - 1")
        n = max(0, int(math.floor(nu - m)))
        p, d = legendre_table(nu - n, m, x0, n)
        return float(_combine(problem.bc, problem.theta0, p[0, n], d[0, n]))
    p = legendre_P(LegendreArgs(nu, m, x0))
    d = 0.0 if problem.bc.kind == "dirichlet" else legendre_P_dx(LegendreArgs(nu, m, x0))
    return float(_combine(problem.bc, problem.theta0, p, d))


def _scan_start(m: int, bc: BoundaryCondition) -> float:
    # Dirichlet roots exceed m; Neumann/Robin ones satisfy nu(nu+1) >= m^2
    if bc.kind == "dirichlet":
        return float(m)
    return max(0.0, m - 0.5)


def _scan(m: int, problem: CapProblem):
    start = _scan_start(m, problem.bc)
    if start >= problem.nu_max:
        return np.empty(0), np.empty(0)
    nsteps = int(math.ceil(problem.nu_max - start))
    frac = np.arange(GRID_STEPS_PER_UNIT) / GRID_STEPS_PER_UNIT
    nu0 = start + frac
    if start == 0.0 and m >= 1:
        nu0 = nu0[nu0 > m - 1]
    p, d = legendre_table(nu0, m, problem.x0, nsteps, DEFAULT_CONTROL)
    grid = (nu0[:, None] + np.arange(nsteps + 1)).T.ravel()
    vals = _combine(problem.bc, problem.theta0, p, d).T.ravel()
    keep = grid <= problem.nu_max + 1.0 / GRID_STEPS_PER_UNIT
    return grid[keep], vals[keep]


def _warn_hidden_pairs(m, grid, vals):
    # a local minimum of |f| without sign change whose parabola dips through zero
    a, b, c = vals[:-2], vals[1:-1], vals[2:]
    same = (a * b > 0) & (b * c > 0) & (np.abs(b) < np.abs(a)) & (np.abs(b) < np.abs(c))
    curv = a - 2 * b + c
    with np.errstate(divide="ignore", invalid="ignore"):
        vmin = b - (c - a) ** 2 / (8 * curv)
    suspect = same & (np.sign(vmin) != np.sign(b))
    if suspect.any():
        warnings.warn(
            f"order {m}: possible unresolved root pair near nu = {grid[1:-1][suspect][:3]}",
            GridWarning,
            stacklevel=3,
        )


def cap_roots_for_order(m: int, problem: CapProblem) -> list[CapEigenvalue]:
    """All roots nu < nu_max of the residual in sector m."""
    grid, vals = _scan(m, problem)
    if grid.size == 0:
        return []
    _warn_hidden_pairs(m, grid, vals)

    def f(nu):
        return cap_residual(m, nu, problem, normalized=True)

    roots = []
    for i in range(grid.size):
        if vals[i] == 0.0:
            roots.append(grid[i])
        elif i + 1 < grid.size and vals[i] * vals[i + 1] < 0:
            a, b = grid[i], grid[i + 1]
            fa, fb = f(a), f(b)
            if fa == 0.0 or fb == 0.0:
                # the scalar path landed exactly on the root at a grid node
                roots.append(a if fa == 0.0 else b)
                continue
            if fa * fb > 0:
                roots.append(a if abs(fa) < abs(fb) else b)
                continue
            roots.append(optimize.brentq(f, a, b, xtol=NU_TOL, rtol=4 * np.finfo(float).eps))
    out = []
    for nu in sorted(set(roots)):
        if nu < problem.nu_max:
            out.append(CapEigenvalue(int(m), float(nu), float(nu * (nu + 1.0)), f(nu)))
    return out


def cap_spectrum(problem: CapProblem, workers: int | None = None) -> CapSpectrum:
    """Desymmetrized cap spectrum (m >= 0) with nu < nu_max, sorted by lambda."""
    found: dict[int, list[CapEigenvalue]] = {}
    batch = max(1, workers or 1)
    m, empty_run = 0, 0
    pool = ThreadPoolExecutor(max_workers=batch) if batch > 1 else None
    try:
        while empty_run < EMPTY_ORDERS_TO_STOP:
            orders = list(range(m, m + batch))
            if pool is not None:
                results = list(pool.map(lambda k: cap_roots_for_order(k, problem), orders))
            else:
                results = [cap_roots_for_order(k, problem) for k in orders]
            for k, roots in zip(orders, results):
                if empty_run >= EMPTY_ORDERS_TO_STOP:
                    break
                found[k] = roots
                empty_run = empty_run + 1 if not roots else 0
            m += batch
    finally:
        if pool is not None:
            pool.shutdown()
    eigs = sorted((e for roots in found.values() for e in roots), key=lambda e: (e.lam, e.m))
    counts = {k: len(v) for k, v in sorted(found.items()) if v}
    return CapSpectrum(problem, tuple(eigs), counts)


@dataclass(frozen=True)
class CapSpacingReport:
    histogram: SpacingHistogram
    ks_exponential: float
    n_eigenvalues: int


def cap_spacing_report(spectrum: CapSpectrum | CapProblem) -> CapSpacingReport:
    """Unit-mean spacing histogram and KS distance to the Poisson law exp(-s)."""
    if isinstance(spectrum, CapProblem):
        spectrum = cap_spectrum(spectrum)
    if len(spectrum) < MIN_SPACING_SAMPLE:
        raise DomainError(f"insufficient sample: {len(spectrum)} < {MIN_SPACING_SAMPLE} eigenvalues")
    hist = spacing_distribution(spectrum.lambdas)
    ks = float(sps.kstest(hist.spacings, "expon").statistic)
    return CapSpacingReport(hist, ks, len(spectrum))


def weyl_count(problem: CapProblem, lam) -> np.ndarray:
    """Leading Weyl term for the desymmetrized spectrum: area * lam / (8 pi)."""
    return problem.area * np.asarray(lam, dtype=float) / (8.0 * math.pi)
