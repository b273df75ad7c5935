"""
Acceptance checks, shared by ``hemirobin verify`` and the test suite.

Each check returns a :class:`CriterionResult`; :func:`run_all` runs them in
order. Expensive spectra are cached for the lifetime of the process.
"""
from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .cap import BoundaryCondition, CapProblem, cap_spacing_report, cap_spectrum
from .secular import admissible_orders, solve_deltas
from .specfun import legendre_P_at0_log
from .spectrum import build_spectrum, gap_asymptotic, robin_cluster
from .stats import (
    GapSample,
    cluster_gap_mean,
    gap_bound_constants,
    spacing_distribution,
    szego_cdf,
    szego_density,
    szego_ks_distance,
)
from .tables import SPECTRUM_COLUMNS, spectrum_rows, write_table

__all__ = ["CriterionResult", "CRITERIA", "run_all", "run_criterion"]


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f} s)"


@lru_cache(maxsize=None)
def _spectrum(sigma: float, ell_max: int):
    return build_spectrum(sigma, ell_max)


@lru_cache(maxsize=None)
def _cap(theta0: float, kind: str, sigma: float, nu_max: float):
    bc = BoundaryCondition(kind, sigma)
    return cap_spectrum(CapProblem(theta0, bc, nu_max))


def neumann_reference():
    t0 = time.perf_counter()
    text = write_table(spectrum_rows(build_spectrum(0.0, 3)), SPECTRUM_COLUMNS)
    lam = [float(r["lambda"]) for r in csv.DictReader(io.StringIO(text))]
    dt = time.perf_counter() - t0
    ok = lam == [0.0, 2.0, 6.0, 6.0, 12.0, 12.0] and dt < 1.0
    return ok, f"lambda = {lam}"


def root_localization():
    t0 = time.perf_counter()
    bad = 0
    total = 0
    for sigma in (0.01, 1.0, 100.0):
        for ell in range(301):
            m = admissible_orders(ell)
            delta = solve_deltas(ell, m, sigma)
            nu = ell + delta
            bound = math.sqrt(2.0 / math.pi) * sigma / np.sqrt(nu)
            bad += int(np.count_nonzero(~((delta > 0) & (delta < 1) & (nu > ell) & (nu < ell + 1) & (delta < bound))))
            total += m.size
    dt = time.perf_counter() - t0
    return bad == 0 and dt < 60.0, f"{bad} violations among {total} roots in {dt:.1f} s"


def boundary_cross_oracle(n_roots: int = 500, seed: int = 20240601):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(n_roots):
        sigma = (0.01, 1.0, 100.0)[k % 3]
        ell = int(rng.integers(0, 301))
        m = int(rng.choice(admissible_orders(ell)))
        nu = ell + float(solve_deltas(ell, [m], sigma)[0])
        lv, sv, ld, sd = legendre_P_at0_log(nu, m)
        # |sigma P - P'| / (sigma |P|) without forming P, which overflows for large m
        worst = max(worst, abs(sigma - sv * sd * math.exp(ld - lv)) / sigma)
    return worst <= 1e-8, f"max relative residual {worst:.2e} over {n_roots} roots"


def simplicity_monotonicity():
    spec = _spectrum(1.0, 300)
    lam = spec.lambdas
    bad_sort = int(np.count_nonzero(np.diff(lam) <= 0))
    bad_m = 0
    for ell in range(301):
        c = spec.cluster(ell)
        bad_m += int(np.count_nonzero(np.diff(c.nu) <= 0))
    return bad_sort == 0 and bad_m == 0, f"{bad_sort} ties in lambda, {bad_m} m-order violations"


def figure2_gaps():
    ell = 150
    c = robin_cluster(ell, 1.0)
    mean = cluster_gap_mean(c)
    worst = 0.0
    for m, gap in zip(c.m, c.gaps):
        if m <= ell - 10:
            rel = abs(gap - gap_asymptotic(ell, int(m), 1.0)) / gap_asymptotic(ell, int(m), 1.0)
            worst = max(worst, rel * (ell - m) / 3.0)
    ok = 1.8 <= mean <= 2.2 and worst <= 1.0
    return ok, f"mean {mean:.5f}, max deviation / (3/(l-m)) = {worst:.3f}"


def cluster_mean_convergence():
    t0 = time.perf_counter()
    parts = []
    ok = True
    for ell in (400, 1600, 6400):
        mean = cluster_gap_mean(robin_cluster(ell, 1.0))
        ok &= abs(mean - 2.0) <= 15.0 / math.sqrt(ell)
        parts.append(f"l={ell}: {mean:.6f}")
    dt = time.perf_counter() - t0
    return ok and dt < 300.0, ", ".join(parts)


def szego_law():
    sigma = 1.0
    a = 4.0 * sigma / math.pi
    quad_err = 0.0
    for y in (1.3, 1.5, 2.0, 5.0, 40.0):
        val, _ = integrate.quad(lambda s: szego_density(s, sigma), a, y, limit=200)
        quad_err = max(quad_err, abs(val - szego_cdf(y, sigma)))
    ks = [szego_ks_distance(GapSample.from_cluster(robin_cluster(ell, sigma))) for ell in (100, 400, 1600, 6400)]
    ok = all(np.diff(ks) < 0) and ks[-1] < 0.03 and quad_err <= 1e-8
    return ok, "KS " + ", ".join(f"{k:.5f}" for k in ks) + f"; CDF vs quadrature {quad_err:.1e}"


def gap_bound():
    robin = _spectrum(1.0, 500)
    consts = gap_bound_constants(robin, _spectrum(0.0, 500))
    target = 2.0 / math.sqrt(math.pi)
    last = consts.ell_ratio[-1]
    top = robin.gaps[(robin.m == robin.ell)][np.argsort(robin.ell[robin.m == robin.ell])]
    increasing = bool(np.all(np.diff(top) > 0))
    ok = abs(last - target) / target <= 0.05 and math.isfinite(consts.C_emp) and increasing
    return ok, f"ratio at l=500 {last:.5f} (2/sqrt(pi) = {target:.5f}), C_emp {consts.C_emp:.5f}"


def spacing_delta_at_zero():
    fr = [spacing_distribution(_spectrum(1.0, L)).tail_fraction(0.5) for L in (100, 200, 400)]
    ok = all(np.diff(fr) < 0) and fr[-1] < 0.1
    return ok, "fraction > 0.5: " + ", ".join(f"{f:.4f}" for f in fr)


def figure5_count():
    t0 = time.perf_counter()
    n = len(_cap(math.pi / 3, "dirichlet", 0.0, 100.0))
    dt = time.perf_counter() - t0
    return n == 1258 and dt < 120.0, f"{n} eigenvalues in {dt:.1f} s"


def cap_hemisphere():
    cap = _cap(math.pi / 2, "robin", 1.0, 21.0)
    ref = _spectrum(1.0, 20).lambdas
    if len(cap) != ref.size:
        return False, f"count mismatch {len(cap)} vs {ref.size}"
    rel = float(np.max(np.abs(cap.lambdas - ref) / ref))
    return rel <= 1e-8, f"max relative difference {rel:.2e} over {ref.size} eigenvalues"


def cap_poisson():
    ks_cap = cap_spacing_report(_cap(math.pi / 3, "dirichlet", 0.0, 100.0)).ks_exponential
    ks_hemi = cap_spacing_report(_cap(math.pi / 2, "dirichlet", 0.0, 50.0)).ks_exponential
    return 5.0 * ks_cap < ks_hemi, f"KS(pi/3) = {ks_cap:.4f}, KS(pi/2) = {ks_hemi:.4f}"


CRITERIA = (
    (1, "Neumann reference spectrum", neumann_reference),
    (2, "root localization and delta bound", root_localization),
    (3, "boundary condition cross-oracle", boundary_cross_oracle),
    (4, "simplicity and m-monotonicity", simplicity_monotonicity),
    (5, "cluster gaps at l = 150", figure2_gaps),
    (6, "cluster mean convergence", cluster_mean_convergence),
    (7, "Szego limit law", szego_law),
    (8, "gap bound constants", gap_bound),
    (9, "spacings concentrate at zero", spacing_delta_at_zero),
    (10, "cap eigenvalue count", figure5_count),
    (11, "cap-hemisphere consistency", cap_hemisphere),
    (12, "cap Poisson report", cap_poisson),
)


def run_criterion(number: int) -> CriterionResult:
    for num, name, fn in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            try:
                passed, detail = fn()
            except Exception as exc:  # a crash is a failure, reported like one
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            return CriterionResult(num, name, bool(passed), detail, time.perf_counter() - t0)
    raise KeyError(number)


def run_all(numbers=None) -> list[CriterionResult]:
    return [run_criterion(n) for n, _, _ in CRITERIA if numbers is None or n in numbers]
