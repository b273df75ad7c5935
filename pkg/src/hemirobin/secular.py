"""
The secular function of the hemisphere Robin problem,

    S_m(nu) = 2 tan(pi (m + nu) / 2) G(nu + m) G(nu - m),
    G(s) = Gamma(s/2 + 1) / Gamma((s + 1)/2),

and the solver for its unique root nu_{l,m}(sigma) in (l, l + 1).

The solver works in the variable ``t = ln tan(pi delta / 2)`` with
``delta = nu - l``. The equation ``ln S_m = ln sigma`` then reads

    t + ln 2 + ln G(l + m + delta) + ln G(l - m + delta) = ln sigma,

whose left side is increasing in ``t`` with slope in ``[1, 1 + 2 ln 2 / pi]``
(``(ln G)'`` is positive, decreasing, and equals ``ln 2`` at 0). Since ``ln G``
is increasing, the root is bracketed by the values of ``t`` obtained by
freezing ``delta`` at 1 and at 0, a bracket of width at most
``2 ln(pi/2) < 1``. Nothing
overflows for tiny or huge ``sigma``, and ``1 - delta`` is computed from
``cot(pi delta / 2) = exp(-t)`` when ``delta`` is close to 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketError, ConvergenceError, DomainError
from .specfun import dlog_gamma_ratio_G, log_gamma_ratio_G, log_rgamma

__all__ = [
    "SecularPoint",
    "RobinRoot",
    "secular_S",
    "secular_S_four_gamma",
    "secular_S_offset",
    "secular_point",
    "secular_log_deriv",
    "solve_nu",
    "solve_deltas",
    "delta_bound",
    "admissible_orders",
]

_LN2 = math.log(2.0)

BISECT_WIDTH = 1e-6
NU_TOL = 1e-13
MAX_NEWTON = 60


@dataclass(frozen=True)
class SecularPoint:
    m: int
    nu: float
    value: float


@dataclass(frozen=True)
class RobinRoot:
    """Root nu = ell + delta of S_m(nu) = sigma in (ell, ell + 1)."""

    ell: int
    m: int
    sigma: float
    nu: float
    delta: float


def _check_order(m) -> int:
    if m < 0 or int(m) != m:
        raise DomainError(f"order must be a nonnegative integer, got {m}")
    return int(m)


def _reduced_phase(m: int, nu: float) -> float:
    """(nu - m) mod 2, in [0, 2)."""
    d = nu - m
    return d - 2.0 * math.floor(0.5 * d)


def secular_S(m: int, nu: float) -> float:
    """S_m(nu) for nu > 0; returns ``inf`` at the poles nu = m + 2k + 1.

    Uses the tan G G form for nu >= m and the four-Gamma form for nu < m.
    """
    m = _check_order(m)
    if not nu > 0:
        raise DomainError(f"secular_S requires nu > 0, got {nu}")
    if nu < m:
        return secular_S_four_gamma(m, nu)
    r = _reduced_phase(m, nu)
    if r == 1.0:
        return math.inf
    if r == 0.0:
        return 0.0
    tan = math.tan(0.5 * math.pi * r)
    return 2.0 * tan * math.exp(log_gamma_ratio_G(nu + m) + log_gamma_ratio_G(nu - m))


def secular_S_four_gamma(m: int, nu: float) -> float:
    """S_m(nu) = -2 Gamma((nu+m)/2+1) Gamma((m-nu+1)/2) / (Gamma((m+nu+1)/2) Gamma((m-nu)/2)).

    Valid for any nu > 0 off the poles; all four arguments are positive when
    0 < nu < m, which makes the sign of S_m there manifest.
    """
    m = _check_order(m)
    if not nu > 0:
        raise DomainError(f"secular_S requires nu > 0, got {nu}")
    log_num_r, sign_num = log_rgamma(0.5 * (m - nu + 1.0))
    if sign_num == 0:
        return math.inf
    log_den_r, sign_den = log_rgamma(0.5 * (m - nu))
    if sign_den == 0:
        return 0.0
    log_mag = log_gamma_ratio_G(nu + m) - log_num_r + log_den_r
    return -2.0 * sign_num * sign_den * math.exp(log_mag)


def secular_S_offset(ell: int, m: int, delta: float) -> float:
    """S_m(ell + delta) for ell = m mod 2, keeping the offset delta exact.

    Forming ``nu = ell + delta`` first would round delta to the spacing of
    ``ell``; this form does not.
    """
    m = _check_order(m)
    if (ell - m) % 2:
        raise DomainError("need ell = m mod 2")
    return 2.0 * math.tan(0.5 * math.pi * delta) * math.exp(
        log_gamma_ratio_G(ell + m + delta) + log_gamma_ratio_G(ell - m + delta)
    )


def secular_point(m: int, nu: float) -> SecularPoint:
    return SecularPoint(m=int(m), nu=float(nu), value=secular_S(m, nu))


def secular_log_deriv(m: int, nu: float) -> float:
    """S_m'/S_m = pi / sin(pi delta) + (ln G)'(nu - m) + (ln G)'(nu + m).

    Defined on the positivity intervals (m + 2k, m + 2k + 1), where delta is
    the fractional offset from m + 2k.
    """
    m = _check_order(m)
    delta = _reduced_phase(m, nu) if nu > m else -1.0
    if not 0.0 < delta < 1.0:
        raise DomainError(f"nu = {nu} is not inside a positivity interval of S_{m}")
    return math.pi / math.sin(math.pi * delta) + dlog_gamma_ratio_G(nu - m) + dlog_gamma_ratio_G(nu + m)


def admissible_orders(ell: int) -> np.ndarray:
    """Orders m <= ell with m = ell mod 2, ascending."""
    return np.arange(ell % 2, ell + 1, 2)


def _delta_of_t(t: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        lo = (2.0 / math.pi) * np.arctan(np.exp(np.minimum(t, 0.0)))
        hi = 1.0 - (2.0 / math.pi) * np.arctan(np.exp(-np.maximum(t, 0.0)))
    return np.where(t > 0, hi, lo)


def _residual(t, ell, m, log_sigma):
    delta = _delta_of_t(t)
    res = t + _LN2 + log_gamma_ratio_G(ell + m + delta) + log_gamma_ratio_G(ell - m + delta) - log_sigma
    return res, delta


def solve_deltas(ell: int, m, sigma: float) -> np.ndarray:
    """Offsets delta = nu_{ell,m}(sigma) - ell for an array of orders m.

    Bisection on the certified bracket down to width ``BISECT_WIDTH`` in t,
    then safeguarded Newton steps using the logarithmic derivative of S_m.
    """
    ell = int(ell)
    m = np.atleast_1d(np.asarray(m, dtype=float))
    if not sigma > 0 or not math.isfinite(sigma):
        raise DomainError(f"sigma must be positive and finite, got {sigma}")
    if np.any((m < 0) | (m > ell) | ((ell - m) % 2 != 0)):
        raise DomainError(f"orders must satisfy 0 <= m <= ell = {ell} with m = ell mod 2")
    log_sigma = math.log(sigma)
    hi = log_sigma - _LN2 - log_gamma_ratio_G(ell + m) - log_gamma_ratio_G(ell - m)
    lo = log_sigma - _LN2 - log_gamma_ratio_G(ell + m + 1.0) - log_gamma_ratio_G(ell - m + 1.0)
    f_lo, _ = _residual(lo, ell, m, log_sigma)
    f_hi, _ = _residual(hi, ell, m, log_sigma)
    if np.any(f_lo > 0) or np.any(f_hi < 0):
        raise BracketError(f"secular bracket lost its sign change at ell={ell}, sigma={sigma}")

    while np.any(hi - lo > BISECT_WIDTH):
        mid = 0.5 * (lo + hi)
        f_mid, _ = _residual(mid, ell, m, log_sigma)
        lo = np.where(f_mid <= 0, mid, lo)
        hi = np.where(f_mid > 0, mid, hi)

    t = 0.5 * (lo + hi)
    active = np.ones(m.shape, dtype=bool)
    for _ in range(MAX_NEWTON):
        f, delta = _residual(t, ell, m, log_sigma)
        lo = np.where(f <= 0, t, lo)
        hi = np.where(f > 0, t, hi)
        sin_pd = np.sin(math.pi * delta)
        # d/dt of the residual = (S'/S) * dnu/dt, with dnu/dt = sin(pi delta)/pi
        slope = 1.0 + (sin_pd / math.pi) * (
            dlog_gamma_ratio_G(ell - m + delta) + dlog_gamma_ratio_G(ell + m + delta)
        )
        step = f / slope
        t_new = t - step
        outside = (t_new <= lo) | (t_new >= hi)
        t_new = np.where(outside, 0.5 * (lo + hi), t_new)
        dt = np.abs(t_new - t)
        converged = (dt * sin_pd / math.pi <= NU_TOL) | (dt <= 4 * np.spacing(np.abs(t) + 1.0))
        t = np.where(active, t_new, t)
        active &= ~converged
        if not active.any():
            return _delta_of_t(t)
    raise ConvergenceError(f"Newton polish did not converge at ell={ell}, sigma={sigma}")


def solve_nu(ell: int, m: int, sigma: float) -> RobinRoot:
    """Unique root nu_{ell,m}(sigma) of S_m(nu) = sigma in (ell, ell + 1).

    >>> r = solve_nu(0, 0, 1.0)
    >>> 0 < r.nu < 1
    True
    """
    m = _check_order(m)
    if ell < m or (ell - m) % 2:
        raise DomainError(f"need m <= ell and m = ell mod 2, got ell={ell}, m={m}")
    delta = float(solve_deltas(ell, [m], sigma)[0])
    root = RobinRoot(ell=int(ell), m=m, sigma=float(sigma), nu=ell + delta, delta=delta)
    if not delta_bound(root) or not 0.0 < delta < 1.0:
        raise ConvergenceError(f"root {root} violates the delta bound")
    return root


def delta_bound(root: RobinRoot) -> bool:
    """delta < sqrt(2/pi) sigma / sqrt(nu)."""
    return root.delta < math.sqrt(2.0 / math.pi) * root.sigma / math.sqrt(root.nu)
