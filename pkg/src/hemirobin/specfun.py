"""
Special-function kernel: Gamma ratios, Gauss/Olver hypergeometric series and
Ferrers functions of the first kind ``P_nu^m(x)`` of real degree.

Ferrers functions use the Condon-Shortley phase, so that ``P_1^1(x) =
-sqrt(1 - x**2)``.

Evaluation of ``P_nu^m(x)`` for large degree cannot be done by summing the
hypergeometric series directly: the terms grow like ``exp(nu * eta)`` with
``sinh(eta/2) = sqrt((1-x)/2)`` before cancelling to an O(1) result. Instead the
series supplies two starting values with degree in ``(m-1, m+1]``, where it has
almost no cancellation, and the normalized three-term recurrence in the degree
carries them upward. The normalization

    Pbar_nu^m(x) = sqrt(Gamma(nu-m+1) / Gamma(nu+m+1)) * P_nu^m(x)

keeps every intermediate O(1) for degrees and orders in the thousands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy.integrate import solve_ivp

from .errors import ConvergenceError, DomainError

__all__ = [
    "SeriesControl",
    "LegendreArgs",
    "log_gamma",
    "digamma",
    "log_gamma_ratio_G",
    "gamma_ratio_G",
    "dlog_gamma_ratio_G",
    "hyp2f1_series",
    "olver_F",
    "legendre_P",
    "legendre_P_dx",
    "legendre_P_normalized",
    "legendre_table",
    "legendre_P_at0",
    "legendre_P_at0_log",
    "log_rgamma",
]

_LOG_SQRT_PI = 0.5 * math.log(math.pi)
_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for hypergeometric series."""

    rel_tol: float = 1e-15
    max_terms: int = 100_000

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1e-6:
            raise DomainError(f"rel_tol must lie in (0, 1e-6), got {self.rel_tol}")
        if self.max_terms < 100:
            raise DomainError(f"max_terms must be >= 100, got {self.max_terms}")


DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class LegendreArgs:
    """Degree, order and argument of a Ferrers function ``P_nu^m(x)``."""

    nu: float
    m: int
    x: float

    def __post_init__(self):
        if self.nu < 0:
            raise DomainError(f"degree must be nonnegative, got {self.nu}")
        if self.m < 0 or int(self.m) != self.m:
            raise DomainError(f"order must be a nonnegative integer, got {self.m}")
        if not -1.0 < self.x <= 1.0:
            raise DomainError(f"x must lie in (-1, 1], got {self.x}")


# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------

def log_gamma(s: float) -> float:
    """ln Gamma(s) for s > 0."""
    if not s > 0:
        raise DomainError(f"log_gamma requires s > 0, got {s}")
    return math.lgamma(s)


def digamma(s: float) -> float:
    """psi(s) = Gamma'(s)/Gamma(s) for s > 0."""
    if not s > 0:
        raise DomainError(f"digamma requires s > 0, got {s}")
    return float(special.digamma(s))


def log_gamma_ratio_G(s):
    """ln G(s) with G(s) = Gamma(s/2 + 1) / Gamma((s + 1)/2).

    Accepts scalars or arrays; ``s`` must be nonnegative.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("G(s) requires s >= 0")
    out = special.gammaln(0.5 * s + 1.0) - special.gammaln(0.5 * (s + 1.0))
    return out if out.ndim else float(out)


def gamma_ratio_G(s):
    """G(s) = Gamma(s/2 + 1) / Gamma((s + 1)/2), evaluated in log space.

    >>> round(gamma_ratio_G(1.0), 12)
    0.886226925453
    """
    out = np.exp(log_gamma_ratio_G(s))
    return out if np.ndim(out) else float(out)


def dlog_gamma_ratio_G(s):
    """(ln G)'(s) = (psi(s/2 + 1) - psi((s + 1)/2)) / 2, decreasing from ln 2 towards 0."""
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("G(s) requires s >= 0")
    out = 0.5 * (special.digamma(0.5 * s + 1.0) - special.digamma(0.5 * (s + 1.0)))
    return out if out.ndim else float(out)


def log_rgamma(y: float) -> tuple[float, int]:
    """Return ``(log|1/Gamma(y)|, sign(1/Gamma(y)))`` for any real y.

    Nonpositive integers give ``(-inf, 0)``. Negative arguments go through
    Euler reflection, ``1/Gamma(y) = Gamma(1-y) sin(pi y) / pi``.
    """
    if y > 0:
        return -math.lgamma(y), 1
    if y == math.floor(y):
        return -math.inf, 0
    # reduce to (-1, 1] before taking sin so integer parity stays exact
    r = y - 2.0 * math.floor(0.5 * y)
    sn = math.sin(math.pi * r)
    return math.lgamma(1.0 - y) + math.log(abs(sn)) - math.log(math.pi), (1 if sn > 0 else -1)


# ---------------------------------------------------------------------------
# Hypergeometric series
# ---------------------------------------------------------------------------

def hyp2f1_series(a, b, c, z, ctl: SeriesControl = DEFAULT_CONTROL):
    """Gauss series sum_s (a)_s (b)_s z^s / ((c)_s s!), vectorized over a, b, c.

    Summation stops for an element once its geometric tail bound
    ``|term| / (1 - |ratio|)`` drops below ``ctl.rel_tol * |sum|`` with the
    next-term ratio below 1, or once a Pochhammer factor hits zero.
    """
    a, b, c = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, b, c)))
    z = float(z)
    if not abs(z) < 1.0:
        raise DomainError(f"hypergeometric series requires |z| < 1, got {z}")
    if np.any((c <= 0) & (c == np.floor(c))):
        raise DomainError("c must not be a nonpositive integer")
    term = np.ones(a.shape)
    total = np.ones(a.shape)
    active = np.ones(a.shape, dtype=bool)
    for s in range(ctl.max_terms):
        ratio = (a + s) * (b + s) * z / ((c + s) * (s + 1))
        term = term * ratio
        total = total + np.where(active, term, 0.0)
        nxt = np.abs((a + s + 1) * (b + s + 1) * z / ((c + s + 1) * (s + 2)))
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = np.abs(term) / (1.0 - nxt)
        done = (term == 0.0) | ((nxt < 1.0) & (tail <= ctl.rel_tol * np.abs(total)))
        active &= ~done
        if not active.any():
            return total if total.ndim else float(total)
    raise ConvergenceError(f"hypergeometric series did not converge in {ctl.max_terms} terms")


def olver_F(a: float, b: float, c: float, z: float, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Olver's regularized series sum_s (a)_s (b)_s z^s / (Gamma(c + s) s!)."""
    if not c > 0:
        raise DomainError(f"olver_F requires c > 0, got {c}")
    return hyp2f1_series(a, b, c, z, ctl) * math.exp(-math.lgamma(c))


# ---------------------------------------------------------------------------
# Ferrers functions
# ---------------------------------------------------------------------------

def _check_x(x: float, open_right: bool = False) -> None:
    hi_ok = x < 1.0 if open_right else x <= 1.0
    if not (-1.0 < x and hi_ok):
        raise DomainError(f"x = {x} outside the admissible interval")


def _log_norm(nu, m: int):
    """0.5 * ln(Gamma(nu+m+1) / Gamma(nu-m+1)), requires nu > m - 1."""
    return 0.5 * (special.gammaln(nu + m + 1.0) - special.gammaln(nu - m + 1.0))


def _start_values(nu0: np.ndarray, m: int, x: float, ctl: SeriesControl) -> np.ndarray:
    """Normalized Pbar at degrees ``nu0 > m - 1`` from the hypergeometric form

    P = (-1)^m Gamma(nu+m+1) / (2^m Gamma(nu-m+1)) (1-x^2)^(m/2)
        * F(nu+m+1, m-nu; m+1; (1-x)/2).
    """
    z = 0.5 * (1.0 - x)
    series = hyp2f1_series(nu0 + m + 1.0, m - nu0, m + 1.0, z, ctl)
    if m == 0:
        return np.asarray(series, dtype=float)
    if x == 1.0:
        return np.zeros_like(nu0)
    log_mag = _log_norm(nu0, m) + 0.5 * m * math.log1p(-x * x) - m * _LOG2 - math.lgamma(m + 1.0)
    sign = -1.0 if m % 2 else 1.0
    return sign * np.exp(log_mag) * series


def _recurrence(nu0: np.ndarray, m: int, x: float, nsteps: int, ctl: SeriesControl) -> np.ndarray:
    out = np.empty((nu0.size, nsteps + 1))
    out[:, 0] = _start_values(nu0, m, x, ctl)
    if nsteps == 0:
        return out
    out[:, 1] = _start_values(nu0 + 1.0, m, x, ctl)
    for k in range(2, nsteps + 1):
        nu = nu0 + (k - 1)
        out[:, k] = (
            (2.0 * nu + 1.0) * x * out[:, k - 1] - np.sqrt((nu + m) * (nu - m)) * out[:, k - 2]
        ) / np.sqrt((nu - m + 1.0) * (nu + m + 1.0))
    return out


def _continue_from_equator(nu: np.ndarray, m: int, theta: float, p0: np.ndarray, d0: np.ndarray):
    # u(t) = Pbar(cos t), w = du/dt = -sin(t) * Dbar; integrate toward the pole at t = pi
    n = nu.size
    lam = nu * (nu + 1.0)

    def rhs(t, y):
        u, w = y[:n], y[n:]
        st = math.sin(t)
        return np.concatenate([w, -(math.cos(t) / st) * w - (lam - m * m / (st * st)) * u])

    y0 = np.concatenate([p0, -d0])
    atol = 1e-15 * max(1.0, float(np.max(np.abs(y0))))
    sol = solve_ivp(rhs, (0.5 * math.pi, theta), y0, method="DOP853", rtol=1e-12, atol=atol)
    if not sol.success:
        raise ConvergenceError(f"Legendre ODE integration failed: {sol.message}")
    y = sol.y[:, -1]
    return y[:n], -y[n:] / math.sin(theta)


def legendre_table(nu0, m: int, x: float, nsteps: int, ctl: SeriesControl = DEFAULT_CONTROL):
    """Normalized Ferrers values and x-derivatives at degrees ``nu0 + k``.

    Parameters
    ----------
    nu0 : float or array_like
        Starting degrees, each strictly greater than ``m - 1``.
    m : int
        Order.
    x : float
        Argument in (-1, 1).
    nsteps : int
        Number of unit steps in the degree.

    Returns
    -------
    pbar, dbar : ndarray
        Arrays of shape ``(len(nu0), nsteps + 1)`` holding ``Pbar_nu^m(x)``
        and ``c_nu * dP_nu^m/dx`` with the same normalization ``c_nu``.

    Notes
    -----
    For ``x >= 0`` the forward recurrence in the degree is stable. For
    ``x < 0`` the function picks up the component singular at ``x = -1``,
    which the forward recurrence does not follow; there the values at the
    equator are continued to ``x`` by integrating the Legendre equation.
    """
    nu0 = np.atleast_1d(np.asarray(nu0, dtype=float))
    m = int(m)
    if np.any(nu0 <= m - 1):
        raise DomainError("legendre_table needs starting degrees above m - 1")
    _check_x(x, open_right=True)
    xr = max(x, 0.0)
    run = _recurrence(nu0, m, xr, nsteps + 1, ctl)
    nu = nu0[:, None] + np.arange(nsteps + 1)
    pbar = run[:, :-1]
    dbar = ((nu + 1.0) * xr * pbar - np.sqrt((nu - m + 1.0) * (nu + m + 1.0)) * run[:, 1:]) / (1.0 - xr * xr)
    if x < 0:
        p, d = _continue_from_equator(nu.ravel(), m, math.acos(x), pbar.ravel(), dbar.ravel())
        pbar, dbar = p.reshape(nu.shape), d.reshape(nu.shape)
    return pbar, dbar


def _normalized_single(nu: float, m: int, x: float, ctl: SeriesControl) -> tuple[float, float]:
    n = max(0, int(math.floor(nu - m)))
    pbar, dbar = legendre_table(nu - n, m, x, n, ctl)
    return float(pbar[0, n]), float(dbar[0, n])


def _signed_prefactor(nu: float, m: int) -> tuple[float, int]:
    """log|.| and sign of (-1)^m Gamma(nu+m+1) / (2^m Gamma(nu-m+1) m!)."""
    lr, sg = log_rgamma(nu - m + 1.0)
    sign = sg * (-1 if m % 2 else 1)
    return math.lgamma(nu + m + 1.0) + lr - m * _LOG2 - math.lgamma(m + 1.0), sign


def _direct_P(nu: float, m: int, x: float, ctl: SeriesControl) -> float:
    log_mag, sign = _signed_prefactor(nu, m)
    if sign == 0:
        return 0.0
    series = hyp2f1_series(nu + m + 1.0, m - nu, m + 1.0, 0.5 * (1.0 - x), ctl)
    if m:
        if x == 1.0:
            return 0.0
        log_mag += 0.5 * m * math.log1p(-x * x)
    return sign * math.exp(log_mag) * series


def _is_integer(v: float) -> bool:
    return v == math.floor(v)


def legendre_P_normalized(nu: float, m: int, x: float, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Pbar_nu^m(x) = sqrt(Gamma(nu-m+1)/Gamma(nu+m+1)) P_nu^m(x) for nu > m - 1."""
    LegendreArgs(nu, m, x)
    if nu <= m - 1:
        raise DomainError("normalized Ferrers function needs nu > m - 1")
    if x == 1.0:
        return 1.0 if m == 0 else 0.0
    if x < 0 and _is_integer(nu):
        # P_l^m(-x) = (-1)^(l+m) P_l^m(x) for integer degree
        return (-1.0 if (int(nu) + m) % 2 else 1.0) * _normalized_single(nu, m, -x, ctl)[0]
    return _normalized_single(nu, m, x, ctl)[0]


def legendre_P(args: LegendreArgs, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Ferrers function of the first kind P_nu^m(x).

    Degrees above ``m - 1`` go through :func:`legendre_table`; lower degrees
    (reachable only in diagnostics) sum the series directly with the Gamma
    prefactor reflected to keep its sign explicit.
    """
    nu, m, x = float(args.nu), int(args.m), float(args.x)
    if nu <= m - 1:
        return _direct_P(nu, m, x, ctl)
    return legendre_P_normalized(nu, m, x, ctl) * math.exp(float(_log_norm(nu, m)))


def legendre_P_dx(args: LegendreArgs, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """dP_nu^m/dx on (-1, 1) from (1-x^2) P' = (nu+1) x P_nu - (nu-m+1) P_{nu+1}."""
    nu, m, x = float(args.nu), int(args.m), float(args.x)
    _check_x(x, open_right=True)
    if nu <= m - 1:
        p0 = _direct_P(nu, m, x, ctl)
        p1 = legendre_P(LegendreArgs(nu + 1.0, m, x), ctl)
        return ((nu + 1.0) * x * p0 - (nu - m + 1.0) * p1) / (1.0 - x * x)
    if x < 0 and _is_integer(nu):
        sign = 1.0 if (int(nu) + m) % 2 else -1.0
        dbar = sign * _normalized_single(nu, m, -x, ctl)[1]
    else:
        dbar = _normalized_single(nu, m, x, ctl)[1]
    return dbar * math.exp(float(_log_norm(nu, m)))


def legendre_P_at0_log(nu: float, m: int) -> tuple[float, int, float, int]:
    """Closed forms for P_nu^m(0) and (dP_nu^m/dx)(0) in log-magnitude/sign form.

    Returns ``(log|P|, sign P, log|P'|, sign P')``; a zero has log ``-inf``
    and sign 0. The trigonometric factors come from the phase reduced modulo
    2, so the vanishing at integer parities is exact.
    """
    if nu < 0:
        raise DomainError(f"degree must be nonnegative, got {nu}")
    if m < 0 or int(m) != m:
        raise DomainError(f"order must be a nonnegative integer, got {m}")
    m = int(m)
    t = nu + m
    q = math.floor(0.5 * t)
    r = t - 2.0 * q
    parity = -1 if q % 2 else 1
    cos_t = parity * math.sin(0.5 * math.pi * (1.0 - r))
    sin_t = parity * math.sin(0.5 * math.pi * r)

    def assemble(log_const, trig, log_gamma_top, rg):
        log_r, sg = rg
        if trig == 0.0 or sg == 0:
            return -math.inf, 0
        sign = sg * (1 if trig > 0 else -1)
        return log_const + math.log(abs(trig)) + log_gamma_top + log_r, sign

    lv, sv = assemble(
        m * _LOG2 - _LOG_SQRT_PI, cos_t, math.lgamma(0.5 * (t + 1.0)), log_rgamma(0.5 * (nu - m) + 1.0)
    )
    ld, sd = assemble(
        (m + 1) * _LOG2 - _LOG_SQRT_PI, sin_t, math.lgamma(0.5 * t + 1.0), log_rgamma(0.5 * (nu - m + 1.0))
    )
    return lv, sv, ld, sd


def legendre_P_at0(nu: float, m: int) -> tuple[float, float]:
    """(P_nu^m(0), dP_nu^m/dx(0)) from the closed Gamma-ratio forms.

    The pair is finite only while the Gamma ratios fit in a double; use
    :func:`legendre_P_at0_log` for large degree and order.
    """
    lv, sv, ld, sd = legendre_P_at0_log(nu, m)
    value = sv * math.exp(lv) if sv else 0.0
    deriv = sd * math.exp(ld) if sd else 0.0
    return value, deriv
