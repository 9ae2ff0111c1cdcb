"""Painleve II, P'' = s P - 2 P^3, on the branch decaying like alpha Ai(s)."""

from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import BlowUpError, InputError, NumericalError
from .specfun import airy_ai, airy_ai_prime


@dataclass(frozen=True)
class PainleveSolution:
    alpha: float
    s_grid: np.ndarray
    P: np.ndarray
    dP: np.ndarray
    residual_max: float

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if np.any(s < self.s_grid[0] - 1e-12) or np.any(s > self.s_grid[-1] + 1e-12):
            raise InputError("similarity variable outside the solved grid")
        out = _hermite(self, np.atleast_1d(s))
        return out if s.ndim else float(out[0])


def _hermite(sol, s):
    # cubic Hermite interpolation from (P, P'), accurate to h^4
    g, P, dP = sol.s_grid, sol.P, sol.dP
    i = np.clip(np.searchsorted(g, s) - 1, 0, g.size - 2)
    h = g[i + 1] - g[i]
    t = (s - g[i]) / h
    h00 = (1 + 2 * t) * (1 - t) ** 2
    h10 = t * (1 - t) ** 2
    h01 = t * t * (3 - 2 * t)
    h11 = t * t * (t - 1)
    return h00 * P[i] + h10 * h * dP[i] + h01 * P[i + 1] + h11 * h * dP[i + 1]


def _rhs(s, y):
    return [y[1], s * y[0] - 2 * y[0] ** 3]


# 8th-order central difference weights for the first derivative
_D8 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])


def ode_residual(s_grid, P, dP):
    """max |P'' - sP + 2P^3| over interior nodes, P'' from differencing P'."""
    h = s_grid[1] - s_grid[0]
    d2 = np.convolve(dP, _D8[::-1], mode="valid") / h
    core = slice(4, s_grid.size - 4)
    res = d2 - s_grid[core] * P[core] + 2 * P[core] ** 3
    return float(np.max(np.abs(res))) if res.size else 0.0


def solve_painleve(alpha, s_min=-30.0, s_max=10.0, tol=1e-12, h=0.005):
    """Integrate downward from s_max with data (alpha Ai, alpha Ai')."""
    if not abs(alpha) < 1:
        raise InputError("|alpha| must be < 1")
    if s_max < 10 or s_min < -30 or s_min >= s_max:
        raise InputError("need s_max >= 10 and -30 <= s_min < s_max")
    n = int(round((s_max - s_min) / h)) + 1
    grid = np.linspace(s_min, s_max, n)
    if alpha == 0:
        z = np.zeros(n)
        return PainleveSolution(0.0, grid, z, z.copy(), 0.0)
    y0 = [alpha * airy_ai(s_max), alpha * airy_ai_prime(s_max)]

    def blow(s, y):
        return 1e3 - abs(y[0])

    blow.terminal = True
    # absolute tolerance scaled to the tiny boundary data
    atol = tol * min(1.0, abs(y0[0]))
    res = integrate.solve_ivp(
        _rhs, (s_max, s_min), y0, method="DOP853", rtol=tol, atol=atol,
        t_eval=grid[::-1], events=blow,
    )
    if res.status == 1:
        raise BlowUpError(f"|P| exceeded 1e3 near s = {res.t_events[0][0]:.4g}")
    if res.status < 0:
        raise NumericalError(res.message)
    P = res.y[0][::-1]
    dP = res.y[1][::-1]
    return PainleveSolution(float(alpha), grid, P, dP, ode_residual(grid, P, dP))


def region2_profile(sol, x, t):
    scale = (3.0 * t) ** (1.0 / 3.0)
    return sol(np.asarray(x) / scale) / scale


def alpha_hypothesis(r0):
    """Candidate connection alpha = -i r(0) / sqrt(1 + |r(0)|^2), real for
    real potentials and inside (-1, 1); for A sech(x) it gives sin(pi A).
    Only a hypothesis, compared against calibrated values."""
    r0 = complex(r0)
    return float((-1j * r0).real / np.sqrt(1 + abs(r0) ** 2))


@dataclass(frozen=True)
class Calibration:
    alpha: float
    residual: float
    t: float
    window: tuple


def calibrate_alpha(r0, profile, t, s_min=-30.0, s_max=10.0):
    """Least-squares alpha matching (3t)^{-1/3} P(x/(3t)^{1/3}) to a sampled
    profile (x, u) over |x| <= 4 (3t)^{1/3}."""
    r0 = complex(r0)
    if abs(r0.real) > 1e-8:
        raise InputError("r(0) must be purely imaginary")
    x, u = (np.asarray(a, dtype=float) for a in profile)
    scale = (3.0 * t) ** (1.0 / 3.0)
    sel = np.abs(x) <= 4 * scale
    xs, us = x[sel], u[sel]
    if r0 == 0 and not np.any(us):
        return Calibration(0.0, 0.0, t, (-4 * scale, 4 * scale))

    def cost(a):
        sol = solve_painleve(a, s_min, s_max, tol=1e-10, h=0.01)
        return np.sum((region2_profile(sol, xs, t) - us) ** 2)

    fit = optimize.minimize_scalar(cost, bounds=(-0.999, 0.999), method="bounded",
                                   options={"xatol": 1e-10})
    a = float(fit.x)
    sol = solve_painleve(a, s_min, s_max, tol=1e-10, h=0.01)
    resid = float(np.max(np.abs(region2_profile(sol, xs, t) - us)))
    if resid > 5 * t ** -0.5:
        raise NumericalError(f"Painleve fit residual {resid:.3g} exceeds 5 t^-1/2")
    return Calibration(a, resid, float(t), (-4 * scale, 4 * scale))
