"""Special functions, quadrature rules and an adaptive ODE driver."""

from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import GammaPoleError, InputError, PoleOnEndpointError, StepUnderflowError

# Lanczos approximation, g = 607/128 with 15 coefficients (Godfrey).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEF = (
    0.999999999999997092,
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)


def _log_gamma_right(z):
    # valid for Re z >= 0.5
    ser = np.full_like(z, _LANCZOS_COEF[0])
    for j, c in enumerate(_LANCZOS_COEF[1:], start=1):
        ser = ser + c / (z + j)
    tmp = z + _LANCZOS_G + 0.5
    return (z + 0.5) * np.log(tmp) - tmp + _HALF_LOG_2PI + np.log(ser) - np.log(z)


def log_gamma(z):
    """Principal branch of log Gamma(z) for complex z.

    For Re z < 0.5 the value is continued through the recurrence
    ``lgamma(z) = lgamma(z + n) - sum(log(z + k))`` so the branch stays
    analytic off the negative real axis (it agrees with
    ``scipy.special.loggamma``).
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    near_int = np.abs(z - np.round(z.real))
    if np.any((near_int <= 1e-14) & (np.round(z.real) <= 0)):
        raise GammaPoleError("log_gamma evaluated at a pole of Gamma")

    out = np.empty_like(z)
    right = z.real >= 0.5
    out[right] = _log_gamma_right(z[right])
    if np.any(~right):
        zl = z[~right]
        shift = np.ceil(0.5 - zl.real).astype(int)
        acc = np.zeros_like(zl)
        for k in range(int(shift.max())):
            active = k < shift
            acc[active] += np.log(zl[active] + k)
        out[~right] = _log_gamma_right(zl + shift) - acc
    return out[0] if scalar else out


def gamma(z):
    return np.exp(log_gamma(z))


def airy_ai(s):
    s = np.asarray(s, dtype=float)
    if np.any(np.abs(s) > 40.0):
        raise InputError("airy_ai is only supported on [-40, 40]")
    return special.airy(s)[0]


def airy_ai_prime(s):
    s = np.asarray(s, dtype=float)
    if np.any(np.abs(s) > 40.0):
        raise InputError("airy_ai_prime is only supported on [-40, 40]")
    return special.airy(s)[1]


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    kind: str

    def integrate(self, values):
        return np.sum(self.weights * values, axis=-1)


def gauss_legendre(n, a, b):
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return QuadratureRule(half * x + 0.5 * (a + b), half * w, "gauss-legendre")


def trapezoid(n, a, b):
    x = np.linspace(a, b, n)
    w = np.full(n, (b - a) / (n - 1))
    w[0] *= 0.5
    w[-1] *= 0.5
    return QuadratureRule(x, w, "trapezoid")


def cauchy_pv_integral(f, a, b, pole, n=64):
    """Principal value of the integral of f(s)/(s - pole) over [a, b].

    Singularity subtraction: the regular part (f(s) - f(pole))/(s - pole)
    is integrated by Gauss-Legendre on each side of the pole and the
    subtracted constant contributes f(pole) * log((b - pole)/(pole - a)).
    ``f`` must accept numpy arrays.
    """
    if not a < b:
        raise InputError("need a < b")
    span = b - a
    if pole <= a + 1e-14 * span or pole >= b - 1e-14 * span:
        raise PoleOnEndpointError("pole must lie strictly inside (a, b)")
    f0 = f(np.array([pole]))[0]
    total = f0 * np.log((b - pole) / (pole - a))
    for lo, hi in ((a, pole), (pole, b)):
        rule = gauss_legendre(n, lo, hi)
        s = rule.nodes
        total = total + rule.integrate((f(s) - f0) / (s - pole))
    return total


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray
    sol: object = None


def ode_integrate(rhs, y0, t_span, tol, t_eval=None, dense=False):
    """Adaptive embedded Runge-Kutta (Dormand-Prince 8(5,3)) integration.

    ``rhs(t, y)`` returns dy/dt.  Both relative and absolute local error
    targets are set to ``tol``.
    """
    if not 1e-13 <= tol <= 1e-6:
        raise InputError("tol must lie in [1e-13, 1e-6]")
    res = integrate.solve_ivp(
        rhs, t_span, np.asarray(y0), method="DOP853", rtol=tol, atol=tol,
        t_eval=t_eval, dense_output=dense,
    )
    if res.status < 0:
        raise StepUnderflowError(res.message)
    return Trajectory(res.t, res.y, res.sol)
