"""Phase functions: theta, kappa, chi, the scalar function delta, Blaschke
products over the discrete spectrum and the velocity partitions of modes."""

from dataclasses import dataclass, field

import numpy as np

from .errors import BranchCutError, CoverageError, InputError, TieError
from .scattering import Kind, ScatteringData
from .specfun import cauchy_pv_integral, gauss_legendre, log_gamma


@dataclass(frozen=True)
class FrameContext:
    x: float
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise InputError("frame needs t > 0")

    @property
    def velocity(self):
        return self.x / self.t

    @property
    def z0(self):
        if self.x > 0:
            raise BranchCutError("stationary points are imaginary for x > 0")
        return float(np.sqrt(-self.x / (12.0 * self.t)))

    @property
    def tau(self):
        return self.z0**3 * self.t


def theta(ctx, z):
    return 4.0 * ctx.t * z**3 + ctx.x * z


def kappa_of(r_at_z0):
    return -np.log1p(np.abs(r_at_z0) ** 2) / (2 * np.pi)


# ---------------------------------------------------------------------------
# chi


def _log_ratio(r_func, z0):
    base = np.log1p(abs(r_func(np.array([z0]))[0]) ** 2)

    def f(s):
        return np.log1p(np.abs(r_func(s)) ** 2) - base

    return f


def _cauchy_transform(f, a, b, z, side=None, n=128):
    """Integral of f(s)/(s - z) over [a, b] for z off the interval, or the
    boundary value from side '+' / '-' for z on it."""
    z = complex(z)
    on_cut = abs(z.imag) <= 1e-12 and a < z.real < b
    if on_cut:
        if side not in ("+", "-"):
            raise BranchCutError("point on the cut needs side '+' or '-'")
        pv = cauchy_pv_integral(f, a, b, z.real, n=n // 2)
        f0 = f(np.array([z.real]))[0]
        return pv + (1j if side == "+" else -1j) * np.pi * f0
    xs = min(max(z.real, a), b)
    f0 = f(np.array([xs]))[0]
    if abs(z - xs) < 1e-14 and xs in (a, b):
        # endpoint: the chi log-ratio vanishes there and the log term drops
        total = 0j
    else:
        total = f0 * (np.log(b - z) - np.log(a - z))
    pieces = [(a, xs), (xs, b)] if a < xs < b else [(a, b)]
    for lo, hi in pieces:
        rule = gauss_legendre(n if len(pieces) == 1 else n // 2, lo, hi)
        s = rule.nodes
        total = total + rule.integrate((f(s) - f0) / (s - z))
    return total


def _r_function(r_samples):
    if isinstance(r_samples, ScatteringData):
        return r_samples.r_at, r_samples.zmax
    if callable(r_samples):
        return r_samples, np.inf
    zg, r = r_samples
    data = ScatteringData(float(zg[-1]), np.asarray(r))
    return data.r_at, data.zmax


def chi_of(r_samples, z0, z, side=None):
    """chi(z) = (1/2 pi i) int_{-z0}^{z0} log((1+|r|^2)/(1+|r(z0)|^2)) / (s - z) ds.

    ``r_samples`` is ScatteringData, a callable r(z) or a pair (z_grid, r).
    """
    if z0 <= 0:
        return 0j
    r_func, zmax = _r_function(r_samples)
    if z0 > zmax:
        raise CoverageError(f"reflection grid (|z| <= {zmax}) does not cover z0 = {z0}")
    f = _log_ratio(r_func, z0)
    return _cauchy_transform(f, -z0, z0, z, side) / (2j * np.pi)


def chi_pv_integral(r_samples, z0):
    """PV integral of the log-ratio against 1/(s - z0); the integrand is
    regular there, so this is an ordinary integral."""
    r_func, zmax = _r_function(r_samples)
    if z0 > zmax:
        raise CoverageError(f"reflection grid does not cover z0 = {z0}")
    f = _log_ratio(r_func, z0)
    return _cauchy_transform(f, -z0, z0, complex(z0)).real


# ---------------------------------------------------------------------------
# Blaschke products and delta


def blaschke(z, solitons=(), breathers=()):
    """prod (z - conj z_k)/(z - z_k) * prod (z - conj z_j)/(z - z_j) (z + z_j)/(z + conj z_j)."""
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    for e in solitons:
        out = out * (z - np.conj(e.z)) / (z - e.z)
    for e in breathers:
        zj = e.z
        out = out * (z - np.conj(zj)) / (z - zj) * (z + zj) / (z + np.conj(zj))
    return out


def blaschke_arg(z, solitons=(), breathers=()):
    """Argument of the Blaschke product for real z, accumulated with atan2."""
    z = float(z)
    total = 0.0
    for e in solitons:
        total -= 2 * np.angle(z - e.z)
    for e in breathers:
        total -= 2 * np.angle(z - e.z)
        total -= 2 * np.angle(z + np.conj(e.z))
    return total


@dataclass(frozen=True)
class DeltaFunction:
    kappa: float
    z0: float
    r_func: object
    solitons: tuple = ()
    breathers: tuple = ()
    zmax: float = np.inf
    meta: dict = field(default_factory=dict, compare=False)

    def chi(self, z, side=None):
        if self.z0 <= 0:
            return 0j
        f = _log_ratio(self.r_func, self.z0)
        return _cauchy_transform(f, -self.z0, self.z0, z, side) / (2j * np.pi)

    def power(self, z, side=None):
        """((z - z0)/(z + z0))^{i kappa} with principal arguments."""
        z = complex(z)
        z0 = self.z0
        a1 = np.angle(z - z0)
        a2 = np.angle(z + z0)
        if abs(z.imag) <= 1e-12 and -z0 < z.real < z0:
            if side not in ("+", "-"):
                raise BranchCutError("point on the cut needs side '+' or '-'")
            a1 = np.pi if side == "+" else -np.pi
        with np.errstate(divide="ignore"):
            mod = np.log(abs(z - z0)) - np.log(abs(z + z0))
        return np.exp(1j * self.kappa * (mod + 1j * (a1 - a2)))

    def __call__(self, z, side=None):
        z = complex(z)
        if self.z0 > 0 and abs(z.imag) <= 1e-12 and -self.z0 <= z.real <= self.z0 and side is None:
            raise BranchCutError("delta evaluated on the cut without a side flag")
        val = blaschke(z, self.solitons, self.breathers)
        if self.z0 > 0:
            val = val * self.power(z, side) * np.exp(self.chi(z, side))
        return complex(val)


def make_delta(data: ScatteringData, z0, breathers_in=None, solitons_in=None):
    """delta for the frame with stationary point z0.

    By default every soliton enters the Blaschke product; ``breathers_in``
    selects the breather representatives (the faster set of the frame).
    """
    sol = tuple(data.solitons) if solitons_in is None else tuple(solitons_in)
    br = tuple(breathers_in or ())
    if z0 > data.zmax:
        raise CoverageError(f"reflection grid does not cover z0 = {z0}")
    r0 = data.r_at(np.array([z0]))[0] if z0 > 0 else 0j
    return DeltaFunction(float(kappa_of(r0)), float(z0), data.r_at, sol, br, data.zmax)


def delta(df: DeltaFunction, z, side=None):
    return df(z, side)


def eta0(data, z0, B_set, sign=1, solitons=None):
    """Blaschke product over all solitons and the breathers of B_set at sign*z0."""
    sol = data.solitons if solitons is None else solitons
    return complex(blaschke(sign * z0, sol, B_set))


# ---------------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class FramePartition:
    B_set: tuple
    S_set: tuple
    frame_velocity: float
    frame: object = None


def partition_sets(data: ScatteringData, frame_velocity, variant="RegionI", gap=1e-6):
    """Modes faster than the frame.

    RegionI: B_set holds the faster breathers (solitons always enter delta).
    RegionIII: S_set holds faster breathers and solitons; B_set its breathers.
    A single mode sitting at the frame velocity is taken as the frame itself.
    """
    v = float(frame_velocity)
    at = [m for m in data.modes if abs(m.velocity - v) < gap]
    if len(at) > 1:
        raise TieError(f"{len(at)} modes share the frame velocity {v}")
    frame = at[0] if at else None
    br = tuple(m for m in data.breathers if m is not frame and m.velocity > v)
    if variant == "RegionI":
        return FramePartition(br, (), v, frame)
    if variant == "RegionIII":
        sol = tuple(m for m in data.solitons if m is not frame and m.velocity > v)
        return FramePartition(br, sol + br, v, frame)
    raise InputError(f"unknown partition variant {variant!r}")


# ---------------------------------------------------------------------------
# phase constant at the stationary point


def wrap(a):
    """Reduce to (-pi, pi]."""
    return float(np.pi - np.mod(np.pi - a, 2 * np.pi))


def phi_at_z0(data, z0, kappa, chi_pv, B_set, solitons=None):
    """Phase of the radiation term at the stationary point z0.

    arg Gamma(i kappa) - pi/4 - arg r(z0) - chi_pv/pi + 2 arg eta0(z0), where
    chi_pv is the integral of the log-ratio against 1/(s - z0)
    (so -chi_pv/pi = 2 Im chi(z0)).
    """
    r0 = data.r_at(np.array([z0]))[0]
    if abs(r0) == 0:
        raise InputError("phi needs r(z0) != 0")
    sol = data.solitons if solitons is None else solitons
    arg_gamma = log_gamma(1j * kappa).imag
    val = arg_gamma - np.pi / 4 - np.angle(r0) - chi_pv / np.pi + 2 * blaschke_arg(z0, sol, B_set)
    return wrap(val)
