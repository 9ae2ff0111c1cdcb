"""Long-time asymptotics: region classification and the leading-order
formulas in each region and frame.

All evaluators take scattering data at t = 0; time enters through the
phase theta(z) = 4 t z^3 + x z.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InputError, RegionMismatchError
from .painleve import region2_profile
from .phase import (
    FrameContext,
    blaschke,
    chi_of,
    eta0,
    kappa_of,
    make_delta,
    partition_sets,
    phi_at_z0,
    chi_pv_integral,
)
from .reflectionless import (
    assemble_pole_system,
    breather_matrix,
    discrete_rhp_solve,
    one_breather,
    one_soliton,
)
from .scattering import DiscreteEigenpair, Kind, ScatteringData
from .specfun import gamma


class Region(str, Enum):
    OSCILLATORY_I = "OscillatoryI"
    SELF_SIMILAR_II = "SelfSimilarII"
    SOLITON_III = "SolitonIII"


ERROR_ORDER = {
    Region.OSCILLATORY_I: "t^{-3/4}",
    Region.SELF_SIMILAR_II: "t^{2/(3p)-1/2}",
    Region.SOLITON_III: "t^{-1}",
}


@dataclass(frozen=True)
class RegionClass:
    tag: Region
    frame: DiscreteEigenpair | None = None


@dataclass
class AsymptoticProfile:
    x_grid: np.ndarray
    u_values: np.ndarray
    tag: RegionClass
    error_order: str
    tags: list = field(default_factory=list)
    report: dict = field(default_factory=dict)


def _need_t0(data):
    if data.t != 0:
        raise InputError("asymptotic evaluators expect scattering data at t = 0")


def classify_region(x, t, data: ScatteringData, c2=1.0, frame_tol=0.05):
    if t < 1:
        raise InputError("classification needs t >= 1")
    if abs(x) <= c2 * t ** (1 / 3):
        tag = Region.SELF_SIMILAR_II
    elif x < 0:
        tag = Region.OSCILLATORY_I
    else:
        tag = Region.SOLITON_III
    v = x / t
    near = [m for m in data.modes if abs(m.velocity - v) <= frame_tol]
    frame = min(near, key=lambda m: abs(m.velocity - v)) if near else None
    return RegionClass(tag, frame)


# ---------------------------------------------------------------------------
# Region I


@dataclass(frozen=True)
class ParabolicConstants:
    beta12: complex
    beta21: complex
    deltaA0: complex
    deltaB0: complex


def parabolic_constants(kappa, r_z0, tau, chi_pm, eta0_pm):
    r_z0 = complex(r_z0)
    if r_z0 == 0:
        raise InputError("parabolic constants need r(z0) != 0")
    if not tau > 0:
        raise InputError("tau must be positive")
    s2p = np.sqrt(2 * np.pi)
    damp = np.exp(-np.pi * kappa / 2)
    b12 = s2p * np.exp(1j * np.pi / 4) * damp / (r_z0 * gamma(-1j * kappa))
    b21 = -s2p * np.exp(-1j * np.pi / 4) * damp / (np.conj(r_z0) * gamma(1j * kappa))
    chi_p, chi_m = chi_pm
    e_p, e_m = eta0_pm
    dB = (192 * tau) ** (-0.5j * kappa) * np.exp(8j * tau) * np.exp(chi_p) * e_p
    dA = (192 * tau) ** (0.5j * kappa) * np.exp(-8j * tau) * np.exp(chi_m) * e_m
    return ParabolicConstants(complex(b12), complex(b21), complex(dA), complex(dB))


def _frame_constants(data, x, t, B_set):
    """kappa, z0 and parabolic constants at a Region I point, or None if r(z0) = 0."""
    ctx = FrameContext(float(x), float(t))
    z0 = ctx.z0
    r0 = data.r_at(np.array([z0]))[0]
    if r0 == 0:
        return None
    kappa = float(kappa_of(r0))
    sol = data.solitons
    chi_p = chi_of(data, z0, z0)
    chi_m = chi_of(data, z0, -z0)
    pc = parabolic_constants(
        kappa, r0, ctx.tau, (chi_p, chi_m),
        (eta0(data, z0, B_set, 1, sol), eta0(data, z0, B_set, -1, sol)),
    )
    return kappa, z0, pc


def _correction(data, x, t, B_set, m_at=None):
    """2 [E_21]_12 with E_21 built from the parabolic constants; m_at(z)
    supplies the model matrix (identity when None)."""
    fc = _frame_constants(data, x, t, B_set)
    if fc is None:
        return 0.0
    kappa, z0, pc = fc
    MB = np.array([[0, -1j * pc.deltaB0**2 * pc.beta12],
                   [1j * pc.deltaB0**-2 * pc.beta21, 0]])
    MA = np.array([[0, 1j * pc.deltaA0**2 * np.conj(pc.beta12)],
                   [-1j * pc.deltaA0**-2 * np.conj(pc.beta21), 0]])
    if m_at is None:
        E = MB + MA
    else:
        mp, mm = m_at(z0), m_at(-z0)
        E = mp @ MB @ _inv2(mp) + mm @ MA @ _inv2(mm)
    E = E / np.sqrt(48 * z0 * t)
    return 2 * E[0, 1]


def _inv2(m):
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def region1_generic(x, t, data: ScatteringData, check=True, c2=1.0, frame_tol=0.05):
    """sqrt(|kappa|/(3 t z0)) cos(16 t z0^3 - kappa log(192 t z0^3) + phi(z0)).

    Accepts an array of x; every point must lie in Region I away from any
    mode velocity (unless check=False)."""
    _need_t0(data)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(xs.size)
    for i, xi in enumerate(xs):
        if check:
            rc = classify_region(xi, t, data, c2, frame_tol)
            if rc.tag is not Region.OSCILLATORY_I or rc.frame is not None:
                raise RegionMismatchError(f"x = {xi} is not a generic Region I point")
        B_set = partition_sets(data, xi / t, "RegionI").B_set
        out[i] = _generic_value(data, xi, t, B_set)
    return out if np.ndim(x) else float(out[0])


def _generic_value(data, x, t, B_set):
    ctx = FrameContext(float(x), float(t))
    z0 = ctx.z0
    r0 = data.r_at(np.array([z0]))[0]
    if r0 == 0:
        return 0.0
    kappa = float(kappa_of(r0))
    phi = phi_at_z0(data, z0, kappa, chi_pv_integral(data, z0), B_set)
    tau = ctx.tau
    amp = np.sqrt(abs(kappa) / (3 * t * z0))
    return float(amp * np.cos(16 * tau - kappa * np.log(192 * tau) + phi))


def radiation_correction(x, t, data: ScatteringData, B_set=()):
    """The correction 2[E_21]_12 with the model matrix set to the identity;
    equals region1_generic up to rounding."""
    return float(np.real(_correction(data, x, t, tuple(B_set))))


def _check_frame(pair, kind, sign):
    if pair.kind is not kind:
        raise RegionMismatchError(f"expected a {kind.value} frame")
    v = pair.velocity
    if (sign < 0 and not v < 0) or (sign > 0 and not v > 0):
        raise RegionMismatchError(f"frame velocity {v:.6g} has the wrong sign")


def _window(v, t, x, half_width=10.0, n=401):
    if x is None:
        return np.linspace(v * t - half_width, v * t + half_width, n)
    return np.asarray(x, dtype=float)


def region1_dressing(ell: DiscreteEigenpair, data: ScatteringData):
    """delta for the frame of a left-moving breather: all solitons and the
    breathers faster than ell enter its Blaschke factor."""
    z0 = np.sqrt(-ell.velocity / 12.0)
    part = partition_sets(data, ell.velocity, "RegionI")
    return make_delta(data, z0, part.B_set), part.B_set


def region1_breather_frame(ell: DiscreteEigenpair, t, data: ScatteringData, x=None,
                           with_correction=True):
    """Dressed breather plus the leading radiation correction on a window
    around x = v t.  Returns (x, u, report)."""
    _need_t0(data)
    _check_frame(ell, Kind.BREATHER, -1)
    xs = _window(ell.velocity, t, x)
    dfun, B_set = region1_dressing(ell, data)
    c_t = ell.c * dfun(ell.z) ** -2
    e = DiscreteEigenpair(ell.z, c_t, Kind.BREATHER)
    u = one_breather(ell.z.real, ell.z.imag, c_t, xs, t)
    corr = np.zeros_like(xs)
    worst_imag = 0.0
    if with_correction:
        for i, xi in enumerate(xs):
            def m_at(z, xi=xi):
                return breather_matrix(e, c_t, xi, t, z)
            val = _correction(data, xi, t, B_set, m_at)
            corr[i] = val.real
            worst_imag = max(worst_imag, abs(complex(val).imag))
    report = {"dressed_c": complex(c_t), "kappa": dfun.kappa, "z0": dfun.z0,
              "max_imag_correction": worst_imag}
    return xs, u + corr, report


def region2(x, t, painleve_sol):
    return region2_profile(painleve_sol, x, t)


# ---------------------------------------------------------------------------
# Region III


def region3_dressing(ell: DiscreteEigenpair, data: ScatteringData):
    """c_ell psi(z_ell)^-2 with psi the Blaschke product over the faster modes."""
    part = partition_sets(data, ell.velocity, "RegionIII")
    sol = tuple(m for m in part.S_set if m.kind is Kind.SOLITON)
    br = part.B_set
    psi = complex(blaschke(ell.z, sol, br))
    return ell.c * psi**-2, part


def omega_shift(ell: DiscreteEigenpair, data: ScatteringData):
    """Phase shift of a soliton frame relative to log(|c|/2 zeta)."""
    part = partition_sets(data, ell.velocity, "RegionIII")
    z = ell.z
    s = 0.0
    for m in part.S_set:
        if m.kind is Kind.SOLITON:
            s += 2 * np.log(abs((z - m.z) / (z - np.conj(m.z))))
        else:
            s += 2 * np.log(abs((z - m.z) / (z - np.conj(m.z))))
            s += 2 * np.log(abs((z + np.conj(m.z)) / (z + m.z)))
    return float(s)


def region3_soliton_frame(ell: DiscreteEigenpair, t, data: ScatteringData, x=None):
    _need_t0(data)
    _check_frame(ell, Kind.SOLITON, 1)
    zeta = ell.z.imag
    xs = _window(ell.velocity, t, x)
    c_t, _ = region3_dressing(ell, data)
    u = one_soliton(zeta, 1j * abs(c_t) * np.sign(c_t.imag), xs, t)
    return xs, u, {"omega_shift": omega_shift(ell, data), "dressed_c": complex(c_t)}


def region3_breather_frame(ell: DiscreteEigenpair, t, data: ScatteringData, x=None):
    _need_t0(data)
    _check_frame(ell, Kind.BREATHER, 1)
    xs = _window(ell.velocity, t, x)
    c_t, _ = region3_dressing(ell, data)
    u = one_breather(ell.z.real, ell.z.imag, c_t, xs, t)
    return xs, u, {"dressed_c": complex(c_t)}


# ---------------------------------------------------------------------------
# full profile


def _mode_term(m, data, xs, t):
    if m.kind is Kind.SOLITON:
        return region3_soliton_frame(m, t, data, xs)[1]
    if m.velocity > 0:
        return region3_breather_frame(m, t, data, xs)[1]
    dfun, _ = region1_dressing(m, data)
    c_t = m.c * dfun(m.z) ** -2
    return one_breather(m.z.real, m.z.imag, c_t, xs, t)


def full_profile(x_grid, t, data: ScatteringData, painleve_sol=None, c2=1.0,
                 frame_tol=0.05, t_min=20.0):
    """Superposition of dressed modes and the radiation of each region."""
    _need_t0(data)
    if t < t_min:
        raise InputError(f"full profile needs t >= {t_min}")
    xs = np.asarray(x_grid, dtype=float)
    u = np.zeros_like(xs)
    for m in data.modes:
        if m.velocity == 0:
            raise InputError("a mode with zero velocity has no asymptotic frame")
        u += _mode_term(m, data, xs, t)
    tags = []
    has_r = bool(np.any(data.r))
    for i, xi in enumerate(xs):
        rc = classify_region(xi, t, data, c2, frame_tol)
        tags.append(rc.tag)
        if not has_r:
            continue
        if rc.tag is Region.OSCILLATORY_I:
            B_set = partition_sets(data, xi / t, "RegionI", gap=0.0).B_set
            u[i] += _generic_value(data, xi, t, B_set)
        elif rc.tag is Region.SELF_SIMILAR_II:
            if painleve_sol is None:
                raise InputError("self-similar points need a Painleve solution")
            u[i] += float(region2(xi, t, painleve_sol))
    mid = classify_region(xs[xs.size // 2], t, data, c2, frame_tol)
    return AsymptoticProfile(xs, u, mid, ERROR_ORDER[mid.tag], tags)
