"""Acceptance checks.  Each check returns a Result with the measured value
next to its tolerance; suites group them for the CLI and the test-suite."""

import functools
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import asymptotics as asy
from .evolve import EvolveParams, run
from .painleve import alpha_hypothesis, calibrate_alpha, region2_profile, solve_painleve
from .phase import (
    FrameContext,
    chi_of,
    chi_pv_integral,
    eta0,
    kappa_of,
    make_delta,
    phi_at_z0,
)
from .reflectionless import (
    assemble_pole_system,
    discrete_rhp_solve,
    one_breather,
    one_soliton,
    reconstruct,
)
from .scattering import (
    PotentialSample,
    ScatteringData,
    breather,
    direct_transform,
    find_discrete_spectrum,
    reflection,
    reflectionless,
    soliton,
    transition_coefficients,
)
from .specfun import airy_ai


@dataclass
class Result:
    id: int
    name: str
    passed: bool
    checks: list = field(default_factory=list)  # (label, measured, tolerance, ok)

    def add(self, label, measured, tol, ok=None, kind="<="):
        measured = float(measured)
        if ok is None:
            ok = measured <= tol if kind == "<=" else measured >= tol
        self.checks.append((label, measured, float(tol), bool(ok)))
        self.passed = all(c[3] for c in self.checks)
        return ok

    def line(self):
        head = f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.id:2d} {self.name}"
        parts = [f"{lab}={m:.3g} (tol {t:.3g}{'' if ok else ' FAIL'})" for lab, m, t, ok in self.checks]
        return head + ": " + "; ".join(parts)

    def to_dict(self):
        d = asdict(self)
        d["checks"] = [dict(zip(("label", "measured", "tolerance", "ok"), c)) for c in self.checks]
        return d


def _sech(y):
    return 1.0 / np.cosh(np.clip(y, -700, 700))


def _quiet_run(u0, T, params):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return run(u0, T, params)


def _periodic_window(x, L, centre, half):
    """Grid indices within half of centre on a periodic grid, and their
    unwrapped coordinates."""
    h = L / x.size
    wrapped = (centre + L / 2) % L - L / 2
    i0 = int(np.argmin(np.abs(x - wrapped)))
    m = int(half / h)
    idx = (i0 + np.arange(-m, m + 1)) % x.size
    return idx, centre + (x[i0] - wrapped) + h * np.arange(-m, m + 1)


# ---------------------------------------------------------------------------
# 1. closed forms


def closed_forms():
    res = Result(1, "closed-form equivalence", True)
    x = np.linspace(-10, 10, 201)
    worst_s = worst_b = 0.0
    for zeta, c in ((1.0, 2j), (0.7, -1.3j)):
        e = soliton(zeta, c)
        for t in (0.0, 1.0, 5.0):
            u = discrete_rhp_solve(assemble_pole_system((e,), (), x, t)).u
            worst_s = max(worst_s, np.max(np.abs(u - one_soliton(zeta, c, x, t))))
    for xi, eta, c in ((1.0, 1.0, 1.0), (0.6, 0.8, 0.5 - 0.3j)):
        e = breather(xi, eta, c)
        for t in (0.0, 1.0, 5.0):
            u = discrete_rhp_solve(assemble_pole_system((), (e,), x, t)).u
            worst_b = max(worst_b, np.max(np.abs(u - one_breather(xi, eta, c, x, t))))
    res.add("soliton sup error", worst_s, 1e-12)
    res.add("breather sup error", worst_b, 1e-12)
    return res


# ---------------------------------------------------------------------------
# 2. direct scattering round trip


def scattering_round_trip():
    res = Result(2, "direct-scattering round trip", True)
    cases = (reflectionless([soliton(1.0, 2j)]), reflectionless(breathers=[breather(1.0, 1.0, 1.0)]))
    for data in cases:
        mode = data.modes[0]
        u0 = PotentialSample.from_function(lambda x: reconstruct(data, x, 0.0), L=40, h=0.01)
        out = direct_transform(u0, zmax=4.0, nz=512)
        found = out.modes
        label = mode.kind.value
        res.add(f"{label} count mismatch", abs(len(found) - 1), 0)
        if len(found) == 1:
            res.add(f"{label} |dz|", abs(found[0].z - mode.z), 1e-6)
            res.add(f"{label} |d|c||", abs(abs(found[0].c) - abs(mode.c)), 1e-4)
        res.add(f"{label} max|r|", np.max(np.abs(out.r)), 1e-5)
    return res


# ---------------------------------------------------------------------------
# 3. unitarity, symmetry and counting


def random_potential(rng):
    k = rng.integers(1, 4)
    amps = rng.uniform(-1.0, 1.0, k)
    centres = rng.uniform(-3.0, 3.0, k)
    widths = rng.uniform(0.5, 2.0, k)

    def f(x):
        x = np.asarray(x)[..., None]
        return np.sum(amps * np.exp(-(((x - centres) / widths) ** 2)), axis=-1)

    return f


def unitarity_symmetry(seed=0, n_potentials=5, sech_amplitudes=(0.3, 0.8, 1.7)):
    res = Result(3, "unitarity, symmetry and counting", True)
    rng = np.random.default_rng(seed)
    z = np.linspace(-4.0, 4.0, 512)
    worst_u = worst_s = 0.0
    for _ in range(n_potentials):
        u0 = PotentialSample.from_function(random_potential(rng), L=40, h=0.01)
        samples = transition_coefficients(u0, z)
        a = np.array([s.a for s in samples])
        b = np.array([s.b for s in samples])
        worst_u = max(worst_u, np.max(np.abs(np.abs(a) ** 2 + np.abs(b) ** 2 - 1)))
        r = np.array([reflection(s) for s in samples])
        worst_s = max(worst_s, np.max(np.abs(r[::-1] + np.conj(r))))
    res.add("max ||a|^2+|b|^2-1|", worst_u, 1e-8)
    res.add("max |r(-z)+conj r(z)|", worst_s, 1e-8)
    mism = 0
    for A in sech_amplitudes:
        u0 = PotentialSample.from_function(lambda x: A * _sech(x), L=50, h=0.01)
        zeros, _ = find_discrete_spectrum(u0)
        exact = int(np.floor(A + 0.5)) if A > 0.5 else 0
        mism += abs(len(zeros) - exact)
    res.add("sech count mismatches", mism, 0)
    return res


# ---------------------------------------------------------------------------
# 4. PDE oracle


def pde_fidelity():
    res = Result(4, "PDE oracle fidelity", True)
    sol = lambda x: 2 * _sech(2 * x)  # noqa: E731
    tr = _quiet_run(sol, 5.0, EvolveParams(64.0, 2048, 1e-3))
    err = np.max(np.abs(tr.profiles[-1] - one_soliton(1.0, 2j, tr.x, 5.0)))
    res.add("soliton error t=5, dt=1e-3", err, 1e-6)
    tr = _quiet_run(sol, 10.0, EvolveParams(64.0, 2048, 2.5e-4, checkpoints=(0.0,)))
    m = np.array(tr.log)
    res.add("momentum drift T=10, dt=2.5e-4", abs(m[-1, 2] - m[0, 2]) / m[0, 2], 1e-8)
    # breather (1, 0.5): nu_1 has period pi / (8 xi (xi^2 + eta^2)) in the co-moving frame
    xi, eta, c = 1.0, 0.5, 1.0
    period = np.pi / (8 * xi * (xi**2 + eta**2))
    v = 4 * eta**2 - 12 * xi**2
    n = 400
    tr = _quiet_run(lambda x: one_breather(xi, eta, c, x, 0.0), period,
                    EvolveParams(64.0, 2048, period / n, checkpoints=(0.0,)))
    st = tr.final_state
    # back to the co-moving position: u(x + v T, T)
    shifted = np.fft.irfft(st.u_hat * np.exp(1j * st.k * v * period), n=st.N)
    res.add("breather one-period return", np.max(np.abs(shifted - tr.profiles[0])), 1e-5)
    return res


# ---------------------------------------------------------------------------
# 5. two-soliton phase shifts


def two_soliton_shifts():
    res = Result(5, "soliton-resolution phase shifts", True)
    data = reflectionless([soliton(0.5, 1j), soliton(1.0, 2j)])
    L, N = 256.0, 4096
    tr = _quiet_run(lambda x: reconstruct(data, x, 0.0), 20.0, EvolveParams(L, N, 1e-3))
    u = tr.profiles[-1]
    t = 20.0
    for e in data.solitons:
        idx, xw = _periodic_window(tr.x, L, e.velocity * t, 5.0)
        pred = sum(asy.region3_soliton_frame(m, t, data, xw)[1] for m in data.solitons)
        shift = asy.omega_shift(e, data)
        res.add(f"zeta={e.z.imag:g} window error (omega shift {shift:+.4f})",
                np.max(np.abs(u[idx] - pred)), 1e-3)
    slow = data.solitons[0]
    res.add("slow shift vs 2log(1/3)", abs(asy.omega_shift(slow, data) - 2 * np.log(1 / 3)), 1e-12)
    return res


# ---------------------------------------------------------------------------
# 6 and 7: solitonless radiation (one shared PDE run)

RADIATION_AMPLITUDE = 0.4
RADIATION_TIMES = (30.0, 50.0, 100.0, 120.0, 200.0)


@functools.lru_cache(maxsize=1)
def radiation_run():
    A = RADIATION_AMPLITUDE
    u0 = lambda x: A * _sech(x)  # noqa: E731
    data = direct_transform(PotentialSample.from_function(u0, L=60, h=0.01), zmax=4.0, nz=512)
    tr = _quiet_run(u0, 200.0, EvolveParams(4096.0, 16384, 0.02, checkpoints=RADIATION_TIMES))
    return data, tr


def _envelope_fit(data, x, u, t, with_log=True):
    amp, psi = [], []
    for xi in x:
        ctx = FrameContext(float(xi), t)
        z0 = ctx.z0
        r0 = data.r_at(np.array([z0]))[0]
        k = kappa_of(r0)
        ph = phi_at_z0(data, z0, k, chi_pv_integral(data, z0), ())
        amp.append(np.sqrt(abs(k) / (3 * t * z0)))
        psi.append(16 * ctx.tau + ph - (k * np.log(192 * ctx.tau) if with_log else 0.0))
    amp, psi = np.array(amp), np.array(psi)
    M = np.c_[amp * np.cos(psi), amp * np.sin(psi)]
    p, q = np.linalg.lstsq(M, u, rcond=None)[0]
    return np.hypot(p, q), np.arctan2(-q, p)


def region1_amplitude():
    res = Result(6, "Region I amplitude law", True)
    data, tr = radiation_run()
    x = tr.x
    z0 = np.sqrt(0.5 / 12)
    kap = kappa_of(data.r_at(np.array([z0]))[0])
    env, phase = [], []
    for t in (50.0, 100.0, 200.0):
        u = tr.at(t)
        sel = np.abs(x + 0.5 * t) <= np.pi / (2 * z0)  # one carrier wavelength
        factor, _ = _envelope_fit(data, x[sel], u[sel], t)
        _, delta = _envelope_fit(data, x[sel], u[sel], t, with_log=False)
        predicted = np.sqrt(abs(kap) / (3 * t * z0))
        env.append(factor * predicted)
        phase.append(delta)
        res.add(f"envelope rel. error t={t:g}", abs(factor - 1), 0.30)
    for i in range(2):
        ratio = env[i + 1] / env[i]
        res.add(f"doubling ratio/2^-1/2 - 1 (t={50 * 2**i:g})", abs(ratio / 2**-0.5 - 1), 0.10)
    slope = np.polyfit(np.log([50.0, 100.0, 200.0]), np.unwrap(phase), 1)[0]
    res.add("log-phase slope rel. error", abs(slope / (-kap) - 1), 0.15)
    return res


def region2_painleve():
    res = Result(7, "Region II Painleve profile", True)
    data, tr = radiation_run()
    x = tr.x
    r0 = complex(data.r_at(np.array([0.0]))[0])
    r0 = complex(0.0, r0.imag) if abs(r0.real) <= 1e-8 else r0
    cal = calibrate_alpha(r0, (x, tr.at(30.0)), 30.0)
    sol = solve_painleve(cal.alpha)
    errs = {}
    for t in (30.0, 120.0):
        s = (3 * t) ** (1 / 3)
        sel = np.abs(x) <= 4 * s
        errs[t] = np.max(np.abs(region2_profile(sol, x[sel], t) - tr.at(t)[sel]))
    res.add(f"sup error t=120 (alpha={cal.alpha:.4f}, hypothesis {alpha_hypothesis(r0):.4f})",
            errs[120.0], 4 * 120.0**-0.5)
    res.add("error(120) - error(30)", errs[120.0] - errs[30.0], 0.0, ok=errs[120.0] < errs[30.0])
    return res


# ---------------------------------------------------------------------------
# 8. breather frame in Region I


BREATHER_PACKET = 0.16  # amplitude of the sech(x/4) cos(2 z0 x) radiation packet


def breather_radiation_potential(x):
    z0 = np.sqrt(11 / 12)
    return one_breather(1.0, 0.5, 1.0, x, 0.0) + BREATHER_PACKET * _sech(x / 4) * np.cos(2 * z0 * x)


def breather_frame_region1():
    res = Result(8, "breather-frame Region I correction", True)
    f = breather_radiation_potential
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        data = direct_transform(PotentialSample.from_function(f, L=150, h=0.01), zmax=4.0, nz=512)
    if len(data.breathers) != 1 or data.solitons:
        res.add("spectrum is one breather", 1, 0)
        return res
    ell = data.breathers[0]
    L, t = 1024.0, 80.0
    tr = _quiet_run(f, t, EvolveParams(L, 8192, 5e-4))
    idx, xw = _periodic_window(tr.x, L, ell.velocity * t, 10.0)
    upde = tr.profiles[-1][idx]
    _, ub, _ = asy.region1_breather_frame(ell, t, data, xw, with_correction=False)
    _, uc, rep = asy.region1_breather_frame(ell, t, data, xw)
    e_b = np.max(np.abs(upde - ub))
    e_c = np.max(np.abs(upde - uc))
    res.add("dressed-only error", e_b, np.inf)
    res.add("corrected error < dressed-only error", e_c, e_b, ok=e_c < e_b)
    res.add("corrected error vs 0.5 t^-1/2", e_c, 0.5 * t**-0.5)
    return res


# ---------------------------------------------------------------------------
# 9 and 10: parabolic constants and delta


def synthetic_data(zmax=4.0, n=512):
    """Analytic reflection data with r(-z) = -conj r(z), one soliton and one
    breather; used where a measured r is not needed."""
    z = np.linspace(-zmax, zmax, n)
    r = 0.3 * z * np.exp(-z * z) + 0.8j * _sech(z)
    return ScatteringData(zmax, r, (soliton(0.8, 1.6j),), (breather(0.5, 0.4, 0.7 - 0.2j),))


def parabolic_identities(seed=0):
    res = Result(9, "parabolic-constant identities", True)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for kappa in (-0.05, -0.3, -1.0):
        mod = np.sqrt(np.expm1(-2 * np.pi * kappa))
        r0 = mod * np.exp(1j * rng.uniform(-np.pi, np.pi))
        pc = asy.parabolic_constants(kappa, r0, 1.7, (0j, 0j), (1.0, 1.0))
        worst = max(worst, abs(pc.beta12 * pc.beta21 - kappa))
    res.add("max |b12 b21 - kappa|", worst, 1e-10)
    data = synthetic_data()
    worst = 0.0
    for x, t in ((-30.0, 10.0), (-200.0, 40.0)):
        ctx = FrameContext(x, t)
        z0 = ctx.z0
        B = data.breathers
        pc = asy.parabolic_constants(
            kappa_of(data.r_at(np.array([z0]))[0]), data.r_at(np.array([z0]))[0], ctx.tau,
            (chi_of(data, z0, z0), chi_of(data, z0, -z0)),
            (eta0(data, z0, B, 1), eta0(data, z0, B, -1)),
        )
        worst = max(worst, abs(abs(pc.deltaA0) - 1), abs(abs(pc.deltaB0) - 1))
    res.add("max ||delta0| - 1|", worst, 1e-10)
    return res


def delta_rhp(z0=0.7):
    res = Result(10, "delta scalar RHP", True)
    data = synthetic_data()
    df = make_delta(data, z0, data.breathers)
    s = np.linspace(-z0, z0, 66)[1:-1]
    r = data.r_at(s)
    jump = max(abs(df(v, "+") / df(v, "-") - (1 + abs(rv) ** 2)) for v, rv in zip(s, r))
    res.add("jump ratio error", jump, 1e-6)
    rng = np.random.default_rng(1)
    pts = rng.uniform(-3, 3, 32) + 1j * rng.uniform(0.05, 3, 32)
    sym = max(abs(df(p) * np.conj(df(np.conj(p))) - 1) for p in pts)
    res.add("|delta(z) conj delta(conj z) - 1|", sym, 1e-9)
    far = max(abs(df(1e4 * np.exp(1j * a)) - 1) for a in (0.3, 1.2, 2.0, 2.9))
    res.add("|delta - 1| at |z| = 1e4", far, 1e-3)
    return res


# ---------------------------------------------------------------------------
# 11. Painleve solver


def painleve_solver():
    res = Result(11, "Painleve II solver", True)
    worst_res = worst_bd = worst_odd = 0.0
    for a in (0.3, 0.7, 0.95):
        p = solve_painleve(a)
        m = solve_painleve(-a)
        worst_res = max(worst_res, p.residual_max)
        s = p.s_grid[p.s_grid >= 8.0]
        worst_bd = max(worst_bd, np.max(np.abs(p(s) - a * airy_ai(s))))
        worst_odd = max(worst_odd, np.max(np.abs(p.P + m.P)))
    res.add("ODE residual", worst_res, 1e-8)
    res.add("boundary match s>=8", worst_bd, 1e-9)
    res.add("odd symmetry", worst_odd, 1e-10)
    return res


# ---------------------------------------------------------------------------
# 12. stability of discrete data


def perturbation_stability(eps=1e-3):
    res = Result(12, "stability of discrete data", True)
    cases = (reflectionless([soliton(1.0, 2j)]), reflectionless(breathers=[breather(1.0, 1.0, 1.0)]))
    for data in cases:
        f = lambda x, d=data: reconstruct(d, x, 0.0) + eps * _sech(x)  # noqa: E731
        out = direct_transform(PotentialSample.from_function(f, L=50, h=0.01), zmax=4.0, nz=512)
        label = data.modes[0].kind.value
        res.add(f"{label} count change", abs(len(out.modes) - len(data.modes)), 0)
        if len(out.modes) == len(data.modes):
            a, b = data.modes[0], out.modes[0]
            res.add(f"{label} |dz|/eps", abs(a.z - b.z) / eps, 50)
            res.add(f"{label} |dc|/eps", abs(a.c - b.c) / eps, 50)
    return res


CRITERIA = {
    1: closed_forms,
    2: scattering_round_trip,
    3: unitarity_symmetry,
    4: pde_fidelity,
    5: two_soliton_shifts,
    6: region1_amplitude,
    7: region2_painleve,
    8: breather_frame_region1,
    9: parabolic_identities,
    10: delta_rhp,
    11: painleve_solver,
    12: perturbation_stability,
}

SUITES = {
    "closed-forms": (1, 9, 10, 11),
    "scattering": (2, 3, 12),
    "pde": (4, 5),
    "asymptotics": (6, 7, 8),
    "all": tuple(CRITERIA),
}


def run_suite(name, seed=0):
    if name not in SUITES:
        raise KeyError(name)
    out = []
    for cid in SUITES[name]:
        fn = CRITERIA[cid]
        kwargs = {"seed": seed} if "seed" in fn.__code__.co_varnames else {}
        out.append(fn(**kwargs))
    return out
