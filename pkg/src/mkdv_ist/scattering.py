"""Direct scattering for the AKNS problem psi_x = (-i z sigma3 + U) psi.

The potential enters as U = [[0, i u], [i u, 0]] and the Jost functions are
normalized as m = psi e^{i x z sigma3}, so m -> I at the respective end of
the line.  Reflection coefficients are reported for this form.  Norming
constants are reported in the real form U = [[0, -u], [u, 0]] (obtained
by the constant gauge diag(1, -i)), where they are purely imaginary for
solitons and the sign of Im c is the sign of the soliton.
"""

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    DependenceResidualError,
    InputError,
    MultipleZeroError,
    NonDecayedPotentialError,
    NumericalError,
    RealAxisZeroError,
    WindingError,
)

_SQ3 = np.sqrt(3.0)


@dataclass(frozen=True)
class PotentialSample:
    x_grid: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x_grid, dtype=float)
        u = np.asarray(self.u)
        if np.iscomplexobj(u):
            if np.max(np.abs(u.imag), initial=0.0) > 0:
                raise InputError("potential must be real")
            u = u.real
        u = u.astype(float)
        if x.ndim != 1 or x.shape != u.shape or x.size < 8:
            raise InputError("x_grid and u must be 1-d arrays of equal length >= 8")
        dx = np.diff(x)
        if np.any(dx <= 0):
            raise InputError("x_grid must be strictly increasing")
        if np.max(np.abs(dx - dx[0])) > 1e-9 * max(1.0, abs(dx[0])):
            raise InputError("x_grid must be uniform")
        if not np.all(np.isfinite(u)):
            raise InputError("potential has non-finite values")
        if abs(u[0]) > 1e-8 or abs(u[-1]) > 1e-8:
            raise NonDecayedPotentialError(
                f"|u| at the grid ends is {max(abs(u[0]), abs(u[-1])):.3g} > 1e-8"
            )
        object.__setattr__(self, "x_grid", x)
        object.__setattr__(self, "u", u)

    @property
    def h(self):
        return self.x_grid[1] - self.x_grid[0]

    @classmethod
    def from_function(cls, f, L=60.0, h=0.01):
        n = int(round(L / h)) + 1
        x = np.linspace(-L / 2, L / 2, n)
        u = np.asarray(f(x), dtype=float)
        u[np.abs(u) < 1e-300] = 0.0
        return cls(x, u)


@dataclass
class JostPair:
    x_grid: np.ndarray
    m_minus: np.ndarray  # shape (n, 2, 2)
    m_plus: np.ndarray
    z: complex


@dataclass(frozen=True)
class TransitionSample:
    z: float
    a: complex
    b: complex

    @property
    def a_breve(self):
        return np.conj(self.a)

    @property
    def b_breve(self):
        return -np.conj(self.b)


class Kind(str, Enum):
    SOLITON = "Soliton"
    BREATHER = "BreatherRep"


@dataclass(frozen=True)
class DiscreteEigenpair:
    z: complex
    c: complex | None = None
    kind: Kind = Kind.SOLITON

    @property
    def velocity(self):
        xi, eta = self.z.real, self.z.imag
        if self.kind is Kind.SOLITON:
            return 4.0 * eta**2
        return 4.0 * eta**2 - 12.0 * xi**2


def soliton(zeta, c):
    return DiscreteEigenpair(1j * zeta, complex(c), Kind.SOLITON)


def breather(xi, eta, c):
    return DiscreteEigenpair(complex(xi, eta), complex(c), Kind.BREATHER)


@dataclass(frozen=True)
class ScatteringData:
    zmax: float
    r: np.ndarray
    solitons: tuple = ()
    breathers: tuple = ()
    t: float = 0.0
    report: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        r = np.asarray(self.r, dtype=complex)
        object.__setattr__(self, "r", r)
        object.__setattr__(
            self, "solitons", tuple(sorted(self.solitons, key=lambda e: e.z.imag))
        )
        object.__setattr__(
            self, "breathers", tuple(sorted(self.breathers, key=lambda e: e.velocity))
        )

    @property
    def z_grid(self):
        return np.linspace(-self.zmax, self.zmax, self.r.size)

    @property
    def modes(self):
        return self.solitons + self.breathers

    def r_at(self, z):
        """Cubic interpolation of r (zero outside the grid)."""
        if self.r.size < 4 or not np.any(self.r):
            return np.zeros_like(np.asarray(z, dtype=float), dtype=complex)
        spline = _r_spline(self)
        z = np.asarray(z, dtype=float)
        out = spline(z)
        return np.where(np.abs(z) <= self.zmax, out, 0.0)


def _r_spline(data):
    zg = data.z_grid
    re = CubicSpline(zg, data.r.real)
    im = CubicSpline(zg, data.r.imag)
    return lambda z: re(z) + 1j * im(z)


def reflectionless(solitons=(), breathers=(), zmax=4.0, nz=512, t=0.0):
    return ScatteringData(zmax, np.zeros(nz, complex), tuple(solitons), tuple(breathers), t)


# ---------------------------------------------------------------------------
# Jost solutions


def _gauss_values(x, u, stride):
    """u at the two Gauss points of each step of length stride*h."""
    spline = CubicSpline(x, u)
    xs = x[::stride]
    H = xs[1] - xs[0]
    g1 = xs[:-1] + H * (0.5 - _SQ3 / 6)
    g2 = xs[:-1] + H * (0.5 + _SQ3 / 6)
    return H, spline(g1), spline(g2)


def _magnus(z, H, u1, u2):
    """Fourth-order Magnus exponent for one step; returns (alpha, beta, gamma)
    with Omega = [[alpha, beta], [gamma, -alpha]], broadcast over z."""
    # A_j = [[-iz, i u_j], [i u_j, iz]], so [A2, A1] = 2z(u1 - u2) offdiag(1, -1)
    alpha = -1j * z * H
    s = 0.5j * H * (u1 + u2)
    d = (_SQ3 / 6) * H**2 * z * (u1 - u2)
    return alpha, s + d, s - d


def _step_matrices(z, H, ug1, ug2, sign):
    """Step propagators exp(sign * Omega), shape (nsteps, nz, 2, 2)."""
    alpha, beta, gamma = _magnus(z[None, :], H, ug1[:, None], ug2[:, None])
    alpha = np.broadcast_to(alpha, beta.shape)
    s = np.sqrt(alpha * alpha + beta * gamma)
    ch = np.cosh(s)
    small = np.abs(s) < 1e-8
    sh = np.where(small, 1.0 + s * s / 6, np.sinh(s) / np.where(small, 1.0, s)) * sign
    P = np.empty(alpha.shape + (2, 2), complex)
    P[..., 0, 0] = ch + sh * alpha
    P[..., 0, 1] = sh * beta
    P[..., 1, 0] = sh * gamma
    P[..., 1, 1] = ch - sh * alpha
    return P


def _ordered_product(P):
    """P[n-1] @ ... @ P[0] by pairwise reduction over the leading axis."""
    if P.shape[0] == 0:
        return np.broadcast_to(np.eye(2, dtype=complex), P.shape[1:]).copy()
    while P.shape[0] > 1:
        if P.shape[0] % 2:
            P = np.concatenate([P[:-2], (P[-1] @ P[-2])[None]])
            if P.shape[0] == 1:
                break
        P = P[1::2] @ P[0::2]
    return P[0]


def _sweep(x, u, z, stride, forward, record, chunk=64):
    """m at the recorded node indices, array (len(record), nz, 2, 2).

    Record indices must be multiples of ``stride``.  Forward sweeps start at
    the left end with m = I (m^-), backward sweeps at the right end (m^+).
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    H, ug1, ug2 = _gauss_values(x, u, stride)
    steps = [i // stride for i in record]
    nsteps = ug1.size
    out = np.empty((len(record), z.size, 2, 2), complex)
    order = np.argsort(steps) if forward else np.argsort(steps)[::-1]
    with np.errstate(over="ignore", invalid="ignore"):
        for lo in range(0, z.size, chunk):
            zc = z[lo:lo + chunk]
            P = _step_matrices(zc, H, ug1, ug2, 1.0 if forward else -1.0)
            m = np.broadcast_to(np.eye(2, dtype=complex), (zc.size, 2, 2)).copy()
            pos = 0 if forward else nsteps
            for k in order:
                target = steps[k]
                if forward:
                    seg = _ordered_product(P[pos:target])
                    n = target - pos
                else:
                    seg = _ordered_product(P[target:pos][::-1])
                    n = pos - target
                ph = np.exp(1j * n * H * zc)
                m = seg @ m
                if forward:
                    m[:, :, 0] *= ph[:, None]
                    m[:, :, 1] /= ph[:, None]
                else:
                    m[:, :, 0] /= ph[:, None]
                    m[:, :, 1] *= ph[:, None]
                pos = target
                out[k, lo:lo + chunk] = m
    return out


def _path(x, u, z, stride, forward):
    """m on every stride-th node for a single z, shape (nnodes, 2, 2)."""
    H, ug1, ug2 = _gauss_values(x, u, stride)
    z = complex(z)
    P = _step_matrices(np.array([z]), H, ug1, ug2, 1.0 if forward else -1.0)[:, 0]
    n = ug1.size
    out = np.empty((n + 1, 2, 2), complex)
    m = np.eye(2, dtype=complex)
    ph = np.exp(1j * H * z)
    D = np.array([ph, 1 / ph]) if forward else np.array([1 / ph, ph])
    with np.errstate(over="ignore", invalid="ignore"):
        if forward:
            out[0] = m
            for k in range(n):
                m = (P[k] @ m) * D
                out[k + 1] = m
        else:
            out[n] = m
            for k in range(n - 1, -1, -1):
                m = (P[k] @ m) * D
                out[k] = m
    return out


def _even_grid(u0):
    x, u = u0.x_grid, u0.u
    if (x.size - 1) % 2:
        x, u = x[:-1], u[:-1]
    return x, u


def _extrapolated(x, u, z, forward, record):
    fine = _sweep(x, u, z, 1, forward, record)
    coarse = _sweep(x, u, z, 2, forward, record)
    # the non-analytic columns may overflow far from the real axis; they are
    # discarded by the callers
    with np.errstate(over="ignore", invalid="ignore"):
        return (16.0 * fine - coarse) / 15.0


def _checkpoint(x, x0):
    i = int(np.argmin(np.abs(x - x0)))
    return i - (i % 2)


def jost_solve(u0: PotentialSample, z):
    """Jost functions m^- (normalized at the left end) and m^+ (right end).

    For Im z > 0 only the columns analytic in the upper half plane
    (m^-_1 and m^+_2) are meaningful; the others are returned as NaN.
    Fields are returned on every other grid node, where step-doubling
    extrapolation applies.
    """
    z = complex(z)
    x, u = _even_grid(u0)
    if not np.any(u):
        xs = x[::2]
        eye = np.broadcast_to(np.eye(2, dtype=complex), (xs.size, 2, 2)).copy()
        return JostPair(xs, eye, eye.copy(), z)
    mm = (16.0 * _path(x, u, z, 1, True)[::2] - _path(x, u, z, 2, True)) / 15.0
    mp = (16.0 * _path(x, u, z, 1, False)[::2] - _path(x, u, z, 2, False)) / 15.0
    if z.imag > 0:
        mm[:, :, 1] = np.nan
        mp[:, :, 0] = np.nan
    elif z.imag < 0:
        mm[:, :, 0] = np.nan
        mp[:, :, 1] = np.nan
    return JostPair(x[::2], mm, mp, z)


def _det2(c1, c2):
    return c1[..., 0] * c2[..., 1] - c1[..., 1] * c2[..., 0]


def _coefficients(u0, z, at=(0.0,)):
    """(a, b, a_breve) at each checkpoint for real z arrays."""
    x, u = _even_grid(u0)
    idx = [_checkpoint(x, p) for p in at]
    mm = _extrapolated(x, u, z, True, idx)
    mp = _extrapolated(x, u, z, False, idx)
    xc = x[idx][:, None]
    a = _det2(mp[..., :, 0], mm[..., :, 1])
    ab = _det2(mm[..., :, 0], mp[..., :, 1])
    b = np.exp(-2j * xc * z) * _det2(mm[..., :, 0], mp[..., :, 0])
    return a, b, ab


def a_breve(u0: PotentialSample, z):
    """a_breve(z) = det(m^-_1, m^+_2) at x = 0, analytic for Im z > 0."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if not np.any(u0.u):
        return np.ones_like(z)
    x, u = _even_grid(u0)
    i0 = [_checkpoint(x, 0.0)]
    mm = _extrapolated(x, u, z, True, i0)[0]
    mp = _extrapolated(x, u, z, False, i0)[0]
    return _det2(mm[..., :, 0], mp[..., :, 1])


def transition_coefficients(u0: PotentialSample, z_grid, check_points=(-2.0, 2.0), tol=1e-8):
    z = np.asarray(z_grid, dtype=float)
    if np.max(np.abs(z + z[::-1])) > 1e-12 * max(1.0, np.max(np.abs(z))):
        raise InputError("z_grid must be symmetric about 0")
    if not np.any(u0.u):
        return [TransitionSample(float(zi), 1.0 + 0j, 0j) for zi in z]
    a, b, _ = _coefficients(u0, z, (0.0,) + tuple(check_points))
    drift = max(np.max(np.abs(a[1:] - a[0])), np.max(np.abs(b[1:] - b[0])))
    if drift > tol:
        raise NumericalError(
            f"transition coefficients depend on the evaluation point ({drift:.2e});"
            " refine the potential grid"
        )
    return [TransitionSample(float(zi), complex(ai), complex(bi)) for zi, ai, bi in zip(z, a[0], b[0])]


def reflection(sample: TransitionSample):
    ab = sample.a_breve
    if abs(ab) <= 1e-12:
        raise RealAxisZeroError(f"a_breve vanishes on the real axis at z = {sample.z}")
    return -sample.b / ab


# ---------------------------------------------------------------------------
# discrete spectrum


def _decimated(u0, h_target=0.04):
    """Coarser copy of the potential, adequate for zero counting."""
    k = max(1, int(round(h_target / u0.h)))
    return PotentialSample(u0.x_grid[::k], u0.u[::k]) if k > 1 else u0


def _winding(u0, corners, n=64, max_n=2048, moment=False):
    """Argument-principle count of zeros of a_breve inside a rectangle.

    The phase increment between neighbouring boundary samples must stay
    below pi/4, and the count must agree between n and 2n samples.  With
    ``moment`` the sum of the enclosed zeros is returned as well.
    """
    x0, x1, y0, y1 = corners
    prev = None
    while n <= max_n:
        s = np.linspace(0.0, 1.0, n, endpoint=False)
        edges = np.concatenate([
            x0 + (x1 - x0) * s + 1j * y0,
            x1 + 1j * (y0 + (y1 - y0) * s),
            x1 - (x1 - x0) * s + 1j * y1,
            x0 + 1j * (y1 - (y1 - y0) * s),
        ])
        f = a_breve(u0, edges)
        if np.any(np.abs(f) < 1e-14):
            raise WindingError("a_breve vanishes on the counting contour")
        dlog = np.log(np.roll(f, -1) / f)
        dphi = dlog.imag
        count = np.sum(dphi) / (2 * np.pi)
        resid = abs(count - round(count))
        resolved = np.max(np.abs(dphi)) < np.pi / 4 and resid <= 0.1
        if resolved and prev is not None and round(count) == prev:
            if moment:
                zmid = 0.5 * (edges + np.roll(edges, -1))
                return int(round(count)), np.sum(zmid * dlog) / (2j * np.pi)
            return int(round(count))
        prev = int(round(count)) if resolved else None
        n *= 2
    raise WindingError("argument-principle count did not converge")


def _newton(u0, z, tol=1e-10, on_axis=False, maxit=50):
    h = 1e-5
    for _ in range(maxit):
        f, fp, fm = a_breve(u0, [z, z + h, z - h]) if not on_axis else a_breve(
            u0, [z, z + 1j * h, z - 1j * h]
        )
        d = (fp - fm) / (2 * h) if not on_axis else (fp - fm) / (2j * h)
        if abs(f) <= tol:
            return z, abs(f)
        step = f / d
        if on_axis:
            step = 1j * (step / 1j).real
        z = z - step
        if z.imag <= 0:
            raise NumericalError("Newton iteration left the upper half plane")
    f = a_breve(u0, [z])[0]
    if abs(f) > tol:
        raise NumericalError(f"Newton did not reach |a_breve| <= {tol:g} (got {abs(f):.2e})")
    return z, abs(f)


def default_box(u0):
    Z = 2.0 + 2.0 * float(np.max(np.abs(u0.u)))
    return (-Z, Z, 1e-3, Z)


def find_discrete_spectrum(u0: PotentialSample, box=None):
    """Zeros of a_breve in a rectangle of the upper half plane.

    Returns (eigenpairs without norming constants, report).  The default
    rectangle is symmetric about the imaginary axis so that zeros on it are
    interior; only representatives with Re z >= 0 are returned.
    """
    if box is None:
        box = default_box(u0)
    x0, x1, y0, y1 = box
    if y0 < 1e-3:
        raise InputError("search box must stay at least 1e-3 above the real axis")
    if not np.any(u0.u):
        return [], {"count": 0, "box": list(box), "near_boundary": False}
    coarse = _decimated(u0)
    total = _winding(coarse, box)
    # bisect until each box holds at most one zero; split slightly off-centre
    # so the imaginary axis never lies on a cut
    isolated = []
    stack = [(tuple(box), total)]
    depth = 0
    while stack:
        depth += 1
        if depth > 200:
            raise MultipleZeroError("zero isolation did not terminate")
        b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            isolated.append((b, _winding(coarse, b, moment=True)[1]))
            continue
        bx0, bx1, by0, by1 = b
        if (bx1 - bx0) < 1e-6 and (by1 - by0) < 1e-6:
            raise MultipleZeroError("zeros closer than 1e-6 (non-simple spectrum?)")
        if bx1 - bx0 >= by1 - by0:
            xm = bx0 + 0.4937 * (bx1 - bx0)
            halves = [(bx0, xm, by0, by1), (xm, bx1, by0, by1)]
        else:
            ym = by0 + 0.4937 * (by1 - by0)
            halves = [(bx0, bx1, by0, ym), (bx0, bx1, ym, by1)]
        n0 = _winding(coarse, halves[0])
        stack.append((halves[0], n0))
        stack.append((halves[1], n - n0))

    zeros = []
    for b, start in isolated:
        z, _ = _newton(u0, complex(start))
        if abs(z.real) <= 1e-6:
            z, _ = _newton(u0, complex(0.0, z.imag), on_axis=True)
            z = complex(0.0, z.imag)
        zeros.append(z)
    for i in range(len(zeros)):
        for j in range(i):
            if abs(zeros[i] - zeros[j]) <= 1e-8:
                raise MultipleZeroError("Newton iterations converged to the same zero")
    if len(zeros) != total:
        raise WindingError("number of refined zeros differs from the winding count")

    margin = 0.05 * min(x1 - x0, y1 - y0)
    near = any(
        min(z.real - x0, x1 - z.real, z.imag - y0, y1 - z.imag) < margin for z in zeros
    )
    pairs = []
    for z in zeros:
        if z.real == 0.0:
            pairs.append(DiscreteEigenpair(z, None, Kind.SOLITON))
        elif z.real > 0:
            pairs.append(DiscreteEigenpair(z, None, Kind.BREATHER))
    pairs.sort(key=lambda e: (e.kind is Kind.BREATHER, e.z.imag, e.z.real))
    return pairs, {"count": total, "box": list(box), "near_boundary": near}


def norming_constants(u0: PotentialSample, zeros, window=None):
    """Attach norming constants c = b_i / a_breve'(z_i) to each eigenvalue."""
    out = []
    allz = [e.z for e in zeros] + [-np.conj(e.z) for e in zeros if e.kind is Kind.BREATHER]
    for e in zeros:
        z = e.z
        jp = jost_solve(u0, z)
        x = jp.x_grid
        if window is None:
            # central third of the grid, cut to a few decay lengths around the
            # potential's centre where both columns are integrated stably
            xc = np.sum(u0.x_grid * u0.u**2) / np.sum(u0.u**2)
            lo = max(x[0] + (x[-1] - x[0]) / 3, xc - 3.0 / z.imag)
            hi = min(x[-1] - (x[-1] - x[0]) / 3, xc + 3.0 / z.imag)
        else:
            lo, hi = window
        sel = (x >= lo) & (x <= hi)
        w = jp.m_minus[sel, :, 0].ravel()
        v = (np.exp(2j * x[sel] * z)[:, None] * jp.m_plus[sel, :, 1]).ravel()
        b = np.vdot(v, w) / np.vdot(v, v)
        resid = np.linalg.norm(w - b * v) / np.linalg.norm(w)
        if resid > 1e-4:
            raise DependenceResidualError(f"column proportionality residual {resid:.2e}")
        others = [abs(z - o) for o in allz if o != z]
        rho = min([1e-2] + [0.5 * d for d in others])
        th = 2 * np.pi * np.arange(32) / 32
        vals = a_breve(u0, z + rho * np.exp(1j * th))
        dab = np.mean(vals * np.exp(-1j * th)) / rho
        if abs(dab) < 1e-8:
            raise MultipleZeroError("a_breve'(z) vanishes (non-simple zero)")
        # b and a_breve' are computed for U = [[0, iu], [iu, 0]]; the real
        # form diag(1, -i) conjugate carries b -> -i b
        c = -1j * b / dab
        if e.kind is Kind.SOLITON:
            c = 1j * c.imag if abs(c.real) <= 1e-6 * abs(c) else c
        out.append(replace(e, c=complex(c)))
    return out


# ---------------------------------------------------------------------------
# time evolution and genericity


def evolve_scattering(data: ScatteringData, t):
    if data.t != 0:
        raise InputError("evolve_scattering expects data at t = 0")
    if t == 0:
        return data
    z = data.z_grid
    r = data.r * np.exp(8j * t * z**3)
    sol = tuple(replace(e, c=e.c * np.exp(8j * t * e.z**3)) for e in data.solitons)
    br = tuple(replace(e, c=e.c * np.exp(8j * t * e.z**3)) for e in data.breathers)
    return ScatteringData(data.zmax, r, sol, br, float(t), dict(data.report))


def validate_genericity(data: ScatteringData, a_breve_on_grid=None, gap=1e-6):
    """Report of genericity violations (empty list means generic)."""
    violations = []
    modes = list(data.modes)
    for i in range(len(modes)):
        for j in range(i):
            if abs(modes[i].z - modes[j].z) < gap:
                violations.append(f"repeated eigenvalue {modes[i].z} (simplicity)")
            elif abs(modes[i].velocity - modes[j].velocity) < gap:
                violations.append(
                    f"modes {modes[j].z} and {modes[i].z} share velocity {modes[i].velocity:.6g}"
                )
    if a_breve_on_grid is not None:
        bad = np.abs(a_breve_on_grid) < gap
        if np.any(bad):
            violations.append(f"a_breve vanishes on the real axis near z = {data.z_grid[bad][0]:.6g}")
    return {"generic": not violations, "violations": violations}


def direct_transform(u0: PotentialSample, zmax=4.0, nz=512, box=None):
    """Full scattering data (reflection on a symmetric grid plus spectrum)."""
    if nz % 2:
        raise InputError("nz must be even so that z = 0 is not a node")
    z = np.linspace(-zmax, zmax, nz)
    if not np.any(u0.u):
        return ScatteringData(zmax, np.zeros(nz, complex), report={"count": 0, "generic": True, "violations": []})
    samples = transition_coefficients(u0, z)
    a = np.array([s.a for s in samples])
    b = np.array([s.b for s in samples])
    ab = np.conj(a)
    if np.any(np.abs(ab) <= 1e-12):
        raise RealAxisZeroError("a_breve vanishes on the real axis")
    r = -b / ab
    zeros, rep = find_discrete_spectrum(u0, box)
    pairs = norming_constants(u0, zeros)
    data = ScatteringData(
        zmax, r,
        tuple(p for p in pairs if p.kind is Kind.SOLITON),
        tuple(p for p in pairs if p.kind is Kind.BREATHER),
    )
    gen = validate_genericity(data, ab)
    rep = dict(rep, unitarity=float(np.max(np.abs(np.abs(a) ** 2 + np.abs(b) ** 2 - 1))),
               max_abs_b=float(np.max(np.abs(b))), **gen)
    return replace(data, report=rep)
