"""Reflectionless solutions: closed forms and the discrete pole problem.

The pole problem is posed for the real form U = [[0, -u], [u, 0]] of the
spectral problem, where u = -2i lim z M_12.  Poles come in two types:

* lower poles p (z_k, z_j, -conj z_j): Res_p M_1 = w_p M_2(p)
* upper poles q (conj z_k, conj z_j, -z_j): Res_q M_2 = w_q M_1(q)

Writing Y_q = w_q M_1(q) and X_p = w_p M_2(p) turns the residue conditions
into the linear system

    Y_q / w_q - sum_p X_p / (q - p) = e1,
    X_p / w_p - sum_q Y_q / (p - q) = e2,

and u = -2i sum_q Y_q[0].  Rows are rescaled by w when |w| < 1 so no
weight is ever exponentiated with a large positive real part.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InputError, PoleProximityError, SingularSystemError
from .scattering import DiscreteEigenpair, Kind

_COND_MAX = 1e12


def theta(z, x, t):
    return 4.0 * t * z**3 + x * z


def one_soliton(zeta, c, x, t):
    c = complex(c)
    if c == 0 or abs(c.real) > 1e-8 * abs(c):
        raise InputError("soliton norming constant must be purely imaginary and nonzero")
    eps = 1.0 if c.imag > 0 else -1.0
    omega = np.log(abs(c) / (2 * zeta))
    return 2 * zeta * eps / np.cosh(-2 * zeta * (np.asarray(x) - 4 * zeta**2 * t) + omega)


def breather_phases(xi, eta, c):
    A, B = c.real, c.imag
    w1 = np.arctan2(A * eta - B * xi, -A * xi - B * eta)
    w2 = -np.log(abs(xi / (2 * eta)) * np.sqrt((A * A + B * B) / (xi**2 + eta**2)))
    return w1, w2


def one_breather(xi, eta, c, x, t):
    c = complex(c)
    if c == 0:
        raise InputError("breather norming constant must be nonzero")
    x = np.asarray(x, dtype=float)
    w1, w2 = breather_phases(xi, eta, c)
    n1 = 2 * xi * (x + 4 * (xi**2 - 3 * eta**2) * t) + w1
    n2 = 2 * eta * (x - 4 * (eta**2 - 3 * xi**2) * t) + w2
    # divide through by cosh^2 so large |n2| cannot overflow
    e = np.exp(-2 * np.abs(n2))
    sech = 2 * np.exp(-np.abs(n2)) / (1 + e)
    tanh = np.sign(n2) * (1 - e) / (1 + e)
    k = eta / xi
    num = (xi * np.sin(n1) + eta * tanh * np.cos(n1)) * sech
    den = 1 + (k * np.cos(n1) * sech) ** 2
    return -4 * k * num / den


@dataclass(frozen=True)
class PoleSystem:
    lower: np.ndarray  # poles p
    upper: np.ndarray  # poles q
    log_w_lower: np.ndarray  # log of residue weights, shape (..., n_lower)
    log_w_upper: np.ndarray
    x: object = 0.0
    t: float = 0.0

    @property
    def poles(self):
        return np.concatenate([self.upper, self.lower])

    @property
    def weights(self):
        return np.exp(np.concatenate([self.log_w_upper, self.log_w_lower], axis=-1))


@dataclass
class DiscreteBCSolution:
    mu_values: dict
    u: object
    Y: np.ndarray = None
    X: np.ndarray = None
    system: PoleSystem = None


def dressed_constant(pair, dressing):
    if dressing is None:
        return pair.c
    return pair.c * dressing(pair.z) ** -2


def assemble_pole_system(solitons=(), breathers=(), x=0.0, t=0.0, dressing=None):
    """Expand representatives into the full pole set with log-weights.

    ``x`` may be an array; weights then carry a leading x axis.  When
    ``dressing`` (a scalar function delta) is given each norming constant
    is replaced by c delta(z)^-2 before expansion.
    """
    x = np.asarray(x, dtype=float)[..., None]
    lower, upper, lwl, lwu = [], [], [], []

    def logc(c):
        return np.log(complex(c))

    for e in solitons:
        c = dressed_constant(e, dressing)
        z = e.z
        lower.append(z)
        lwl.append(logc(c) + 2j * theta(z, x, t))
        upper.append(np.conj(z))
        lwu.append(logc(-np.conj(c)) - 2j * theta(np.conj(z), x, t))
    for e in breathers:
        c = dressed_constant(e, dressing)
        z = e.z
        zb = np.conj(z)
        lower += [z, -zb]
        lwl += [logc(c) + 2j * theta(z, x, t), logc(-np.conj(c)) + 2j * theta(-zb, x, t)]
        upper += [zb, -z]
        lwu += [logc(-np.conj(c)) - 2j * theta(zb, x, t), logc(c) - 2j * theta(-z, x, t)]

    lower = np.array(lower, dtype=complex)
    upper = np.array(upper, dtype=complex)
    allp = np.concatenate([lower, upper])
    for i in range(allp.size):
        for j in range(i):
            if abs(allp[i] - allp[j]) < 1e-10:
                raise SingularSystemError(f"pole collision at {allp[i]}")
    lwl = np.concatenate(lwl, axis=-1) if lwl else np.zeros(x.shape[:-1] + (0,), complex)
    lwu = np.concatenate(lwu, axis=-1) if lwu else np.zeros(x.shape[:-1] + (0,), complex)
    # deterministic ordering by (Im, Re) within each type
    ol = np.lexsort((lower.real, lower.imag)) if lower.size else np.arange(0)
    ou = np.lexsort((upper.real, upper.imag)) if upper.size else np.arange(0)
    return PoleSystem(lower[ol], upper[ou], lwl[..., ol], lwu[..., ou], x[..., 0], t)


def _solve(system):
    p, q = system.lower, system.upper
    nl, nu = p.size, q.size
    n = nl + nu
    lw = np.concatenate([system.log_w_upper, system.log_w_lower], axis=-1)
    batch = lw.shape[:-1]
    # Cauchy couplings: rows of upper poles couple to lower unknowns and back
    C = np.zeros((n, n), complex)
    if nl and nu:
        C[:nu, nu:] = -1.0 / (q[:, None] - p[None, :])
        C[nu:, :nu] = -1.0 / (p[:, None] - q[None, :])
    rhs = np.zeros((n, 2), complex)
    rhs[:nu, 0] = 1.0
    rhs[nu:, 1] = 1.0
    # row i: exp(-lw_i) * v_i + (C v)_i = rhs_i; multiply by exp(lw_i) when Re lw_i < 0
    big = lw.real >= 0
    diag = np.where(big, np.exp(-np.where(big, lw, 0)), 1.0)
    scale = np.where(big, 1.0, np.exp(np.where(big, 0, lw)))
    A = C * scale[..., :, None]
    idx = np.arange(n)
    A[..., idx, idx] += diag
    b = rhs * scale[..., :, None]
    # column equilibration
    colmax = np.max(np.abs(A), axis=-2, keepdims=True)
    colmax = np.where(colmax == 0, 1.0, colmax)
    As = A / colmax
    cond = np.linalg.cond(As)
    if np.any(~np.isfinite(cond)) or np.any(cond > _COND_MAX):
        raise SingularSystemError(f"pole system condition number {np.max(cond):.3g} exceeds 1e12")
    v = np.linalg.solve(As, b) / np.swapaxes(colmax, -1, -2)
    return v[..., :nu, :], v[..., nu:, :], batch


def discrete_rhp_solve(system: PoleSystem):
    """Solve the discrete residue problem; u may be an array over x."""
    n = system.lower.size + system.upper.size
    if n == 0:
        u = np.zeros(np.shape(system.x))
        return DiscreteBCSolution({}, u if u.ndim else 0.0, system=system)
    Y, X, _ = _solve(system)
    uc = -2j * np.sum(Y[..., 0], axis=-1)
    if np.max(np.abs(uc.imag) / (1 + np.abs(uc.real)), initial=0.0) > 1e-8:
        raise SingularSystemError("reconstructed potential is not real")
    u = uc.real
    wu = np.exp(system.log_w_upper)
    wl = np.exp(system.log_w_lower)
    mu = {}
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for i, q in enumerate(system.upper):
            mu[complex(q)] = Y[..., i, :] / wu[..., i, None]
        for i, p in enumerate(system.lower):
            mu[complex(p)] = X[..., i, :] / wl[..., i, None]
    return DiscreteBCSolution(mu, u if np.ndim(u) else float(u), Y, X, system)


def reconstruct(data_or_modes, x, t, dressing=None):
    """u(x, t) from purely discrete data (r is ignored)."""
    sol = getattr(data_or_modes, "solitons", None)
    if sol is None:
        modes = list(data_or_modes)
        sol = [m for m in modes if m.kind is Kind.SOLITON]
        br = [m for m in modes if m.kind is Kind.BREATHER]
    else:
        br = data_or_modes.breathers
    system = assemble_pole_system(sol, br, x, t, dressing)
    return discrete_rhp_solve(system).u


_D = np.array([1.0, -1j])


def rhp_matrix(solution: DiscreteBCSolution, z_eval):
    """Solution matrix at z_eval in the AKNS normalization u = 2 lim z m_12."""
    system = solution.system
    poles = system.poles
    z = complex(z_eval)
    if poles.size and np.min(np.abs(poles - z)) < 1e-6:
        raise PoleProximityError("evaluation point too close to a pole")
    if np.ndim(system.x):
        raise InputError("rhp_matrix needs a single (x, t)")
    m = np.eye(2, dtype=complex)
    if solution.Y is not None:
        m[:, 0] += np.sum(solution.X / (z - system.lower)[:, None], axis=0)
        m[:, 1] += np.sum(solution.Y / (z - system.upper)[:, None], axis=0)
    # real form -> AKNS form: m_A = D^-1 m D with D = diag(1, -i)
    return m * _D[None, :] / _D[:, None]


def breather_matrix(pair: DiscreteEigenpair, dressed_c, x, t, z_eval):
    e = DiscreteEigenpair(pair.z, complex(dressed_c), Kind.BREATHER)
    sol = discrete_rhp_solve(assemble_pole_system((), (e,), float(x), float(t)))
    return rhp_matrix(sol, z_eval)
