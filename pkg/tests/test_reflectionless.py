import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from mkdv_ist.errors import InputError, PoleProximityError
from mkdv_ist.reflectionless import (
    assemble_pole_system,
    breather_phases,
    discrete_rhp_solve,
    one_breather,
    one_soliton,
    reconstruct,
    rhp_matrix,
)
from mkdv_ist.scattering import breather, reflectionless, soliton

x_s, t_s = sp.symbols("x t", real=True)


def sympy_breather(xi, eta, A, B):
    """Breather closed form built symbolically; also used for PDE residuals."""
    xi, eta, A, B = map(sp.nsimplify, (xi, eta, A, B))
    w1 = sp.atan2(A * eta - B * xi, -A * xi - B * eta)
    w2 = -sp.log(sp.Abs(xi / (2 * eta)) * sp.sqrt((A**2 + B**2) / (xi**2 + eta**2)))
    n1 = 2 * xi * (x_s + 4 * (xi**2 - 3 * eta**2) * t_s) + w1
    n2 = 2 * eta * (x_s - 4 * (eta**2 - 3 * xi**2) * t_s) + w2
    k = eta / xi
    num = xi * sp.cosh(n2) * sp.sin(n1) + eta * sp.sinh(n2) * sp.cos(n1)
    return -4 * k * num / (sp.cosh(n2) ** 2 + k**2 * sp.cos(n1) ** 2)


def test_breather_reference_value():
    ref = sympy_breather(1, 1, 1, 0).subs({x_s: 0, t_s: 0})
    assert float(ref.evalf(30)) == pytest.approx(-0.329897, abs=5e-7)
    assert one_breather(1.0, 1.0, 1.0, 0.0, 0.0) == pytest.approx(float(ref.evalf(30)), abs=1e-14)


@pytest.mark.parametrize("xi,eta,c", [(1.0, 1.0, 1.0), (0.6, 0.8, 0.5 - 0.3j), (1.3, 0.4, -2j)])
def test_breather_matches_symbolic_and_solves_mkdv(xi, eta, c):
    u = sympy_breather(xi, eta, c.real if isinstance(c, complex) else c, complex(c).imag)
    res = sp.diff(u, t_s) + sp.diff(u, x_s, 3) + 6 * u**2 * sp.diff(u, x_s)
    f_u = sp.lambdify((x_s, t_s), u, "numpy")
    f_r = sp.lambdify((x_s, t_s), res, "numpy")
    xs = np.linspace(-3, 3, 13)
    for t in (0.0, 0.4):
        assert np.max(np.abs(one_breather(xi, eta, c, xs, t) - f_u(xs, t))) < 1e-12
        assert np.max(np.abs(f_r(xs, t))) < 1e-9


def test_soliton_solves_mkdv():
    zeta, c = sp.Rational(7, 10), sp.Rational(13, 10)
    u = 2 * zeta / sp.cosh(-2 * zeta * (x_s - 4 * zeta**2 * t_s) + sp.log(c / (2 * zeta)))
    res = sp.simplify(sp.diff(u, t_s) + sp.diff(u, x_s, 3) + 6 * u**2 * sp.diff(u, x_s))
    assert res == 0
    f = sp.lambdify((x_s, t_s), u, "numpy")
    xs = np.linspace(-5, 5, 11)
    assert np.max(np.abs(one_soliton(0.7, 1.3j, xs, 0.8) - f(xs, 0.8))) < 1e-14
    assert np.allclose(one_soliton(0.7, -1.3j, xs, 0.8), -f(xs, 0.8))


@given(st.floats(0.2, 2.0), st.floats(0.1, 5.0), st.booleans(), st.floats(-3.0, 3.0))
def test_pole_solver_matches_soliton(zeta, cm, sign, t):
    c = 1j * cm * (1 if sign else -1)
    x = np.linspace(-6, 6, 25) + 4 * zeta**2 * t
    u = discrete_rhp_solve(assemble_pole_system((soliton(zeta, c),), (), x, t)).u
    assert np.max(np.abs(u - one_soliton(zeta, c, x, t))) < 1e-10


@given(st.floats(0.2, 1.5), st.floats(0.2, 1.5), st.floats(-2.0, 2.0), st.floats(-2.0, 2.0))
def test_pole_solver_matches_breather(xi, eta, A, B):
    if abs(complex(A, B)) < 0.05:
        return
    x = np.linspace(-4, 4, 17)
    u = discrete_rhp_solve(assemble_pole_system((), (breather(xi, eta, complex(A, B)),), x, 0.3)).u
    assert np.max(np.abs(u - one_breather(xi, eta, complex(A, B), x, 0.3))) < 1e-9


def test_two_soliton_asymptotic_amplitudes():
    data = reflectionless([soliton(0.5, 1j), soliton(1.0, 2j)])
    x = np.linspace(-80, 80, 4001)
    u = reconstruct(data, x, 15.0)
    # peaks are sampled on a grid of spacing 0.04
    assert np.max(u) == pytest.approx(2.0, abs=1e-4)
    assert np.max(u[x < 30]) == pytest.approx(1.0, abs=1e-4)


def test_breather_phase_branch():
    w1, w2 = breather_phases(1.0, 1.0, 1.0 + 0j)
    assert w1 == pytest.approx(np.arctan2(1.0, -1.0))
    assert w2 == pytest.approx(-np.log(0.5 * np.sqrt(0.5)))


def test_rhp_matrix_normalization_and_guards():
    sol = discrete_rhp_solve(assemble_pole_system((soliton(1.0, 2j),), (), 0.3, 0.0))
    m = rhp_matrix(sol, 1e6 + 0.5j)
    assert np.allclose(m, np.eye(2), atol=1e-5)
    # u = 2 lim z m_12 in this normalization
    z = 1e7j
    assert abs(2 * z * rhp_matrix(sol, z)[0, 1] - one_soliton(1.0, 2j, 0.3, 0.0)) < 1e-5
    with pytest.raises(PoleProximityError):
        rhp_matrix(sol, 1j)


@pytest.mark.parametrize("c", [0.0, 1.0, 1 + 1j])
def test_soliton_constant_must_be_imaginary(c):
    with pytest.raises(InputError):
        one_soliton(1.0, c, 0.0, 0.0)
