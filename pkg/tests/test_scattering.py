import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import sech
from mkdv_ist.errors import InputError, NonDecayedPotentialError
from mkdv_ist.scattering import (
    Kind,
    PotentialSample,
    ScatteringData,
    a_breve,
    breather,
    direct_transform,
    evolve_scattering,
    find_discrete_spectrum,
    reflectionless,
    soliton,
    transition_coefficients,
    validate_genericity,
)


def sech_sample(A, L=60.0, h=0.01):
    return PotentialSample.from_function(lambda x: A * sech(x), L=L, h=h)


def a_breve_exact(A, z):
    # A sech(x): Gamma(1/2 - iz)^2 / (Gamma(1/2 - iz + A) Gamma(1/2 - iz - A))
    w = mpmath.mpf(0.5) - 1j * mpmath.mpmathify(z)
    return complex(mpmath.gamma(w) ** 2 / (mpmath.gamma(w + A) * mpmath.gamma(w - A)))


@pytest.mark.parametrize("A", [0.25, 0.4, 1.3])
def test_sech_transition_coefficients(A):
    z = np.linspace(-3.0, 3.0, 10)
    s = transition_coefficients(sech_sample(A), z)
    ab = np.array([q.a_breve for q in s])
    b = np.array([q.b for q in s])
    assert np.max(np.abs(ab - [a_breve_exact(A, v) for v in z])) < 1e-10
    assert np.max(np.abs(np.abs(b) - abs(np.sin(np.pi * A)) / np.cosh(np.pi * z))) < 1e-10


@pytest.mark.parametrize("z", [0.6j, 0.5 + 0.8j, -1.0 + 0.2j])
def test_a_breve_off_axis(z):
    assert abs(a_breve(sech_sample(0.8), z)[0] - a_breve_exact(0.8, z)) < 1e-9


@pytest.mark.parametrize("A,count", [(0.3, 0), (0.8, 1), (1.7, 2)])
def test_sech_eigenvalue_count_and_location(A, count):
    zeros, _ = find_discrete_spectrum(sech_sample(A, L=50))
    assert len(zeros) == count
    expected = sorted(A - 0.5 - k for k in range(count))
    assert np.allclose(sorted(e.z.imag for e in zeros), expected, atol=1e-8)
    assert all(abs(e.z.real) < 1e-12 for e in zeros)


def test_direct_transform_soliton_constant():
    u0 = PotentialSample.from_function(lambda x: 2 * sech(2 * x), L=40, h=0.01)
    data = direct_transform(u0)
    assert len(data.solitons) == 1 and not data.breathers
    e = data.solitons[0]
    assert abs(e.z - 1j) < 1e-8
    assert abs(e.c - 2j) < 1e-6
    assert np.max(np.abs(data.r)) < 1e-6
    assert data.report["generic"]


def test_zero_potential_is_trivial():
    u0 = PotentialSample(np.linspace(-5, 5, 101), np.zeros(101))
    data = direct_transform(u0, nz=64)
    assert not data.modes and not np.any(data.r)


@given(st.floats(-2.0, 2.0), st.floats(0.1, 1.5))
def test_velocity_formula(xi, eta):
    if abs(xi) < 1e-3:
        return
    assert breather(xi, eta, 1.0).velocity == pytest.approx(4 * eta**2 - 12 * xi**2)
    assert soliton(eta, 1j).velocity == pytest.approx(4 * eta**2)


def test_evolve_scattering_phases():
    data = ScatteringData(2.0, 0.1j * np.ones(8), (soliton(1.0, 2j),), (breather(1.0, 0.5, 1.0),))
    out = evolve_scattering(data, 0.25)
    z = data.z_grid
    assert np.allclose(out.r, data.r * np.exp(2j * z**3))
    s = out.solitons[0]
    assert abs(s.c - 2j * np.exp(8j * 0.25 * (1j) ** 3)) < 1e-14
    with pytest.raises(InputError):
        evolve_scattering(out, 1.0)


def test_modes_sorted_by_velocity():
    data = reflectionless([soliton(1.0, 1j), soliton(0.5, 1j)],
                          [breather(1.0, 0.5, 1.0), breather(0.2, 0.5, 1.0)])
    assert [m.z.imag for m in data.solitons] == [0.5, 1.0]
    v = [m.velocity for m in data.breathers]
    assert v == sorted(v)
    assert data.breathers[0].kind is Kind.BREATHER


def test_genericity_flags_shared_velocity():
    data = reflectionless([soliton(1.0, 1j)], [breather(np.sqrt(1 / 3), np.sqrt(2), 1.0)])
    rep = validate_genericity(data)
    assert not rep["generic"] and "velocity" in rep["violations"][0]
    assert validate_genericity(reflectionless([soliton(1.0, 1j)]))["generic"]


@pytest.mark.parametrize(
    "x,u,err",
    [
        (np.linspace(0, 1, 20), np.ones(20), NonDecayedPotentialError),
        (np.r_[0, np.cumsum(np.linspace(1, 2, 19))], np.zeros(20), InputError),
        (np.linspace(0, 1, 5), np.zeros(5), InputError),
        (np.linspace(0, 1, 20), np.r_[0, np.nan, np.zeros(18)], InputError),
    ],
)
def test_potential_sample_validation(x, u, err):
    with pytest.raises(err):
        PotentialSample(x, u)


def test_odd_nz_rejected():
    with pytest.raises(InputError):
        direct_transform(sech_sample(0.3), nz=63)
