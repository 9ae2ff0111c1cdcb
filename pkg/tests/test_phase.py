import numpy as np
import pytest
from hypothesis import given, strategies as st

from mkdv_ist.errors import BranchCutError, CoverageError, TieError
from mkdv_ist.phase import (
    FrameContext,
    blaschke,
    blaschke_arg,
    chi_of,
    chi_pv_integral,
    kappa_of,
    make_delta,
    partition_sets,
    phi_at_z0,
    wrap,
)
from mkdv_ist.scattering import ScatteringData, breather, reflectionless, soliton
from mkdv_ist.verify import synthetic_data


@pytest.fixture(scope="module")
def data():
    return synthetic_data()


def test_frame_context():
    ctx = FrameContext(-48.0, 4.0)
    assert ctx.z0 == pytest.approx(1.0)
    assert ctx.tau == pytest.approx(4.0)
    with pytest.raises(BranchCutError):
        FrameContext(1.0, 1.0).z0


@given(st.floats(0, 20))
def test_kappa_nonpositive(m):
    k = kappa_of(m)
    assert k <= 0
    assert np.exp(-2 * np.pi * k) == pytest.approx(1 + m * m)


@given(st.floats(-5, 5))
def test_blaschke_unimodular_on_real_axis(s):
    sol = (soliton(0.8, 1j),)
    br = (breather(0.5, 0.4, 1.0), breather(1.1, 0.2, 1.0))
    b = blaschke(s, sol, br)
    assert abs(abs(b) - 1) < 1e-13
    assert abs(wrap(blaschke_arg(s, sol, br) - np.angle(b))) < 1e-12


def test_chi_pv_relation(data):
    z0 = 0.7
    assert -chi_pv_integral(data, z0) / np.pi == pytest.approx(2 * chi_of(data, z0, z0).imag, abs=1e-13)


@given(st.floats(-0.68, 0.68))
def test_delta_jump(s):
    data = synthetic_data()
    df = make_delta(data, 0.7, data.breathers)
    r = data.r_at(np.array([s]))[0]
    assert abs(df(s, "+") / df(s, "-") - (1 + abs(r) ** 2)) < 1e-8


@given(st.floats(-3, 3), st.floats(0.05, 3))
def test_delta_symmetry(a, b):
    data = synthetic_data()
    df = make_delta(data, 0.7, data.breathers)
    z = complex(a, b)
    if min(abs(z - m.z) for m in data.modes) < 1e-3:
        return
    assert abs(df(z) * np.conj(df(np.conj(z))) - 1) < 1e-9


def test_delta_cut_guards(data):
    df = make_delta(data, 0.7)
    with pytest.raises(BranchCutError):
        df(0.1)
    with pytest.raises(CoverageError):
        make_delta(data, 5.0)


def test_delta_without_radiation_is_blaschke():
    data = reflectionless([soliton(1.0, 1j)])
    df = make_delta(data, 0.5)
    assert df.kappa == 0
    z = 0.3 + 0.4j
    assert abs(df(z) - blaschke(z, data.solitons)) < 1e-15


def test_partitions():
    data = reflectionless([soliton(1.0, 1j)], [breather(1.0, 0.5, 1.0), breather(0.2, 0.5, 1.0)])
    fast = data.breathers[1]  # velocity 0.52
    p1 = partition_sets(data, -5.0, "RegionI")
    assert p1.B_set == (fast,) and p1.frame is None
    p3 = partition_sets(data, fast.velocity, "RegionIII")
    assert p3.frame is fast and p3.S_set == data.solitons
    two = ScatteringData(4.0, np.zeros(8), (soliton(1.0, 1j), soliton(1.0 + 1e-9, 1j)))
    with pytest.raises(TieError):
        partition_sets(two, 4.0)


@given(st.floats(-50, 50))
def test_wrap_range(a):
    w = wrap(a)
    assert -np.pi < w <= np.pi
    assert abs(np.sin(w) - np.sin(a)) < 1e-9 and abs(np.cos(w) - np.cos(a)) < 1e-9


def test_phi_components(data):
    from mkdv_ist.specfun import log_gamma

    z0 = 0.6
    r0 = data.r_at(np.array([z0]))[0]
    k = kappa_of(r0)
    chi = chi_pv_integral(data, z0)
    got = phi_at_z0(data, z0, k, chi, ())
    ref = log_gamma(1j * k).imag - np.pi / 4 - np.angle(r0) - chi / np.pi
    ref += -4 * np.angle(z0 - data.solitons[0].z)
    assert abs(wrap(got - ref)) < 1e-12


def test_phi_soliton_shift():
    # one soliton at i zeta moves phi by -4 arg(z0 - i zeta); z0 = zeta = 1 gives pi
    z = np.linspace(-3, 3, 64)
    r = 0.2j / np.cosh(z)
    bare = ScatteringData(3.0, r)
    dressed = ScatteringData(3.0, r, (soliton(1.0, 1j),))
    k = kappa_of(bare.r_at(np.array([1.0]))[0])
    chi = chi_pv_integral(bare, 1.0)
    shift = phi_at_z0(dressed, 1.0, k, chi, ()) - phi_at_z0(bare, 1.0, k, chi, ())
    assert abs(wrap(shift - np.pi)) < 1e-12
