import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import sech
from mkdv_ist.errors import CFLError, InputError, SupportOverflowError
from mkdv_ist.evolve import EvolveParams, cfl_limit, conserved, init_state, run, step
from mkdv_ist.scattering import PotentialSample


def gaussian(x):
    return np.exp(-x * x)


def test_zero_state_stays_zero():
    tr = run(lambda x: 0 * x, 0.1, EvolveParams(20.0, 64, 0.01))
    assert not np.any(tr.profiles[-1])


def test_linear_airy_limit():
    # at amplitude 1e-7 the cubic term is below rounding; the linear flow is exact
    L, N, T = 40.0, 256, 0.5
    eps = 1e-7
    st0 = init_state(lambda x: eps * gaussian(x), L, N)
    tr = run(None, T, EvolveParams(L, N, 0.01), state=st0)
    exact = np.fft.irfft(st0.u_hat * np.exp(1j * st0.k**3 * T), n=N)
    assert np.max(np.abs(tr.profiles[-1] - exact)) < 1e-12 * eps * 1e3


@pytest.mark.parametrize("N", [256, 1024])
def test_init_round_trip(N):
    L = 40.0
    st0 = init_state(gaussian, L, N)
    assert np.max(np.abs(st0.u - gaussian(st0.x))) < 1e-10


def test_init_from_sample_matches_callable():
    s = PotentialSample.from_function(gaussian, L=30, h=0.005)
    a = init_state(s, 40.0, 256)
    b = init_state(gaussian, 40.0, 256)
    assert np.max(np.abs(a.u - b.u)) < 1e-8


@given(st.integers(0, 2**32 - 1))
def test_hermitian_symmetry(seed):
    rng = np.random.default_rng(seed)
    amps, cents = rng.uniform(-1, 1, 3), rng.uniform(-3, 3, 3)
    f = lambda x: np.sum(amps * np.exp(-((x[:, None] - cents) ** 2)), axis=1)  # noqa: E731
    st0 = step(init_state(f, 40.0, 128), 1e-3)
    F = st0.full_hat
    assert np.max(np.abs(F[1:] - np.conj(F[1:][::-1]))) < 1e-12 * np.max(np.abs(F))
    assert np.all(np.isreal(st0.u))


def test_dealiasing_mask_respected():
    st1 = step(init_state(lambda x: 2 * sech(2 * x), 40.0, 256), 1e-3)
    assert not np.any(st1.u_hat[256 // 3 + 1:])


@pytest.mark.slow
@pytest.mark.filterwarnings("ignore:solution reached")
def test_fourth_order_in_time():
    # self-convergence, so the periodic-box error drops out
    L, N, T = 40.0, 512, 1.0
    us = [run(sech, T, EvolveParams(L, N, dt)).profiles[-1] for dt in (0.01, 0.005, 0.0025)]
    ratio = np.max(np.abs(us[0] - us[1])) / np.max(np.abs(us[1] - us[2]))
    assert np.log2(ratio) > 3.7


@pytest.mark.filterwarnings("ignore:solution reached")
def test_conserved_quantities_short_run():
    tr = run(lambda x: 2 * sech(2 * x), 0.5, EvolveParams(40.0, 512, 1e-3, checkpoints=(0.0,)))
    m = np.array(tr.log)
    assert m[0, 1] == pytest.approx(np.pi, rel=1e-10)  # int 2 sech(2x) dx
    assert m[0, 2] == pytest.approx(4.0, rel=1e-10)  # int 4 sech^2(2x) dx
    assert np.max(np.abs(m[:, 1:] - m[0, 1:]) / m[0, 1:]) < 1e-7


@pytest.mark.filterwarnings("ignore:solution reached")
def test_checkpoints_and_at():
    tr = run(gaussian, 0.1, EvolveParams(40.0, 128, 0.01, checkpoints=(0.0, 0.05)))
    assert tr.times == pytest.approx([0.0, 0.05, 0.1])
    assert tr.at(0.05) is tr.profiles[1]


def test_guards():
    with pytest.raises(InputError):
        init_state(gaussian, 40.0, 100)
    with pytest.raises(SupportOverflowError):
        init_state(lambda x: 0 * x + 1, 40.0, 64)
    with pytest.raises(InputError):
        run(gaussian, 0.015, EvolveParams(40.0, 128, 0.01))
    st0 = init_state(lambda x: 2 * sech(2 * x), 40.0, 512)
    with pytest.raises(CFLError):
        step(st0, 10 * cfl_limit(st0))


def test_boundary_warning():
    with pytest.warns(UserWarning):
        run(lambda x: 2 * sech(2 * x), 2.5, EvolveParams(24.0, 512, 1e-3))


def test_conserved_helper():
    st0 = init_state(gaussian, 40.0, 256)
    mass, mom = conserved(st0)
    assert mass == pytest.approx(np.sqrt(np.pi)) and mom == pytest.approx(np.sqrt(np.pi / 2))
