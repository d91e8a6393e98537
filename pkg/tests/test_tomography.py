import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catbath.hilbert import (
    DensityMatrix,
    SpaceLayout,
    StateVector,
    TruncationWarning,
    coherent_state,
    density_from_state,
)
from catbath.tomography import (
    RabiTrace,
    WignerMap,
    derotate,
    fit_photon_numbers,
    photon_distribution,
    synthesize_rabi,
    wigner_map,
    wigner_point,
)

from conftest import MHZ, NS

XI = 19.8 * MHZ
TWO_OVER_PI = 2.0 / math.pi

# marginal displaced-parity cutoffs trip the truncation reporter; the
# values themselves are checked against oracles below
pytestmark = pytest.mark.filterwarnings(
    "ignore::catbath.hilbert.TruncationWarning"
)


def fock_density(n: int, cutoff: int) -> DensityMatrix:
    amps = np.zeros(cutoff, dtype=complex)
    amps[n] = 1.0
    return density_from_state(StateVector(SpaceLayout((cutoff,)), amps))


def cat_density(alpha: float, cutoff: int) -> DensityMatrix:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        vac = np.zeros(cutoff, dtype=complex)
        vac[0] = 1.0
        amps = vac + coherent_state(alpha, cutoff).amps
        amps /= np.linalg.norm(amps)
    return density_from_state(StateVector(SpaceLayout((cutoff,)), amps))


def analytic_cat_wigner(alpha: float, beta: complex) -> float:
    """Two displaced Gaussians plus an interference term, for the
    normalized amplitude cat (|0> + |alpha>) with real alpha."""
    norm2 = 1.0 / (2.0 * (1.0 + math.exp(-(alpha**2) / 2.0)))

    def gauss(center: complex) -> float:
        return TWO_OVER_PI * math.exp(-2.0 * abs(beta - center) ** 2)

    cross = (
        TWO_OVER_PI
        * np.exp(-2.0 * abs(beta) ** 2 + 2.0 * beta * alpha - alpha**2 / 2.0)
    )
    return float(norm2 * (gauss(0.0) + gauss(alpha) + 2.0 * cross.real))


def test_photon_distribution_vacuum_and_coherent():
    pn = photon_distribution(fock_density(0, 8))
    assert pn[0] == 1.0 and np.all(pn[1:] == 0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        rho = density_from_state(coherent_state(3.3, 40))
    pn = photon_distribution(rho)
    mean = 3.3**2
    poisson = np.array(
        [math.exp(-mean) * mean**n / math.factorial(n) for n in range(40)]
    )
    poisson /= poisson.sum()
    assert np.max(np.abs(pn - poisson)) < 1e-9


def test_photon_distribution_cat_oracle():
    rho = cat_density(3.3, 40)
    pn = photon_distribution(rho)
    direct = np.real(np.diag(rho.mat))  # independent read of <n|rho|n>
    assert np.allclose(pn, np.clip(direct, 0, None))
    # n=0 carries the vacuum lobe plus the coherent tail plus interference
    norm2 = 1.0 / (2.0 * (1.0 + math.exp(-(3.3**2) / 2.0)))
    c0 = math.exp(-(3.3**2) / 2.0)
    assert pn[0] == pytest.approx(norm2 * (1.0 + c0) ** 2, abs=1e-9)


def test_photon_distribution_rejects_composite():
    rho = DensityMatrix(SpaceLayout((2, 2)), np.eye(4) / 4)
    with pytest.raises(ValueError):
        photon_distribution(rho)


def test_synthesize_rabi_vacuum_and_single_tone():
    taus = np.linspace(0, 200, 64) * NS
    tr = synthesize_rabi(np.array([1.0]), XI, taus)
    assert np.max(np.abs(tr.pe)) < 1e-15
    pn = np.zeros(4)
    pn[1] = 1.0
    tr = synthesize_rabi(pn, XI, taus)
    assert np.allclose(tr.pe, 0.5 * (1 - np.cos(2 * XI * taus)))


def test_fit_recovers_point_mass():
    taus = np.linspace(0, 300, 200) * NS
    tr = synthesize_rabi(np.array([1.0, 0.0, 0.0]), XI, taus)
    pn = fit_photon_numbers(tr, 4)
    assert pn[0] == pytest.approx(1.0, abs=1e-6)


def test_fit_roundtrip_noiseless(rng):
    taus = np.linspace(0, 300, 400) * NS
    for _ in range(5):
        pn = rng.random(9)
        pn /= pn.sum()
        tr = synthesize_rabi(pn, XI, taus)
        fit = fit_photon_numbers(tr, 8)
        assert np.abs(fit - pn).sum() < 1e-3


def test_fit_roundtrip_noisy_seeded():
    rng = np.random.default_rng(7)
    taus = np.linspace(0, 300, 400) * NS
    pn = rng.random(9)
    pn /= pn.sum()
    tr = synthesize_rabi(pn, XI, taus)
    noisy = RabiTrace(taus, tr.pe + rng.normal(0, 0.01, tr.pe.shape), XI)
    fit = fit_photon_numbers(noisy, 8)
    assert np.abs(fit - pn).sum() < 0.05


def test_fit_kkt_residual():
    rng = np.random.default_rng(11)
    taus = np.linspace(0, 300, 300) * NS
    pn = rng.random(7)
    pn /= pn.sum()
    tr = synthesize_rabi(pn, XI, taus)
    noisy = RabiTrace(taus, tr.pe + rng.normal(0, 0.02, tr.pe.shape), XI)
    p = fit_photon_numbers(noisy, 6)
    a = 0.5 * np.cos(2 * XI * np.sqrt(np.arange(7))[None, :] * taus[:, None])
    grad = a.T @ (a @ p - (0.5 - noisy.pe))
    mu = -grad[p > 1e-12].mean()
    # stationarity on the support, dual feasibility off it
    assert np.max(np.abs(grad[p > 1e-12] + mu)) < 1e-8
    off = grad[p <= 1e-12] + mu
    assert off.size == 0 or np.min(off) > -1e-8


def test_fit_warns_on_short_span():
    taus = np.linspace(0, 20, 40) * NS  # well under two slow periods
    tr = synthesize_rabi(np.array([0.5, 0.5]), XI, taus)
    with pytest.warns(UserWarning, match="condition"):
        fit_photon_numbers(tr, 6)


def test_wigner_vacuum_and_coherent():
    assert wigner_point(fock_density(0, 20), 0.0) == pytest.approx(
        TWO_OVER_PI, abs=1e-9
    )
    beta = 1.1 - 0.6j
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        rho = density_from_state(coherent_state(beta, 30))
    assert wigner_point(rho, beta) == pytest.approx(TWO_OVER_PI, abs=1e-8)


def test_wigner_cat_against_analytic_oracle():
    alpha = 3.3
    rho = cat_density(alpha, 40)
    for beta in (0.0, alpha, 1.65, 1.65 + 0.3j, 1.65 - 0.476j, 0.5 + 1.0j):
        assert wigner_point(rho, complex(beta)) == pytest.approx(
            analytic_cat_wigner(alpha, complex(beta)), abs=2e-4
        )


def test_wigner_fringe_midpoint():
    rho = cat_density(3.3, 40)
    assert wigner_point(rho, 1.65) == pytest.approx(TWO_OVER_PI, abs=0.01)


def test_wigner_parity_at_origin():
    rho = cat_density(3.3, 40)
    parity = np.sum(
        np.where(np.arange(40) % 2 == 0, 1.0, -1.0) * np.real(np.diag(rho.mat))
    )
    assert wigner_point(rho, 0.0) == pytest.approx(TWO_OVER_PI * parity, abs=1e-9)


def test_wigner_linearity(rng):
    rho_a = fock_density(1, 12)
    rho_b = fock_density(3, 12)
    mix = DensityMatrix(SpaceLayout((12,)), 0.3 * rho_a.mat + 0.7 * rho_b.mat)
    beta = 0.4 + 0.2j
    assert wigner_point(mix, beta) == pytest.approx(
        0.3 * wigner_point(rho_a, beta) + 0.7 * wigner_point(rho_b, beta), abs=1e-12
    )


def test_wigner_map_normalization_and_bound():
    rho = cat_density(1.5, 16)
    re = np.linspace(-2.5, 4.0, 53)
    im = np.linspace(-2.5, 2.5, 41)
    wm = wigner_map(rho, re, im)
    assert np.isrealobj(wm.values)
    assert np.max(np.abs(wm.values)) <= TWO_OVER_PI + 1e-6
    darea = (re[1] - re[0]) * (im[1] - im[0])
    assert wm.values.sum() * darea == pytest.approx(1.0, abs=0.02)


def test_wigner_map_rejects_nonmonotone_grid():
    rho = fock_density(0, 8)
    with pytest.raises(ValueError):
        wigner_map(rho, np.array([0.0, -1.0]), np.array([0.0, 1.0]))


def test_derotate_identity_and_pi():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        rho = density_from_state(coherent_state(1.2, 25))
        target = density_from_state(coherent_state(-1.2, 25))
    assert np.allclose(derotate(rho, 0.0).mat, rho.mat)
    assert np.max(np.abs(derotate(rho, math.pi).mat - target.mat)) < 1e-10


def test_derotate_rotates_wigner_field(rng):
    rho = cat_density(2.0, 25)
    theta = 0.7
    rot = derotate(rho, theta)
    for _ in range(10):
        beta = complex(rng.uniform(-1, 2.5), rng.uniform(-1.5, 1.5))
        assert wigner_point(rot, beta) == pytest.approx(
            wigner_point(rho, beta * np.exp(1j * theta)), abs=1e-8
        )


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 1000))
def test_wigner_bound_random_states(seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    m = m @ m.conj().T
    m /= np.trace(m).real
    rho = DensityMatrix(SpaceLayout((8,)), m)
    beta = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
    assert abs(wigner_point(rho, beta)) <= TWO_OVER_PI + 1e-9
