"""Floquet sideband engineering for frequency-modulated qubits.

Sinusoidal modulation of a qubit at frequency nu with amplitude eps
creates sidebands at multiples of nu; the first sideband provides an
effective resonant exchange with the bus resonator of strength
lambda/2 = J1(eps/nu) xi, while the off-resonant harmonics produce AC
Stark shifts S1 and S2.  The module computes the effective model and
the full time-dependent interaction Hamiltonian so the two can be
cross-checked by propagation.

Layouts are qubit (x) boson, qubit first.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special

from .hilbert import OperatorMatrix, SpaceLayout, StateVector, evolve_td

__all__ = [
    "FloquetParams",
    "bessel_j",
    "effective_coupling",
    "stark_shifts",
    "effective_hamiltonian",
    "full_floquet_hamiltonian",
    "stark_compensating_detuning",
    "swap_frequency",
]


@dataclass(frozen=True)
class FloquetParams:
    """Per-qubit modulation record; all frequencies angular (rad/s).

    omega_s is the bus frequency; the mean qubit frequency sits one
    modulation quantum below it.
    """

    xi: float
    eps: float
    nu: float
    delta: float = 0.0
    K: float = 0.0
    omega_s: float = 0.0
    name: str = ""

    def __post_init__(self):
        if self.nu <= 0:
            raise ValueError("modulation frequency nu must be positive")
        ratio = abs(bessel_j(0, self.mu) * self.xi) / self.nu
        if ratio >= 0.2:
            warnings.warn(
                f"|J0(mu) xi| / nu = {ratio:.3f} strains the rotating-wave "
                "condition for the effective model",
                UserWarning,
            )

    @property
    def mu(self) -> float:
        """Modulation index eps/nu."""
        return self.eps / self.nu

    @property
    def omega_m(self) -> float:
        """Mean qubit frequency omega_s - nu."""
        return self.omega_s - self.nu


def bessel_j(n: int, x: float) -> float:
    """Bessel function of the first kind J_n(x) for integer order."""
    return float(special.jv(int(n), x))


def effective_coupling(p: FloquetParams) -> float:
    """First-sideband exchange strength lambda/2 = J1(eps/nu) xi."""
    return bessel_j(1, p.mu) * p.xi


def stark_shifts(p: FloquetParams, n_max: int = 25) -> tuple[float, float]:
    """Stark shifts (S1, S2) from the off-resonant harmonics n != 1.

    S1 = sum [J_n(mu) xi]^2 / ((1-n) nu)
    S2 = sum 2 [J_n(mu) xi]^2 / ((1-n) nu + K)

    The series is summed over |n| <= n_max; the edge terms must be
    below 1e-6 of the totals or a convergence warning is raised.
    """
    if n_max < 10:
        raise ValueError("n_max must be at least 10 for series truncation")
    s1 = 0.0
    s2 = 0.0
    edge1 = 0.0
    edge2 = 0.0
    for n in range(-n_max, n_max + 1):
        if n == 1:
            continue
        num = (bessel_j(n, p.mu) * p.xi) ** 2
        den2 = (1 - n) * p.nu + p.K
        if abs(den2) < 1e-9 * p.nu:
            raise ValueError(
                f"resonant denominator (1-n) nu + K = 0 at harmonic n = {n}"
            )
        t1 = num / ((1 - n) * p.nu)
        t2 = 2.0 * num / den2
        s1 += t1
        s2 += t2
        if abs(n) == n_max:
            edge1 = max(edge1, abs(t1))
            edge2 = max(edge2, abs(t2))
    if (s1 != 0 and edge1 > 1e-6 * abs(s1)) or (s2 != 0 and edge2 > 1e-6 * abs(s2)):
        warnings.warn(
            f"Stark series not converged at n_max={n_max}; increase n_max",
            UserWarning,
        )
    return s1, s2


def _qubit_boson_ops(cutoff: int):
    a = np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1).astype(complex)
    num = np.diag(np.arange(cutoff, dtype=float)).astype(complex)
    eye_b = np.eye(cutoff)
    pg = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)  # |g><g|
    pe = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)  # |e><e|
    sge = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |g><e|
    return a, num, eye_b, pg, pe, sge


def effective_hamiltonian(p: FloquetParams, cutoff: int, n_max: int = 25) -> OperatorMatrix:
    """Time-independent sideband model on qubit (x) boson.

    H_eff = (lambda/2)(a^dag |g><e| + h.c.)
          + S1 (|g><g| - |e><e|) a^dag a - S1 |e><e| + S2 |e><e| a^dag a
          + delta |e><e|
    """
    if cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    lam_half = effective_coupling(p)
    s1, s2 = stark_shifts(p, n_max)
    a, num, eye_b, pg, pe, sge = _qubit_boson_ops(cutoff)
    ex = lam_half * np.kron(sge, a.conj().T)
    mat = (
        ex
        + ex.conj().T
        + s1 * np.kron(pg - pe, num)
        - s1 * np.kron(pe, eye_b)
        + s2 * np.kron(pe, num)
        + p.delta * np.kron(pe, eye_b)
    )
    return OperatorMatrix(SpaceLayout((2, cutoff)), mat, hermitian=True)


def full_floquet_hamiltonian(p: FloquetParams, t: float, cutoff: int) -> OperatorMatrix:
    """Exact interaction-picture Hamiltonian under the modulation drive.

    H'(t) = xi exp(-i mu sin(nu t)) exp(i nu t) a^dag |g><e| + h.c.
          + delta |e><e|
    """
    a, _, eye_b, _, pe, sge = _qubit_boson_ops(cutoff)
    coeff = p.xi * np.exp(-1j * p.mu * math.sin(p.nu * t)) * np.exp(1j * p.nu * t)
    term = coeff * np.kron(sge, a.conj().T)
    mat = term + term.conj().T + p.delta * np.kron(pe, eye_b)
    return OperatorMatrix(SpaceLayout((2, cutoff)), mat, hermitian=True)


def stark_compensating_detuning(p: FloquetParams, n_max: int = 25) -> float:
    """Detuning that realigns |e,0> with |g,1> against the Stark shifts.

    The effective model places |e,0> at -S1 and |g,1> at +S1, so an
    extra 2 S1 on |e><e| restores the resonance of the sideband swap.
    """
    s1, _ = stark_shifts(p, n_max)
    return 2.0 * s1


def swap_frequency(
    p: FloquetParams,
    cutoff: int = 3,
    n_periods: float = 8.0,
    steps_per_drive_period: int = 40,
) -> float:
    """Sideband swap frequency from full propagation of |e,0>.

    Propagates under the exact drive, records P_g(t), and locates the
    oscillation frequency by FFT with parabolic peak refinement.
    Returns linear frequency in Hz.
    """
    lam = 2.0 * abs(effective_coupling(p))
    if lam == 0:
        raise ValueError("zero effective coupling; no swap to measure")
    t_max = n_periods * 2.0 * math.pi / lam
    dt = 2.0 * math.pi / p.nu / steps_per_drive_period
    layout = SpaceLayout((2, cutoff))
    amps = np.zeros(layout.dim, dtype=complex)
    amps[layout.index((1, 0))] = 1.0  # |e,0>
    psi = StateVector(layout, amps)
    n_samples = 1024
    sample_dt = t_max / n_samples
    pg = np.empty(n_samples + 1)
    pg[0] = 0.0
    for k in range(1, n_samples + 1):
        psi = evolve_td(
            lambda t, t0=(k - 1) * sample_dt: full_floquet_hamiltonian(p, t0 + t, cutoff),
            psi,
            sample_dt,
            dt,
        )
        pg[k] = abs(psi.amps[layout.index((0, 1))]) ** 2
    sig = pg - pg.mean()
    spec = np.abs(np.fft.rfft(sig * np.hanning(sig.size)))
    k0 = int(np.argmax(spec[1:])) + 1
    # parabolic interpolation around the peak bin
    if 1 <= k0 < spec.size - 1:
        y0, y1, y2 = spec[k0 - 1], spec[k0], spec[k0 + 1]
        shift = 0.5 * (y0 - y2) / (y0 - 2 * y1 + y2)
    else:
        shift = 0.0
    return (k0 + shift) / (sig.size * sample_dt)
