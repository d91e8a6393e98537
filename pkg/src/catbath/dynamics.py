"""Cat-state decoherence in an N-qubit exchange reservoir.

The field mode couples to N qubits through resonant exchange terms
(lambda_k/2)(a |e><g|_k + a^dag |g><e|_k) plus per-qubit detunings.
An initial amplitude cat N+(|0> + |alpha>) splits into two branches:
the vacuum branch leaves the qubits in |g...g>, the |alpha> branch
drives collective Rabi oscillations.  The analytic branch model of the
|alpha> component treats the field as a classical drive of Rabi
frequency Omega_k = sqrt(<n> lambda_k^2 + delta_k^2).

Dynamics layouts are boson (x) qubits, boson first (factor 0).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .hilbert import (
    DensityMatrix,
    OperatorMatrix,
    SpaceLayout,
    StateVector,
    coherent_state,
)

__all__ = [
    "ReservoirSpec",
    "BranchAmplitudes",
    "reservoir_hamiltonian",
    "branch_amplitudes",
    "analytic_joint_state",
    "coherence_factor",
    "backaction_rotation_rate",
    "evolve_excitation_blocks",
    "cat_with_ground_qubits",
    "reduced_qubit_state",
    "reduced_field_state",
]

# above this dimension dense eigendecomposition gets slow; use blocks
MAX_DENSE_DIM = 4096


@dataclass(frozen=True)
class ReservoirSpec:
    """Exchange couplings lambda_k, detunings delta_k (rad/s), <n> = |alpha|^2."""

    couplings: tuple[float, ...]
    detunings: tuple[float, ...]
    n_mean: float

    def __post_init__(self):
        object.__setattr__(self, "couplings", tuple(float(x) for x in self.couplings))
        object.__setattr__(self, "detunings", tuple(float(x) for x in self.detunings))
        if len(self.couplings) != len(self.detunings):
            raise ValueError("couplings and detunings must have equal length")
        if len(self.couplings) < 1:
            raise ValueError("need at least one reservoir qubit")
        if any(l <= 0 for l in self.couplings):
            raise ValueError("all couplings must be positive")
        if self.n_mean < 0:
            raise ValueError("n_mean must be nonnegative")

    @property
    def n_qubits(self) -> int:
        return len(self.couplings)


@dataclass(frozen=True)
class BranchAmplitudes:
    """Qubit amplitudes (c_g, c_e) of the |alpha> branch and Rabi rate Omega_k."""

    c_g: complex
    c_e: complex
    omega_k: float


def _layout(spec: ReservoirSpec, cutoff: int) -> SpaceLayout:
    return SpaceLayout((cutoff,) + (2,) * spec.n_qubits)


def reservoir_hamiltonian(spec: ReservoirSpec, cutoff: int) -> OperatorMatrix:
    """H = sum_k [delta_k |e><e|_k + (lambda_k/2)(a |e><g|_k + h.c.)].

    Conserves the total excitation number a^dag a + sum_k |e><e|_k.
    Refuses dimensions past MAX_DENSE_DIM; use evolve_excitation_blocks
    for large registers.
    """
    layout = _layout(spec, cutoff)
    if layout.dim > MAX_DENSE_DIM:
        raise ValueError(
            f"dense Hamiltonian dimension {layout.dim} exceeds {MAX_DENSE_DIM}; "
            "use evolve_excitation_blocks"
        )
    a = np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1).astype(complex)
    pe = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
    seg = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |e><g|
    eye2 = np.eye(2)
    mat = np.zeros((layout.dim, layout.dim), dtype=complex)
    for k in range(spec.n_qubits):
        raise_k = a.copy()
        diag_k = np.eye(cutoff, dtype=complex)
        for j in range(spec.n_qubits):
            raise_k = np.kron(raise_k, seg if j == k else eye2)
            diag_k = np.kron(diag_k, pe if j == k else eye2)
        half = spec.couplings[k] / 2.0
        mat += half * (raise_k + raise_k.conj().T) + spec.detunings[k] * diag_k
    return OperatorMatrix(layout, mat, hermitian=True)


def branch_amplitudes(k: int, t: float, spec: ReservoirSpec) -> BranchAmplitudes:
    """Semiclassical qubit amplitudes inside the |alpha> branch.

    Omega_k = sqrt(<n> lambda_k^2 + delta_k^2)
    c_g = cos(Omega_k t/2) + i (delta_k/Omega_k) sin(Omega_k t/2)
    c_e = -i (sqrt(<n>) lambda_k / Omega_k) sin(Omega_k t/2)
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    lam = spec.couplings[k]
    delta = spec.detunings[k]
    omega = math.sqrt(spec.n_mean * lam**2 + delta**2)
    if omega == 0.0:
        return BranchAmplitudes(1.0 + 0j, 0.0 + 0j, 0.0)
    half = omega * t / 2.0
    c_g = math.cos(half) + 1j * (delta / omega) * math.sin(half)
    c_e = -1j * (math.sqrt(spec.n_mean) * lam / omega) * math.sin(half)
    return BranchAmplitudes(c_g, c_e, omega)


def cat_with_ground_qubits(alpha: complex, spec: ReservoirSpec, cutoff: int) -> StateVector:
    """Initial state N+(|0> + |alpha>) (x) |g...g> on the dynamics layout."""
    layout = _layout(spec, cutoff)
    vac = np.zeros(cutoff, dtype=complex)
    vac[0] = 1.0
    cat = vac + coherent_state(alpha, cutoff).amps
    cat /= np.linalg.norm(cat)
    amps = np.zeros(layout.dim, dtype=complex)
    stride = 2 ** spec.n_qubits
    amps[::stride] = cat  # qubits all in |g> (fast indices all zero)
    return StateVector(layout, amps)


def analytic_joint_state(
    t: float, alpha: complex, spec: ReservoirSpec, cutoff: int
) -> StateVector:
    """Branch-model joint state of field and reservoir.

    (|0> (x)_k |g> + |alpha> (x)_k (c_k^g |g> + c_k^e |e>)) / norm,
    normalized numerically so the |<0|alpha>| overlap is included.
    Warns when the excitation leaked to the qubits is no longer small
    against <n>.
    """
    layout = _layout(spec, cutoff)
    n = spec.n_qubits
    leak = sum(abs(branch_amplitudes(k, t, spec).c_e) ** 2 for k in range(n))
    if spec.n_mean > 0 and leak > 0.1 * spec.n_mean:
        warnings.warn(
            f"qubit excitation {leak:.3f} exceeds 10% of <n>={spec.n_mean:.2f}; "
            "the branch model is strained",
            UserWarning,
        )
    vac = np.zeros(cutoff, dtype=complex)
    vac[0] = 1.0
    coh = coherent_state(alpha, cutoff).amps
    ground = np.zeros(2**n, dtype=complex)
    ground[0] = 1.0
    branch = np.array([1.0 + 0j])
    for k in range(n):
        ba = branch_amplitudes(k, t, spec)
        branch = np.kron(branch, np.array([ba.c_g, ba.c_e]))
    amps = np.kron(vac, ground) + np.kron(coh, branch)
    amps /= np.linalg.norm(amps)
    return StateVector(layout, amps)


def coherence_factor(t: float, spec: ReservoirSpec) -> complex:
    """Which-path attenuation prod_k c_k^g(t) of the |alpha><0| block."""
    out = 1.0 + 0j
    for k in range(spec.n_qubits):
        out *= branch_amplitudes(k, t, spec).c_g
    return out


def backaction_rotation_rate(spec: ReservoirSpec, k: int) -> float:
    """Field-phase rotation rate omega_k = lambda_k^2 / (4 Omega_k)."""
    lam = spec.couplings[k]
    if lam == 0.0:
        return 0.0
    omega = branch_amplitudes(k, 0.0, spec).omega_k
    if omega == 0.0:
        raise ValueError("Omega_k = 0; rotation rate undefined")
    return lam**2 / (4.0 * omega)


def _excitation_blocks(spec: ReservoirSpec, cutoff: int):
    """Basis indices grouped by total excitation number."""
    layout = _layout(spec, cutoff)
    n = spec.n_qubits
    blocks: dict[int, list[int]] = {}
    for idx in range(layout.dim):
        levels = np.unravel_index(idx, layout.dims)
        m = int(levels[0]) + int(sum(levels[1:]))
        blocks.setdefault(m, []).append(idx)
    return layout, blocks


def evolve_excitation_blocks(
    spec: ReservoirSpec, psi: StateVector, t: float, cutoff: int
) -> StateVector:
    """Exact propagation using conservation of total excitation number.

    The Hamiltonian is block diagonal in the total excitation m; each
    populated block is built and exponentiated independently, which
    keeps N = 8 at cutoff 40 tractable (largest block a few hundred
    states instead of 10240).
    """
    layout, blocks = _excitation_blocks(spec, cutoff)
    if psi.layout != layout:
        raise ValueError("state layout does not match the reservoir layout")
    n = spec.n_qubits
    a_sqrt = np.sqrt(np.arange(cutoff, dtype=float))
    out = np.zeros(layout.dim, dtype=complex)
    dims = layout.dims
    for m, idxs in blocks.items():
        seg = psi.amps[idxs]
        if np.linalg.norm(seg) < 1e-14:
            continue
        size = len(idxs)
        pos = {idx: r for r, idx in enumerate(idxs)}
        h = np.zeros((size, size), dtype=complex)
        for r, idx in enumerate(idxs):
            levels = list(np.unravel_index(idx, dims))
            nb = levels[0]
            for k in range(n):
                if levels[1 + k] == 1:
                    h[r, r] += spec.detunings[k]
                    # a^dag |g><e|_k : photon up, qubit down
                    if nb + 1 < cutoff:
                        lev2 = levels.copy()
                        lev2[0] = nb + 1
                        lev2[1 + k] = 0
                        c = pos[int(np.ravel_multi_index(lev2, dims))]
                        amp = spec.couplings[k] / 2.0 * a_sqrt[nb + 1]
                        h[c, r] += amp
                        h[r, c] += amp
        w, v = np.linalg.eigh(h)
        out_idx = np.asarray(idxs)
        out[out_idx] = v @ (np.exp(-1j * w * t) * (v.conj().T @ seg))
    return StateVector(layout, out)


def reduced_qubit_state(psi: StateVector, k: int) -> DensityMatrix:
    """Reduced 2x2 state of reservoir qubit k (factor k+1 of the layout).

    Contracts the state vector directly, avoiding the full density
    matrix (prohibitive at N = 8, cutoff 40).
    """
    dims = psi.layout.dims
    pre = int(np.prod(dims[: k + 1]))
    post = int(np.prod(dims[k + 2 :]))
    tensor = psi.amps.reshape(pre, 2, post)
    mat = np.einsum("aib,ajb->ij", tensor, tensor.conj())
    return DensityMatrix(SpaceLayout((2,)), mat)


def reduced_field_state(psi: StateVector) -> DensityMatrix:
    """Reduced field-mode state, contracted from the state vector."""
    dims = psi.layout.dims
    tensor = psi.amps.reshape(dims[0], -1)
    return DensityMatrix(SpaceLayout((dims[0],)), tensor @ tensor.conj().T)
