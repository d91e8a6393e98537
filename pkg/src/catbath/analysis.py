"""Which-path information measures and branch-state reconstruction.

Distinguishability of the two field branches is the trace distance
between the reservoir states they condition, D = (1/2) sum |eig(Delta)|
with Delta = rho_alpha - rho_vac.  Per-qubit branch states are
recovered from tomography via 2 rho_k - |g><g| followed by a
positive-semidefinite projection (clip negative eigenvalues, then
renormalize the trace).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import DensityMatrix, SpaceLayout

__all__ = [
    "BranchPair",
    "trace_distance",
    "von_neumann_entropy",
    "branch_from_tomo",
    "psd_project",
    "reservoir_distinguishability",
]

_GG = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class BranchPair:
    """Reservoir states conditioned on the vacuum and |alpha> branches."""

    rho_vac: DensityMatrix
    rho_alpha: DensityMatrix

    def __post_init__(self):
        if self.rho_vac.layout != self.rho_alpha.layout:
            raise ValueError("branch states must share a layout")


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """(1/2) sum_i |lambda_i| of the Hermitian difference a - b."""
    if a.layout != b.layout:
        raise ValueError("layout mismatch in trace_distance")
    delta = a.mat - b.mat
    if np.max(np.abs(delta - delta.conj().T)) > 1e-9:
        raise ValueError("inputs are not Hermitian")
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(delta))))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-sum lambda log2 lambda in bits, with 0 log 0 = 0."""
    lam = np.linalg.eigvalsh(rho.mat)
    if lam.min() < -1e-8:
        raise ValueError(f"state has a negative eigenvalue {lam.min():.3e}")
    lam = np.clip(lam, 0.0, None)
    lam = lam[lam > 0]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))


def psd_project(raw: DensityMatrix) -> DensityMatrix:
    """Clip negative eigenvalues and renormalize the trace.

    Idempotent, and the identity on states that are already physical.
    """
    if np.max(np.abs(raw.mat - raw.mat.conj().T)) > 1e-9:
        raise ValueError("psd_project requires a Hermitian input")
    w, v = np.linalg.eigh(raw.mat)
    w = np.clip(w, 0.0, None)
    total = w.sum()
    if total <= 0.0:
        raise ValueError("all eigenvalues nonpositive; cannot project")
    w /= total
    return DensityMatrix(raw.layout, (v * w) @ v.conj().T)


def branch_from_tomo(rho_k: DensityMatrix) -> DensityMatrix:
    """Recover the |alpha>-branch qubit state from its tomographic mixture.

    The measured state is an even mixture of |g> (vacuum branch) and
    the branch state, so raw = 2 rho_k - |g><g|; the raw matrix may be
    slightly unphysical and is PSD-projected.
    """
    if rho_k.layout.dims != (2,):
        raise ValueError("branch_from_tomo expects a single-qubit state")
    raw = DensityMatrix(rho_k.layout, 2.0 * rho_k.mat - _GG)
    return psd_project(raw)


def reservoir_distinguishability(branches: list[DensityMatrix]) -> float:
    """Trace distance between (x)_k branch states and the all-ground state."""
    n = len(branches)
    if n < 1:
        raise ValueError("need at least one branch state")
    if n > 12:
        raise ValueError(
            f"N = {n} needs a 2^N dense eigendecomposition; not supported past 12"
        )
    rho_alpha = np.array([[1.0 + 0j]])
    rho_vac = np.array([[1.0 + 0j]])
    for rk in branches:
        if rk.layout.dims != (2,):
            raise ValueError("each branch must be a single-qubit state")
        rho_alpha = np.kron(rho_alpha, rk.mat)
        rho_vac = np.kron(rho_vac, _GG)
    layout = SpaceLayout((2,) * n)
    return trace_distance(
        DensityMatrix(layout, rho_alpha), DensityMatrix(layout, rho_vac)
    )
