"""Photon-number readout emulation and Wigner reconstruction.

An ancilla qubit resonantly coupled to the field Rabi-oscillates at
2 xi sqrt(n) inside each Fock manifold, so its excited-state signal

    P_e(tau) = 1/2 {1 - [P_g(0) - P_e(0)] sum_n P_n cos(2 xi sqrt(n) tau)}

encodes the photon distribution P_n; a constrained least-squares fit
inverts it.  The Wigner function is obtained from displaced parity,
W(alpha) = (2/pi) sum_n (-1)^n <n| D^dag(alpha) rho D(alpha) |n>.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .hilbert import DensityMatrix, SpaceLayout, displacement

__all__ = [
    "RabiTrace",
    "WignerMap",
    "photon_distribution",
    "synthesize_rabi",
    "fit_photon_numbers",
    "wigner_point",
    "wigner_map",
    "derotate",
]


@dataclass(frozen=True)
class RabiTrace:
    """Ancilla Rabi signal P_e(tau) with its drive and initial populations."""

    taus: np.ndarray  # s
    pe: np.ndarray
    xi: float  # rad/s
    pg0: float = 1.0
    pe0: float = 0.0

    def __post_init__(self):
        taus = np.asarray(self.taus, dtype=float)
        pe = np.asarray(self.pe, dtype=float)
        if taus.shape != pe.shape or taus.ndim != 1:
            raise ValueError("taus and pe must be equal-length vectors")
        if self.pg0 + self.pe0 > 1.0 + 1e-12:
            raise ValueError("initial populations exceed 1")
        object.__setattr__(self, "taus", taus)
        object.__setattr__(self, "pe", pe)


@dataclass(frozen=True)
class WignerMap:
    """W sampled on a rectangular grid of Re(alpha) x Im(alpha)."""

    re_grid: np.ndarray
    im_grid: np.ndarray
    values: np.ndarray  # shape (len(re_grid), len(im_grid))

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.re_grid), len(self.im_grid)):
            raise ValueError("values shape does not match grids")
        if np.max(np.abs(values)) > 2.0 / math.pi + 1e-6:
            raise ValueError("Wigner values exceed the 2/pi bound")
        object.__setattr__(self, "values", values)


def photon_distribution(rho: DensityMatrix) -> np.ndarray:
    """Diagonal P_n = <n|rho|n> of a single-mode state."""
    if rho.layout.n_factors != 1:
        raise ValueError("photon_distribution requires a single bosonic mode")
    pn = np.real(np.diag(rho.mat))
    if pn.min() < -1e-10 or abs(pn.sum() - 1.0) > 1e-10:
        raise ValueError("diagonal is not a valid probability distribution")
    return np.clip(pn, 0.0, None)


def synthesize_rabi(
    pn: np.ndarray,
    xi: float,
    taus: np.ndarray,
    pg0: float = 1.0,
    pe0: float = 0.0,
) -> RabiTrace:
    """Forward model of the photon-number Rabi signal."""
    pn = np.asarray(pn, dtype=float)
    if pn.min() < -1e-12 or abs(pn.sum() - 1.0) > 1e-9:
        raise ValueError("pn is not a probability distribution")
    taus = np.asarray(taus, dtype=float)
    cosines = np.cos(2.0 * xi * np.sqrt(np.arange(pn.size))[None, :] * taus[:, None])
    pe = 0.5 * (1.0 - (pg0 - pe0) * (cosines @ pn))
    return RabiTrace(taus, pe, xi, pg0, pe0)


def _design_matrix(trace: RabiTrace, n_max: int) -> np.ndarray:
    freqs = 2.0 * trace.xi * np.sqrt(np.arange(n_max + 1, dtype=float))
    return 0.5 * (trace.pg0 - trace.pe0) * np.cos(freqs[None, :] * trace.taus[:, None])


def fit_photon_numbers(trace: RabiTrace, n_max: int, kkt_tol: float = 1e-8) -> np.ndarray:
    """Invert a Rabi trace into P_0..P_{n_max}.

    Solves min ||A p - b||^2 subject to p >= 0, sum p = 1 by an
    active-set method: the equality-constrained normal equations are
    solved on the free index set, negative entries are clamped to the
    active set, and clamped entries re-enter when their KKT dual turns
    negative.  The final iterate satisfies the KKT conditions to
    kkt_tol.
    """
    if n_max > 20:
        raise ValueError("n_max above 20 is not supported")
    if trace.taus.size < n_max + 2:
        raise ValueError("too few samples for the requested n_max")
    a = _design_matrix(trace, n_max)
    b = 0.5 - trace.pe
    # span check: at least 2 periods of the slowest nonzero tone
    slowest = 2.0 * trace.xi  # n = 1
    span = trace.taus.max() - trace.taus.min()
    cond = np.linalg.cond(a)
    if span * slowest < 2.0 * 2.0 * math.pi or cond > 1e8:
        warnings.warn(
            f"Rabi trace poorly conditions the fit (span {span:.2e} s, "
            f"condition number {cond:.2e})",
            UserWarning,
        )
    g = a.T @ a
    c = a.T @ b
    m = n_max + 1
    free = np.ones(m, dtype=bool)
    p = np.full(m, 1.0 / m)
    for _ in range(200 * m):
        # equality-constrained solve on the free set:
        # [G_ff 1; 1^T 0] [p_f; mu] = [c_f; 1]
        f = np.flatnonzero(free)
        kkt = np.zeros((f.size + 1, f.size + 1))
        kkt[: f.size, : f.size] = g[np.ix_(f, f)]
        kkt[: f.size, -1] = 1.0
        kkt[-1, : f.size] = 1.0
        rhs = np.concatenate([c[f], [1.0]])
        sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
        p = np.zeros(m)
        p[f] = sol[: f.size]
        mu = sol[-1]
        if p.min() < -kkt_tol:
            free[int(np.argmin(p))] = False
            continue
        p = np.clip(p, 0.0, None)
        # dual feasibility on the active set: grad_i + mu >= 0
        grad = g @ p - c
        duals = grad + mu
        active = np.flatnonzero(~free)
        if active.size and duals[active].min() < -kkt_tol:
            free[active[int(np.argmin(duals[active]))]] = True
            continue
        break
    p = np.clip(p, 0.0, None)
    p /= p.sum()
    return p


def _pad_density(rho: DensityMatrix, cutoff: int) -> np.ndarray:
    d = rho.layout.dim
    if cutoff <= d:
        return rho.mat
    out = np.zeros((cutoff, cutoff), dtype=complex)
    out[:d, :d] = rho.mat
    return out


def wigner_point(rho: DensityMatrix, alpha: complex) -> float:
    """W(alpha) = (2/pi) x displaced photon-number parity.

    The working cutoff is enlarged by ceil(|alpha|^2) + 10 so the
    displaced state stays inside the truncation.
    """
    if rho.layout.n_factors != 1:
        raise ValueError("wigner_point requires a single bosonic mode")
    cutoff = rho.layout.dim + int(math.ceil(abs(alpha) ** 2)) + 10
    mat = _pad_density(rho, cutoff)
    d_op = displacement(alpha, cutoff).mat
    shifted_diag = np.real(np.sum(d_op.conj() * (mat @ d_op), axis=0))
    parity = np.where(np.arange(cutoff) % 2 == 0, 1.0, -1.0)
    return float(2.0 / math.pi * parity @ shifted_diag)


def wigner_map(rho: DensityMatrix, re_grid, im_grid) -> WignerMap:
    """Element-wise wigner_point over a rectangular grid."""
    re_grid = np.asarray(re_grid, dtype=float)
    im_grid = np.asarray(im_grid, dtype=float)
    for g, name in ((re_grid, "re_grid"), (im_grid, "im_grid")):
        if g.size > 1 and np.any(np.diff(g) <= 0):
            raise ValueError(f"{name} must be strictly increasing")
    values = np.empty((re_grid.size, im_grid.size))
    for i, x in enumerate(re_grid):
        for j, y in enumerate(im_grid):
            values[i, j] = wigner_point(rho, complex(x, y))
    return WignerMap(re_grid, im_grid, values)


def derotate(rho: DensityMatrix, theta: float) -> DensityMatrix:
    """Phase-space rotation R(theta) rho R^dag(theta), R = exp(-i theta a^dag a)."""
    if rho.layout.n_factors != 1:
        raise ValueError("derotate requires a single bosonic mode")
    phases = np.exp(-1j * theta * np.arange(rho.layout.dim))
    return DensityMatrix(rho.layout, (phases[:, None] * rho.mat) * phases.conj()[None, :])
