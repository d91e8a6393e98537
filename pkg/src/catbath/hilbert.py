"""Truncated-Fock-space linear algebra.

States and operators live on a :class:`SpaceLayout`, an ordered tensor
product of one (optional) bosonic mode and a register of two-level
systems.  Factor 0 is the slowest-varying index in the flattened
amplitude vector; this convention is fixed so that results are
bit-comparable across runs.

All frequencies are angular (rad/s) and all times are seconds.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SpaceLayout",
    "StateVector",
    "DensityMatrix",
    "OperatorMatrix",
    "TruncationWarning",
    "annihilation",
    "number_operator",
    "coherent_state",
    "displacement",
    "embed",
    "evolve",
    "evolve_td",
    "partial_trace",
    "density_from_state",
    "fidelity",
]


class TruncationWarning(UserWarning):
    """Fock-space cutoff too small for the requested construction."""


@dataclass(frozen=True)
class SpaceLayout:
    """Ordered subsystem dimensions of a composite Hilbert space."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims:
            raise ValueError("layout needs at least one factor")
        if any(d < 1 for d in dims):
            raise ValueError(f"invalid dimension in layout {dims}")
        if sum(1 for d in dims if d > 2) > 1:
            raise ValueError("at most one bosonic factor is allowed")

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_factors(self) -> int:
        return len(self.dims)

    def index(self, levels) -> int:
        """Flat index of a product basis state (factor 0 slowest)."""
        return int(np.ravel_multi_index(tuple(levels), self.dims))


def _check_same_layout(a, b):
    if a.layout != b.layout:
        raise ValueError(f"layout mismatch: {a.layout.dims} vs {b.layout.dims}")


@dataclass(frozen=True)
class StateVector:
    """Complex amplitude vector over a SpaceLayout."""

    layout: SpaceLayout
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (self.layout.dim,):
            raise ValueError(
                f"amplitude length {amps.shape} does not match layout dim {self.layout.dim}"
            )
        object.__setattr__(self, "amps", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "StateVector":
        return StateVector(self.layout, self.amps / self.norm)


@dataclass(frozen=True)
class DensityMatrix:
    """Complex Hermitian matrix over a SpaceLayout.

    Physicality (hermiticity, unit trace, positivity) is checked by
    :meth:`validate`; raw linear reconstructions may legitimately violate
    positivity and are handled by the analysis module.
    """

    layout: SpaceLayout
    mat: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        d = self.layout.dim
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match layout dim {d}")
        object.__setattr__(self, "mat", mat)

    def validate(self, herm_tol=1e-10, trace_tol=1e-10, eig_tol=-1e-8):
        if np.max(np.abs(self.mat - self.mat.conj().T)) > herm_tol:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(self.mat).real - 1.0) > trace_tol:
            raise ValueError("density matrix trace differs from 1")
        if np.linalg.eigvalsh(self.mat).min() < eig_tol:
            raise ValueError("density matrix has a significantly negative eigenvalue")
        return self


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex square matrix tagged with its SpaceLayout."""

    layout: SpaceLayout
    mat: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        d = self.layout.dim
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match layout dim {d}")
        object.__setattr__(self, "mat", mat)


def density_from_state(psi: StateVector) -> DensityMatrix:
    return DensityMatrix(psi.layout, np.outer(psi.amps, psi.amps.conj()))


def fidelity(a: StateVector, b: StateVector) -> float:
    """Squared overlap |<a|b>|^2 between two pure states."""
    _check_same_layout(a, b)
    return float(abs(np.vdot(a.amps, b.amps)) ** 2)


def annihilation(cutoff: int) -> OperatorMatrix:
    """Bosonic ladder operator a on a truncated Fock space.

    <n-1|a|n> = sqrt(n) for 1 <= n < cutoff.
    """
    if cutoff < 1:
        raise ValueError(f"invalid dimension: cutoff must be >= 1, got {cutoff}")
    mat = np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1).astype(complex)
    return OperatorMatrix(SpaceLayout((cutoff,)), mat)


def number_operator(cutoff: int) -> OperatorMatrix:
    if cutoff < 1:
        raise ValueError(f"invalid dimension: cutoff must be >= 1, got {cutoff}")
    mat = np.diag(np.arange(cutoff, dtype=float)).astype(complex)
    return OperatorMatrix(SpaceLayout((cutoff,)), mat, hermitian=True)


def _poisson_tail(mean: float, cutoff: int) -> float:
    """P(n >= cutoff) for a Poisson distribution, summed term by term."""
    if mean == 0.0:
        return 0.0
    log_terms = -mean + np.arange(cutoff) * math.log(mean) - np.cumsum(
        np.concatenate([[0.0], np.log(np.arange(1, cutoff, dtype=float))])
    )
    return float(max(0.0, 1.0 - np.exp(log_terms).sum()))


def coherent_state(alpha: complex, cutoff: int, tail_tol: float = 1e-8) -> StateVector:
    """Coherent state |alpha> truncated at `cutoff` Fock levels.

    amps[n] = exp(-|alpha|^2/2) alpha^n / sqrt(n!), renormalized after
    truncation.  Emits a TruncationWarning when the neglected Poisson
    tail exceeds `tail_tol`.
    """
    if cutoff < 1:
        raise ValueError(f"invalid dimension: cutoff must be >= 1, got {cutoff}")
    mean = abs(alpha) ** 2
    tail = _poisson_tail(mean, cutoff)
    if tail > tail_tol:
        warnings.warn(
            f"coherent state truncation tail {tail:.3e} exceeds tolerance {tail_tol:.1e} "
            f"at cutoff {cutoff}",
            TruncationWarning,
        )
    n = np.arange(cutoff)
    log_fact = np.cumsum(np.concatenate([[0.0], np.log(np.arange(1, cutoff, dtype=float))]))
    if alpha == 0:
        amps = np.zeros(cutoff, dtype=complex)
        amps[0] = 1.0
    else:
        phase = np.angle(complex(alpha))
        log_mag = n * math.log(abs(alpha)) - 0.5 * log_fact - mean / 2.0
        amps = np.exp(log_mag) * np.exp(1j * phase * n)
    amps = amps / np.linalg.norm(amps)
    return StateVector(SpaceLayout((cutoff,)), amps)


def displacement(beta: complex, cutoff: int, check_tol: float = 1e-6) -> OperatorMatrix:
    """Displacement operator D(beta) = exp(beta a^dag - beta^* a).

    Computed by exponentiating the Hermitian generator i(beta a^dag -
    beta^* a).  Reports (via TruncationWarning) when the cutoff is too
    small for D(beta)|0> to reproduce the coherent state |beta>.
    """
    a = annihilation(cutoff).mat
    gen = 1j * (beta * a.conj().T - np.conj(beta) * a)  # Hermitian
    w, v = np.linalg.eigh(gen)
    mat = (v * np.exp(-1j * w)) @ v.conj().T
    op = OperatorMatrix(SpaceLayout((cutoff,)), mat)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        target = coherent_state(beta, cutoff)
    err = np.linalg.norm(mat[:, 0] - target.amps)
    if err >= check_tol:
        warnings.warn(
            f"displacement truncation error |D(beta)|0> - |beta>| = {err:.3e} at cutoff "
            f"{cutoff}; increase the cutoff",
            TruncationWarning,
        )
    return op


def embed(op: OperatorMatrix, site: int, layout: SpaceLayout) -> OperatorMatrix:
    """Embed a single-factor operator into a composite layout.

    Identity on every other factor, Kronecker-ordered with factor 0 as
    the slowest index.
    """
    if not 0 <= site < layout.n_factors:
        raise ValueError(f"site {site} out of range for layout {layout.dims}")
    if op.mat.shape[0] != layout.dims[site]:
        raise ValueError(
            f"operator dimension {op.mat.shape[0]} does not match layout factor "
            f"{site} of dimension {layout.dims[site]}"
        )
    out = np.array([[1.0 + 0j]])
    for s, d in enumerate(layout.dims):
        out = np.kron(out, op.mat if s == site else np.eye(d))
    return OperatorMatrix(layout, out, hermitian=op.hermitian)


def _require_hermitian(H: OperatorMatrix, rel_tol: float = 1e-9):
    scale = max(1.0, float(np.max(np.abs(H.mat))))
    if np.max(np.abs(H.mat - H.mat.conj().T)) > rel_tol * scale:
        raise ValueError("Hamiltonian is not Hermitian")


def evolve(H: OperatorMatrix, psi: StateVector, t: float) -> StateVector:
    """Propagate |psi> by exp(-iHt) via Hermitian eigendecomposition."""
    _check_same_layout(H, psi)
    _require_hermitian(H)
    w, v = np.linalg.eigh(H.mat)
    amps = v @ (np.exp(-1j * w * t) * (v.conj().T @ psi.amps))
    return StateVector(psi.layout, amps)


def evolve_td(h_of_t, psi: StateVector, t_end: float, dt: float) -> StateVector:
    """Time-ordered propagation with midpoint-rule step unitaries.

    `h_of_t(t)` must return the instantaneous Hamiltonian as an
    OperatorMatrix on the state's layout.  The step error is O(dt^2)
    per unit time.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    n_steps = max(1, int(round(t_end / dt)))
    step = t_end / n_steps
    amps = psi.amps.copy()
    for k in range(n_steps):
        H = h_of_t((k + 0.5) * step)
        _require_hermitian(H)
        w, v = np.linalg.eigh(H.mat)
        amps = v @ (np.exp(-1j * w * step) * (v.conj().T @ amps))
    return StateVector(psi.layout, amps)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on the factors listed in `keep` (original order)."""
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep set must not be empty")
    dims = rho.layout.dims
    if any(not 0 <= k < len(dims) for k in keep):
        raise ValueError(f"keep indices {keep} out of range for layout {dims}")
    n = len(dims)
    tensor = rho.mat.reshape(dims + dims)
    # einsum indices: traced factors share a label on both sides
    row = list(range(n))
    col = list(range(n, 2 * n))
    for s in range(n):
        if s not in keep:
            col[s] = row[s]
    out_idx = [row[s] for s in keep] + [col[s] for s in keep]
    reduced = np.einsum(tensor, row + col, out_idx)
    kept_dims = tuple(dims[s] for s in keep)
    d = int(np.prod(kept_dims))
    return DensityMatrix(SpaceLayout(kept_dims), reduced.reshape(d, d))
