"""Command-line scenario runner.

Subcommands: prep-cat, floquet-calib, decohere, wigner, fit-rabi,
disting, crosstalk-solve.  File interfaces use linear MHz and ns;
everything is converted to angular rad/s internally.  Exit codes:
0 success, 1 invalid input or configuration, 2 numerical failure.
Numerical warnings do not fail a run; they are collected into a
sidecar log next to the main output (``<out>.warnings.log``).
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import warnings

import numpy as np

from . import analysis, calib, catprep, dynamics, floquet, tomography
from .config import MHZ, NS, ConfigError, load_config
from .hilbert import DensityMatrix, SpaceLayout, density_from_state

__all__ = ["main"]


class CliError(ValueError):
    """Invalid command input (exit code 1)."""


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([c if isinstance(c, str) else _fmt(c) for c in row])


def _read_csv(path: str, required: list[str]) -> list[dict]:
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise CliError(f"{path}: empty file, expected header {required}")
            missing = [c for c in required if c not in reader.fieldnames]
            if missing:
                raise CliError(f"{path}: missing columns {missing}")
            return list(reader)
    except OSError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _float_field(row: dict, key: str, path: str) -> float:
    try:
        return float(row[key])
    except (TypeError, ValueError) as exc:
        raise CliError(f"{path}: bad value for {key}: {row[key]!r}") from exc


def _reservoir_from_config(cfg, n_qubits: int) -> dynamics.ReservoirSpec:
    couplings = []
    detunings = []
    for q in cfg.qubits[:n_qubits]:
        p = q.floquet_params(cfg.omega_s_MHz)
        couplings.append(2.0 * abs(floquet.effective_coupling(p)))
        detunings.append(p.delta)
    return dynamics.ReservoirSpec(
        tuple(couplings), tuple(detunings), cfg.scenario.alpha**2
    )


# ---------------------------------------------------------------- commands


def _cmd_prep_cat(args) -> list[str]:
    cfg = load_config(args.config)
    spec = catprep.CatSpec(alpha=cfg.scenario.alpha)
    xi = cfg.ancilla_xi_MHz * MHZ
    steps = catprep.backward_angles(spec, xi)
    _write_csv(
        args.steps_out,
        ["n", "theta_rad", "t_ns"],
        [(s.n, s.theta, s.t / NS) for s in steps],
    )
    cat = catprep.make_amplitude_cat(spec, cfg.cutoff, xi)
    _write_csv(
        args.fock_out,
        ["fock_n", "re", "im"],
        [(n, a.real, a.imag) for n, a in enumerate(cat.amps)],
    )
    return [args.steps_out, args.fock_out]


def _cmd_floquet_calib(args) -> list[str]:
    required = ["name", "xi_MHz", "eps_MHz", "nu_MHz", "delta_MHz", "K_MHz"]
    rows = _read_csv(args.params, required)
    out_rows = []
    for row in rows:
        p = floquet.FloquetParams(
            xi=_float_field(row, "xi_MHz", args.params) * MHZ,
            eps=_float_field(row, "eps_MHz", args.params) * MHZ,
            nu=_float_field(row, "nu_MHz", args.params) * MHZ,
            delta=_float_field(row, "delta_MHz", args.params) * MHZ,
            K=_float_field(row, "K_MHz", args.params) * MHZ,
            name=row["name"],
        )
        s1, s2 = floquet.stark_shifts(p)
        out_rows.append(
            (row["name"], floquet.effective_coupling(p) / MHZ, s1 / MHZ, s2 / MHZ)
        )
    _write_csv(args.out, ["name", "lambda_half_MHz", "S1_MHz", "S2_MHz"], out_rows)
    return [args.out]


def _cmd_decohere(args) -> list[str]:
    cfg = load_config(args.config)
    n = args.n_qubits if args.n_qubits is not None else cfg.scenario.n_qubits
    if not 1 <= n <= len(cfg.qubits):
        raise CliError(f"--n-qubits: must be between 1 and {len(cfg.qubits)}")
    t_max = (args.t_max if args.t_max is not None else cfg.scenario.t_max_ns) * NS
    dt = (args.dt if args.dt is not None else cfg.scenario.dt_ns) * NS
    if dt <= 0 or t_max <= 0:
        raise CliError("--t-max and --dt must be positive")
    spec = _reservoir_from_config(cfg, n)
    alpha = cfg.scenario.alpha
    cutoff = cfg.cutoff
    times = np.arange(0.0, t_max + dt / 2.0, dt)
    rows = []
    for t in times:
        psi = dynamics.analytic_joint_state(t, alpha, spec, cutoff)
        rho_q = dynamics.reduced_qubit_state(psi, 0)
        entropy = analysis.von_neumann_entropy(rho_q)
        branches = []
        for k in range(n):
            ba = dynamics.branch_amplitudes(k, t, spec)
            vec = np.array([ba.c_g, ba.c_e])
            branches.append(DensityMatrix(SpaceLayout((2,)), np.outer(vec, vec.conj())))
        disting = analysis.reservoir_distinguishability(branches)
        rows.append(
            (t / NS, abs(dynamics.coherence_factor(t, spec)), entropy, disting)
        )
    _write_csv(
        args.out, ["t_ns", "coh_factor_abs", "entropy_bits", "distinguishability"], rows
    )
    outputs = [args.out]
    for t_ns in args.wigner_times or []:
        psi = dynamics.analytic_joint_state(t_ns * NS, alpha, spec, cutoff)
        rho_f = dynamics.reduced_field_state(psi)
        re_grid, im_grid = cfg.scenario.wigner_grid.grids()
        wmap = tomography.wigner_map(rho_f, re_grid, im_grid)
        path = f"{args.out}.wigner_t{_fmt(t_ns)}ns.csv"
        _write_wigner(path, wmap)
        outputs.append(path)
    return outputs


def _write_wigner(path: str, wmap: tomography.WignerMap) -> None:
    rows = []
    for i, x in enumerate(wmap.re_grid):
        for j, y in enumerate(wmap.im_grid):
            rows.append((x, y, wmap.values[i, j]))
    _write_csv(path, ["re", "im", "w"], rows)


def _cmd_wigner(args) -> list[str]:
    cfg = load_config(args.config)
    spec = catprep.CatSpec(alpha=cfg.scenario.alpha)
    cat = catprep.make_amplitude_cat(spec, cfg.cutoff, cfg.ancilla_xi_MHz * MHZ)
    rho = density_from_state(cat)
    if args.time is not None:
        rspec = _reservoir_from_config(cfg, cfg.scenario.n_qubits)
        psi = dynamics.analytic_joint_state(
            args.time * NS, cfg.scenario.alpha, rspec, cfg.cutoff
        )
        rho = dynamics.reduced_field_state(psi)
    if args.theta:
        rho = tomography.derotate(rho, args.theta)
    re_grid, im_grid = cfg.scenario.wigner_grid.grids()
    wmap = tomography.wigner_map(rho, re_grid, im_grid)
    _write_wigner(args.out, wmap)
    return [args.out]


def _cmd_fit_rabi(args) -> list[str]:
    rows = _read_csv(args.data, ["tau_ns", "pe"])
    taus = np.array([_float_field(r, "tau_ns", args.data) for r in rows]) * NS
    pe = np.array([_float_field(r, "pe", args.data) for r in rows])
    if args.noise > 0:
        rng = np.random.default_rng(args.seed)
        pe = pe + rng.normal(0.0, args.noise, pe.shape)
    trace = tomography.RabiTrace(taus, pe, args.xi_mhz * MHZ)
    pn = tomography.fit_photon_numbers(trace, args.n_max)
    _write_csv(args.out, ["n", "p"], list(enumerate(pn)))
    return [args.out]


def _cmd_disting(args) -> list[str]:
    cols = ["qubit", "re00", "im00", "re01", "im01", "re10", "im10", "re11", "im11"]
    rows = _read_csv(args.branches, cols)
    branches = []
    for row in rows:
        vals = [_float_field(row, c, args.branches) for c in cols[1:]]
        mat = np.array(
            [
                [vals[0] + 1j * vals[1], vals[2] + 1j * vals[3]],
                [vals[4] + 1j * vals[5], vals[6] + 1j * vals[7]],
            ]
        )
        branches.append(DensityMatrix(SpaceLayout((2,)), mat))
    d = analysis.reservoir_distinguishability(branches)
    print(_fmt(d))
    return []


def _cmd_crosstalk_solve(args) -> list[str]:
    coeff_rows = _read_csv(args.coeffs, ["i", "j", "alpha"])
    target_rows = _read_csv(args.targets, ["i", "z_eff"])
    n = len(target_rows)
    order = []
    z_eff = np.zeros(n)
    index = {}
    for row in target_rows:
        i = row["i"]
        if i in index:
            raise CliError(f"{args.targets}: duplicate qubit index {i}")
        index[i] = len(order)
        order.append(i)
        z_eff[index[i]] = _float_field(row, "z_eff", args.targets)
    coeffs = np.zeros((n, n))
    for row in coeff_rows:
        i, j = row["i"], row["j"]
        if i not in index or j not in index:
            raise CliError(f"{args.coeffs}: unknown qubit index in row {row}")
        if i == j:
            raise CliError(f"{args.coeffs}: diagonal coefficient for qubit {i}")
        coeffs[index[i], index[j]] = _float_field(row, "alpha", args.coeffs)
    m = calib.assemble_mcor(coeffs)
    z_cmd = calib.commanded_amplitudes(m, z_eff)
    _write_csv(args.out, ["i", "z_cmd"], list(zip(order, z_cmd)))
    return [args.out]


# ---------------------------------------------------------------- plumbing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catbath",
        description="Cat-state decoherence simulator: preparation, Floquet "
        "calibration, reservoir dynamics, tomography, and analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prep-cat", help="emit the swap sequence and cat amplitudes")
    p.add_argument("--config", required=True)
    p.add_argument("--steps-out", required=True)
    p.add_argument("--fock-out", required=True)
    p.set_defaults(func=_cmd_prep_cat)

    p = sub.add_parser("floquet-calib", help="sideband couplings and Stark shifts")
    p.add_argument("--params", required=True, help="CSV: name,xi_MHz,eps_MHz,nu_MHz,delta_MHz,K_MHz")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_floquet_calib)

    p = sub.add_parser("decohere", help="reservoir decoherence trace")
    p.add_argument("--config", required=True)
    p.add_argument("--n-qubits", type=int, default=None)
    p.add_argument("--t-max", type=float, default=None, help="ns")
    p.add_argument("--dt", type=float, default=None, help="ns")
    p.add_argument("--out", required=True)
    p.add_argument(
        "--wigner-times",
        type=float,
        nargs="*",
        default=None,
        metavar="T_NS",
        help="emit field Wigner snapshots at these times",
    )
    p.set_defaults(func=_cmd_decohere)

    p = sub.add_parser("wigner", help="Wigner map of the prepared cat")
    p.add_argument("--config", required=True)
    p.add_argument("--time", type=float, default=None, help="ns of reservoir evolution")
    p.add_argument("--theta", type=float, default=0.0, help="derotation angle, rad")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_wigner)

    p = sub.add_parser("fit-rabi", help="invert a Rabi trace into photon numbers")
    p.add_argument("--data", required=True, help="CSV: tau_ns,pe")
    p.add_argument("--xi-mhz", type=float, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--noise", type=float, default=0.0, help="add Gaussian noise of this sigma")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_fit_rabi)

    p = sub.add_parser("disting", help="distinguishability from per-qubit branches")
    p.add_argument("--branches", required=True, help="CSV: qubit,re00,im00,...,im11")
    p.set_defaults(func=_cmd_disting)

    p = sub.add_parser("crosstalk-solve", help="commanded Z amplitudes from targets")
    p.add_argument("--coeffs", required=True, help="CSV: i,j,alpha")
    p.add_argument("--targets", required=True, help="CSV: i,z_eff")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_crosstalk_solve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            outputs = args.func(args)
        except (ConfigError, CliError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
            print(f"numerical failure: {exc}", file=sys.stderr)
            return 2
    if caught:
        lines = [f"{w.category.__name__}: {w.message}" for w in caught]
        if outputs:
            with open(f"{outputs[0]}.warnings.log", "w", encoding="utf-8") as fh:
                fh.write("\n".join(lines) + "\n")
        else:
            for line in lines:
                print(f"warning: {line}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
