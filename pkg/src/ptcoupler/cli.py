"""Command-line front end: figure datasets and config-driven sweeps.

Subcommands
-----------
fig2   classical power decay, balanced-orthogonal and single-arm launches
fig3   survival of the indistinguishable photon pair, memoryless loss
fig4   entangled-pair survival vs distance (a) and vs loss rate (b)
fig5   fermionic-pair survival with the explicit chain reservoir
sweep  Cartesian parameter sweep driven by a config file

CSV format
----------
Every data file starts with '# key=value' metadata lines, then one header
row, then data rows. Floats are printed with 17 significant digits, enough
for the printed text to parse back to the exact same doubles, so identical
invocations produce byte-identical files. Anything about a particular run
that is not data (the resolved settings, the list of files written) goes
to a sidecar text file next to the CSVs, never into them.

Sweep config format
-------------------
Flat 'key = value' lines; '#' starts a comment; lists are comma-separated.

  backend       required, markovian | lattice
  gamma         list, loss-rate axis        (markovian backend)
  rho           list, chain-coupling axis   (lattice backend)
  phi           list, exchange phases in [0, pi]
  z             list, propagation distances
  observables   list out of: classical_power, mean_photon_number, p_boson,
                p_entangled, p_fermion, ep_regime, eigenvalue_gap
                (default: all of them)
  kappa         scalar, default 1.0
  beta1, beta2  scalars, default 0.0
  sigma         scalar, required for backend=lattice
  nsites        integer, default min_lattice_size(sigma, max z)
  beta_lattice  scalar, default beta2

One output row per (gamma-or-rho, phi, z) tuple, in declared order. For
the lattice backend the ep_regime and eigenvalue_gap columns use the
effective rate rho^2 / (2 sigma). Empty axis lists produce a header-only
file. Exit codes: 0 success, 1 bad flags or config, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .classical import classical_power_curve, classify_ep, supermodes
from .core import (
    ClassicalInput,
    CouplerParams,
    DecayCurve,
    Indistinguishable,
    PolarizationEntangled,
    PropagationGrid,
)
from .quantum import (
    Lattice,
    Markovian,
    mean_photon_number,
    survival_curve,
    survival_entangled,
    survival_fermionic,
    survival_indistinguishable,
)
from .reservoir import LatticePropagator, LatticeReservoir, lattice_gamma, min_lattice_size
from .scattering import scattering_matrix

__all__ = [
    "format_float",
    "write_table",
    "write_decay_curves",
    "read_decay_curves",
    "parse_sweep_config",
    "SWEEP_OBSERVABLES",
    "build_parser",
    "main",
]

FLOAT_FORMAT = ".17g"


def format_float(x: float) -> str:
    """17 significant digits: parses back to the identical double."""
    return format(float(x), FLOAT_FORMAT)


# ---------------------------------------------------------------------------
# CSV writing and reading
# ---------------------------------------------------------------------------

def write_table(path, metadata: dict, header: list[str], rows) -> None:
    lines = [f"# {key}={value}" for key, value in metadata.items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def write_decay_curves(path, metadata: dict, curves: list[DecayCurve]) -> None:
    """Curves side by side over their common z grid, first column z."""
    if not curves:
        raise ValueError("need at least one curve")
    zs = curves[0].z_values()
    for curve in curves[1:]:
        if not np.array_equal(curve.z_values(), zs):
            raise ValueError("curves must share one z grid")
    header = ["z"] + [curve.label for curve in curves]
    columns = [zs] + [curve.values() for curve in curves]
    rows = ([format_float(col[i]) for col in columns] for i in range(len(zs)))
    write_table(path, metadata, header, rows)


def read_decay_curves(path) -> tuple[dict, list[DecayCurve]]:
    """Inverse of write_decay_curves; floats come back bit-identical."""
    metadata: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[list[str]] = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            metadata[key] = value
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append(line.split(","))
    if header is None:
        raise ValueError(f"{path}: missing header row")
    if not rows:
        raise ValueError(f"{path}: no data rows")
    columns = list(zip(*rows))
    zs = [float(v) for v in columns[0]]
    curves = [
        DecayCurve.from_arrays(label, zs, [float(v) for v in column])
        for label, column in zip(header[1:], columns[1:])
    ]
    return metadata, curves


def _write_sidecar(outdir: Path, command: str, settings: dict, files: list[str]) -> None:
    lines = [f"command={command}"]
    lines += [f"{key}={value}" for key, value in settings.items()]
    lines.append("files=" + ";".join(files))
    (outdir / f"{command}_run.txt").write_text("\n".join(lines) + "\n", newline="\n")


def _base_metadata(command: str, **values) -> dict:
    meta = {"version": __version__, "command": command}
    for key, value in values.items():
        if isinstance(value, float):
            meta[key] = format_float(value)
        else:
            meta[key] = str(value)
    return meta


# ---------------------------------------------------------------------------
# Figure commands
# ---------------------------------------------------------------------------

def cmd_fig2(args) -> int:
    kappa = args.kappa
    zmax = args.zmax if args.zmax is not None else 10.0 / kappa
    points = args.points if args.points is not None else 501
    gammas = [args.gamma] if args.gamma is not None else [0.5 * kappa, 2.0 * kappa, 10.0 * kappa]
    grid = PropagationGrid(zmax, points)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for gamma in gammas:
        params = CouplerParams(args.beta1, args.beta2, kappa, gamma)
        balanced = classical_power_curve(params, ClassicalInput.BALANCED_ORTHOGONAL, grid)
        single = classical_power_curve(params, ClassicalInput.SINGLE_WAVEGUIDE, grid)
        meta = _base_metadata(
            "fig2", backend="markovian", kappa=kappa, gamma=gamma,
            beta1=args.beta1, beta2=args.beta2, zmax=zmax, points=points,
            solid="power_balanced_orthogonal", dashed="power_single_waveguide",
        )
        name = f"fig2_gamma{gamma / kappa:g}.csv"
        write_decay_curves(outdir / name, meta, [balanced, single])
        written.append(name)
    _write_sidecar(outdir, "fig2", {
        "kappa": format_float(kappa), "gammas": ";".join(map(format_float, gammas)),
        "beta1": format_float(args.beta1), "beta2": format_float(args.beta2),
        "zmax": format_float(zmax), "points": points,
    }, written)
    return 0


def cmd_fig3(args) -> int:
    kappa = args.kappa
    zmax = args.zmax if args.zmax is not None else 10.0 / kappa
    points = args.points if args.points is not None else 501
    gammas = [args.gamma] if args.gamma is not None else [0.5 * kappa, 2.0 * kappa, 10.0 * kappa]
    grid = PropagationGrid(zmax, points)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for gamma in gammas:
        params = CouplerParams(args.beta1, args.beta2, kappa, gamma)
        curve = survival_curve(params, Indistinguishable(), grid)
        meta = _base_metadata(
            "fig3", backend="markovian", input="indistinguishable_pair",
            kappa=kappa, gamma=gamma, beta1=args.beta1, beta2=args.beta2,
            zmax=zmax, points=points,
        )
        name = f"fig3_gamma{gamma / kappa:g}.csv"
        write_decay_curves(outdir / name, meta, [curve])
        written.append(name)
    _write_sidecar(outdir, "fig3", {
        "kappa": format_float(kappa), "gammas": ";".join(map(format_float, gammas)),
        "beta1": format_float(args.beta1), "beta2": format_float(args.beta2),
        "zmax": format_float(zmax), "points": points,
    }, written)
    return 0


def cmd_fig4(args) -> int:
    kappa = args.kappa
    zmax = args.zmax if args.zmax is not None else 3.0 / kappa
    points = args.points if args.points is not None else 301
    gammas = [args.gamma] if args.gamma is not None else [0.625 * kappa, 2.5 * kappa]
    phis = [args.phi] if args.phi is not None else [0.0, 2.0 * math.pi / 3.0, math.pi]
    grid = PropagationGrid(zmax, points)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    # Panel (a): survival vs distance, one file per loss rate.
    for gamma in gammas:
        params = CouplerParams(args.beta1, args.beta2, kappa, gamma)
        curves = [survival_curve(params, PolarizationEntangled(phi), grid) for phi in phis]
        meta = _base_metadata(
            "fig4", panel="a", backend="markovian", input="polarization_entangled_pair",
            kappa=kappa, gamma=gamma, beta1=args.beta1, beta2=args.beta2,
            zmax=zmax, points=points, phis=";".join(map(format_float, phis)),
        )
        name = f"fig4a_gamma{gamma / kappa:g}.csv"
        write_decay_curves(outdir / name, meta, curves)
        written.append(name)

    # Panel (b): survival at the fixed distance z0 against the loss rate.
    # z0 is the dimensionless product kappa*z0 = 3 converted to a length.
    z0 = 3.0 / kappa
    gamma_axis = np.linspace(0.0, 5.0 * kappa, 201)
    header = ["gamma"] + [f"survival_phi_{phi:.12g}" for phi in phis]
    rows = []
    for gamma in gamma_axis:
        params = CouplerParams(args.beta1, args.beta2, kappa, float(gamma))
        s = scattering_matrix(params, z0)
        rows.append([format_float(gamma)] + [format_float(survival_entangled(s, phi)) for phi in phis])
    meta = _base_metadata(
        "fig4", panel="b", backend="markovian", input="polarization_entangled_pair",
        kappa=kappa, beta1=args.beta1, beta2=args.beta2,
        z0=z0, kappa_z0=3.0, gamma_min=0.0, gamma_max=5.0 * kappa, gamma_points=201,
        phis=";".join(map(format_float, phis)),
    )
    write_table(outdir / "fig4b.csv", meta, header, rows)
    written.append("fig4b.csv")

    _write_sidecar(outdir, "fig4", {
        "kappa": format_float(kappa), "gammas": ";".join(map(format_float, gammas)),
        "phis": ";".join(map(format_float, phis)),
        "beta1": format_float(args.beta1), "beta2": format_float(args.beta2),
        "zmax": format_float(zmax), "points": points, "z0": format_float(z0),
    }, written)
    return 0


def cmd_fig5(args) -> int:
    kappa = args.kappa
    zmax = args.zmax if args.zmax is not None else 3.0 / kappa
    points = args.points if args.points is not None else 301
    sigma = args.sigma if args.sigma is not None else 20.0 * kappa
    rhos = [args.rho] if args.rho is not None else [5.0 * kappa, 10.0 * kappa]
    phi = args.phi if args.phi is not None else math.pi
    nsites = args.nsites if args.nsites is not None else min_lattice_size(sigma, zmax)
    params = CouplerParams(args.beta1, args.beta2, kappa, 0.0)
    grid = PropagationGrid(zmax, points)
    zs = grid.points()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for rho in rhos:
        reservoir = LatticeReservoir(sigma=sigma, rho=rho, n_sites=nsites, beta_lattice=args.beta2)
        exact = survival_curve(params, PolarizationEntangled(phi), grid, Lattice(reservoir))
        gamma_eff = lattice_gamma(sigma, rho)
        lattice_curve = DecayCurve.from_arrays("survival_lattice", zs, exact.values())
        markov_curve = DecayCurve.from_arrays(
            "survival_markovian_exponential", zs, np.exp(-2.0 * gamma_eff * zs)
        )
        meta = _base_metadata(
            "fig5", backend="lattice", input="polarization_entangled_pair",
            kappa=kappa, beta1=args.beta1, beta2=args.beta2, phi=phi,
            sigma=sigma, rho=rho, nsites=nsites, beta_lattice=args.beta2,
            gamma_eff=gamma_eff, zmax=zmax, points=points,
            dashed="exp(-2*gamma_eff*z)",
        )
        name = f"fig5_rho{rho / kappa:g}.csv"
        write_decay_curves(outdir / name, meta, [lattice_curve, markov_curve])
        written.append(name)
    _write_sidecar(outdir, "fig5", {
        "kappa": format_float(kappa), "rhos": ";".join(map(format_float, rhos)),
        "sigma": format_float(sigma), "phi": format_float(phi), "nsites": nsites,
        "beta1": format_float(args.beta1), "beta2": format_float(args.beta2),
        "zmax": format_float(zmax), "points": points,
    }, written)
    return 0


# ---------------------------------------------------------------------------
# Sweep
# ---------------------------------------------------------------------------

SWEEP_OBSERVABLES = (
    "classical_power",
    "mean_photon_number",
    "p_boson",
    "p_entangled",
    "p_fermion",
    "ep_regime",
    "eigenvalue_gap",
)

_SWEEP_KEYS = (
    "backend", "gamma", "rho", "phi", "z", "observables",
    "kappa", "beta1", "beta2", "sigma", "nsites", "beta_lattice",
)


class SweepConfig:
    def __init__(self, **kw):
        self.__dict__.update(kw)


def _parse_number(key: str, token: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ValueError(f"config: {key}: could not parse {token!r} as a number") from None
    if not math.isfinite(value):
        raise ValueError(f"config: {key}: must be finite, got {token!r}")
    return value


def _parse_number_list(key: str, raw: str) -> tuple[float, ...]:
    raw = raw.strip()
    if not raw:
        return ()
    out = []
    for i, token in enumerate(raw.split(",")):
        token = token.strip()
        if not token:
            raise ValueError(f"config: {key}[{i}]: empty entry")
        out.append(_parse_number(f"{key}[{i}]", token))
    return tuple(out)


def parse_sweep_config(text: str) -> SweepConfig:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _SWEEP_KEYS:
            raise ValueError(f"config: unknown key {key!r}")
        if key in entries:
            raise ValueError(f"config: duplicate key {key!r}")
        entries[key] = value

    backend = entries.get("backend")
    if backend is None:
        raise ValueError("config: backend: required (markovian or lattice)")
    if backend not in ("markovian", "lattice"):
        raise ValueError(f"config: backend: must be markovian or lattice, got {backend!r}")

    if "observables" in entries and entries["observables"].strip():
        observables = tuple(tok.strip() for tok in entries["observables"].split(","))
        for name in observables:
            if name not in SWEEP_OBSERVABLES:
                raise ValueError(f"config: observables: unknown observable {name!r}")
    else:
        observables = SWEEP_OBSERVABLES

    nsites = None
    if entries.get("nsites", "").strip():
        token = entries["nsites"].strip()
        try:
            nsites = int(token)
        except ValueError:
            raise ValueError(f"config: nsites: could not parse {token!r} as an integer") from None

    def scalar(key: str, default):
        if entries.get(key, "").strip():
            return _parse_number(key, entries[key].strip())
        return default

    return SweepConfig(
        backend=backend,
        gamma=_parse_number_list("gamma", entries.get("gamma", "")),
        rho=_parse_number_list("rho", entries.get("rho", "")),
        phi=_parse_number_list("phi", entries.get("phi", "")),
        z=_parse_number_list("z", entries.get("z", "")),
        observables=observables,
        kappa=scalar("kappa", 1.0),
        beta1=scalar("beta1", 0.0),
        beta2=scalar("beta2", 0.0),
        sigma=scalar("sigma", None),
        nsites=nsites,
        beta_lattice=scalar("beta_lattice", None),
    )


def _observable_cell(name: str, s, phi: float, params_eff: CouplerParams) -> str:
    if name == "classical_power":
        return format_float(0.5 * mean_photon_number(s))
    if name == "mean_photon_number":
        return format_float(mean_photon_number(s))
    if name == "p_boson":
        return format_float(survival_indistinguishable(s))
    if name == "p_entangled":
        return format_float(survival_entangled(s, phi))
    if name == "p_fermion":
        return format_float(survival_fermionic(s))
    if name == "ep_regime":
        return classify_ep(params_eff).regime.value
    if name == "eigenvalue_gap":
        return format_float(supermodes(params_eff).gap())
    raise ValueError(f"unknown observable {name!r}")


def run_sweep(cfg: SweepConfig) -> tuple[dict, list[str], list[list[str]]]:
    if cfg.backend == "markovian":
        if cfg.rho:
            raise ValueError("config: rho: only meaningful with backend=lattice")
        axis_name, axis = "gamma", cfg.gamma
    else:
        if any(g != 0.0 for g in cfg.gamma):
            raise ValueError(
                "config: gamma: explicit loss cannot be combined with the lattice "
                "backend; sweep rho instead"
            )
        if cfg.sigma is None:
            raise ValueError("config: sigma: required for backend=lattice")
        axis_name, axis = "rho", cfg.rho
    if "ep_regime" in cfg.observables and cfg.beta1 != cfg.beta2:
        raise ValueError("config: ep_regime: requires beta1 == beta2")

    header = [axis_name, "phi", "z"] + list(cfg.observables)
    meta = _base_metadata(
        "sweep", backend=cfg.backend, kappa=cfg.kappa,
        beta1=cfg.beta1, beta2=cfg.beta2,
    )
    if cfg.backend == "lattice":
        meta["sigma"] = format_float(cfg.sigma)
        meta["regime_columns_use"] = "effective_gamma=rho^2/(2*sigma)"

    rows: list[list[str]] = []
    if not (axis and cfg.phi and cfg.z):
        return meta, header, rows

    for a in axis:
        if cfg.backend == "markovian":
            params_eff = CouplerParams(cfg.beta1, cfg.beta2, cfg.kappa, a)
            s_for = lambda z: scattering_matrix(params_eff, z)
        else:
            params_eff = CouplerParams(cfg.beta1, cfg.beta2, cfg.kappa, lattice_gamma(cfg.sigma, a))
            zmax = max(cfg.z)
            nsites = cfg.nsites if cfg.nsites is not None else (
                min_lattice_size(cfg.sigma, zmax) if zmax > 0.0 else 11
            )
            beta_lattice = cfg.beta_lattice if cfg.beta_lattice is not None else cfg.beta2
            reservoir = LatticeReservoir(cfg.sigma, a, nsites, beta_lattice)
            propagator = LatticePropagator(
                CouplerParams(cfg.beta1, cfg.beta2, cfg.kappa, 0.0), reservoir
            )
            s_for = propagator.scattering
        s_by_z = {z: s_for(z) for z in cfg.z}
        for phi in cfg.phi:
            for z in cfg.z:
                s = s_by_z[z]
                rows.append(
                    [format_float(a), format_float(phi), format_float(z)]
                    + [_observable_cell(name, s, phi, params_eff) for name in cfg.observables]
                )
    return meta, header, rows


def cmd_sweep(args) -> int:
    text = Path(args.config).read_text()
    cfg = parse_sweep_config(text)
    meta, header, rows = run_sweep(cfg)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    write_table(outdir / "sweep.csv", meta, header, rows)
    _write_sidecar(outdir, "sweep", {"config": str(args.config), "rows": len(rows)}, ["sweep.csv"])
    return 0


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------

class _CliError(Exception):
    """Bad flags or bad config: reported on stderr, exit code 1."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(message)


def _positive_float(text: str) -> float:
    # Downstream defaults (zmax, the gamma set) are derived from kappa, so a
    # bad kappa must be rejected here or the error blames the wrong flag.
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid float value: {text!r}") from None
    if not value > 0.0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _add_common(sub, *, gamma=False, phi=False, lattice=False):
    sub.add_argument("--out", default=".", help="output directory (created if missing)")
    sub.add_argument("--points", type=int, default=None, help="grid points along z")
    sub.add_argument("--zmax", type=float, default=None, help="largest propagation distance")
    sub.add_argument("--kappa", type=_positive_float, default=1.0, help="coupling rate")
    sub.add_argument("--beta1", type=float, default=0.0, help="propagation constant, arm 1")
    sub.add_argument("--beta2", type=float, default=0.0, help="propagation constant, arm 2")
    if gamma:
        sub.add_argument("--gamma", type=float, default=None,
                         help="single loss rate replacing the default set")
    if phi:
        sub.add_argument("--phi", type=float, default=None,
                         help="single exchange phase replacing the default")
    if lattice:
        sub.add_argument("--sigma", type=float, default=None, help="chain hopping rate")
        sub.add_argument("--rho", type=float, default=None,
                         help="single chain coupling replacing the default set")
        sub.add_argument("--nsites", type=int, default=None, help="chain length")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="ptcoupler",
        description="Lossy two-waveguide coupler: decay curves and pair-survival datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p2 = sub.add_parser("fig2", help="classical power decay curves")
    _add_common(p2, gamma=True)
    p2.set_defaults(func=cmd_fig2)

    p3 = sub.add_parser("fig3", help="indistinguishable-pair survival curves")
    _add_common(p3, gamma=True)
    p3.set_defaults(func=cmd_fig3)

    p4 = sub.add_parser("fig4", help="entangled-pair survival vs z and vs loss rate")
    _add_common(p4, gamma=True, phi=True)
    p4.set_defaults(func=cmd_fig4)

    p5 = sub.add_parser("fig5", help="fermionic-pair survival with the chain reservoir")
    _add_common(p5, phi=True, lattice=True)
    p5.set_defaults(func=cmd_fig5)

    ps = sub.add_parser("sweep", help="config-driven Cartesian sweep")
    ps.add_argument("--config", required=True, help="path to the sweep config file")
    ps.add_argument("--out", default=".", help="output directory (created if missing)")
    ps.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
