"""Command-line front end.

Every table goes out as CSV whose first line is ``# {json}``: the fully
resolved run configuration.  Exit status 0 on success, 1 for invalid
arguments, 2 for numeric failure.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import sys

import numpy as np

from . import __version__
from .coupling import AtomSite, build_sigma, write_sigma_csv
from .dynamics import ProtocolStage, effective_matrix, evolve, simulate_protocol
from .ensemble import EnsembleSpec, SamplingError, averaged_scan, config_coupling
from .geometry import DEFAULT_MAX_INDEX, WaveguideGeometry, enumerate_modes
from .kernel import BACKEND
from .scattering import transport

EXIT_INVALID = 1
EXIT_NUMERIC = 2
# flagged (regularized) points may lose at most this much probe flux
REGULARIZED_ENERGY_TOL = 1e-2
ORACLE_TOL = 1e-10


class UsageError(Exception):
    pass


class NumericFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def parse_scan(text: str) -> np.ndarray:
    try:
        start, stop, steps = text.split(":")
        start, stop, steps = float(start), float(stop), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:steps, got {text!r}")
    if steps < 1 or not (math.isfinite(start) and math.isfinite(stop)):
        raise argparse.ArgumentTypeError("scan needs finite bounds and at least one step")
    return np.linspace(start, stop, steps)


def parse_pos(text: str):
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y, got {text!r}")
    return x, y


def _finite(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("value must be finite")
    return v


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _write_table(args, config: dict, header, rows) -> None:
    with _open_out(args.output) as fh:
        fh.write("# " + json.dumps(config, sort_keys=True) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _base_config(args) -> dict:
    cfg = {k: (v.tolist() if isinstance(v, np.ndarray) else v)
           for k, v in vars(args).items() if k not in ("func", "output", "dump_sigma", "summary")}
    cfg["version"] = __version__
    return cfg


def _geometry(args) -> WaveguideGeometry:
    return WaveguideGeometry(args.ka, args.kb)


def _fixed_site(geom, args) -> AtomSite:
    x, y = args.pos if args.pos is not None else (geom.ka / 2, geom.kb / 2)
    return AtomSite(x, y, 0.0)


def cmd_modes(args):
    geom = _geometry(args)
    rows = [(md.family, md.m, md.n, md.cutoff, md.axial.real, md.axial.imag)
            for md in enumerate_modes(geom, args.max_index)]
    _write_table(args, _base_config(args),
                 ["family", "m", "n", "cutoff", "re_axial", "im_axial"], rows)


def cmd_decay(args):
    geom = _geometry(args)
    site = _fixed_site(geom, args)
    cm = build_sigma(geom, [site])
    if args.dump_sigma:
        write_sigma_csv(cm, args.dump_sigma)
    # fastest population decay rate; equals 2 gamma' in a single-mode guide
    fastest = float(np.linalg.eigvalsh(cm.decay_matrix()).max())
    if args.tmax is None and fastest <= 0:
        raise UsageError("atom does not decay here; pass --tmax explicitly")
    tmax = args.tmax if args.tmax is not None else 24.0 / fastest
    times = np.linspace(0.0, tmax, args.steps)
    b0 = np.zeros(3, dtype=complex)
    b0[args.initial + 1] = 1.0
    tr = evolve(effective_matrix(cm, args.dz), b0, times)
    pops = tr.populations
    rows = zip(times, pops[:, 0], pops[:, 1], pops[:, 2], tr.dark(), tr.emitted)
    cfg = _base_config(args)
    cfg.update(resolved_tmax=tmax, fastest_rate=fastest, method=tr.method)
    _write_table(args, cfg, ["t", "p_m_minus", "p_m_0", "p_m_plus", "p_dark", "emitted"], rows)


def _load_stages(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
        return [ProtocolStage(float(s["dz"]), float(s["duration"])) for s in raw]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read stage file {path}: {exc}")


def cmd_photon(args):
    geom = _geometry(args)
    stages = _load_stages(args.stages)
    if not stages:
        raise UsageError("stage file lists no stages")
    cm = build_sigma(geom, [_fixed_site(geom, args)])
    if args.dump_sigma:
        write_sigma_csv(cm, args.dump_sigma)
    b0 = np.zeros(3, dtype=complex)
    b0[args.initial + 1] = 1.0
    res = simulate_protocol(cm, stages, b0, args.dt)
    cfg = _base_config(args)
    cfg["stages_resolved"] = [{"dz": s.dz, "duration": s.duration} for s in stages]
    _write_table(args, cfg, ["t", "p_exc", "flux"],
                 zip(res.trace.times, res.trace.excitation, res.flux))
    summary = {
        "emitted_per_stage": res.emitted_per_stage,
        "final_excitation": float(res.trace.excitation[-1]),
        "methods": res.methods,
    }
    text = json.dumps(summary, sort_keys=True)
    if args.summary:
        with open(args.summary, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=sys.stderr)


def _ensemble_spec(args) -> EnsembleSpec:
    n_atoms = 1 if args.single_atom else args.atoms
    return EnsembleSpec(density=args.density, length=args.length, n_configs=args.configs,
                        seed=args.seed, n_atoms=n_atoms)


def _scan(args, *, delta, dz):
    """Returns (grid, T_mean, T_stderr, R_mean) for a fixed atom or an ensemble."""
    geom = _geometry(args)
    if args.pos is not None:
        cm = build_sigma(geom, [_fixed_site(geom, args)])
        spec = None
    else:
        spec = _ensemble_spec(args)
        if args.single_config is not None:
            cm = config_coupling(spec, geom, args.single_config)
        else:
            cm = None
    if args.dump_sigma:
        write_sigma_csv(cm if cm is not None else config_coupling(spec, geom, 0), args.dump_sigma)

    if cm is not None:
        scan_dz = np.ndim(dz) > 0
        grid = dz if scan_dz else delta
        res = [transport(cm, float(v), float(delta)) if scan_dz else transport(cm, float(dz), float(v))
               for v in grid]
        worst = max((r.energy_error for r in res if r.regularized), default=0.0)
        out = (grid, np.array([r.T for r in res]), np.zeros(len(res)), np.array([r.R for r in res]))
    else:
        scan = averaged_scan(spec, geom, delta=delta, dz=dz)
        worst = scan.max_regularized_energy_error
        out = (scan.grid, scan.T_mean, scan.T_stderr, scan.R_mean)
    if worst > REGULARIZED_ENERGY_TOL:
        raise NumericFailure(
            f"regularized solve lost {worst:.3g} of the probe flux (tolerance {REGULARIZED_ENERGY_TOL})")
    return out


def cmd_gate(args):
    grid, t_mean, t_err, r_mean = _scan(args, delta=args.delta, dz=args.dz_scan)
    _write_table(args, _base_config(args), ["dz", "T_mean", "T_stderr", "R_mean"],
                 zip(grid, t_mean, t_err, r_mean))


def cmd_spectrum(args):
    grid, t_mean, _, r_mean = _scan(args, delta=args.delta_scan, dz=args.dz)
    _write_table(args, _base_config(args), ["delta", "T", "R"], zip(grid, t_mean, r_mean))


def cmd_oracle_check(args):
    from .checks import oracle_deviation
    dev = oracle_deviation(args.grid, ka=args.ka, kb=args.kb)
    report = {k: float(v) for k, v in dev.items()}
    report["tolerance"] = ORACLE_TOL
    report["passed"] = report["max"] < ORACLE_TOL
    with _open_out(args.output) as fh:
        fh.write(json.dumps(report, sort_keys=True) + "\n")
    if not report["passed"]:
        raise NumericFailure(f"oracle deviation {report['max']:.3g} exceeds {ORACLE_TOL}")


def _add_ensemble_flags(p):
    p.add_argument("--pos", type=parse_pos, help="fixed single atom at x,y (skips ensemble sampling)")
    p.add_argument("--atoms", type=int, help="atom count (overrides density)")
    p.add_argument("--density", type=_finite, default=2e-3, help="n * lambdabar^3")
    p.add_argument("--length", type=_finite, default=750.0, help="k0 L")
    p.add_argument("--configs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--single-atom", action="store_true", help="one randomly placed atom per configuration")
    p.add_argument("--single-config", type=int, metavar="K", help="report configuration K alone")
    p.add_argument("--dump-sigma", metavar="PATH")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="magnetoguide",
                     description="Magneto-optical response of J=0-1 atoms in a rectangular waveguide.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--ka", type=_finite, default=4.0)
        p.add_argument("--kb", type=_finite, default=2.0)
        p.add_argument("--output", "-o", default="-")

    p = sub.add_parser("modes", help="list guided modes")
    common(p)
    p.add_argument("--max-index", type=int, default=DEFAULT_MAX_INDEX)
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("decay", help="spontaneous decay of one atom")
    common(p)
    p.add_argument("--pos", type=parse_pos)
    p.add_argument("--dz", type=_finite, default=0.0)
    p.add_argument("--tmax", type=_finite)
    p.add_argument("--steps", type=int, default=600)
    p.add_argument("--initial", type=int, choices=(-1, 0, 1), default=-1)
    p.add_argument("--dump-sigma", metavar="PATH")
    p.set_defaults(func=cmd_decay)

    p = sub.add_parser("photon", help="switched-field single-photon protocol")
    common(p)
    p.add_argument("--stages", required=True, help='JSON list of {"dz": .., "duration": ..}')
    p.add_argument("--pos", type=parse_pos)
    p.add_argument("--dt", type=_finite, default=0.01)
    p.add_argument("--initial", type=int, choices=(-1, 0, 1), default=-1)
    p.add_argument("--summary", metavar="PATH", help="write the JSON summary here instead of stderr")
    p.add_argument("--dump-sigma", metavar="PATH")
    p.set_defaults(func=cmd_photon)

    p = sub.add_parser("spectrum", help="T and R versus probe detuning")
    common(p)
    p.add_argument("--dz", type=_finite, required=True)
    p.add_argument("--delta-scan", type=parse_scan, required=True)
    _add_ensemble_flags(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("gate", help="T and R versus Zeeman splitting")
    common(p)
    p.add_argument("--delta", type=_finite, required=True)
    p.add_argument("--dz-scan", type=parse_scan, required=True)
    _add_ensemble_flags(p)
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("oracle-check", help="numeric solver versus closed form")
    common(p)
    p.add_argument("--grid", type=int, default=50)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        for name in ("steps", "configs", "max_index", "grid"):
            if getattr(args, name, 1) is not None and getattr(args, name, 1) < 1:
                parser.error(f"--{name.replace('_', '-')} must be >= 1")
        if getattr(args, "atoms", None) is not None and args.atoms < 1:
            parser.error("--atoms must be >= 1")
        if getattr(args, "dt", 1.0) <= 0:
            parser.error("--dt must be positive")
    except SystemExit as exc:
        # usage errors exit 1; --help and --version exit 0
        return int(exc.code or 0)
    try:
        args.func(args)
    except NumericFailure as exc:
        print(f"magnetoguide: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError, SamplingError) as exc:
        print(f"magnetoguide: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return 0


if __name__ == "__main__":
    sys.exit(main())
