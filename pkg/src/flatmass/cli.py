"""Command-line front end.

Exit status: 0 on success, 1 for usage or configuration errors, 2 for
numerical or resolution failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from . import bands, bound_states, closed_forms, matching, structure_io
from .audit import run_audit
from .core import DomainError, OrderingScheme, PhysicalConstants, ResolutionError

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class NumericFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(value) -> str:
    """12 significant digits; empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    value = float(value)
    if math.isnan(value):
        return "nan"
    return f"{value:.12g}"


def _json_value(value):
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    value = float(value)
    return float(f"{value:.12g}") if math.isfinite(value) else str(value)


class Table:
    """Rows under one header, then optional summary records.

    CSV mode writes summaries as ``#``-prefixed lines; JSON-lines mode writes
    them as ``{"summary": ...}`` objects after the rows.
    """

    def __init__(self, columns: Sequence[str]):
        self.columns = list(columns)
        self.rows: List[Sequence] = []
        self.summary: List[Dict[str, object]] = []

    def add(self, *values):
        self.rows.append(values)

    def note(self, **fields):
        self.summary.append(fields)

    def render(self, as_json: bool) -> str:
        buf = io.StringIO()
        if as_json:
            for row in self.rows:
                record = {c: _json_value(v) for c, v in zip(self.columns, row)}
                buf.write(json.dumps(record) + "\n")
            for fields in self.summary:
                buf.write(json.dumps({"summary": {k: _json_value(v) for k, v in fields.items()}})
                          + "\n")
            return buf.getvalue()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([fmt(v) for v in row])
        for fields in self.summary:
            buf.write("# " + ",".join(f"{k}={fmt(v)}" for k, v in fields.items()) + "\n")
        return buf.getvalue()


def energies_from(args, default_min: float, default_max: float) -> np.ndarray:
    if args.energy:
        return np.array(args.energy, dtype=float)
    E_min = default_min if args.E_min is None else args.E_min
    E_max = default_max if args.E_max is None else args.E_max
    if not E_min < E_max:
        raise UsageError(f"--E-min ({E_min}) must be below --E-max ({E_max})")
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    if args.spacing == "log":
        if E_min <= 0:
            raise UsageError("logarithmic spacing needs --E-min > 0")
        return np.geomspace(E_min, E_max, args.points)
    return np.linspace(E_min, E_max, args.points)


def _scheme(args) -> OrderingScheme:
    return OrderingScheme(args.beta)


def _constants(args) -> PhysicalConstants:
    return PhysicalConstants(args.hbar)


def _energy_scale(V0: float) -> float:
    return abs(V0) if V0 else 1.0


def cmd_step(args) -> Table:
    p = closed_forms.StepParams(args.m1, args.m2, args.V0, _scheme(args), _constants(args))
    scale = _energy_scale(args.V0)
    E = energies_from(args, 1e-3 * scale, 5 * scale)
    T = np.atleast_1d(closed_forms.step_transmission(p, E))
    R = np.atleast_1d(closed_forms.step_reflection(p, E))
    table = Table(["energy", "transmission", "reflection"])
    for row in zip(E, T, R):
        table.add(*row)
    E_t = closed_forms.transparency_energy(p) if args.V0 > 0 else None
    table.note(sigma=p.sigma, asymptote=closed_forms.step_asymptote(p),
               transparency_energy="none" if E_t is None else E_t)
    return table


def cmd_barrier(args) -> Table:
    p = closed_forms.BarrierParams(args.m1, args.m2, args.V0, args.a, _scheme(args),
                                   _constants(args))
    scale = _energy_scale(args.V0)
    E = energies_from(args, 1e-3 * scale, 5 * scale)
    T = np.atleast_1d(closed_forms.barrier_transmission(p, E))
    table = Table(["energy", "transmission", "reflection"])
    for e, t in zip(E, T):
        table.add(e, t, 1.0 - t)
    E_t = closed_forms.transparency_energy(p.step) if args.V0 > 0 else None
    table.note(sigma=p.sigma, g_limit=closed_forms.g_limit(p),
               transparency_energy="none" if E_t is None else E_t)
    for n, e in enumerate(closed_forms.ramsauer_energies(p, float(E.max())), start=1):
        table.note(ramsauer=n, energy=e)
    return table


def cmd_well(args) -> Table:
    w = bound_states.WellParams(args.m1, args.m2, args.depth, args.a, _scheme(args),
                                _constants(args))
    spectrum = bound_states.well_spectrum(w)
    if not spectrum:
        raise NumericFailure("no bound state found; a symmetric well always binds one")
    columns = ["index", "parity", "energy"]
    oracle = None
    if args.oracle:
        columns.append("oracle_energy")
        oracle = bound_states.constant_mass_well_spectrum(args.m2, args.depth, args.a,
                                                          _constants(args))
    table = Table(columns)
    for i, level in enumerate(spectrum):
        row = [i, level.parity, level.energy]
        if oracle is not None:
            row.append(oracle[i].energy if i < len(oracle) else None)
        table.add(*row)
    table.note(levels=len(spectrum))
    return table


def cmd_multibarrier(args) -> Table:
    p = bands.LatticeParams(args.m1, args.m2, args.V0, args.a, args.b, _scheme(args),
                            _constants(args))
    scale = _energy_scale(args.V0)
    E = energies_from(args, 1e-3 * scale, 20 * scale)
    rhs = np.atleast_1d(bands.dispersion_rhs(p, E))
    table = Table(["energy", "dispersion_rhs", "quasimomentum"])
    for e, value in zip(E, rhs):
        q = math.acos(value) / p.d if abs(value) <= 1 else None
        table.add(e, value, q)
    try:
        diagram = bands.band_diagram(p, float(E.min()), float(E.max()), args.grid)
    except ResolutionError as exc:
        raise NumericFailure(f"{exc} (pass a larger --grid)") from exc
    for i, (lo, hi) in enumerate(diagram.bands, start=1):
        table.note(band=i, E_low=lo, E_high=hi)
    for i, (lo, hi) in enumerate(diagram.gaps, start=1):
        table.note(gap=i, E_low=lo, E_high=hi, width=hi - lo)
    table.note(bands=len(diagram.bands), gaps=len(diagram.gaps), h_limit=bands.h_limit(p))
    return table


def cmd_scatter(args) -> Table:
    try:
        spec = structure_io.load(args.structure)
    except OSError as exc:
        raise UsageError(f"cannot read structure file: {exc}") from exc
    except (structure_io.StructureFileError, DomainError) as exc:
        raise UsageError(f"{args.structure}: {exc}") from exc
    scheme = spec.scheme if args.beta is None else OrderingScheme(args.beta)
    constants = spec.constants if args.hbar is None else PhysicalConstants(args.hbar)
    structure = spec.structure
    potentials = [r.potential for r in structure.regions]
    floor = structure.left_lead.potential
    span = max(max(potentials) - floor, 1.0)
    E = energies_from(args, floor + 1e-3 * span, floor + 5 * span)
    columns = ["energy", "transmission", "reflection"]
    n_regions = len(structure.regions)
    if args.amplitudes:
        for j in range(n_regions):
            columns += [f"A{j}_re", f"A{j}_im", f"B{j}_re", f"B{j}_im"]
    table = Table(columns)
    for e in E:
        try:
            sol = matching.scatter(structure, float(e), scheme, constants)
        except DomainError as exc:
            raise UsageError(f"energy {fmt(e)}: {exc}") from exc
        row = [e, sol.transmission, sol.reflection]
        if args.amplitudes:
            for A, B in sol.amplitudes:
                row += [A.real, A.imag, B.real, B.imag]
        table.add(*row)
    return table


def cmd_beta_sweep(args) -> Table:
    table = Table(["beta", "sigma", "step_asymptote", "barrier_T_envelope_min", "h_limit",
                   "first_gap_width", "high_gap_width", "gap_ratio"])
    constants = _constants(args)
    for beta in args.betas:
        scheme = OrderingScheme(beta)
        step = closed_forms.StepParams(args.m1, args.m2, args.V0, scheme, constants)
        barrier = closed_forms.BarrierParams(args.m1, args.m2, args.V0, args.a, scheme,
                                             constants)
        E_far = 1e6 * _energy_scale(args.V0)
        envelope = 1.0 / (1.0 + closed_forms.g_factor(barrier, E_far))
        lattice = bands.LatticeParams(args.m1, args.m2, args.V0, args.a, args.b, scheme,
                                      constants)
        first = high = ratio = None
        try:
            first = float(bands.indexed_gap_widths(lattice, 1, 1)[0])
            high = float(np.mean(bands.indexed_gap_widths(lattice, args.gap_first,
                                                          args.gap_last)))
            ratio = high / first
        except ResolutionError:
            if args.V0 > 0 or args.m1 != args.m2:
                raise
        table.add(beta, step.sigma, closed_forms.step_asymptote(step), envelope,
                  bands.h_limit(lattice), first, high, ratio)
    return table


def cmd_audit(args) -> Table:
    report = run_audit()
    table = Table(["claim", "printed", "computed", "agrees", "note"])
    for entry in report:
        table.add(entry.claim, entry.printed, entry.computed, entry.agrees, entry.note)
    return table


def _common(p: argparse.ArgumentParser, hbar_default: Optional[float] = 1.0):
    p.add_argument("--hbar", type=float, default=hbar_default)
    p.add_argument("--out", metavar="FILE", help="write here instead of standard output")
    p.add_argument("--json", action="store_true", help="JSON-lines records instead of CSV")


def _sweep(p: argparse.ArgumentParser):
    p.add_argument("--E-min", dest="E_min", type=float)
    p.add_argument("--E-max", dest="E_max", type=float)
    p.add_argument("--points", type=int, default=1000)
    p.add_argument("--spacing", choices=("linear", "log"), default="linear")
    p.add_argument("--energy", type=float, action="append",
                   help="explicit energy (repeatable); overrides the sweep")


def _masses(p: argparse.ArgumentParser, beta_required=True):
    p.add_argument("--m1", type=float, required=True)
    p.add_argument("--m2", type=float, required=True)
    p.add_argument("--beta", type=float, required=beta_required)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="flatmass", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("step", help="abrupt potential-and-mass step")
    _masses(p)
    p.add_argument("--V0", type=float, required=True)
    _sweep(p)
    _common(p)
    p.set_defaults(func=cmd_step)

    p = sub.add_parser("barrier", help="rectangular potential-and-mass barrier")
    _masses(p)
    p.add_argument("--V0", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    _sweep(p)
    _common(p)
    p.set_defaults(func=cmd_barrier)

    p = sub.add_parser("well", help="bound states of the rectangular well")
    _masses(p)
    p.add_argument("--depth", type=float, required=True, help="well depth V0 > 0")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--oracle", action="store_true",
                   help="add the constant-mass (m2) spectrum as a column")
    _common(p)
    p.set_defaults(func=cmd_well)

    p = sub.add_parser("multibarrier", help="periodic multibarrier band structure")
    _masses(p)
    p.add_argument("--V0", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--grid", type=int, default=4000, help="band-edge scan points")
    _sweep(p)
    _common(p)
    p.set_defaults(func=cmd_multibarrier)

    p = sub.add_parser("scatter", help="generic structure file through the transfer matrices")
    p.add_argument("--structure", required=True, metavar="FILE")
    p.add_argument("--beta", type=float, help="override the file's beta")
    p.add_argument("--amplitudes", action="store_true")
    _sweep(p)
    _common(p, hbar_default=None)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("beta-sweep", help="asymptotic behaviour across orderings")
    p.add_argument("--betas", type=float, nargs="+", default=[-1.0, -0.75, -0.5, -0.25, 0.0])
    p.add_argument("--m1", type=float, default=1.0)
    p.add_argument("--m2", type=float, default=4.0)
    p.add_argument("--V0", type=float, default=1.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--gap-first", type=int, default=15)
    p.add_argument("--gap-last", type=int, default=25)
    _common(p)
    p.set_defaults(func=cmd_beta_sweep)

    p = sub.add_parser("audit", help="printed vs recomputed closed forms")
    _common(p)
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv: Optional[Iterable[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(None if argv is None else list(argv))
    try:
        if getattr(args, "hbar", None) is not None and not args.hbar > 0:
            raise UsageError("--hbar must be positive")
        table = args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"flatmass {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericFailure, ResolutionError, ArithmeticError) as exc:
        print(f"flatmass {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = table.render(args.json)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
