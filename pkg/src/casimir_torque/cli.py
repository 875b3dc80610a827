"""Command-line front end: scans, oracle validation and CSV tables.

Usage::

    casimir-torque --config run.json [--output table.csv] [--quiet]

Exit status is 0 when every row succeeded (and, for ``validate``, the
deviation stayed below threshold), 1 on a computation failure and 2 on a
configuration error.
"""
import argparse
import csv
import io
import json
import math
import os
import sys

from scipy.constants import c as SPEED_OF_LIGHT, hbar as HBAR

from . import __version__, greens
from ._backend import BACKEND
from .config import parse_config
from .errors import CasimirTorqueError, ConfigError
from .material import (
    LorentzResonance,
    LossyPolarizer,
    PerfectPolarizer,
    SemiInfiniteLorentz,
    reflection_pair,
)
from .torque import (
    NORM_HBAR_C_OVER_L,
    NORM_HBAR_OMEGA_REF,
    CavityConfig,
    integrand,
    scan_angle,
    scan_distance,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2

HBAR_C = HBAR * SPEED_OF_LIGHT


class MissingScaleError(CasimirTorqueError, ValueError):
    """SI conversion requested without the scale it needs."""


def to_si(tau, normalization, separation_m=None, omega_ref=None):
    """Convert a dimensionless torque to N m.

    Parameters
    ----------
    tau : float
        Torque in the units named by ``normalization``.
    normalization : str
        ``"hbar_c_over_L"`` (needs ``separation_m``, metres) or
        ``"hbar_omega_ref"`` (needs ``omega_ref``, rad/s).
    """
    if normalization == NORM_HBAR_C_OVER_L:
        if separation_m is None or not separation_m > 0:
            raise MissingScaleError("a positive separation in metres is required")
        return tau * HBAR_C / separation_m
    if normalization == NORM_HBAR_OMEGA_REF:
        if omega_ref is None or not omega_ref > 0:
            raise MissingScaleError("a positive reference frequency in rad/s is required")
        return tau * HBAR * omega_ref
    raise ValueError(f"unknown normalization {normalization!r}")


def _fmt(x):
    if isinstance(x, str):
        return x
    if x is None:
        return ""
    return format(float(x), ".17g")


def fig4_mirror():
    """Dichroic mirror with resonances at omega_ref and sqrt(2) omega_ref."""
    return SemiInfiniteLorentz(
        LorentzResonance(1.0, 1.0), LorentzResonance(math.sqrt(2.0), 1.0)
    )


VALIDATION_FAMILIES = (
    ("perfect", PerfectPolarizer()),
    ("lossy_0.8", LossyPolarizer(0.8)),
    ("lorentz_dichroic", fig4_mirror()),
)
VALIDATION_ANGLES = (math.pi / 6, math.pi / 4, math.pi / 3)
VALIDATION_KAPPA_L = (0.1, 1.0, 10.0)


def _angle_table(cfg):
    cavity = cfg.cavity
    rows = scan_angle(cavity, cfg.grid.values(), cfg.quadrature)
    si = cfg.units == "si"
    header = ["gamma", "torque", "error_estimate"] + (["torque_si"] if si else []) + ["error"]
    out = []
    for row in rows:
        line = [row.gamma, row.torque, row.error_estimate]
        if si:
            length_m = cavity.separation * SPEED_OF_LIGHT / cfg.omega_p_ref_si
            line.append(to_si(row.torque, cavity.normalization, length_m, cfg.omega_p_ref_si))
        out.append(line + [row.error or ""])
    failed = sum(r.error is not None for r in rows)
    notes = [f"normalization: {cavity.normalization}"]
    return header, out, failed, notes


def _distance_table(cfg):
    rows = scan_distance(cfg.cavity, cfg.grid.values(), cfg.quadrature)
    si = cfg.units == "si"
    header = ["L", "torque", "torque_times_L", "error_estimate"]
    header += (["torque_si"] if si else []) + ["error"]
    out = []
    for row in rows:
        line = [row.separation, row.torque, row.torque_times_L, row.error_estimate]
        if si:
            line.append(to_si(row.torque, NORM_HBAR_OMEGA_REF, omega_ref=cfg.omega_p_ref_si))
        out.append(line + [row.error or ""])
    failed = sum(r.error is not None for r in rows)
    return header, out, failed, [f"normalization: {NORM_HBAR_OMEGA_REF}"]


def _integrand_table(cfg):
    header = ["kappa", "integrand", "r1_x", "r1_y", "r2_x", "r2_y", "error"]
    out, failed = [], 0
    cavity = cfg.cavity
    for k in cfg.grid.values():
        try:
            p1 = reflection_pair(cavity.mirror1, k)
            p2 = reflection_pair(cavity.mirror2, k)
            f = integrand(k, cavity)
        except (ArithmeticError, ValueError) as exc:
            failed += 1
            nan = math.nan
            out.append([k, nan, nan, nan, nan, nan, f"{type(exc).__name__}: {exc}"])
            continue
        out.append([k, f, p1.r_x, p1.r_y, p2.r_x, p2.r_y, ""])
    return header, out, failed, []


def _material_table(cfg):
    header = ["kappa", "r1_x", "r1_y", "delta_r1", "r2_x", "r2_y", "delta_r2", "error"]
    out, failed = [], 0
    cavity = cfg.cavity
    for k in cfg.grid.values():
        try:
            p1 = reflection_pair(cavity.mirror1, k)
            p2 = reflection_pair(cavity.mirror2, k)
        except (ArithmeticError, ValueError) as exc:
            failed += 1
            out.append([k] + [math.nan] * 6 + [f"{type(exc).__name__}: {exc}"])
            continue
        out.append([k, p1.r_x, p1.r_y, p1.delta_r, p2.r_x, p2.r_y, p2.delta_r, ""])
    return header, out, failed, []


def _validate_table(cfg):
    header = ["family", "gamma", "kappa_L", "kernel_over_c0", "integrand", "deviation",
              "z_spread"]
    c0 = greens.reference_constant()
    L = cfg.resolved["L"]
    if cfg.cavity is None:
        cases = [
            (name, CavityConfig(L, g, m, m), VALIDATION_KAPPA_L)
            for name, m in VALIDATION_FAMILIES
            for g in VALIDATION_ANGLES
        ]
    else:
        cases = [("config", cfg.cavity, tuple(cfg.grid.values()))]
    out = []
    worst = 0.0
    failed = 0
    for name, cavity, kappa_ls in cases:
        report = greens.validate(cavity, [kl / cavity.separation for kl in kappa_ls])
        for (k, kernel, f, dev) in report.samples:
            spread = greens.kernel_spread(k, cavity)
            worst = max(worst, dev)
            if dev > report.threshold:
                failed += 1
            out.append([name, cavity.relative_angle, k * cavity.separation, kernel, f, dev,
                        spread])
    notes = [f"c0: {_fmt(c0)}", f"max_deviation: {_fmt(worst)}",
             f"threshold: {_fmt(greens.VALIDATION_THRESHOLD)}"]
    return header, out, failed, notes


_DISPATCH = {
    "angle-scan": _angle_table,
    "distance-scan": _distance_table,
    "integrand-dump": _integrand_table,
    "material-show": _material_table,
    "validate": _validate_table,
}


def render_table(cfg, header, rows, notes=()):
    """CSV text with a ``#`` preamble recording the resolved configuration."""
    buf = io.StringIO()
    buf.write(f"# casimir_torque {__version__} backend={BACKEND}\n")
    buf.write(f"# config: {json.dumps(cfg.resolved, sort_keys=True)}\n")
    for note in notes:
        buf.write(f"# {note}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def read_table(path):
    """Read a table file written by :func:`run`; see :func:`parse_table`."""
    with open(path) as fh:
        return parse_table(fh.read())


def parse_table(text):
    """Parse table text into ``(comments, header, rows)``.

    Numeric cells become floats, empty cells ``None`` and anything else stays
    a string.
    """
    lines = text.splitlines()
    comments = [ln[1:].strip() for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    reader = csv.reader(body)
    header = next(reader)
    rows = []
    for raw in reader:
        row = []
        for cell in raw:
            if cell == "":
                row.append(None)
                continue
            try:
                row.append(float(cell))
            except ValueError:
                row.append(cell)
        rows.append(row)
    return comments, header, rows


def run(cfg, output=None):
    """Execute ``cfg`` and write its table.

    ``output`` overrides ``cfg.output``; ``"-"`` or no path means stdout.
    Returns ``(exit_status, table_text)``.
    """
    header, rows, failed, notes = _DISPATCH[cfg.command](cfg)
    text = render_table(cfg, header, rows, notes)
    path = output if output is not None else cfg.output
    if path and path != "-":
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return (EXIT_FAILURE if failed else EXIT_OK), text


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="casimir-torque",
        description="Casimir torque between anisotropic mirrors in 1D.",
    )
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--output", help="output CSV path (overrides the config)")
    parser.add_argument("--quiet", action="store_true", help="suppress the summary")
    args = parser.parse_args(argv)

    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = parse_config(
            text, base_dir=os.path.dirname(os.path.abspath(args.config)), source=args.config
        )
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        status, text = run(cfg, args.output)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except CasimirTorqueError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    if not args.quiet:
        n_rows = sum(1 for ln in text.splitlines() if not ln.startswith("#")) - 1
        verdict = "ok" if status == EXIT_OK else "FAILED rows present"
        print(f"{cfg.command}: {n_rows} rows, {verdict}", file=sys.stderr)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
