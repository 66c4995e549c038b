"""Command-line front end: strict key-value configs, subcommands and CSV/JSON output.

Usage::

    tra spectrum --config run.cfg [--out levels.csv] [--format csv|json] [--tol 1e-10] [--N 32]

A config file holds one ``key = value`` per line (``#`` starts a comment). Keys are
``command``, ``entry``, ``param.<name>``, ``numeric.<name>``, ``output.format`` and
``output.path``; anything else is rejected. ``--set key=value`` adds lines from the
command line.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import catalog as cat
from .errors import (ConfigError, ConvergenceFailure, InvalidBoundState, InvalidParameter, InvalidProfile, IoError,
                     MissingParameter, NoRoot, ParseError, RecursionBreakdown, ResolutionError, SeriesDivergence,
                     TRAError, UnknownEntry)
from .solver import DEFAULT_TOL, N_MAX, N_START, SCAN_POINTS, Branch, Spectrum, eigenvalue_scan
from .spinor import DEFAULT_POINTS, SpinorField

COMMANDS = ("spectrum", "wavefunction", "jmatrix", "graphene", "catalog", "validate", "table2")
FORMATS = ("csv", "json")

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3, 4

NUMERIC_DEFAULTS = {
    "N": float(N_START),
    "N_max": float(N_MAX),
    "tol": DEFAULT_TOL,
    "scan_points": float(SCAN_POINTS),
    "grid_points": float(DEFAULT_POINTS),
    "n": 0.0,
    "n_max": 5.0,
    "branch": 0.0,          # +1 positive, -1 negative, 0 every branch of the entry
    "eps": math.nan,        # jmatrix: energy at which J is built (default: level n)
    "eps_min": math.nan,    # spectrum: scan window; both set -> determinant scan
    "eps_max": math.nan,
    "k_min": 0.0,
    "k_max": 1.0,
    "k_points": 11.0,
    "criterion": 0.0,       # validate: 0 runs every criterion
}
_INTEGER_NUMERIC = {"N", "N_max", "scan_points", "grid_points", "n", "n_max", "branch", "k_points", "criterion"}

GRAPHENE_PARAMS = ("B0", "alpha", "hbar", "v_F", "charge")
GRAPHENE_DEFAULTS = {"alpha": 1.0, "hbar": 1.0, "v_F": 1.0, "charge": 1.0}
_NEEDS_ENTRY = ("spectrum", "wavefunction", "jmatrix", "graphene")


@dataclass
class RunConfig:
    command: str
    entry: str | None = None
    parameters: dict = field(default_factory=dict)
    numeric: dict = field(default_factory=lambda: dict(NUMERIC_DEFAULTS))
    output_format: str = "csv"
    output_path: str | None = None

    def int(self, name) -> int:
        return int(self.numeric[name])

    def __eq__(self, other):
        if not isinstance(other, RunConfig):
            return NotImplemented
        same_numeric = self.numeric.keys() == other.numeric.keys() and all(
            (a == b) or (math.isnan(a) and math.isnan(b))
            for a, b in ((self.numeric[k], other.numeric[k]) for k in self.numeric))
        return (self.command, self.entry, self.parameters, self.output_format, self.output_path) == \
            (other.command, other.entry, other.parameters, other.output_format, other.output_path) and same_numeric


# --- parsing ---------------------------------------------------------------------

def _number(key, text):
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"{key}: {text!r} is not a number") from None


def _lines(text):
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ParseError(f"line {lineno}: empty key")
        if key in seen:
            raise ParseError(f"line {lineno}: duplicate key {key!r} (first on line {seen[key]})")
        seen[key] = lineno
        yield key, value


def parse_config(text: str, command: str | None = None) -> RunConfig:
    """Parse and fully validate a config document.

    ``command`` (from the command line) must agree with a ``command`` key if both
    are given. Parameters missing from the document take the entry's registered
    defaults; a parameter without a default is a MissingParameter error.
    """
    raw_params, raw_numeric = {}, {}
    doc_command = entry = fmt = path = None
    for key, value in _lines(text):
        if key == "command":
            doc_command = value
        elif key == "entry":
            entry = value
        elif key == "output.format":
            fmt = value
        elif key == "output.path":
            path = value
        elif key.startswith("param.") and len(key) > 6:
            raw_params[key[6:]] = _number(key, value)
        elif key.startswith("numeric.") and len(key) > 8:
            raw_numeric[key[8:]] = _number(key, value)
        else:
            raise ParseError(f"unknown key {key!r}")
    if command and doc_command and command != doc_command:
        raise ConfigError(f"config is for {doc_command!r} but {command!r} was requested")
    command = command or doc_command
    if command is None:
        raise MissingParameter("no command given")
    if command not in COMMANDS:
        raise ParseError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    fmt = fmt or "csv"
    if fmt not in FORMATS:
        raise ParseError(f"output.format must be one of {FORMATS}, got {fmt!r}")

    numeric = dict(NUMERIC_DEFAULTS)
    for name, v in raw_numeric.items():
        if name not in NUMERIC_DEFAULTS:
            raise ParseError(f"unknown numeric setting {name!r}; expected one of {sorted(NUMERIC_DEFAULTS)}")
        if name in _INTEGER_NUMERIC and v != int(v):
            raise ParseError(f"numeric.{name} must be an integer, got {v}")
        numeric[name] = v
    if numeric["branch"] not in (-1.0, 0.0, 1.0):
        raise ParseError("numeric.branch must be 1, -1 or 0")
    if not numeric["tol"] > 0:
        raise ParseError("numeric.tol must be positive")

    if command in _NEEDS_ENTRY and entry is None:
        raise MissingParameter(f"{command} needs an entry")
    params = _check_parameters(command, entry, raw_params)
    return RunConfig(command, entry, params, numeric, fmt, path)


def _check_parameters(command, entry, raw):
    if command == "graphene":
        from .graphene import Family

        try:
            Family(entry)
        except ValueError:
            raise UnknownEntry(entry, [f.value for f in Family]) from None
        return _fill(entry, GRAPHENE_PARAMS, GRAPHENE_DEFAULTS, raw)
    if entry is None:
        if raw:
            raise ParseError(f"parameters given without an entry: {sorted(raw)}")
        return {}
    e = cat.get(entry)
    return _fill(entry, e.params, e.defaults, raw)


def _fill(entry, names, defaults, raw):
    unknown = sorted(set(raw) - set(names))
    if unknown:
        raise ParseError(f"{entry}: unknown parameter(s) {unknown}; expected {list(names)}")
    out = {}
    for name in names:
        if name in raw:
            out[name] = raw[name]
        elif name in defaults:
            out[name] = float(defaults[name])
        else:
            raise MissingParameter(f"{entry}: parameter {name!r} is required")
    return out


def emit_config(rc: RunConfig) -> str:
    """Inverse of :func:`parse_config` (every value written explicitly)."""
    lines = [f"command = {rc.command}"]
    if rc.entry is not None:
        lines.append(f"entry = {rc.entry}")
    lines += [f"param.{k} = {v!r}" for k, v in rc.parameters.items()]
    lines += [f"numeric.{k} = {v!r}" for k, v in rc.numeric.items()]
    lines.append(f"output.format = {rc.output_format}")
    if rc.output_path is not None:
        lines.append(f"output.path = {rc.output_path}")
    return "\n".join(lines) + "\n"


# --- output ----------------------------------------------------------------------

@dataclass
class Table:
    columns: tuple
    rows: list


def to_table(result) -> Table:
    """Fixed columns per result kind: Spectrum, SpinorField, matrix or an existing Table."""
    if isinstance(result, Table):
        return result
    if isinstance(result, Spectrum):
        return Table(("n", "branch", "epsilon", "N_used", "delta_converge"),
                     [(e.n, e.branch.value, e.eps, e.N_used, e.delta) for e in result])
    if isinstance(result, SpinorField):
        return Table(("x", "psi_plus", "psi_minus"), list(zip(result.grid, result.upper, result.lower)))
    arr = np.asarray(result, dtype=float)
    if arr.ndim == 2:
        return Table(("n", "m", "value"), [(i, j, arr[i, j]) for i in range(arr.shape[0])
                                           for j in range(arr.shape[1]) if abs(i - j) <= 1])
    raise InvalidParameter(f"cannot emit a result of type {type(result).__name__}")


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def _json_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(f"{float(v):.12g}")
    return str(v)


def render(result, fmt="csv") -> str:
    t = to_table(result)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(t.columns)
        for row in t.rows:
            w.writerow([_cell(v) for v in row])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([{c: _json_cell(v) for c, v in zip(t.columns, row)} for row in t.rows], indent=1) + "\n"
    raise ParseError(f"unknown output format {fmt!r}")


def emit_results(result, fmt="csv", path=None) -> str:
    """Render ``result`` and write it to ``path`` (stdout when None); returns the text."""
    text = render(result, fmt)
    if path is None or path == "-":
        sys.stdout.write(text)
        return text
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return text


# --- commands --------------------------------------------------------------------

def _branches(rc, entry):
    b = rc.int("branch")
    if b == 0:
        return list(entry.branches)
    br = Branch.POSITIVE if b > 0 else Branch.NEGATIVE
    if br not in entry.branches:
        raise ConfigError(f"{entry.id} has no {br.value} branch")
    return [br]


def run_spectrum(rc: RunConfig) -> Spectrum:
    e = cat.get(rc.entry)
    lo, hi = rc.numeric["eps_min"], rc.numeric["eps_max"]
    if not (math.isnan(lo) and math.isnan(hi)):
        if math.isnan(lo) or math.isnan(hi):
            raise ConfigError("a scan needs both numeric.eps_min and numeric.eps_max")
        wave, basis = cat.tra_for(e, rc.parameters)
        from .jmatrix import make_bands

        bands = make_bands(wave, basis)
        brs = _branches(rc, e) if rc.int("branch") else [None]
        entries = []
        for br in brs:
            sp = eigenvalue_scan(bands, (lo, hi), branch=br, N=rc.int("N"), tol=rc.numeric["tol"],
                                 step=(hi - lo) / rc.int("scan_points"), n_max=rc.int("N_max"),
                                 levels=rc.int("n_max") + 1)
            entries += sp.entries
        return Spectrum(entries, [True] * len(entries))
    from .solver import SpectrumEntry

    entries = []
    for br in _branches(rc, e):
        for n in range(e.first(br), rc.int("n_max") + 1):
            try:
                eps = cat.spectrum(e, rc.parameters, n, br)
            except InvalidBoundState:
                break
            entries.append(SpectrumEntry(n, eps, br, 0, 0.0))
    return Spectrum(entries, [True] * len(entries))


def _single_branch(rc, e):
    b = rc.int("branch")
    return e.branches[0] if b == 0 else (Branch.POSITIVE if b > 0 else Branch.NEGATIVE)


def run_wavefunction(rc: RunConfig) -> SpinorField:
    from .spinor import catalog_field, to_dirac

    e = cat.get(rc.entry)
    if e.frame == "schrodinger":
        raise ConfigError(f"{e.id} is a Schrodinger-level entry and has no spinor")
    br = _single_branch(rc, e)
    _, field_, _ = catalog_field(e, rc.parameters, rc.int("n"), br, npts=rc.int("grid_points"))
    return to_dirac(field_)


def run_jmatrix(rc: RunConfig):
    from .jmatrix import make_bands

    e = cat.get(rc.entry)
    n = rc.int("n")
    wave, basis = cat.tra_for(e, rc.parameters, n)
    bands = make_bands(wave, basis)
    eps = rc.numeric["eps"]
    if math.isnan(eps):
        eps = cat.spectrum(e, rc.parameters, n, _single_branch(rc, e))
    return bands.matrix(eps, rc.int("N"))


def run_graphene(rc: RunConfig) -> Table:
    from .graphene import FieldProfile, Scales, dispersion

    p = rc.parameters
    try:
        prof = FieldProfile(rc.entry, p["B0"], p["alpha"], 0.0, Scales(p["hbar"], p["v_F"], p["charge"]))
    except InvalidProfile as exc:
        raise ConfigError(str(exc)) from exc
    ks = np.linspace(rc.numeric["k_min"], rc.numeric["k_max"], rc.int("k_points"))
    b = rc.int("branch")
    brs = (Branch.POSITIVE, Branch.NEGATIVE) if b == 0 else ((Branch.POSITIVE,) if b > 0 else (Branch.NEGATIVE,))
    rows = dispersion(prof, ks, rc.int("n_max"), brs)
    return Table(("k", "n", "branch", "epsilon"), rows)


def run_catalog(rc: RunConfig) -> Table:
    rows = []
    for e in sorted(cat.entries(), key=lambda e: e.id):
        rows.append((e.id, e.symmetry.value if e.symmetry else "schrodinger", e.frame,
                     " ".join(b.value for b in e.branches), " ".join(e.params), e.description))
    return Table(("id", "symmetry", "frame", "branches", "params", "description"), rows)


def run_validate(rc: RunConfig) -> Table:
    from .validation import run_suite

    k = rc.int("criterion")
    rows = run_suite([k] if k else None, rc.entry)
    return Table(("criterion", "entry", "check", "value", "threshold", "passed", "note"),
                 [(k, c.entry, c.check, c.value, c.threshold, c.passed, c.note) for k, c in rows])


def run_table2(rc: RunConfig) -> dict:
    """{kappa: Spectrum} for the sinusoidal well at m = 1, V0 = 1/2, mu = nu = 1/2."""
    from .validation import TABLE2_KAPPAS, table2_spectrum

    out = {}
    for kappa in TABLE2_KAPPAS:
        pos, neg = table2_spectrum(kappa)
        out[kappa] = Spectrum(pos.entries + neg.entries, [True] * (len(pos) + len(neg)))
    return out


def table2_paths(stem, fmt):
    stem = stem or "table2"
    for suffix in (".csv", ".json"):
        if stem.endswith(suffix):
            stem = stem[: -len(suffix)]
    from .validation import TABLE2_KAPPAS

    return {k: f"{stem}_kappa_{k}.{fmt}" for k in TABLE2_KAPPAS}


def execute(rc: RunConfig) -> int:
    if rc.command == "table2":
        specs = run_table2(rc)
        for kappa, path in table2_paths(rc.output_path, rc.output_format).items():
            emit_results(specs[kappa], rc.output_format, path)
        return EXIT_OK
    runner = {"spectrum": run_spectrum, "wavefunction": run_wavefunction, "jmatrix": run_jmatrix,
              "graphene": run_graphene, "catalog": run_catalog, "validate": run_validate}[rc.command]
    result = runner(rc)
    emit_results(result, rc.output_format, rc.output_path)
    if rc.command == "validate" and not all(row[5] for row in result.rows):
        return EXIT_VALIDATION
    return EXIT_OK


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, (ConfigError, InvalidParameter, InvalidBoundState, IoError)):
        return EXIT_CONFIG
    if isinstance(exc, (ConvergenceFailure, NoRoot, ResolutionError, SeriesDivergence, RecursionBreakdown)):
        return EXIT_NUMERIC
    if isinstance(exc, TRAError):
        return EXIT_NUMERIC
    return 1


def build_parser():
    ap = argparse.ArgumentParser(prog="tra", description=__doc__.split("\n\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="key = value config file")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                    help="extra config line (repeatable)")
    ap.add_argument("--out", help="output path (table2: file stem)")
    ap.add_argument("--format", choices=FORMATS)
    ap.add_argument("--tol", type=float)
    ap.add_argument("--N", type=int)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = ""
        if args.config:
            try:
                with open(args.config, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ConfigError(f"cannot read {args.config}: {exc}") from exc
        extra = list(args.set)
        if args.out:
            extra.append(f"output.path = {args.out}")
        if args.format:
            extra.append(f"output.format = {args.format}")
        if args.tol is not None:
            extra.append(f"numeric.tol = {args.tol!r}")
        if args.N is not None:
            extra.append(f"numeric.N = {args.N}")
        # command-line values replace same-named keys from the file
        keys = {line.split("=", 1)[0].strip() for line in extra}
        kept = [ln for ln in text.splitlines() if ln.split("#", 1)[0].split("=", 1)[0].strip() not in keys]
        rc = parse_config("\n".join(kept + extra), args.command)
        return execute(rc)
    except (TRAError, KeyError) as exc:
        code = exit_code(exc)
        print(f"tra: error: {exc}", file=sys.stderr)
        return code if code != 1 else EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
