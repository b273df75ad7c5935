"""
Plain-text tables for spectra, gap statistics, histograms and caps.

Floats are written with 17 significant digits so that every double survives
a write/read cycle unchanged. Nothing time-dependent is written, so equal
inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import DomainError
from .spectrum import Spectrum, gap_asymptotic

__all__ = [
    "SPECTRUM_COLUMNS",
    "GAP_COLUMNS",
    "HISTOGRAM_COLUMNS",
    "CAP_COLUMNS",
    "format_float",
    "write_table",
    "spectrum_rows",
    "gap_rows",
    "histogram_rows",
    "cap_rows",
    "read_spectrum_csv",
    "read_spectrum_json",
    "read_lambdas",
    "dump_json",
]

SPECTRUM_COLUMNS = ("n", "ell", "m", "sigma", "nu", "lambda", "delta", "rn_gap")
GAP_COLUMNS = ("ell", "m", "gap_exact", "gap_asymptotic")
HISTOGRAM_COLUMNS = ("bin_left", "bin_right", "count", "density")
CAP_COLUMNS = ("m", "nu", "lambda", "residual")


def format_float(x: float) -> str:
    return "%.17g" % x


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(float(v))
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    return v


def dump_json(obj) -> str:
    """Deterministic JSON text (sorted keys, non-finite floats as null)."""
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_table(rows, columns, fmt: str = "csv", path=None) -> str:
    """Render ``rows`` (sequences aligned with ``columns``) as CSV or a JSON array.

    Returns the text; also writes it to ``path`` when given.
    """
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(v) for v in r])
        text = buf.getvalue()
    elif fmt == "json":
        text = dump_json([dict(zip(columns, r)) for r in rows])
    else:
        raise DomainError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(text)
    return text


def spectrum_rows(spec: Spectrum):
    sigma = spec.sigma
    for n, (ell, m, nu, lam, delta, gap) in enumerate(
        zip(spec.ell, spec.m, spec.nu, spec.lambdas, spec.delta, spec.gaps)
    ):
        yield (n, int(ell), int(m), sigma, float(nu), float(lam), float(delta), float(gap))


def gap_rows(cluster):
    for m, gap in zip(cluster.m, cluster.gaps):
        asym = gap_asymptotic(cluster.ell, int(m), cluster.sigma) if cluster.ell >= 1 else math.nan
        yield (cluster.ell, int(m), float(gap), asym)


def histogram_rows(hist):
    for left, right, count, dens in zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.counts, hist.density):
        yield (float(left), float(right), int(count), float(dens))


def cap_rows(spectrum):
    for e in spectrum.eigenvalues:
        yield (e.m, e.nu, e.lam, e.residual)


def _spectrum_from_records(records) -> Spectrum:
    if not records:
        raise DomainError("empty spectrum table")
    sigma = float(records[0]["sigma"])
    ell = np.array([int(r["ell"]) for r in records])
    m = np.array([int(r["m"]) for r in records])
    delta = np.array([float(r["delta"]) for r in records])
    return Spectrum(sigma, int(ell.max()), ell, m, delta)


def _check_header(fields):
    if tuple(fields or ()) != SPECTRUM_COLUMNS:
        raise DomainError(f"expected columns {','.join(SPECTRUM_COLUMNS)}, got {fields}")


def read_spectrum_csv(path) -> Spectrum:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        _check_header(reader.fieldnames)
        return _spectrum_from_records(list(reader))


def read_spectrum_json(path) -> Spectrum:
    records = json.loads(Path(path).read_text())
    if not isinstance(records, list) or not records:
        raise DomainError("expected a nonempty JSON array")
    missing = [k for k in SPECTRUM_COLUMNS if k not in records[0]]
    if missing:
        raise DomainError(f"spectrum records lack {missing}")
    return _spectrum_from_records(records)


def read_lambdas(path) -> np.ndarray:
    """The ``lambda`` column of a spectrum table (CSV or JSON), in file order."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return np.array([float(r["lambda"]) for r in json.loads(path.read_text())])
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        _check_header(reader.fieldnames)
        return np.array([float(r["lambda"]) for r in reader])
