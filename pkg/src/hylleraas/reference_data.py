"""Embedded reference tables and the comparison metrics built on them.

table1.csv holds exponents and energies for Z = 1..99, table2.csv the
reference correlated and corrected energies for Z = 1..8, table3.csv the
r12 polynomial coefficients.  Every table1.csv row stores xi1 as the exponent of
the orbital carrying (A0, B0); four rows whose printed columns are reversed
say so in ``remark``.
"""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import NamedTuple

from .constants_deltas import MODEL_CONSTANTS, PhysicalConstants, _check_z
from .errors import MissingDataError
from .hydrogenic import dirac_correction

TABLE_FILES = ("table1.csv", "table2.csv", "table3.csv")
PINNED_SHA256 = {
    "table1.csv": "9ec81e0689378795c700a52734b1bd8e68b54b03c607ec17c286d119f97b6923",
    "table2.csv": "d30742fc27def576c658be8fecef4b6404dee878b5c28f5cff1d81e814344567",
    "table3.csv": "d48c27a49a62ff215f7f233a31b64b3dd94e9d7432f822de8f37bd44818135ca",
}
TABLE2_RANGE = range(1, 9)


@dataclass(frozen=True)
class ReferenceRow:
    Z: int
    lambda1: float
    lambda2: float
    xi1: float
    xi2: float
    E_S: float
    E_Z: float
    diff: float
    remark: str
    a: tuple[float, ...]
    b: tuple[float, ...]
    E0: float | None = None
    E_corr: float | None = None
    E_exp: float | None = None
    corr_diff: float | None = None
    eta: float | None = None

    @property
    def order(self) -> int:
        return len(self.a)


def _read_bytes(name: str, data_dir: Path | str | None) -> bytes:
    if data_dir is None:
        return resources.files("hylleraas.data").joinpath(name).read_bytes()
    path = Path(data_dir) / name
    if not path.is_file():
        raise MissingDataError(f"table file not found: {path}")
    return path.read_bytes()


def table_digests(data_dir: Path | str | None = None) -> dict[str, str]:
    return {name: hashlib.sha256(_read_bytes(name, data_dir)).hexdigest() for name in TABLE_FILES}


def verify_checksums(data_dir: Path | str | None = None) -> dict[str, bool]:
    """Per-file comparison of the shipped (or ``data_dir``) tables with the pinned digests."""
    out = {}
    for name in TABLE_FILES:
        try:
            out[name] = hashlib.sha256(_read_bytes(name, data_dir)).hexdigest() == PINNED_SHA256[name]
        except MissingDataError:
            out[name] = False
    return out


def _rows(name: str, data_dir) -> list[dict[str, str]]:
    text = _read_bytes(name, data_dir).decode("utf-8")
    return list(csv.DictReader(io.StringIO(text)))


def _opt(cell: str) -> float | None:
    return float(cell) if cell.strip() else None


def _coeffs(row: dict[str, str], prefix: str) -> tuple[float, ...]:
    vals = [row[f"{prefix}{k}"].strip() for k in (1, 2, 3)]
    return tuple(float(v) for v in vals if v)


def _load(data_dir) -> dict[int, ReferenceRow]:
    t2 = {int(r["Z"]): r for r in _rows("table2.csv", data_dir)}
    t3 = {int(r["Z"]): r for r in _rows("table3.csv", data_dir)}
    out = {}
    for r in _rows("table1.csv", data_dir):
        Z = int(r["Z"])
        if Z not in t3:
            raise MissingDataError(f"table3.csv has no row for Z={Z}")
        extra = {}
        if Z in t2:
            s = t2[Z]
            extra = dict(
                E0=float(s["E0"]),
                E_corr=float(s["E"]),
                E_exp=_opt(s["E_exp"]),
                corr_diff=float(s["diff"]),
                eta=float(s["eta"]),
            )
        out[Z] = ReferenceRow(
            Z=Z,
            lambda1=float(r["lambda1"]),
            lambda2=float(r["lambda2"]),
            xi1=float(r["xi1"]),
            xi2=float(r["xi2"]),
            E_S=float(r["E_S"]),
            E_Z=float(r["E_Z"]),
            diff=float(r["diff"]),
            remark=r["remark"],
            a=_coeffs(t3[Z], "a"),
            b=_coeffs(t3[Z], "b"),
            **extra,
        )
    return out


@lru_cache(maxsize=None)
def _load_default() -> dict[int, ReferenceRow]:
    return _load(None)


def load_reference(data_dir: Path | str | None = None) -> dict[int, ReferenceRow]:
    """All rows keyed by Z; the packaged tables are parsed once and cached."""
    return dict(_load_default()) if data_dir is None else _load(data_dir)


def reference_row(Z: int, data_dir: Path | str | None = None) -> ReferenceRow:
    _check_z(Z)
    rows = _load_default() if data_dir is None else _load(data_dir)
    if Z not in rows:
        raise MissingDataError(f"no reference row for Z={Z}")
    return rows[Z]


def diff_column_residuals(data_dir: Path | str | None = None) -> dict[int, float]:
    """Printed E_S - E_Z minus the difference of the printed energies, per row."""
    rows = _load_default() if data_dir is None else _load(data_dir)
    return {Z: r.diff - (r.E_S - r.E_Z) for Z, r in rows.items()}


def epsilon_metric(E_Z: float, E_exp: float) -> float:
    """|(E_Z - E_exp) / E_exp|."""
    if E_exp == 0:
        raise ZeroDivisionError("experimental energy is zero")
    return abs((E_Z - E_exp) / E_exp)


def eta_metric(E_S: float, E_Z: float, E0: float, E_corr: float) -> float:
    """(E_S - E_Z) / (E0 - E_corr)."""
    den = E0 - E_corr
    if den == 0:
        raise ZeroDivisionError("E0 equals the corrected energy")
    return (E_S - E_Z) / den


class BracketCheck(NamedTuple):
    lower_holds: bool
    upper_holds: bool
    lower: float  # E0 - E from the reference table
    dirac: float  # hydrogen-like relativistic + Lamb correction
    upper: float  # E_S - E_Z

    @property
    def holds(self) -> bool:
        return self.lower_holds and self.upper_holds


def check_dirac_bracket(
    Z: int,
    E_S: float | None = None,
    E_Z: float | None = None,
    constants: PhysicalConstants = MODEL_CONSTANTS,
) -> BracketCheck:
    """(E0 - E) < dE_D(Z) < (E_S - E_Z) for Z <= 3.

    E_S and E_Z default to the table values; pass computed energies to test
    them instead.
    """
    if Z not in (1, 2, 3):
        raise MissingDataError(f"the bracketing check is defined for Z in 1..3, got {Z}")
    row = reference_row(Z)
    lower = row.E0 - row.E_corr
    upper = (row.E_S if E_S is None else E_S) - (row.E_Z if E_Z is None else E_Z)
    dirac = dirac_correction(Z, constants)
    return BracketCheck(lower < dirac, dirac < upper, lower, dirac, upper)
