"""Text formats: series files, OEIS b-files, table transcriptions, reports.

Series file::

    # name: A_L
    # class: anywhere
    1<TAB>12
    18<TAB>4.599082462168733357770670517895290353950E+82
    32<TAB>1.23E+400<TAB>extended<TAB>3.1E-5

Integers are exact; values with a decimal point or exponent are approximate.
A third column marks extended terms, optionally followed by their relative
error estimate.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import re
import tempfile
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Iterable

from .series import Provenance, Series, Term


class FormatError(ValueError):
    def __init__(self, msg: str, path=None, line: int | None = None):
        where = f"{path}:{line}: " if line is not None else (f"{path}: " if path else "")
        super().__init__(where + msg)
        self.line = line


def atomic_write(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _parse_value(tok: str, path, lineno: int) -> tuple[int | Decimal, Provenance]:
    if re.fullmatch(r"[+-]?\d+", tok):
        return int(tok), Provenance.EXACT
    try:
        v = Decimal(tok)
    except InvalidOperation:
        raise FormatError(f"cannot parse value {tok!r}", path, lineno) from None
    if not v.is_finite():
        raise FormatError(f"non-finite value {tok!r}", path, lineno)
    return v, Provenance.APPROXIMATE


# --- series files ---------------------------------------------------------------


def format_series(s: Series, errors: dict | None = None) -> str:
    errors = errors or {}
    lines = [f"# name: {s.name}"]
    for k, v in s.meta.items():
        if k == "name" or isinstance(v, (dict, list)):
            continue
        lines.append(f"# {k}: {v}")
    for t in s.terms:
        row = f"{t.index}\t{t.value}"
        if t.provenance is Provenance.EXTENDED:
            row += "\textended"
            if t.index in errors:
                row += f"\t{Decimal(str(errors[t.index])):.6E}"
        elif t.provenance is Provenance.APPROXIMATE and isinstance(t.value, Decimal) and t.value == t.value.to_integral():
            # keep an integral-looking approximate value from reading back as exact
            if not re.search(r"[.eE]", str(t.value)):
                row = f"{t.index}\t{t.value:E}"
        lines.append(row)
    return "\n".join(lines) + "\n"


def save_series(s: Series, path, errors: dict | None = None):
    atomic_write(path, format_series(s, errors))


def parse_series(text: str, path=None) -> tuple[Series, dict]:
    """Parse a series file; returns the series and {L: error} for extended terms."""
    meta, terms, errors = {}, [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = re.match(r"#\s*([\w.-]+)\s*:\s*(.*)$", line)
            if m:
                meta[m.group(1)] = m.group(2)
            continue
        cols = line.split("\t") if "\t" in line else line.split()
        if len(cols) < 2 or len(cols) > 4:
            raise FormatError(f"expected 'L<TAB>value', got {raw!r}", path, lineno)
        try:
            L = int(cols[0])
        except ValueError:
            raise FormatError(f"bad index {cols[0]!r}", path, lineno) from None
        value, prov = _parse_value(cols[1], path, lineno)
        if len(cols) >= 3:
            if cols[2] != "extended":
                raise FormatError(f"unknown term flag {cols[2]!r}", path, lineno)
            prov = Provenance.EXTENDED
            if isinstance(value, int):
                value = Decimal(value)
            if len(cols) == 4:
                errors[L] = Decimal(cols[3])
        terms.append(Term(L, value, prov))
    name = meta.pop("name", Path(path).stem if path else "series")
    try:
        s = Series(name, terms, meta)
    except ValueError as exc:
        raise FormatError(str(exc), path) from None
    return s, errors


def load_series(path) -> Series:
    return parse_series(Path(path).read_text(encoding="utf-8"), path)[0]


# --- OEIS b-files -----------------------------------------------------------------


def parse_bfile(text: str, path=None, name: str | None = None) -> Series:
    """``n a(n)`` lines; '#' comments and blank lines are skipped."""
    terms = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cols = line.split()
        if len(cols) != 2:
            raise FormatError(f"expected 'n a(n)', got {raw!r}", path, lineno)
        try:
            n, a = int(cols[0]), int(cols[1])
        except ValueError:
            raise FormatError(f"non-integer field in {raw!r}", path, lineno) from None
        if terms and n != terms[-1].index + 1:
            raise FormatError(f"index {n} does not follow {terms[-1].index}", path, lineno)
        terms.append(Term(n, a))
    if not terms:
        raise FormatError("no data lines", path)
    return Series(name or (Path(path).stem if path else "bfile"), terms, {"source": "b-file"})


def load_bfile(path, name: str | None = None) -> Series:
    return parse_bfile(Path(path).read_text(encoding="utf-8"), path, name)


# --- table transcriptions -----------------------------------------------------------

_TIMES = re.compile(r"\$?\\times\s*10\^\{?([+-]?\d+)\}?\$?")


def parse_table(text: str, path=None, name: str | None = None, start: int = 1) -> Series:
    """One coefficient per row, optionally preceded by its index.

    Accepts LaTeX rows (``12\\\\``, ``4.59$\\times 10^{82}$\\\\``, ``\\hline``) as
    well as plain ``L value`` rows. Rows without an index are numbered from ``start``.
    """
    terms = []
    meta = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            m = re.match(r"#\s*([\w.-]+)\s*:\s*(.*)$", line)
            if m:
                meta[m.group(1)] = m.group(2)
            continue
        line = line.replace("\\hline", "").replace("\\\\", "").strip()
        if not line or line.startswith("\\"):
            continue
        line = _TIMES.sub(lambda m: f"e{m.group(1)}", line).replace(" e", "e")
        cols = line.replace("&", " ").split()
        if len(cols) == 1:
            L = terms[-1].index + 1 if terms else start
            tok = cols[0]
        elif len(cols) == 2:
            try:
                L = int(cols[0])
            except ValueError:
                raise FormatError(f"bad index {cols[0]!r}", path, lineno) from None
            tok = cols[1]
        else:
            raise FormatError(f"cannot read row {raw!r}", path, lineno)
        if terms and L != terms[-1].index + 1:
            raise FormatError(f"index {L} does not follow {terms[-1].index}", path, lineno)
        value, prov = _parse_value(tok, path, lineno)
        terms.append(Term(L, value, prov))
    if not terms:
        raise FormatError("no data rows", path)
    name = name or meta.pop("name", None) or (Path(path).stem if path else "table")
    meta.pop("name", None)
    try:
        return Series(name, terms, meta)
    except ValueError as exc:
        raise FormatError(str(exc), path) from None


def detect_format(text: str) -> str:
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if re.match(r"#\s*name\s*:", line):
            return "seriesfile"
        if line.startswith("#"):
            continue
        if "\\" in line or "$" in line:
            return "table"
        cols = line.split()
        if len(cols) == 2 and all(re.fullmatch(r"[+-]?\d+", c) for c in cols):
            # integers only: a b-file unless approximate rows follow
            return "table" if re.search(r"\d[.eE]", text) else "bfile"
        return "table"
    raise FormatError("empty input")


def ingest(path, fmt: str = "auto", name: str | None = None) -> Series:
    text = Path(path).read_text(encoding="utf-8")
    if fmt == "auto":
        fmt = detect_format(text)
    if fmt == "seriesfile":
        s = parse_series(text, path)[0]
        if name:
            s.name = name
        return s
    if fmt == "bfile":
        return parse_bfile(text, path, name)
    if fmt == "table":
        return parse_table(text, path, name)
    raise ValueError(f"unknown format {fmt!r}")


# --- bundled data -------------------------------------------------------------------


def data_path(name: str) -> Path:
    return Path(__file__).with_name("data") / name


def load_bundled(name: str) -> Series:
    """Bundled tables: ``"table1"`` (A_L) and ``"table2"`` (exact-bbox diagonal)."""
    return parse_table(data_path(f"{name}.txt").read_text(encoding="utf-8"), data_path(f"{name}.txt"))


# --- reports ------------------------------------------------------------------------


def write_report(path, report: dict):
    atomic_write(path, json.dumps(report, indent=2, sort_keys=True, default=str) + "\n")


def write_csv(path, header: Iterable[str], rows: Iterable[Iterable]):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(header))
        for r in rows:
            w.writerow([str(x) for x in r])
    os.replace(tmp, path)
