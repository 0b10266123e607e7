"""Published disease-estimate dataset: loading, validation, bundled data.

CSV schema (exact leading header, UTF-8, LF, decimal point):

    name,relationship,frr1,frr2,lifetime_risk,source,expected_irr,expected_q,expected_gini,expected_top10

Empty fields mean absent. Extra trailing columns are tolerated and ignored,
which lets reports that append computed columns round-trip through this
loader. ``expected_*`` fields hold published target values and are kept as
the original strings so their printed precision (significant digits as
published) survives for golden comparisons.
"""

import csv
import io
import math
from dataclasses import dataclass, field
from importlib import resources

SCHEMA = ("name", "relationship", "frr1", "frr2", "lifetime_risk", "source",
          "expected_irr", "expected_q", "expected_gini", "expected_top10")

_EXPECTED_KEYS = ("irr", "q", "gini", "top10")


class DatasetParseError(ValueError):
    """Malformed file: wrong header or unparseable cell (row/column named)."""


class DatasetValidationError(ValueError):
    """Well-formed file carrying an invalid record."""


@dataclass(frozen=True)
class DiseaseRecord:
    """One published disease estimate.

    Needs either both FRRs (two-group analysis) or frr1 plus a lifetime risk
    (continuous analysis); records carrying all three get both analyses.
    """

    name: str
    relationship: str = ""
    frr1: float | None = None
    frr2: float | None = None
    lifetime_risk: float | None = None
    source: str = ""
    expected: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.name:
            raise DatasetValidationError("record name must be non-empty")
        for label, v in (("frr1", self.frr1), ("frr2", self.frr2)):
            if v is not None and not (math.isfinite(v) and v > 0):
                raise DatasetValidationError(
                    f"{self.name}: {label} must be positive, got {v!r}")
        if self.lifetime_risk is not None and not 0.0 < self.lifetime_risk < 1.0:
            raise DatasetValidationError(
                f"{self.name}: lifetime_risk must lie in (0, 1), "
                f"got {self.lifetime_risk!r}")
        has_pair = self.frr1 is not None and self.frr2 is not None
        has_fit = self.frr1 is not None and self.lifetime_risk is not None
        if not (has_pair or has_fit):
            raise DatasetValidationError(
                f"{self.name}: need frr1+frr2 and/or frr1+lifetime_risk")
        unknown = set(self.expected) - set(_EXPECTED_KEYS)
        if unknown:
            raise DatasetValidationError(
                f"{self.name}: unknown expected keys {sorted(unknown)}")

    @property
    def has_dichotomous_inputs(self):
        return self.frr1 is not None and self.frr2 is not None

    @property
    def has_continuous_inputs(self):
        return self.frr1 is not None and self.lifetime_risk is not None


def _parse_number(cell, row_no, column):
    cell = cell.strip()
    if not cell:
        return None
    try:
        return float(cell)
    except ValueError:
        raise DatasetParseError(
            f"row {row_no}, column {column!r}: cannot parse number {cell!r}"
        ) from None


def load_records(path=None):
    """Records from a CSV path, or the bundled dataset when path is None."""
    if path is None:
        text = (resources.files("famrisk") / "data" / "diseases.csv").read_text("utf-8")
        return parse_records(text)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return parse_records(fh.read())


def parse_records(text):
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetParseError("empty file: missing header row") from None
    if tuple(h.strip() for h in header[: len(SCHEMA)]) != SCHEMA:
        raise DatasetParseError(
            f"header must start with {','.join(SCHEMA)!r}, got {','.join(header)!r}")
    records = []
    for row_no, row in enumerate(reader, start=2):
        if not any(cell.strip() for cell in row):
            continue
        if len(row) < len(SCHEMA):
            raise DatasetParseError(
                f"row {row_no}: expected at least {len(SCHEMA)} fields, got {len(row)}")
        cells = dict(zip(SCHEMA, row))
        expected = {}
        for key in _EXPECTED_KEYS:
            raw = cells[f"expected_{key}"].strip()
            if raw:
                _parse_number(raw, row_no, f"expected_{key}")
                expected[key] = raw
        records.append(DiseaseRecord(
            name=cells["name"].strip(),
            relationship=cells["relationship"].strip(),
            frr1=_parse_number(cells["frr1"], row_no, "frr1"),
            frr2=_parse_number(cells["frr2"], row_no, "frr2"),
            lifetime_risk=_parse_number(cells["lifetime_risk"], row_no, "lifetime_risk"),
            source=cells["source"].strip(),
            expected=expected,
        ))
    return records


def record_to_row(record):
    """The record's cells in schema order (numbers in shortest round-trip form)."""
    def num(v):
        return "" if v is None else repr(v)

    return [
        record.name,
        record.relationship,
        num(record.frr1),
        num(record.frr2),
        num(record.lifetime_risk),
        record.source,
        record.expected.get("irr", ""),
        record.expected.get("q", ""),
        record.expected.get("gini", ""),
        record.expected.get("top10", ""),
    ]


def matches_printed(computed, printed):
    """True when ``computed`` rounds to the published string's precision
    within one unit in the last printed digit (published inputs were
    themselves rounded upstream)."""
    printed = printed.strip()
    decimals = len(printed.split(".", 1)[1]) if "." in printed else 0
    scale = 10.0 ** decimals
    return abs(round(computed * scale) - round(float(printed) * scale)) <= 1.0
