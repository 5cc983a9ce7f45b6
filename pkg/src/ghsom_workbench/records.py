"""Tourist record domain type and CSV ingest/render.

The ingest format is UTF-8 CSV with RFC-4180 quoting and the fixed header
``no,lat,lon,alt,name,evaluation,comment``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .errors import ContractError, CsvValidationError

CSV_HEADER = ["no", "lat", "lon", "alt", "name", "evaluation", "comment"]

EVALUATION_GRADES = (0, 1, 2, 3, 4)
MAX_COMMENT_LENGTH = 140


@dataclass(frozen=True)
class TouristRecord:
    """One sensed observation: a rated, commented, geotagged sighting."""

    id: int
    lat: float
    lon: float
    alt: float
    name: str
    evaluation: int
    comment: str

    def __post_init__(self):
        problems = validate_record_fields(
            self.id, self.lat, self.lon, self.alt, self.evaluation, self.comment
        )
        if problems:
            raise ContractError("; ".join(problems))


def validate_record_fields(rid, lat, lon, alt, evaluation, comment):
    """Return a list of human-readable violations (empty when valid)."""
    problems = []
    if rid <= 0:
        problems.append(f"id must be a positive integer, got {rid}")
    if not -90.0 <= lat <= 90.0:
        problems.append(f"lat {lat} outside [-90, 90]")
    if not -180.0 <= lon <= 180.0:
        problems.append(f"lon {lon} outside [-180, 180]")
    if evaluation not in EVALUATION_GRADES:
        problems.append(f"evaluation {evaluation} not in {{0,1,2,3,4}}")
    if len(comment) > MAX_COMMENT_LENGTH:
        problems.append(f"comment length {len(comment)} exceeds {MAX_COMMENT_LENGTH}")
    return problems


def parse_records(csv_text: str) -> list[TouristRecord]:
    """Parse CSV text into validated records.

    Raises CsvValidationError carrying every malformed row with its line
    number (header is line 1). The header row itself must name the columns
    no,lat,lon,alt,name,evaluation,comment in that order.
    """
    reader = csv.reader(io.StringIO(csv_text))
    try:
        header = next(reader)
    except StopIteration:
        raise CsvValidationError([(1, "missing header row")])
    if [h.strip().lower() for h in header] != CSV_HEADER:
        raise CsvValidationError(
            [(1, f"header must be {','.join(CSV_HEADER)}, got {','.join(header)}")]
        )

    records: list[TouristRecord] = []
    problems: list[tuple[int, str]] = []
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(CSV_HEADER):
            problems.append((line_no, f"expected {len(CSV_HEADER)} fields, got {len(row)}"))
            continue
        no_s, lat_s, lon_s, alt_s, name, eva_s, comment = row
        try:
            rid = int(no_s)
            lat = float(lat_s)
            lon = float(lon_s)
            alt = float(alt_s)
            evaluation = int(eva_s)
        except ValueError as exc:
            problems.append((line_no, f"parse error: {exc}"))
            continue
        field_problems = validate_record_fields(rid, lat, lon, alt, evaluation, comment)
        if field_problems:
            problems.append((line_no, "; ".join(field_problems)))
            continue
        records.append(
            TouristRecord(
                id=rid, lat=lat, lon=lon, alt=alt,
                name=name, evaluation=evaluation, comment=comment,
            )
        )
    if problems:
        raise CsvValidationError(problems)
    return records


def render_csv(records: list[TouristRecord]) -> str:
    """Render records back to the ingest CSV format (round-trips parse_records)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([r.id, repr(r.lat), repr(r.lon), repr(r.alt), r.name, r.evaluation, r.comment])
    return out.getvalue()
