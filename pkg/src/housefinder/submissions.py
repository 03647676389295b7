"""User-submitted apartment listings: validation, collision-safe storage,
and merging pending submissions into the catalog.

Each submission lands in its own CSV named after the wall-clock second plus
the md5 of the canonical submission bytes, so two saves collide only when
the same content arrives in the same second, and then they overwrite
identically.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
import shutil
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Mapping, Optional, Protocol, Union

from .catalog import Apartment, Catalog, PlaceCategory, SchemaError, place_id
from .geo import GeoPoint

RENT_MIN = 500.0
RENT_MAX = 2000.0

_SEP = b"\x1f"

SUBMISSION_COLUMNS = [
    "Apartment Name",
    "Apartment Address",
    "Apartment Phone",
    "Apartment Website",
    "Average Rent",
]


class SubmissionError(ValueError):
    """Invalid submission content."""


class StorageError(RuntimeError):
    """The backing directory could not be read or written."""


def _clean(text: Optional[str]) -> Optional[str]:
    if text is None:
        return None
    # The field separator byte must never reach canonical_bytes.
    cleaned = text.replace("\x1f", "").strip()
    return cleaned or None


@dataclass(frozen=True)
class Submission:
    """A pending apartment listing; name and address are mandatory."""

    name: str
    address: str
    phone: Optional[str] = None
    website: Optional[str] = None
    monthly_rent: Optional[float] = None

    def __post_init__(self) -> None:
        name = _clean(self.name)
        address = _clean(self.address)
        if not name:
            raise SubmissionError("name is mandatory")
        if not address:
            raise SubmissionError("address is mandatory")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "address", address)
        object.__setattr__(self, "phone", _clean(self.phone))
        object.__setattr__(self, "website", _clean(self.website))
        if self.monthly_rent is not None:
            rent = float(self.monthly_rent)
            if not (math.isfinite(rent) and RENT_MIN <= rent <= RENT_MAX):
                raise SubmissionError(
                    f"monthly_rent must be within [{RENT_MIN:.0f}, {RENT_MAX:.0f}], got {self.monthly_rent}"
                )
            object.__setattr__(self, "monthly_rent", rent)


class Geocoder(Protocol):
    def geocode(self, address: str) -> Optional[GeoPoint]: ...


class TableGeocoder:
    """Address lookup against a fixed table; the default offline geocoder."""

    def __init__(self, table: Mapping[str, GeoPoint]):
        self._table = {k.strip().lower(): v for k, v in table.items()}

    @classmethod
    def from_csv(cls, content: Union[str, bytes, IO]) -> "TableGeocoder":
        if isinstance(content, bytes):
            text = content.decode("utf-8")
        elif isinstance(content, str):
            text = content
        else:
            raw = content.read()
            text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        reader = csv.reader(text.splitlines())
        rows = list(reader)
        if not rows or [c.strip() for c in rows[0]] != ["address", "lat", "lon"]:
            raise SchemaError('geocoder table must start with header "address,lat,lon"')
        table = {}
        for row in rows[1:]:
            if not row:
                continue
            table[row[0]] = GeoPoint(float(row[1]), float(row[2]))
        return cls(table)

    def geocode(self, address: str) -> Optional[GeoPoint]:
        return self._table.get(address.strip().lower())


def canonical_bytes(s: Submission) -> bytes:
    """Canonical hash input: the five fields in fixed order joined by 0x1f,
    absent fields empty, rent always with two decimals."""
    rent = "" if s.monthly_rent is None else f"{s.monthly_rent:.2f}"
    fields = [s.name, s.address, s.phone or "", s.website or "", rent]
    return _SEP.join(f.encode("utf-8") for f in fields)


def submission_filename(s: Submission, now: datetime) -> str:
    """<compact UTC second>-<md5 of canonical bytes>.csv"""
    if now.tzinfo is None:
        now = now.replace(tzinfo=timezone.utc)
    stamp = now.astimezone(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    digest = hashlib.md5(canonical_bytes(s)).hexdigest()
    return f"{stamp}-{digest}.csv"


def _submission_csv(s: Submission) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUBMISSION_COLUMNS)
    rent = "" if s.monthly_rent is None else f"{s.monthly_rent:.2f}"
    writer.writerow([s.name, s.address, s.phone or "", s.website or "", rent])
    return buf.getvalue()


def parse_submission_csv(text: str) -> Submission:
    rows = list(csv.reader(text.splitlines()))
    if not rows or [c.strip() for c in rows[0]] != SUBMISSION_COLUMNS:
        raise SubmissionError(f"expected header {','.join(SUBMISSION_COLUMNS)}")
    if len(rows) < 2:
        raise SubmissionError("missing data row")
    row = rows[1]
    if len(row) != len(SUBMISSION_COLUMNS):
        raise SubmissionError(f"expected {len(SUBMISSION_COLUMNS)} fields, got {len(row)}")
    name, address, phone, website, rent = row
    return Submission(
        name=name,
        address=address,
        phone=phone or None,
        website=website or None,
        monthly_rent=float(rent) if rent.strip() else None,
    )


class SubmissionStore:
    """Pending/archived/rejected submission files under one data root."""

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)
        self.pending = self.root / "pending"
        self.archived = self.root / "archived"
        self.rejected = self.root / "rejected"
        try:
            for d in (self.pending, self.archived, self.rejected):
                d.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot prepare submission store at {self.root}: {exc}") from exc

    def pending_files(self) -> list[Path]:
        return sorted(self.pending.glob("*.csv"))


def save_submission(
    store: SubmissionStore, s: Submission, now: Optional[datetime] = None
) -> str:
    """Write the submission under pending/ and return its filename.

    Identical content in the same second maps to the same name and
    overwrites byte-identically, so re-saves are idempotent.
    """
    if now is None:
        now = datetime.now(timezone.utc)
    filename = submission_filename(s, now)
    try:
        (store.pending / filename).write_text(_submission_csv(s), encoding="utf-8")
    except OSError as exc:
        raise StorageError(f"cannot write submission {filename}: {exc}") from exc
    return filename


@dataclass(frozen=True)
class MergeReport:
    added: tuple[tuple[str, str], ...]       # (filename, place id)
    duplicates: tuple[tuple[str, str], ...]  # (filename, place id)
    rejected: tuple[tuple[str, str], ...]    # (filename, reason)


def merge_pending(
    store: SubmissionStore, catalog: Catalog, geocoder: Geocoder
) -> tuple[Catalog, MergeReport]:
    """Fold every pending submission into a new catalog snapshot.

    Geocoded submissions become apartments and their files move to
    archived/; failures move to rejected/ with a reason and never abort the
    batch. Known place ids are reported as duplicates.
    """
    added: list[tuple[str, str]] = []
    duplicates: list[tuple[str, str]] = []
    rejected: list[tuple[str, str]] = []
    new_places = list(catalog.places)
    known_ids = {p.id for p in new_places}

    for path in store.pending_files():
        filename = path.name
        try:
            submission = parse_submission_csv(path.read_text(encoding="utf-8"))
        except (SubmissionError, ValueError, OSError) as exc:
            rejected.append((filename, f"unparseable: {exc}"))
            _move(path, store.rejected)
            continue
        location = geocoder.geocode(submission.address)
        if location is None:
            rejected.append((filename, f"geocode failed for address {submission.address!r}"))
            _move(path, store.rejected)
            continue
        pid = place_id(submission.name, location.lat, location.lon)
        if pid in known_ids:
            duplicates.append((filename, pid))
            _move(path, store.archived)
            continue
        new_places.append(
            Apartment(
                id=pid,
                name=submission.name,
                category=PlaceCategory.APARTMENT,
                location=location,
                address=submission.address,
                phone=submission.phone,
                website=submission.website,
                monthly_cost=submission.monthly_rent,
            )
        )
        known_ids.add(pid)
        added.append((filename, pid))
        _move(path, store.archived)

    new_catalog = Catalog(
        places=tuple(new_places),
        block_groups=catalog.block_groups,
        anchor=catalog.anchor,
    )
    report = MergeReport(
        added=tuple(added), duplicates=tuple(duplicates), rejected=tuple(rejected)
    )
    return new_catalog, report


def _move(path: Path, target_dir: Path) -> None:
    try:
        shutil.move(str(path), str(target_dir / path.name))
    except OSError as exc:
        raise StorageError(f"cannot move {path.name} to {target_dir}: {exc}") from exc
