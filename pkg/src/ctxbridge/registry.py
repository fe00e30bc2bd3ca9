"""Profile, service, and location tables plus radius-based service matching.

Distances use the equirectangular approximation (cheap, and within 0.5% of
haversine at the sub-50 km ranges the matcher works over). The three tables
persist as one TSV file each; values may not contain tabs or newlines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import (
    InvalidProfile,
    TableFormatError,
    TableIoError,
    UnknownService,
    UnknownUser,
)

SEXES = ("F", "M", "unspecified")
HANDICAPS = ("none", "blind")

EARTH_RADIUS_KM = 6371.0
DEFAULT_RADIUS_KM = 1.0


@dataclass(frozen=True)
class LocationFix:
    id_location: str
    longitude: float
    latitude: float

    def __post_init__(self):
        if not -180.0 <= self.longitude <= 180.0:
            raise ValueError(f"longitude {self.longitude} out of range")
        if not -90.0 <= self.latitude <= 90.0:
            raise ValueError(f"latitude {self.latitude} out of range")


@dataclass(frozen=True)
class Profile:
    id_profile: str
    name: str
    sex: str
    job: str
    age: int
    handicap: str = "none"
    subscriptions: frozenset[str] = frozenset()


@dataclass(frozen=True)
class ServiceEntry:
    id_service: str
    service_name: str
    description: str
    category: str
    location: LocationFix
    available: bool = True


@dataclass(frozen=True)
class RankedService:
    entry: ServiceEntry
    distance_km: float


def distance_km(a: LocationFix, b: LocationFix) -> float:
    """Equirectangular distance: d = R*sqrt((dlon*cos(mean lat))^2 + dlat^2)."""
    dlon = math.radians(b.longitude - a.longitude)
    dlat = math.radians(b.latitude - a.latitude)
    mean_lat = math.radians((a.latitude + b.latitude) / 2.0)
    x = dlon * math.cos(mean_lat)
    return EARTH_RADIUS_KM * math.sqrt(x * x + dlat * dlat)


def _validate_profile(p: Profile) -> None:
    if not p.id_profile:
        raise InvalidProfile("empty id_profile")
    if p.sex not in SEXES:
        raise InvalidProfile(f"bad sex {p.sex!r}")
    if not isinstance(p.age, int) or isinstance(p.age, bool) or p.age < 0:
        raise InvalidProfile(f"bad age {p.age!r}")
    if p.handicap not in HANDICAPS:
        raise InvalidProfile(f"bad handicap {p.handicap!r}")


PROFILE_COLUMNS = ("id_profile", "name", "sex", "job", "age",
                   "handicap", "subscriptions")
SERVICE_COLUMNS = ("id_service", "service_name", "description", "category",
                   "id_location", "available")
LOCATION_COLUMNS = ("id_location", "longitude", "latitude")

TABLE_FILES = {"profile": "profile.tsv",
               "service": "service.tsv",
               "location": "location.tsv"}


class Registry:
    """Single-writer store for the three tables."""

    def __init__(self):
        self.profiles: dict[str, Profile] = {}
        self.services: dict[str, ServiceEntry] = {}
        self.locations: dict[str, LocationFix] = {}

    def __eq__(self, other):
        return (isinstance(other, Registry)
                and self.profiles == other.profiles
                and self.services == other.services
                and self.locations == other.locations)

    # --- profiles -----------------------------------------------------------

    def upsert_profile(self, p: Profile) -> str:
        _validate_profile(p)
        self.profiles[p.id_profile] = p
        return p.id_profile

    def authenticate(self, user_id: str) -> Profile:
        try:
            return self.profiles[user_id]
        except KeyError:
            raise UnknownUser(user_id) from None

    # --- services -----------------------------------------------------------

    def upsert_service(self, entry: ServiceEntry) -> str:
        self.locations[entry.location.id_location] = entry.location
        self.services[entry.id_service] = entry
        return entry.id_service

    def set_availability(self, id_service: str, available: bool) -> None:
        try:
            entry = self.services[id_service]
        except KeyError:
            raise UnknownService(id_service) from None
        self.services[id_service] = replace(entry, available=available)

    def find_services(self, profile_id: str, at: LocationFix,
                      max_km: float = DEFAULT_RADIUS_KM,
                      category: str | None = None) -> list[RankedService]:
        profile = self.authenticate(profile_id)
        if max_km <= 0:
            raise ValueError("max_km must be positive")
        hits = []
        for entry in self.services.values():
            if category is not None:
                if entry.category != category:
                    continue
            elif entry.category not in profile.subscriptions:
                continue
            if not entry.available:
                continue
            d = distance_km(at, entry.location)
            if d <= max_km:
                hits.append(RankedService(entry, d))
        hits.sort(key=lambda r: (r.distance_km, r.entry.service_name))
        return hits

    # --- persistence ----------------------------------------------------------

    def save_tables(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        rows = [(p.id_profile, p.name, p.sex, p.job, str(p.age), p.handicap,
                 ",".join(sorted(p.subscriptions)))
                for p in sorted(self.profiles.values(), key=lambda p: p.id_profile)]
        _write_table(directory / TABLE_FILES["profile"], PROFILE_COLUMNS, rows)
        rows = [(s.id_service, s.service_name, s.description, s.category,
                 s.location.id_location, "true" if s.available else "false")
                for s in sorted(self.services.values(), key=lambda s: s.id_service)]
        _write_table(directory / TABLE_FILES["service"], SERVICE_COLUMNS, rows)
        rows = [(l.id_location, repr(l.longitude), repr(l.latitude))
                for l in sorted(self.locations.values(), key=lambda l: l.id_location)]
        _write_table(directory / TABLE_FILES["location"], LOCATION_COLUMNS, rows)

    def load_tables(self, directory: str | Path) -> None:
        directory = Path(directory)
        locations: dict[str, LocationFix] = {}
        for row, lineno in _read_table(directory / TABLE_FILES["location"],
                                       "location", LOCATION_COLUMNS):
            try:
                fix = LocationFix(row[0], _parse_float(row[1]), _parse_float(row[2]))
            except ValueError as e:
                raise TableFormatError(lineno, str(e)) from None
            locations[fix.id_location] = fix

        profiles: dict[str, Profile] = {}
        for row, lineno in _read_table(directory / TABLE_FILES["profile"],
                                       "profile", PROFILE_COLUMNS):
            subs = frozenset(x for x in row[6].split(",") if x)
            try:
                profile = Profile(row[0], row[1], row[2], row[3],
                                  _parse_int(row[4]), row[5], subs)
                _validate_profile(profile)
            except (ValueError, InvalidProfile) as e:
                raise TableFormatError(lineno, str(e)) from None
            profiles[profile.id_profile] = profile

        services: dict[str, ServiceEntry] = {}
        for row, lineno in _read_table(directory / TABLE_FILES["service"],
                                       "service", SERVICE_COLUMNS):
            if row[4] not in locations:
                raise TableFormatError(lineno, f"unknown id_location {row[4]!r}")
            if row[5] not in ("true", "false"):
                raise TableFormatError(lineno, f"bad boolean {row[5]!r}")
            entry = ServiceEntry(row[0], row[1], row[2], row[3],
                                 locations[row[4]], row[5] == "true")
            services[entry.id_service] = entry

        self.profiles = profiles
        self.services = services
        self.locations = locations


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"bad integer {text!r}") from None


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"bad float {text!r}") from None


def _write_table(path: Path, columns: tuple[str, ...],
                 rows: list[tuple[str, ...]]) -> None:
    lines = ["\t".join(columns)]
    for row in rows:
        for value in row:
            if "\t" in value or "\n" in value:
                raise TableFormatError(0, f"tab/newline forbidden in {value!r}")
        lines.append("\t".join(row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _read_table(path: Path, table: str, columns: tuple[str, ...]):
    if not path.exists():
        raise TableIoError(table, f"missing file {path}")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise TableIoError(table, str(e)) from None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or tuple(lines[0].split("\t")) != columns:
        raise TableFormatError(1, f"bad header for table {table!r}")
    out = []
    for i, line in enumerate(lines[1:], start=2):
        row = line.split("\t")
        if len(row) != len(columns):
            raise TableFormatError(i, f"expected {len(columns)} columns, got {len(row)}")
        out.append((tuple(row), i))
    return out
