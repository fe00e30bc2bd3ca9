import math
import random

import pytest
from hypothesis import given
import hypothesis.strategies as st

from ctxbridge.errors import (
    InvalidProfile,
    TableFormatError,
    TableIoError,
    UnknownService,
    UnknownUser,
)
from ctxbridge.fixtures import USER_FIX, builtin_registry
from ctxbridge.registry import (
    EARTH_RADIUS_KM,
    LocationFix,
    Profile,
    Registry,
    ServiceEntry,
    distance_km,
)


def haversine_km(a: LocationFix, b: LocationFix) -> float:
    """Independent oracle for great-circle distance."""
    phi1, phi2 = math.radians(a.latitude), math.radians(b.latitude)
    dphi = phi2 - phi1
    dlmb = math.radians(b.longitude - a.longitude)
    h = math.sin(dphi / 2) ** 2 + \
        math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2) ** 2
    return 2 * EARTH_RADIUS_KM * math.asin(math.sqrt(h))


coords = st.tuples(
    st.floats(min_value=-179.0, max_value=179.0),
    st.floats(min_value=-89.0, max_value=89.0),
)


def fix(lon, lat, ident="f"):
    return LocationFix(ident, lon, lat)


# --- distance properties -----------------------------------------------------

def test_distance_zero_on_identical_points():
    assert distance_km(USER_FIX, USER_FIX) == 0.0


@given(coords, coords)
def test_distance_symmetric_and_nonnegative(p, q):
    a, b = fix(*p, "a"), fix(*q, "b")
    assert distance_km(a, b) >= 0.0
    assert distance_km(a, b) == pytest.approx(distance_km(b, a), abs=1e-12)


def test_distance_zero_iff_identical_nearby():
    a = fix(10.1, 36.8, "a")
    b = fix(10.1000001, 36.8, "b")
    assert distance_km(a, b) > 0.0


def test_triangle_inequality_sampled():
    # sampled over the ~2 km operating envelope of radius queries; the
    # per-pair mean-latitude cosine makes the formula non-metric over wide
    # boxes (violations reach ~1e-4 km at +-0.4 deg)
    rng = random.Random(7)
    for _ in range(1000):
        pts = [fix(rng.uniform(10.08, 10.12), rng.uniform(36.78, 36.82), str(i))
               for i in range(3)]
        a, b, c = pts
        assert distance_km(a, c) <= \
            distance_km(a, b) + distance_km(b, c) + 1e-9


def test_fixture_pair_against_haversine_oracle():
    a = fix(10.100, 36.800, "a")
    b = fix(10.180, 36.800, "b")
    oracle = haversine_km(a, b)
    actual = distance_km(a, b)
    assert abs(actual - oracle) / oracle < 0.005


def test_equirectangular_matches_oracle_under_50km():
    rng = random.Random(11)
    for _ in range(500):
        lon = rng.uniform(9.8, 10.4)
        lat = rng.uniform(36.5, 37.1)
        dlon = rng.uniform(-0.4, 0.4)
        dlat = rng.uniform(-0.4, 0.4)
        a = fix(lon, lat, "a")
        b = fix(lon + dlon, lat + dlat, "b")
        oracle = haversine_km(a, b)
        if oracle == 0.0 or oracle > 50.0:
            continue
        assert abs(distance_km(a, b) - oracle) / oracle < 0.005


def test_location_fix_rejects_out_of_range():
    with pytest.raises(ValueError):
        LocationFix("x", 181.0, 0.0)
    with pytest.raises(ValueError):
        LocationFix("x", 0.0, -90.5)


# --- profiles ------------------------------------------------------------------

def test_upsert_and_authenticate_round_trip():
    reg = Registry()
    p = Profile("1234", "Cherif_Sihem", "F", "Student", 20)
    assert reg.upsert_profile(p) == "1234"
    assert reg.authenticate("1234") == p


def test_upsert_overwrites_same_id():
    reg = Registry()
    reg.upsert_profile(Profile("1", "a", "F", "x", 1))
    reg.upsert_profile(Profile("1", "b", "M", "y", 2))
    assert reg.authenticate("1").name == "b"
    assert len(reg.profiles) == 1


def test_invalid_profiles_rejected():
    reg = Registry()
    with pytest.raises(InvalidProfile):
        reg.upsert_profile(Profile("1", "a", "F", "x", -1))
    with pytest.raises(InvalidProfile):
        reg.upsert_profile(Profile("1", "a", "X", "x", 1))
    with pytest.raises(InvalidProfile):
        reg.upsert_profile(Profile("1", "a", "F", "x", 1, handicap="limp"))


def test_authenticate_unknown_user():
    with pytest.raises(UnknownUser):
        Registry().authenticate("nobody")


# --- matching ---------------------------------------------------------------

def test_find_services_covers_subscribed_categories():
    reg = builtin_registry()
    hits = reg.find_services("1234", USER_FIX, 1.0)
    assert {r.entry.category for r in hits} == \
        {"Bank", "library", "restaurant", "Assurance"}


def test_assurance_query_matches_fixture_exactly():
    reg = builtin_registry()
    hits = reg.find_services("1234", USER_FIX, 1.0, "Assurance")
    names = [r.entry.service_name for r in hits]
    assert names == ["BIAT", "STB", "BNA"]
    # ranking agrees with the haversine oracle ordering
    oracle = sorted(hits, key=lambda r: haversine_km(USER_FIX, r.entry.location))
    assert [r.entry.service_name for r in oracle] == names


def test_results_sorted_by_distance_then_name():
    reg = builtin_registry()
    hits = reg.find_services("1234", USER_FIX, 1.0)
    keys = [(r.distance_km, r.entry.service_name) for r in hits]
    assert keys == sorted(keys)
    # the two restaurants share one location: tie broken alphabetically
    restaurants = [r.entry.service_name for r in hits
                   if r.entry.category == "restaurant"]
    assert restaurants == ["Le_Gourmet", "Pasta_Casa"]


def test_category_argument_overrides_subscriptions():
    reg = builtin_registry()
    hits = reg.find_services("1234", USER_FIX, 1.0, "ATM")
    assert [r.entry.service_name for r in hits] == ["BIAT-ATM"]


def test_radius_monotonicity():
    reg = builtin_registry()
    rng = random.Random(3)
    radii = sorted(rng.uniform(0.05, 10.0) for _ in range(100))
    previous: set[str] = set()
    for r in radii:
        ids = {x.entry.id_service
               for x in reg.find_services("1234", USER_FIX, r)}
        assert previous <= ids
        previous = ids


def test_set_availability_filters_results():
    reg = builtin_registry()
    reg.set_availability("BIAT-ATM", False)
    assert reg.find_services("1234", USER_FIX, 1.0, "ATM") == []
    reg.set_availability("BIAT-ATM", True)
    assert [r.entry.id_service for r in
            reg.find_services("1234", USER_FIX, 1.0, "ATM")] == ["BIAT-ATM"]


def test_set_availability_unknown_service():
    with pytest.raises(UnknownService):
        builtin_registry().set_availability("nope", False)


def test_find_services_unknown_user_and_bad_radius():
    reg = builtin_registry()
    with pytest.raises(UnknownUser):
        reg.find_services("ghost", USER_FIX, 1.0)
    with pytest.raises(ValueError):
        reg.find_services("1234", USER_FIX, 0.0)


# --- persistence -----------------------------------------------------------------

def test_save_load_round_trip(tmp_path):
    reg = builtin_registry()
    reg.set_availability("BIAT-ATM", False)
    reg.save_tables(tmp_path)
    loaded = Registry()
    loaded.load_tables(tmp_path)
    assert loaded == reg


def test_missing_file_is_io_error(tmp_path):
    with pytest.raises(TableIoError) as exc:
        Registry().load_tables(tmp_path)
    assert exc.value.table == "location"


def test_wrong_column_count_reports_line(tmp_path):
    builtin_registry().save_tables(tmp_path)
    path = tmp_path / "profile.tsv"
    lines = path.read_text().splitlines()
    lines[1] = "only\ttwo"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(TableFormatError) as exc:
        Registry().load_tables(tmp_path)
    assert exc.value.line == 2


def test_bad_header_reports_line_one(tmp_path):
    builtin_registry().save_tables(tmp_path)
    path = tmp_path / "location.tsv"
    body = path.read_text().splitlines()[1:]
    path.write_text("\n".join(["wrong\theader\there"] + body) + "\n")
    with pytest.raises(TableFormatError) as exc:
        Registry().load_tables(tmp_path)
    assert exc.value.line == 1


def test_unknown_location_reference_rejected(tmp_path):
    builtin_registry().save_tables(tmp_path)
    path = tmp_path / "service.tsv"
    text = path.read_text().replace("loc-biat", "loc-ghost")
    path.write_text(text)
    with pytest.raises(TableFormatError):
        Registry().load_tables(tmp_path)


def test_tabs_forbidden_in_values(tmp_path):
    reg = Registry()
    reg.upsert_profile(Profile("1", "bad\tname", "F", "x", 1))
    with pytest.raises(TableFormatError):
        reg.save_tables(tmp_path)


def test_shared_location_round_trips(tmp_path):
    reg = Registry()
    shared = LocationFix("loc-1", 10.0, 36.0)
    reg.upsert_service(ServiceEntry("s1", "One", "d", "c", shared))
    reg.upsert_service(ServiceEntry("s2", "Two", "d", "c", shared))
    reg.save_tables(tmp_path)
    loaded = Registry()
    loaded.load_tables(tmp_path)
    assert loaded == reg
    assert len(loaded.locations) == 1
