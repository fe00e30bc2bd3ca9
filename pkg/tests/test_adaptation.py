import pytest

from ctxbridge.adaptation import (
    OVERRIDABLE_FIELDS,
    OverrideStore,
    Widget,
    adapt,
    build_service_widgets,
    category_prompt,
    descriptor_to_dict,
    greeting,
    title,
)
from ctxbridge.errors import UnknownField
from ctxbridge.fixtures import USER_FIX, builtin_registry
from ctxbridge.registry import Profile

SIHEM = Profile("1234", "Cherif_Sihem", "F", "Student", 20)
KARIM = Profile("1235", "Karim_Mansour", "M", "Engineer", 34, "blind")
ANON = Profile("1", "", "unspecified", "", 0)


# --- greeting and title (byte-exact) ---------------------------------------------

def test_greeting_byte_exact():
    assert greeting(SIHEM) == "Hello, Miss : Cherif_Sihem : 20\n"


def test_title_byte_exact():
    assert title(SIHEM) == "Profile_location_service: id =1234"


def test_greeting_for_mr():
    assert greeting(KARIM) == "Hello, Mr : Karim_Mansour : 34\n"


def test_greeting_empty_name_no_special_casing():
    p = Profile("9", "", "F", "Student", 20)
    assert greeting(p) == "Hello, Miss :  : 20\n"


def test_descriptor_embeds_exact_strings():
    d = adapt(SIHEM)
    assert d.greeting == greeting(SIHEM)
    assert d.title == title(SIHEM)


# --- automatic rules ------------------------------------------------------------

def test_girl_gets_pink_no_vocal():
    d = adapt(SIHEM)
    assert d.theme_color == "pink"
    assert d.vocal is False
    assert d.display_mode == "visual"


def test_boy_gets_blue():
    d = adapt(Profile("2", "x", "M", "j", 30))
    assert d.theme_color == "blue"


def test_unspecified_gets_neutral():
    assert adapt(ANON).theme_color == "neutral"


def test_blind_switches_vocal_on():
    d = adapt(KARIM)
    assert d.vocal is True
    assert d.display_mode == "both"


def test_adapt_is_pure():
    assert adapt(SIHEM) == adapt(SIHEM)
    assert adapt(KARIM, {"location": None}, {"theme_color": "green"}) == \
        adapt(KARIM, {"location": None}, {"theme_color": "green"})


# --- overrides ---------------------------------------------------------------

def test_override_beats_rule():
    d = adapt(SIHEM, overrides={"theme_color": "blue"})
    assert d.theme_color == "blue"


def test_override_precedence_for_every_field():
    forced = {"theme_color": "green", "vocal": True, "display_mode": "vocal"}
    d = adapt(SIHEM, overrides=forced)
    assert d.theme_color == "green"
    assert d.vocal is True
    assert d.display_mode == "vocal"


def test_vocal_invariant_restored_after_overrides():
    d = adapt(SIHEM, overrides={"vocal": True})
    assert d.vocal is True
    assert d.display_mode in ("vocal", "both")
    # even a contradictory pair is reconciled in the invariant's favor
    d = adapt(SIHEM, overrides={"vocal": True, "display_mode": "visual"})
    assert d.display_mode == "both"


def test_override_store_scoped_per_profile():
    store = OverrideStore()
    store.set("1234", "theme_color", "green", tick=3)
    assert store.for_profile("1234") == {"theme_color": "green"}
    assert store.for_profile("1235") == {}
    store.clear("1234", "theme_color")
    assert store.for_profile("1234") == {}


def test_override_store_last_write_wins():
    store = OverrideStore()
    store.set("1", "theme_color", "green")
    store.set("1", "theme_color", "red")
    assert store.for_profile("1") == {"theme_color": "red"}


def test_override_store_rejects_unknown_field():
    store = OverrideStore()
    with pytest.raises(UnknownField):
        store.set("1", "greeting", "hi")
    with pytest.raises(UnknownField):
        store.clear("1", "nope")
    assert set(OVERRIDABLE_FIELDS) == {"theme_color", "vocal", "display_mode"}


def test_clear_restores_rule_value():
    store = OverrideStore()
    store.set("1234", "theme_color", "green")
    assert adapt(SIHEM, overrides=store.for_profile("1234")).theme_color == "green"
    store.clear("1234", "theme_color")
    assert adapt(SIHEM, overrides=store.for_profile("1234")).theme_color == "pink"


# --- widgets ------------------------------------------------------------------

def test_widgets_prompt_first_then_ranked_items():
    reg = builtin_registry()
    ranked = reg.find_services("1234", USER_FIX, 1.0, "Assurance")
    widgets = build_service_widgets(ranked, category_prompt("Assurance"))
    assert widgets[0] == Widget("prompt", "Do you want to find a assurance")
    labels = [w.text for w in widgets[1:]]
    assert [w.kind for w in widgets[1:]] == ["list"] * 3
    assert labels[0].startswith("BIAT — ") and labels[0].endswith(" km")
    # distance formatted to two decimals, order preserved
    for label, r in zip(labels, ranked):
        assert label == f"{r.entry.service_name} — {r.distance_km:.2f} km"


def test_bank_prompt_verbatim():
    assert category_prompt("Bank") == "Do you want to find a bank"


def test_default_prompt():
    assert category_prompt(None) == "Do you want a service?"


def test_empty_services_prompt_only():
    widgets = build_service_widgets([], category_prompt(None))
    assert widgets == (Widget("prompt", "Do you want a service?"),)


def test_descriptor_to_dict_field_names():
    d = adapt(SIHEM)
    payload = descriptor_to_dict(d)
    assert list(payload) == ["theme_color", "vocal", "display_mode",
                             "title", "greeting", "widgets"]
