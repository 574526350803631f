import shutil
import warnings

import pytest

from qhs.preset import (
    PresetError, PresetValidationError, build_preset, default_data, dumps, find_preset, load_preset,
    mutate, parse_preset_text, render_algebra,
)


def test_algebra_round_trip(preset, preset_data):
    for name in ("A", "H", "U"):
        P = getattr(preset, name)
        data = mutate(preset_data, ("algebra", name), render_algebra(P))
        Q = getattr(build_preset(data), name)
        assert Q.rules.keys() == P.rules.keys()
        assert render_algebra(Q) == render_algebra(P)


def test_dump_and_reload_validates(preset_data):
    p = parse_preset_text(dumps(preset_data), validate=True)
    assert p.validation.ok


def test_toml_syntax_error_has_location(preset_data):
    text = dumps(preset_data)
    broken = text[: len(text) // 2] + "\n[oops\n"
    with pytest.raises(PresetError) as info:
        parse_preset_text(broken)
    assert info.value.line is not None and info.value.column is not None


def test_unknown_generator_in_rule(preset_data):
    data = mutate(preset_data, ("algebra", "A", "rules"), {"b x": "a"})
    with pytest.raises(PresetError) as info:
        build_preset(data)
    assert "rules" in str(info.value)


def test_unparseable_entry_names_its_key(preset_data):
    data = mutate(preset_data, ("algebra", "A", "star", "b"), "-q*(c")
    with pytest.raises(PresetError) as info:
        build_preset(data)
    assert info.value.key == "algebra.A.star.b"


def test_missing_table_entry(preset_data):
    data = mutate(preset_data, ("algebra", "A", "counit"), {"a": "1", "b": "0", "c": "0"})
    with pytest.raises(PresetError):
        build_preset(data)


def test_mutate_leaves_original_untouched(preset_data):
    before = dumps(preset_data)
    mutate(preset_data, ("wedge", "w10 w01"), "q^-2*vol")
    assert dumps(preset_data) == before
    with pytest.raises(KeyError):
        mutate(preset_data, ("wedge", "nope"), "0")


def test_validation_failure_and_force(preset_data):
    text = dumps(mutate(preset_data, ("wedge", "w10 w01"), "q^-2*vol"))
    with pytest.raises(PresetValidationError) as info:
        parse_preset_text(text, validate=True)
    assert info.value.report.failures()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        p = parse_preset_text(text, validate=True, force=True)
    assert p is not None and caught


def test_search_path_env(tmp_path, monkeypatch):
    shutil.copy(find_preset("podles-cp1"), tmp_path / "renamed.toml")
    monkeypatch.setenv("QHS_PRESET_PATH", str(tmp_path))
    assert load_preset("renamed").name == "podles-cp1"
    with pytest.raises(FileNotFoundError):
        load_preset("no-such-preset")


def test_default_data_is_a_fresh_copy():
    a, b = default_data(), default_data()
    a["name"] = "changed"
    assert b["name"] == "podles-cp1"
