import pytest

from app.core.exceptions import CatalogError
from app.services.catalog import CatalogEntry, _entry, build_catalog, dump_catalog, load_catalog, parse_catalog


def test_builtin_catalog_shape():
    entries = build_catalog()
    names = [e.name for e in entries]
    assert len(entries) >= 30
    assert len(set(names)) == len(names)
    for required in ["cyclic1", "cyclic27", "klein4", "sym4", "alt4", "alt5xalt5_swap", "elemabelian2_3_sym3"]:
        assert required in names


def test_abelian_entries_expected_true_exactly_when_cyclic():
    abelian = [e for e in build_catalog() if "abelian" in e.tags and not e.has_autos]
    assert len(build_catalog()) == 36
    assert len(abelian) == 18
    for entry in abelian:
        assert entry.expected == ("cyclic" in entry.tags)


def test_entry_fields_hold_their_own_values():
    for entry in build_catalog():
        assert isinstance(entry.expected, bool)
        assert isinstance(entry.note, str)
        assert all(isinstance(tag, str) for tag in entry.tags)
        if entry.has_autos:
            assert entry.expected_g is True
            assert "g" in entry.tags
        else:
            assert entry.expected_g is None
    by_name = {e.name: e for e in build_catalog()}
    assert by_name["dihedral6"].note == "Sym(3)"
    assert by_name["klein4"].tags == ("abelian", "nilpotent")


def test_optional_entry_fields_are_keyword_only():
    with pytest.raises(TypeError):
        _entry("bad", "cyclic 2", True, None, "note")


def test_parse_catalog_lines():
    text = """
# small corpus
z6 := cyclic 6 expect true
v := elemabelian 2 2 autos: g0->g1, g1->g0 | g0->g0, g1->g0 g1 expect false expect-g true
bare := symmetric 3
"""
    entries = parse_catalog(text)
    assert [e.name for e in entries] == ["z6", "v", "bare"]
    assert entries[0].spec_text == "cyclic 6"
    assert entries[0].expected is True
    assert entries[1].has_autos
    assert (entries[1].expected, entries[1].expected_g) == (False, True)
    assert entries[2].expected is None and entries[2].expected_g is None


def test_dump_then_parse_keeps_entries():
    entries = build_catalog()
    again = parse_catalog(dump_catalog(entries))
    assert [(e.name, e.spec_text, e.expected, e.expected_g) for e in again] == [
        (e.name, e.spec_text, e.expected, e.expected_g) for e in entries
    ]


def test_duplicate_names_are_rejected():
    with pytest.raises(CatalogError) as info:
        parse_catalog("a := cyclic 2\na := cyclic 3\n")
    assert info.value.details["line"] == 2


def test_malformed_lines_are_rejected():
    with pytest.raises(CatalogError):
        parse_catalog("no separator here")
    with pytest.raises(CatalogError):
        parse_catalog("empty := expect true")


def test_load_catalog(tmp_path):
    assert len(load_catalog()) == len(build_catalog())
    path = tmp_path / "corpus.txt"
    path.write_text("z2 := cyclic 2 expect true\n", encoding="utf-8")
    (entry,) = load_catalog(path)
    assert entry.name == "z2"
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing yet\n", encoding="utf-8")
    assert load_catalog(empty) == []
    with pytest.raises(CatalogError):
        load_catalog(tmp_path / "missing.txt")


def test_entries_reject_values_in_the_wrong_field():
    with pytest.raises(CatalogError):
        CatalogEntry("d6", "dihedral 6", True, "Sym(3)")
    with pytest.raises(CatalogError):
        CatalogEntry("d6", "dihedral 6", True, None, ("nilpotent",))
