import pytest

from app.core.exceptions import GroupSpecParseError
from app.services.group_spec import (
    FamilySpec,
    PermSpec,
    ProductSpec,
    SemidirectSpec,
    format_permutation,
    format_spec,
    parse_analysis_input,
    parse_auto_lines,
    parse_group_spec,
    permutation_from_cycles,
)


def test_permutation_composition_applies_left_factor_first():
    c = permutation_from_cycles(3, [[0, 1, 2]])
    t = permutation_from_cycles(3, [[0, 1]])
    assert (c * t).array_form == [0, 2, 1]
    assert (~c).array_form == [2, 0, 1]
    assert format_permutation(permutation_from_cycles(4, [[]])) == "()"
    assert format_permutation(c) == "(0 1 2)"
    assert format_permutation(permutation_from_cycles(5, [[3, 4], [0, 2]])) == "(0 2)(3 4)"


def test_permutation_rejects_overlapping_or_out_of_range_cycles():
    with pytest.raises(ValueError):
        permutation_from_cycles(3, [[0, 1], [1, 2]])
    with pytest.raises(ValueError):
        permutation_from_cycles(3, [[0, 3]])


def test_parse_family():
    assert parse_group_spec("cyclic 5") == FamilySpec("cyclic", (5,))
    assert parse_group_spec("elemabelian 3 2") == FamilySpec("elemabelian", (3, 2))


def test_parse_perm_with_identity_cycle():
    spec = parse_group_spec("perm 3: (0 1), (0 1 2), ()")
    assert isinstance(spec, PermSpec)
    assert spec.degree == 3
    assert [g.array_form for g in spec.generators] == [[1, 0, 2], [1, 2, 0], [0, 1, 2]]


def test_parse_nested_product_and_semidirect():
    spec = parse_group_spec("product (cyclic 2) (product (cyclic 3) (symmetric 3))")
    assert isinstance(spec, ProductSpec)
    assert isinstance(spec.right, ProductSpec)

    semi = parse_group_spec("semidirect 2 2 (symmetric 3) [0 1; 1 0], [0 1; 1 1]")
    assert isinstance(semi, SemidirectSpec)
    assert semi.acting == FamilySpec("symmetric", (3,))
    assert semi.matrices == (((0, 1), (1, 0)), ((0, 1), (1, 1)))
    assert format_spec(semi) == "semidirect 2 2 (symmetric 3) [0 1; 1 0], [0 1; 1 1]"


def test_format_spec_reparses_to_same_ast():
    for text in ["dihedral 8", "perm 4: (0 1 2 3), (0 2)", "product (cyclic 2) (cyclic 4)"]:
        spec = parse_group_spec(text)
        assert parse_group_spec(format_spec(spec)) == spec


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("frobnicate 3", "unknown family"),
        ("dihedral 7", "even"),
        ("quaternion 6", "multiple of 4"),
        ("elemabelian 4 2", "prime"),
        ("cyclic 3 4", "takes 1"),
        ("perm 3: (0 3)", "degree mismatch"),
        ("semidirect 2 2 (cyclic 2) [1 1; 1 1]", "not invertible"),
        ("semidirect 2 2 (cyclic 2) [1 1 0; 0 1 0]", "not 2x2"),
    ],
)
def test_parse_errors_name_the_problem(text, fragment):
    with pytest.raises(GroupSpecParseError) as info:
        parse_group_spec(text)
    assert fragment in info.value.message


def test_parse_error_has_position():
    with pytest.raises(GroupSpecParseError) as info:
        parse_group_spec("product (cyclic 2) (")
    assert info.value.line == 1
    assert info.value.column >= 1


def test_parse_auto_lines_segments_and_words():
    autos = parse_auto_lines("g0->g1, g1->g0 | g0->g0, g1->g0 g1\ng0 -> g1^-1, g1 -> e")
    assert len(autos) == 3
    assert autos[0].assignments == ((0, ((1, 1),)), (1, ((0, 1),)))
    assert autos[1].assignments[1] == (1, ((0, 1), (1, 1)))
    assert autos[2].assignments == ((0, ((1, -1),)), (1, ()))
    assert autos[2].line == 2


def test_parse_auto_lines_rejects_double_assignment():
    with pytest.raises(GroupSpecParseError):
        parse_auto_lines("g0->g1, g0->g0")


def test_parse_analysis_input_splits_autos_block():
    spec, autos = parse_analysis_input("elemabelian 2 2 autos: g0->g1, g1->g0")
    assert spec == FamilySpec("elemabelian", (2, 2))
    assert len(autos) == 1

    spec, autos = parse_analysis_input("elemabelian 2 2", "autos: g0->g1, g1->g0\ng0->g0, g1->g0 g1")
    assert len(autos) == 2
