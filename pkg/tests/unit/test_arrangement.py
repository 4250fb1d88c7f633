"""Parsing, intersection lattices and combinatorial identities."""

import json
from fractions import Fraction

import pytest

from src.arrangements.arrangement import (
    LatticeKind,
    LatticeType,
    compute_lattice,
    hirzebruch_check,
    lattice_relations,
    parse_arrangement,
    summarize,
    summary_from_nu,
    to_document,
)
from src.common.errors import NonReducedError, ParseError, UnsupportedInputError
from tests.conftest import load_fixture


def _summary(name):
    arrangement = load_fixture(name)
    return summarize(compute_lattice(arrangement), arrangement.d)


def test_triangle_lattice():
    arrangement = load_fixture("triangle")
    assert arrangement.d == 3
    assert arrangement.has_lines
    assert arrangement.assumptions.rational_components
    points = compute_lattice(arrangement)
    assert len(points) == 3
    assert all(p.multiplicity == 2 for p in points)
    summary = summarize(points, 3)
    assert summary.nu == {2: 3, 3: 0}
    assert summary.tau_comb == 3
    assert summary.m_max == 2
    assert summary.essential
    assert summary.chi_complement == 0
    assert summary.type_tag == LatticeType(LatticeKind.GENERIC, (3,))


def test_pencil_is_not_essential():
    summary = _summary("pencil")
    assert not summary.essential
    assert summary.type_tag.kind is LatticeKind.PENCIL


def test_a223_plus_line_lattice():
    summary = _summary("a223_plus_line")
    assert summary.nu_j(2) == 3
    assert summary.nu_j(3) == 6
    assert summary.tau_comb == 27
    assert summary.type_tag.kind is LatticeKind.DOUBLE_TRIPLE_ONLY


def test_cyclotomic_input_a333():
    arrangement = load_fixture("a333")
    assert arrangement.context.order == 3
    summary = summarize(compute_lattice(arrangement), arrangement.d)
    assert summary.nu == {2: 0, 3: 12, 4: 0, 5: 0, 6: 0, 7: 0, 8: 0, 9: 0}
    assert summary.tau_comb == 48
    assert summary.type_tag.kind is LatticeKind.DOUBLE_TRIPLE_ONLY


def test_single_high_point_is_type_l():
    summary = _summary("d9_m6_nu3_0")
    assert summary.type_tag == LatticeType(LatticeKind.L, (9, 6))
    assert str(summary.type_tag) == "L(9,6)"
    assert _summary("d9_m6_nu3_2").nu_j(3) == 2


def test_points_sorted_by_multiplicity():
    points = compute_lattice(load_fixture("d9_m6_nu3_2"))
    assert points[0].multiplicity == 6
    assert points[0].incident_lines == (0, 1, 2, 3, 4, 5)
    assert [p.multiplicity for p in points[1:3]] == [3, 3]


def test_declared_lattice_types():
    assert summary_from_nu({2: 4, 3: 2}, 5).type_tag == LatticeType(LatticeKind.LHAT, (3, 3))
    assert summary_from_nu({2: 11, 5: 1}, 7).type_tag == LatticeType(LatticeKind.L, (7, 5))
    with pytest.raises(ParseError):
        summary_from_nu({2: 5}, 5)
    with pytest.raises(ParseError):
        summary_from_nu({6: 1}, 5)


def test_bare_polynomial_with_declared_lattice():
    document = {
        "polynomial": {"terms": [{"m": [1, 1, 1], "c": "1"}]},
        "lattice": {"nu": {"2": 3}},
        "assume": {"h1_minus": 0},
    }
    arrangement = parse_arrangement(document)
    assert not arrangement.has_lines
    assert arrangement.declared_lattice.tau_comb == 3
    assert arrangement.assumptions.h1_minus == 0
    assert not arrangement.assumptions.rational_components
    with pytest.raises(UnsupportedInputError):
        compute_lattice(arrangement)


@pytest.mark.parametrize("nu", [{"2": 3.9}, {"2": "3"}, {"2": True}, {"two": 3}, {"-2": 3}])
def test_declared_lattice_entries_must_be_integers(nu):
    document = {"polynomial": {"terms": [{"m": [1, 1, 1], "c": "1"}]}, "lattice": {"nu": nu}}
    with pytest.raises(ParseError):
        parse_arrangement(document)


def test_declared_lattice_is_checked_against_lines():
    triangle = [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
    arrangement = parse_arrangement({"lines": triangle, "lattice": {"nu": {"2": 3}}})
    assert arrangement.declared_lattice.nu_j(2) == 3
    with pytest.raises(ParseError):
        parse_arrangement({"lines": triangle, "lattice": {"nu": {"3": 1}}})


@pytest.mark.parametrize(
    "document",
    [
        "{not json",
        "[1, 2]",
        {"lines": [["1", "0", "0"]], "polynomial": {"terms": []}},
        {"cyclotomic_order": 1},
        {"lines": [["1", "0", "0"]], "colour": "red"},
        {"cyclotomic_order": 0, "lines": [["1", "0", "0"]]},
        {"lines": [["1", "0"]]},
        {"lines": [["0", "0", "0"], ["1", "0", "0"]]},
        {"lines": [["1", "0", "0.5"]]},
        {"polynomial": {"terms": [{"m": [1, 0, 0], "c": "1"}, {"m": [2, 0, 0], "c": "1"}]}},
        {"polynomial": {"degree": 2, "terms": [{"m": [1, 0, 0], "c": "1"}]}},
        {"polynomial": {"terms": [{"m": [1, 0, 0], "c": "1"}, {"m": [1, 0, 0], "c": "-1"}]}},
        {"lines": [["1", "0", "0"]], "assume": {"h1_minus": -2}},
    ],
)
def test_parse_errors(document):
    with pytest.raises(ParseError):
        parse_arrangement(document)


def test_duplicate_lines_are_non_reduced():
    with pytest.raises(NonReducedError):
        load_fixture("nonreduced")
    with pytest.raises(NonReducedError):
        parse_arrangement({"cyclotomic_order": 3, "lines": [["1", "z", "0"], ["z^2", "1", "0"], ["0", "0", "1"]]})


def test_hirzebruch():
    generic6 = summary_from_nu({2: 15}, 6)
    result = hirzebruch_check(generic6)
    assert result.applicable and result.holds
    assert result.slack == Fraction(9)
    assert not hirzebruch_check(_summary("triangle")).applicable
    a333 = hirzebruch_check(summary_from_nu({3: 12}, 9))
    assert a333.slack == 0


def test_lattice_relations():
    relations = lattice_relations(summary_from_nu({2: 11, 5: 1}, 7))
    assert relations.sigma == 8
    assert relations.nu2_identity_holds
    assert relations.tau_identity_holds


def test_transformed_keeps_lattice(rationals):
    arrangement = load_fixture("a223_plus_line")
    matrix = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    moved = arrangement.transformed(matrix)
    assert moved.source.endswith("#transformed")
    assert summarize(compute_lattice(moved), 7).nu == summarize(compute_lattice(arrangement), 7).nu
    with pytest.raises(ValueError):
        arrangement.transformed([[1, 0, 0], [0, 1, 0], [1, 1, 0]])


def test_to_document_reparses():
    arrangement = load_fixture("a333")
    document = to_document(arrangement)
    assert document["cyclotomic_order"] == 3
    again = parse_arrangement(json.dumps(document))
    assert again.lines == arrangement.lines
    cusp = to_document(load_fixture("cuspidal_cubic"))
    assert cusp["assume"] == {"rational_components": True}
    assert cusp["polynomial"]["degree"] == 3
