import pytest

from src.arrangements import catalog
from src.arrangements.arrangement import Arrangement, LatticeKind, summary_from_nu
from src.arrangements.catalog import CatalogSpec, Family
from src.common.errors import ConstructionFailedError, ParseError


def test_parse_spec():
    spec = catalog.parse_spec("catalog:L:7:5")
    assert spec == CatalogSpec(Family.L, (7, 5))
    assert str(spec) == "catalog:l:7:5"
    assert catalog.parse_spec("CATALOG:generic:4").family is Family.GENERIC
    assert catalog.is_catalog_spec("catalog:lhat:3:3")
    assert not catalog.is_catalog_spec("tests/fixtures/triangle.json")


@pytest.mark.parametrize(
    "text",
    [
        "generic:4",
        "catalog:hexagon:6",
        "catalog:l:7",
        "catalog:l:7:7",
        "catalog:l:3:2",
        "catalog:lhat:4:3",
        "catalog:generic:two",
        "catalog:generic:2",
        "catalog:monomial:1",
    ],
)
def test_bad_specs(text):
    with pytest.raises(ParseError):
        catalog.parse_spec(text)


def test_generic():
    entry = catalog.generic(5)
    assert entry.arrangement.d == 5
    assert entry.expected.nu_j(2) == 10
    assert entry.expected_mdr == 3
    assert entry.arrangement.source == "catalog:generic:5"


def test_generic_rejects_bad_parameters():
    with pytest.raises(ParseError):
        catalog.generic(4, parameters=[1, 2, 2, 3])


def test_pencil_plus():
    entry = catalog.build("catalog:l:7:5")
    assert entry.expected.nu == {2: 11, 3: 0, 4: 0, 5: 1, 6: 0, 7: 0}
    assert entry.expected.tau_comb == 27
    assert entry.expected.type_tag.kind is LatticeKind.L
    assert entry.expected_mdr == 2
    assert catalog.pencil_plus(7, 6).expected_mdr == 1
    assert catalog.pencil_plus(8, 4).expected_mdr is None


def test_lhat():
    entry = catalog.lhat(3, 4)
    assert entry.arrangement.d == 6
    assert entry.expected.nu_j(2) == 6
    assert entry.expected.nu_j(3) == 1
    assert entry.expected.nu_j(4) == 1
    assert entry.expected.type_tag.kind is LatticeKind.LHAT
    assert entry.expected_mdr == 2


def test_monomial():
    entry = catalog.monomial(3)
    assert entry.arrangement.context.order == 3
    assert entry.expected.nu_j(3) == 12
    assert entry.expected_mdr == 4
    assert catalog.monomial(2).expected_mdr == 2
    four = catalog.monomial(4)
    assert four.expected.nu_j(3) == 16
    assert four.expected.nu_j(4) == 3


def test_pencil():
    entry = catalog.build(CatalogSpec(Family.PENCIL, (4,)))
    assert not entry.expected.essential
    assert entry.expected_mdr == 0


def test_construct_gives_up_after_attempts(rationals):
    spec = CatalogSpec(Family.GENERIC, (3,))
    calls = []

    def build(shift):
        calls.append(shift)
        return catalog.generic(3).arrangement

    wrong = summary_from_nu({3: 1}, 3)
    with pytest.raises(ConstructionFailedError):
        catalog._construct(spec, build, wrong, attempts=3)
    assert calls == [0, 1, 2]


def test_construct_retries_until_match(rationals):
    spec = CatalogSpec(Family.GENERIC, (3,))
    triangle = catalog.generic(3).arrangement
    lines = [catalog._line(rationals, 0, 1, 0), catalog._line(rationals, 0, 1, -1), catalog._line(rationals, 0, 0, 1)]
    concurrent = Arrangement.from_lines(lines, rationals)

    def build(shift):
        return concurrent if shift == 0 else triangle

    result = catalog._construct(spec, build, summary_from_nu({2: 3}, 3), attempts=2)
    assert result is triangle


def test_sweep_is_essential():
    entries = catalog.sweep(6)
    assert entries
    assert all(entry.expected.essential for entry in entries)
    assert {entry.spec.family for entry in entries} == {Family.GENERIC, Family.L, Family.LHAT, Family.MONOMIAL}
