"""Milnor algebra Hilbert functions, mdr, defect tables and freeness."""

import pytest

from src.algebra.polyring import Monomial, fermat, polynomial_from_terms
from src.analysis.jacobian import (
    FreenessStatus,
    JacobianSystem,
    build_profile,
    classify,
    defect_table,
    fermat_dims,
    hilbert_milnor,
    hs_vanishing_check,
    koszul_count,
    mdr,
    stability,
)
from src.arrangements import catalog
from src.common.errors import InternalError, NotEssentialError, NotStabilizedError, UnsupportedInputError
from src.common.settings import RankSettings
from tests.conftest import load_fixture


def test_fermat_dims():
    assert fermat_dims(3) == (1, 3, 3, 1)
    assert fermat_dims(4) == (1, 3, 6, 7, 6, 3, 1)
    assert sum(fermat_dims(5)) == 4**3


def test_koszul_count():
    assert koszul_count(1, 3) == 0
    assert koszul_count(2, 3) == 3
    assert koszul_count(4, 3) == 3 * 6 - 1


def test_triangle_profile():
    profile = build_profile(load_fixture("triangle").polynomial)
    assert profile.milnor_dims == (1, 3, 3, 3, 3)
    assert profile.r == 1
    assert profile.tau_alg == 3
    assert profile.st == 1
    assert profile.defect_table == (0, 0, 0, 0)
    assert profile.nu == 0
    freeness = classify(3, profile.r, profile.tau_alg, profile.nu)
    assert freeness.status is FreenessStatus.FREE
    assert freeness.exponents == (1, 1)
    report = hs_vanishing_check(profile, rational_components=True)
    assert report.vanishing_holds and report.bound_holds
    assert not report.nodal_equality


def test_cuspidal_cubic_profile():
    arrangement = load_fixture("cuspidal_cubic")
    profile = build_profile(arrangement.polynomial)
    assert profile.milnor_dims == (1, 3, 3, 2, 2)
    assert profile.r == 1
    assert profile.tau_alg == 2
    assert profile.nu == 1
    assert profile.st == 3
    assert profile.reg == 2
    freeness = classify(3, 1, 2, 1)
    assert freeness.status is FreenessStatus.NEARLY_FREE
    assert freeness.splitting_type == (1, 1)
    # st = 3 exceeds 2d - 4 = 2, so bare curves are bounded through reg
    report = hs_vanishing_check(profile, rational_components=True, has_lines=False)
    assert report.bounded == "reg"
    assert report.bound == 2
    assert report.bound_holds


def test_generic_four_lines_nearly_free():
    profile = build_profile(catalog.generic(4).arrangement.polynomial)
    assert profile.r == 2
    assert profile.tau_alg == 6
    assert profile.nu == 1
    freeness = classify(4, profile.r, profile.tau_alg, profile.nu)
    assert freeness.status is FreenessStatus.NEARLY_FREE
    assert freeness.splitting_type == (1, 2)
    assert freeness.branch == "r>=(d-2)/2"


def test_a223_plus_line_is_free():
    profile = build_profile(load_fixture("a223_plus_line").polynomial)
    assert profile.tau_alg == 27
    assert profile.r == 3
    freeness = classify(7, profile.r, profile.tau_alg, profile.nu)
    assert freeness.status is FreenessStatus.FREE
    assert freeness.exponents == (3, 3)


def test_l75_nearly_free():
    profile = build_profile(catalog.pencil_plus(7, 5).arrangement.polynomial)
    assert profile.r == 2
    assert profile.nu == 1
    assert profile.defect_table == profile.defect_table[::-1]


@pytest.mark.slow
@pytest.mark.parametrize("name, nu", [("d9_m6_nu3_0", 3), ("d9_m6_nu3_2", 1)])
def test_d9_high_point_fixtures(name, nu):
    profile = build_profile(load_fixture(name).polynomial)
    assert profile.r == 3
    assert profile.nu == nu


def test_rank_strategies_agree():
    f = catalog.lhat(3, 3).arrangement.polynomial
    exact = hilbert_milnor(f, system=JacobianSystem(f, RankSettings(strategy="exact")))
    modular = hilbert_milnor(f, system=JacobianSystem(f, RankSettings(strategy="modular")))
    assert exact == modular


def test_stability_guard():
    assert stability((1, 3, 3, 2, 2), 3) == (3, 2)
    with pytest.raises(NotStabilizedError):
        stability((1, 3, 3, 3, 2), 3)
    with pytest.raises(ValueError):
        stability((1, 3, 3), 3)


def test_defect_table_rejects_bad_dims():
    with pytest.raises(InternalError):
        defect_table((1, 3, 3, 0, 0), 3, 3)


def test_classify_guards():
    with pytest.raises(NotEssentialError):
        classify(3, 0, 3, 0)
    with pytest.raises(InternalError):
        classify(3, 1, 3, 1)


def test_small_degree_and_pencil():
    with pytest.raises(UnsupportedInputError):
        build_profile(catalog.generic(3).arrangement.polynomial.partial(0))
    with pytest.raises(NotEssentialError):
        build_profile(catalog.pencil(4).arrangement.polynomial)


def test_mdr_of_pencil_is_zero():
    assert mdr(catalog.pencil(3).arrangement.polynomial) == 0


@pytest.mark.parametrize(
    "entry",
    [
        lambda: catalog.generic(4),
        lambda: catalog.generic(5),
        lambda: catalog.pencil_plus(5, 3),
        lambda: catalog.pencil_plus(6, 4),
        lambda: catalog.lhat(3, 3),
    ],
)
def test_mdr_invariant_under_coordinate_change(entry):
    arrangement = entry().arrangement
    moved = arrangement.transformed([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert mdr(moved.polynomial) == mdr(arrangement.polynomial)


@pytest.mark.slow
def test_catalog_sweep_properties():
    for entry in catalog.sweep(10):
        arrangement = entry.arrangement
        profile = build_profile(arrangement.polynomial)
        assert profile.tau_alg == entry.expected.tau_comb, entry.spec
        if entry.expected_mdr is not None:
            assert profile.r == entry.expected_mdr, entry.spec
        classify(arrangement.d, profile.r, profile.tau_alg, profile.nu)


def test_fermat_cubic_hilbert_function(rationals):
    assert hilbert_milnor(fermat(3, rationals)) == (1, 3, 3, 1, 0)
    # smooth, so the dimensions only reach tau = 0 after degree 3d - 6
    with pytest.raises(NotStabilizedError) as excinfo:
        build_profile(fermat(3, rationals))
    assert "smooth curve" in excinfo.value.message
    assert "not reduced" not in excinfo.value.message


def test_non_reduced_curve_does_not_stabilize(rationals):
    f = polynomial_from_terms(rationals, [(Monomial(2, 1, 0), rationals.one)])
    dims = hilbert_milnor(f)
    assert dims == (1, 3, 4, 5, 6)
    with pytest.raises(NotStabilizedError):
        stability(dims, 3)


def test_generic_stability_is_nodal():
    f = catalog.generic(4).arrangement.polynomial
    assert stability(hilbert_milnor(f), 4) == (4, 6)
    assert mdr(catalog.generic(5).arrangement.polynomial) == 3


@pytest.mark.slow
def test_monomial_three_mdr():
    assert mdr(catalog.monomial(3).arrangement.polynomial) == 4
