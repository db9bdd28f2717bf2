import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermitia.connections import NAMED_POINTS
from hermitia.curvature import (
    DEFAULT_GRID,
    CurvatureTensor,
    bismut_curvature_closed_form,
    check_btp,
    check_flat,
    curvature_D,
    curvature_from_structure,
    levicivita_curvature,
    levicivita_minus_chern,
    symmetrize,
    torsion_cov_derivatives,
    verify_identities,
    vw_terms,
)
from hermitia.errors import InvalidStructure
from hermitia.lie_hermitian import CATALOG_NAMES, catalog, change_frame, chern_torsion, random_dense, random_two_step
from hermitia.models import HopfPoint, hopf_torsion


def test_structure_route_examples():
    assert check_flat(curvature_from_structure(catalog("abelian", 3), "bismut"))
    iw = catalog("iwasawa")
    assert check_flat(curvature_from_structure(iw, "chern"))
    Rb = curvature_from_structure(iw, "bismut")
    assert Rb.component(2, 2, 1, 1) == pytest.approx(1)
    assert not check_flat(Rb)
    assert bismut_curvature_closed_form(iw).component(2, 2, 1, 1) == pytest.approx(1)
    with pytest.raises(ValueError):
        curvature_from_structure(iw, "weyl")
    with pytest.raises(InvalidStructure):
        curvature_from_structure(random_dense(3, 0))


def test_bismut_mixed_parts_for_iwasawa():
    extra = curvature_from_structure(catalog("iwasawa"), "bismut").extra
    assert np.abs(extra["R20"]).max() == 0 and np.abs(extra["R02"]).max() == 0


def test_closed_form_matches_structure_route():
    samples = [catalog(nm) for nm in CATALOG_NAMES] + [random_two_step(4, 2, s) for s in range(20)]
    for S in samples:
        a = curvature_from_structure(S, "bismut").R
        b = bismut_curvature_closed_form(S).R
        assert np.abs(a - b).max() <= 1e-9


def test_specializations():
    for nm in ("iwasawa", "kodaira_thurston", "so3c"):
        S = catalog(nm)
        np.testing.assert_allclose(curvature_D(S, (1, 0)).R, curvature_from_structure(S, "chern").R, atol=1e-12)
        np.testing.assert_allclose(curvature_D(S, (-1, 0)).R, curvature_from_structure(S, "bismut").R, atol=1e-12)
    kt = catalog("kodaira_thurston")
    Rlc, theta1, theta2 = levicivita_curvature(kt)
    np.testing.assert_allclose(curvature_D(kt, (0, 1)).R, Rlc.R, atol=1e-12)
    dc = torsion_cov_derivatives(kt, "chern")
    Rc = curvature_from_structure(kt, "chern")
    assert np.abs(Rlc.R - Rc.R - levicivita_minus_chern(chern_torsion(kt), dc)).max() <= 1e-9
    assert len(theta1) == 2 and len(theta2[0]) == 2


def test_kahler_collapse():
    S = catalog("hyperbolic_plane", a=0.7)
    Rc = curvature_from_structure(S, "chern").R
    assert not check_flat(CurvatureTensor(1, "chern", Rc))
    np.testing.assert_allclose(curvature_from_structure(S, "bismut").R, Rc, atol=1e-12)
    np.testing.assert_allclose(levicivita_curvature(S)[0].R, Rc, atol=1e-12)
    for r, s in NAMED_POINTS.values():
        np.testing.assert_allclose(curvature_D(S, (r, s)).R, Rc, atol=1e-12)


def test_routes_agree():
    for seed in range(10):
        S = random_two_step(2 + seed % 3, 1, seed)
        for p in DEFAULT_GRID:
            np.testing.assert_allclose(curvature_D(S, p, method="forms").R,
                                       curvature_D(S, p, method="tensor").R, atol=1e-12)
    with pytest.raises(ValueError):
        curvature_D(catalog("iwasawa"), (1, 0), method="guess")


def test_vw_terms_examples():
    zero = vw_terms(np.zeros((2, 2, 2)), 0, 0, 1, 1)
    assert zero.w == zero.v_ji == zero.v_hat == 0
    assert vw_terms(chern_torsion(catalog("iwasawa")), 0, 0, 2, 2).v_li == pytest.approx(1)
    T = hopf_torsion(HopfPoint.at([1, 0]))
    assert vw_terms(T, 0, 0, 1, 1).v_ji == pytest.approx(0)


def test_torsion_derivatives_and_btp():
    assert torsion_cov_derivatives(catalog("abelian", 3), "chern").max_abs() == 0
    assert check_btp(catalog("abelian"))
    assert check_btp(catalog("kodaira_thurston"))
    assert not check_btp(catalog("iwasawa"))
    assert check_btp(catalog("so3c"))
    assert check_btp(catalog("hopf_surface"))
    for nm in CATALOG_NAMES:
        S = catalog(nm)
        if check_btp(S):
            assert torsion_cov_derivatives(S, "bismut").max_abs() <= 1e-9


def test_symmetrize_examples(rng):
    Rb = curvature_from_structure(catalog("iwasawa"), "bismut")
    R = Rb.R
    Rh = symmetrize(Rb)
    expected = 0.25 * (R[0, 0, 2, 2] + R[2, 0, 0, 2] + R[0, 2, 2, 0] + R[2, 2, 0, 0])
    assert Rh.R[0, 0, 2, 2] == pytest.approx(expected)
    assert Rh.component(1, 1, 3, 3) == pytest.approx(-0.25)
    assert Rh.component(1, 1, 2, 2) == pytest.approx(0)
    X = rng.standard_normal((3,) * 4) + 1j * rng.standard_normal((3,) * 4)
    once = symmetrize(CurvatureTensor(3, "x", X))
    np.testing.assert_allclose(symmetrize(once).R, once.R, atol=1e-14)


def test_verify_identities_catalog():
    assert verify_identities(catalog("abelian", 3)).max_residual == 0
    rep = verify_identities(catalog("iwasawa"), [(1, 0), (-1, 0), (0, 1), (2, -1)])
    assert rep.ok, rep.residuals
    for nm in CATALOG_NAMES:
        rep = verify_identities(catalog(nm))
        assert rep.ok, (nm, rep.residuals)
        assert set(rep.residuals) >= {"D_from_chern", "bismut_from_chern", "lie_rhat_mixed", "rhat_chern", "torsion_derivs_antihol"}


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 4), st.integers(0, 2**31 - 1))
def test_identities_on_random_two_step(n, seed):
    S = random_two_step(n, 1 + seed % (n - 1), seed)
    rep = verify_identities(S, tol=1e-8)
    assert rep.ok, rep.residuals


def test_identities_survive_frame_change(rng):
    S = change_frame(random_two_step(3, 1, 2), np.linalg.qr(rng.standard_normal((3, 3)))[0])
    assert verify_identities(S, tol=1e-8).ok


def test_hermitian_symmetry_everywhere():
    for nm in CATALOG_NAMES:
        S = catalog(nm)
        for p in DEFAULT_GRID:
            assert curvature_D(S, p).hermitian_defect() <= 1e-10


def test_n1_degenerate():
    S = catalog("abelian", 1)
    assert curvature_D(S, (0, 1)).max_abs() == 0
    assert not chern_torsion(S).T.any()
