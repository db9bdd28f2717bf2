from fractions import Fraction

import numpy as np
import pytest

from hermitia.analysis import constancy_test
from hermitia.curvature import check_flat, symmetrize, vw_arrays
from hermitia.errors import OutsideDomain
from hermitia.models import (
    BTP3_CASES,
    HopfPoint,
    MiddleTypePattern,
    WallachPattern,
    btp3_constancy_analysis,
    hopf_chern_curvature,
    hopf_curvature_D,
    hopf_flat_params,
    hopf_hsc_report,
    hopf_curvature_D_assembled,
    hopf_torsion,
    middle_type_rb,
    wallach_rb,
)


def _random_point(rng, n):
    return HopfPoint.at(rng.standard_normal(n) + 1j * rng.standard_normal(n))


def test_hopf_point_validation():
    with pytest.raises(ValueError):
        HopfPoint.at([0, 0])
    with pytest.raises(ValueError):
        HopfPoint(1, [1])
    with pytest.raises(ValueError):
        HopfPoint(3, [1, 0])


def test_hopf_torsion_examples(rng):
    T = hopf_torsion(HopfPoint.at([1, 0])).T
    assert T[0, 0, 1] == 0 and T[1, 0, 1] == -1
    T = hopf_torsion(HopfPoint.at([0, 0, 1])).T
    assert T[0, 0, 2] == 1 and T[1, 1, 2] == 1
    T = hopf_torsion(_random_point(rng, 4)).T
    np.testing.assert_allclose(T, -T.transpose(0, 2, 1), atol=1e-15)


def test_hopf_chern_examples():
    R = hopf_chern_curvature(HopfPoint.at([1, 0]))
    assert R.component(1, 1, 1, 1) == 0 and R.component(2, 2, 2, 2) == 1
    R = hopf_chern_curvature(HopfPoint.at(np.ones(3) / np.sqrt(3)))
    assert R.component(1, 2, 3, 3) == pytest.approx(-1 / 3)
    k, l = np.nonzero(~np.eye(3, dtype=bool))
    assert not R.R[:, :, k, l].any()


def test_hopf_D_examples():
    pt = HopfPoint.at([1, 0])
    np.testing.assert_allclose(hopf_curvature_D(pt, (1, 0)).R, hopf_chern_curvature(pt).R, atol=1e-15)
    for r, s in [(0, 0), (2, -1), (-1, 2)]:
        R = hopf_curvature_D(pt, (r, s))
        t = (1 - r + r * s) / 2
        assert R.component(1, 1, 2, 2) == pytest.approx(0)
        assert R.component(1, 2, 2, 1) == pytest.approx((2 * t - t * t - s * s / 4) + (s * s / 4 - t))
    with pytest.raises(OutsideDomain):
        hopf_curvature_D(pt, (2, 1))


def test_hopf_closed_forms_against_assembly(rng):
    for n in (2, 3, 4):
        for _ in range(25):
            pt = _random_point(rng, n)
            r, s = rng.uniform(-3, 3, 2)
            RD = hopf_curvature_D(pt, (r, s))
            np.testing.assert_allclose(RD.R, hopf_curvature_D_assembled(pt, (r, s)).R, atol=1e-10)
            Rc_hat = symmetrize(hopf_chern_curvature(pt)).R
            np.testing.assert_allclose(4 * vw_arrays(hopf_torsion(pt))["v_hat"], 4 * Rc_hat, atol=1e-10)
            kappa = ((1 - r + r * s) / 2) ** 2 + s * s / 4
            np.testing.assert_allclose(symmetrize(RD).R, (1 - kappa) * Rc_hat, atol=1e-10)


def test_hsc_report_examples():
    rep = hopf_hsc_report(HopfPoint.at([0.3, 1j]), (-1, 0))
    assert rep.verdict.constant and rep.verdict.c == 0 and rep.on_chen_nie
    rep = hopf_hsc_report(HopfPoint.at([0, 1]), (0, 0))
    assert not rep.verdict.constant and rep.witness_value == pytest.approx(0.75)
    assert hopf_hsc_report(HopfPoint.at([1, 0]), (1, 0)).witness_value == pytest.approx(0)
    assert hopf_hsc_report(HopfPoint.at([0, 1]), (1, 0)).witness_value == pytest.approx(1)
    assert not hopf_hsc_report(HopfPoint.at([1, 0]), (1, 0)).verdict.constant


def test_flat_params():
    assert hopf_flat_params(2) == {(Fraction(-1), Fraction(0)), (Fraction(-1), Fraction(2)),
                                   (Fraction(1, 3), Fraction(-2))}
    for n in (3, 5):
        assert hopf_flat_params(n) == frozenset()
    with pytest.raises(ValueError):
        hopf_flat_params(1)


def test_flatness_exactly_on_flat_params(rng):
    for n in (2, 3):
        flat = {(float(r), float(s)) for r, s in hopf_flat_params(n)}
        pts = [(r / 3, s / 3) for r in range(-9, 10) for s in range(-9, 10) if s != 3 or r == 0] + sorted(flat)
        z = _random_point(rng, n)
        for r, s in pts:
            assert check_flat(hopf_curvature_D(z, (r, s))) == ((r, s) in flat)


def test_wallach_readoffs(rng):
    for _ in range(10):
        b = rng.uniform(-2, 2)
        p, q = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        R = wallach_rb(WallachPattern(b, p, q))
        assert R.component(1, 1, 1, 1) == pytest.approx(2)
        assert R.component(2, 2, 2, 2) == pytest.approx(1 - b)
        assert R.component(1, 1, 2, 2) == pytest.approx(1)
        assert R.component(2, 2, 3, 3) == pytest.approx(b)
        assert R.hermitian_defect() <= 1e-12
    R = wallach_rb(WallachPattern(-1, 0, 0))
    assert R.component(2, 2, 2, 2) == 2
    R = wallach_rb(WallachPattern(0, 0, 0))
    # Theta_23 = sigma = phi_3 ^ phibar_2
    assert R.component(3, 2, 2, 3) == 1
    assert R.component(2, 3, 2, 3) == 0 and R.component(2, 2, 2, 3) == 0


def test_middle_readoffs(rng):
    for _ in range(10):
        x, y = rng.uniform(-2, 2, 2)
        R = middle_type_rb(MiddleTypePattern(x, y))
        assert R.component(1, 1, 1, 1) == pytest.approx(x)
        assert R.component(3, 3, 3, 3) == 0
        assert R.component(1, 1, 2, 2) == pytest.approx(x)
        assert R.hermitian_defect() <= 1e-12
    R = middle_type_rb(MiddleTypePattern(0, 0))
    assert R.component(1, 1, 1, 1) == 0
    assert R.component(2, 1, 1, 2) == -2 and R.component(1, 2, 1, 2) == 2


def test_btp3_examples():
    v = btp3_constancy_analysis("rank3", (1, 0))
    assert v.consistent and v.c == 0
    v = btp3_constancy_analysis("wallach", (0, 0))
    assert not v.consistent and v.unknowns["c"] == pytest.approx(2) and v.unknowns["b"] == pytest.approx(-1)
    assert v.value == pytest.approx(0.25 * (0.25 + 1))
    v = btp3_constancy_analysis("middle", (-1, 0))
    assert not v.consistent and v.value == pytest.approx(1)
    with pytest.raises(ValueError):
        btp3_constancy_analysis("fano", (1, 0))
    with pytest.raises(OutsideDomain):
        btp3_constancy_analysis("rank3", (2, 1))


def test_btp3_lambda_scaling():
    for lam in (0.5, 2.0):
        v = btp3_constancy_analysis("middle", (1, 0), lam=lam)
        assert v.value == pytest.approx(0.5 * lam**2)
        assert btp3_constancy_analysis("rank3", (1, 0), lam=lam).consistent


def test_btp3_rank3_matches_constancy():
    # the Chern-flat rank-3 algebra is constant exactly where the analysis says consistent
    from hermitia.curvature import curvature_D
    from hermitia.lie_hermitian import catalog

    S = catalog("so3c")
    for p in [(1, 0), (-1, 0), (0, 0), (0, 1), (2, -1)]:
        assert btp3_constancy_analysis("rank3", p).consistent == constancy_test(curvature_D(S, p)).constant
    assert set(BTP3_CASES) == {"rank3", "wallach", "middle"}
