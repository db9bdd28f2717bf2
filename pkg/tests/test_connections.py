from fractions import Fraction

import numpy as np
import pytest

from hermitia.connections import (
    NAMED_POINTS,
    ConnectionParams,
    beta,
    bismut_connection_form,
    chern_connection_form,
    connection_form_D,
    connection_params,
    gamma,
    in_domain,
)
from hermitia.errors import OutsideDomain
from hermitia.exterior import Form, phi, phibar
from hermitia.lie_hermitian import CATALOG_NAMES, catalog, chern_torsion, random_two_step


def test_params_examples():
    assert connection_params(1, 0).t == 0
    assert connection_params(-1, 0).t == 1
    assert connection_params(0, 1).on_levicivita_vertex
    with pytest.raises(OutsideDomain):
        connection_params(2, 1)
    assert ConnectionParams.nabla_minus().r == pytest.approx(1 / 3)
    for r, s in NAMED_POINTS.values():
        assert in_domain(r, s)
    assert NAMED_POINTS["nabla_minus"] == (Fraction(1, 3), -2)


def test_chern_connection_examples():
    assert chern_connection_form(catalog("abelian")).max_abs() == 0
    assert chern_connection_form(catalog("iwasawa")).max_abs() == 0
    th = chern_connection_form(catalog("kodaira_thurston")).entries
    n = 2
    assert th[1][0] == -phi(0, n)
    assert th[0][1] == phibar(0, n)
    assert th[0][0].is_zero() and th[1][1].is_zero()


def test_gamma_and_beta_examples():
    n = 3
    g = gamma(chern_torsion(catalog("iwasawa"))).entries
    assert g[0][2] == -phi(1, n)
    assert g[1][2] == phi(0, n)
    assert g[2][0] == phibar(1, n)
    assert g[2][1] == -phibar(0, n)
    assert sum(0 if g[i][j].is_zero() else 1 for i in range(3) for j in range(3)) == 4

    b = beta(chern_torsion(catalog("iwasawa"))).entries
    assert b[0][1] == -0.5 * phi(2, n)
    assert b[1][0] == 0.5 * phi(2, n)

    # Kodaira-Thurston fixtures from direct substitution of T^1_{12} = -1
    g = gamma(chern_torsion(catalog("kodaira_thurston"))).entries
    assert g[0][0] == -phi(1, 2) + phibar(1, 2)
    assert g[0][1] == -phibar(0, 2)
    assert g[1][0] == phi(0, 2)
    assert g[1][1].is_zero()
    b = beta(chern_torsion(catalog("kodaira_thurston"))).entries
    assert b[0][1] == -0.5 * phi(0, 2)
    assert b[1][0] == 0.5 * phi(0, 2)
    assert gamma(np.zeros((2, 2, 2))).max_abs() == 0


def test_bismut_equals_chern_plus_gamma():
    th = bismut_connection_form(catalog("iwasawa")).entries
    assert th[0][2] == -phi(1, 3) and th[1][2] == phi(0, 3)
    assert th[2][0] == phibar(1, 3) and th[2][1] == -phibar(0, 3)
    samples = [catalog(nm) for nm in CATALOG_NAMES] + [random_two_step(4, 2, s) for s in range(20)]
    for S in samples:
        expected = chern_connection_form(S) + gamma(chern_torsion(S))
        assert bismut_connection_form(S).allclose(expected, 1e-12)


def test_connection_D_examples():
    for nm in CATALOG_NAMES:
        S = catalog(nm)
        assert connection_form_D(S, (1, 0)).allclose(chern_connection_form(S))
    S = catalog("iwasawa")
    assert connection_form_D(S, (-1, 0)).allclose(bismut_connection_form(S))
    kt = catalog("kodaira_thurston")
    D = connection_form_D(kt, (0, 1))
    assert D.kind == "levicivita_block"
    assert D.entry(1, 0) == -0.5 * phi(0, 2)
    assert D.entry(1, 0) == -phi(0, 2) + 0.5 * gamma(chern_torsion(kt)).entry(1, 0)
    assert connection_form_D(kt, (1, 0)).beta is None


def test_affine_in_t(rng):
    S = random_two_step(3, 1, 4)
    g = gamma(chern_torsion(S))
    for _ in range(10):
        (r1, s1), (r2, s2) = rng.uniform(-3, 3, (2, 2))
        a, b = connection_form_D(S, (r1, s1)), connection_form_D(S, (r2, s2))
        assert (b - a).allclose(g.scaled(b.params.t - a.params.t), 1e-12)


def test_kahler_collapse():
    S = catalog("hyperbolic_plane")
    base = chern_connection_form(S)
    for r, s in NAMED_POINTS.values():
        D = connection_form_D(S, (r, s))
        assert D.allclose(base)
        assert D.beta is None or not D.beta.any()


def test_entry_forms_match_arrays():
    S = random_two_step(3, 2, 8)
    D = connection_form_D(S, (0.5, -1))
    for i in range(3):
        for j in range(3):
            f = D.entry(i, j)
            for k in range(3):
                assert f.coefficient((k,)) == D.evaluate(i, j, k)
                assert f.coefficient((3 + k,)) == D.evaluate(i, j, k, barred=True)
    assert isinstance(D.entries[0][0], Form)
