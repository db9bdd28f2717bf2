"""Curvature of the canonical connections and the identities relating them.

Component convention: ``R[i, j, k, l]`` stores R_{i jbar k lbar}, the coefficient of
phi_i ^ phibar_j in the (1,1)-part of the curvature matrix entry Theta_{kl}.

Two structure-equation routes compute curvature from connection matrices:

* ``forms``: Form-valued matrices pushed through the exterior engine
  (differential, wedge, bidegree projection);
* ``tensor``: the same equations contracted directly on coefficient arrays.

Closed formulas in the structure constants and in the torsion are kept in
separate functions so every identity check compares independent code paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from hermitia import exterior
from hermitia.connections import (
    ConnectionMatrix,
    ConnectionParams,
    beta,
    bismut_connection_form,
    chern_connection_form,
    connection_form_D,
    connection_params,
)
from hermitia.exterior import Form
from hermitia.lie_hermitian import (
    DEFAULT_TOL,
    StructureConstants,
    TorsionTensor,
    chern_torsion,
    require_valid,
)


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    n: int
    kind: str
    R: np.ndarray
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        R = np.array(self.R, dtype=complex)
        if R.shape != (self.n,) * 4:
            raise ValueError(f"curvature must have shape {(self.n,) * 4}")
        R.setflags(write=False)
        object.__setattr__(self, "R", R)

    def hermitian_defect(self) -> float:
        """max |R_{i jbar k lbar} - conj(R_{j ibar l kbar})|."""
        return float(np.abs(self.R - self.R.conj().transpose(1, 0, 3, 2)).max(initial=0.0))

    def component(self, i: int, j: int, k: int, l: int) -> complex:
        """1-based accessor R_{i jbar k lbar}."""
        return complex(self.R[i - 1, j - 1, k - 1, l - 1])

    def max_abs(self) -> float:
        return float(np.abs(self.R).max(initial=0.0))


@dataclass(frozen=True, eq=False)
class TorsionDerivatives:
    """Covariant derivatives of the Chern torsion, indexed [j, i, k, l].

    ``hol[j, i, k, l]`` is T^j_{ik} differentiated along e_l and ``antihol`` along ebar_l;
    ``which`` names the connection (comma: chern, semicolon: bismut).
    """

    which: str
    hol: np.ndarray
    antihol: np.ndarray

    def max_abs(self) -> float:
        return float(max(np.abs(self.hol).max(initial=0.0), np.abs(self.antihol).max(initial=0.0)))


@dataclass(frozen=True)
class VWTerms:
    w: complex
    v_ji: complex
    v_li: complex
    v_jk: complex
    v_lk: complex

    @property
    def v_hat(self) -> complex:
        return 0.25 * (self.v_ji + self.v_jk + self.v_li + self.v_lk)


@dataclass
class IdentityReport:
    residuals: dict[str, float] = field(default_factory=dict)
    tol: float = DEFAULT_TOL

    def record(self, name: str, value: float) -> None:
        self.residuals[name] = max(self.residuals.get(name, 0.0), float(value))

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def ok(self) -> bool:
        return self.max_residual <= self.tol

    def merge(self, other: IdentityReport) -> None:
        for k, v in other.residuals.items():
            self.record(k, v)


def torsion_array(T) -> np.ndarray:
    return T.T if isinstance(T, TorsionTensor) else np.asarray(T, dtype=complex)


# ---------------------------------------------------------------------------
# structure-equation routes

def _theta_minus_thetawedge_forms(S: StructureConstants, conn: ConnectionMatrix) -> list[list[Form]]:
    """Theta = d theta - theta ^ theta - conj(s beta) ^ (s beta), entrywise as Forms."""
    n = S.n
    basis = exterior.basis_differentials(S)
    th = conn.entries
    b = conn.beta_entries()
    bbar = None if b is None else [[f.conj() for f in row] for row in b]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            f = exterior.differential(th[i][j], S, basis)
            for r in range(n):
                f = f - exterior.wedge(th[i][r], th[r][j])
                if b is not None:
                    f = f - exterior.wedge(bbar[i][r], b[r][j])
            row.append(f)
        out.append(row)
    return out


def _extract_11(theta: list[list[Form]], n: int) -> np.ndarray:
    R = np.zeros((n,) * 4, dtype=complex)
    for k in range(n):
        for l in range(n):
            f = theta[k][l]
            for i in range(n):
                for j in range(n):
                    R[i, j, k, l] = f.coefficient((i, n + j))
    return R


def _extract_20(theta: list[list[Form]], n: int, barred: bool) -> np.ndarray:
    """Antisymmetric coefficient array A[a, b, k, l] with sum_{a,b} A phi_a ^ phi_b = (2,0)-part."""
    off = n if barred else 0
    A = np.zeros((n,) * 4, dtype=complex)
    for k in range(n):
        for l in range(n):
            f = theta[k][l]
            for a in range(n):
                for b in range(n):
                    if a != b:
                        A[a, b, k, l] = 0.5 * f.coefficient((a + off, b + off))
    return A


def tensor_from_curvature_forms(theta: list[list[Form]], kind: str = "input") -> CurvatureTensor:
    """Read R_{i jbar k lbar} off a matrix of 2-forms Theta_{kl}."""
    n = len(theta)
    return CurvatureTensor(n, kind, _extract_11(theta, n))


def _curvature_arrays(S: StructureConstants, conn: ConnectionMatrix) -> np.ndarray:
    """(1,1)-components of the curvature of ``conn`` contracted on coefficient arrays."""
    P, Q, D = conn.P, conn.Q, S.D
    # d phi_m (1,1)-part: -conj(D^a_{mb}) phi_a ^ phibar_b ; d phibar_m (1,1)-part: D^b_{ma} phi_a ^ phibar_b
    R = -np.einsum("ijm,amb->abij", P, D.conj()) + np.einsum("ijm,bma->abij", Q, D)
    R -= np.einsum("ira,rjb->abij", P, Q) - np.einsum("irb,rja->abij", Q, P)
    if conn.beta is not None:
        # conj(beta_ir) ^ beta_rj, phibar_b ^ phi_a = -phi_a ^ phibar_b
        R += np.einsum("irb,rja->abij", conn.beta.conj(), conn.beta)
    return R


def _connection_for(S: StructureConstants, which: str) -> ConnectionMatrix:
    if which == "chern":
        return chern_connection_form(S)
    if which == "bismut":
        return bismut_connection_form(S)
    raise ValueError(f"unknown connection {which!r}; expected 'chern' or 'bismut'")


def curvature_from_structure(S: StructureConstants, which: str = "chern",
                             tol: float = DEFAULT_TOL) -> CurvatureTensor:
    """Chern or Bismut curvature from the structure equations via the exterior engine."""
    require_valid(S, tol)
    conn = _connection_for(S, which)
    theta = _theta_minus_thetawedge_forms(S, conn)
    extra = {}
    if which == "bismut":
        extra = {"R20": _extract_20(theta, S.n, False), "R02": _extract_20(theta, S.n, True)}
    return CurvatureTensor(S.n, which, _extract_11(theta, S.n), extra)


def curvature_D(S: StructureConstants, params: ConnectionParams | tuple, method: str = "forms",
                tol: float = DEFAULT_TOL) -> CurvatureTensor:
    """(1,1)-components of Theta_1^D = d theta^D - theta^D ^ theta^D - s^2 conj(beta) ^ beta."""
    if not isinstance(params, ConnectionParams):
        params = connection_params(*params)
    require_valid(S, tol)
    conn = connection_form_D(S, params)
    if method == "forms":
        R = _extract_11(_theta_minus_thetawedge_forms(S, conn), S.n)
    elif method == "tensor":
        R = _curvature_arrays(S, conn)
    else:
        raise ValueError(f"unknown method {method!r}")
    return CurvatureTensor(S.n, f"D(r={params.r:g}, s={params.s:g})", R, {"params": params})


def levicivita_curvature(S: StructureConstants, tol: float = DEFAULT_TOL):
    """Levi-Civita curvature blocks.

    Returns ``(R, Theta1, Theta2)``: the (1,1)-components R_{k lbar i jbar} of Theta_1,
    and the full Form-valued blocks Theta_1 = d theta_1 - theta_1 ^ theta_1 - conj(beta) ^ beta,
    Theta_2 = d beta - beta ^ theta_1 - conj(theta_1) ^ beta.
    """
    require_valid(S, tol)
    n = S.n
    conn = connection_form_D(S, (0, 1))
    theta1 = _theta_minus_thetawedge_forms(S, conn)
    basis = exterior.basis_differentials(S)
    th = conn.entries
    th_bar = [[f.conj() for f in row] for row in th]
    b = beta(chern_torsion(S)).entries
    theta2 = []
    for i in range(n):
        row = []
        for j in range(n):
            f = exterior.differential(b[i][j], S, basis)
            for r in range(n):
                f = f - exterior.wedge(b[i][r], th[r][j]) - exterior.wedge(th_bar[i][r], b[r][j])
            row.append(f)
        theta2.append(row)
    R = CurvatureTensor(n, "levicivita", _extract_11(theta1, n))
    return R, theta1, theta2


# ---------------------------------------------------------------------------
# closed formulas in the structure constants

def bismut_curvature_closed_form(S: StructureConstants) -> CurvatureTensor:
    """R^b_{k lbar i jbar} as a quadratic expression in C and D (sum over r)."""
    C, D = S.C, S.D
    Cc, Dc = C.conj(), D.conj()
    e = np.einsum
    R = (e("rik,rjl->klij", C, Cc) - e("jrk,irl->klij", C, Cc)
         - e("rik,rlj->klij", C, Dc) - e("rjl,rki->klij", Cc, D)
         + e("jir,krl->klij", C, Dc) - e("jkr,ilr->klij", C, Dc)
         + e("ijr,lrk->klij", Cc, D) - e("ilr,jkr->klij", Cc, D)
         - e("jri,krl->klij", D, Dc) - e("lrk,irj->klij", D, Dc)
         + e("rki,rlj->klij", D, Dc) - e("jkr,ilr->klij", D, Dc))
    return CurvatureTensor(S.n, "bismut", R)


def lie_symmetrized_bismut(S: StructureConstants) -> tuple[np.ndarray, np.ndarray]:
    """Closed forms for 4 Rhat^b_{k kbar i ibar} (matrix [k, i]) and Rhat^b_{i ibar i ibar}."""
    n = S.n
    C, D = S.C, S.D
    a2 = lambda z: np.sum(np.abs(z) ** 2)  # noqa: E731
    re = lambda z: 2 * np.real(np.sum(z))  # noqa: E731
    four = np.zeros((n, n))
    for k in range(n):
        for i in range(n):
            val = -(a2(C[i, :, k]) + a2(C[k, :, i]) + re(C[i, :, i] * C[k, :, k].conj()))
            val += re(C[i, i, :].conj() * (D[k, :, k] - D[k, k, :])
                      + C[k, k, :].conj() * (D[i, :, i] - D[i, i, :])
                      + C[i, k, :].conj() * (D[i, :, k] - D[i, k, :])
                      + C[k, i, :].conj() * (D[k, :, i] - D[k, i, :]))
            val -= 2 * (a2(D[i, :, k]) + a2(D[k, :, i]) + re(D[i, :, i] * D[k, :, k].conj()))
            val += a2(D[:, k, i]) + a2(D[:, i, k]) + re(D[:, i, k] * D[:, k, i].conj())
            val -= a2(D[i, k, :]) + a2(D[k, i, :]) + re(D[i, i, :] * D[k, k, :].conj())
            four[k, i] = val
    diag = np.array([
        -a2(C[i, :, i]) + re(C[i, i, :].conj() * (D[i, :, i] - D[i, i, :]))
        - 2 * a2(D[i, :, i]) + a2(D[:, i, i]) - a2(D[i, i, :])
        for i in range(n)])
    return four, diag


# ---------------------------------------------------------------------------
# torsion algebra

def vw_arrays(T) -> dict[str, np.ndarray]:
    """Full [i, j, k, l] arrays of w, v^j_i, v^l_i, v^j_k, v^l_k and v_hat."""
    T = torsion_array(T)
    Tc = T.conj()
    out = {
        "w": np.einsum("rik,rjl->ijkl", T, Tc),
        "v_ji": np.einsum("jir,klr->ijkl", T, Tc),
        "v_li": np.einsum("lir,kjr->ijkl", T, Tc),
        "v_jk": np.einsum("jkr,ilr->ijkl", T, Tc),
        "v_lk": np.einsum("lkr,ijr->ijkl", T, Tc),
    }
    out["v_hat"] = 0.25 * (out["v_ji"] + out["v_jk"] + out["v_li"] + out["v_lk"])
    return out


def vw_terms(T, i: int, j: int, k: int, l: int) -> VWTerms:
    """The quadratic torsion terms at one 0-based index tuple, summed explicitly over r."""
    T = torsion_array(T)
    n = T.shape[0]
    if not all(0 <= x < n for x in (i, j, k, l)):
        raise IndexError("index out of range")
    rng = range(n)
    return VWTerms(
        w=sum(T[r, i, k] * np.conj(T[r, j, l]) for r in rng),
        v_ji=sum(T[j, i, r] * np.conj(T[k, l, r]) for r in rng),
        v_li=sum(T[l, i, r] * np.conj(T[k, j, r]) for r in rng),
        v_jk=sum(T[j, k, r] * np.conj(T[i, l, r]) for r in rng),
        v_lk=sum(T[l, k, r] * np.conj(T[i, j, r]) for r in rng),
    )


def covariant_derivatives(T, conn: ConnectionMatrix, which: str = "custom") -> TorsionDerivatives:
    """Covariant derivative of a constant-component torsion tensor along e_l and ebar_l.

    T^j_{ik,X} = -sum_r theta_ir(X) T^j_{rk} - sum_r theta_kr(X) T^j_{ir} + sum_r theta_rj(X) T^r_{ik}
    """
    T = torsion_array(T)

    def along(A):
        return (-np.einsum("irl,jrk->jikl", A, T) - np.einsum("krl,jir->jikl", A, T)
                + np.einsum("rjl,rik->jikl", A, T))

    return TorsionDerivatives(which, along(conn.P), along(conn.Q))


def torsion_cov_derivatives(S: StructureConstants, which: str = "chern") -> TorsionDerivatives:
    return covariant_derivatives(chern_torsion(S), _connection_for(S, which), which)


def chern_minus_bismut_derivatives(T) -> tuple[np.ndarray, np.ndarray]:
    """Torsion quadratics for T_{,l} - T_{;l} and T_{,lbar} - T_{;lbar}, indexed [j, i, k, l]."""
    T = torsion_array(T)
    Tc = T.conj()
    hol = (np.einsum("jrk,ril->jikl", T, T) + np.einsum("jir,rkl->jikl", T, T)
           - np.einsum("rik,jrl->jikl", T, T))
    antihol = (-np.einsum("jrk,irl->jikl", T, Tc) - np.einsum("jir,krl->jikl", T, Tc)
               + np.einsum("rik,rjl->jikl", T, Tc))
    return hol, antihol


def check_btp(S: StructureConstants, tol: float = DEFAULT_TOL) -> bool:
    """Bismut torsion-parallel: every Bismut covariant derivative of the Chern torsion vanishes."""
    require_valid(S, tol)
    return torsion_cov_derivatives(S, "bismut").max_abs() <= tol


def check_flat(Rt: CurvatureTensor, tol: float = DEFAULT_TOL) -> bool:
    return Rt.max_abs() <= tol


def symmetrize(Rt: CurvatureTensor) -> CurvatureTensor:
    """Average over i <-> k and j <-> l."""
    R = Rt.R
    Rh = 0.25 * (R + R.transpose(2, 1, 0, 3) + R.transpose(0, 3, 2, 1) + R.transpose(2, 3, 0, 1))
    return CurvatureTensor(Rt.n, Rt.kind if Rt.kind.startswith("sym ") else f"sym {Rt.kind}", Rh)


# ---------------------------------------------------------------------------
# closed formulas in the torsion

def levicivita_minus_chern(T, chern_derivs: TorsionDerivatives) -> np.ndarray:
    """Levi-Civita (1,1)-curvature minus R^c, indexed [k, l, i, j] like R_{k lbar i jbar}."""
    T = torsion_array(T)
    Tc = T.conj()
    d = chern_derivs.antihol  # d[j, i, k, l] = T^j_{ik, lbar}
    out = -0.5 * np.einsum("jikl->klij", d) - 0.5 * np.einsum("ijlk->klij", d.conj())
    out += 0.25 * (np.einsum("rik,rjl->klij", T, Tc) - np.einsum("jkr,ilr->klij", T, Tc)
                   - np.einsum("lir,kjr->klij", T, Tc))
    return out


def bismut_minus_chern(T, chern_derivs: TorsionDerivatives) -> np.ndarray:
    """R^b - R^c, indexed [k, l, i, j]."""
    T = torsion_array(T)
    Tc = T.conj()
    d = chern_derivs.antihol
    out = -np.einsum("jikl->klij", d) - np.einsum("ijlk->klij", d.conj())
    out += np.einsum("rik,rjl->klij", T, Tc) - np.einsum("jkr,ilr->klij", T, Tc)
    return out


def curvature_D_from_chern(Rc: np.ndarray, T, bismut_antihol: np.ndarray, t: float, s: float) -> np.ndarray:
    """R^D assembled from R^c, Bismut derivatives of torsion and the torsion quadratics.

    R^D = R^c + t (T^l_{ik;jbar} + conj(T^k_{jl;ibar})) + (t^2 - 2t)(w - v^l_i)
          - t (v^j_i + v^l_k) - s^2/4 v^j_k
    """
    q = vw_arrays(T)
    d = bismut_antihol  # d[j, i, k, l] = T^j_{ik; lbar}
    deriv = np.einsum("likj->ijkl", d) + np.einsum("kjli->ijkl", d.conj())
    return (Rc + t * deriv + (t * t - 2 * t) * (q["w"] - q["v_li"])
            - t * (q["v_ji"] + q["v_lk"]) - 0.25 * s * s * q["v_jk"])


def bismut_from_chern(Rc: np.ndarray, T, bismut_antihol: np.ndarray) -> np.ndarray:
    """R^b - R^c = T^l_{ik;jbar} + conj(T^k_{jl;ibar}) + v^l_i - v^j_i - v^l_k - w."""
    q = vw_arrays(T)
    d = bismut_antihol
    return (Rc + np.einsum("likj->ijkl", d) + np.einsum("kjli->ijkl", d.conj())
            + q["v_li"] - q["v_ji"] - q["v_lk"] - q["w"])


def _maxdiff(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.abs(np.asarray(a) - np.asarray(b)).max(initial=0.0))


DEFAULT_GRID = ((1, 0), (-1, 0), (0, 1), (3, 0), (-1, 2), (1 / 3, -2), (0, 0), (-1 / 3, 0), (2, -1))


def verify_identities(S: StructureConstants, params_list: Iterable = DEFAULT_GRID,
                      tol: float = DEFAULT_TOL, method: str = "forms") -> IdentityReport:
    """Check every curvature/torsion identity by comparing independently computed sides.

    Residual names: ``bismut_closed_form``, ``torsion_derivs_hol``, ``torsion_derivs_antihol``,
    ``levicivita_vs_chern``, ``bismut_vs_chern``, ``D_from_chern``, ``bismut_from_chern``, ``lie_rhat_mixed``,
    ``lie_rhat_diagonal``, ``rhat_chern``, ``rhat_bismut``, ``hermitian``.
    """
    require_valid(S, tol)
    rep = IdentityReport(tol=tol)
    n = S.n
    T = chern_torsion(S)
    Rc = curvature_from_structure(S, "chern", tol)
    Rb = curvature_from_structure(S, "bismut", tol)
    Rlc, _, _ = levicivita_curvature(S, tol)
    Rb_closed = bismut_curvature_closed_form(S)
    rep.record("bismut_closed_form", _maxdiff(Rb.R, Rb_closed.R))

    dc = torsion_cov_derivatives(S, "chern")
    db = torsion_cov_derivatives(S, "bismut")
    q_hol, q_anti = chern_minus_bismut_derivatives(T)
    rep.record("torsion_derivs_hol", _maxdiff(dc.hol - db.hol, q_hol))
    rep.record("torsion_derivs_antihol", _maxdiff(dc.antihol - db.antihol, q_anti))

    # stored [i,j,k,l] = R_{i jbar k lbar} is already the [k,l,i,j] layout of R_{k lbar i jbar}
    rep.record("levicivita_vs_chern", _maxdiff(Rlc.R - Rc.R, levicivita_minus_chern(T, dc)))
    rep.record("bismut_vs_chern", _maxdiff(Rb.R - Rc.R, bismut_minus_chern(T, dc)))
    rep.record("bismut_from_chern", _maxdiff(Rb_closed.R, bismut_from_chern(Rc.R, T, db.antihol)))

    four, diag = lie_symmetrized_bismut(S)
    Rb_hat = symmetrize(Rb).R
    idx = np.arange(n)
    rep.record("lie_rhat_mixed", _maxdiff(4 * Rb_hat[idx[:, None], idx[:, None], idx[None, :], idx[None, :]], four))
    rep.record("lie_rhat_diagonal", _maxdiff(Rb_hat[idx, idx, idx, idx], diag))

    v_hat = vw_arrays(T)["v_hat"]
    Rc_hat = symmetrize(Rc).R
    for tensor in (Rc, Rb, Rlc):
        rep.record("hermitian", tensor.hermitian_defect())
    for p in params_list:
        params = p if isinstance(p, ConnectionParams) else connection_params(*p)
        RD = curvature_D(S, params, method, tol)
        t, s = params.t, params.s
        rep.record("hermitian", RD.hermitian_defect())
        rep.record("D_from_chern", _maxdiff(RD.R, curvature_D_from_chern(Rc.R, T, db.antihol, t, s)))
        RD_hat = symmetrize(RD).R
        kappa = t * t + s * s / 4
        rep.record("rhat_chern", _maxdiff(RD_hat, Rc_hat - kappa * v_hat))
        rep.record("rhat_bismut", _maxdiff(RD_hat, Rb_hat + (1 - kappa) * v_hat))
    return rep
