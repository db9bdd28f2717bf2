"""Holomorphic sectional curvature: evaluation, constancy tests and parameter scans."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hermitia.connections import NAMED_POINTS, ConnectionParams, connection_params, in_domain
from hermitia.curvature import CurvatureTensor, check_flat, curvature_D, symmetrize, torsion_array, vw_arrays
from hermitia.lie_hermitian import DEFAULT_TOL, StructureConstants, require_valid


@dataclass(frozen=True)
class HSCVerdict:
    constant: bool
    c: float | None
    max_residual: float
    witness: tuple[int, int, int, int] | None
    c_estimate: float = 0.0


def _tensor(Rt) -> np.ndarray:
    return Rt.R if isinstance(Rt, CurvatureTensor) else np.asarray(Rt, dtype=complex)


def hsc(Rt, X) -> float:
    """H(X) = R(X, Xbar, X, Xbar) / |X|^4."""
    R = _tensor(Rt)
    X = np.asarray(X, dtype=complex)
    norm2 = float(np.vdot(X, X).real)
    if norm2 == 0:
        raise ValueError("holomorphic sectional curvature needs a nonzero vector")
    Xc = X.conj()
    return float(np.einsum("ijkl,i,j,k,l->", R, X, Xc, X, Xc).real / norm2**2)


def sample_hsc(Rt, count: int = 1000, seed: int | None = 0) -> np.ndarray:
    """H at ``count`` random unit vectors (normalized complex standard normals)."""
    R = _tensor(Rt)
    n = R.shape[0]
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    Xc = X.conj()
    return np.einsum("ijkl,ai,aj,ak,al->a", R, X, Xc, X, Xc).real


def space_form_tensor(n: int, c: float) -> np.ndarray:
    """(c/2)(delta_ij delta_kl + delta_il delta_kj)."""
    I = np.eye(n)
    return 0.5 * c * (np.einsum("ij,kl->ijkl", I, I) + np.einsum("il,kj->ijkl", I, I))


def constancy_test(Rt, tol: float = DEFAULT_TOL) -> HSCVerdict:
    """H constant iff the symmetrization equals (c/2)(dd + dd); c from the diagonal mean."""
    R = _tensor(Rt)
    n = R.shape[0]
    if n == 0:
        return HSCVerdict(True, 0.0, 0.0, None)
    Rh = symmetrize(CurvatureTensor(n, "input", R)).R
    idx = np.arange(n)
    c = float(np.mean(Rh[idx, idx, idx, idx].real))
    dev = np.abs(Rh - space_form_tensor(n, c))
    worst = np.unravel_index(np.argmax(dev), dev.shape)
    res = float(dev[worst])
    constant = res <= tol
    witness = None if constant else tuple(int(x) + 1 for x in worst)
    return HSCVerdict(constant, c if constant else None, res, witness, c)


def chen_nie_value(r: float, s: float) -> float:
    return (1 - r + r * s) ** 2 + s * s - 4


def chen_nie_membership(r: float, s: float, tol: float = DEFAULT_TOL) -> bool:
    """(r, s) on the curve (1 - r + rs)^2 + s^2 = 4, i.e. t^2 + s^2/4 = 1."""
    return abs(chen_nie_value(r, s)) <= tol


@dataclass(frozen=True)
class ScanRow:
    r: float
    s: float
    t: float
    on_chen_nie: bool
    hsc: HSCVerdict
    flat: bool


def parameter_grid(r_range=(-4.0, 4.0), s_range=(-3.0, 3.0), step: float = 0.1,
                   include_named: bool = True) -> list[tuple[float, float]]:
    """Grid points in the admissible domain plus named special points, sorted r-major."""
    nr = int(round((r_range[1] - r_range[0]) / step)) + 1
    ns = int(round((s_range[1] - s_range[0]) / step)) + 1
    rs = np.round(r_range[0] + step * np.arange(nr), 12)
    ss = np.round(s_range[0] + step * np.arange(ns), 12)
    pts = {(float(r), float(s)) for r in rs for s in ss}
    if include_named:
        pts.update((float(r), float(s)) for r, s in NAMED_POINTS.values())
    # dedupe points that only differ by rounding (e.g. 1/3 vs 0.3333...)
    out: list[tuple[float, float]] = []
    for p in sorted(pts):
        if not in_domain(*p):
            continue
        if out and abs(out[-1][0] - p[0]) < 1e-9 and abs(out[-1][1] - p[1]) < 1e-9:
            continue
        out.append(p)
    return out


def curvature_polynomial(S: StructureConstants, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, ...]:
    """(A, B, Q, E) with R^D = A + t B + t^2 Q + s^2 E.

    The connection form is theta + t gamma and the conjugate block contributes
    s^2 conj(beta) ^ beta, so R^D is exactly this polynomial; it is fitted from the
    tensor route at t in {0, 1, -1} (s = 0) and (t, s) = (0, 2).
    """
    R = {rs: curvature_D(S, rs, method="tensor", tol=tol).R for rs in [(1, 0), (-1, 0), (3, 0), (-1, 2)]}
    A = R[(1, 0)]
    B = 0.5 * (R[(-1, 0)] - R[(3, 0)])
    Q = 0.5 * (R[(-1, 0)] + R[(3, 0)]) - A
    E = 0.25 * (R[(-1, 2)] - A)
    return A, B, Q, E


def scan_parameters(S: StructureConstants, r_range=(-4.0, 4.0), s_range=(-3.0, 3.0), step: float = 0.1,
                    tol: float = DEFAULT_TOL, include_named: bool = True) -> list[ScanRow]:
    """Constancy and flatness of D^r_s over a grid of the admissible domain."""
    require_valid(S, tol)
    A, B, Q, E = curvature_polynomial(S, tol)
    rows = []
    for r, s in parameter_grid(r_range, s_range, step, include_named):
        params = connection_params(r, s)
        t = params.t
        RD = CurvatureTensor(S.n, "D", A + t * B + t * t * Q + s * s * E)
        rows.append(ScanRow(r, s, t, chen_nie_membership(r, s, tol),
                            constancy_test(RD, tol), check_flat(RD, tol)))
    return rows


# ---------------------------------------------------------------------------
# Bismut curvature forced by constant holomorphic sectional curvature (BTP case)

def _kappa(params: ConnectionParams) -> float:
    return params.t**2 + params.s**2 / 4


def predict_rb_tensor(T, params: ConnectionParams | tuple, c: float) -> np.ndarray:
    """R^b of a BTP metric whose D^r_s has constant HSC c, indexed [i, j, k, l].

    R^b = (c/2)(dd + dd) - w/2 + (kappa - 3)/4 (v^j_i + v^l_k) + (kappa + 1)/4 (v^l_i + v^j_k),
    kappa = t^2 + s^2/4.
    """
    if not isinstance(params, ConnectionParams):
        params = connection_params(*params)
    q = vw_arrays(T)
    k = _kappa(params)
    n = q["w"].shape[0]
    return (space_form_tensor(n, c) - 0.5 * q["w"] + 0.25 * (k - 3) * (q["v_ji"] + q["v_lk"])
            + 0.25 * (k + 1) * (q["v_li"] + q["v_jk"]))


def predict_rb_under_constancy(T, params, c: float, i: int, j: int, k: int, l: int) -> complex:
    """Single component (0-based indices) of :func:`predict_rb_tensor`."""
    return complex(predict_rb_tensor(T, params, c)[i, j, k, l])


def predict_rb_diagonal(T, params, c: float, i: int, k: int) -> float:
    """R^b_{i ibar k kbar} via the explicit diagonal sum (0-based indices)."""
    if not isinstance(params, ConnectionParams):
        params = connection_params(*params)
    T = torsion_array(T)
    kap = _kappa(params)
    return float(
        0.5 * c * (1 + (i == k))
        - 0.5 * np.sum(np.abs(T[:, i, k]) ** 2)
        + 0.5 * (kap - 3) * np.real(np.sum(T[i, i, :] * T[k, k, :].conj()))
        + 0.25 * (kap + 1) * np.sum(np.abs(T[i, k, :]) ** 2 + np.abs(T[k, i, :]) ** 2))


@dataclass(frozen=True)
class FeasibleSet:
    """Outcome of the non-balanced BTP constraint: c and the curve (r, s) must lie on."""

    balanced: bool
    c: float | None
    kappa_forced: bool
    constraint: str | None

    def contains(self, r: float, s: float, tol: float = DEFAULT_TOL) -> bool:
        if not in_domain(r, s):
            return False
        if not self.kappa_forced:
            return True
        return chen_nie_membership(r, s, tol)


def nonbalanced_btp_feasible_params(a, lam: float | None = None, tol: float = DEFAULT_TOL) -> FeasibleSet:
    """Constraints on (c, r, s) for a BTP metric in an admissible frame.

    ``a`` holds a_1..a_{n-1} with T^j_{in} = delta_ij a_i (a_n = 0).  The equations
    0 = c/2 (1 + delta_in) + (kappa - 1) |a_i|^2 / 4 are linear in (c, kappa - 1).
    """
    a = np.append(np.asarray(a, dtype=complex), 0)
    if lam is not None and abs(np.sum(a) - lam) > tol:
        raise ValueError(f"a_1 + ... + a_(n-1) = {np.sum(a)} does not equal lambda = {lam}")
    n = a.size
    A = np.column_stack([0.5 * (1 + (np.arange(n) == n - 1)), 0.25 * np.abs(a) ** 2])
    rank = np.linalg.matrix_rank(A, tol=tol)
    if rank < 2:
        # only c is determined; nothing forces (r, s)
        return FeasibleSet(True, 0.0, False, None)
    # homogeneous full-rank system: the unique solution is c = 0, kappa - 1 = 0
    sol = np.linalg.lstsq(A, np.zeros(n), rcond=None)[0]
    return FeasibleSet(False, float(sol[0]) + 0.0, True, "t^2 + s^2/4 = 1")
