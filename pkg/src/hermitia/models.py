"""Closed-form curvature models evaluated pointwise.

* The standard (isosceles) Hopf manifold, evaluated at a point z of C^n \\ {0}
  in the frame e_i = |z| d/dz_i.
* Bismut curvature patterns of balanced BTP threefolds in a special frame, and
  the arithmetic deciding whether D^r_s can have constant holomorphic
  sectional curvature on them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from hermitia import exterior
from hermitia.analysis import HSCVerdict, chen_nie_membership, constancy_test, predict_rb_tensor
from hermitia.connections import ConnectionParams, connection_params, in_domain
from hermitia.curvature import (
    CurvatureTensor,
    curvature_D_from_chern,
    curvature_from_structure,
    symmetrize,
    tensor_from_curvature_forms,
)
from hermitia.lie_hermitian import DEFAULT_TOL, TorsionTensor, catalog


def _params(params) -> ConnectionParams:
    return params if isinstance(params, ConnectionParams) else connection_params(*params)


# ---------------------------------------------------------------------------
# Hopf manifold

@dataclass(frozen=True, eq=False)
class HopfPoint:
    """A point z of C^n \\ {0}; ``multipliers`` only label the quotient."""

    n: int
    z: np.ndarray
    multipliers: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        z = np.array(self.z, dtype=complex).reshape(-1)
        if self.n < 2:
            raise ValueError(f"Hopf manifolds need n >= 2, got {self.n}")
        if z.size != self.n:
            raise ValueError(f"z has {z.size} entries, expected {self.n}")
        if np.linalg.norm(z) == 0:
            raise ValueError("z must be nonzero")
        z.setflags(write=False)
        object.__setattr__(self, "z", z)

    @classmethod
    def at(cls, z) -> HopfPoint:
        z = np.asarray(z, dtype=complex).reshape(-1)
        return cls(z.size, z)


def _b_tensors(pt: HopfPoint) -> dict[str, np.ndarray]:
    z = pt.z
    B = np.outer(z.conj(), z) / np.vdot(z, z).real  # B[i, j] = conj(z_i) z_j / |z|^2
    I = np.eye(pt.n)
    return {
        "ij": np.einsum("ij,kl->ijkl", B, I),
        "il": np.einsum("il,kj->ijkl", B, I),
        "kj": np.einsum("kj,il->ijkl", B, I),
        "kl": np.einsum("kl,ij->ijkl", B, I),
    }


def _deltas(n: int) -> tuple[np.ndarray, np.ndarray]:
    I = np.eye(n)
    return np.einsum("ij,kl->ijkl", I, I), np.einsum("il,kj->ijkl", I, I)


def hopf_torsion(pt: HopfPoint) -> TorsionTensor:
    """T^j_{ik} = conj(z_k)/|z| delta_ij - conj(z_i)/|z| delta_kj."""
    u = pt.z.conj() / np.linalg.norm(pt.z)
    I = np.eye(pt.n)
    T = np.einsum("ji,k->jik", I, u) - np.einsum("jk,i->jik", I, u)
    return TorsionTensor(pt.n, T)


def hopf_chern_curvature(pt: HopfPoint) -> CurvatureTensor:
    """R^c_{i jbar k lbar} = delta_ij delta_kl - conj(z_i) z_j delta_kl / |z|^2."""
    dd, _ = _deltas(pt.n)
    return CurvatureTensor(pt.n, "chern", dd - _b_tensors(pt)["ij"])


def hopf_curvature_D(pt: HopfPoint, params) -> CurvatureTensor:
    p = _params(params)
    t, s2 = p.t, p.s**2 / 4
    b = _b_tensors(pt)
    dd, dx = _deltas(pt.n)
    R = ((1 - 2 * t) * dd + (2 * t - t * t - s2) * dx + (2 * t - 1) * b["ij"]
         + (t * t - s2) * b["kl"] + (s2 - t) * (b["il"] + b["kj"]))
    return CurvatureTensor(pt.n, "D", R, {"params": p})


def hopf_curvature_D_assembled(pt: HopfPoint, params) -> CurvatureTensor:
    """R^D from the Chern curvature and torsion; the Hopf metric is Bismut torsion-parallel."""
    p = _params(params)
    zero = np.zeros((pt.n,) * 4, dtype=complex)
    R = curvature_D_from_chern(hopf_chern_curvature(pt).R, hopf_torsion(pt), zero, p.t, p.s)
    return CurvatureTensor(pt.n, "D", R, {"params": p})


@dataclass(frozen=True)
class HopfHSCReport:
    verdict: HSCVerdict
    on_chen_nie: bool
    kappa: float
    witness_value: float  # Rhat^D_{1 1bar 1 1bar} = (1 - kappa)(1 - |z_1|^2 / |z|^2)


def hopf_hsc_report(pt: HopfPoint, params, tol: float = DEFAULT_TOL) -> HopfHSCReport:
    """Constancy of H for D^r_s at ``pt``; Rhat^D = (1 - t^2 - s^2/4) Rhat^c."""
    p = _params(params)
    RD = hopf_curvature_D(pt, p)
    kappa = p.t**2 + p.s**2 / 4
    witness = float(symmetrize(RD).R[0, 0, 0, 0].real)
    return HopfHSCReport(constancy_test(RD, tol), chen_nie_membership(p.r, p.s, tol), kappa, witness)


def _hopf_coefficients(t, s):
    s2 = s**2 / 4
    return (1 - 2 * t, 2 * t - t**2 - s2, 2 * t - 1, t**2 - s2, s2 - t)


def _hopf_shape_matrix(n: int) -> sympy.Matrix:
    """Exact matrix whose columns are the five tensor shapes, stacked over sample points z."""
    samples = [[1] + [0] * (n - 1), [0] * (n - 1) + [1], list(range(1, n + 1)),
               [sympy.I] + [1 - sympy.I * m for m in range(1, n)]]
    rows = []
    idx = [(i, j, k, l) for i in range(n) for j in range(n) for k in range(n) for l in range(n)]
    for z in samples:
        z = [sympy.nsimplify(x) for x in z]
        norm2 = sum(x * sympy.conjugate(x) for x in z)

        def b(a, c):
            return sympy.conjugate(z[a]) * z[c] / norm2

        for i, j, k, l in idx:
            d = lambda a, c: 1 if a == c else 0  # noqa: E731
            rows.append([d(i, j) * d(k, l), d(i, l) * d(k, j), b(i, j) * d(k, l), b(k, l) * d(i, j),
                         b(i, l) * d(k, j) + b(k, j) * d(i, l)])
    return sympy.Matrix(rows)


@lru_cache(maxsize=None)
def hopf_flat_params(n: int) -> frozenset[tuple[Fraction, Fraction]]:
    """All (r, s) in the admissible domain with D^r_s flat on the n-dimensional Hopf manifold.

    R^D is a combination of five tensor shapes with coefficients polynomial in
    (t, s).  Linear relations among the shapes (present only for n = 2) are found
    exactly, the remaining coefficient combinations are set to zero and solved.
    """
    if n < 2:
        raise ValueError(f"Hopf manifolds need n >= 2, got {n}")
    M = _hopf_shape_matrix(n)
    # independent combinations of the coefficients that must vanish
    eqs_basis = M.rref()[0]
    t, s = sympy.symbols("t s", real=True)
    coeffs = sympy.Matrix(_hopf_coefficients(t, s))
    equations = [sympy.expand((eqs_basis.row(m) * coeffs)[0]) for m in range(eqs_basis.rows)]
    equations = [e for e in equations if e != 0]
    solutions = sympy.solve(equations, [t, s], dict=True)
    out = set()
    for sol in solutions:
        if set(sol) != {t, s}:
            raise RuntimeError(f"flat locus is not a finite set: {sol}")
        if not (sol[t].is_rational and sol[s].is_rational):
            raise RuntimeError(f"irrational flat parameters: {sol}")
        tv, sv = sympy.Rational(sol[t]), sympy.Rational(sol[s])
        if sv == 1:
            r_candidates = [sympy.Integer(0)] if tv == sympy.Rational(1, 2) else []
        else:
            r_candidates = [(2 * tv - 1) / (sv - 1)]
        for rv in r_candidates:
            if in_domain(float(rv), float(sv)):
                out.add((Fraction(int(rv.p), int(rv.q)), Fraction(int(sv.p), int(sv.q))))
    return frozenset(out)


# ---------------------------------------------------------------------------
# balanced BTP threefold patterns

def _pp(i: int, j: int) -> exterior.Form:
    """phi_i ^ phibar_j on n = 3 (1-based)."""
    return exterior.phi(i - 1, 3) ^ exterior.phibar(j - 1, 3)


@dataclass(frozen=True)
class WallachPattern:
    b: float
    p: complex
    q: complex


@dataclass(frozen=True)
class MiddleTypePattern:
    x: float
    y: float


def wallach_forms(bp: WallachPattern) -> list[list[exterior.Form]]:
    b, p, q = bp.b, complex(bp.p), complex(bp.q)
    pc = p.conjugate()
    alpha = _pp(1, 1) + (1 - b) * _pp(2, 2) + b * _pp(3, 3) + p * _pp(2, 3) + pc * _pp(3, 2)
    beta = _pp(1, 1) + b * _pp(2, 2) + (1 - b) * _pp(3, 3) - p * _pp(2, 3) - pc * _pp(3, 2)
    sigma = p * _pp(2, 2) - p * _pp(3, 3) + q * _pp(2, 3) + (1 + b) * _pp(3, 2)
    zero = exterior.Form.zero(3)
    return [[alpha + beta, zero, zero], [zero, alpha, sigma], [zero, -sigma.conj(), beta]]


def wallach_rb(bp: WallachPattern) -> CurvatureTensor:
    return tensor_from_curvature_forms(wallach_forms(bp), "bismut")


def middle_type_forms(mp: MiddleTypePattern) -> list[list[exterior.Form]]:
    x, y = mp.x, mp.y
    da = x * (_pp(1, 1) + _pp(2, 2)) + 1j * y * (_pp(2, 1) - _pp(1, 2))
    db0 = -1j * y * (_pp(1, 1) + _pp(2, 2)) + (x - 2) * (_pp(2, 1) - _pp(1, 2))
    zero = exterior.Form.zero(3)
    return [[da, db0, zero], [-db0, da, zero], [zero, zero, zero]]


def middle_type_rb(mp: MiddleTypePattern) -> CurvatureTensor:
    return tensor_from_curvature_forms(middle_type_forms(mp), "bismut")


def special_frame_torsion(a1: float, a2: float, a3: float) -> TorsionTensor:
    """T^i_{jk} = a_i for (ijk) a cyclic permutation of (123), antisymmetric in (j, k)."""
    T = np.zeros((3, 3, 3), dtype=complex)
    for (i, j, k), a in zip([(0, 1, 2), (1, 2, 0), (2, 0, 1)], (a1, a2, a3)):
        T[i, j, k], T[i, k, j] = a, -a
    return TorsionTensor(3, T)


BTP3_CASES = ("rank3", "wallach", "middle")


def _case_setup(case: str, lam: float):
    """Torsion, unknown names and an affine pattern map u -> R^b for one case."""
    if case == "rank3":
        Rb = curvature_from_structure(catalog("so3c", lam=lam), "bismut").R
        return special_frame_torsion(lam, lam, lam), (), lambda u: Rb
    if case == "wallach":
        def pattern(u):
            return wallach_rb(WallachPattern(u[0], complex(u[1], u[2]), complex(u[3], u[4]))).R
        return special_frame_torsion(lam, 0, 0), ("b", "re_p", "im_p", "re_q", "im_q"), pattern
    if case == "middle":
        def pattern(u):
            return middle_type_rb(MiddleTypePattern(u[0], u[1])).R
        return special_frame_torsion(lam, lam, 0), ("x", "y"), pattern
    raise ValueError(f"unknown case {case!r}; expected one of {BTP3_CASES}")


# proof order: (component used, unknown it determines), then the component checked
_CHAINS = {
    "rank3": ([((0, 0, 0, 0), "c")], (0, 0, 1, 1)),
    "wallach": ([((0, 0, 0, 0), "c"), ((1, 1, 1, 1), "b")], (0, 0, 1, 1)),
    "middle": ([((2, 2, 2, 2), "c"), ((0, 0, 0, 0), "x")], (0, 0, 1, 1)),
}

_EQUATIONS = {
    "rank3": "R^b_{1 1bar 2 2bar} = c/2 + (t^2 + s^2/4) lambda^2 / 2",
    "wallach": "1 = c/2 + (t^2 + s^2/4 + 1) lambda^2 / 4",
    "middle": "0 = (t^2 + s^2/4 + 1) lambda^2 / 2",
}


@dataclass(frozen=True)
class BTP3Verdict:
    case: str
    r: float
    s: float
    t: float
    consistent: bool
    c: float | None
    unknowns: dict
    equation: str
    component: tuple[int, int, int, int]  # 1-based
    pattern_value: float
    predicted_value: float
    value: float  # predicted minus pattern at ``component``
    lsq_residual: float

    @property
    def status(self) -> str:
        return "consistent" if self.consistent else "infeasible"


def btp3_constancy_analysis(case: str, params, lam: float = 1.0, tol: float = DEFAULT_TOL) -> BTP3Verdict:
    """Can D^r_s have constant HSC on a balanced BTP threefold of the given type?

    The Bismut curvature forced by constancy is affine in c; the pattern is
    affine in its free parameters.  Both a step-by-step elimination along the
    diagonal components and a least-squares fit over all components are run;
    the verdict comes from the least-squares residual.
    """
    p = _params(params)
    T, names, pattern = _case_setup(case, lam)
    all_names = ("c",) + names
    m = len(all_names)

    def mismatch(z):
        return predict_rb_tensor(T, p, z[0]) - pattern(z[1:])

    z0 = np.zeros(m)
    F0 = mismatch(z0)
    cols = []
    for a in range(m):
        e = np.zeros(m)
        e[a] = 1
        cols.append((mismatch(e) - F0).reshape(-1))
    A = np.column_stack(cols)
    A_real = np.vstack([A.real, A.imag])
    rhs = -np.concatenate([F0.reshape(-1).real, F0.reshape(-1).imag])
    sol = np.linalg.lstsq(A_real, rhs, rcond=None)[0]
    lsq = float(np.abs(A_real @ sol - rhs).max(initial=0.0))

    # elimination in the order the diagonal components determine the unknowns
    z = np.zeros(m)
    steps, check = _CHAINS[case]
    for comp, name in steps:
        a = all_names.index(name)
        f0 = mismatch(z)[comp].real
        e = z.copy()
        e[a] += 1
        slope = mismatch(e)[comp].real - f0
        z[a] -= f0 / slope
    pred = float(predict_rb_tensor(T, p, z[0])[check].real)
    pat = float(pattern(z[1:])[check].real)
    consistent = lsq <= tol
    return BTP3Verdict(
        case=case, r=p.r, s=p.s, t=p.t, consistent=consistent,
        c=float(sol[0]) + 0.0 if consistent else None,
        unknowns={nm: float(v) + 0.0 for nm, v in zip(all_names, z)},
        equation=_EQUATIONS[case], component=tuple(i + 1 for i in check),
        pattern_value=pat, predicted_value=pred, value=pred - pat, lsq_residual=lsq)
