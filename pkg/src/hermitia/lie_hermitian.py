"""Structure constants of Lie-Hermitian algebras under a unitary frame.

Array layout (0-based, upper index first)::

    C[k, i, j] = C^k_{ij}     [e_i, e_j]    = sum_k C^k_{ij} e_k
    D[j, i, k] = D^j_{ik}     [e_i, ebar_j] = sum_k (conj(D^i_{kj}) e_k - D^j_{ki} ebar_k)
    T[j, i, k] = T^j_{ik}     Chern torsion,  T^j_{ik} = -C^j_{ik} - D^j_{ik} + D^j_{ki}

The Hermitian metric is the one making the frame unitary; it is never stored.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from hermitia import exterior
from hermitia.errors import AlgebraFileError, InconsistentEquation, InvalidStructure

DEFAULT_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StructureConstants:
    n: int
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        n = int(self.n)
        C = np.asarray(self.C, dtype=complex)
        D = np.asarray(self.D, dtype=complex)
        if C.shape != (n, n, n) or D.shape != (n, n, n):
            raise ValueError(f"C and D must have shape {(n, n, n)}, got {C.shape}, {D.shape}")
        if not np.allclose(C, -C.transpose(0, 2, 1), atol=1e-12, rtol=0):
            raise ValueError("C^k_{ij} must be antisymmetric in (i, j)")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "C", _frozen(0.5 * (C - C.transpose(0, 2, 1))))
        object.__setattr__(self, "D", _frozen(D))

    @classmethod
    def zeros(cls, n: int) -> StructureConstants:
        return cls(n, np.zeros((n, n, n)), np.zeros((n, n, n)))

    def with_entries(self, C: dict | None = None, D: dict | None = None) -> StructureConstants:
        """Copy with entries set from 1-based ``{(upper, i, j): value}`` dicts.

        C entries are completed antisymmetrically.
        """
        Cn, Dn = np.array(self.C), np.array(self.D)
        for (k, i, j), v in (C or {}).items():
            Cn[k - 1, i - 1, j - 1] = v
            Cn[k - 1, j - 1, i - 1] = -v
        for (j, i, k), v in (D or {}).items():
            Dn[j - 1, i - 1, k - 1] = v
        return StructureConstants(self.n, Cn, Dn)

    def allclose(self, other: StructureConstants, tol: float = 1e-12) -> bool:
        return (self.n == other.n and np.allclose(self.C, other.C, atol=tol, rtol=0)
                and np.allclose(self.D, other.D, atol=tol, rtol=0))


@dataclass(frozen=True, eq=False)
class TorsionTensor:
    n: int
    T: np.ndarray

    def __post_init__(self):
        T = np.asarray(self.T, dtype=complex)
        if T.shape != (self.n,) * 3:
            raise ValueError(f"torsion must have shape {(self.n,) * 3}")
        object.__setattr__(self, "T", _frozen(T))

    def norm2(self) -> float:
        """sum_{i,k,j} |T^j_{ik}|^2."""
        return float(np.sum(np.abs(self.T) ** 2))


@dataclass(frozen=True)
class ValidationReport:
    antisymmetry_ok: bool
    jacobi_residuals: tuple[float, float, float]
    ok: bool
    tol: float
    worst: tuple[int, int, int, int] | None = field(default=None, compare=False)


# ---------------------------------------------------------------------------
# validation

def jacobi_tensors(S: StructureConstants) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three first-Bianchi/Jacobi expressions, each indexed [i, j, k, l]."""
    C, D = S.C, S.D
    Dc = D.conj()
    J1 = (np.einsum("rij,lrk->ijkl", C, C) + np.einsum("rjk,lri->ijkl", C, C)
          + np.einsum("rki,lrj->ijkl", C, C))
    J2 = (np.einsum("rik,ljr->ijkl", C, D) + np.einsum("rji,lrk->ijkl", D, D)
          - np.einsum("rjk,lri->ijkl", D, D))
    J3 = (np.einsum("rik,rjl->ijkl", C, Dc) - np.einsum("jrk,irl->ijkl", C, Dc)
          + np.einsum("jri,krl->ijkl", C, Dc) - np.einsum("lri,kjr->ijkl", D, Dc)
          + np.einsum("lrk,ijr->ijkl", D, Dc))
    return J1, J2, J3


def validate(S: StructureConstants, tol: float = DEFAULT_TOL) -> ValidationReport:
    antisym = bool(np.array_equal(S.C, -S.C.transpose(0, 2, 1)))
    residuals = []
    worst, worst_val = None, -1.0
    for J in jacobi_tensors(S):
        a = np.abs(J)
        m = float(a.max()) if a.size else 0.0
        residuals.append(m)
        if a.size and m > worst_val:
            worst_val = m
            worst = tuple(int(x) + 1 for x in np.unravel_index(np.argmax(a), a.shape))
    ok = antisym and all(r <= tol for r in residuals)
    return ValidationReport(antisym, tuple(residuals), ok, tol, None if ok else worst)


def require_valid(S: StructureConstants, tol: float = DEFAULT_TOL) -> None:
    rep = validate(S, tol)
    if not rep.ok:
        raise InvalidStructure(f"structure constants fail the Jacobi identity: {rep.jacobi_residuals}")


# ---------------------------------------------------------------------------
# complexified bracket, used for frame changes and as an independent Jacobi check

def complex_bracket(S: StructureConstants) -> np.ndarray:
    """Bracket table B[p, q, r] of g_C in the basis (e_1..e_n, ebar_1..ebar_n)."""
    n = S.n
    B = np.zeros((2 * n, 2 * n, 2 * n), dtype=complex)
    B[:n, :n, :n] = S.C.transpose(1, 2, 0)
    B[n:, n:, n:] = S.C.conj().transpose(1, 2, 0)
    # [e_i, ebar_j] = conj(D^i_{kj}) e_k - D^j_{ki} ebar_k
    B[:n, n:, :n] = S.D.conj().transpose(0, 2, 1)
    B[:n, n:, n:] = -S.D.transpose(2, 0, 1)
    B[n:, :n, :] = -B[:n, n:, :].transpose(1, 0, 2)
    return B


def bracket_jacobi_residual(B: np.ndarray) -> float:
    J = (np.einsum("pqm,mrs->pqrs", B, B) + np.einsum("qrm,mps->pqrs", B, B)
         + np.einsum("rpm,mqs->pqrs", B, B))
    return float(np.abs(J).max()) if J.size else 0.0


def from_complex_bracket(B: np.ndarray, tol: float = 1e-10) -> StructureConstants:
    m = B.shape[0]
    if m % 2:
        raise ValueError("bracket table must have even size")
    n = m // 2
    if n and np.abs(B[:n, :n, n:]).max() > tol:
        raise InvalidStructure("complex structure not integrable: [g10, g10] leaves g10")
    C = B[:n, :n, :n].transpose(2, 0, 1)
    # D^a_{bc} = -(ebar_b component of [e_c, ebar_a])
    D = -B[:n, n:, n:].transpose(1, 2, 0)
    return StructureConstants(n, C, D)


def from_real_lie_algebra(brackets: np.ndarray, frame: np.ndarray, inner: np.ndarray | None = None,
                          tol: float = 1e-10) -> StructureConstants:
    """Structure constants from a real Lie algebra with complex structure.

    ``brackets[a, b, c]`` gives [v_a, v_b] = sum_c brackets[a, b, c] v_c on a real basis,
    ``frame[i, a]`` expresses the (1,0)-vector e_i = sum_a frame[i, a] v_a, and
    ``inner`` is the Gram matrix of the real inner product (identity by default).
    """
    brackets = np.asarray(brackets, dtype=float)
    frame = np.asarray(frame, dtype=complex)
    n, m = frame.shape
    if m != 2 * n or brackets.shape != (m, m, m):
        raise ValueError("need 2n real basis vectors and an n x 2n frame")
    G = np.eye(m) if inner is None else np.asarray(inner, dtype=float)
    gram = frame @ G @ frame.conj().T
    if not np.allclose(gram, np.eye(n), atol=tol):
        raise ValueError("frame is not unitary for the given inner product")
    if not np.allclose(frame @ G @ frame.T, 0, atol=tol):
        raise ValueError("frame does not span an isotropic (1,0) subspace")
    E = np.vstack([frame, frame.conj()])
    B = np.einsum("pa,qb,abc,cr->pqr", E, E, brackets, np.linalg.inv(E))
    return from_complex_bracket(B, tol)


def change_frame(S: StructureConstants, U: np.ndarray, tol: float = 1e-10) -> StructureConstants:
    """Structure constants in the unitary frame e'_i = sum_j U_ij e_j."""
    U = np.asarray(U, dtype=complex)
    if U.shape != (S.n, S.n) or not np.allclose(U @ U.conj().T, np.eye(S.n), atol=tol):
        raise ValueError("frame change must be a unitary n x n matrix")
    n = S.n
    W = np.zeros((2 * n, 2 * n), dtype=complex)
    W[:n, :n] = U
    W[n:, n:] = U.conj()
    Winv = W.conj().T
    B = np.einsum("pa,qb,abc,cr->pqr", W, W, complex_bracket(S), Winv)
    return from_complex_bracket(B, max(tol, 1e-9))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def direct_sum(a: StructureConstants, b: StructureConstants) -> StructureConstants:
    n = a.n + b.n
    C = np.zeros((n, n, n), dtype=complex)
    D = np.zeros((n, n, n), dtype=complex)
    C[:a.n, :a.n, :a.n] = a.C
    C[a.n:, a.n:, a.n:] = b.C
    D[:a.n, :a.n, :a.n] = a.D
    D[a.n:, a.n:, a.n:] = b.D
    return StructureConstants(n, C, D)


# ---------------------------------------------------------------------------
# torsion and structural predicates

def chern_torsion(S: StructureConstants) -> TorsionTensor:
    return TorsionTensor(S.n, -S.C - S.D + S.D.transpose(0, 2, 1))


def check_nilpotent_J(S: StructureConstants, tol: float = 0.0) -> bool:
    """Strict triangularity: C^j_{ik} = 0 unless j > i and j > k; D^j_{ik} = 0 unless i > j and i > k."""
    for j, i, k in itertools.product(range(S.n), repeat=3):
        if abs(S.C[j, i, k]) > tol and not (j > i and j > k):
            return False
        if abs(S.D[j, i, k]) > tol and not (i > j and i > k):
            return False
    return True


def check_salamon(S: StructureConstants, tol: float = 0.0) -> bool:
    """C^j_{ik} = 0 unless j > i or j > k; D^j_{ik} = 0 unless i > j."""
    for j, i, k in itertools.product(range(S.n), repeat=3):
        if abs(S.C[j, i, k]) > tol and not (j > i or j > k):
            return False
        if abs(S.D[j, i, k]) > tol and not i > j:
            return False
    return True


def check_kahler(S: StructureConstants, tol: float = DEFAULT_TOL) -> bool:
    T = chern_torsion(S).T
    return bool(np.abs(T).max() <= tol) if T.size else True


def gauduchon_form(S: StructureConstants, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Coefficients eta_i of the (1,0)-form eta with d'(omega^{n-1}) = -eta ^ omega^{n-1}."""
    n = S.n
    if n <= 1:
        return np.zeros(n, dtype=complex)
    omega = exterior.kahler_form(n)
    power = omega
    for _ in range(n - 2):
        power = exterior.wedge(power, omega)
    rhs = exterior.bidegree_part(exterior.differential(power, S), n, n - 1)
    columns = [-exterior.wedge(exterior.phi(i, n), power) for i in range(n)]
    monos = sorted(set(rhs.terms).union(*(c.terms for c in columns)))
    A = np.array([[col.terms.get(m, 0j) for col in columns] for m in monos])
    b = np.array([rhs.terms.get(m, 0j) for m in monos])
    eta, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.abs(A @ eta - b).max(initial=0.0) > tol:
        raise InconsistentEquation("no (1,0)-form eta solves d'omega^{n-1} = -eta ^ omega^{n-1}")
    eta[np.abs(eta) < 1e-14] = 0
    return eta


def check_balanced(S: StructureConstants, tol: float = DEFAULT_TOL) -> bool:
    require_valid(S, tol)
    return bool(np.abs(gauduchon_form(S, tol)).max(initial=0.0) <= tol)


# ---------------------------------------------------------------------------
# catalog and generators

def _quaternion_brackets() -> np.ndarray:
    # basis 1, i, j, k; [i,j] = 2k, [j,k] = 2i, [k,i] = 2j
    c = np.zeros((4, 4, 4))
    for a, b, d in [(1, 2, 3), (2, 3, 1), (3, 1, 2)]:
        c[a, b, d] = 2.0
        c[b, a, d] = -2.0
    return c


def catalog(name: str, n: int | None = None, **params) -> StructureConstants:
    """Named Lie-Hermitian structures.

    ``abelian`` (any n), ``kodaira_thurston`` (n=2, D^1_{21} = -1),
    ``iwasawa`` (n=3, C^3_{12} = 1), ``so3c`` (n=3, the complex simple algebra
    with T^1_{23} = T^2_{31} = T^3_{12} = lam), ``hopf_surface`` (n=2, u(2) = R + su(2),
    scaled to match the standard Hopf metric), ``hyperbolic_plane`` (n=1, D^1_{11} = a),
    ``heis_product`` (n=3, Kodaira-Thurston times C).
    """
    if name == "abelian":
        return StructureConstants.zeros(2 if n is None else n)
    if name == "kodaira_thurston":
        return StructureConstants.zeros(2).with_entries(D={(1, 2, 1): -1})
    if name == "heis_product":
        return direct_sum(catalog("kodaira_thurston"), StructureConstants.zeros(1))
    if name == "iwasawa":
        return StructureConstants.zeros(3).with_entries(C={(3, 1, 2): 1})
    if name == "so3c":
        lam = params.get("lam", 1.0)
        return StructureConstants.zeros(3).with_entries(
            C={(1, 2, 3): -lam, (2, 3, 1): -lam, (3, 1, 2): -lam})
    if name == "hopf_surface":
        # H* = R_{>0} x SU(2) with J(x) = x.i; inner product 2 * Euclidean
        s = 1 / 2
        frame = np.array([[s, -1j * s, 0, 0], [0, 0, s, 1j * s]])
        return from_real_lie_algebra(_quaternion_brackets(), frame, inner=2 * np.eye(4))
    if name == "hyperbolic_plane":
        return StructureConstants.zeros(1).with_entries(D={(1, 1, 1): params.get("a", 1.0)})
    raise KeyError(f"unknown catalog entry {name!r}")


CATALOG_NAMES = ("abelian", "kodaira_thurston", "heis_product", "iwasawa", "so3c",
                 "hopf_surface", "hyperbolic_plane")


def random_two_step(n: int, m: int, seed: int | np.random.Generator | None = None) -> StructureConstants:
    """Random structure with phi_1..phi_m closed and d phi_i in the ideal of phi_1..phi_m, phibar_1..phibar_m.

    Always satisfies the Jacobi identity and has nilpotent J in the strict triangular frame.
    """
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    C = np.zeros((n, n, n), dtype=complex)
    D = np.zeros((n, n, n), dtype=complex)
    for i in range(m, n):
        for a in range(m):
            for b in range(a + 1, m):
                z = complex(rng.standard_normal(), rng.standard_normal())
                C[i, a, b], C[i, b, a] = z, -z
            for b in range(m):
                D[a, i, b] = complex(rng.standard_normal(), rng.standard_normal())
    return StructureConstants(n, C, D)


def random_dense(n: int, seed: int | np.random.Generator | None = None) -> StructureConstants:
    """Dense (C, D) with entries in {+-1, +-i}; almost never a Lie algebra."""
    rng = np.random.default_rng(seed)
    units = np.array([1, -1, 1j, -1j])
    C = units[rng.integers(0, 4, (n, n, n))]
    C = np.triu(np.ones((n, n)), 1)[None] * C
    C = C - C.transpose(0, 2, 1)
    D = units[rng.integers(0, 4, (n, n, n))]
    return StructureConstants(n, C, D)


# ---------------------------------------------------------------------------
# algebra files
#
# JSON object {"n": int, "C": [...], "D": [...]}; C records carry
# upper, lower_i, lower_j and D records upper, lower_i, lower_k (all 1-based),
# each with "re" and "im" given as numbers or {"num", "den"} rationals.

SCHEMA_C = ("upper", "lower_i", "lower_j")
SCHEMA_D = ("upper", "lower_i", "lower_k")


def _scalar(rec: dict, key: str, where: str) -> float:
    v = rec.get(key, 0)
    if isinstance(v, dict):
        try:
            q = Fraction(int(v["num"]), int(v["den"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise AlgebraFileError(f"{where}: bad rational {v!r} for {key!r}") from exc
        return float(q)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise AlgebraFileError(f"{where}: {key!r} must be a number or {{num, den}}, got {v!r}")
    if not math.isfinite(v):
        raise AlgebraFileError(f"{where}: {key!r} is not finite")
    return float(v)


def _records(doc: dict, name: str, fields: tuple[str, str, str], n: int):
    recs = doc.get(name, [])
    if not isinstance(recs, list):
        raise AlgebraFileError(f"{name!r} must be a list of records")
    for pos, rec in enumerate(recs):
        where = f"{name}[{pos}]"
        if not isinstance(rec, dict):
            raise AlgebraFileError(f"{where}: record must be an object")
        idx = []
        for f in fields:
            v = rec.get(f)
            if isinstance(v, bool) or not isinstance(v, int):
                raise AlgebraFileError(f"{where}: missing or non-integer index {f!r}")
            if not 1 <= v <= n:
                raise AlgebraFileError(f"{where}: index {f}={v} outside 1..{n}")
            idx.append(v - 1)
        yield where, tuple(idx), complex(_scalar(rec, "re", where), _scalar(rec, "im", where))


def structure_from_dict(doc: dict) -> StructureConstants:
    if not isinstance(doc, dict):
        raise AlgebraFileError("algebra file must hold a JSON object")
    n = doc.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise AlgebraFileError(f"field 'n' must be a positive integer, got {n!r}")
    C = np.zeros((n, n, n), dtype=complex)
    seen: dict[tuple, complex] = {}
    for where, (k, i, j), v in _records(doc, "C", SCHEMA_C, n):
        if i == j:
            if v != 0:
                raise AlgebraFileError(f"{where}: C^k_(ii) must vanish")
            continue
        # antisymmetric completion; an explicit (k, j, i) must agree
        key = (k, min(i, j), max(i, j))
        val = v if i < j else -v
        if key in seen and seen[key] != val:
            raise AlgebraFileError(f"{where}: conflicts with an earlier entry for the same pair")
        seen[key] = val
        C[k, i, j], C[k, j, i] = v, -v
    D = np.zeros((n, n, n), dtype=complex)
    for where, idx, v in _records(doc, "D", SCHEMA_D, n):
        D[idx] = v
    return StructureConstants(n, C, D)


def _number(x: float):
    x = float(x) + 0.0  # drop negative zero
    return int(x) if x.is_integer() and abs(x) < 2**53 else x


def structure_to_dict(S: StructureConstants) -> dict:
    """Nonzero entries only; C with lower_i < lower_j."""
    n = S.n
    C, D = [], []
    for k, i, j in itertools.product(range(n), repeat=3):
        if i < j and S.C[k, i, j] != 0:
            v = S.C[k, i, j]
            C.append({"upper": k + 1, "lower_i": i + 1, "lower_j": j + 1,
                      "re": _number(v.real), "im": _number(v.imag)})
    for j, i, k in itertools.product(range(n), repeat=3):
        if S.D[j, i, k] != 0:
            v = S.D[j, i, k]
            D.append({"upper": j + 1, "lower_i": i + 1, "lower_k": k + 1,
                      "re": _number(v.real), "im": _number(v.imag)})
    return {"n": n, "C": C, "D": D}


def dumps_structure(S: StructureConstants) -> str:
    return json.dumps(structure_to_dict(S), indent=1, sort_keys=True) + "\n"


def loads_structure(text: str) -> StructureConstants:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFileError(f"not valid JSON: {exc}") from exc
    return structure_from_dict(doc)


def load_structure(path) -> StructureConstants:
    with open(path, encoding="utf-8") as fh:
        return loads_structure(fh.read())


def save_structure(S: StructureConstants, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_structure(S))
