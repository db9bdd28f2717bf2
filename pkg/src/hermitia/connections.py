"""Connection matrices of the canonical metric connections D^r_s.

Row convention: nabla e_i = sum_j theta_ij e_j, so the coframe transforms as
nabla phi_j = -sum_i theta_ij phi_i.  A connection 1-form matrix is kept as two
coefficient arrays::

    theta_ij = sum_k P[i, j, k] phi_k + Q[i, j, k] phibar_k

and the Form-valued entries are built from them on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from hermitia.errors import OutsideDomain
from hermitia.exterior import Form, one_form
from hermitia.lie_hermitian import StructureConstants, TorsionTensor, chern_torsion

SELF_CHECK_TOL = 1e-12


@dataclass(frozen=True)
class ConnectionParams:
    """A point (r, s) of the admissible domain with weight t = (1 - r + r s) / 2."""

    r: float
    s: float
    t: float

    @property
    def on_levicivita_vertex(self) -> bool:
        return self.r == 0 and self.s == 1

    def as_tuple(self) -> tuple[float, float]:
        return (self.r, self.s)

    @classmethod
    def chern(cls) -> ConnectionParams:
        return connection_params(1, 0)

    @classmethod
    def bismut(cls) -> ConnectionParams:
        return connection_params(-1, 0)

    @classmethod
    def lichnerowicz(cls) -> ConnectionParams:
        return connection_params(0, 0)

    @classmethod
    def levi_civita(cls) -> ConnectionParams:
        return connection_params(0, 1)

    @classmethod
    def anti_bismut(cls) -> ConnectionParams:
        return connection_params(3, 0)

    @classmethod
    def nabla_plus(cls) -> ConnectionParams:
        return connection_params(-1, 2)

    @classmethod
    def nabla_minus(cls) -> ConnectionParams:
        return connection_params(Fraction(1, 3), -2)

    @classmethod
    def minimal(cls) -> ConnectionParams:
        return connection_params(Fraction(-1, 3), 0)

    @classmethod
    def anti_levi_civita(cls) -> ConnectionParams:
        return connection_params(0, -1)


NAMED_POINTS = {
    "chern": (1, 0),
    "bismut": (-1, 0),
    "lichnerowicz": (0, 0),
    "levi_civita": (0, 1),
    "anti_bismut": (3, 0),
    "nabla_plus": (-1, 2),
    "nabla_minus": (Fraction(1, 3), -2),
    "minimal": (Fraction(-1, 3), 0),
    "anti_levi_civita": (0, -1),
}


def in_domain(r: float, s: float, tol: float = 1e-12) -> bool:
    return abs(s - 1) > tol or (abs(r) <= tol and abs(s - 1) <= tol)


def weight(r: float, s: float) -> float:
    return (1 - r + r * s) / 2


def connection_params(r: float, s: float) -> ConnectionParams:
    if not in_domain(float(r), float(s)):
        raise OutsideDomain(f"(r, s) = ({r}, {s}) lies on s = 1 away from the Levi-Civita vertex (0, 1)")
    t = weight(r, s)
    return ConnectionParams(float(r), float(s), float(t))


@dataclass(frozen=True, eq=False)
class ConnectionMatrix:
    """theta (acting e -> e) plus, for s != 0, the conjugate-linear block s*beta."""

    n: int
    P: np.ndarray
    Q: np.ndarray
    kind: str
    params: ConnectionParams | None = None
    beta: np.ndarray | None = None  # coefficients of beta_ij = sum_k beta[i, j, k] phi_k

    def entry(self, i: int, j: int) -> Form:
        return one_form(self.n, self.P[i, j], self.Q[i, j])

    @property
    def entries(self) -> list[list[Form]]:
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]

    def beta_entries(self) -> list[list[Form]] | None:
        if self.beta is None:
            return None
        return [[one_form(self.n, self.beta[i, j]) for j in range(self.n)] for i in range(self.n)]

    def evaluate(self, i: int, j: int, direction: int, barred: bool = False) -> complex:
        """theta_ij applied to e_direction (or ebar_direction)."""
        return (self.Q if barred else self.P)[i, j, direction]

    def __add__(self, other: ConnectionMatrix) -> ConnectionMatrix:
        return ConnectionMatrix(self.n, self.P + other.P, self.Q + other.Q, "sum")

    def __sub__(self, other: ConnectionMatrix) -> ConnectionMatrix:
        return ConnectionMatrix(self.n, self.P - other.P, self.Q - other.Q, "difference")

    def scaled(self, a: float) -> ConnectionMatrix:
        return ConnectionMatrix(self.n, a * self.P, a * self.Q, "scaled")

    def max_abs(self) -> float:
        return float(max(np.abs(self.P).max(initial=0), np.abs(self.Q).max(initial=0)))

    def allclose(self, other: ConnectionMatrix, tol: float = SELF_CHECK_TOL) -> bool:
        return (self - other).max_abs() <= tol


def _as_torsion(T) -> np.ndarray:
    return T.T if isinstance(T, TorsionTensor) else np.asarray(T, dtype=complex)


def chern_connection_form(S: StructureConstants) -> ConnectionMatrix:
    # theta_ij = sum_k D^j_{ik} phi_k - conj(D^i_{jk}) phibar_k
    P = S.D.transpose(1, 0, 2)
    Q = -S.D.conj()
    return ConnectionMatrix(S.n, np.array(P), np.array(Q), "chern", connection_params(1, 0))


def gamma(T) -> ConnectionMatrix:
    """gamma = nabla^b - nabla^c: gamma_ij = sum_k T^j_{ik} phi_k - conj(T^i_{jk}) phibar_k."""
    T = _as_torsion(T)
    return ConnectionMatrix(T.shape[0], T.transpose(1, 0, 2).copy(), -T.conj(), "gamma")


def beta(T) -> ConnectionMatrix:
    """beta_ij = 1/2 sum_k conj(T^k_{ij}) phi_k (stored in P; Q vanishes)."""
    T = _as_torsion(T)
    n = T.shape[0]
    return ConnectionMatrix(n, 0.5 * T.conj().transpose(1, 2, 0), np.zeros((n, n, n), complex), "beta")


def bismut_connection_form(S: StructureConstants) -> ConnectionMatrix:
    C, D = S.C, S.D
    # coefficient of phi_k: -C^j_{ik} + D^j_{ki};  of phibar_k: conj(C^i_{jk}) - conj(D^i_{kj})
    P = -C.transpose(1, 0, 2) + D.transpose(2, 0, 1)
    Q = C.conj() - D.conj().transpose(0, 2, 1)
    theta_b = ConnectionMatrix(S.n, P, Q, "bismut", connection_params(-1, 0))
    expected = chern_connection_form(S) + gamma(chern_torsion(S))
    if not theta_b.allclose(expected):
        raise RuntimeError("Bismut connection matrix disagrees with theta + gamma")
    return theta_b


def connection_form_D(S: StructureConstants, params: ConnectionParams | tuple) -> ConnectionMatrix:
    if not isinstance(params, ConnectionParams):
        params = connection_params(*params)
    T = chern_torsion(S)
    th, g = chern_connection_form(S), gamma(T)
    kind = "levicivita_block" if params.on_levicivita_vertex else "general"
    b = beta(T).P
    return ConnectionMatrix(S.n, th.P + params.t * g.P, th.Q + params.t * g.Q, kind, params,
                            params.s * b if params.s != 0 else None)
