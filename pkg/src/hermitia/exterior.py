"""Constant-coefficient exterior algebra over a left-invariant unitary coframe.

Basis covectors are numbered ``0 .. 2n-1``: index ``a < n`` is the
(1,0)-form ``phi_{a+1}`` and index ``n + a`` is its conjugate
``phibar_{a+1}``.  Every monomial is stored as a strictly increasing tuple
under this order (phi_1 < ... < phi_n < phibar_1 < ... < phibar_n); all
component extraction in the package relies on it.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Iterable, Mapping

import numpy as np

if TYPE_CHECKING:
    from hermitia.lie_hermitian import StructureConstants

PRUNE_TOL = 1e-14

Monomial = tuple[int, ...]


def _sort_with_sign(idx: Iterable[int]) -> tuple[int, Monomial]:
    """Bubble-sort a covector word; returns (sign, sorted word) or (0, ()) on repeats."""
    word = list(idx)
    sign = 1
    for a in range(len(word)):
        for b in range(len(word) - 1 - a):
            if word[b] > word[b + 1]:
                word[b], word[b + 1] = word[b + 1], word[b]
                sign = -sign
            elif word[b] == word[b + 1]:
                return 0, ()
    if len(set(word)) != len(word):
        return 0, ()
    return sign, tuple(word)


class Form:
    """A left-invariant form with constant complex coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Iterable[int], complex] | None = None):
        self.n = int(n)
        acc: dict[Monomial, complex] = {}
        for mono, coef in (terms or {}).items():
            mono = tuple(mono)
            if any(a < 0 or a >= 2 * self.n for a in mono):
                raise ValueError(f"covector index out of range in {mono} for n={self.n}")
            sign, key = _sort_with_sign(mono)
            if sign == 0:
                continue
            acc[key] = acc.get(key, 0j) + sign * complex(coef)
        self.terms = {m: c for m, c in acc.items() if abs(c) > PRUNE_TOL}

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> Form:
        return cls(n)

    @classmethod
    def scalar(cls, n: int, value: complex) -> Form:
        return cls(n, {(): value})

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {len(m) for m in self.terms}

    @property
    def degree(self) -> int:
        """Degree of a homogeneous form (0 for the zero form)."""
        degs = self.degrees()
        if len(degs) > 1:
            raise ValueError("form is not homogeneous")
        return degs.pop() if degs else 0

    def monomial_bidegree(self, mono: Monomial) -> tuple[int, int]:
        p = sum(1 for a in mono if a < self.n)
        return p, len(mono) - p

    def bidegrees(self) -> set[tuple[int, int]]:
        return {self.monomial_bidegree(m) for m in self.terms}

    def coefficient(self, mono: Iterable[int]) -> complex:
        """Coefficient of a (possibly unsorted) monomial, sign-adjusted."""
        sign, key = _sort_with_sign(mono)
        if sign == 0:
            return 0j
        return sign * self.terms.get(key, 0j)

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: Form) -> None:
        if not isinstance(other, Form):
            raise TypeError(f"expected Form, got {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: Form) -> Form:
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0j) + c
        return Form(self.n, out)

    def __sub__(self, other: Form) -> Form:
        return self + (-other)

    def __neg__(self) -> Form:
        return Form(self.n, {m: -c for m, c in self.terms.items()})

    def __mul__(self, scalar: complex) -> Form:
        if isinstance(scalar, Form):
            raise TypeError("use wedge() or ^ for the exterior product")
        return Form(self.n, {m: scalar * c for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other: Form) -> Form:
        return wedge(self, other)

    def conj(self) -> Form:
        """Complex conjugate: phi_a <-> phibar_a and coefficients conjugated."""
        n = self.n
        swap = [a + n if a < n else a - n for a in range(2 * n)]
        return Form(n, {tuple(swap[a] for a in m): np.conj(c) for m, c in self.terms.items()})

    def allclose(self, other: Form, tol: float = 1e-12) -> bool:
        return (self - other).max_abs() <= tol

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self.n == other.n and self.allclose(other, PRUNE_TOL)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self.terms:
            return f"Form(n={self.n}, 0)"
        parts = []
        for m in sorted(self.terms, key=lambda m: (len(m), m)):
            c = self.terms[m]
            parts.append(f"({c:.6g})" + ("*" + "^".join(_label(a, self.n) for a in m) if m else ""))
        return f"Form(n={self.n}, " + " + ".join(parts) + ")"


def _label(a: int, n: int) -> str:
    return f"phi{a + 1}" if a < n else f"phibar{a - n + 1}"


def phi(i: int, n: int) -> Form:
    """The (1,0)-covector phi_{i+1} (0-based ``i``)."""
    if not 0 <= i < n:
        raise ValueError(f"index {i} out of range for n={n}")
    return Form(n, {(i,): 1.0})


def phibar(i: int, n: int) -> Form:
    """The (0,1)-covector conj(phi_{i+1}) (0-based ``i``)."""
    if not 0 <= i < n:
        raise ValueError(f"index {i} out of range for n={n}")
    return Form(n, {(n + i,): 1.0})


def one_form(n: int, hol: np.ndarray, antihol: np.ndarray | None = None) -> Form:
    """sum_k hol[k] phi_k + antihol[k] phibar_k."""
    terms: dict[Monomial, complex] = {}
    for k in range(n):
        if hol[k] != 0:
            terms[(k,)] = hol[k]
        if antihol is not None and antihol[k] != 0:
            terms[(n + k,)] = antihol[k]
    return Form(n, terms)


def wedge(a: Form, b: Form) -> Form:
    if not isinstance(a, Form) or not isinstance(b, Form):
        raise TypeError("wedge expects two Forms")
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    out: dict[Monomial, complex] = {}
    for ma, ca in a.terms.items():
        sa = set(ma)
        for mb, cb in b.terms.items():
            if sa.intersection(mb):
                continue
            sign, key = _sort_with_sign(ma + mb)
            out[key] = out.get(key, 0j) + sign * ca * cb
    return Form(a.n, out)


def bidegree_part(f: Form, p: int, q: int) -> Form:
    return Form(f.n, {m: c for m, c in f.terms.items() if f.monomial_bidegree(m) == (p, q)})


def basis_differentials(S: StructureConstants) -> list[Form]:
    """d of every basis covector, in covector order.

    d phi_i = -sum_{j,k} (1/2 C^i_{jk} phi_j ^ phi_k + conj(D^j_{ik}) phi_j ^ phibar_k)
    and d phibar_i is its conjugate.
    """
    n = S.n
    out = []
    for i in range(n):
        terms: dict[Monomial, complex] = {}
        for j in range(n):
            for k in range(n):
                c = S.C[i, j, k]
                if c != 0 and j != k:
                    terms[(j, k)] = terms.get((j, k), 0j) - 0.5 * c
                d = S.D[j, i, k]
                if d != 0:
                    terms[(j, n + k)] = terms.get((j, n + k), 0j) - np.conj(d)
        out.append(Form(n, terms))
    out.extend(f.conj() for f in list(out))
    return out


def differential(f: Form, S: StructureConstants, _basis: list[Form] | None = None) -> Form:
    """Exterior derivative induced by the structure constants (graded Leibniz rule)."""
    if f.n != S.n:
        raise ValueError(f"dimension mismatch: form n={f.n}, structure n={S.n}")
    basis = _basis if _basis is not None else basis_differentials(S)
    n = f.n
    result = Form.zero(n)
    for mono, coef in f.terms.items():
        for pos, a in enumerate(mono):
            da = basis[a]
            if da.is_zero():
                continue
            left = Form(n, {mono[:pos]: coef * (-1) ** pos})
            right = Form(n, {mono[pos + 1:]: 1.0})
            result = result + wedge(wedge(left, da), right)
    return result


def kahler_form(n: int) -> Form:
    """omega = sqrt(-1) sum_k phi_k ^ phibar_k."""
    return Form(n, {(k, n + k): 1j for k in range(n)})
