"""Unitary braid-group generators on Fibonacci fusion-path bases.

Generators are built from local (F, R) data: the exchange of anyons ``i`` and
``i+1`` only sees the charges ``x_{i-1}, x_i, x_{i+1}`` of a path.  The matrices
quoted for 4, 6 and 8 anyons are also stored verbatim so the two routes can be
compared entry by entry.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .fusion import (EPS, I, Label, Path, computational_paths, enumerate_paths, nc_paths,
                     recursive_paths, register_label)

Q = cmath.exp(1j * math.pi / 5)
DELTA = (1 + math.sqrt(5)) / 2
TAU = 1 / DELTA

MAX_STRANDS = 22


def spectral_norm(a: np.ndarray) -> float:
    """Largest singular value, as ``sqrt(max eig(A A^dagger))``."""
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return 0.0
    w = np.linalg.eigvalsh(a @ a.conj().T)
    return float(math.sqrt(max(w[-1], 0.0)))


def f_matrix() -> np.ndarray:
    """The real symmetric involution ``[[tau, sqrt tau], [sqrt tau, -tau]]``."""
    s = math.sqrt(TAU)
    return np.array([[TAU, s], [s, -TAU]])


@dataclass(frozen=True)
class RData:
    """Exchange phases for the two fusion channels of ``eps x eps``.

    The defaults include the u(1) charge phase ``q**3``, so that the
    eigenvalues of every generator are ``q**-1`` and ``-q``.  Set
    ``u1_phase=1`` for the bare parafermion exchange.
    """

    r_I: complex = cmath.exp(-4j * math.pi / 5)
    r_eps: complex = cmath.exp(3j * math.pi / 5)
    u1_phase: complex = Q ** 3

    def __post_init__(self):
        for name in ("r_I", "r_eps", "u1_phase"):
            if abs(abs(getattr(self, name)) - 1) > 1e-12:
                raise ValueError(f"{name} must be a unit phase")

    @property
    def eigenvalues(self) -> tuple[complex, complex]:
        return self.u1_phase * self.r_I, self.u1_phase * self.r_eps

    def block(self) -> np.ndarray:
        """``u1 * F diag(r_I, r_eps) F`` indexed by the middle charge (I, eps)."""
        f = f_matrix()
        return self.u1_phase * f @ np.diag([self.r_I, self.r_eps]) @ f


DEFAULT_RDATA = RData()


@dataclass(frozen=True, eq=False)
class Unitary:
    """Dense complex matrix acting on an ordered tuple of fusion paths."""

    matrix: np.ndarray
    basis: tuple = field(default=())

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "basis", tuple(tuple(p) for p in self.basis))
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        if self.basis and len(self.basis) != m.shape[0]:
            raise ValueError("basis length does not match matrix dimension")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def labels(self) -> list[str]:
        return [register_label(p) for p in self.basis]

    def unitarity_error(self) -> float:
        return spectral_norm(self.matrix.conj().T @ self.matrix - np.eye(self.dim))

    def is_unitary(self, tol: float = 1e-12) -> bool:
        return self.unitarity_error() <= tol

    def in_basis(self, basis: Sequence[Path]) -> "Unitary":
        """Re-express in another ordering of the same set of paths."""
        basis = tuple(tuple(p) for p in basis)
        index = {p: k for k, p in enumerate(self.basis)}
        if len(basis) != self.dim or set(basis) != set(index):
            raise ValueError("target basis is not a permutation of the current basis")
        perm = [index[p] for p in basis]
        return Unitary(self.matrix[np.ix_(perm, perm)], basis)

    def dagger(self) -> "Unitary":
        return Unitary(self.matrix.conj().T, self.basis)

    def __matmul__(self, other: "Unitary") -> "Unitary":
        if self.basis and other.basis and self.basis != other.basis:
            raise ValueError("bases differ")
        return Unitary(self.matrix @ other.matrix, self.basis or other.basis)

    def power(self, k: int) -> "Unitary":
        base = self.matrix if k >= 0 else self.matrix.conj().T
        return Unitary(np.linalg.matrix_power(base, abs(k)), self.basis)

    def submatrix(self, paths: Sequence[Path]) -> np.ndarray:
        index = {p: k for k, p in enumerate(self.basis)}
        rows = [index[tuple(p)] for p in paths]
        return self.matrix[np.ix_(rows, rows)]


def identity(basis: Sequence[Path]) -> Unitary:
    return Unitary(np.eye(len(basis)), basis)


# ---------------------------------------------------------------------------
# bases

BASIS_KINDS = ("canonical", "recursive", "register", "paper")


def _check_strands(n: int, cap: int = MAX_STRANDS):
    if n < 1:
        raise ValueError("need at least one anyon")
    if n > cap:
        raise ValueError(f"n = {n} exceeds the strand cap {cap}")


def basis(n: int, charge: Label = I, kind: str = "canonical") -> tuple[Path, ...]:
    """Ordered path basis.

    ``canonical``  lexicographic, I < eps.
    ``recursive``  ordering where ``B_i^(n) = B_i^(n-2) (+) B_i^(n-1)``.
    ``register``   computational states in binary order, then NC states.
    ``paper``      the published ordering: canonical for 4 anyons, register
                   for 6, recursive for 8.
    """
    if kind == "canonical":
        return enumerate_paths(n, charge)
    if kind == "recursive":
        return recursive_paths(n, charge)
    if kind == "register":
        if charge is not I or n % 2 or n < 2:
            raise ValueError("register basis needs an even strand count and charge I")
        nq = n // 2 - 1
        return computational_paths(nq) + nc_paths(nq)
    if kind == "paper":
        if charge is not I or n not in PAPER_BASIS:
            raise ValueError("published bases exist only for 4, 6, 8 anyons with charge I")
        return basis(n, charge, PAPER_BASIS[n])
    raise ValueError(f"unknown basis kind {kind!r}")


PAPER_BASIS = {4: "canonical", 6: "register", 8: "recursive"}


# ---------------------------------------------------------------------------
# generic generators

@lru_cache(maxsize=256)
def _generator_matrix(n: int, i: int, charge: Label, rdata: RData) -> np.ndarray:
    paths = enumerate_paths(n, charge)
    index = {p: k for k, p in enumerate(paths)}
    order = {I: 0, EPS: 1}
    block = rdata.block()
    u_i, u_e = rdata.eigenvalues
    m = np.zeros((len(paths), len(paths)), dtype=complex)
    for k, p in enumerate(paths):
        left, right = p[i - 1], p[i + 1]
        if left is not right:
            m[k, k] = u_e
        elif left is I:
            m[k, k] = u_i
        else:
            for mid in (I, EPS):
                other = p[:i] + (mid,) + p[i + 1:]
                m[k, index[other]] = block[order[p[i]], order[mid]]
    m.setflags(write=False)
    return m


def generator(n: int, i: int, charge: Label = I, rdata: RData = DEFAULT_RDATA,
              kind: str = "canonical", cap: int = MAX_STRANDS) -> Unitary:
    """Exchange of anyons ``i`` and ``i+1`` among ``n``, total charge ``charge``."""
    _check_strands(n, cap)
    if charge not in (I, EPS):
        raise ValueError(f"total charge must be I or eps, got {charge}")
    if not 1 <= i <= n - 1:
        raise ValueError(f"generator index {i} out of range 1..{n - 1}")
    u = Unitary(_generator_matrix(n, i, charge, rdata), enumerate_paths(n, charge))
    return u if kind == "canonical" else u.in_basis(basis(n, charge, kind))


def generators(n: int, charge: Label = I, rdata: RData = DEFAULT_RDATA,
               kind: str = "canonical") -> list[Unitary]:
    return [generator(n, i, charge, rdata, kind) for i in range(1, n)]


# ---------------------------------------------------------------------------
# published matrices

def _b4_entries():
    b11 = Q ** -3 * TAU
    b12 = b21 = math.sqrt(TAU)
    b22 = -(Q ** 3) * TAU
    return b11, b12, b21, b22


def _paper_b4(i: int) -> np.ndarray:
    if i in (1, 3):
        return np.diag([Q ** -1, -Q])
    b11, b12, b21, b22 = _b4_entries()
    return np.array([[b11, b12], [b21, b22]])


def _paper_b6(i: int, corrected: bool = False) -> np.ndarray:
    qi, mq = Q ** -1, -Q
    b11, b12, b21, b22 = _b4_entries()
    if i == 1:
        return np.diag([qi, qi, mq, mq, mq])
    if i == 5:
        return np.diag([qi, mq, qi, mq, mq])
    if i == 2:
        return np.array([[b11, 0, b12, 0, 0],
                         [0, b11, 0, b12, 0],
                         [b21, 0, b22, 0, 0],
                         [0, b21, 0, b22, 0],
                         [0, 0, 0, 0, mq]])
    if i == 4:
        return np.array([[b11, b12, 0, 0, 0],
                         [b21, b22, 0, 0, 0],
                         [0, 0, b11, b12, 0],
                         [0, 0, b21, b22, 0],
                         [0, 0, 0, 0, mq]])
    if i == 3:
        m = np.diag([qi, mq, mq, 0, 0]).astype(complex)
        if corrected:
            # |11> sits at the eps middle charge, NC at the I middle charge
            m[3:, 3:] = [[b22, b21], [b12, b11]]
        else:
            m[3:, 3:] = [[b11, b12], [b21, b22]]
        return m
    raise ValueError(i)


def paper_generator(n: int, i: int, corrected: bool = False) -> Unitary:
    """Published generator ``B_i^(n)`` in the published basis for ``n``.

    For 8 anyons only ``i = 6, 7`` are printed; ``i <= 5`` is assembled as
    ``B_i^(6) (+) B_i^(7)`` from the printed 6-anyon matrix (moved to the
    recursive order) and the generic 7-anyon generator.

    ``corrected=True`` swaps the diagonal of the mixing block of ``B_3^(6)``,
    which is what the printed ``B_2^(6)`` and ``B_4^(6)`` conventions imply.
    """
    if n == 4 and 1 <= i <= 3:
        return Unitary(_paper_b4(i), basis(4, I, "paper"))
    if n == 6 and 1 <= i <= 5:
        return Unitary(_paper_b6(i, corrected), basis(6, I, "paper"))
    if n == 8 and 1 <= i <= 7:
        b8 = basis(8, I, "paper")
        qi, mq = Q ** -1, -Q
        if i == 7:
            return Unitary(np.diag([qi] * 5 + [mq] * 8), b8)
        if i == 6:
            b11, b12, b21, b22 = _b4_entries()
            e5, e3 = np.eye(5), np.eye(3)
            z53, z35 = np.zeros((5, 3)), np.zeros((3, 5))
            m = np.block([[b11 * e5, z53, b12 * e5],
                          [z35, mq * e3, z35],
                          [b21 * e5, z53, b22 * e5]])
            return Unitary(m, b8)
        six = paper_generator(6, i, corrected).in_basis(recursive_paths(6, I)).matrix
        seven = generator(7, i, I, kind="recursive").matrix
        m = np.zeros((13, 13), dtype=complex)
        m[:5, :5] = six
        m[5:, 5:] = seven
        return Unitary(m, b8)
    raise ValueError(f"no published matrix for B_{i}^({n})")


PAPER_INDICES = tuple((n, i) for n in (4, 6, 8) for i in range(1, n))


# ---------------------------------------------------------------------------
# relations

def artin_violations(mats: Sequence[np.ndarray]) -> dict:
    """Max norms of the far-commutation and braid-relation defects."""
    far = braid = 0.0
    k = len(mats)
    for a in range(k):
        for b in range(a + 2, k):
            far = max(far, spectral_norm(mats[a] @ mats[b] - mats[b] @ mats[a]))
        if a + 1 < k:
            x, y = mats[a], mats[a + 1]
            braid = max(braid, spectral_norm(x @ y @ x - y @ x @ y))
    return {"far_commutation": far, "braid": braid, "max_violation": max(far, braid)}


def artin_check(n: int, charge: Label = I, rdata: RData = DEFAULT_RDATA) -> dict:
    if n < 3:
        raise ValueError("Artin relations need at least 3 strands")
    report = artin_violations([g.matrix for g in generators(n, charge, rdata)])
    return {"n": n, "charge": str(charge), **report}


def eigenphase_check(u: Unitary, rdata: RData = DEFAULT_RDATA) -> float:
    """Distance of the worst eigenvalue from the two allowed values."""
    allowed = np.array(rdata.eigenvalues)
    ev = np.linalg.eigvals(u.matrix)
    return float(max(np.min(np.abs(allowed - e)) for e in ev))
