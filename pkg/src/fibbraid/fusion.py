"""Fusion algebra of the Z3 parafermion primaries and Fibonacci fusion paths.

Paths are tuples of :class:`Label` restricted to ``{I, eps}``; position ``k``
holds the total charge of the first ``k`` anyons, so a path for ``n`` anyons
has ``n + 1`` entries and always starts at ``I``.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import groupby
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Golden:
    """Exact element ``a + b*delta`` of Q(sqrt 5), with ``delta**2 == delta + 1``."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def __add__(self, other):
        other = _as_golden(other)
        return Golden(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_golden(other)
        return Golden(self.a - other.a, self.b - other.b)

    def __mul__(self, other):
        other = _as_golden(other)
        # (a + b d)(c + e d) with d^2 = d + 1
        return Golden(self.a * other.a + self.b * other.b,
                      self.a * other.b + self.b * other.a + self.b * other.b)

    __rmul__ = __mul__

    def __float__(self):
        return float(self.a) + float(self.b) * (1 + 5 ** 0.5) / 2

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return "delta" if self.b == 1 else f"{self.b}*delta"
        return f"{self.a} + {self.b}*delta"


def _as_golden(x) -> Golden:
    if isinstance(x, Golden):
        return x
    return Golden(Fraction(x), Fraction(0))


ONE = Golden(1, 0)
DELTA = Golden(0, 1)


class Label(enum.Enum):
    """Primary fields of the diagonal coset, keyed by their su(3)_2 weight."""

    I = "I"
    sigma1 = "sigma1"
    sigma2 = "sigma2"
    psi1 = "psi1"
    psi2 = "psi2"
    eps = "eps"

    @property
    def weight(self) -> tuple[int, int]:
        """``(mu, nu)`` with ``0 <= mu <= nu <= 2`` for Lambda_mu + Lambda_nu."""
        return _WEIGHTS[self]

    @property
    def conformal_dimension(self) -> Fraction:
        return _DIMENSIONS[self]

    @property
    def z3_charge(self) -> int:
        mu, nu = self.weight
        return (mu + nu) % 3

    @property
    def sigma_q(self) -> tuple[int, int]:
        """Character labels ``(sigma, Q) = (nu - mu, nu)``."""
        mu, nu = self.weight
        return nu - mu, nu

    @property
    def quantum_dimension(self) -> Golden:
        return ONE if self in (Label.I, Label.psi1, Label.psi2) else DELTA

    @property
    def is_abelian(self) -> bool:
        return self.quantum_dimension == ONE

    @classmethod
    def parse(cls, text: str) -> "Label":
        key = text.strip()
        aliases = {"1": "I", "vac": "I", "e": "eps", "epsilon": "eps", "s1": "sigma1",
                   "s2": "sigma2", "p1": "psi1", "p2": "psi2"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown label {text!r}") from None

    @classmethod
    def from_weight(cls, mu: int, nu: int) -> "Label":
        mu, nu = sorted((mu % 3, nu % 3))
        return _BY_WEIGHT[(mu, nu)]

    def __str__(self):
        return self.value


_WEIGHTS = {
    Label.I: (0, 0),
    Label.sigma1: (0, 1),
    Label.sigma2: (0, 2),
    Label.psi1: (1, 1),
    Label.eps: (1, 2),
    Label.psi2: (2, 2),
}
_BY_WEIGHT = {w: lab for lab, w in _WEIGHTS.items()}
_DIMENSIONS = {
    Label.I: Fraction(0),
    Label.sigma1: Fraction(1, 15),
    Label.sigma2: Fraction(1, 15),
    Label.psi1: Fraction(2, 3),
    Label.eps: Fraction(2, 5),
    Label.psi2: Fraction(2, 3),
}

I, EPS = Label.I, Label.eps

_S1, _S2, _P1, _P2 = Label.sigma1, Label.sigma2, Label.psi1, Label.psi2
_TABLE = {
    (_S1, _S1): (_S2, _P1),
    (_S2, _S2): (_S1, _P2),
    (_P1, _P1): (_P2,),
    (_S1, _S2): (I, EPS),
    (_S2, _P1): (_S1,),
    (_P1, EPS): (_S2,),
    (_S1, _P1): (EPS,),
    (_S2, EPS): (_S2, _P1),
    (_P1, _P2): (I,),
    (_S1, EPS): (_S1, _P2),
    (_S2, _P2): (EPS,),
    (EPS, EPS): (I, EPS),
    (_S1, _P2): (_S2,),
    (_P2, _P2): (_P1,),
    (EPS, _P2): (_S1,),
}
FUSION_TABLE: dict[frozenset, Counter] = {}
for (_a, _b), _out in _TABLE.items():
    FUSION_TABLE[frozenset((_a, _b))] = Counter(_out)
for _a in Label:
    FUSION_TABLE[frozenset((I, _a))] = Counter((_a,))


def fuse(a: Label, b: Label) -> Counter:
    """Outcome multiset of ``a x b`` (a :class:`collections.Counter`)."""
    return Counter(FUSION_TABLE[frozenset((a, b))])


# ---------------------------------------------------------------------------
# Fibonacci paths

Path = tuple  # tuple[Label, ...]

_CHARGE_ORDER = {I: 0, EPS: 1}


def _check_charge(charge: Label) -> Label:
    if charge not in (I, EPS):
        raise ValueError(f"total charge must be I or eps, got {charge}")
    return charge


def count_paths(n: int, charge: Label) -> int:
    """Number of fusion paths of ``n`` Fibonacci anyons with total ``charge``."""
    _check_charge(charge)
    if n < 1:
        raise ValueError("need at least one anyon")
    # D^(eps)_1 = D^(eps)_2 = 1, D^(I)_{n+1} = D^(eps)_n
    if charge is I:
        return 0 if n == 1 else count_paths(n - 1, EPS)
    a, b = 1, 1
    for _ in range(n - 2):
        a, b = b, a + b
    return 1 if n <= 2 else b


@lru_cache(maxsize=None)
def enumerate_paths(n: int, charge: Label) -> tuple[Path, ...]:
    """All admissible paths from ``I`` to ``charge``, lexicographic with I < eps."""
    _check_charge(charge)
    if n < 1:
        raise ValueError("need at least one anyon")
    out = []

    def grow(prefix):
        if len(prefix) == n + 1:
            if prefix[-1] is charge:
                out.append(tuple(prefix))
            return
        last = prefix[-1]
        for nxt in ((EPS,) if last is I else (I, EPS)):
            prefix.append(nxt)
            grow(prefix)
            prefix.pop()

    grow([I])
    return tuple(out)


@lru_cache(maxsize=None)
def recursive_paths(n: int, charge: Label) -> tuple[Path, ...]:
    """Paths ordered so that generators obey ``B_i^(n) = B_i^(n-2) (+) B_i^(n-1)``.

    Charge-I paths of ``n`` anyons are split on ``x_{n-2}``: first those that
    pass through ``I`` there (an ``n-2`` anyon register), then those through
    ``eps`` (in bijection with the ``n-1`` anyon register).
    """
    _check_charge(charge)
    if n == 0:
        return ((I,),) if charge is I else ()
    if n < 0:
        return ()
    if charge is I:
        if n == 1:
            return ()
        head = [p + (EPS, I) for p in recursive_paths(n - 2, I)]
        tail = [p + (EPS, I) for p in recursive_paths(n - 2, EPS)]
        return tuple(head + tail)
    return tuple([p + (EPS,) for p in recursive_paths(n - 1, I)]
                 + [p + (EPS,) for p in recursive_paths(n - 1, EPS)])


def is_admissible(path: Sequence[Label]) -> bool:
    if not path or path[0] is not I:
        return False
    if any(x not in (I, EPS) for x in path):
        return False
    return all(not (a is I and b is I) for a, b in zip(path, path[1:]))


def path_str(path: Sequence[Label]) -> str:
    return " ".join("I" if x is I else "e" for x in path)


def parse_path(text: str) -> Path:
    path = tuple(I if tok in ("I", "1") else EPS for tok in text.split())
    if not is_admissible(path):
        raise ValueError(f"inadmissible path {text!r}")
    return path


def run_label(path: Sequence[Label]) -> str:
    """Horizontal-run label such as ``3+3+2``: gaps between successive I's."""
    marks = [k for k, x in enumerate(path) if x is I]
    if marks[-1] != len(path) - 1:
        marks.append(len(path) - 1)
    return "+".join(str(b - a) for a, b in zip(marks, marks[1:]))


# ---------------------------------------------------------------------------
# qubit encoding

@dataclass(frozen=True)
class QubitWord:
    """Decoded register state: ``bits`` for computational paths, else NC index."""

    bits: tuple[int, ...] | None = None
    nc_index: int | None = None
    run: str = ""

    @property
    def is_computational(self) -> bool:
        return self.bits is not None

    def __str__(self):
        if self.bits is not None:
            return "".join(map(str, self.bits))
        return f"NC{self.nc_index}({self.run})"


def _check_register(path: Sequence[Label], n_qubits: int):
    if len(path) != 2 * n_qubits + 3:
        raise ValueError(f"a {n_qubits}-qubit register path has {2 * n_qubits + 3} entries,"
                         f" got {len(path)}")
    if path[-1] is not I or not is_admissible(path):
        raise ValueError("register paths must be admissible and end in total charge I")


def is_computational(path: Sequence[Label]) -> bool:
    return all(path[k] is EPS for k in range(1, len(path) - 1, 2))


@lru_cache(maxsize=None)
def nc_paths(n_qubits: int) -> tuple[Path, ...]:
    return tuple(p for p in enumerate_paths(2 * n_qubits + 2, I) if not is_computational(p))


def decode(path: Sequence[Label], n_qubits: int) -> QubitWord:
    path = tuple(path)
    _check_register(path, n_qubits)
    if is_computational(path):
        return QubitWord(bits=tuple(int(path[2 * l] is EPS) for l in range(1, n_qubits + 1)),
                         run=run_label(path))
    return QubitWord(nc_index=nc_paths(n_qubits).index(path), run=run_label(path))


def encode(bits: Iterable[int]) -> Path:
    bits = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0 or 1")
    path = [I, EPS]
    for b in bits:
        path += [EPS if b else I, EPS]
    path.append(I)
    return tuple(path)


def computational_paths(n_qubits: int) -> tuple[Path, ...]:
    """Computational paths in binary order of the bit string (qubit 1 first)."""
    return tuple(encode((k >> (n_qubits - 1 - j)) & 1 for j in range(n_qubits))
                 for k in range(2 ** n_qubits))


def register_label(path: Sequence[Label]) -> str:
    """Display label: bit string for computational paths, run label otherwise."""
    path = tuple(path)
    n = len(path) - 1
    if n % 2 == 0 and n >= 2 and path[-1] is I and is_computational(path):
        return "".join(str(int(path[2 * l] is EPS)) for l in range(1, n // 2))
    return run_label(path)


def golden_groups(path: Sequence[Label]) -> list[tuple[Label, int]]:
    return [(k, len(list(g))) for k, g in groupby(path)]
