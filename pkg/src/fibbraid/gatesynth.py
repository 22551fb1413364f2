"""Braid words: evaluation, gate distance, leakage and brute-force synthesis.

Words multiply left to right as written, so ``B1^2 B2^-1`` is the matrix
product ``B1 @ B1 @ inv(B2)``.  Exponents are nonzero integers and negative
powers use the inverse (adjoint) generator.
"""

from __future__ import annotations

import cmath
import json
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.spatial import cKDTree

from .braidrep import Q, Unitary, basis, f_matrix, generator, spectral_norm
from .fusion import I, Label, computational_paths, nc_paths

EXACT = "exact"
UP_TO_PHASE = "up_to_global_phase"
PHASE_MODES = (EXACT, UP_TO_PHASE)

_FACTOR = re.compile(r"^B_?(\d+)(?:\^\{?([+-]?\d+)\}?)?$")


@dataclass(frozen=True)
class BraidWord:
    """Ordered factors ``(i, k)`` meaning ``B_i^k`` on ``strand_count`` strands."""

    strand_count: int
    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        facs = tuple((int(i), int(k)) for i, k in self.factors)
        object.__setattr__(self, "factors", facs)
        for i, k in facs:
            if not 1 <= i <= self.strand_count - 1:
                raise ValueError(f"generator B{i} invalid on {self.strand_count} strands")
            if k == 0:
                raise ValueError("exponents must be nonzero")

    @classmethod
    def parse(cls, text: str, strand_count: int = 4) -> "BraidWord":
        """Parse ``B1^4 B2^-2 ...``; an empty string or ``I`` is the identity."""
        tokens = text.replace("*", " ").split()
        if tokens in ([], ["I"], ["1"]):
            return cls(strand_count)
        factors = []
        for tok in tokens:
            m = _FACTOR.match(tok)
            if not m:
                raise ValueError(f"cannot parse braid factor {tok!r}")
            factors.append((int(m.group(1)), int(m.group(2) or 1)))
        return cls(strand_count, tuple(factors))

    def __str__(self):
        return " ".join(f"B{i}" if k == 1 else f"B{i}^{k}" for i, k in self.factors)

    def __len__(self):
        return len(self.factors)

    @property
    def weave_count(self) -> int:
        return sum(abs(k) for _, k in self.factors)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strand_count, tuple((i, -k) for i, k in reversed(self.factors)))

    def __add__(self, other: "BraidWord") -> "BraidWord":
        if other.strand_count != self.strand_count:
            raise ValueError("strand counts differ")
        return BraidWord(self.strand_count, self.factors + other.factors)

    def normalized(self) -> "BraidWord":
        """Merge adjacent powers of the same generator and drop zero powers."""
        out: list[list[int]] = []
        for i, k in self.factors:
            if out and out[-1][0] == i:
                out[-1][1] += k
                if out[-1][1] == 0:
                    out.pop()
            else:
                out.append([i, k])
        return BraidWord(self.strand_count, tuple(map(tuple, out)))

    def sort_key(self) -> tuple:
        return tuple((i, abs(k), k < 0) for i, k in self.factors)


def _as_matrix(u) -> np.ndarray:
    return u.matrix if isinstance(u, Unitary) else np.asarray(u, dtype=complex)


@lru_cache(maxsize=64)
def _powers(n: int, charge: Label, kind: str, i: int, k: int) -> np.ndarray:
    g = generator(n, i, charge, kind=kind).matrix
    base = g if k > 0 else g.conj().T
    m = np.linalg.matrix_power(base, abs(k))
    m.setflags(write=False)
    return m


def evaluate(word: BraidWord, charge: Label = I, kind: str | None = None) -> Unitary:
    """Matrix of ``word``; the basis defaults to the register ordering when one exists."""
    n = word.strand_count
    if kind is None:
        kind = "register" if (charge is I and n % 2 == 0 and n >= 2) else "canonical"
    paths = basis(n, charge, kind)
    m = np.eye(len(paths), dtype=complex)
    for i, k in word.factors:
        m = m @ _powers(n, charge, kind, i, k)
    return Unitary(m, paths)


# ---------------------------------------------------------------------------
# distance

def _fast_norm2(a: np.ndarray) -> float:
    """Spectral norm of a 2x2 matrix from its Frobenius norm and determinant."""
    s = float(np.sum(np.abs(a) ** 2))
    d = abs(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]) ** 2
    return math.sqrt(max(0.0, (s + math.sqrt(max(0.0, s * s - 4 * d))) / 2))


def _phase_norm2(a: np.ndarray, b: np.ndarray) -> float:
    """Phase-free distance of two 2x2 unitaries from the eigenvalues of ``b^dagger a``."""
    w = b.conj().T @ a
    half = (w[0, 0] + w[1, 1]) / 2
    disc = cmath.sqrt(half * half - (w[0, 0] * w[1, 1] - w[0, 1] * w[1, 0]))
    arc = abs(cmath.phase((half + disc) * ((half - disc).conjugate())))
    return 2 * math.sin(arc / 4)


def phase_arc(eigs: Iterable[complex]) -> float:
    """Length of the smallest arc of the unit circle holding all ``eigs``."""
    ang = np.sort(np.mod(np.angle(np.asarray(list(eigs))), 2 * math.pi))
    if ang.size <= 1:
        return 0.0
    gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * math.pi]]))
    return float(2 * math.pi - gaps.max())


def _is_unitary(a: np.ndarray, tol: float = 1e-9) -> bool:
    return np.allclose(a.conj().T @ a, np.eye(a.shape[0]), atol=tol)


def _phase_distance_numeric(a: np.ndarray, b: np.ndarray, grid: int = 720) -> float:
    def f(phi):
        return spectral_norm(a - cmath.exp(1j * phi) * b)

    phis = np.linspace(0, 2 * math.pi, grid, endpoint=False)
    vals = [f(p) for p in phis]
    k = int(np.argmin(vals))
    h = 2 * math.pi / grid
    res = minimize_scalar(f, bounds=(phis[k] - h, phis[k] + h), method="bounded",
                          options={"xatol": 1e-13})
    return float(min(vals[k], res.fun))


def distance(u, v, phase_mode: str = EXACT) -> float:
    """Spectral-norm distance, optionally minimized over a global phase on ``v``."""
    a, b = _as_matrix(u), _as_matrix(v)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
    if phase_mode == EXACT:
        return _fast_norm2(a - b) if a.shape == (2, 2) else spectral_norm(a - b)
    if phase_mode != UP_TO_PHASE:
        raise ValueError(f"unknown phase mode {phase_mode!r}")
    if _is_unitary(a) and _is_unitary(b):
        # max_j |lambda_j - phi| is minimized at the middle of the eigenphase arc
        w = phase_arc(np.linalg.eigvals(b.conj().T @ a))
        return 2 * math.sin(w / 4)
    return _phase_distance_numeric(a, b)


# ---------------------------------------------------------------------------
# targets

@dataclass(frozen=True, eq=False)
class GateTarget:
    name: str
    matrix: np.ndarray
    phase_mode: str = EXACT

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if not _is_unitary(m, 1e-12):
            raise ValueError(f"target {self.name} is not unitary")
        if self.phase_mode not in PHASE_MODES:
            raise ValueError(f"unknown phase mode {self.phase_mode!r}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


_H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
_X = np.array([[0, 1], [1, 0]])
_Y = np.array([[0, -1j], [1j, 0]])
_Z = np.diag([1, -1])
_S = np.diag([1, 1j])
_T = np.diag([1, cmath.exp(1j * math.pi / 4)])

STANDARD_GATES = {
    "identity": np.eye(2),
    "X": _X, "Y": _Y, "Z": _Z, "H": _H, "S": _S, "T": _T,
    "iX": 1j * _X, "iH": 1j * _H,
    "minusZ": -_Z, "minusH": -_H, "minusX": -_X,
    "F": f_matrix(), "minusF": -f_matrix(),
    "qS": Q * _S,
}


def standard_target(name: str, phase_mode: str = EXACT) -> GateTarget:
    try:
        return GateTarget(name, STANDARD_GATES[name], phase_mode)
    except KeyError:
        raise ValueError(f"unknown target {name!r}; known: {', '.join(STANDARD_GATES)}") from None


# ---------------------------------------------------------------------------
# published words

def load_paper_words() -> dict:
    text = resources.files("fibbraid").joinpath("data/paper_words.json").read_text()
    return json.loads(text)


def verify_paper_words(tol: float = 0.0) -> list[dict]:
    """Evaluate each stored word and compare it with its target and bound."""
    data = load_paper_words()
    rows = []
    for entry in data["words"]:
        word = BraidWord.parse(entry["word"], data["strands"])
        target = standard_target(entry["target"], entry["phase_mode"])
        u = evaluate(word)
        d = distance(u, target.matrix, target.phase_mode)
        rows.append({
            "gate": entry["gate"],
            "target": entry["target"],
            "phase_mode": target.phase_mode,
            "word": str(word),
            "factors": len(word),
            "weave_count": word.weave_count,
            "stated_weaves": entry["weaves"],
            "distance": d,
            "exact_distance": distance(u, target.matrix, EXACT),
            "bound": entry["bound"],
            "pass": d <= entry["bound"] + tol,
        })
    return rows


# ---------------------------------------------------------------------------
# leakage

def register_partition(n_qubits: int) -> tuple[slice, slice]:
    m = 2 ** n_qubits
    return slice(0, m), slice(m, m + len(nc_paths(n_qubits)))


def leakage_of(u: Unitary, n_qubits: int) -> float:
    """Norm of the block mapping computational states into NC states."""
    u = u.in_basis(basis(2 * n_qubits + 2, I, "register"))
    comp, nc = register_partition(n_qubits)
    return spectral_norm(u.matrix[nc, comp])


def leakage(word: BraidWord, n_qubits: int) -> float:
    if word.strand_count != 2 * n_qubits + 2:
        raise ValueError(f"{n_qubits} qubits need {2 * n_qubits + 2} strands")
    return leakage_of(evaluate(word, I, "register"), n_qubits)


def computational_block(u: Unitary, n_qubits: int) -> np.ndarray:
    u = u.in_basis(basis(2 * n_qubits + 2, I, "register"))
    comp, _ = register_partition(n_qubits)
    return u.matrix[comp, comp]


# ---------------------------------------------------------------------------
# search

@dataclass
class SynthesisResult:
    word: BraidWord
    distance: float
    weave_count: int
    leakage: float
    method: str
    target: str = ""
    phase_mode: str = EXACT
    evaluated: int = 0
    met: bool = True
    trace: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "phase_mode": self.phase_mode,
            "method": self.method,
            "word": str(self.word),
            "factors": len(self.word),
            "weave_count": self.weave_count,
            "distance": self.distance,
            "leakage": self.leakage,
            "evaluated": self.evaluated,
            "met": self.met,
        }


def _rank(d: float, word: BraidWord) -> tuple:
    return (round(d, 12), word.weave_count, len(word), word.sort_key())


def _exponents(max_exponent: int) -> list[int]:
    out = []
    for e in range(1, max_exponent + 1):
        out += [e, -e]
    return out


@dataclass(frozen=True)
class _Problem:
    n: int
    gens: tuple[int, ...]
    target: np.ndarray
    phase_mode: str
    max_weaves: int
    max_exponent: int
    n_qubits: int

    def space_dim(self) -> int:
        return len(basis(self.n, I, "register"))

    def score(self, m: np.ndarray) -> float:
        d = self.target.shape[0]
        if m.shape[0] == 2 and d == 2:
            if self.phase_mode == EXACT:
                return _fast_norm2(m - self.target)
            return _phase_norm2(m, self.target)
        block = m[:d, :d] if m.shape[0] != d else m
        return distance(block, self.target, self.phase_mode)


def _dfs(problem: _Problem, first: int | None) -> tuple[list, int, list]:
    """Best ``(rank, factors)`` among words starting with generator ``first``."""
    n = problem.n
    exps = _exponents(problem.max_exponent)
    pw = {(i, k): _powers(n, I, "register", i, k) for i in problem.gens for k in exps}
    best = None
    count = 0
    trace = []
    stack_word: list[tuple[int, int]] = []

    def visit(m, budget, last):
        nonlocal best, count
        count += 1
        d = round(problem.score(m), 12)
        if best is None or d <= best[0][0]:
            w = BraidWord(n, tuple(stack_word))
            key = _rank(d, w)
            if best is None or key < best[0]:
                best = (key, tuple(stack_word))
                trace.append((count, key[0], str(w)))
        for i in problem.gens:
            if i == last or (last is None and first is not None and i != first):
                continue
            for k in exps:
                if abs(k) > budget:
                    continue
                stack_word.append((i, k))
                visit(m @ pw[(i, k)], budget - abs(k), i)
                stack_word.pop()

    start = np.eye(problem.space_dim(), dtype=complex)
    if first is None:
        visit(start, problem.max_weaves, None)
    else:
        for k in exps:
            if abs(k) <= problem.max_weaves:
                stack_word.append((first, k))
                visit(start @ pw[(first, k)], problem.max_weaves - abs(k), first)
                stack_word.pop()
    return best, count, trace


def _dfs_job(args):
    return _dfs(*args)


def _words(n, gens, budget, max_exponent):
    """All alternating words of weight at most ``budget``, in DFS order."""
    exps = _exponents(max_exponent)
    out = [()]

    def grow(prefix, left, last):
        for i in gens:
            if i == last:
                continue
            for k in exps:
                if abs(k) <= left:
                    w = prefix + ((i, k),)
                    out.append(w)
                    grow(w, left - abs(k), i)

    grow((), budget, None)
    return out


def _product(n, factors, dim):
    m = np.eye(dim, dtype=complex)
    for i, k in factors:
        m = m @ _powers(n, I, "register", i, k)
    return m


def _embed(m: np.ndarray, phase_mode: str) -> list[np.ndarray]:
    """Points whose Euclidean distance controls the gate distance."""
    if phase_mode == EXACT:
        return [np.concatenate([m.real.ravel(), m.imag.ravel()])]
    su = m / np.sqrt(np.linalg.det(m))
    v = np.array([su[0, 0].real, su[0, 0].imag, su[1, 0].real, su[1, 0].imag])
    return [v, -v]


def quantized_key(m: np.ndarray, phase_mode: str = UP_TO_PHASE, grid: float = 2.0 ** -20):
    """Hashable key: fix the phase of the largest entry, round to ``grid``."""
    if phase_mode == UP_TO_PHASE:
        flat = m.ravel()
        j = int(np.argmax(np.abs(flat) - 1e-9 * np.arange(flat.size)))
        m = m * (abs(flat[j]) / flat[j])
    return tuple(np.round(np.concatenate([m.real.ravel(), m.imag.ravel()]) / grid).astype(np.int64))


def _meet_in_middle(problem: _Problem):
    if problem.target.shape[0] != problem.space_dim():
        raise ValueError("meet-in-the-middle needs a target on the full fusion space")
    if problem.phase_mode == UP_TO_PHASE and problem.target.shape[0] != 2:
        raise ValueError("phase-free meet-in-the-middle is implemented for 2x2 targets")
    n, dim = problem.n, problem.space_dim()
    half = (problem.max_weaves + 1) // 2
    prefixes = _words(n, problem.gens, half, problem.max_exponent)
    suffixes = _words(n, problem.gens, problem.max_weaves - half, problem.max_exponent)
    suf_mats = [_product(n, w, dim) for w in suffixes]

    # exact matches through a quantized hash
    table: dict = {}
    for j, m in enumerate(suf_mats):
        table.setdefault(quantized_key(m, problem.phase_mode), []).append(j)

    points, owner = [], []
    for j, m in enumerate(suf_mats):
        for p in _embed(m, problem.phase_mode):
            points.append(p)
            owner.append(j)
    tree = cKDTree(np.array(points))
    # embedding distance d_e relates to the gate distance d by d <= c * d_e <= c * slack * d
    slack = math.sqrt(dim) if problem.phase_mode == EXACT else 1.0

    best = None
    count = 0

    def consider(pw, sj):
        nonlocal best, count
        word = BraidWord(n, pw + suffixes[sj]).normalized()
        if word.weave_count > problem.max_weaves:
            return
        if any(abs(k) > problem.max_exponent for _, k in word.factors):
            return
        count += 1
        d = problem.score(_product(n, word.factors, dim))
        key = _rank(d, word)
        if best is None or key < best[0]:
            best = (key, word.factors)

    for pw in prefixes:
        consider(pw, 0)
    for pw in prefixes:
        want = _product(n, pw, dim).conj().T @ problem.target
        for sj in table.get(quantized_key(want, problem.phase_mode), ()):
            consider(pw, sj)
        radius = slack * best[0][0] + 1e-9
        for p in _embed(want, problem.phase_mode)[:1]:
            for idx in sorted(tree.query_ball_point(p, radius)):
                consider(pw, owner[idx])
    return best, count


def search(target: GateTarget, max_weaves: int = 10, method: str = "exhaustive",
           generator_set: Sequence[int] = (1, 2), n: int = 4, max_exponent: int = 5,
           max_error: float | None = None, threads: int = 1) -> SynthesisResult:
    """Best alternating braid word for ``target`` within a total-exponent budget.

    Ties are broken by rounded distance, weave count, factor count and then the
    word itself, so every method and thread count gives the same answer.
    """
    if max_weaves < 0:
        raise ValueError("max_weaves must be nonnegative")
    if n % 2 or n < 4:
        raise ValueError("search runs on a register with an even strand count >= 4")
    gens = tuple(sorted(set(int(i) for i in generator_set)))
    if not gens or any(not 1 <= i <= n - 1 for i in gens):
        raise ValueError("invalid generator set")
    n_qubits = n // 2 - 1
    if target.dim != 2 ** n_qubits and target.dim != len(basis(n, I, "register")):
        raise ValueError(f"target dimension {target.dim} does not fit {n} strands")
    problem = _Problem(n, gens, target.matrix, target.phase_mode, max_weaves,
                       max_exponent, n_qubits)

    trace: list = []
    if method == "exhaustive":
        if threads > 1:
            jobs = [(problem, i) for i in gens]
            with ProcessPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(_dfs_job, jobs))
            empty = BraidWord(n)
            best = (_rank(problem.score(np.eye(problem.space_dim())), empty), ())
            count = 1
            for part_best, part_count, part_trace in parts:
                count += part_count
                trace += part_trace
                if part_best is not None and part_best[0] < best[0]:
                    best = part_best
        else:
            best, count, trace = _dfs(problem, None)
    elif method == "meet_in_middle":
        best, count = _meet_in_middle(problem)
    else:
        raise ValueError(f"unknown search method {method!r}")

    word = BraidWord(n, best[1])
    u = evaluate(word)
    d = problem.score(u.matrix)
    leak = leakage_of(u, n_qubits) if n > 4 else 0.0
    met = True if max_error is None else d <= max_error
    return SynthesisResult(word, d, word.weave_count, leak, method, target.name,
                           target.phase_mode, count, met, trace)
