"""Antidot initialization and Fabry-Perot readout of Fibonacci anyons.

Only the monodromy ratios for a sigma-type probe circling an I or eps charge
are tabled; any other pair raises instead of guessing a modular S entry.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .fusion import EPS, I, Label

DELTA = (1 + math.sqrt(5)) / 2
FILLING = Fraction(3, 5)


@dataclass(frozen=True)
class SectorLabel:
    """Charge label ``l`` of the u(1) part paired with a parafermion field."""

    l: int
    pf: Label

    def __post_init__(self):
        mu, nu = self.pf.weight
        if (mu + nu - self.l) % 3:
            raise ValueError(f"pairing rule violated: {mu}+{nu} != {self.l} mod 3")

    @property
    def charge(self) -> Fraction:
        return Fraction(self.l, 5)

    def __str__(self):
        return f"({self.l}, {self.pf})"


def allowed_localized_excitations(flux: int = 1) -> list[SectorLabel]:
    """Sectors compatible with one flux quantum through an antidot."""
    if flux != 1:
        raise ValueError("only single flux-quantum threading is modeled")
    q_el = FILLING * flux
    l = int(q_el * 5)
    return [SectorLabel(l, lab) for lab in Label if (sum(lab.weight) - l) % 3 == 0]


_MONODROMY = {
    (Label.sigma1, I): 1.0,
    (Label.sigma2, I): 1.0,
    (Label.sigma1, EPS): -1 / DELTA ** 2,
    (Label.sigma2, EPS): -1 / DELTA ** 2,
}


def monodromy(probe: Label, inner: Label) -> float:
    """Expectation of the full braid of ``probe`` around ``inner``."""
    try:
        return _MONODROMY[(probe, inner)]
    except KeyError:
        raise ValueError(f"monodromy for ({probe}, {inner}) is not tabled") from None


@dataclass(frozen=True)
class InterferometerConfig:
    t1: complex = 0.5
    t2: complex = 0.5
    alpha: float = 0.0
    inner: Label = I
    probe: Label = Label.sigma1

    def __post_init__(self):
        if abs(self.t1) > 1 or abs(self.t2) > 1:
            raise ValueError("tunneling amplitudes must satisfy |t| <= 1")
        if self.probe not in (Label.sigma1, Label.sigma2):
            raise ValueError("probe must be sigma1 or sigma2")


def sigma_xx(config: InterferometerConfig) -> float:
    """Backscattering conductance, lowest order in the tunneling amplitudes."""
    m = monodromy(config.probe, config.inner)
    t1, t2 = complex(config.t1), complex(config.t2)
    cross = t1.conjugate() * t2 * complex(math.cos(config.alpha), math.sin(config.alpha)) * m
    return abs(t1) ** 2 + abs(t2) ** 2 + 2 * cross.real


def visibility(inner: Label, probe: Label = Label.sigma1, t: float = 0.5) -> float:
    """Peak-to-peak half amplitude of ``sigma_xx`` as ``alpha`` sweeps a period."""
    alphas = np.linspace(0, 2 * math.pi, 721)
    vals = [sigma_xx(InterferometerConfig(t, t, a, inner, probe)) for a in alphas]
    return (max(vals) - min(vals)) / 2


def sweep(inner_labels: Iterable[Label] = (I, EPS), t1: complex = 0.5, t2: complex = 0.5,
          probe: Label = Label.sigma1, points: int = 73) -> list[dict]:
    rows = []
    for inner in inner_labels:
        for a in np.linspace(0, 2 * math.pi, points):
            cfg = InterferometerConfig(t1, t2, float(a), inner, probe)
            rows.append({"alpha": float(a), "sigma_xx": sigma_xx(cfg), "inner_label": str(inner)})
    return rows


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["alpha", "sigma_xx", "inner_label"],
                            lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({"alpha": f"{r['alpha']:.17g}", "sigma_xx": f"{r['sigma_xx']:.17g}",
                         "inner_label": r["inner_label"]})
    return buf.getvalue()


# ---------------------------------------------------------------------------
# stochastic initialization

def localization_probabilities() -> dict[Label, float]:
    """``d_a^2 / D^2`` over the two excitations one flux quantum can bind."""
    weights = {I: 1.0, EPS: DELTA ** 2}
    total = sum(weights.values())
    return {k: v / total for k, v in weights.items()}


P_EPS = localization_probabilities()[EPS]


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def sample_localization(rng_seed=None) -> Label:
    return EPS if _rng(rng_seed).random() < P_EPS else I


def sample_localizations(count: int, rng_seed=None) -> np.ndarray:
    """Boolean array, True where the localized excitation is eps."""
    return _rng(rng_seed).random(count) < P_EPS


def measure_qubit(pair_channel: Label) -> float:
    """Interference suppression for a pair (or single antidot) in ``pair_channel``."""
    if pair_channel not in (I, EPS):
        raise ValueError("channel must be I or eps")
    return abs(monodromy(Label.sigma1, pair_channel))


@dataclass
class AntidotState:
    occupied: Label | None = None
    flux_quanta: int = 0
    trial_count: int = 0
    log: list = field(default_factory=list)

    def __post_init__(self):
        if self.flux_quanta < 0:
            raise ValueError("flux_quanta must be nonnegative")
        if self.flux_quanta == 0 and self.occupied is not None:
            raise ValueError("an empty antidot has no occupant")


class InitializationError(RuntimeError):
    pass


def initialize_antidot(rng: np.random.Generator, max_trials: int = 1000) -> AntidotState:
    """Thread one flux quantum, measure, and start over until eps is seen."""
    state = AntidotState()
    while state.trial_count < max_trials:
        state.trial_count += 1
        state.flux_quanta = 1
        state.occupied = sample_localization(rng)
        suppression = measure_qubit(state.occupied)
        state.log.append({"trial": state.trial_count, "outcome": str(state.occupied),
                          "suppression": suppression})
        if state.occupied is EPS:
            return state
        state.flux_quanta, state.occupied = 0, None
    raise InitializationError(f"no eps localized after {max_trials} trials")


def initialize_register(n_qubits: int, rng_seed=None, max_trials: int = 1000):
    """Prepare ``2 n + 2`` antidots each holding eps; returns states and statistics."""
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    rng = _rng(rng_seed)
    states = [initialize_antidot(rng, max_trials) for _ in range(2 * n_qubits + 2)]
    trials = [s.trial_count for s in states]
    stats = {"antidots": len(states), "total_trials": sum(trials),
             "mean_trials": sum(trials) / len(trials), "expected_mean": 1 / P_EPS}
    return states, stats


def transcript(states: list[AntidotState], stats: dict) -> dict:
    return {"stats": stats,
            "antidots": [{"index": k, "occupied": str(s.occupied), "flux_quanta": s.flux_quanta,
                          "trial_count": s.trial_count, "log": s.log}
                         for k, s in enumerate(states)]}
