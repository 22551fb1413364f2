import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fibbraid import interferometry
from fibbraid.fusion import EPS, I, Label
from fibbraid.interferometry import (P_EPS, AntidotState, InitializationError,
                                     InterferometerConfig, SectorLabel,
                                     allowed_localized_excitations, initialize_antidot,
                                     initialize_register, localization_probabilities,
                                     measure_qubit, monodromy, sample_localizations, sigma_xx,
                                     sweep, sweep_csv, transcript, visibility)

DELTA = (1 + math.sqrt(5)) / 2


def test_monodromy_table():
    assert monodromy(Label.sigma1, I) == 1.0
    assert monodromy(Label.sigma2, EPS) == pytest.approx(-0.3819660112501051, abs=1e-15)
    with pytest.raises(ValueError):
        monodromy(Label.psi1, EPS)


def test_monodromy_from_s_matrix_ratio():
    # S_{sigma,b} S_{I,I} / (S_{I,sigma} S_{I,b}) for the Fibonacci factor of the sigma fields
    s = np.array([[1, DELTA], [DELTA, -1]]) / math.sqrt(2 + DELTA)
    ratio = s[1, 1] * s[0, 0] / (s[0, 1] * s[0, 1])
    assert monodromy(Label.sigma1, EPS) == pytest.approx(ratio, abs=1e-15)


def test_allowed_excitations():
    got = allowed_localized_excitations()
    assert [(s.l, s.pf) for s in got] == [(3, I), (3, EPS)]
    assert got[0].charge == pytest.approx(0.6)
    with pytest.raises(ValueError):
        SectorLabel(3, Label.sigma1)
    with pytest.raises(ValueError):
        allowed_localized_excitations(2)


def test_visibility_ratio():
    assert visibility(EPS) / visibility(I) == pytest.approx(1 / DELTA ** 2, abs=1e-12)


@settings(max_examples=50)
@given(st.floats(0, 1), st.floats(0, 1), st.floats(-10, 10))
def test_sigma_xx_bounds(t1, t2, alpha):
    for inner in (I, EPS):
        v = sigma_xx(InterferometerConfig(t1, t2, alpha, inner))
        assert (t1 - t2) ** 2 - 1e-12 <= v <= (t1 + t2) ** 2 + 1e-12


def test_sigma_xx_closed_form():
    cfg = InterferometerConfig(0.3, 0.4, 1.1, EPS)
    want = 0.09 + 0.16 + 2 * 0.12 * math.cos(1.1) * (-1 / DELTA ** 2)
    assert sigma_xx(cfg) == pytest.approx(want, abs=1e-15)
    with pytest.raises(ValueError):
        InterferometerConfig(1.5, 0.1)
    with pytest.raises(ValueError):
        InterferometerConfig(probe=EPS)


def test_sweep_csv():
    rows = sweep(points=3)
    text = sweep_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == "alpha,sigma_xx,inner_label"
    assert len(lines) == 7
    assert lines[1] == "0,1,I"


def test_probabilities():
    p = localization_probabilities()
    assert p[EPS] == pytest.approx(DELTA ** 2 / (1 + DELTA ** 2))
    assert p[EPS] / p[I] == pytest.approx(DELTA ** 2)
    assert sum(p.values()) == pytest.approx(1)


def test_monte_carlo_frequency():
    n = 100_000
    freq = sample_localizations(n, 2024).mean()
    assert abs(freq - P_EPS) <= 3 * math.sqrt(P_EPS * (1 - P_EPS) / n)


def test_seeded_reproducibility():
    assert np.array_equal(sample_localizations(50, 9), sample_localizations(50, 9))


def test_initialization_statistics():
    rng = np.random.default_rng(11)
    trials = [initialize_antidot(rng).trial_count for _ in range(20_000)]
    # geometric distribution with success probability p_eps
    assert np.mean(trials) == pytest.approx(1 / P_EPS, rel=0.02)


def test_initialize_register():
    states, stats = initialize_register(2, 5)
    assert len(states) == 6
    assert all(s.occupied is EPS and s.flux_quanta == 1 for s in states)
    assert stats["total_trials"] == sum(s.trial_count for s in states)
    tr = transcript(states, stats)
    assert tr["antidots"][0]["log"][-1]["outcome"] == "eps"
    with pytest.raises(ValueError):
        initialize_register(0)


def test_initialization_failure(monkeypatch):
    monkeypatch.setattr(interferometry, "sample_localization", lambda rng: I)
    with pytest.raises(InitializationError):
        initialize_antidot(np.random.default_rng(0), max_trials=5)


def test_measure_and_state_validation():
    assert measure_qubit(I) == 1.0
    assert measure_qubit(EPS) == pytest.approx(1 / DELTA ** 2)
    with pytest.raises(ValueError):
        measure_qubit(Label.sigma1)
    with pytest.raises(ValueError):
        AntidotState(occupied=EPS)
    with pytest.raises(ValueError):
        AntidotState(flux_quanta=-1)
