import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fibbraid.braidrep import (MAX_STRANDS, PAPER_INDICES, Q, TAU, RData, Unitary, artin_check,
                               artin_violations, basis, eigenphase_check, f_matrix, generator,
                               generators, identity, paper_generator, spectral_norm)
from fibbraid.fusion import EPS, I, Label, count_paths, path_str, register_label

# printed 4-anyon entries typed out independently of the package
q = cmath.exp(1j * math.pi / 5)
tau = (math.sqrt(5) - 1) / 2
B1_PRINTED = np.array([[q ** -1, 0], [0, -q]])
B2_PRINTED = np.array([[q ** -3 * tau, math.sqrt(tau)], [math.sqrt(tau), -q ** 3 * tau]])


def test_constants():
    assert Q == pytest.approx(q)
    assert TAU == pytest.approx(tau, abs=1e-15)
    f = f_matrix()
    assert np.allclose(f @ f, np.eye(2), atol=1e-15)
    assert np.allclose(f, [[tau, math.sqrt(tau)], [math.sqrt(tau), -tau]])


def test_four_anyon_generators_match_printed():
    g = generators(4, I)
    assert len(g) == 3
    assert np.max(np.abs(g[0].matrix - B1_PRINTED)) < 1e-15
    assert np.max(np.abs(g[1].matrix - B2_PRINTED)) < 1e-15
    assert np.max(np.abs(g[2].matrix - B1_PRINTED)) < 1e-15


def test_b2_is_f_b1_f():
    f = f_matrix()
    b1, b2 = generator(4, 1).matrix, generator(4, 2).matrix
    assert np.max(np.abs(f @ b1 @ f - b2)) < 1e-15


def test_two_anyons_one_dimensional():
    g = generator(2, 1, I)
    assert g.dim == 1
    assert g.matrix[0, 0] == pytest.approx(q ** -1)


def test_rdata_eigenvalues():
    ev = sorted(RData().eigenvalues, key=cmath.phase)
    assert {round(cmath.phase(x) / math.pi, 12) for x in ev} == {-0.2, -0.8}


@pytest.mark.parametrize("n,i", PAPER_INDICES)
def test_generic_vs_printed(n, i):
    p = paper_generator(n, i)
    g = generator(n, i, I).in_basis(p.basis)
    dev = np.max(np.abs(g.matrix - p.matrix))
    if (n, i) in ((6, 3), (8, 3)):
        # the printed mixing block has its diagonal swapped
        assert dev == pytest.approx(tau ** 2, abs=1e-12)
        fixed = paper_generator(n, i, corrected=True)
        assert np.max(np.abs(g.matrix - fixed.matrix)) < 1e-12
    else:
        assert dev < 1e-12


def test_corrected_b36_restores_artin():
    mats = [paper_generator(6, i, corrected=True).matrix for i in range(1, 6)]
    assert artin_violations(mats)["max_violation"] < 1e-12
    printed = [paper_generator(6, i).matrix for i in range(1, 6)]
    assert artin_violations(printed)["max_violation"] > 0.1


def test_six_anyon_register_labels():
    labels = [register_label(p) for p in basis(6, I, "register")]
    assert labels == ["00", "01", "10", "11", "3+3"]


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8, 9, 10])
@pytest.mark.parametrize("charge", [I, EPS])
def test_artin_relations(n, charge):
    if count_paths(n, charge) == 0:
        pytest.skip("empty space")
    assert artin_check(n, charge)["max_violation"] < 1e-11


@pytest.mark.parametrize("n", [4, 6, 8])
def test_unitary_and_spectrum(n):
    for charge in (I, EPS):
        for g in generators(n, charge):
            assert g.unitarity_error() < 1e-13
            assert eigenphase_check(g) < 1e-12


def test_recursive_direct_sum():
    # B_i^(8) = B_i^(6) (+) B_i^(7) in the recursive order for i <= 5
    for i in range(1, 6):
        b8 = generator(8, i, I, kind="recursive").matrix
        b6 = generator(6, i, I, kind="recursive").matrix
        b7 = generator(7, i, I, kind="recursive").matrix
        assert np.max(np.abs(b8[:5, :5] - b6)) < 1e-14
        assert np.max(np.abs(b8[5:, 5:] - b7)) < 1e-14
        assert np.max(np.abs(b8[:5, 5:])) < 1e-15


def test_unitary_helpers():
    g = generator(4, 2)
    assert np.allclose((g @ g.dagger()).matrix, np.eye(2))
    assert np.allclose(g.power(10).matrix, np.eye(2) * g.power(10).matrix[0, 0])
    assert identity(g.basis).dim == 2
    assert spectral_norm(np.diag([3, -4])) == pytest.approx(4)
    assert [path_str(p) for p in g.basis] == ["I e I e I", "I e e e I"]


def test_errors():
    with pytest.raises(ValueError):
        generator(4, 4)
    with pytest.raises(ValueError):
        generator(MAX_STRANDS + 1, 1)
    with pytest.raises(ValueError):
        generator(4, 1, Label.sigma1)
    with pytest.raises(ValueError):
        paper_generator(10, 1)
    with pytest.raises(ValueError):
        Unitary(np.eye(2), basis(6, I))


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 11), st.data())
def test_far_commutation_property(n, data):
    i = data.draw(st.integers(1, n - 1))
    j = data.draw(st.integers(1, n - 1))
    charge = data.draw(st.sampled_from([I, EPS]))
    if count_paths(n, charge) == 0 or abs(i - j) < 2:
        return
    a, b = generator(n, i, charge).matrix, generator(n, j, charge).matrix
    assert np.max(np.abs(a @ b - b @ a)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_hexagon_free_rdata_still_unitary(a, b):
    # arbitrary phases keep the generators unitary even when Artin fails
    rd = RData(cmath.exp(1j * a), cmath.exp(1j * b))
    assert generator(6, 3, I, rd).unitarity_error() < 1e-12
