import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fibbraid.fusion import (DELTA, EPS, FUSION_TABLE, I, ONE, Golden, Label, QubitWord,
                             computational_paths, count_paths, decode, encode, enumerate_paths,
                             fuse, golden_groups, is_admissible, nc_paths, parse_path, path_str,
                             recursive_paths, register_label, run_label)


def brute_paths(n, charge):
    """Every I/eps sequence of length n+1 filtered by the no-two-I rule."""
    out = []
    for tail in itertools.product((I, EPS), repeat=n):
        p = (I,) + tail
        if p[-1] is charge and is_admissible(p):
            out.append(p)
    return out


def test_golden_arithmetic():
    assert DELTA * DELTA == DELTA + ONE
    assert float(DELTA) == pytest.approx((1 + 5 ** 0.5) / 2)
    assert Golden(Fraction(1, 2), 3) - Golden(Fraction(1, 2), 3) == Golden()
    assert str(DELTA) == "delta"


def test_fusion_table_examples():
    assert fuse(EPS, EPS) == {I: 1, EPS: 1}
    assert fuse(Label.sigma1, Label.sigma2) == {I: 1, EPS: 1}
    assert fuse(Label.psi1, Label.psi2) == {I: 1}
    assert fuse(I, Label.sigma2) == {Label.sigma2: 1}


def test_fusion_table_is_complete():
    for a, b in itertools.combinations_with_replacement(list(Label), 2):
        assert frozenset((a, b)) in FUSION_TABLE


@pytest.mark.parametrize("a,b", list(itertools.product(list(Label), repeat=2)))
def test_quantum_dimensions_multiply(a, b):
    # d_a d_b = sum_c N_ab^c d_c holds exactly in Q(sqrt 5)
    total = Golden()
    for c, mult in fuse(a, b).items():
        total = total + c.quantum_dimension * mult
    assert a.quantum_dimension * b.quantum_dimension == total


@pytest.mark.parametrize("a,b,c", list(itertools.product(list(Label), repeat=3)))
def test_fusion_associative(a, b, c):
    left, right = {}, {}
    for x, m in fuse(a, b).items():
        for y, k in fuse(x, c).items():
            left[y] = left.get(y, 0) + m * k
    for x, m in fuse(b, c).items():
        for y, k in fuse(a, x).items():
            right[y] = right.get(y, 0) + m * k
    assert left == right


@pytest.mark.parametrize("a", list(Label))
def test_z3_charge_additive(a):
    for b in Label:
        for c in fuse(a, b):
            assert c.z3_charge == (a.z3_charge + b.z3_charge) % 3


def test_label_data():
    assert Label.eps.conformal_dimension == Fraction(2, 5)
    assert Label.sigma1.conformal_dimension == Fraction(1, 15)
    assert Label.psi1.conformal_dimension == Fraction(2, 3)
    assert Label.eps.weight == (1, 2)
    assert Label.from_weight(2, 1) is Label.eps
    assert Label.parse("e") is EPS
    assert not EPS.is_abelian and Label.psi2.is_abelian
    with pytest.raises(ValueError):
        Label.parse("tau")


@pytest.mark.parametrize("n,want", [(4, 2), (6, 5), (8, 13), (10, 34)])
def test_count_paths_charge_i(n, want):
    assert count_paths(n, I) == want


@pytest.mark.parametrize("n", range(1, 13))
def test_count_paths_brute(n):
    for charge in (I, EPS):
        assert count_paths(n, charge) == len(brute_paths(n, charge))
        assert list(enumerate_paths(n, charge)) == sorted(
            brute_paths(n, charge), key=lambda p: [x is EPS for x in p])


@pytest.mark.parametrize("n", range(2, 13))
def test_recursive_order_is_permutation(n):
    for charge in (I, EPS):
        assert sorted(recursive_paths(n, charge), key=path_str) == sorted(
            enumerate_paths(n, charge), key=path_str)


def test_recursive_order_eight_anyons():
    labels = [register_label(p) for p in recursive_paths(8, I)]
    assert labels == ["000", "100", "3+3+2", "010", "110", "3+2+3", "2+3+3", "5+3",
                      "001", "101", "3+5", "011", "111"]


def test_count_paths_errors():
    with pytest.raises(ValueError):
        count_paths(0, I)
    with pytest.raises(ValueError):
        count_paths(4, Label.sigma1)


def test_nc_counts():
    assert [len(nc_paths(q)) for q in (1, 2, 3)] == [0, 1, 5]


def test_register_examples():
    assert encode([1, 0]) == parse_path("I e e e I e I")
    assert str(decode(encode([1, 0]), 2)) == "10"
    nc = nc_paths(2)[0]
    word = decode(nc, 2)
    assert not word.is_computational and word.run == "3+3"
    assert run_label(nc) == "3+3"
    assert nc == parse_path("I e e I e e I")
    assert golden_groups(nc) == [(I, 1), (EPS, 2), (I, 1), (EPS, 2), (I, 1)]
    assert computational_paths(2)[1] == encode([0, 1])


def test_register_validation():
    with pytest.raises(ValueError):
        decode(encode([1, 0]), 3)
    with pytest.raises(ValueError):
        encode([2])
    with pytest.raises(ValueError):
        parse_path("I I e")


@given(st.lists(st.integers(0, 1), min_size=1, max_size=6))
def test_encode_decode_roundtrip(bits):
    word = decode(encode(bits), len(bits))
    assert word == QubitWord(bits=tuple(bits), run=word.run)
    assert is_admissible(encode(bits))


@given(st.integers(1, 5))
def test_register_splits_paths(nq):
    comp = set(computational_paths(nq))
    nc = set(nc_paths(nq))
    assert not comp & nc
    assert comp | nc == set(enumerate_paths(2 * nq + 2, I))
