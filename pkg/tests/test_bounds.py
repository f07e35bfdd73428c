"""Tests for the closed-form norm bounds and the entanglement measure."""

import numpy as np
import pytest

import blochsep as bs

from _util import ghz, haar_ket, rand_pure


@pytest.mark.parametrize("d,expected", [(2, 1.0), (3, 4 / 3), (4, 3 / 2), (6, 5 / 3)])
def test_single_factor(d, expected):
    assert bs.single_factor(d) == pytest.approx(expected, abs=1e-15)


def test_single_factor_saturated_by_pure_qubit():
    state = bs.from_ket(bs.DimsProfile((2,)), [1, 0])
    norm = bs.correlation_tensor(state, [0]).norm_sq
    assert abs(norm - bs.single_factor(2)) <= 1e-12


@pytest.mark.parametrize("dj,dk,expected", [(2, 2, 3.0), (2, 3, 3.0), (3, 4, 32 / 9), (3, 2, 3.0)])
def test_pair_factor(dj, dk, expected):
    assert bs.pair_factor(dj, dk) == pytest.approx(expected, abs=1e-15)


def test_pair_factor_symmetric():
    for a in range(2, 7):
        for b in range(2, 7):
            assert bs.pair_factor(a, b) == bs.pair_factor(b, a)


def test_pair_factor_saturated_by_bell():
    bell = bs.from_ket(bs.DimsProfile((2, 2)), np.array([1, 0, 0, 1]) / np.sqrt(2))
    norm = bs.correlation_tensor(bell, [0, 1]).norm_sq
    assert abs(norm - bs.pair_factor(2, 2)) <= 1e-12


@pytest.mark.parametrize(
    "dims,expected",
    [
        ((2, 2, 2), 4.0),
        ((3, 4, 5), 104 / 15),
        ((2, 3, 4, 5), 14.0),
        ((2, 2, 2, 2), 9.0),
    ],
)
def test_block_bound_values(dims, expected):
    assert bs.multi_factor(dims) == pytest.approx(expected, rel=1e-14)


def test_block_bound_matches_qubit_closed_form():
    # at d = 2, n = 3 the bound is 8 (d-1)^2 (d+2) / d^3
    d = 2
    assert bs.multi_factor((d, d, d)) == pytest.approx(8 * (d - 1) ** 2 * (d + 2) / d**3)


def test_block_bound_errors():
    with pytest.raises(bs.DomainError, match="three"):
        bs.multi_factor((2, 2))
    with pytest.raises(bs.DomainError, match="ascending"):
        bs.multi_factor((3, 2, 2))
    with pytest.raises(bs.DomainError, match="constraint"):
        bs.multi_factor((2, 2, 5))


@pytest.mark.parametrize("n,d,expected", [(3, 2, 4.0), (5, 2, 58 / 3), (4, 2, 9.0)])
def test_equal_dims_bound(n, d, expected):
    assert bs.equal_dims_bound(n, d) == pytest.approx(expected, rel=1e-15)


def test_equal_dims_bound_specializes_block_bound():
    for n in (3, 4, 5):
        for d in (2, 3, 4):
            a = bs.equal_dims_bound(n, d)
            b = bs.multi_factor((d,) * n)
            assert abs(a - b) <= 1e-14 * abs(a)


def test_bounds_increase_with_dimension():
    for d in range(2, 6):
        assert bs.single_factor(d + 1) > bs.single_factor(d)
    grid = [
        (a, b, c)
        for a in range(2, 7)
        for b in range(a, 7)
        for c in range(b, 7)
        if c <= a * b
    ]
    for dims in grid:
        base = bs.multi_factor(dims)
        for pos in range(3):
            bumped = sorted(dims[:pos] + (dims[pos] + 1,) + dims[pos + 1:])
            if bumped[2] > 6 or bumped[2] > bumped[0] * bumped[1] or tuple(bumped) == dims:
                continue
            assert bs.multi_factor(bumped) > base


def test_block_factor_dispatch():
    assert bs.block_factor((3,)).rule == "single"
    assert bs.block_factor((5, 2)).rule == "pair"
    assert bs.block_factor((5, 2)).block_dims == (2, 5)
    f = bs.block_factor((2, 3, 4))
    assert f.rule == "multi"
    assert f.value == pytest.approx(6.25)


@pytest.mark.parametrize("dims", [(2, 2, 2), (2, 2, 3), (2, 3, 4), (2, 2, 2, 2)])
def test_full_norm_never_exceeds_bound(dims):
    rng = np.random.default_rng(sum(dims))
    profile = bs.DimsProfile(dims)
    bound = bs.multi_factor(dims)
    n = len(dims)
    kets = [rand_pure(profile, rng) for _ in range(50)]
    for state in kets:
        assert bs.correlation_tensor(state, range(n)).norm_sq <= bound + 1e-9
    for _ in range(25):
        i, j = rng.integers(0, len(kets), size=2)
        p = rng.uniform()
        mixed = bs.mix([(p, kets[i]), (1 - p, kets[j])])
        assert bs.correlation_tensor(mixed, range(n)).norm_sq <= bound + 1e-9


def test_ghz_saturation():
    g3 = ghz(3)
    g4 = ghz(4)
    assert abs(bs.correlation_tensor(g3, range(3)).norm_sq - bs.equal_dims_bound(3, 2)) <= 1e-10
    assert abs(bs.correlation_tensor(g4, range(4)).norm_sq - bs.equal_dims_bound(4, 2)) <= 1e-10


def test_measure_of_product_state_is_zero():
    ket = np.kron([1, 0], np.kron([1, 0], [1, 0]))
    state = bs.from_ket(bs.DimsProfile((2, 2, 2)), ket)
    assert abs(bs.entanglement_measure(state)) <= 1e-12


def test_measure_of_ghz3_hits_its_bound():
    value = bs.entanglement_measure(ghz(3))
    assert abs(value - 1.0) <= 1e-12
    assert abs(value - bs.entanglement_measure_bound(3, 2)) <= 1e-10


def test_measure_bound_values():
    assert bs.entanglement_measure_bound(3, 2) == pytest.approx(1.0, abs=1e-14)
    assert bs.entanglement_measure_bound(4, 2) == pytest.approx(2.0, abs=1e-14)


def test_measure_never_exceeds_bound_on_haar_samples():
    rng = np.random.default_rng(21)
    profile = bs.DimsProfile((2, 2, 2))
    bound = bs.entanglement_measure_bound(3, 2)
    for _ in range(50):
        state = bs.from_ket(profile, haar_ket(8, rng))
        assert bs.entanglement_measure(state) <= bound + 1e-9


def test_measure_rejects_mixed_and_heterogeneous_states():
    with pytest.raises(bs.DomainError, match="pure"):
        bs.entanglement_measure(bs.maximally_mixed(bs.DimsProfile((2, 2, 2))))
    rng = np.random.default_rng(22)
    hetero = bs.from_ket(bs.DimsProfile((2, 3, 4)), haar_ket(24, rng))
    with pytest.raises(bs.DomainError, match="equal"):
        bs.entanglement_measure(hetero)


def test_domain_errors():
    with pytest.raises(bs.DomainError):
        bs.single_factor(1)
    with pytest.raises(bs.DomainError):
        bs.pair_factor(2, 1)
    with pytest.raises(bs.DomainError):
        bs.equal_dims_bound(2, 2)
    with pytest.raises(bs.DomainError):
        bs.entanglement_measure_bound(3, 1)
