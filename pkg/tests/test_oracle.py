from __future__ import annotations

import pytest

from toystab.algebra import commutes, eigenvalue, ontic_from_labels, toy
from toystab.circuit import dense_coding_source, parse
from toystab.oracle import (
    all_state_formula,
    count,
    disturbance_set,
    enumerate_all_states,
    enumerate_pure_states,
    enumerate_transformations,
    ontic_measure,
    oracle_check_circuit,
    pure_state_formula,
    support_of,
    transformation_formula,
)
from toystab.stabilizer import state

ALL_OBSERVABLES_2 = [toy(a + b) for a in "IXYZ" for b in "IXYZ"]


def labels(*items):
    return {ontic_from_labels(x if isinstance(x, tuple) else (x,)) for x in items}


def test_support_examples():
    assert support_of(state("X")).members == labels(1, 3)
    assert support_of(state(n=1)).members == labels(1, 2, 3, 4)
    ghz = support_of(state("XXX", "ZZI", "IZZ")).members
    want = [(1, 1, 1), (1, 2, 2), (2, 1, 2), (2, 2, 1), (3, 3, 3), (3, 4, 4), (4, 3, 4), (4, 4, 3)]
    assert ghz == labels(*want)


def test_support_guard():
    with pytest.raises(ValueError):
        support_of(state(n=9))


def test_ontic_measure_examples(rng):
    one = ontic_from_labels((1,))
    seen = {ontic_measure(one, toy("X"), rng)[1] for _ in range(200)}
    assert {ontic_measure(one, toy("X"), rng)[0] for _ in range(5)} == {1}
    assert seen == labels(1, 3)
    for v in range(4):
        assert ontic_measure(v, toy("I"), rng) == (1, v)
    v = ontic_from_labels((1, 1))
    # X1X2, Z1 and Z2 all commute with Z1Z2, so only 1.1 and 2.2 keep every value
    assert set(disturbance_set(v, toy("ZZ"))) == labels((1, 1), (2, 2))
    assert ontic_measure(v, toy("ZZ"), rng)[0] == 1


def test_ontic_measure_keeps_commuting_and_scrambles_anticommuting():
    for g in ALL_OBSERVABLES_2[1:]:
        for v in range(16):
            after = disturbance_set(v, g)
            for h in ALL_OBSERVABLES_2[1:]:
                vals = [eigenvalue(h, u) for u in after]
                if commutes(g, h):
                    assert set(vals) == {eigenvalue(h, v)}
                else:
                    assert vals.count(1) == vals.count(-1)


@pytest.mark.parametrize("n,want", [(1, 6), (2, 60), (3, 1080)])
def test_pure_state_counts(n, want):
    rep = enumerate_pure_states(n)
    assert rep.ok and rep.formula_value == rep.enumerated_value == want == pure_state_formula(n)


@pytest.mark.parametrize("n,want", [(0, 1), (1, 7), (2, 91)])
def test_all_state_counts(n, want):
    rep = enumerate_all_states(n)
    assert rep.ok and rep.enumerated_value == want == all_state_formula(n)
    if n == 2:
        assert rep.extra["support_based"] == 91 and rep.extra["support_sets_ok"]


@pytest.mark.parametrize("n,want", [(1, 24), (2, 11520)])
def test_transformation_counts(n, want):
    rep = enumerate_transformations(n)
    assert rep.ok and rep.enumerated_value == want == transformation_formula(n)
    if n == 1:
        assert rep.extra["ontic_valid"] == 24 and rep.extra["bijection_ok"]


def test_count_line_and_methods():
    assert count("pure_states", 2).line() == "pure_states 2 60 60 OK"
    assert count("transformations", 5, "formula").formula_value == transformation_formula(5)
    with pytest.raises(ValueError):
        count("nonsense", 1)
    with pytest.raises(ValueError):
        count("pure_states", 4, "enumerate")


@pytest.mark.parametrize("bits", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_oracle_dense_coding(bits):
    rep = oracle_check_circuit(parse(dense_coding_source(*bits)), trials=1000, seed=1)
    assert rep.ok, rep.lines()


def test_oracle_random_x_frequency():
    rep = oracle_check_circuit(parse("mode toy\nsystems 1\nstate +Z\nmeasure +X\n"), trials=10_000, seed=3)
    assert rep.ok
    (count_, plus, _), = rep.frequencies.values()
    assert count_ == 10_000 and 0.45 <= plus / count_ <= 0.55


def test_oracle_empty_circuit():
    rep = oracle_check_circuit(parse("mode toy\nsystems 2\n"), trials=10, seed=0)
    assert rep.ok and rep.first_divergence is None


def test_oracle_longer_circuit():
    src = "\n".join(
        [
            "mode toy",
            "systems 3",
            "state +ZII +IZI +IIZ",
            "gate h 1",
            "gate cnot 1 2",
            "gate perm 3 (2431)",
            "measure +XXI",
            "gate s 2",
            "measure +IYZ",
            "gate cz 2 3",
            "measure +ZII",
            "expect +ZZI",
        ]
    )
    assert oracle_check_circuit(parse(src), trials=500, seed=4).ok


def test_oracle_rejects_qubit_and_large():
    with pytest.raises(ValueError):
        oracle_check_circuit(parse("mode qubit\nsystems 1\nstate +Z\n"))
    with pytest.raises(ValueError):
        oracle_check_circuit(parse("mode toy\nsystems 5\n"))
