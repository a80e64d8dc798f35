from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toystab.algebra import CheckVector, ToyObservable, toy
from toystab.measurement import MissingSeed, expectation, measure
from toystab.sampling import random_circuit, random_observable, random_state
from toystab.stabilizer import new_state, state
from toystab.tableau import ToyTableau
from toystab.transform import apply, from_permutation, gate


def test_round_trip(rng):
    for n in range(1, 6):
        for _ in range(10):
            s = random_state(n, rng)
            tab = ToyTableau.from_state(s)
            tab.check_invariants()
            assert tab.to_state() == s


def test_trivial():
    tab = ToyTableau.trivial(3)
    assert tab.num_generators == 0
    assert tab.expectation(toy("ZII")) == 0
    assert tab.expectation(toy("-III")) == -1


def test_rejects_qubit():
    with pytest.raises(ValueError):
        ToyTableau.from_state(state("Z", algebra="qubit"))


def test_measure_without_rng():
    tab = ToyTableau.from_state(state("Z"))
    assert tab.measure(toy("-Z")) == (-1, True)
    with pytest.raises(MissingSeed):
        tab.measure(toy("X"))


def test_perm_gate():
    tab = ToyTableau.from_state(state("X"))
    tab.apply_gate(from_permutation("(4231)"), 0)
    assert tab.to_state() == state("Y")


@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_matches_symbolic_engine(n, seed):
    rng = np.random.default_rng(seed)
    s = random_state(n, rng)
    tab = ToyTableau.from_state(s)
    ops = random_circuit(n, 25, rng, measure_fraction=0.4, local=bool(seed & 1))
    draws_a = np.random.default_rng(seed + 1)
    draws_b = np.random.default_rng(seed + 1)
    for op in ops:
        if op[0] == "gate":
            _, name, systems = op
            tab.apply_gate(name, *systems)
            s = apply(gate(name, *systems, n=n), s)
        else:
            g = op[1]
            value, det = tab.measure(g, draws_a)
            r = measure(s, g, draws_b)
            assert (value, det) == (r.value, r.deterministic)
            s = r.posterior
        assert tab.to_state() == s
    tab.check_invariants()
    probe = random_observable(n, rng)
    assert tab.expectation(probe) == expectation(s, probe)


def test_postselect():
    tab = ToyTableau.from_state(state("XX", "ZZ"))
    tab.postselect(toy("ZI"), -1)
    assert tab.to_state() == state("-ZI", "-IZ")
    with pytest.raises(ValueError):
        tab.postselect(toy("IZ"), 1)


def test_copy_is_independent():
    tab = ToyTableau.from_state(state("ZI", "IZ"))
    other = tab.copy()
    other.apply_gate("x", 0)
    assert tab.to_state() == state("ZI", "IZ")
    assert other.to_state() == state("-ZI", "IZ")


def test_wide_tableau_crosses_word_boundary(rng):
    n = 130
    zs = [ToyObservable(CheckVector(n, 0, 1 << k)) for k in range(n)]
    tab = ToyTableau.from_state(new_state(zs, n=n))
    tab.apply_gate("h", 0)
    for k in (64, 129):
        tab.apply_gate("cnot", 0, k)
    tab.measure(toy("Z" + "I" * (n - 1)), rng)
    tab.check_invariants()
    assert tab.expectation(toy("Z" + "I" * 63 + "Z" + "I" * 65)) == 1
    assert tab.expectation(toy("Z" + "I" * 128 + "Z")) == 1
    assert tab.num_generators == n
