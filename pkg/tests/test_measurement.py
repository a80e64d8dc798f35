from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toystab.algebra import commutes, pauli, toy
from toystab.demos import NLWE_BLOCKS
from toystab.measurement import (
    ImpossibleOutcome,
    Leaf,
    MissingSeed,
    Node,
    NotFound,
    expectation,
    find_observable_sequence,
    format_tree,
    measure,
    outcome_probability,
    partition,
    postselect,
    run_tree,
    tree_paths,
    validate_partition,
)
from toystab.oracle import all_states, ontic_posterior, stabilizer_partitions, support_of
from toystab.sampling import random_observable, random_state
from toystab.stabilizer import new_state, state

BELL_PARTITION = (("XX", "ZZ"), ("-XX", "ZZ"), ("ZI", "-IZ"), ("-ZI", "IZ"))


def test_expectation_examples():
    assert expectation(state("Z"), toy("Z")) == 1
    assert expectation(state("Z"), toy("X")) == 0
    assert expectation(state("XX", "YY"), toy("-ZZ")) == -1
    assert expectation(state("XX", "YY"), toy("ZZ")) == 1


def test_measure_x_on_z(rng):
    r = measure(state("Z"), toy("X"), rng)
    assert not r.deterministic
    assert r.posterior == state("X" if r.value == 1 else "-X")


def test_measure_deterministic():
    r = measure(state("Z"), toy("Z"))
    assert (r.value, r.deterministic) == (1, True)
    assert r.posterior == state("Z")


def test_measure_z1_on_bell(rng):
    for _ in range(10):
        r = measure(state("XX", "ZZ"), toy("ZI"), rng)
        sign = "+" if r.value == 1 else "-"
        assert r.posterior == state(sign + "ZI", "ZZ")
        assert r.posterior == state(sign + "ZI", sign + "IZ")


def test_trivial_observable_is_deterministic():
    s = state("X")
    assert measure(s, toy("I")) == measure(s, toy("I"))
    r = measure(s, toy("-I"))
    assert (r.value, r.deterministic, r.posterior) == (-1, True, s)


def test_missing_seed():
    with pytest.raises(MissingSeed):
        measure(state("Z"), toy("X"))


def test_qubit_measure_rejected():
    with pytest.raises(NotImplementedError):
        measure(state("Z", algebra="qubit"), pauli("X"))


def test_postselect():
    assert postselect(state("Z"), toy("X"), -1) == state("-X")
    assert postselect(state("Z"), toy("Z"), 1) == state("Z")
    with pytest.raises(ImpossibleOutcome):
        postselect(state("Z"), toy("Z"), -1)


def test_same_seed_same_outcomes():
    a = [measure(state("Z"), toy("X"), np.random.default_rng(5)).value for _ in range(3)]
    rng = np.random.default_rng(5)
    first = measure(state("Z"), toy("X"), rng).value
    assert a == [first] * 3


@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
@settings(max_examples=80, deadline=None)
def test_repeatability_and_non_disturbance(n, seed):
    rng = np.random.default_rng(seed)
    s = random_state(n, rng)
    g = random_observable(n, rng)
    r = measure(s, g, rng)
    again = measure(r.posterior, g, rng)
    assert again.deterministic and again.value == r.value and again.posterior == r.posterior
    for h in s.gens:
        if commutes(h, g):
            assert expectation(r.posterior, h) == expectation(s, h)
    if r.deterministic:
        assert r.posterior == s


def test_posterior_matches_oracle_exhaustive_n2():
    states = all_states(2)
    observables = [toy(a + b) for a in "IXYZ" for b in "IXYZ" if a + b != "II"]
    for s in states:
        sup = support_of(s).members
        for g in observables:
            probs = outcome_probability(s, g)
            for value in (1, -1):
                ontic = ontic_posterior(sup, g, value)
                if not ontic:
                    assert outcome_probability(s, g, value) == 0.0
                    continue
                assert support_of(postselect(s, g, value)).members == ontic
            # deterministic exactly when the ontic values agree across the support
            consistent = {v for v in sup if ontic_posterior({v}, g, 1)}
            assert (probs in (0.0, 1.0)) == (len(consistent) in (0, len(sup)))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_posterior_matches_oracle_random_n3(seed):
    rng = np.random.default_rng(seed)
    s = random_state(3, rng)
    g = random_observable(3, rng)
    sup = support_of(s).members
    for value in (1, -1):
        ontic = ontic_posterior(sup, g, value)
        if ontic:
            assert support_of(postselect(s, g, value)).members == ontic


# -- partitions --------------------------------------------------------------


def test_validate_partition_examples():
    assert validate_partition(partition(*(state(*b) for b in BELL_PARTITION))) is None
    assert validate_partition(partition(*(state(*b) for b in NLWE_BLOCKS))) is None
    v = validate_partition(partition(state("X"), state("Z")))
    assert v is not None and v.kind == "overlap"
    assert validate_partition(partition(state("X"))).kind == "cover"


def test_bell_partition_tree():
    tree = find_observable_sequence(partition(*(state(*b) for b in BELL_PARTITION)))
    assert isinstance(tree, Node) and tree.observable == toy("ZZ")
    assert tree.plus.observable == toy("XX")
    assert tree.minus.observable == toy("IZ")
    assert "measure +ZZ" in format_tree(tree)


def test_single_block_is_leaf():
    assert find_observable_sequence(partition(state(n=2))) == Leaf(0)


def test_tree_paths_generate_blocks():
    blocks = [state(*b) for b in BELL_PARTITION]
    tree = find_observable_sequence(partition(*blocks))
    for idx, path in tree_paths(tree):
        assert new_state(path, n=2) == blocks[idx]


def test_run_tree_reaches_block(rng):
    blocks = [state(*b) for b in BELL_PARTITION]
    tree = find_observable_sequence(partition(*blocks))
    for b in range(4):
        got, post, _ = run_tree(tree, blocks[b], rng)
        assert got == b and post == blocks[b]


def test_nlwe_has_no_tree():
    result = find_observable_sequence(partition(*(state(*b) for b in NLWE_BLOCKS)))
    assert isinstance(result, NotFound)
    assert result.certificate == (0, 1, 2)


@pytest.mark.parametrize("outcomes", [2, 3, 4])
def test_every_two_system_partition_has_a_tree(outcomes):
    parts = stabilizer_partitions(2, outcomes)
    assert parts
    for blocks in parts:
        tree = find_observable_sequence(partition(*blocks))
        assert not isinstance(tree, NotFound)
        for idx, path in tree_paths(tree):
            assert new_state(path, n=2) == blocks[idx]
