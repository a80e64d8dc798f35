from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toystab.algebra import CheckVector, ToyObservable, m_map, ontic_from_labels, toy
from toystab.oracle import all_states, support_of
from toystab.sampling import random_state, random_transformation
from toystab.stabilizer import state
from toystab.transform import (
    ElementaryPermutation,
    InvalidTransformation,
    all_elementary_permutations,
    apply,
    apply_to_observable,
    compose,
    from_permutation,
    gate,
    identity_transformation,
    invert,
    is_valid_ontic_permutation,
    local_gate,
    new_transformation,
    ontic_permutation,
    tensor_transformations,
    transformation,
    validate_transformation,
)

# cycles, image of X, image of Z
ELEMENTARY_TABLE = [
    ("(1)(2)(3)(4)", "+X", "+Z"),
    ("(1)(2)(43)", "+Y", "+Z"),
    ("(1)(32)(4)", "+Z", "+X"),
    ("(1)(342)", "+Y", "+X"),
    ("(1)(432)", "+Z", "+Y"),
    ("(1)(42)(3)", "+X", "+Y"),
    ("(21)(3)(4)", "-Y", "+Z"),
    ("(21)(43)", "-X", "+Z"),
    ("(231)(4)", "+Z", "-Y"),
    ("(2341)", "-X", "-Y"),
    ("(2431)", "+Z", "-X"),
    ("(241)(3)", "-Y", "-X"),
    ("(321)(4)", "-Y", "+X"),
    ("(3421)", "-Z", "+X"),
    ("(31)(2)(4)", "+X", "-Y"),
    ("(341)(2)", "-Z", "-Y"),
    ("(31)(42)", "+X", "-Z"),
    ("(3241)", "-Y", "-Z"),
    ("(4321)", "-X", "+Y"),
    ("(421)(3)", "-Z", "+Y"),
    ("(431)(2)", "+Y", "-X"),
    ("(41)(2)(3)", "-Z", "-X"),
    ("(4231)", "+Y", "-Z"),
    ("(41)(32)", "-X", "-Z"),
]

CNOT_IMAGES = ("+XX", "+IX", "+ZI", "+ZZ")


def images(t):
    return tuple(str(g) for g in t.images)


def power(t, k):
    out = identity_transformation(t.n, t.algebra)
    for _ in range(k):
        out = compose(t, out)
    return out


# -- validation --------------------------------------------------------------


def test_cnot_is_valid():
    assert validate_transformation([toy(s) for s in CNOT_IMAGES]) is None


def test_commuting_originals_must_stay_commuting():
    v = validate_transformation([toy("XI"), toy("ZI"), toy("ZI"), toy("IZ")])
    assert v is not None
    with pytest.raises(InvalidTransformation):
        new_transformation([toy("XI"), toy("ZI"), toy("ZI"), toy("IZ")])


def test_singular_matrix_rejected():
    assert validate_transformation([toy("X"), toy("X")]) is not None


def test_identity_is_valid():
    t = identity_transformation(3)
    assert validate_transformation(list(t.images)) is None


def test_m_map_preserves_validity_exhaustive_n1():
    letters = ["X", "Y", "Z", "I"]
    for a, b in itertools.product(letters, repeat=2):
        for sa, sb in itertools.product("+-", repeat=2):
            gens = [toy(sa + a), toy(sb + b)]
            qgens = [m_map(g) for g in gens]
            assert (validate_transformation(gens) is None) == (validate_transformation(qgens) is None)


# -- action ------------------------------------------------------------------


def test_x_gate_examples():
    t = gate("x", 0, n=1)
    assert apply_to_observable(t, toy("Z")) == toy("-Z")
    assert apply_to_observable(t, toy("X")) == toy("X")


def test_identity_action(rng):
    t = identity_transformation(2)
    for g in ("XY", "-ZI", "II", "-II"):
        assert apply_to_observable(t, toy(g)) == toy(g)
    s = random_state(3, rng)
    assert apply(identity_transformation(3), s) == s


def test_minus_identity_maps_to_minus_identity(rng):
    t = random_transformation(3, rng)
    assert apply_to_observable(t, toy("-III")) == toy("-III")


def test_dense_coding_apply():
    t = compose(gate("z", 0, n=2), gate("x", 0, n=2))
    assert apply(t, state("XX", "ZZ")) == state("-XX", "-ZZ")


def test_cz_on_plus_pair():
    assert apply(gate("cz", 0, 1, n=2), state("XI", "IX")) == state("XZ", "ZX")


def test_qubit_gates_textbook():
    assert images(local_gate("h", "qubit")) == ("+Z", "+X")
    assert images(local_gate("s", "qubit")) == ("+Y", "+Z")
    assert images(local_gate("cnot", "qubit")) == CNOT_IMAGES


# -- group structure ---------------------------------------------------------


@pytest.mark.parametrize("name", ["x", "z", "h"])
def test_involutions(name):
    t = local_gate(name)
    assert compose(t, t) == identity_transformation(1)


def test_four_cycle_has_order_four():
    t = from_permutation("(4231)")
    assert power(t, 2) != identity_transformation(1)
    assert power(t, 4) == identity_transformation(1)


@given(st.integers(1, 4), st.integers(0, 2**32 - 1), st.sampled_from(["toy", "qubit"]))
@settings(max_examples=60, deadline=None)
def test_inverse_and_composition_stay_valid(n, seed, algebra):
    rng = np.random.default_rng(seed)
    t1 = random_transformation(n, rng, algebra)
    t2 = random_transformation(n, rng, algebra)
    ident = identity_transformation(n, algebra)
    assert compose(invert(t1), t1) == ident
    assert compose(t1, invert(t1)) == ident
    c = compose(t2, t1)
    assert validate_transformation(list(c.images)) is None
    assert validate_transformation(list(invert(t1).images)) is None
    g = random_transformation(n, rng, algebra).images[0]
    assert apply_to_observable(c, g) == apply_to_observable(t2, apply_to_observable(t1, g))


def test_single_system_group_is_s4():
    perms = all_elementary_permutations()
    transforms = {p: from_permutation(p) for p in perms}
    assert len(set(transforms.values())) == 24
    by_t = {t: p for p, t in transforms.items()}
    for p, q in itertools.product(perms, repeat=2):
        # doing p then q on ontic states is compose(q, p) on observables
        assert by_t[compose(transforms[q], transforms[p])] == p.then(q)


def test_generated_by_transposition_and_four_cycle():
    gens = [from_permutation("(1)(32)(4)"), from_permutation("(4231)")]
    seen = {identity_transformation(1)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for t in frontier:
            for g in gens:
                u = compose(g, t)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    assert len(seen) == 24


# -- elementary permutations -------------------------------------------------


@pytest.mark.parametrize("cycles,x,z", ELEMENTARY_TABLE)
def test_elementary_table(cycles, x, z):
    t = from_permutation(cycles)
    assert images(t) == (x, z)
    assert ElementaryPermutation.from_cycles(cycles).cycles() == cycles


def test_from_cycles_rejects_bad_text():
    for bad in ("(11)", "(5)", "(12", "12"):
        with pytest.raises(ValueError):
            ElementaryPermutation.from_cycles(bad)


def test_ontic_permutation_round_trip():
    for p in all_elementary_permutations():
        assert ontic_permutation(from_permutation(p)) == tuple(p(k + 1) - 1 for k in range(4))
    assert ontic_permutation(identity_transformation(2)) == tuple(range(16))


def test_x_gate_ontic_action():
    # swaps 1<->3 and 2<->4: X values kept, Z values flipped
    assert ontic_permutation(local_gate("x")) == (2, 3, 0, 1)


def test_composite_table():
    first = transformation("-YI", "+IX", "+ZI", "-IY")
    assert first == tensor_transformations(from_permutation("(21)(3)(4)"), from_permutation("(31)(2)(4)"))
    assert images(gate("cnot", 0, 1, n=2)) == CNOT_IMAGES
    assert images(transformation(*CNOT_IMAGES)) == CNOT_IMAGES


def test_valid_ontic_permutations_at_n1():
    for perm in itertools.permutations(range(4)):
        assert is_valid_ontic_permutation(perm, 1)


def test_invalid_two_system_permutation():
    perm = list(range(16))
    for a, b in [((1, 2), (3, 1)), ((1, 4), (3, 3)), ((2, 2), (4, 1)), ((2, 4), (4, 3))]:
        i, j = ontic_from_labels(a), ontic_from_labels(b)
        perm[i], perm[j] = j, i
    assert not is_valid_ontic_permutation(perm, 2)
    cnot = ontic_permutation(gate("cnot", 0, 1, n=2))
    assert is_valid_ontic_permutation(cnot, 2)


# -- support transport -------------------------------------------------------


def _transport(t, s, perm):
    before = support_of(s).members
    after = support_of(apply(t, s)).members
    return {perm[v] for v in before} == after


def test_support_transport_exhaustive_n1():
    for p in all_elementary_permutations():
        t = from_permutation(p)
        perm = ontic_permutation(t)
        for s in all_states(1):
            assert _transport(t, s, perm)


def test_support_transport_exhaustive_n2_gates():
    states = all_states(2)
    ts = [gate(name, *sys, n=2) for name, sys in [("cnot", (0, 1)), ("cnot", (1, 0)), ("cz", (0, 1))]]
    ts += [gate(name, k, n=2) for name in ("x", "z", "h", "s") for k in (0, 1)]
    for t in ts:
        perm = ontic_permutation(t)
        for s in states:
            assert _transport(t, s, perm)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_support_transport_random_n3(seed):
    rng = np.random.default_rng(seed)
    t = random_transformation(3, rng)
    s = random_state(3, rng)
    assert _transport(t, s, ontic_permutation(t))


def test_embed_matches_tensor():
    h = local_gate("h")
    assert gate("h", 1, n=2) == tensor_transformations(identity_transformation(1), h)
    g = ToyObservable(CheckVector(2, 0b10, 0))
    assert apply_to_observable(gate("h", 1, n=2), g) == toy("IZ")
