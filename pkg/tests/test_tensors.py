import random
from fractions import Fraction

import pytest

from qcframe.gauss import gr
from qcframe.tensors import (IndexedTensor, StandardConstants, conj, is_spn,
                             j_average, jmap, lower_slot, make_constants,
                             raise_slot, random_tensor, slots, spn_from_y,
                             symmetrize, y_from_spn)


@pytest.mark.parametrize("n,signature", [(1, (1, 0)), (2, (2, 0)), (3, (3, 0)),
                                         (2, (1, 1)), (3, (2, 1))])
def test_constants_invariants(n, signature):
    c = make_constants(n, signature)
    dim = 2 * n
    # hermitian and nondegenerate g, skew pi
    for a in range(1, dim + 1):
        for b in range(1, dim + 1):
            assert c.g(a, b) == c.g(b, a)
            assert c.pi(a, b) == -c.pi(b, a)
            # inverse pairing
            acc = sum((c.g_up(a, s) * c.g(s, b) for s in range(1, dim + 1)), gr(0))
            assert acc == gr(1 if a == b else 0)
    # compatibility g^{st} pi_{as} pi_{tb-bar} = -g_{ab}
    for a in range(1, dim + 1):
        for b in range(1, dim + 1):
            acc = gr(0)
            for s in range(1, dim + 1):
                for t in range(1, dim + 1):
                    acc = acc + c.g_up(s, t) * c.pi(a, s) * c.pi_bar(t, b)
            assert acc == -c.g(a, b)
    # pi^a_{s̄} pi^{s̄}_b = -delta
    for a in range(1, dim + 1):
        for b in range(1, dim + 1):
            acc = sum((c.pi_u_lbar(a, s) * c.pi_ubar_l(s, b)
                       for s in range(1, dim + 1)), gr(0))
            assert acc == gr(-1 if a == b else 0)


def test_constants_examples():
    c = make_constants(1)
    assert c.g(1, 1) == gr(1) and c.g(2, 2) == gr(1)
    assert c.pi(1, 2) == gr(1) and c.pi(2, 1) == gr(-1) and c.pi(1, 1).is_zero()
    c2 = make_constants(2)
    nonzero = {(a, b) for a in range(1, 5) for b in range(1, 5)
               if not c2.pi(a, b).is_zero()}
    assert nonzero == {(1, 3), (2, 4), (3, 1), (4, 2)}
    assert c2.pi(1, 3) == gr(1) and c2.pi(3, 1) == gr(-1)


def test_constants_rejects_bad_input():
    with pytest.raises(ValueError):
        make_constants(0)
    with pytest.raises(ValueError):
        make_constants(2, (1, 2))


def test_raise_lower_round_trip():
    rng = random.Random(3)
    c = make_constants(2)
    t = random_tensor(rng, 2, slots("lL"))
    up = raise_slot(t, 0, c)
    assert up.slots[0].variance == "upper" and up.slots[0].barred
    back = lower_slot(up, 0, c)
    assert back == t


def test_lower_delta_gives_g():
    c = make_constants(2)
    delta = IndexedTensor(2, slots("ul"))
    for a in range(1, 5):
        delta.set((a, a), 1)
    low = lower_slot(delta, 0, c)
    for a in range(1, 5):
        for b in range(1, 5):
            assert low.get(a, b) == c.g(b, a)


def test_raise_pi_twice_contracts_correctly():
    # pi^{ab} pi_{bc} = -delta^a_c by direct contraction
    c = make_constants(1)
    for a in range(1, 3):
        for cc in range(1, 3):
            acc = sum((c.pi_up(a, b) * c.pi(b, cc) for b in range(1, 3)), gr(0))
            assert acc == gr(-1 if a == cc else 0)


def test_conj_involution_and_bars():
    rng = random.Random(5)
    t = random_tensor(rng, 1, slots("lL"))
    ct = conj(t)
    assert all(s.barred != s2.barred for s, s2 in zip(t.slots, ct.slots))
    assert conj(ct) == t


def test_conj_of_pi_same_entries():
    c = make_constants(1)
    cpi = conj(c.pi_lower)
    for a in range(1, 3):
        for b in range(1, 3):
            assert cpi.get(a, b) == c.pi(a, b)  # entries are real


@pytest.mark.parametrize("spec", ["l", "lL", "llL", "lLuU"])
def test_jmap_involution_sign(spec):
    rng = random.Random(11)
    c = make_constants(1)
    sign = gr((-1) ** len(spec))
    for _ in range(200):
        t = random_tensor(rng, 1, slots(spec), span=3)
        assert jmap(jmap(t, c), c) == t.scale(sign)


def test_jmap_zero():
    c = make_constants(2)
    z = IndexedTensor(2, slots("ll"))
    assert jmap(z, c).is_zero()


def test_spn_lemma_equivalence():
    rng = random.Random(2)
    c = make_constants(1)
    for _ in range(100):
        y = j_average(symmetrize(random_tensor(rng, 1, slots("ll"))), c)
        x = spn_from_y(y, c)
        assert is_spn(x, c)
        # converse: the recovered Y is symmetric and j-invariant and
        # regenerates the same x
        y2 = y_from_spn(x, c)
        assert symmetrize(y2) == y2
        assert jmap(y2, c) == y2
        assert spn_from_y(y2, c) == x


def test_spn_rejects_hermitian():
    c = make_constants(1)
    x = IndexedTensor(1, slots("lL"))
    x.set((1, 2), gr(1, 1))
    x.set((2, 1), gr(1, -1))  # X_{a b̄} = conj(X_{b ā}): hermitian
    x.set((1, 1), gr(2))
    assert not is_spn(x, c)


def test_spn_zero_and_slot_guard():
    c = make_constants(1)
    assert is_spn(IndexedTensor(1, slots("lL")), c)
    with pytest.raises(ValueError):
        is_spn(IndexedTensor(1, slots("ll")), c)


def test_jmap_fixes_spn_members():
    rng = random.Random(8)
    c = make_constants(2)
    y = j_average(symmetrize(random_tensor(rng, 2, slots("ll"))), c)
    x = spn_from_y(y, c)
    assert jmap(x, c) == x


def test_index_out_of_range():
    t = IndexedTensor(1, slots("l"))
    with pytest.raises(ValueError):
        t.set((3,), 1)
    with pytest.raises(ValueError):
        t.get(1, 2)
