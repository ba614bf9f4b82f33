import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from corpus import random_word
from oracles import (all_tight_curves, brute_longest_chain, enclosed_by_winding,
                     interleaving_intersection)
from stripcut.braids import BraidWord, Letter, parse_braid
from stripcut.curves import (ChordMulticurve, DiagramError, DiskMismatch, act, canonical_equal,
                             chain_partition, intersection_number, longest_chain, reduce,
                             round_curve, round_multicurve, round_pants)


@st.composite
def words(draw, n=None, max_len=10):
    n = n or draw(st.integers(3, 6))
    letters = draw(st.lists(st.tuples(st.integers(1, n - 1), st.sampled_from((1, -1))),
                            max_size=max_len))
    return BraidWord.from_artin(n, letters)


@st.composite
def pants(draw):
    w = draw(words(max_len=8))
    return act(w, round_pants(w.n))


# -- encoding ---------------------------------------------------------------


def test_round_pants_shape():
    r = round_pants(4)
    assert r.is_pants() and r.is_round()
    assert sorted(sorted(r.enclosed(c)) for c in r.components) == [[1, 2], [1, 2, 3]]
    assert r.seg == (2, 0, 1, 1, 0)


def test_round_curve_rejects_peripheral():
    with pytest.raises(ValueError):
        round_curve(4, 1, 4)
    with pytest.raises(ValueError):
        round_multicurve(4, [(1, 3), (2, 4)])


def test_reduce_removes_bigon_and_trivial_circle():
    # c12 with an extra bigon pair inserted right of P2
    bumpy = ChordMulticurve(3, (1, 0, 3, 0), (3, 2, 1, 0), (1, 0, 3, 2))
    assert reduce(bumpy) == round_curve(3, 1, 2)
    # a circle around one puncture disappears
    assert reduce(ChordMulticurve(3, (1, 1, 0, 0), (1, 0), (1, 0))).size == 0


def test_reduce_rejects_crossing_arcs():
    with pytest.raises(DiagramError):
        reduce(ChordMulticurve(3, (2, 0, 2, 0), (2, 3, 0, 1), (1, 0, 3, 2)))


def test_json_round_trip():
    p = act(parse_braid("s2 S1 s3", 4), round_pants(4))
    assert ChordMulticurve.from_json(p.to_json()) == p
    with pytest.raises(DiagramError):
        ChordMulticurve.from_json({"n": 3, "axis": ["P1", "x0", "P2", "P3"], "upper": [], "lower": []})


def test_enclosed_agrees_with_winding_oracle():
    for c in all_tight_curves(4, 8):
        comp = c.components[0]
        assert c.enclosed(comp) == enclosed_by_winding(c, comp)


# -- braid action -----------------------------------------------------------


def test_half_twist_on_round_curves():
    # sigma_2 swaps punctures 2 and 3, so c12 is sent off the round family but c123 stays
    c12 = round_curve(4, 1, 2)
    assert act(Letter.sigma(1), c12) == c12
    assert not act(Letter.sigma(2), c12).is_round()
    assert act(Letter.sigma(2), round_curve(4, 1, 3)) == round_curve(4, 1, 3)


def test_band_generator_fixes_its_round_curve():
    c = round_curve(5, 2, 4)
    assert act(Letter.band(2, 4), c) == c
    assert act(parse_braid("d2.4", 5), round_curve(5, 1, 3)) == act(parse_braid("s2 s3 s2", 5), round_curve(5, 1, 3))


def test_act_rejects_mismatched_disk():
    with pytest.raises(DiskMismatch):
        act(parse_braid("s1", 4), round_pants(3))


@settings(max_examples=150, deadline=None)
@given(words(), st.data())
def test_inverse_cancels(w, data):
    p = act(data.draw(words(n=w.n)), round_pants(w.n))
    assert act(w.inverse() * w, p) == p
    assert act(w.inverse(), act(w, p)) == p


@settings(max_examples=150, deadline=None)
@given(pants(), st.data())
def test_braid_relations(p, data):
    n = p.n
    i = data.draw(st.integers(1, n - 2))
    s = lambda k, e=1: BraidWord(n, (Letter.sigma(k, e),))
    assert canonical_equal(act(s(i) * s(i + 1) * s(i), p), act(s(i + 1) * s(i) * s(i + 1), p))
    if n >= 4:
        j = data.draw(st.integers(1, n - 1).filter(lambda j: abs(j - i) >= 2))
        assert act(s(i) * s(j), p) == act(s(j) * s(i), p)


@settings(max_examples=100, deadline=None)
@given(pants())
def test_action_preserves_pants_and_intersections(p):
    n = p.n
    w = random_word(random.Random(p.size), n, 4)
    q = act(w, p)
    assert q.is_pants()
    for a, b in itertools.combinations(p.curves(), 2):
        assert intersection_number(a, b) == 0
    r = round_pants(n)
    for a, b in zip(p.curves(), r.curves()):
        assert intersection_number(a, b) == intersection_number(act(w, a), act(w, b))


# -- intersection numbers ---------------------------------------------------


def test_intersection_small_cases():
    c12, c23 = round_curve(3, 1, 2), round_curve(3, 2, 3)
    assert intersection_number(c12, c23) == 2
    assert intersection_number(c12, c12) == 0
    assert intersection_number(round_curve(4, 1, 2), round_curve(4, 3, 4)) == 0


def test_intersection_matches_interleaving_oracle_n3():
    cs = all_tight_curves(3, 8)
    for a, b in itertools.combinations_with_replacement(cs, 2):
        assert intersection_number(a, b) == interleaving_intersection(a, b)


@settings(max_examples=60, deadline=None)
@given(words(max_len=6), words(max_len=6))
def test_intersection_is_invariant(u, v):
    if u.n != v.n:
        return
    n = u.n
    a = act(u, round_curve(n, 1, 2))
    b = act(v, round_curve(n, 2, 3))
    g = random_word(random.Random(a.size + b.size), n, 3)
    assert intersection_number(a, b) == intersection_number(act(g, a), act(g, b))
    assert intersection_number(a, b) == intersection_number(b, a)


# -- chains -----------------------------------------------------------------


def test_chain_partition_disjoint_family():
    cp = chain_partition([round_curve(4, 1, 2), round_curve(4, 1, 3)])
    assert cp.parts == ((0, 1),) and cp.longest == 1 and cp.bound_holds


def test_chain_partition_intersecting_family():
    c12, c23 = round_curve(3, 1, 2), round_curve(3, 2, 3)
    c3 = act(parse_braid("s2 s2", 3), c12)
    cp = chain_partition([c12, c23, c3])
    assert cp.longest >= 2
    assert len(cp.chain) == len(cp.parts)
    assert cp.bound_holds


def test_chain_partition_rejects_repeats_and_multicurves():
    with pytest.raises(ValueError):
        chain_partition([round_curve(3, 1, 2), round_curve(3, 1, 2)])
    with pytest.raises(ValueError):
        chain_partition([round_pants(4)])


def random_family(rng, n, size):
    intervals = [(i, j) for i in range(1, n) for j in range(i + 1, n + 1) if (i, j) != (1, n)]
    seen, out = set(), []
    while len(out) < size:
        c = act(random_word(rng, n, rng.randint(0, 5)), round_curve(n, *rng.choice(intervals)))
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


@pytest.mark.parametrize("seed", range(25))
def test_chain_partition_against_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 5)
    fam = random_family(rng, n, rng.randint(1, 8))
    cp = chain_partition(fam)
    table = [[intersection_number(a, b) for b in fam] for a in fam]
    assert cp.longest == brute_longest_chain(table) == len(longest_chain(table))
    for part in cp.parts:
        assert all(table[i][j] == 0 for i, j in itertools.combinations(part, 2))
    assert all(table[a][b] for a, b in zip(cp.chain, cp.chain[1:]))
    assert list(cp.chain) == sorted(cp.chain)
    assert len(fam) <= (n - 2) * cp.longest
