import pytest
from hypothesis import given, settings, strategies as st

from corpus import pants_corpus
from oracles import naive_cut_sequence, naive_decomposition
from stripcut.braids import BraidWord, parse_braid
from stripcut.curves import act, round_curve, round_pants
from stripcut.strips import (LOOP_CLOSURE, MERGE, STRETCH_SHRINK, MarkerError, SpiralGroup,
                             canonical_trace, initial_decomposition, renormalized_count,
                             spiralled_curve, strip_cut, strip_decompose)

# counts and complete spirallings of act(s1^(2k), c23), n = 3, k = 1..6; raw cut
# counts agree with the from-scratch oracle, grouping read off the step-through
TWIST_COUNTS = [6, 9, 11, 11, 11, 11]
TWIST_COMPLETE = [0, 0, 0, 1, 2, 3]
TWIST_RAW = [6, 9, 11, 13, 15, 17]


def as_sets(d):
    strips = frozenset(frozenset((e.side, e.lo, e.hi) for e in s.ends) for s in d.strips)
    loops = frozenset(frozenset(d.pants.components[i]) for i in d.loops)
    return strips, loops


def test_round_pants_three_initial_decomposition():
    d = initial_decomposition(round_pants(3))
    assert len(d.strips) == 2 and not d.loops
    assert all(s.width == 1 for s in d.strips)
    left = sorted(min(s.ends) for s in d.strips)
    right = sorted(max(s.ends) for s in d.strips)
    assert (left[0].lo, left[0].hi) == (left[1].lo, left[1].hi)
    assert (right[0].lo, right[0].hi) == (right[1].lo, right[1].hi)


def test_empty_cutter_gives_only_loops():
    p = round_pants(5)
    d = strip_decompose(p, 0)
    assert not d.strips and sorted(d.loops) == list(range(3))


def test_total_width_after_half_twist():
    d = initial_decomposition(act(parse_braid("s2", 3), round_pants(3)))
    assert d.total_width == 4


def test_bad_inputs():
    with pytest.raises(MarkerError):
        strip_decompose(round_pants(3), 3)
    with pytest.raises(ValueError):
        strip_decompose(round_curve(4, 1, 2), 2)
    with pytest.raises(ValueError):
        strip_cut(strip_decompose(round_pants(3), 0))


def test_round_pants_three_trace():
    d = initial_decomposition(round_pants(3))
    d1, e1 = strip_cut(d)
    assert e1.kind == MERGE and len(d1.strips) == 1
    d2, e2 = strip_cut(d1)
    assert e2.kind == LOOP_CLOSURE and not d2.strips and len(d2.loops) == 1
    tr = canonical_trace(round_pants(3))
    assert [e.kind for e in tr.events] == [MERGE, LOOP_CLOSURE]
    assert renormalized_count(tr) == 2 and not tr.groups


@pytest.mark.parametrize("n", range(3, 8))
def test_round_pants_count(n):
    tr = canonical_trace(round_pants(n))
    assert len(tr.events) == len(naive_cut_sequence(round_pants(n))) == 2 * (n - 2)
    assert renormalized_count(tr) == 2 * (n - 2)
    assert not tr.groups and len(tr.final.loops) == n - 2


def test_twist_goldens():
    for k in range(1, 7):
        p = act(parse_braid(f"s1^{2 * k}", 3), round_curve(3, 2, 3))
        tr = canonical_trace(p)
        assert len(tr.events) == len(naive_cut_sequence(p)) == TWIST_RAW[k - 1]
        assert renormalized_count(tr) == TWIST_COUNTS[k - 1]
        assert sum(g.complete for g in tr.groups) == TWIST_COMPLETE[k - 1]
        assert len(tr.groups) == (1 if k >= 3 else 0)


def test_spiralling_cut_flag_and_curve():
    tr = canonical_trace(act(parse_braid("s1^8", 3), round_curve(3, 2, 3)))
    (g,) = tr.groups
    for e in tr.events[g.start:g.stop]:
        assert e.kind == STRETCH_SHRINK and e.spiralling
        assert e.strips[1] == g.strip
        assert e.shrinking.spiralling_shape and e.shrunk.spiralling_shape
    assert spiralled_curve(tr, 0) == round_curve(3, 1, 2)
    tr2 = canonical_trace(act(parse_braid("s2^8", 3), round_curve(3, 1, 2)))
    assert spiralled_curve(tr2, 0) == round_curve(3, 2, 3)


def test_spiralled_curve_rejects_foreign_group():
    tr = canonical_trace(act(parse_braid("s1^8", 3), round_curve(3, 2, 3)))
    with pytest.raises(ValueError):
        spiralled_curve(tr, SpiralGroup(0, 1, 0, 0, 1, ()))


def test_count_arithmetic():
    tr = canonical_trace(act(parse_braid("s1^10", 3), round_curve(3, 2, 3)))
    (g,) = tr.groups
    assert renormalized_count(tr) == len(tr.events) - g.length + 1


def test_spiralling_absorption_on_round_pants():
    r = round_pants(3)
    assert renormalized_count(canonical_trace(act(parse_braid("s1^4", 3), r))) == \
        renormalized_count(canonical_trace(act(parse_braid("s1^6", 3), r)))


@pytest.mark.parametrize("word,start,base", [
    ("s1^2", 3, (2, 3)),
    ("s2^2", 3, (1, 2)),
    ("s2^2", 3, (1, 3)),
])
def test_twist_deepening_stabilizes(word, start, base):
    n = 4 if base == (1, 3) else 3
    p = round_curve(n, *base) if n == 3 else act(parse_braid("s3", n), round_pants(n))
    w = parse_braid(word, n)
    counts = [renormalized_count(canonical_trace(act(w.power(k), p))) for k in range(start, 7)]
    assert len(set(counts)) == 1


def test_corpus_against_scratch_oracle():
    for w, p in pants_corpus()[:150]:
        tr = canonical_trace(p)
        assert [(e.kind, e.marker_before, e.marker_after) for e in tr.events] == naive_cut_sequence(p)
        for d in tr.decompositions():
            assert as_sets(d) == naive_decomposition(p, d.marker)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 5), st.lists(st.tuples(st.integers(1, 4), st.sampled_from((1, -1))), max_size=10))
def test_trace_invariants(n, raw):
    w = BraidWord.from_artin(n, [(min(i, n - 1), e) for i, e in raw])
    p = act(w, round_pants(n))
    tr = canonical_trace(p)
    comps = len(p.components)
    prev = tr.initial
    for e, d in zip(tr.events, tr.states):
        assert e.marker_after < e.marker_before
        assert e.kind in (LOOP_CLOSURE, MERGE, STRETCH_SHRINK)
        if e.kind == LOOP_CLOSURE:
            assert d.total_width == prev.total_width - 1 and len(d.loops) == len(prev.loops) + 1
        else:
            assert d.total_width == prev.total_width - (e.marker_before - e.marker_after)
        # the rebuilt decomposition at the new marker is the incremental one
        assert as_sets(d) == as_sets(strip_decompose(p, d.marker))
        prev = d
    assert not tr.final.strips and len(tr.final.loops) == comps == n - 2
    for g in tr.groups:
        assert sum(b - a for a, b in g.revolutions) + g.residue == g.length
        assert g.complete == len(g.revolutions)
        assert len({tr.events[i].strips[1] for i in range(g.start, g.stop)}) == 1
        before = tr.events[g.start - 1] if g.start else None
        after = tr.events[g.stop] if g.stop < len(tr.events) else None
        for nb in (before, after):
            assert nb is None or not (nb.spiralling and nb.strips[1] == g.strip)
