"""Strip decompositions of a pants decomposition and the strip-cutting sequence.

The cutter is the part of the axis left of a marker.  The marker is stored
as ``k``, the number of cross points inside the cutter, so cross points
``0..k-1`` are cut and everything from ``k`` on is free.  Each cut point has
an upper and a lower side; the pieces of the pants curves outside the cutter
are arcs from one side of a cut point to a side of another.  Parallel arcs
are grouped into strips.

Every cut retracts the marker past the bases of the two ends sitting just
left of it.  ``canonical_trace`` runs cuts from the right edge until only
closed loops remain.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator

from .curves import ChordMulticurve, reduce

__all__ = [
    "End",
    "Strip",
    "StripDecomposition",
    "CutEvent",
    "SpiralGroup",
    "CutTrace",
    "MarkerError",
    "strip_decompose",
    "initial_decomposition",
    "strip_cut",
    "canonical_trace",
    "renormalized_count",
    "spiralled_curve",
    "trace_arc",
]

LOOP_CLOSURE = "LoopClosure"
MERGE = "Merge"
STRETCH_SHRINK = "StretchShrink"


class MarkerError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class End:
    """A base: cut points ``lo..hi`` on one side (+1 upper, -1 lower)."""

    lo: int
    hi: int
    side: int

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1

    def points(self) -> range:
        return range(self.lo, self.hi + 1)

    def overlaps(self, other: "End") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def overlap(self, other: "End") -> tuple[int, int] | None:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return (lo, hi) if lo <= hi else None

    def to_json(self) -> dict:
        return {"side": "+" if self.side > 0 else "-", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class Strip:
    """Parallel arcs joining base ``a`` to base ``b``.

    ``flipped`` means the lowest point of ``a`` is joined to the highest point
    of ``b``.  Arcs are named by their cut point in ``a``.
    """

    id: int
    a: End
    b: End
    flipped: bool = False

    def __post_init__(self):
        if self.a.width != self.b.width:
            raise ValueError("strip bases differ in width")

    @property
    def width(self) -> int:
        return self.a.width

    @property
    def ends(self) -> tuple[End, End]:
        return (self.a, self.b)

    def other(self, end: End) -> End:
        return self.b if end == self.a else self.a

    def across(self, end: End, index: int) -> int:
        """Index in the opposite base of the arc at ``index`` in ``end``."""
        return self.width - 1 - index if self.flipped else index

    def key(self) -> tuple:
        """Identity-free description used to compare decompositions."""
        return (tuple(sorted((self.a, self.b))), self.flipped and self.width > 1)

    @property
    def spiralling_shape(self) -> bool:
        """Its two bases overlap without coinciding."""
        return self.a.overlaps(self.b) and (self.a.lo, self.a.hi) != (self.b.lo, self.b.hi)

    def to_json(self) -> dict:
        return {"id": self.id, "a": self.a.to_json(), "b": self.b.to_json(),
                "flipped": self.flipped, "width": self.width}


def trace_arc(p: ChordMulticurve, k: int, x: int, side: int) -> list[tuple[int, int]]:
    """Follow the arc leaving cut point ``x`` on ``side`` until it re-enters the cutter.

    Returns ``[(x, side), free points..., (y, arriving side)]``.
    """
    path = [(x, side)]
    y, s = p.match(side)[x], side
    while y >= k:
        path.append((y, s))
        s = -s
        y = p.match(s)[y]
    path.append((y, s))
    return path


@dataclass(frozen=True)
class StripDecomposition:
    pants: ChordMulticurve
    marker: int
    strips: tuple[Strip, ...]
    loops: tuple[int, ...]  # indices into pants.components

    @property
    def ends(self) -> list[tuple[End, Strip]]:
        return sorted(((e, s) for s in self.strips for e in s.ends), key=lambda t: t[0])

    def strip(self, sid: int) -> Strip:
        for s in self.strips:
            if s.id == sid:
                return s
        raise KeyError(sid)

    def key(self) -> tuple:
        return (self.marker, tuple(sorted(s.key() for s in self.strips)), tuple(sorted(self.loops)))

    @property
    def total_width(self) -> int:
        return sum(s.width for s in self.strips)

    def arcs(self, s: Strip) -> list[list[tuple[int, int]]]:
        return [trace_arc(self.pants, self.marker, x, s.a.side) for x in s.a.points()]

    def representative(self, s: Strip) -> list[tuple[int, int]]:
        return trace_arc(self.pants, self.marker, s.a.lo, s.a.side)

    def overlapping_pairs(self) -> list[tuple[End, End]]:
        """(upper end, lower end) pairs whose bases intersect."""
        ups = [e for e, _ in self.ends if e.side > 0]
        los = [e for e, _ in self.ends if e.side < 0]
        return [(u, d) for u in ups for d in los if u.overlaps(d)]

    def to_json(self) -> dict:
        return {
            "marker": self.marker,
            "strips": [s.to_json() for s in sorted(self.strips, key=lambda s: s.id)],
            "loops": list(self.loops),
        }


def _check_pants(p: ChordMulticurve) -> None:
    if not p.is_pants():
        raise ValueError("input is not a tight pants decomposition")


def strip_decompose(p: ChordMulticurve, marker: int) -> StripDecomposition:
    """Decompose from scratch; ``marker`` counts the cross points in the cutter."""
    _check_pants(p)
    size = p.size
    if not 0 <= marker <= size:
        raise MarkerError(f"marker {marker} outside 0..{size}")
    k = marker
    # arc ends live at (x, side) for x < k
    other_end: dict[tuple[int, int], tuple[int, int]] = {}
    for x in range(k):
        for side in (1, -1):
            if (x, side) not in other_end:
                path = trace_arc(p, k, x, side)
                other_end[(x, side)] = path[-1]
                other_end[path[-1]] = (x, side)

    memo: dict[tuple[int, int], bool] = {}

    def parallel(u: int, side: int) -> bool:
        """Do the arcs leaving u and u+1 on ``side`` run side by side to the cutter?"""
        chain = []
        result = False
        while True:
            if (u, side) in memo:
                result = memo[(u, side)]
                break
            chain.append((u, side))
            a, b = p.match(side)[u], p.match(side)[u + 1]
            if not p.adjacent(a, b):
                break
            if a < k and b < k:
                result = True
                break
            if (a < k) != (b < k):
                break
            u, side = min(a, b), -side
        for c in chain:
            memo[c] = result
        return result

    parent: dict[tuple[int, int], tuple[int, int]] = {e: e for e in other_end}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for x in range(k - 1):
        if not p.adjacent(x, x + 1):
            continue
        for side in (1, -1):
            if parallel(x, side):
                ra, rb = find((x, side)), find((x + 1, side))
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    bases: dict[tuple[int, int], list[int]] = {}
    for e in other_end:
        bases.setdefault(find(e), []).append(e[0])
    seen = set()
    found = []
    for root in sorted(bases, key=lambda r: (min(bases[r]), -r[1])):
        if root in seen:
            continue
        pts = sorted(bases[root])
        a = End(pts[0], pts[-1], root[1])
        far = other_end[(pts[0], root[1])]
        broot = find(far)
        seen.update((root, broot))
        bpts = sorted(bases[broot])
        b = End(bpts[0], bpts[-1], broot[1])
        if b.width != a.width or broot == root:
            raise AssertionError("inconsistent parallelism classes")
        found.append((a, b, len(pts) > 1 and far[0] == bpts[-1]))
    strips = tuple(Strip(i, a, b, fl) for i, (a, b, fl) in enumerate(found))
    loops = tuple(i for i, comp in enumerate(p.components) if min(comp) >= k)
    return StripDecomposition(p, k, strips, loops)


def initial_decomposition(p: ChordMulticurve) -> StripDecomposition:
    """The decomposition with the marker at the right edge."""
    return strip_decompose(p, p.size)


@dataclass(frozen=True)
class CutEvent:
    kind: str
    marker_before: int
    marker_after: int
    strips: tuple[int, ...]  # (shorter-based strip, longer-based strip) or the single strip
    widths_before: tuple[int, ...]
    widths_after: tuple[int, ...]
    result_ids: tuple[int, ...]
    spiralling: bool = False
    shrinking: Strip | None = None  # the longer-based strip before a stretch-shrink
    shrunk: Strip | None = None

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "marker_before": self.marker_before,
            "marker_after": self.marker_after,
            "strips": list(self.strips),
            "widths_before": list(self.widths_before),
            "widths_after": list(self.widths_after),
            "result_ids": list(self.result_ids),
        }
        if self.kind == STRETCH_SHRINK:
            out["spiralling"] = self.spiralling
        return out


class _Cutter:
    """Mutable working state for the incremental cut."""

    def __init__(self, d: StripDecomposition):
        self.pants = d.pants
        self.k = d.marker
        self.strips = {s.id: s for s in d.strips}
        self.loops = list(d.loops)
        self.next_id = max(self.strips, default=-1) + 1
        self.by_top: dict[tuple[int, int], int] = {}
        for s in d.strips:
            for e in s.ends:
                self.by_top[(e.side, e.hi)] = s.id

    def snapshot(self) -> StripDecomposition:
        return StripDecomposition(self.pants, self.k,
                                  tuple(self.strips[i] for i in sorted(self.strips)),
                                  tuple(sorted(self.loops)))

    def _drop(self, s: Strip) -> None:
        del self.strips[s.id]
        for e in s.ends:
            del self.by_top[(e.side, e.hi)]

    def _add(self, s: Strip) -> None:
        self.strips[s.id] = s
        for e in s.ends:
            self.by_top[(e.side, e.hi)] = s.id

    def cut(self) -> CutEvent:
        if not self.strips:
            raise ValueError("no strips left to cut")
        k = self.k
        z = k - 1
        up = self.strips[self.by_top[(1, z)]]
        lo = self.strips[self.by_top[(-1, z)]]
        e_up = next(e for e in up.ends if (e.side, e.hi) == (1, z))
        e_lo = next(e for e in lo.ends if (e.side, e.hi) == (-1, z))

        if up.id == lo.id:
            if up.width != 1:
                raise AssertionError("a strip closing on itself must have width 1")
            self._drop(up)
            comp = next(i for i, c in enumerate(self.pants.components) if z in c)
            self.loops.append(comp)
            self.k = z
            return CutEvent(LOOP_CLOSURE, k, z, (up.id,), (1,), (), (comp,))

        if e_up.width == e_lo.width:
            f1, f2 = up.other(e_up), lo.other(e_lo)
            self._drop(up)
            self._drop(lo)
            merged = Strip(self.next_id, f1, f2, up.flipped != lo.flipped)
            self.next_id += 1
            self._add(merged)
            self.k = k - e_up.width
            return CutEvent(MERGE, k, self.k, (up.id, lo.id), (up.width, lo.width),
                            (merged.width,), (merged.id,))

        if e_up.width < e_lo.width:
            s1, e1, s2, e2 = up, e_up, lo, e_lo
        else:
            s1, e1, s2, e2 = lo, e_lo, up, e_up
        w1, w2 = e1.width, e2.width
        f1, f2 = s1.other(e1), s2.other(e2)
        if s2.flipped:
            f21 = End(f2.lo, f2.lo + w1 - 1, f2.side)
            f22 = End(f2.lo + w1, f2.hi, f2.side)
        else:
            f21 = End(f2.lo + w2 - w1, f2.hi, f2.side)
            f22 = End(f2.lo, f2.lo + w2 - w1 - 1, f2.side)
        rest = End(e2.lo, e2.hi - w1, e2.side)
        stretched = Strip(s1.id, f1, f21, s1.flipped != s2.flipped)
        shrunk = Strip(s2.id, rest, f22, s2.flipped)
        self._drop(s1)
        self._drop(s2)
        self._add(stretched)
        self._add(shrunk)
        self.k = k - w1
        spiral = s2.spiralling_shape and shrunk.spiralling_shape
        return CutEvent(STRETCH_SHRINK, k, self.k, (s1.id, s2.id), (w1, w2),
                        (stretched.width, shrunk.width), (stretched.id, shrunk.id),
                        spiral, s2, shrunk)


def strip_cut(d: StripDecomposition) -> tuple[StripDecomposition, CutEvent]:
    """One cut: retract the marker past the shorter of the two topmost bases."""
    state = _Cutter(d)
    event = state.cut()
    return state.snapshot(), event


@dataclass(frozen=True)
class SpiralGroup:
    """A maximal run of spiralling cuts shrinking the same strip."""

    start: int  # index of the first event
    stop: int  # one past the last event
    strip: int
    complete: int  # whole revolutions
    residue: int  # trailing cuts that do not finish a revolution
    revolutions: tuple[tuple[int, int], ...]  # event ranges of the complete ones

    @property
    def length(self) -> int:
        return self.stop - self.start

    def to_json(self) -> dict:
        return {"start": self.start, "stop": self.stop, "strip": self.strip,
                "complete": self.complete, "residue": self.residue,
                "revolutions": [list(r) for r in self.revolutions]}


@dataclass(frozen=True)
class CutTrace:
    initial: StripDecomposition
    events: tuple[CutEvent, ...]
    states: tuple[StripDecomposition, ...]  # states[i] is the result of events[i]
    groups: tuple[SpiralGroup, ...]

    def __len__(self) -> int:
        return len(self.events)

    def state_before(self, i: int) -> StripDecomposition:
        return self.initial if i == 0 else self.states[i - 1]

    def decompositions(self) -> Iterator[StripDecomposition]:
        yield self.initial
        yield from self.states

    @property
    def final(self) -> StripDecomposition:
        return self.states[-1] if self.states else self.initial

    def group_of(self, i: int) -> SpiralGroup | None:
        for g in self.groups:
            if g.start <= i < g.stop:
                return g
        return None

    def to_json(self) -> dict:
        gid = {}
        for k, g in enumerate(self.groups):
            for i in range(g.start, g.stop):
                gid[i] = k
        events = []
        for i, e in enumerate(self.events):
            rec = e.to_json()
            rec["group"] = gid.get(i)
            events.append(rec)
        return {
            "n": self.initial.pants.n,
            "cross_points": self.initial.pants.size,
            "initial": self.initial.to_json(),
            "events": events,
            "groups": [g.to_json() for g in self.groups],
            "count": renormalized_count(self),
        }


def _revolutions(events: tuple[CutEvent, ...], start: int, stop: int):
    """Split a spiralling run into whole revolutions of the shrinking strip.

    A revolution starting at a cut ends once the marker reaches the top of
    the left base of the shrinking strip as it was at that cut.
    """
    revs = []
    i = start
    while i < stop:
        s2 = events[i].shrinking
        left = min(s2.ends, key=lambda e: e.lo)
        target = left.hi + 1
        j = i
        while j < stop and events[j].marker_after > target:
            j += 1
        if j == stop:
            break
        revs.append((i, j + 1))
        i = j + 1
    return tuple(revs), stop - i


def _group_spirals(events: tuple[CutEvent, ...]) -> tuple[SpiralGroup, ...]:
    groups = []
    i = 0
    while i < len(events):
        e = events[i]
        if not e.spiralling:
            i += 1
            continue
        j = i + 1
        while j < len(events) and events[j].spiralling and events[j].strips[1] == e.strips[1]:
            j += 1
        revs, residue = _revolutions(events, i, j)
        groups.append(SpiralGroup(i, j, e.strips[1], len(revs), residue, revs))
        i = j
    return tuple(groups)


def canonical_trace(p: ChordMulticurve) -> CutTrace:
    """Cut from the right edge until only loops remain."""
    d = initial_decomposition(p)
    state = _Cutter(d)
    events, states = [], []
    while state.strips:
        before = state.k
        ev = state.cut()
        if not state.k < before:
            raise AssertionError("marker failed to move left")
        events.append(ev)
        states.append(state.snapshot())
    events_t = tuple(events)
    return CutTrace(d, events_t, tuple(states), _group_spirals(events_t))


def renormalized_count(t: CutTrace) -> int:
    """Cuts outside spiralling groups, plus one per maximal group."""
    inside = sum(g.length for g in t.groups)
    return len(t.events) - inside + len(t.groups)


def spiralled_curve(t: CutTrace, group: int | SpiralGroup) -> ChordMulticurve:
    """The curve run along by the shrinking strip, closed up across its overlapping bases."""
    g = t.groups[group] if isinstance(group, int) else group
    if g not in t.groups:
        raise ValueError("not a maximal spiralling of this trace")
    d = t.state_before(g.start)
    s2 = d.strip(g.strip)
    if not s2.spiralling_shape:
        raise ValueError("strip bases do not overlap")
    p = d.pants
    path = d.representative(s2)
    free = [x for x, _ in path[1:-1]]
    # one new crossing stands in for both ends, inside the cutter
    order = sorted(free)
    new = {x: i + 1 for i, x in enumerate(order)}
    size = len(order) + 1
    up, lo = [0] * size, [0] * size
    nodes = [0] + [new[x] for x in free] + [0]
    side = path[0][1]
    for u, v in zip(nodes, nodes[1:]):
        m = up if side > 0 else lo
        m[u], m[v] = v, u
        side = -side
    seg = [0] * (p.n + 1)
    seg[p.segment_of[s2.a.lo]] += 1
    for x in order:
        seg[p.segment_of[x]] += 1
    return reduce(ChordMulticurve(p.n, tuple(seg), tuple(up), tuple(lo)))
