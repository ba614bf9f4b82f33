"""Multicurves on the n-punctured disk, encoded as chord diagrams on the axis.

The punctures P1..Pn sit on the horizontal axis.  A multicurve in tight
position meets the axis in finitely many cross points; each cross point has
one arc above the axis and one below.  Cross points carry no coordinates,
only their order, so a tight diagram is stored as

* ``seg[s]``: number of cross points on axis segment ``s`` (segment 0 lies
  left of P1, segment ``s`` lies between Ps and Ps+1, segment ``n`` lies
  right of Pn),
* ``upper[x]`` / ``lower[x]``: partner of cross point ``x`` along its arc
  above / below the axis.

Tight position is unique up to isotopy fixing the axis setwise, so two tight
diagrams describe the same isotopy class exactly when their tuples agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .braids import BraidWord, Letter

__all__ = [
    "PuncturedDisk",
    "DiagramError",
    "DiskMismatch",
    "ChordMulticurve",
    "reduce",
    "round_curve",
    "round_multicurve",
    "round_pants",
    "act",
    "half_twist",
    "intersection_number",
    "canonical_equal",
    "ChainPartition",
    "chain_partition",
    "longest_chain",
]


class DiagramError(ValueError):
    """Matchings that are not perfect or that cross on one side."""


class DiskMismatch(ValueError):
    """Operands live on disks with different puncture counts."""


@dataclass(frozen=True)
class PuncturedDisk:
    n: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"need at least 3 punctures, got {self.n}")

    @property
    def complexity(self) -> int:
        return self.n - 2

    def puncture_x(self, j: int) -> Fraction:
        # presentational only
        return Fraction(-1) + Fraction(2 * j, self.n + 1)


@dataclass(frozen=True)
class ChordMulticurve:
    """A diagram on the axis; use :func:`reduce` to obtain the tight form."""

    n: int
    seg: tuple[int, ...]
    upper: tuple[int, ...]
    lower: tuple[int, ...]

    def __post_init__(self):
        if len(self.seg) != self.n + 1:
            raise DiagramError(f"expected {self.n + 1} segment counts, got {len(self.seg)}")
        if sum(self.seg) != len(self.upper) or len(self.upper) != len(self.lower):
            raise DiagramError("segment counts and matchings disagree on the number of cross points")

    @property
    def disk(self) -> PuncturedDisk:
        return PuncturedDisk(self.n)

    @property
    def size(self) -> int:
        return len(self.upper)

    @cached_property
    def starts(self) -> tuple[int, ...]:
        return tuple(itertools.accumulate(self.seg, initial=0))

    @cached_property
    def segment_of(self) -> tuple[int, ...]:
        return tuple(s for s, c in enumerate(self.seg) for _ in range(c))

    def match(self, side: int) -> tuple[int, ...]:
        return self.upper if side > 0 else self.lower

    def adjacent(self, x: int, y: int) -> bool:
        """Cross points next to each other with no puncture between."""
        return abs(x - y) == 1 and self.segment_of[x] == self.segment_of[y]

    def is_tight(self) -> bool:
        sof = self.segment_of
        for x in range(self.size - 1):
            if sof[x] == sof[x + 1] and (self.upper[x] == x + 1 or self.lower[x] == x + 1):
                return False
        return True

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Components as cyclic point sequences, each starting at its leftmost point."""
        seen = [False] * self.size
        out = []
        for x in range(self.size):
            if seen[x]:
                continue
            cyc = []
            y, side = x, 1
            while True:
                seen[y] = True
                cyc.append(y)
                y = self.match(side)[y]
                side = -side
                if y == x and side == 1:
                    break
            out.append(tuple(cyc))
        return tuple(out)

    def enclosed(self, component: Sequence[int]) -> frozenset[int]:
        """Punctures inside a component, by crossing parity of upper arcs."""
        sof = self.segment_of
        inside = set()
        for x in component:
            y = self.upper[x]
            if x < y:
                for j in range(sof[x] + 1, sof[y] + 1):
                    inside ^= {j}
        return frozenset(inside)

    def component_curve(self, component: Sequence[int]) -> "ChordMulticurve":
        keep = set(component)
        return _restrict(self, keep)

    def curves(self) -> list["ChordMulticurve"]:
        return [self.component_curve(c) for c in self.components]

    def is_multicurve(self) -> bool:
        """Essential components, pairwise non-isotopic."""
        sets = [self.enclosed(c) for c in self.components]
        if any(not 2 <= len(s) <= self.n - 1 for s in sets):
            return False
        return len(set(sets)) == len(sets)

    def is_pants(self) -> bool:
        return self.is_tight() and len(self.components) == self.n - 2 and self.is_multicurve()

    def is_round(self) -> bool:
        return all(len(c) == 2 for c in self.components)

    def axis_tokens(self) -> list[str]:
        out = []
        x = 0
        for s, c in enumerate(self.seg):
            if s:
                out.append(f"P{s}")
            for _ in range(c):
                out.append(f"x{x}")
                x += 1
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "axis": self.axis_tokens(),
            "upper": [[f"x{x}", f"x{y}"] for x, y in enumerate(self.upper) if x < y],
            "lower": [[f"x{x}", f"x{y}"] for x, y in enumerate(self.lower) if x < y],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ChordMulticurve":
        """Read the axis-word format and reduce; rejects invalid matchings."""
        try:
            n = int(obj["n"])
            axis = list(obj["axis"])
            ups, los = obj["upper"], obj["lower"]
        except (KeyError, TypeError, ValueError) as exc:
            raise DiagramError(f"malformed multicurve JSON: {exc}") from None
        PuncturedDisk(n)
        punct = [t for t in axis if isinstance(t, str) and t.startswith("P") and t[1:].isdigit()]
        if punct != [f"P{j}" for j in range(1, n + 1)]:
            raise DiagramError("axis must list punctures P1..Pn in order")
        seg = [0] * (n + 1)
        index: dict[str, int] = {}
        s = 0
        for t in axis:
            if t in punct:
                s += 1
                continue
            if t in index:
                raise DiagramError(f"duplicate cross point {t!r}")
            index[t] = len(index)
            seg[s] += 1

        def matching(pairs) -> list[int]:
            m = [-1] * len(index)
            for pair in pairs:
                if len(pair) != 2:
                    raise DiagramError(f"arc must join two cross points: {pair!r}")
                a, b = pair
                if a not in index or b not in index or a == b:
                    raise DiagramError(f"bad arc {pair!r}")
                ia, ib = index[a], index[b]
                if m[ia] != -1 or m[ib] != -1:
                    raise DiagramError(f"cross point used twice in {pair!r}")
                m[ia], m[ib] = ib, ia
            if -1 in m:
                raise DiagramError("matching is not perfect")
            return m

        return reduce(cls(n, tuple(seg), tuple(matching(ups)), tuple(matching(los))))


def _restrict(m: ChordMulticurve, keep: set[int]) -> ChordMulticurve:
    order = sorted(keep)
    new = {x: k for k, x in enumerate(order)}
    seg = [0] * (m.n + 1)
    for x in order:
        seg[m.segment_of[x]] += 1
    return ChordMulticurve(
        m.n, tuple(seg),
        tuple(new[m.upper[x]] for x in order),
        tuple(new[m.lower[x]] for x in order),
    )


def _check_matching(match: Sequence[int], side: str) -> None:
    size = len(match)
    stack: list[int] = []
    for x, y in enumerate(match):
        if not 0 <= y < size or y == x or match[y] != x:
            raise DiagramError(f"{side} matching is not a perfect matching at {x}")
        if y > x:
            stack.append(x)
        elif not stack or stack.pop() != y:
            raise DiagramError(f"{side} arcs cross at {x}")


def reduce(raw: ChordMulticurve) -> ChordMulticurve:
    """Remove bigons with the axis, trivial circles and peripheral components."""
    _check_matching(raw.upper, "upper")
    _check_matching(raw.lower, "lower")
    size = raw.size
    sof = raw.segment_of
    up, lo = list(raw.upper), list(raw.lower)
    alive = [True] * size
    prv = list(range(-1, size - 1))
    nxt = list(range(1, size + 1))

    def drop(z: int) -> int:
        p, q = prv[z], nxt[z]
        if p >= 0:
            nxt[p] = q
        if q < size:
            prv[q] = p
        alive[z] = False
        return p

    changed = True
    while changed:
        changed = False
        work = [x for x in range(size) if alive[x]]
        while work:
            x = work.pop()
            if x < 0 or not alive[x]:
                continue
            y = nxt[x]
            if y >= size or sof[y] != sof[x]:
                continue
            if up[x] != y and lo[x] != y:
                continue
            joined: tuple[int, ...] = ()
            if up[x] != lo[x]:
                # bigon: splice the two arcs on the far side into one
                other = lo if up[x] == y else up
                a, b = other[x], other[y]
                other[a], other[b] = b, a
                joined = (a, b)
            drop(y)
            work.append(drop(x))
            for z in joined:
                work.extend((z, prv[z]))
            changed = True
        # peripheral components: two points around one puncture or around all of them
        for x in range(size):
            if not alive[x] or up[x] != lo[x] or up[x] < x:
                continue
            y = up[x]
            spanned = sof[y] - sof[x]
            if spanned == 1 or (sof[x] == 0 and sof[y] == raw.n):
                drop(x)
                drop(y)
                changed = True
    keep = [x for x in range(size) if alive[x]]
    new = {x: k for k, x in enumerate(keep)}
    seg = [0] * (raw.n + 1)
    for x in keep:
        seg[sof[x]] += 1
    return ChordMulticurve(raw.n, tuple(seg), tuple(new[up[x]] for x in keep), tuple(new[lo[x]] for x in keep))


def round_multicurve(n: int, intervals: Iterable[tuple[int, int]]) -> ChordMulticurve:
    """Round curves, one per puncture interval ``(i, j)``; intervals must be laminar."""
    PuncturedDisk(n)
    ivs = list(intervals)
    for i, j in ivs:
        if not 1 <= i < j <= n or (i, j) == (1, n):
            raise ValueError(f"interval ({i}, {j}) does not give an essential curve")
    for (a, b), (c, d) in itertools.combinations(ivs, 2):
        if a < c <= b < d or c < a <= d < b or (a, b) == (c, d):
            raise ValueError("intervals must be laminar and distinct")
    # per segment: right ends (inner first), then left ends (outer first)
    slots: list[list[tuple[int, int, str]]] = [[] for _ in range(n + 1)]
    for i, j in ivs:
        slots[j].append((i, j, "R"))
        slots[i - 1].append((i, j, "L"))
    order: list[tuple[int, int, str]] = []
    for s in range(n + 1):
        rights = sorted((t for t in slots[s] if t[2] == "R"), key=lambda t: -t[0])
        lefts = sorted((t for t in slots[s] if t[2] == "L"), key=lambda t: -t[1])
        order.extend(rights + lefts)
    pos = {t: k for k, t in enumerate(order)}
    match = [0] * len(order)
    for i, j in ivs:
        a, b = pos[(i, j, "L")], pos[(i, j, "R")]
        match[a], match[b] = b, a
    seg = tuple(len(slots[s]) for s in range(n + 1))
    return ChordMulticurve(n, seg, tuple(match), tuple(match))


def round_curve(n: int, i: int, j: int) -> ChordMulticurve:
    """The round curve enclosing punctures ``i..j``."""
    return round_multicurve(n, [(i, j)])


def round_pants(n: int | PuncturedDisk) -> ChordMulticurve:
    """Nested round curves, the k-th enclosing punctures 1..k+1."""
    if isinstance(n, PuncturedDisk):
        n = n.n
    return round_multicurve(n, [(1, k + 1) for k in range(1, n - 1)])


def half_twist(m: ChordMulticurve, i: int, sign: int) -> ChordMulticurve:
    """Apply sigma_i (sign +1, counterclockwise) or its inverse to a tight diagram."""
    if not 1 <= i < m.n:
        raise ValueError(f"sigma_{i} out of range for n={m.n}")
    a = m.starts[i]
    k = m.seg[i]
    if k == 0:
        return m
    size = m.size

    def moved(x: int) -> int:
        return x if x < a else x + 2 * k

    ell = [a + j for j in range(k)]
    mid = [a + k + (k - 1 - j) for j in range(k)]
    rgt = [a + 2 * k + j for j in range(k)]
    up_end, lo_end = (ell, rgt) if sign > 0 else (rgt, ell)
    new_up = [0] * (size + 2 * k)
    new_lo = [0] * (size + 2 * k)

    def image(y: int, ends: list[int]) -> int:
        return ends[y - a] if a <= y < a + k else moved(y)

    for x in range(size):
        if a <= x < a + k:
            continue
        new_up[moved(x)] = image(m.upper[x], up_end)
        new_lo[moved(x)] = image(m.lower[x], lo_end)
    for j in range(k):
        c = a + j
        new_up[up_end[j]] = image(m.upper[c], up_end)
        new_lo[lo_end[j]] = image(m.lower[c], lo_end)
        if sign > 0:
            new_lo[ell[j]], new_lo[mid[j]] = mid[j], ell[j]
            new_up[mid[j]], new_up[rgt[j]] = rgt[j], mid[j]
        else:
            new_up[ell[j]], new_up[mid[j]] = mid[j], ell[j]
            new_lo[mid[j]], new_lo[rgt[j]] = rgt[j], mid[j]
    seg = list(m.seg)
    seg[i - 1] += k
    seg[i] = k
    seg[i + 1] += k
    return reduce(ChordMulticurve(m.n, tuple(seg), tuple(new_up), tuple(new_lo)))


def act(word: BraidWord | Letter, m: ChordMulticurve) -> ChordMulticurve:
    """Image of ``m`` under a braid; the rightmost letter acts first."""
    if isinstance(word, Letter):
        word = BraidWord(m.n, (word,))
    if word.n != m.n:
        raise DiskMismatch(f"braid on {word.n} strands acting on a {m.n}-punctured disk")
    for i, e in reversed(word.artin()):
        m = half_twist(m, i, e)
    return m


def canonical_equal(a: ChordMulticurve, b: ChordMulticurve) -> bool:
    if a.n != b.n:
        raise DiskMismatch("curves live on different disks")
    return reduce(a) == reduce(b)


def _superpose(a: ChordMulticurve, b: ChordMulticurve):
    """Cross points of both diagrams on one axis, a's before b's in each segment."""
    owner: list[int] = []
    index: list[int] = []
    seg_of: list[int] = []
    for s in range(a.n + 1):
        for c, m in ((0, a), (1, b)):
            for x in range(m.starts[s], m.starts[s + 1]):
                owner.append(c)
                index.append(x)
                seg_of.append(s)
    return owner, index, seg_of


def _count_crossings(pos, matches) -> int:
    total = 0
    for side in (0, 1):
        arcs = [[], []]
        for c in (0, 1):
            match = matches[c][side]
            for x, y in enumerate(match):
                if x < y:
                    p, q = sorted((pos[c][x], pos[c][y]))
                    arcs[c].append((p, q))
        for p, q in arcs[0]:
            for r, t in arcs[1]:
                if p < r < q < t or r < p < t < q:
                    total += 1
    return total


def intersection_number(a: ChordMulticurve, b: ChordMulticurve) -> int:
    """Geometric intersection number, by superposing and removing bigons."""
    if a.n != b.n:
        raise DiskMismatch("curves live on different disks")
    a, b = reduce(a), reduce(b)
    if not a.size or not b.size:
        return 0
    owner, index, seg_of = _superpose(a, b)
    total_pts = len(owner)
    # at[q] = (curve, point) occupying axis slot q; pos[c][x] = slot of point x of curve c
    at = list(zip(owner, index))
    pos = [[0] * a.size, [0] * b.size]
    for q, (c, x) in enumerate(at):
        pos[c][x] = q
    matches = ((a.upper, a.lower), (b.upper, b.lower))

    def partner(q: int, side: int) -> int:
        c, x = at[q]
        return pos[c][matches[c][0 if side > 0 else 1][x]]

    def is_pair(q: int) -> bool:
        return (q + 1 < total_pts and seg_of[q] == seg_of[q + 1]
                and at[q][0] != at[q + 1][0])

    def step(q: int, side: int):
        """Follow the two arcs leaving slots q, q+1 on ``side``."""
        p0, p1 = partner(q, side), partner(q + 1, side)
        lo0, hi0 = sorted((q, p0))
        lo1, hi1 = sorted((q + 1, p1))
        if lo0 < lo1 < hi0 < hi1 or lo1 < lo0 < hi1 < hi0:
            return "cross"
        r = min(p0, p1)
        if abs(p0 - p1) == 1 and is_pair(r):
            return r
        return None

    while True:
        used: set[int] = set()
        found: list[list[int]] = []
        visited: set[int] = set()
        for q in range(total_pts - 1):
            if q in visited or not is_pair(q):
                continue
            chain = [q]
            visited.add(q)
            ends = []
            closed = False
            for first in (1, -1):
                cur, side = q, first
                while True:
                    nxt = step(cur, side)
                    if nxt is None or nxt == "cross":
                        ends.append((nxt, ("corner", side) + tuple(sorted(at[t] for t in
                                    (cur, cur + 1, partner(cur, side), partner(cur + 1, side))))))
                        break
                    if nxt == q:
                        closed = True
                        break
                    chain.append(nxt)
                    visited.add(nxt)
                    cur, side = nxt, -side
                if closed:
                    break
            if closed or [e for e, _ in ends] != ["cross", "cross"]:
                continue
            # bigons removed in one round must share no slot and no corner crossing
            claim = {c for _, c in ends}
            for r in chain:
                claim.update((r, r + 1))
            if claim & used:
                continue
            used |= claim
            found.append(chain)
        if not found:
            break
        for chain in found:
            for r in chain:
                at[r], at[r + 1] = at[r + 1], at[r]
                for t in (r, r + 1):
                    c, x = at[t]
                    pos[c][x] = t
    return _count_crossings(pos, matches)


@dataclass(frozen=True)
class ChainPartition:
    """Greedy partition of a curve sequence with a certifying chain.

    ``parts[u]`` lists indices whose curves are pairwise disjoint.  ``back[j]``
    points from a member of part ``u >= 1`` to an earlier member of part
    ``u - 1`` that it intersects; following it from the last part yields
    ``chain``.  ``longest`` is the true maximal chain length.
    """

    parts: tuple[tuple[int, ...], ...]
    back: dict
    chain: tuple[int, ...]
    longest: int
    complexity: int

    @property
    def bound_holds(self) -> bool:
        total = sum(len(p) for p in self.parts)
        return total <= self.complexity * self.longest


def _intersection_table(curves: Sequence[ChordMulticurve]) -> list[list[int]]:
    r = len(curves)
    table = [[0] * r for _ in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            table[i][j] = table[j][i] = intersection_number(curves[i], curves[j])
    return table


def longest_chain(table: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Longest index sequence with consecutive curves intersecting."""
    r = len(table)
    if not r:
        return ()
    best = [1] * r
    prev = [-1] * r
    for j in range(r):
        for i in range(j):
            if table[i][j] and best[i] + 1 > best[j]:
                best[j], prev[j] = best[i] + 1, i
    j = max(range(r), key=lambda t: (best[t], -t))
    out = []
    while j >= 0:
        out.append(j)
        j = prev[j]
    return tuple(reversed(out))


def chain_partition(curves: Sequence[ChordMulticurve]) -> ChainPartition:
    if not curves:
        return ChainPartition((), {}, (), 0, 1)
    n = curves[0].n
    reduced = []
    for k, c in enumerate(curves):
        if c.n != n:
            raise DiskMismatch("curves live on different disks")
        c = reduce(c)
        if len(c.components) != 1 or not c.is_multicurve():
            raise ValueError(f"entry {k} is not a single essential curve")
        reduced.append(c)
    if len(set(reduced)) != len(reduced):
        raise ValueError("curves must be pairwise non-isotopic")
    table = _intersection_table(reduced)
    parts: list[list[int]] = []
    back: dict[int, int] = {}
    for j in range(len(reduced)):
        # deepest u such that each of parts[0..u-1] holds an earlier curve meeting j
        u = 0
        while u < len(parts) and any(table[i][j] for i in parts[u]):
            u += 1
        if u == len(parts):
            parts.append([])
        parts[u].append(j)
        if u:
            back[j] = next(i for i in parts[u - 1] if table[i][j])
    j = parts[-1][0]
    chain = [j]
    while j in back:
        j = back[j]
        chain.append(j)
    return ChainPartition(
        tuple(tuple(p) for p in parts), back, tuple(reversed(chain)),
        len(longest_chain(table)), n - 2,
    )
