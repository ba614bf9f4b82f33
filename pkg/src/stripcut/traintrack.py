"""Semigeneric train tracks on the punctured disk.

Two layers:

``DiagramTrack``
    A track drawn on the axis picture: crossings with the axis, grouped
    consecutively above and below.  A group of two or more crossings is a
    switch whose large end is the arc leaving the group.  Weighted crossings
    expand into a chord diagram, which is how carried curves are realized.

``TrainTrack``
    The abstract ribbon graph.  Darts are ``(branch, end)``; each switch lists
    its large dart followed by its small darts in counterclockwise order.
    Every dart remembers the complementary region on its right, so region
    indices survive the elementary moves.  A chart (a diagram track plus a
    linear carrying map) realizes carried curves as chord diagrams.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import networkx as nx
import sympy

from .braids import BraidWord, Letter
from .curves import ChordMulticurve, act, reduce, round_curve
from .strips import CutTrace, StripDecomposition, End, STRETCH_SHRINK, spiralled_curve

__all__ = [
    "TrackError",
    "NotCarried",
    "IllegalMove",
    "DiagramTrack",
    "Region",
    "RegionReport",
    "TrainTrack",
    "Move",
    "VertexCycle",
    "validate",
    "is_recurrent",
    "measure_of",
    "decompose_measure",
    "vertex_cycles",
    "comb",
    "uncomb",
    "split",
    "slide",
    "from_strips",
    "comb_normal",
    "comb_normal_move",
    "then",
    "vertex_curves",
    "wide_cycles",
    "is_extreme",
    "transition_graph",
    "from_diagram",
    "StripTrack",
    "isomorphic",
    "comb_equivalent",
    "SplitStep",
    "cuts_to_splitting_sequence",
    "TwistCheck",
    "dehn_twist_check",
    "to_text",
    "to_dot",
    "to_json",
]

Dart = tuple[int, int]


class TrackError(ValueError):
    """Malformed incidence data."""


class NotCarried(ValueError):
    pass


class IllegalMove(ValueError):
    pass


def _opp(d: Dart) -> Dart:
    return (d[0], 1 - d[1])


# ---------------------------------------------------------------------------
# axis-drawn tracks


@dataclass(frozen=True)
class DiagramTrack:
    """Track drawn through ``len(seg_of)`` axis crossings.

    ``upper_groups`` / ``lower_groups`` partition the crossings into runs of
    consecutive crossings; ``upper_match[g]`` is the group joined to ``g`` by
    an arc above the axis.
    """

    n: int
    seg_of: tuple[int, ...]
    upper_groups: tuple[tuple[int, ...], ...]
    lower_groups: tuple[tuple[int, ...], ...]
    upper_match: tuple[int, ...]
    lower_match: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.seg_of)

    def group_index(self, side: int) -> list[int]:
        groups = self.upper_groups if side > 0 else self.lower_groups
        out = [0] * self.size
        for g, members in enumerate(groups):
            for t in members:
                out[t] = g
        return out

    def realize(self, weights: Sequence[int]) -> ChordMulticurve:
        """Chord diagram with ``weights[t]`` parallel strands through crossing ``t``."""
        if len(weights) != self.size or any(w < 0 for w in weights):
            raise ValueError("need one nonnegative weight per crossing")
        first = list(itertools.accumulate(weights, initial=0))
        size = first[-1]
        seg = [0] * (self.n + 1)
        for t, w in enumerate(weights):
            seg[self.seg_of[t]] += w
        match = {1: [0] * size, -1: [0] * size}
        for side, groups, partner in ((1, self.upper_groups, self.upper_match),
                                      (-1, self.lower_groups, self.lower_match)):
            for g, h in enumerate(partner):
                if g > h:
                    continue
                pg = [x for t in groups[g] for x in range(first[t], first[t + 1])]
                ph = [x for t in groups[h] for x in range(first[t], first[t + 1])]
                if len(pg) != len(ph):
                    raise ValueError("weights violate a switch condition")
                if pg and ph and pg[0] > ph[0]:
                    pg, ph = ph, pg
                for x, y in zip(pg, reversed(ph)):
                    match[side][x], match[side][y] = y, x
        return reduce(ChordMulticurve(self.n, tuple(seg), tuple(match[1]), tuple(match[-1])))

    def regions(self):
        """Faces glued across axis gaps.

        Returns ``(region_of_face, info, face_of)`` where ``face_of`` maps
        ``(side, kind, key)`` queries used by the abstract conversion.
        """
        T = self.size
        faces = {}
        gap_face = {}
        arc_parent = {}
        for side, groups, partner in ((1, self.upper_groups, self.upper_match),
                                      (-1, self.lower_groups, self.lower_match)):
            gidx = self.group_index(side)
            root = (side, "root", 0)
            faces[root] = True
            stack: list[int] = []
            for i in range(T + 1):
                # gap i lies left of crossing i
                if 0 < i < T and gidx[i - 1] == gidx[i]:
                    f = (side, "cusp", i)
                else:
                    if i > 0:
                        g = gidx[i - 1]
                        h = partner[g]
                        if h == g:
                            raise TrackError("group matched to itself")
                        if groups[h][0] > i - 1:
                            # left end of an arc closes here? no: g opens the arc
                            arc = (min(g, h), max(g, h))
                            arc_parent[(side, arc)] = stack[-1] if stack else None
                            stack.append(arc)
                        else:
                            arc = (min(g, h), max(g, h))
                            if not stack or stack[-1] != arc:
                                raise TrackError("arcs cross on one side")
                            stack.pop()
                    f = (side, "in", stack[-1]) if stack else root
                faces[f] = True
                gap_face[(side, i)] = f
            if stack:
                raise TrackError("unclosed arcs")
        parent = {f: f for f in faces}

        def find(f):
            while parent[f] != f:
                parent[f] = parent[parent[f]]
                f = parent[f]
            return f

        for i in range(T + 1):
            a, b = find(gap_face[(1, i)]), find(gap_face[(-1, i)])
            if a != b:
                parent[a] = b
        punct = defaultdict(set)
        ngaps = defaultdict(int)
        nfaces = defaultdict(int)
        cusps = defaultdict(int)
        for i in range(T + 1):
            r = find(gap_face[(1, i)])
            ngaps[r] += 1
            lo = self.seg_of[i - 1] if i > 0 else 0
            hi = self.seg_of[i] if i < T else self.n
            punct[r].update(range(lo + 1, hi + 1))
        for f in faces:
            r = find(f)
            nfaces[r] += 1
            if f[1] == "cusp":
                cusps[r] += 1
        roots = sorted({find(f) for f in faces}, key=repr)
        info = {}
        outer = find((1, "root", 0))
        for r in roots:
            chi = nfaces[r] - ngaps[r] - len(punct[r])
            info[r] = (chi, cusps[r], frozenset(punct[r]), r == outer)
        return find, info, gap_face, arc_parent


# ---------------------------------------------------------------------------
# abstract tracks


@dataclass(frozen=True)
class Region:
    id: int
    chi: int
    cusps: int
    punctures: frozenset
    outer: bool

    @property
    def index(self) -> Fraction:
        return Fraction(self.chi) - Fraction(self.cusps, 2)


@dataclass(frozen=True)
class RegionReport:
    regions: tuple[Region, ...]

    @property
    def ok(self) -> bool:
        return all(r.index < 0 for r in self.regions)

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class TrainTrack:
    """Ribbon-graph track.

    ``switches[v] = (large, smalls)``; ``right[d]`` is the region on the right
    of dart ``d`` when travelling away from its switch; ``region_info[r]`` is
    ``(punctures, outer)``.  ``chart`` is ``(diagram, exprs)`` where
    ``exprs[t]`` gives crossing ``t``'s weight as ``{branch: coefficient}``.
    """

    n: int
    switches: tuple[tuple[Dart, tuple[Dart, ...]], ...]
    right: Mapping[Dart, int]
    region_info: Mapping[int, tuple[frozenset, bool]]
    chart: tuple[DiagramTrack, tuple[tuple[tuple[int, int], ...], ...]] | None = None

    # -- incidence ---------------------------------------------------------
    @property
    def switch_of(self) -> dict[Dart, int]:
        out = {}
        for v, (large, smalls) in enumerate(self.switches):
            for d in (large,) + smalls:
                if d in out:
                    raise TrackError(f"dart {d} attached twice")
                out[d] = v
        return out

    @property
    def branches(self) -> list[int]:
        return sorted({d[0] for large, smalls in self.switches for d in (large,) + smalls})

    @property
    def darts(self) -> list[Dart]:
        return sorted(self.switch_of)

    def is_large(self, d: Dart) -> bool:
        return self.switches[self.switch_of[d]][0] == d

    def ccw(self, v: int) -> tuple[Dart, ...]:
        large, smalls = self.switches[v]
        return (large,) + smalls

    def ccw_next(self, d: Dart) -> Dart:
        cyc = self.ccw(self.switch_of[d])
        return cyc[(cyc.index(d) + 1) % len(cyc)]

    def switch_matrix(self) -> tuple[list[int], list[list[int]]]:
        """Rows: switches; columns: branches; large minus smalls."""
        cols = self.branches
        pos = {b: i for i, b in enumerate(cols)}
        rows = []
        for large, smalls in self.switches:
            row = [0] * len(cols)
            row[pos[large[0]]] += 1
            for d in smalls:
                row[pos[d[0]]] -= 1
            rows.append(row)
        return cols, rows

    def is_measure(self, mu: Mapping[int, Fraction | int]) -> bool:
        if any(mu.get(b, 0) < 0 for b in self.branches):
            return False
        return all(mu.get(large[0], 0) == sum(mu.get(d[0], 0) for d in smalls)
                   for large, smalls in self.switches)

    def branch_kind(self, b: int) -> str:
        big = [self.is_large((b, e)) for e in (0, 1)]
        return "large" if all(big) else "small" if not any(big) else "mixed"

    # -- walks and regions -------------------------------------------------
    def walks(self) -> list[list[Dart]]:
        """Boundary walks; each dart's right side is traced exactly once."""
        sw = self.switch_of
        for d in sw:
            if _opp(d) not in sw:
                raise TrackError(f"dangling dart {_opp(d)}")
        seen = set()
        out = []
        for d0 in sorted(sw):
            if d0 in seen:
                continue
            walk = []
            d = d0
            while d not in seen:
                seen.add(d)
                walk.append(d)
                d = self.ccw_next(_opp(d))
            if d != d0:
                raise TrackError("boundary walk does not close")
            out.append(walk)
        return out

    def region_report(self) -> RegionReport:
        walks = self.walks()
        per: dict[int, list[list[Dart]]] = defaultdict(list)
        for w in walks:
            rs = {self.right[d] for d in w}
            if len(rs) != 1:
                raise TrackError("a boundary walk borders two regions")
            per[rs.pop()].append(w)
        out = []
        for r, ws in sorted(per.items()):
            punct, outer = self.region_info[r]
            cusps = 0
            for w in ws:
                for d in w:
                    arrive = _opp(d)
                    nxt = self.ccw_next(arrive)
                    if not self.is_large(arrive) and not self.is_large(nxt):
                        cusps += 1
            chi = 2 - len(ws) - len(punct) - (1 if outer else 0)
            out.append(Region(r, chi, cusps, frozenset(punct), outer))
        covered = set().union(*(p for p, _ in self.region_info.values())) if self.region_info else set()
        if covered != set(range(1, self.n + 1)):
            raise TrackError("punctures not all assigned to regions")
        return RegionReport(tuple(out))

    # -- chart -------------------------------------------------------------
    def crossing_weights(self, mu: Mapping[int, int]) -> list[int]:
        if self.chart is None:
            raise NotCarried("track has no chart to realize curves")
        return [sum(c * mu.get(b, 0) for b, c in expr) for expr in self.chart[1]]

    def realize(self, mu: Mapping[int, int | Fraction]) -> ChordMulticurve:
        """The multicurve carried with integral measure ``mu``."""
        if not self.is_measure(mu):
            raise ValueError("not a transverse measure")
        if any(Fraction(v).denominator != 1 for v in mu.values()):
            raise ValueError("realization needs integral weights")
        w = self.crossing_weights({b: int(v) for b, v in mu.items()})
        return self.chart[0].realize(w)

    def with_moves(self, switches, carry: Mapping[int, Mapping[int, int]],
                   merge_regions: bool = True) -> "TrainTrack":
        """Rebuild after a move.  ``carry[old] = {new: coeff}`` expresses old weights."""
        return _rebuild(self, switches, carry)


def _rebuild(old: TrainTrack, switches, carry) -> TrainTrack:
    tmp = TrainTrack(old.n, tuple(switches), {}, {}, None)
    walks = tmp.walks()
    old_right = old.right
    parent: dict[int, int] = {r: r for r in old.region_info}

    def find(r):
        while parent[r] != r:
            parent[r] = parent[parent[r]]
            r = parent[r]
        return r

    walk_regions = []
    for w in walks:
        rs = [old_right[d] for d in w if d in old_right and d[0] not in carry_new_ids(carry, old)]
        if not rs:
            raise IllegalMove("move would create a new complementary region")
        for r in rs[1:]:
            a, b = find(rs[0]), find(r)
            if a != b:
                parent[max(a, b)] = min(a, b)
        walk_regions.append(rs[0])
    right = {}
    for w, r0 in zip(walks, walk_regions):
        for d in w:
            right[d] = find(r0)
    info: dict[int, tuple[frozenset, bool]] = {}
    for r, (punct, outer) in old.region_info.items():
        root = find(r)
        p0, o0 = info.get(root, (frozenset(), False))
        info[root] = (p0 | punct, o0 or outer)
    used = set(right.values())
    info = {r: v for r, v in info.items() if r in used or v[0]}
    chart = None
    if old.chart is not None:
        diagram, exprs = old.chart
        new_exprs = []
        for expr in exprs:
            acc: dict[int, int] = defaultdict(int)
            for b, c in expr:
                for b2, c2 in carry.get(b, {b: 1}).items():
                    acc[b2] += c * c2
            new_exprs.append(tuple(sorted((b, c) for b, c in acc.items() if c)))
        chart = (diagram, tuple(new_exprs))
    return TrainTrack(old.n, tuple(switches), right, info, chart)


def carry_new_ids(carry, old: TrainTrack) -> set[int]:
    """Branch ids of the old track whose geometry changed (they are carried non-trivially)."""
    return {b for b, m in carry.items() if m != {b: 1}}


# ---------------------------------------------------------------------------
# diagram -> abstract


def from_diagram(dt: DiagramTrack) -> tuple[TrainTrack, dict]:
    """Abstract track of an axis-drawn track.

    Returns the track and a dictionary with ``crossing_branch`` (branch of
    each crossing's vertical segment) and ``arc_branch`` (branch containing
    each arc, keyed by ``(side, group)`` for the group at either end).
    """
    T = dt.size
    ug, lg = dt.group_index(1), dt.group_index(-1)
    # segments: ("V", t) top end at upper group, bottom end at lower group;
    # ("A", g, h) and ("B", g, h) arcs with g left of h.
    junctions = {}
    for side, groups, partner in ((1, dt.upper_groups, dt.upper_match),
                                  (-1, dt.lower_groups, dt.lower_match)):
        for g, members in enumerate(groups):
            h = partner[g]
            arc = ("A" if side > 0 else "B", min(g, h), max(g, h))
            arc_end = 0 if g < h else 1
            small_ends = [(("V", t), 0 if side > 0 else 1) for t in members]
            if side < 0:
                small_ends.reverse()
            junctions[(side, g)] = ((arc, arc_end), tuple(small_ends))

    def seg_other(seg):
        if seg[0] == "V":
            t = seg[1]
            return {0: (1, ug[t]), 1: (-1, lg[t])}
        side = 1 if seg[0] == "A" else -1
        return {0: (side, seg[1]), 1: (side, seg[2])}

    switch_js = [j for j, (_, smalls) in sorted(junctions.items()) if len(smalls) >= 2]
    # loops with no switch get a bivalent switch at an upper junction
    is_switch = set(switch_js)
    seen_seg_end = set()
    branches = []  # list of lists of (seg, from_end)

    def trace(j, he):
        """Walk from junction j out through half-end he until the next switch."""
        path = []
        seg, e = he
        while True:
            seen_seg_end.add((seg, e))
            path.append((seg, e))
            seen_seg_end.add((seg, 1 - e))
            jn = seg_other(seg)[1 - e]
            if jn in is_switch:
                return path, jn, (seg, 1 - e)
            large, smalls = junctions[jn]
            arrive = (seg, 1 - e)
            nxt = smalls[0] if arrive == large else large
            seg, e = nxt

    def all_half_ends(j):
        large, smalls = junctions[j]
        return (large,) + smalls

    dart_of_half_end = {}
    branch_paths = []
    pending = list(switch_js)
    while True:
        for j in sorted(is_switch, key=repr):
            for he in all_half_ends(j):
                if he in seen_seg_end:
                    continue
                path, jend, arrive = trace(j, he)
                b = len(branch_paths)
                branch_paths.append(path)
                dart_of_half_end[he] = (b, 0)
                dart_of_half_end[arrive] = (b, 1)
        leftover = [(j, he) for j in sorted(junctions, key=repr) for he in all_half_ends(j)
                    if he not in seen_seg_end]
        if not leftover:
            break
        # a closed loop without switches: make an upper junction bivalent
        cands = [j for j, _ in leftover if j[0] > 0] or [j for j, _ in leftover]
        is_switch.add(cands[0])

    switches = []
    sw_index = {}
    for j in sorted(is_switch, key=repr):
        large, smalls = junctions[j]
        sw_index[j] = len(switches)
        switches.append((dart_of_half_end[large], tuple(dart_of_half_end[s] for s in smalls)))

    find, info, gap_face, arc_parent = dt.regions()
    region_ids = {}
    for r in info:
        region_ids[r] = len(region_ids)

    def right_face(seg, e):
        kind = seg[0]
        if kind == "V":
            t = seg[1]
            return gap_face[(1, t)] if e == 0 else gap_face[(1, t + 1)]
        side = 1 if kind == "A" else -1
        groups = dt.upper_groups if side > 0 else dt.lower_groups
        g, h = seg[1], seg[2]
        left, rightg = (g, h) if groups[g][0] < groups[h][0] else (h, g)
        inside = gap_face[(side, groups[left][-1] + 1)]
        outside = gap_face[(side, groups[left][0])]
        # travelling from end e: end 0 is at group g
        start_group = g if e == 0 else h
        eastward = start_group == left
        if side > 0:
            return inside if eastward else outside
        return outside if eastward else inside

    right = {}
    for b, path in enumerate(branch_paths):
        seg, e = path[0]
        right[(b, 0)] = region_ids[find(right_face(seg, e))]
        seg, e = path[-1]
        right[(b, 1)] = region_ids[find(right_face(seg, 1 - e))]
    region_info = {region_ids[r]: (v[2], v[3]) for r, v in info.items()}
    crossing_branch = [0] * T
    arc_branch = {}
    for b, path in enumerate(branch_paths):
        for seg, e in path:
            if seg[0] == "V":
                crossing_branch[seg[1]] = b
            else:
                side = 1 if seg[0] == "A" else -1
                arc_branch[(side, seg[1])] = b
                arc_branch[(side, seg[2])] = b
    exprs = tuple(((crossing_branch[t], 1),) for t in range(T))
    track = TrainTrack(dt.n, tuple(switches), right, region_info, (dt, exprs))
    first_seg = {}
    for b, path in enumerate(branch_paths):
        first_seg[(b, 0)] = path[0][0]
        first_seg[(b, 1)] = path[-1][0]
    meta = {"crossing_branch": crossing_branch, "arc_branch": arc_branch,
            "first_segment": first_seg,
            "switch_of_group": {j: sw_index[j] for j in sw_index},
            "diagram_regions": info}
    return track, meta


def validate(t: TrainTrack) -> RegionReport:
    """Region indices; ``report.ok`` is the train-track condition."""
    for large, smalls in t.switches:
        if not smalls:
            raise TrackError("switch without small ends")
    return t.region_report()


# ---------------------------------------------------------------------------
# train paths, recurrence, vertex cycles


def transition_graph(t: TrainTrack) -> nx.DiGraph:
    """Nodes ``(b, e)``: travel along ``b`` leaving its end ``e``."""
    g = nx.DiGraph()
    sw = t.switch_of
    for d in sw:
        g.add_node(d)
    for d in sw:
        arrive = _opp(d)
        v = sw[arrive]
        large, smalls = t.switches[v]
        if arrive == large:
            for s in smalls:
                g.add_edge(d, s)
        else:
            g.add_edge(d, large)
    return g


def is_recurrent(t: TrainTrack) -> bool:
    """Every branch lies on a closed train path."""
    g = transition_graph(t)
    on_cycle = set()
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1 or any(g.has_edge(d, d) for d in comp):
            on_cycle |= {d[0] for d in comp}
    return on_cycle == set(t.branches)


def _rank(rows: list[list[int]]) -> int:
    if not rows or not rows[0]:
        return 0
    return sympy.Matrix(rows).rank()


@dataclass(frozen=True)
class VertexCycle:
    measure: tuple[tuple[int, int], ...]  # sorted (branch, weight), primitive
    curve: ChordMulticurve | None

    def as_dict(self) -> dict[int, int]:
        return dict(self.measure)


def _primitive(vec: Mapping[int, int]) -> tuple[tuple[int, int], ...]:
    g = 0
    for v in vec.values():
        g = math.gcd(g, v)
    return tuple(sorted((b, v // g) for b, v in vec.items() if v))


def wide_cycles(t: TrainTrack, limit: int = 200000) -> list[dict[int, int]]:
    """Measures of closed train paths using each oriented branch at most once."""
    g = transition_graph(t)
    out = {}
    for k, cyc in enumerate(nx.simple_cycles(g)):
        if k >= limit:
            raise RuntimeError("too many closed train paths")
        mu: dict[int, int] = defaultdict(int)
        for b, _ in cyc:
            mu[b] += 1
        key = tuple(sorted(mu.items()))
        out[key] = dict(mu)
    return list(out.values())


def is_extreme(t: TrainTrack, mu: Mapping[int, int]) -> bool:
    cols, rows = t.switch_matrix()
    supp = [i for i, b in enumerate(cols) if mu.get(b, 0)]
    sub = [[row[i] for i in supp] for row in rows]
    return _rank(sub) == len(supp) - 1


def vertex_cycles(t: TrainTrack, realize: bool = True,
                  require_recurrent: bool = True) -> list[VertexCycle]:
    """Extreme rays of the measure cone, found among closed wide train paths.

    Raises ``TrackError`` on a non-recurrent track unless ``require_recurrent``
    is false; extreme rays are still found then, on the recurrent part.
    """
    if require_recurrent and not is_recurrent(t):
        raise TrackError("track is not recurrent")
    rays = set()
    for mu in wide_cycles(t):
        if is_extreme(t, mu):
            rays.add(_primitive(mu))
    out = []
    for ray in sorted(rays):
        curve = None
        if realize and t.chart is not None:
            curve = t.realize(dict(ray))
            if len(curve.components) != 1:
                raise AssertionError("extreme measure realized by several components")
        out.append(VertexCycle(ray, curve))
    return out


def vertex_curves(t: TrainTrack) -> set[ChordMulticurve]:
    return {v.curve for v in vertex_cycles(t, require_recurrent=False)}


# ---------------------------------------------------------------------------
# measures and curves


def strand_components(t: TrainTrack, mu: Mapping[int, int]) -> list[dict[int, int]]:
    """Per-component measures of the multicurve realized inside the ribbon graph."""
    parent: dict[tuple[int, int], tuple[int, int]] = {}
    for b in t.branches:
        for r in range(mu.get(b, 0)):
            parent[(b, r)] = (b, r)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def right_index(d: Dart, r: int, into: bool) -> int:
        """Strand at right-offset r (facing away from the switch) as an index along 0->1."""
        b, e = d
        m = mu.get(b, 0)
        away_is_forward = e == 0
        forward = away_is_forward != into
        return r if forward else m - 1 - r

    for large, smalls in t.switches:
        offset = 0
        for s in smalls:
            for r in range(mu.get(s[0], 0)):
                a = (large[0], right_index(large, offset + r, True))
                b = (s[0], right_index(s, r, False))
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
            offset += mu.get(s[0], 0)
        if offset != mu.get(large[0], 0):
            raise ValueError("switch equation fails")
    comps: dict[tuple[int, int], dict[int, int]] = defaultdict(lambda: defaultdict(int))
    for x in parent:
        comps[find(x)][x[0]] += 1
    return [dict(c) for c in comps.values()]


def decompose_measure(t: TrainTrack, mu: Mapping[int, Fraction | int]):
    """Write ``mu`` as a positive combination of disjoint carried curves.

    Returns ``[(measure, curve, weight)]`` sorted by measure.
    """
    mu = {b: Fraction(v) for b, v in mu.items() if v}
    if not mu:
        raise ValueError("zero measure")
    if not t.is_measure(mu):
        raise ValueError("weights violate the switch equations")
    scale = 1
    for v in mu.values():
        scale = scale * v.denominator // math.gcd(scale, v.denominator)
    ints = {b: int(v * scale) for b, v in mu.items()}
    groups: dict[tuple, int] = defaultdict(int)
    for comp in strand_components(t, ints):
        groups[tuple(sorted(comp.items()))] += 1
    out = []
    for key, count in sorted(groups.items()):
        curve = t.realize(dict(key)) if t.chart is not None else None
        out.append((key, curve, Fraction(count, scale)))
    return out


def measure_of(t: TrainTrack, curve: ChordMulticurve, witness) -> dict[int, int]:
    """Transverse measure of a carried curve given a carrying witness.

    ``witness`` is either a measure (mapping branch to weight) or a list of
    closed train paths, each a sequence of oriented branches ``(b, e)``.
    """
    if isinstance(witness, Mapping):
        mu = {b: int(v) for b, v in witness.items() if v}
    else:
        g = transition_graph(t)
        mu = defaultdict(int)
        for path in witness:
            path = list(path)
            for a, b in zip(path, path[1:] + path[:1]):
                if not g.has_edge(a, b):
                    raise NotCarried(f"{a} -> {b} is not a train path step")
            for b, _ in path:
                mu[b] += 1
        mu = dict(mu)
    if not t.is_measure(mu):
        raise NotCarried("witness violates the switch equations")
    if not mu:
        if reduce(curve).size:
            raise NotCarried("nonempty curve with zero witness")
        return {}
    if t.realize(mu) != reduce(curve):
        raise NotCarried("witness realizes a different curve")
    return mu


# ---------------------------------------------------------------------------
# elementary moves


@dataclass(frozen=True, eq=False)
class Move:
    """A move's result with weights of the old branches in terms of new ones."""

    track: TrainTrack
    carry: Mapping[int, Mapping[int, int]]
    tag: str

    def transport(self, mu: Mapping[int, int | Fraction]) -> dict[int, int | Fraction]:
        out = {}
        for b, expr in self.carry.items():
            out[b] = sum(c * mu.get(b2, 0) for b2, c in expr.items())
        return out


def _fresh(t: TrainTrack, k: int = 1) -> list[int]:
    top = max(t.branches, default=-1)
    return list(range(top + 1, top + 1 + k))


def _full_carry(t: TrainTrack, changed: Mapping[int, Mapping[int, int]]):
    carry = {b: {b: 1} for b in t.branches}
    carry.update(changed)
    return carry


def _finish(t: TrainTrack, switches, changed, tag) -> Move:
    carry = _full_carry(t, changed)
    new = _rebuild(t, switches, carry)
    for b in list(carry):
        carry[b] = {b2: c for b2, c in carry[b].items() if b2 in set(new.branches)}
    rep = validate(new)
    if not rep.ok:
        raise IllegalMove(f"{tag} creates a region of nonnegative index")
    return Move(new, carry, tag)


def comb(t: TrainTrack, branch: int) -> Move:
    """Shrink a mixed branch to a point, merging its two switches."""
    if t.branch_kind(branch) != "mixed":
        raise IllegalMove(f"branch {branch} is not mixed")
    sw = t.switch_of
    d_small = next((branch, e) for e in (0, 1) if not t.is_large((branch, e)))
    d_large = _opp(d_small)
    v, w = sw[d_small], sw[d_large]
    if v == w:
        raise IllegalMove("cannot comb a branch with both ends at one switch")
    large_v, smalls_v = t.switches[v]
    _, smalls_w = t.switches[w]
    k = smalls_v.index(d_small)
    merged = smalls_v[:k] + smalls_w + smalls_v[k + 1:]
    switches = [s for i, s in enumerate(t.switches) if i != w]
    switches[v if v < w else v - 1] = (large_v, merged)
    changed = {branch: dict(_count(d[0] for d in smalls_w))}
    return _finish(t, switches, changed, "comb")


def _count(items: Iterable[int]) -> dict[int, int]:
    out: dict[int, int] = defaultdict(int)
    for x in items:
        out[x] += 1
    return out


def uncomb(t: TrainTrack, switch: int, start: int, stop: int) -> Move:
    """Pull the small ends ``start:stop`` of a switch onto a new mixed branch."""
    large, smalls = t.switches[switch]
    if not (0 <= start < stop <= len(smalls)) or stop - start < 2:
        raise IllegalMove("uncomb needs at least two consecutive small ends")
    if stop - start == len(smalls):
        raise IllegalMove("uncomb needs a proper run of small ends")
    (b,) = _fresh(t)
    switches = list(t.switches)
    switches[switch] = (large, smalls[:start] + ((b, 0),) + smalls[stop:])
    switches.append(((b, 1), smalls[start:stop]))
    return _finish(t, switches, {}, "uncomb")


def split(t: TrainTrack, branch: int, parity: str, v_cusp: int = 1, w_cusp: int = 1) -> Move:
    """Split a large branch, oriented from its end 0 to its end 1.

    ``v_cusp`` separates the small ends at end 0 into a left group (the first
    ``v_cusp`` in ccw order) and a right group; ``w_cusp`` separates the
    small ends at end 1 into a right group (first ``w_cusp``) and a left
    group.  ``central`` joins left to left and right to right.  ``right``
    adds a diagonal carrying part of the left strand into the right group;
    ``left`` carries part of the right strand into the left group.
    """
    if t.branch_kind(branch) != "large":
        raise IllegalMove(f"branch {branch} is not large")
    if parity not in ("left", "right", "central"):
        raise ValueError(f"unknown parity {parity!r}")
    sw = t.switch_of
    v, w = sw[(branch, 0)], sw[(branch, 1)]
    if v == w:
        raise IllegalMove("branch has both ends at one switch")
    a = t.switches[v][1]
    c = t.switches[w][1]
    if not (0 < v_cusp < len(a) and 0 < w_cusp < len(c)):
        raise IllegalMove("cusp index out of range")
    left_v, right_v = a[:v_cusp], a[v_cusp:]
    right_w, left_w = c[:w_cusp], c[w_cusp:]
    switches = [s for i, s in enumerate(t.switches) if i not in (v, w)]
    if parity == "central":
        bl, br = _fresh(t, 2)
        switches += [((bl, 0), left_v), ((br, 0), right_v),
                     ((bl, 1), left_w), ((br, 1), right_w)]
        return _finish(t, switches, {branch: {bl: 1, br: 1}}, "split:central")
    bl, br, d, e = _fresh(t, 4)
    switches += [((bl, 0), left_v), ((br, 0), right_v)]
    if parity == "right":
        # left strand forks into the left group and the diagonal; the diagonal
        # joins the right strand ahead of the right group
        switches += [((bl, 1), ((d, 0),) + left_w),
                     ((e, 0), ((d, 1), (br, 1))),
                     ((e, 1), right_w)]
    else:
        switches += [((br, 1), right_w + ((d, 0),)),
                     ((e, 0), ((bl, 1), (d, 1))),
                     ((e, 1), left_w)]
    return _finish(t, switches, {branch: {bl: 1, br: 1}}, f"split:{parity}")


def slide(t: TrainTrack, branch: int) -> Move:
    """Move a switch past its neighbour along a mixed branch (comb, then uncomb)."""
    if t.branch_kind(branch) != "mixed":
        raise IllegalMove(f"branch {branch} is not mixed")
    sw = t.switch_of
    d_small = next((branch, e) for e in (0, 1) if not t.is_large((branch, e)))
    v = sw[d_small]
    smalls_v = t.switches[v][1]
    k = smalls_v.index(d_small)
    q = len(t.switches[sw[_opp(d_small)]][1])
    first = comb(t, branch)
    v2 = next(i for i, s in enumerate(first.track.switches) if s[0] == t.switches[v][0])
    if k > 0:
        second = uncomb(first.track, v2, k - 1, k + q - 1)
    elif k + 1 < len(smalls_v):
        second = uncomb(first.track, v2, k + 1, k + q + 1)
    else:
        raise IllegalMove("slide needs a neighbouring small end")
    return then(first, second, "slide")


# ---------------------------------------------------------------------------
# normal forms and isomorphism


def _compose(first: Mapping[int, Mapping[int, int]], second: Mapping[int, Mapping[int, int]]):
    """Carry of two moves in a row: old weights via middle weights via new ones."""
    out = {}
    for b, expr in first.items():
        acc: dict[int, int] = defaultdict(int)
        for b2, c in expr.items():
            for b3, c3 in second.get(b2, {b2: 1}).items():
                acc[b3] += c * c3
        out[b] = {k: v for k, v in acc.items() if v}
    return out


def then(a: Move, b: Move, tag: str | None = None) -> Move:
    """``a`` followed by ``b`` (``b`` acts on ``a.track``)."""
    return Move(b.track, _compose(a.carry, b.carry), tag or f"{a.tag}+{b.tag}")


def _smooth_once(t: TrainTrack) -> Move | None:
    """Merge two branches through a switch with one small end (loops keep one)."""
    target = None
    for v, (large, smalls) in enumerate(t.switches):
        if len(smalls) == 1 and smalls[0][0] != large[0]:
            target = v
            break
    if target is None:
        return None
    large, (small,) = t.switches[target]
    # branch of `small` absorbs the branch of `large`
    keep, gone = small[0], large[0]
    far_gone = _opp(large)
    rename = lambda d: (keep, small[1]) if d == far_gone else d
    switches = [(rename(lg), tuple(rename(d) for d in sm))
                for i, (lg, sm) in enumerate(t.switches) if i != target]
    right = {d: r for d, r in t.right.items() if d[0] != gone and d != small}
    right[(keep, small[1])] = t.right[far_gone]
    chart = None
    if t.chart is not None:
        dg, exprs = t.chart
        chart = (dg, tuple(tuple(sorted(_count_expr(expr, gone, keep).items())) for expr in exprs))
    new = TrainTrack(t.n, tuple(switches), right, t.region_info, chart)
    carry = {b: {b: 1} for b in t.branches}
    carry[gone] = {keep: 1}
    return Move(new, carry, "smooth")


def _count_expr(expr, gone, keep):
    acc: dict[int, int] = defaultdict(int)
    for b, c in expr:
        acc[keep if b == gone else b] += c
    return acc


def comb_normal_move(t: TrainTrack) -> Move:
    """Smooth bivalent switches and comb every mixed branch, keeping the carry."""
    out = Move(t, {b: {b: 1} for b in t.branches}, "comb")
    while True:
        m = _smooth_once(out.track)
        if m is None:
            cur = out.track
            sw = cur.switch_of
            mixed = [b for b in cur.branches
                     if cur.branch_kind(b) == "mixed" and sw[(b, 0)] != sw[(b, 1)]]
            if not mixed:
                return out
            m = comb(cur, mixed[0])
        out = then(out, m, "comb")


def comb_normal(t: TrainTrack) -> TrainTrack:
    """Smooth bivalent switches and comb every mixed branch."""
    return comb_normal_move(t).track


def _dart_graph(t: TrainTrack) -> nx.DiGraph:
    g = nx.DiGraph()
    sw = t.switch_of
    for d in sw:
        # a bivalent switch is a smooth point: its two darts are interchangeable
        smooth = len(t.switches[sw[d]][1]) == 1
        g.add_node(("d",) + d, kind=("dart", "smooth" if smooth else t.is_large(d)))
        g.add_edge(("d",) + d, ("d",) + _opp(d), kind="alpha")
        g.add_edge(("d",) + d, ("d",) + t.ccw_next(d), kind="sigma")
        g.add_edge(("d",) + d, ("r", t.right[d]), kind="right")
    for r, (punct, outer) in t.region_info.items():
        g.add_node(("r", r), kind=("region", tuple(sorted(punct)), outer))
    return g


def isomorphic(a: TrainTrack, b: TrainTrack) -> bool:
    ga, gb = _dart_graph(a), _dart_graph(b)
    nm = nx.algorithms.isomorphism.categorical_node_match("kind", None)
    em = nx.algorithms.isomorphism.categorical_edge_match("kind", None)
    return nx.is_isomorphic(ga, gb, node_match=nm, edge_match=em)


def comb_equivalent(a: TrainTrack, b: TrainTrack) -> bool:
    return isomorphic(comb_normal(a), comb_normal(b))


# ---------------------------------------------------------------------------
# tracks from strip decompositions


@dataclass(frozen=True, eq=False)
class StripTrack:
    """A track built from a strip decomposition, with the bookkeeping of its pieces."""

    track: TrainTrack
    diagram: DiagramTrack
    decomposition: StripDecomposition
    connectors: tuple[tuple[End, End], ...]  # (upper end, lower end), one per connector crossing
    crossing_source: tuple[tuple, ...]
    strip_branch: dict  # strip id -> branch through its representative arc
    connector_branch: dict  # (upper end, lower end) -> branch
    loop_branch: dict
    end_switch: dict  # End -> switch index (None when the end has a single connector)
    end_group: dict  # End -> (side, group index)
    meta: dict

    def natural_measure(self) -> dict[int, int]:
        """Measure of the pants decomposition itself."""
        w = self.natural_weights()
        return self._branch_measure(w)

    def natural_weights(self) -> list[int]:
        d = self.decomposition
        out = []
        for src in self.crossing_source:
            if src[0] == "conn":
                u, l = src[1]
                lo, hi = u.overlap(l)
                out.append(hi - lo + 1)
            elif src[0] == "strip":
                out.append(d.strip(src[1]).width)
            else:
                out.append(1)
        return out

    def _branch_measure(self, weights: Sequence[int]) -> dict[int, int]:
        t = self.track
        mu = {}
        cb = self.meta["crossing_branch"]
        for x, b in enumerate(cb):
            mu[b] = weights[x]
        for large, smalls in t.switches:
            for d in (large,):
                if d[0] not in mu:
                    mu[d[0]] = sum(mu[s[0]] for s in smalls)
        return mu


def from_strips(d: StripDecomposition) -> StripTrack:
    """The track of a strip decomposition: one segment per strip, connector and loop."""
    p = d.pants
    k = d.marker
    pairs = d.overlapping_pairs()
    # crossing slots: connectors sit at their overlap, free points keep their index
    slots = []
    for u, l in pairs:
        lo, _ = u.overlap(l)
        slots.append((lo, 0, ("conn", (u, l))))
    rep_paths = {}
    for s in d.strips:
        path = d.representative(s)
        rep_paths[s.id] = path
        for x, _ in path[1:-1]:
            slots.append((x, 1, ("strip", s.id, x)))
    for c in d.loops:
        for x in p.components[c]:
            slots.append((x, 1, ("loop", c, x)))
    slots.sort()
    crossing_of = {}
    seg_of = []
    sources = []
    for t, (x, _, src) in enumerate(slots):
        crossing_of[src] = t
        seg_of.append(p.segment_of[x])
        sources.append(src[:2] if src[0] != "conn" else src)
    # groups: each end gathers its connectors; every free crossing is alone
    groups = {1: [], -1: []}
    group_of_end = {}
    for side in (1, -1):
        ends = sorted({e for e, _ in d.ends if e.side == side})
        for e in ends:
            members = sorted(crossing_of[("conn", pr)] for pr in pairs if (pr[0] if side > 0 else pr[1]) == e)
            group_of_end[e] = len(groups[side])
            groups[side].append(tuple(members))
    single = {1: {}, -1: {}}
    for src, t in crossing_of.items():
        if src[0] != "conn":
            for side in (1, -1):
                single[side][t] = len(groups[side])
                groups[side].append((t,))
    # order groups along the axis
    remap = {}
    for side in (1, -1):
        order = sorted(range(len(groups[side])), key=lambda g: groups[side][g][0])
        remap[side] = {g: i for i, g in enumerate(order)}
        groups[side] = [groups[side][g] for g in order]
    match = {1: [None] * len(groups[1]), -1: [None] * len(groups[-1])}

    def attach(node, side):
        if node[0] == "end":
            return remap[side][group_of_end[node[1]]]
        return remap[side][single[side][node[1]]]

    def join(x, y, side):
        gx, gy = attach(x, side), attach(y, side)
        if match[side][gx] is not None or match[side][gy] is not None:
            raise AssertionError("group joined twice")
        match[side][gx], match[side][gy] = gy, gx

    for s in d.strips:
        path = rep_paths[s.id]
        nodes = [("end", s.a)] + [("pt", crossing_of[("strip", s.id, x)]) for x, _ in path[1:-1]] + [("end", s.b)]
        side = path[0][1]
        for x, y in zip(nodes, nodes[1:]):
            join(x, y, side)
            side = -side
    for c in d.loops:
        comp = p.components[c]
        pts = [("pt", crossing_of[("loop", c, x)]) for x in comp]
        side = 1
        for x, y in zip(pts, pts[1:] + pts[:1]):
            join(x, y, side)
            side = -side
    dt = DiagramTrack(p.n, tuple(seg_of), tuple(groups[1]), tuple(groups[-1]),
                      tuple(match[1]), tuple(match[-1]))
    track, meta = from_diagram(dt)
    cb = meta["crossing_branch"]
    connector_branch = {src[1]: cb[t] for src, t in crossing_of.items() if src[0] == "conn"}
    strip_branch = {}
    for s in d.strips:
        path = rep_paths[s.id]
        if len(path) > 2:
            strip_branch[s.id] = cb[crossing_of[("strip", s.id, path[1][0])]]
        else:
            strip_branch[s.id] = meta["arc_branch"][(path[0][1], remap[path[0][1]][group_of_end[s.a]])]
    loop_branch = {c: cb[crossing_of[("loop", c, p.components[c][0])]] for c in d.loops}
    end_group = {e: (e.side, remap[e.side][g]) for e, g in group_of_end.items()}
    end_switch = {e: meta["switch_of_group"].get(end_group[e]) for e in end_group}
    return StripTrack(track, dt, d, tuple(pairs), tuple(sources), strip_branch,
                      connector_branch, loop_branch, end_switch, end_group, meta)


# ---------------------------------------------------------------------------
# cut -> split


@dataclass(frozen=True, eq=False)
class SplitStep:
    index: int
    kind: str  # the cut case
    tag: str  # "comb" or "split:<parity>"
    before: StripTrack
    after: StripTrack
    move: Move | None  # the split, when the cut is one
    direct: bool  # the split sits at the cusps read off the cut, without combing first
    checks: Mapping[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _reverse_branch(t: TrainTrack, b: int) -> TrainTrack:
    """Same track with the two ends of ``b`` renumbered."""
    swap = lambda d: (b, 1 - d[1]) if d[0] == b else d
    switches = tuple((swap(lg), tuple(swap(d) for d in sm)) for lg, sm in t.switches)
    right = {swap(d): r for d, r in t.right.items()}
    return TrainTrack(t.n, switches, right, t.region_info, t.chart)


def _candidate_splits(before: StripTrack, event) -> list[tuple[Move, bool]]:
    """Splits of the shrinking strip's branch at the cusps the cut points to.

    The cusp at the cut end separates the connector of the shorter base from
    the rest.  At the far end the cusp sits where the image of the cut part
    meets the remainder; when that point falls inside a connector the split
    has a parity, and both parities are offered.
    """
    s2 = event.shrinking
    z = event.marker_before - 1
    e2 = next(e for e in s2.ends if e.hi == z)
    f2 = s2.other(e2)
    if before.end_switch.get(f2) is None:
        return []
    t = before.track
    b = before.strip_branch[s2.id]
    v = before.end_switch[e2]
    if t.switch_of[(b, 0)] != v:
        t = _reverse_branch(t, b)
    sw = t.switch_of
    w = sw[(b, 1)]
    first = before.meta["first_segment"]

    def conn_of(d):
        seg = first[d if t is before.track else (d if d[0] != b else (b, 1 - d[1]))]
        return before.crossing_source[seg[1]][1]

    a = t.switches[v][1]
    c = t.switches[w][1]
    width1 = event.widths_before[0]
    cut_pos = [i for i, d in enumerate(a) if conn_of(d)[0 if e2.side < 0 else 1].hi == z
               and conn_of(d)[0 if e2.side < 0 else 1].width == width1]
    if len(cut_pos) != 1 or cut_pos[0] not in (0, len(a) - 1):
        raise AssertionError("cut connector is not extreme at its switch")
    v_cusp = 1 if cut_pos[0] == 0 else len(a) - 1
    if s2.flipped:
        boundary = f2.lo + width1
    else:
        boundary = f2.hi - width1 + 1
    spans = [conn_of(d)[0].overlap(conn_of(d)[1]) for d in c]
    out = []
    straddle = [k for k, (lo, hi) in enumerate(spans) if lo < boundary <= hi]
    if straddle:
        (k,) = straddle
        tries = [("right", k + 1), ("left", k)]
    else:
        meets = lambda x, y: x[1] + 1 == y[0] == boundary
        cuts = [k for k in range(1, len(c))
                if meets(spans[k - 1], spans[k]) or meets(spans[k], spans[k - 1])]
        tries = [("central", k) for k in cuts]
    for parity, w_cusp in tries:
        try:
            out.append((split(t, b, parity, v_cusp, w_cusp), True))
        except IllegalMove:
            pass
    if not out:
        # no legal split at the predicted cusps; comb first, then split the same branch
        norm = comb_normal_move(t)
        nt = norm.track
        if b in nt.branches and nt.branch_kind(b) == "large":
            out.extend((then(norm, m, m.tag), False) for m in _all_splits(nt, b))
    return out


def _all_splits(t: TrainTrack, b: int) -> Iterable[Move]:
    """Every legal split of ``b`` in either orientation, at every pair of cusps."""
    if t.branch_kind(b) != "large" or t.switch_of[(b, 0)] == t.switch_of[(b, 1)]:
        return
    for tt in (t, _reverse_branch(t, b)):
        sw = tt.switch_of
        p = len(tt.switches[sw[(b, 0)]][1])
        q = len(tt.switches[sw[(b, 1)]][1])
        for parity in ("central", "right", "left"):
            for vc, wc in itertools.product(range(1, p), range(1, q)):
                try:
                    yield split(tt, b, parity, vc, wc)
                except IllegalMove:
                    pass


def _second_splits(first: Move) -> Iterable[Move]:
    """A split of ``first``'s result, combed into normal form first."""
    norm = comb_normal_move(first.track)
    for b in norm.track.branches:
        for m in _all_splits(norm.track, b):
            yield then(first, then(norm, m, m.tag), f"{first.tag}+{m.tag}")


def _transports(t: TrainTrack, m: Move) -> bool:
    """Vertex cycles of the moved track pull back to measures carrying the same curves."""
    for vc in vertex_cycles(m.track, require_recurrent=False):
        mu = m.transport(vc.as_dict())
        if any(x < 0 for x in mu.values()) or not t.is_measure(mu):
            return False
        if t.chart is not None and t.realize(mu) != vc.curve:
            return False
    return True


def cuts_to_splitting_sequence(trace: CutTrace) -> list[SplitStep]:
    """Track of every stage, with the move relating consecutive tracks and its checks.

    Merges, loop closures and stretch-shrinks whose far base has a single
    connector must leave the track unchanged up to combing; every other
    stretch-shrink must be one split of the shrinking strip's branch.  When
    no single split matches, a pair of splits is searched for and recorded
    with ``single_split`` false.
    """
    tracks = [from_strips(d) for d in trace.decompositions()]
    out = []
    for i, ev in enumerate(trace.events):
        before, after = tracks[i], tracks[i + 1]
        t0, t1 = before.track, after.track
        checks = {"valid": validate(t1).ok}
        cands = _candidate_splits(before, ev) if ev.kind == STRETCH_SHRINK else []
        move, direct = None, False
        if cands:
            v1 = vertex_curves(t1)
            match = lambda m: comb_equivalent(m.track, t1) and vertex_curves(m.track) == v1
            for m, at_cusps in cands:
                if match(m):
                    move, direct = m, at_cusps
                    break
            if move is None:
                pairs = (m2 for m, at_cusps in cands if at_cusps for m2 in _second_splits(m))
                move = next((m2 for m2 in pairs if match(m2)), None)
                checks["single_split"] = False
            checks["split_matches"] = move is not None
            tag = move.tag if move is not None else "split:?"
            if move is not None:
                checks["transport"] = _transports(t0, move)
        else:
            tag = "comb"
            checks["comb_equivalent"] = comb_equivalent(t0, t1)
            checks["same_vertex_cycles"] = vertex_curves(t0) == vertex_curves(t1)
        out.append(SplitStep(i, ev.kind, tag, before, after, move, direct, checks))
    return out


# ---------------------------------------------------------------------------
# Dehn twists along spirallings


@dataclass(frozen=True)
class TwistCheck:
    holds: bool
    sign: int
    curve: ChordMulticurve
    word: BraidWord

    def __bool__(self) -> bool:
        return self.holds


def dehn_twist_check(trace: CutTrace, group: int, revolution: int = 0) -> TwistCheck:
    """Compare vertex cycles across one complete revolution with a Dehn twist image."""
    from .estimator import rounding_word

    g = trace.groups[group]
    if revolution >= g.complete:
        raise ValueError("group has no such complete revolution")
    start, stop = g.revolutions[revolution]
    before = from_strips(trace.state_before(start)).track
    after = from_strips(trace.states[stop - 1]).track
    gamma = spiralled_curve(trace, g)
    n = gamma.n
    w, (i, j) = rounding_word(gamma)
    v0 = vertex_curves(before)
    v1 = vertex_curves(after)
    for sign in (1, -1):
        twist = w.inverse() * BraidWord(n, (Letter.band(i, j, 2 * sign),) if j > i + 1 else (Letter.sigma(i, 2 * sign),)) * w
        image = {act(twist, c) for c in v0}
        if image == v1:
            return TwistCheck(True, sign, gamma, twist)
    return TwistCheck(False, 0, gamma, w)


# ---------------------------------------------------------------------------
# export


def to_text(t: TrainTrack) -> str:
    lines = [f"track n={t.n} switches={len(t.switches)} branches={len(t.branches)}"]
    for v, (large, smalls) in enumerate(t.switches):
        ends = " ".join(f"{b}.{e}" for b, e in smalls)
        lines.append(f"switch {v}: large {large[0]}.{large[1]} | small {ends}")
    sw = t.switch_of
    for b in t.branches:
        lines.append(f"branch {b}: {sw[(b, 0)]} -> {sw[(b, 1)]} ({t.branch_kind(b)})")
    for r in validate(t).regions:
        punct = ",".join(str(x) for x in sorted(r.punctures)) or "-"
        lines.append(f"region {r.id}: chi={r.chi} cusps={r.cusps} punctures={punct}"
                     f" outer={'yes' if r.outer else 'no'} index={r.index}")
    return "\n".join(lines) + "\n"


def to_dot(t: TrainTrack, name: str = "track") -> str:
    lines = [f"graph {name} {{", "  node [shape=point];"]
    for v in range(len(t.switches)):
        lines.append(f"  s{v};")
    sw = t.switch_of
    for b in t.branches:
        d0, d1 = (b, 0), (b, 1)
        tail = "large" if t.is_large(d0) else "small"
        head = "large" if t.is_large(d1) else "small"
        lines.append(f'  s{sw[d0]} -- s{sw[d1]} [label="{b}", taillabel="{tail[0].upper()}", headlabel="{head[0].upper()}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(t: TrainTrack) -> dict:
    sw = t.switch_of
    return {
        "n": t.n,
        "switches": [{"large": list(lg), "small": [list(d) for d in sm]} for lg, sm in t.switches],
        "branches": [{"id": b, "ends": [sw[(b, 0)], sw[(b, 1)]], "kind": t.branch_kind(b)}
                     for b in t.branches],
        "regions": [{"id": r.id, "chi": r.chi, "cusps": r.cusps, "punctures": sorted(r.punctures),
                     "outer": r.outer, "index": str(r.index)} for r in validate(t).regions],
        "recurrent": is_recurrent(t),
    }
