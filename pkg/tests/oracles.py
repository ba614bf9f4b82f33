"""Brute-force reference computations used only by the tests.

Nothing here calls the library algorithms it is checking.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache

from stripcut.curves import ChordMulticurve


@lru_cache(maxsize=None)
def noncrossing_matchings(size: int) -> tuple[tuple[int, ...], ...]:
    """All non-crossing perfect matchings of ``size`` points in a row."""
    if size == 0:
        return ((),)
    out = []
    for k in range(1, size, 2):
        for inner in noncrossing_matchings(k - 1):
            for outer in noncrossing_matchings(size - k - 1):
                m = [0] * size
                m[0], m[k] = k, 0
                for x, y in enumerate(inner):
                    m[x + 1] = y + 1
                for x, y in enumerate(outer):
                    m[x + k + 1] = y + k + 1
                out.append(tuple(m))
    return tuple(out)


def compositions(total: int, parts: int):
    for cut in itertools.combinations(range(total + parts - 1), parts - 1):
        prev, out = -1, []
        for c in cut + (total + parts - 1,):
            out.append(c - prev - 1)
            prev = c
        yield tuple(out)


def enclosed_by_winding(m: ChordMulticurve, comp) -> frozenset[int]:
    """Punctures inside a component: vertical ray upward crosses an odd number of arcs."""
    inside = set()
    for j in range(1, m.n + 1):
        left = m.starts[j]  # first point right of Pj
        hits = sum(1 for x in comp if x < left <= m.upper[x])
        if hits % 2:
            inside.add(j)
    return frozenset(inside)


def all_tight_curves(n: int, max_points: int) -> list[ChordMulticurve]:
    """Every tight essential simple closed curve with at most ``max_points`` cross points."""
    out = []
    for total in range(2, max_points + 1, 2):
        for seg in compositions(total, n + 1):
            sof = [s for s, c in enumerate(seg) for _ in range(c)]
            for up in noncrossing_matchings(total):
                if any(sof[x] == sof[x + 1] and up[x] == x + 1 for x in range(total - 1)):
                    continue
                for lo in noncrossing_matchings(total):
                    if any(sof[x] == sof[x + 1] and lo[x] == x + 1 for x in range(total - 1)):
                        continue
                    m = ChordMulticurve(n, seg, up, lo)
                    if len(m.components) != 1:
                        continue
                    k = len(enclosed_by_winding(m, m.components[0]))
                    if 2 <= k <= n - 1:
                        out.append(m)
    return out


def interleaving_intersection(a: ChordMulticurve, b: ChordMulticurve) -> int:
    """Minimum crossing count over every way of interleaving b's cross points with a's."""
    per_seg = []
    for s in range(a.n + 1):
        pa, pb = a.seg[s], b.seg[s]
        per_seg.append([frozenset(c) for c in itertools.combinations(range(pa + pb), pa)])
    best = None
    for choice in itertools.product(*per_seg):
        pos_a, pos_b = [], []
        base = 0
        for s, slots_a in enumerate(choice):
            width = a.seg[s] + b.seg[s]
            for t in range(width):
                (pos_a if t in slots_a else pos_b).append(base + t)
            base += width
        count = 0
        for ma, mb in ((a.upper, b.upper), (a.lower, b.lower)):
            arcs_a = [(pos_a[x], pos_a[y]) for x, y in enumerate(ma) if x < y]
            arcs_b = [(pos_b[x], pos_b[y]) for x, y in enumerate(mb) if x < y]
            for p, q in arcs_a:
                for r, t in arcs_b:
                    if p < r < q < t or r < p < t < q:
                        count += 1
        if best is None or count < best:
            best = count
            if best == 0:
                break
    return best


# ---------------------------------------------------------------------------
# strip decompositions from scratch


def naive_arc(m: ChordMulticurve, k: int, x: int, side: int) -> list[tuple[int, int]]:
    """Points visited by the arc leaving cut point x on ``side``, with the side of arrival."""
    out = []
    y, s = x, side
    while True:
        y = (m.upper if s > 0 else m.lower)[y]
        out.append((y, s))
        if y < k:
            return out
        s = -s


def naive_decomposition(m: ChordMulticurve, k: int):
    """Strips as frozensets of their two bases ``(side, lo, hi)``, plus the loop point sets.

    Arc ends at adjacent cut points are parallel when the two arcs visit
    neighbouring points, on the same sides, all the way along.
    """
    sof = m.segment_of
    arcs = {}
    for x in range(k):
        for side in (1, -1):
            arcs[(x, side)] = naive_arc(m, k, x, side)

    def parallel(x, side):
        a, b = arcs[(x, side)], arcs[(x + 1, side)]
        if sof[x] != sof[x + 1] or len(a) != len(b):
            return False
        return all(sa == sb and sof[p] == sof[q] and abs(p - q) == 1
                   for (p, sa), (q, sb) in zip(a, b))

    bases = []
    for side in (1, -1):
        start = 0
        for x in range(k):
            if x + 1 == k or not parallel(x, side):
                bases.append((side, start, x))
                start = x + 1
    strips = set()
    for side, lo, hi in bases:
        far, far_side = arcs[(lo, side)][-1]
        partner = next(b for b in bases if b[0] == far_side and b[1] <= far <= b[2])
        strips.add(frozenset({(side, lo, hi), partner}))
    loops = set()
    for comp in m.components:
        if min(comp) >= k:
            loops.add(frozenset(comp))
    return frozenset(strips), frozenset(loops)


def naive_cut_sequence(m: ChordMulticurve):
    """[(case, marker before, marker after)] by recomputing the decomposition at every marker."""
    k = m.size
    out = []
    while True:
        strips, _ = naive_decomposition(m, k)
        if not strips:
            return out
        top = {}
        for s in strips:
            for b in s:
                if b[2] == k - 1:
                    top[b[0]] = (s, b)
        (su, bu), (sl, bl) = top[1], top[-1]
        wu, wl = bu[2] - bu[1] + 1, bl[2] - bl[1] + 1
        if su == sl:
            case = "LoopClosure"
        elif wu == wl:
            case = "Merge"
        else:
            case = "StretchShrink"
        step = 1 if case == "LoopClosure" else min(wu, wl)
        out.append((case, k, k - step))
        k -= step


# ---------------------------------------------------------------------------
# extreme rays of {x >= 0, A x = 0}


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc]
        basis.append(v)
    return basis


def _normalize(v) -> tuple[int, ...]:
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints)


def double_description(rows: list[list[int]], ncols: int) -> set[tuple[int, ...]]:
    """Extreme rays of the pointed cone {x >= 0, rows . x = 0}, by double description.

    Starts from the orthant's rays and cuts by one hyperplane at a time; two
    rays on opposite sides combine when they are adjacent (no third ray's
    zero set contains the intersection of theirs).
    """
    rays = [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    ineqs = [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    for row in rows:
        a = [Fraction(v) for v in row]
        dot = lambda r: sum(x * y for x, y in zip(a, r))
        zero = [r for r in rays if dot(r) == 0]
        pos = [r for r in rays if dot(r) > 0]
        neg = [r for r in rays if dot(r) < 0]

        def zset(r):
            return frozenset(i for i, h in enumerate(ineqs) if sum(x * y for x, y in zip(h, r)) == 0)

        zs = {r: zset(r) for r in rays}
        new = list(zero)
        for p in pos:
            for q in neg:
                common = zs[p] & zs[q]
                if any(common <= zs[r] for r in rays if r not in (p, q)):
                    continue
                dp, dq = dot(p), dot(q)
                new.append(tuple(dp * y - dq * x for x, y in zip(p, q)))
        rays = [tuple(Fraction(x) for x in _normalize(r)) for r in new]
        rays = list(dict.fromkeys(rays))
        ineqs.append(a)
        ineqs.append([-x for x in a])
    return {_normalize(r) for r in rays if any(r)}


def support_rays(rows: list[list[int]], ncols: int) -> set[tuple[int, ...]]:
    """The same rays by brute force over supports: one-dimensional kernel, positive on it."""
    out = set()
    for k in range(1, ncols + 1):
        for supp in itertools.combinations(range(ncols), k):
            sub = [[Fraction(r[c]) for c in supp] for r in rows]
            ker = _nullspace(sub, k) if rows else [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
            if len(ker) != 1:
                continue
            v = ker[0]
            if all(x < 0 for x in v):
                v = [-x for x in v]
            if all(x > 0 for x in v):
                full = [Fraction(0)] * ncols
                for c, x in zip(supp, v):
                    full[c] = x
                out.add(_normalize(full))
    return out


# ---------------------------------------------------------------------------
# chains


def brute_longest_chain(table) -> int:
    """Longest increasing index subsequence with consecutive members intersecting."""
    r = len(table)
    best = 0
    for mask in range(1, 1 << r):
        idx = [i for i in range(r) if mask >> i & 1]
        if all(table[a][b] for a, b in zip(idx, idx[1:])):
            best = max(best, len(idx))
    return best
