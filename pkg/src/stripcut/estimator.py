"""Coarse estimators built on the canonical cutting sequence.

``distance_estimate`` counts cuts for a single braid image of the round
pants decomposition, ``volume_estimate`` tracks that count along powers and
fits a slope, ``conjugacy_minimize`` searches a conjugacy class, and
``relax`` produces a band-generator word that makes a pants decomposition
round.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .braids import BraidWord, Letter
from .curves import ChordMulticurve, act, round_pants
from .strips import CutTrace, canonical_trace, renormalized_count

__all__ = [
    "BudgetExceeded",
    "RelaxError",
    "DistanceEstimate",
    "PowerRecord",
    "VolumeEstimate",
    "ConjugacyResult",
    "distance_estimate",
    "volume_estimate",
    "conjugacy_minimize",
    "relax",
    "relax_bound",
    "rounding_word",
    "least_squares",
]

DEFAULT_MAX_POINTS = 200_000


class BudgetExceeded(RuntimeError):
    """A power's image outgrew the cross-point budget; ``partial`` holds what finished."""

    def __init__(self, message: str, partial: "VolumeEstimate"):
        super().__init__(message)
        self.partial = partial


class RelaxError(RuntimeError):
    """Relaxation failed to reach a round decomposition. Always a bug."""


@dataclass(frozen=True)
class DistanceEstimate:
    braid: BraidWord
    pants: ChordMulticurve
    count: int
    trace: CutTrace = field(repr=False)

    @property
    def cuts(self) -> int:
        return len(self.trace.events)

    @property
    def spiralling_groups(self) -> int:
        return len(self.trace.groups)

    @property
    def complete_spirallings(self) -> int:
        return sum(g.complete for g in self.trace.groups)

    def to_json(self) -> dict:
        return {
            "braid": self.braid.to_text(),
            "n": self.braid.n,
            "count": self.count,
            "cuts": self.cuts,
            "spiralling_groups": self.spiralling_groups,
            "complete_spirallings": self.complete_spirallings,
            "pants_size": self.pants.size,
        }


def distance_estimate(psi: BraidWord) -> DistanceEstimate:
    p = act(psi, round_pants(psi.n))
    tr = canonical_trace(p)
    return DistanceEstimate(psi, p, renormalized_count(tr), tr)


@dataclass(frozen=True)
class PowerRecord:
    m: int
    count: int
    size: int  # cross points of the image, a cost indicator

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.count, self.m)


def least_squares(points: Iterable[tuple[int, int]]) -> tuple[Fraction, Fraction, Fraction]:
    """Exact line fit; returns (slope, intercept, residual sum of squares)."""
    pts = [(Fraction(x), Fraction(y)) for x, y in points]
    k = len(pts)
    if k < 2:
        raise ValueError("need two points for a slope")
    sx = sum(x for x, _ in pts)
    sy = sum(y for _, y in pts)
    sxx = sum(x * x for x, _ in pts)
    sxy = sum(x * y for x, y in pts)
    den = k * sxx - sx * sx
    if den == 0:
        raise ValueError("abscissae coincide")
    slope = (k * sxy - sx * sy) / den
    icpt = (sy - slope * sx) / k
    rss = sum((y - slope * x - icpt) ** 2 for x, y in pts)
    return slope, icpt, rss


@dataclass(frozen=True)
class VolumeEstimate:
    braid: BraidWord
    m_max: int
    records: tuple[PowerRecord, ...]
    slope: Fraction | None
    intercept: Fraction | None
    residual: Fraction | None
    conjugacy: "ConjugacyResult | None" = None

    @property
    def fit_range(self) -> range:
        return range(math.ceil(self.m_max / 2), self.m_max + 1)

    @property
    def stalled(self) -> bool:
        """Counts stopped growing over the fit range (reducible or periodic input)."""
        tail = [r.count for r in self.records if r.m in self.fit_range]
        return len(tail) >= 2 and len(set(tail)) == 1

    def ratio_spread(self, lo: int, hi: int) -> Fraction:
        """max/min of count/m over ``lo..hi``."""
        rs = [r.ratio for r in self.records if lo <= r.m <= hi]
        return max(rs) / min(rs)

    def to_json(self) -> dict:
        out = {
            "braid": self.braid.to_text(),
            "n": self.braid.n,
            "m_max": self.m_max,
            "per_power": [{"m": r.m, "count": r.count, "size": r.size} for r in self.records],
            "slope": None if self.slope is None else str(self.slope),
            "residual": None if self.residual is None else str(self.residual),
            "stalled": self.stalled,
        }
        if self.conjugacy is not None:
            out["min_conjugate"] = self.conjugacy.to_json()
        return out


def volume_estimate(psi: BraidWord, m_max: int, max_points: int = DEFAULT_MAX_POINTS,
                    conjugacy_budget: int | None = None) -> VolumeEstimate:
    """Counts of act(psi^m, round pants) for m = 1..m_max and their slope.

    Each power is recomputed from the previous image by one more application
    of ``psi``.  The slope is a least-squares fit over the upper half of the
    range.  No check is made that ``psi`` is pseudo-Anosov.
    """
    if m_max < 2:
        raise ValueError("m_max must be at least 2")
    conj = conjugacy_minimize(psi, conjugacy_budget) if conjugacy_budget is not None else None
    p = round_pants(psi.n)
    records: list[PowerRecord] = []
    for m in range(1, m_max + 1):
        p = act(psi, p)
        if p.size > max_points:
            partial = _volume_from(psi, m_max, records, conj)
            raise BudgetExceeded(f"power {m} has {p.size} cross points, budget {max_points}", partial)
        records.append(PowerRecord(m, renormalized_count(canonical_trace(p)), p.size))
    return _volume_from(psi, m_max, records, conj)


def _volume_from(psi, m_max, records, conj) -> VolumeEstimate:
    lo = math.ceil(m_max / 2)
    pts = [(r.m, r.count) for r in records if r.m >= lo]
    if len(pts) >= 2:
        slope, icpt, rss = least_squares(pts)
    else:
        slope = icpt = rss = None
    return VolumeEstimate(psi, m_max, tuple(records), slope, icpt, rss, conj)


@dataclass(frozen=True)
class ConjugacyResult:
    braid: BraidWord  # the conjugate c * psi * c^-1
    conjugator: BraidWord
    count: int
    input_count: int
    evaluated: int
    exhausted: bool  # the budget ran out before the search frontier did

    def to_json(self) -> dict:
        return {
            "braid": self.braid.to_text(),
            "conjugator": self.conjugator.to_text(),
            "count": self.count,
            "input_count": self.input_count,
            "evaluated": self.evaluated,
            "exhausted": self.exhausted,
        }


def conjugacy_minimize(psi: BraidWord, budget: int = 0) -> ConjugacyResult:
    """Smallest count over cyclic shifts, then over conjugates by up to ``budget`` generators.

    Conjugates are memoized on the image of the round pants decomposition,
    which determines the count.
    """
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    n = psi.n
    r = round_pants(n)
    seen: dict[ChordMulticurve, int] = {}

    def count_of(word: BraidWord) -> int:
        p = act(word, r)
        if p not in seen:
            seen[p] = renormalized_count(canonical_trace(p))
        return seen[p]

    base = count_of(psi)
    best = (base, psi, BraidWord(n))
    k = len(psi.letters)
    for s in range(1, k):
        # letters[s:] + letters[:s] = c psi c^-1 with c = (letters[:s])^-1
        c = BraidWord(n, psi.letters[:s]).inverse()
        rot = BraidWord(n, psi.letters[s:] + psi.letters[:s])
        cnt = count_of(rot)
        if cnt < best[0]:
            best = (cnt, rot, c)
    gens = [Letter.sigma(i, e) for i in range(1, n) for e in (1, -1)]
    frontier = deque([BraidWord(n)] if budget else [])
    visited = {act(psi, r)}
    evaluated = 0
    exhausted = False
    while frontier and not exhausted:
        c = frontier.popleft()
        for g in gens:
            if evaluated >= budget:
                exhausted = True
                break
            c2 = BraidWord(n, (g,) + c.letters).merged()
            conj = (c2 * psi * c2.inverse()).merged()
            p = act(conj, r)
            if p in visited:
                continue
            visited.add(p)
            evaluated += 1
            cnt = count_of(conj)
            if cnt < best[0]:
                best = (cnt, conj, c2)
            frontier.append(c2)
    return ConjugacyResult(best[1], best[2], best[0], base, evaluated, exhausted)


# ---------------------------------------------------------------------------
# relaxation


def _letter(i: int, j: int, e: int) -> Letter:
    return Letter.sigma(i, e) if j == i + 1 else Letter.band(i, j, e)


def _best_power(p: ChordMulticurve, i: int, j: int, sign: int):
    """Power of Delta_ij^sign minimizing the size of the image, first minimum."""
    cur = p
    best = None
    for e in range(1, 2 * p.size + 3):
        cur = act(_letter(i, j, sign), cur)
        if best is None or cur.size < best[0]:
            best = (cur.size, e, cur)
        elif cur.size > best[0]:
            break
    return best


def _greedy_round(p: ChordMulticurve) -> tuple[list[Letter], ChordMulticurve]:
    """Letters in application order whose product makes ``p`` round."""
    n = p.n
    applied: list[Letter] = []
    while not p.is_round():
        best = None
        for i in range(1, n):
            for j in range(i + 1, n + 1):
                for sign in (1, -1):
                    size, e, q = _best_power(p, i, j, sign)
                    key = (size, e, i, j, -sign)
                    if best is None or key < best[0]:
                        best = (key, _letter(i, j, sign * e), q)
        (size, *_), let, q = best
        if size >= p.size:
            raise RelaxError(f"no band generator power shrinks a diagram with {p.size} cross points")
        applied.append(let)
        p = q
    return applied, p


def relax(p: ChordMulticurve) -> BraidWord:
    """A band-generator word whose action makes the pants decomposition ``p`` round.

    Greedy: each step applies the power of a band generator that most
    reduces the number of cross points.  The result is verified.
    """
    if not p.is_pants():
        raise ValueError("relax needs a pants decomposition")
    applied, q = _greedy_round(p)
    word = BraidWord(p.n, tuple(reversed(applied))).merged()
    image = act(word, p)
    if not (image == q and image.is_round() and image.is_pants()):
        raise RelaxError("relaxation word does not round the decomposition")
    return word


def relax_bound(p: ChordMulticurve) -> int:
    """Letter budget for ``relax(p)``: three per renormalized cut plus 2n+1."""
    return 3 * renormalized_count(canonical_trace(p)) + 2 * p.n + 1


def rounding_word(curve: ChordMulticurve) -> tuple[BraidWord, tuple[int, int]]:
    """``(w, (i, j))`` with act(w, curve) the round curve around punctures i..j."""
    if len(curve.components) != 1 or not curve.is_multicurve():
        raise ValueError("rounding_word needs a single essential curve")
    applied, q = _greedy_round(curve)
    inside = sorted(q.enclosed(q.components[0]))
    return BraidWord(curve.n, tuple(reversed(applied))).merged(), (inside[0], inside[-1])
