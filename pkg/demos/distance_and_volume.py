"""Walk through cut counts for a few braids on the 3- and 4-punctured disk.

    python3 demos/distance_and_volume.py
"""

from stripcut import (act, canonical_trace, conjugacy_minimize, distance_estimate, parse_braid,
                      relax, renormalized_count, round_curve, round_pants, volume_estimate)

# The round pants decomposition needs two cuts per curve, so it sits at count 2(n-2).
for n in (3, 4, 5):
    print(f"n={n}: round pants count {distance_estimate(parse_braid('', n)).count}")

# A single half twist moves the curve around punctures 2,3 but the count barely notices.
est = distance_estimate(parse_braid("s2", 3))
print(f"\ns2: {est.cuts} cuts, count {est.count}")

# sigma1 sigma2^-1 is pseudo-Anosov; each power adds about four cuts.
psi = parse_braid("s1 S2", 3)
vol = volume_estimate(psi, 8)
print("\npowers of s1 S2")
for r in vol.records:
    print(f"  m={r.m}: count {r.count:3d}  count/m {float(r.ratio):.3f}  cross points {r.size}")
print(f"  slope {vol.slope} over m in {list(vol.fit_range)}")

# sigma1 alone is reducible: it fixes the curve around punctures 1,2 and the counts stall.
vol = volume_estimate(parse_braid("s1", 3), 8)
print(f"\ns1: counts {[r.count for r in vol.records]}, slope {vol.slope}, stalled {vol.stalled}")

# Twisting a curve that the twist moves: once the strip starts spiralling, extra twists are absorbed.
c23 = round_curve(3, 2, 3)
for k in range(1, 7):
    tr = canonical_trace(act(parse_braid(f"s1^{2 * k}", 3), c23))
    full = sum(g.complete for g in tr.groups)
    print(f"s1^{2 * k} on the 2,3 curve: {len(tr.events)} cuts, count {renormalized_count(tr)}, "
          f"{full} complete spirallings")

# Conjugating can only lower the count; cyclic shifts are tried before the generator search.
res = conjugacy_minimize(parse_braid("s2 s1 s3 S2", 4), budget=20)
print(f"\nconjugacy search: {res.input_count} -> {res.count} via {res.conjugator.to_text() or '(none)'}")

# relax returns band-generator letters that undo the braid on the pants decomposition.
p = act(parse_braid("s2 S1 s3 d1.3", 4), round_pants(4))
w = relax(p)
print(f"relax word {' '.join(w.tokens())}; image round: {act(w, p).is_round()}")
