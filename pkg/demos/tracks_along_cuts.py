"""Follow the train tracks of each cutting stage for one braid.

    python3 demos/tracks_along_cuts.py [braid] [n]
"""

import sys

from stripcut import act, canonical_trace, parse_braid, round_pants
from stripcut import traintrack as T

text = sys.argv[1] if len(sys.argv) > 1 else "s2 S1 s3"
n = int(sys.argv[2]) if len(sys.argv) > 2 else 4
p = act(parse_braid(text, n), round_pants(n))
trace = canonical_trace(p)
print(f"{text} on {n} punctures: {len(trace.events)} cuts\n")

stage0 = T.from_strips(trace.initial).track
print("stage 0 track:")
print(T.to_text(stage0))
print("vertex cycles:", [v.measure for v in T.vertex_cycles(stage0)])

# Each cut either leaves the track alone up to combing or splits it once.
for step in T.cuts_to_splitting_sequence(trace):
    t = step.after.track
    flags = ", ".join(k for k, v in step.checks.items() if not v) or "all checks pass"
    print(f"cut {step.index}: {step.kind:13s} {step.tag:22s} "
          f"{len(t.branches):2d} branches, {len(T.vertex_cycles(t, require_recurrent=False))} vertex cycles ({flags})")

# The last stage is n-2 disjoint circles, one per pants curve.
print("\nfinal track:")
print(T.to_text(T.from_strips(trace.final).track))
