# Two families whose tau differ by a lattice vector p + qA produce the same
# LE/LI word once a few leading letters are dropped; a shift off the lattice
# eventually breaks the agreement.
from heartlab import classify_pair, lemma1_experiment
from heartlab.families import P0, P1, P2, Pq

for other in (P1, Pq):
    rep = lemma1_experiment(P0, other, 30)
    print(f"P0 vs {other.name}: witness (p, q) = {rep.predicted_shift}, "
          f"word verdict {rep.verdict}, net shift {rep.observed_shift}")

# P2 sits just 0.032 from a lattice point, so short words still agree
rep = lemma1_experiment(P0, P2, 30)
print("P0 vs P2 at depth 30:", rep.verdict)
rep = lemma1_experiment(P0, P2, 80)
print("P0 vs P2 at depth 80:", rep.verdict)

# the full classification: invariants first, then words, base map and templates
v = classify_pair(P0, P1)
print(type(v).__name__, "drops", v.drops, "shift", v.shift)
print("first breakpoints of h:", [(float(a), float(b)) for a, b in v.h.breakpoints[:3]])
