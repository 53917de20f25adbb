# The five regime graphs, the surgery that creates a connection regime from
# the generic one, and the isotopy test that tells them apart.
import itertools
import random

from heartlab import Regime, dumps, isotopic, surgery, template, validate
from heartlab.lmf import mirror, relabel, sparkling_sc_count

for r in Regime:
    g = template(r)
    print(f"{r.value:14s} {len(g.vertices):2d} vertices {len(g.edges):2d} edges  "
          f"sparkling SC {sparkling_sc_count(g)}  valid {not validate(g)}")

print("isotopic template pairs:",
      [(a.value, b.value) for a, b in itertools.combinations(Regime, 2)
       if isotopic(template(a), template(b))])
print("any template equal to its mirror:", any(isotopic(template(r), mirror(template(r))) for r in Regime))

# surgery works on any relabelled copy of the generic graph
g = relabel(template(Regime.PosEpsGeneric), random.Random(3))
for tag in ("LE", "LI", "EI"):
    print(tag, "surgery matches its template:", isotopic(surgery(g, tag), template(f"PosEps{tag}")) is not None)

print(dumps(template(Regime.PosEpsEI)))
