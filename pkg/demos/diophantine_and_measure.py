# The Diophantine inclusion |gamma (nA - m) - s| > 1/(m^2 + n^2): violations
# for a few families, and the shrinking measure of the exceptional s-set.
from heartlab import diophantine_check, measure_experiment
from heartlab.arithmetic import continued_fraction
from heartlab.families import P0

for source in (P0, ("(sqrt(5) - 1)/2", "1", "0"), ("1/2", "1", "0")):
    rep = diophantine_check(source, 200)
    print(source if isinstance(source, tuple) else source.name,
          [(v.m, v.n) for v in rep.violations][:6], type(rep.verdict).__name__)

print("convergents of ln2/ln3:", continued_fraction("ln(2)/ln(3)", 8))

# measure of s in [-T, T] hit by an n in (N, 10N]; it halves as N doubles
for N in (10, 20, 40, 80):
    r = measure_experiment(1.0, 0.0, 1.0, N, sample_count=20000, seed=1)
    print(f"N={N:3d}  measure {r.measure:.4f}  bound {r.bound:.3f}  "
          f"hit fraction {r.hit_fraction:.4f} +- {r.mc_sigma:.4f} (exact {r.expected_fraction:.4f})")
