# Where the sparkling connections of the reference family sit, and how fast
# they line up along two arithmetic progressions in sigma = ln(-ln eps).
from mpmath import nstr

from heartlab import EI, LE, LI, derive, scan
from heartlab.bifurcations import progression_fit
from heartlab.families import P0

inv = derive(P0)
print("gamma =", nstr(inv.gamma, 20), " beta =", nstr(inv.beta, 20), " A =", nstr(inv.A, 20))
print("c_E =", nstr(inv.c_E, 20), " c_I =", nstr(inv.c_I, 20), " s =", nstr(inv.s_model, 20))

# 30 LE/LI connections plus the EI connection inside every gap between them
ms = scan(P0, depth=30)
print("word:", ms.word())

# the first few events, with the distance of each EI from the right end of its interval
for e in list(ms)[:12]:
    extra = f"  offset {nstr(e.offset, 3)}" if e.mark == EI else ""
    print(f"{e.mark}  n={e.n}  k={e.k}  sigma={nstr(e.sigma, 25)}{extra}")

# steps between consecutive LE (resp. LI) parameters approach gamma (resp. beta)
for mark, step in ((LE, inv.gamma), (LI, inv.beta)):
    fit = progression_fit(ms.only(mark))
    print(f"{mark}: fitted step - exact step = {nstr(fit.common_difference - step, 3)}")
