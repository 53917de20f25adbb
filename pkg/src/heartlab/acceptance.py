"""The acceptance criteria as runnable checks.

Each ``check_*`` function runs one criterion at its stated tolerance and
returns an :class:`Outcome`; :func:`run` runs a selection and is what
``heartlab selftest`` and ``tests/test_acceptance.py`` call.  Criteria that
carry a runtime limit fail when the limit is exceeded.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass

from .arithmetic import diophantine_check, measure_experiment
from .bifurcations import (
    check_monotone_d, eps_derivatives, gap_intervals, locate_LE, locate_LI,
    progression_fit, scan,
)
from .events import EI, LE, LI
from .families import P0, P1, P2, P0mu, Pq
from .kernel import DEFAULT_PRECISION, context
from .lmf import (
    CONNECTION_REGIME, REGIMES, Distinct, Regime, WeaklyEquivalent, classify_pair,
    dumps, isotopic, relabel, surgery, template, validate,
)
from .model import as_family, derive, evaluate
from .orderings import Equivalent, build_base_homeo, lemma1_experiment, lemma3_extension, word_of
from .orderings import Distinct as WordDistinct


@dataclass(frozen=True)
class Outcome:
    criterion: int
    title: str
    passed: bool
    detail: str
    seconds: float
    limit: float | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        limit = f" (limit {self.limit:g} s)" if self.limit else ""
        return f"AC-{self.criterion} {status} {self.title}: {self.detail} [{self.seconds:.1f} s{limit}]"


def _timed(criterion, title, limit, body):
    t0 = time.perf_counter()
    passed, detail = body()
    seconds = time.perf_counter() - t0
    if limit is not None and seconds > limit:
        passed = False
        detail += f"; runtime {seconds:.1f} s exceeds {limit:g} s"
    return Outcome(criterion, title, bool(passed), detail, seconds, limit)


# -- 1: invariants ------------------------------------------------------------

def check_invariants() -> Outcome:
    def body():
        inv = derive(P0)
        ctx = context(DEFAULT_PRECISION)
        ln2, ln3 = ctx.ln2, ctx.ln(3)
        errs = {
            "A": abs(inv.A - ln2 / ln3),
            "s_model": abs(inv.s_model - 2 * ln2),
            "tau_model": abs(inv.tau_model - 2 * ln2 / ln3),
        }
        worst = max(errs.values())
        return worst <= 1e-12, "max error " + ", ".join(f"{k} {float(v):.1e}" for k, v in errs.items())

    return _timed(1, "invariants of P0", 1.0, body)


# -- 2: perturbed progressions ------------------------------------------------

def check_progressions() -> Outcome:
    def body():
        fam = as_family(P0)
        ctx = fam.ctx
        gamma, beta = ctx.ln(3), ctx.ln2
        le = [locate_LE(n, fam) for n in range(15, 27)]
        li = [locate_LI(k, fam) for k in range(15, 27)]
        de = max(abs(b.sigma - a.sigma - gamma) for a, b in zip(le, le[1:]))
        di = max(abs(b.sigma - a.sigma - beta) for a, b in zip(li, li[1:]))
        fe, fi = progression_fit(le), progression_fit(li)
        ce = abs(fe.intercept + beta)
        ci = abs(fi.intercept - beta)
        ok = de <= 1e-8 and di <= 1e-8 and ce <= 1e-7 and ci <= 1e-7
        detail = (f"max |diff - ln3| {float(de):.2e}, max |diff - ln2| {float(di):.2e} (tol 1e-8); "
                  f"intercept errors {float(ce):.2e}, {float(ci):.2e} (tol 1e-7)")
        return ok, detail

    return _timed(2, "perturbed progressions of P0", 30.0, body)


# -- 3: one EI per gap interval -----------------------------------------------

def grid_signs(n, k, sigmas, params, prec, snap_prec=None):
    """Signs of ``d_{n,k}`` on a sigma grid by direct iteration of the maps.

    Independent of the log-chart machinery: ``eps`` and the iterates are
    plain extended-precision numbers, iterated as ``x -> x**nu/C2 - eps``
    and ``y -> (y/C1)**(1/lam) - eps``, and ``d = P_x + P_y - eps`` is formed
    from the last unperturbed images so that no cancellation against ``eps``
    hides a doubly exponentially small sign at the interval ends.  Any
    iterate within ``eps * 2**(-snap_prec/2)`` of 0 counts as 0 (the gap
    end); ``snap_prec`` is the precision the grid's sigma values are known to
    and defaults to ``prec``.  ``None`` marks a grid point where an
    intermediate iterate already left the winding side.
    """
    ctx = context(prec)
    lam, mu = (evaluate(params.lam, prec), evaluate(params.mu, prec))
    B1, B2, C1, C2 = (evaluate(getattr(params, f), prec) for f in ("B1", "B2", "C1", "C2"))
    nu = lam * lam * mu
    inv = 1 / lam
    cut = ctx.mpf(2) ** (-((snap_prec or prec) // 2))
    out = []
    for sigma in sigmas:
        eps = ctx.exp(-ctx.exp(sigma))
        images = []
        for start, turns, step in ((B2, n, lambda v: v ** nu / C2), (B1, k, lambda v: (v / C1) ** inv)):
            v, image = start, None
            for _ in range(turns):
                if v < 0:
                    image = None
                    break
                image = step(v)
                v = image - eps
                if abs(v) <= eps * cut:
                    v, image = ctx.zero, eps
            images.append(image)
        if None in images:
            out.append(None)
            continue
        # d = eps + (P_x - eps) + (P_y - eps); a snapped end has P = eps and drops out
        px, py = images
        if px == eps and py == eps:
            out.append(ctx.one)
        elif px == eps:
            out.append(ctx.sign(py))
        elif py == eps:
            out.append(ctx.sign(px))
        else:
            out.append(ctx.sign(px + py - eps))
    return out


def sign_changes(signs) -> list:
    """``(i, j)`` grid index pairs bracketing each change between non-zero signs."""
    out, last = [], None
    for j, s in enumerate(signs):
        if not s:
            continue
        if last is not None and signs[last] != s:
            out.append((last, j))
        last = j
    return out


def check_one_ei_per_interval(intervals: int = 30, points: int = 1000) -> Outcome:
    def body():
        fam = as_family(P0)
        ctx = fam.ctx
        ms = scan(fam, depth=intervals + 1)
        eis = ms.only(EI)
        gaps = gap_intervals(ms)
        bad = []
        for (lo, hi, n, k), ev in zip(gaps, eis):
            grid = [lo + (hi - lo) * j / (points - 1) for j in range(points)]
            signs = grid_signs(n, k, grid, P0, 2 * fam.prec, fam.prec)
            changes = sign_changes(signs)
            if None in signs or len(changes) != 1:
                why = "winding counts change inside" if None in signs else f"{len(changes)} sign changes"
                bad.append(f"({n},{k}): {why}")
                continue
            a, b = changes[0]
            # the root is hi - offset; compare distances to hi, which stay resolved
            if not (hi - grid[b] <= ev.offset <= hi - grid[a]) or (ev.n, ev.k) != (n, k):
                bad.append(f"({n},{k}): EI root outside the oracle bracket")
        ok = len(gaps) == intervals and len(eis) == intervals and not bad
        detail = f"{len(gaps)} intervals, {len(bad)} violations" + (": " + "; ".join(bad[:3]) if bad else "")
        return ok, detail

    return _timed(3, "exactly one EI per gap interval", None, body)


# -- 4: monotonicity estimates ------------------------------------------------

def validity_interval(n, k, e, i):
    """Sigma range where the separatrices wind exactly ``(n, k)`` times."""
    lo = max(e[n - 1], i[k - 1])
    hi = min(e[n], i[k])
    return (lo, hi) if hi > lo else None


def check_monotonicity(lo_index: int = 3, hi_index: int = 12, samples: int = 10) -> Outcome:
    def body():
        fam = as_family(P0)
        fine = as_family(P0, fam.prec + 64)
        e = {n: locate_LE(n, fam).sigma for n in range(lo_index - 1, hi_index + 1)}
        i = {k: locate_LI(k, fam).sigma for k in range(lo_index - 1, hi_index + 1)}
        tested, violations, disagreements, worst = 0, [], 0, 0.0
        for n, k in itertools.product(range(lo_index, hi_index + 1), repeat=2):
            dom = validity_interval(n, k, e, i)
            if dom is None:
                continue
            lo, hi = dom
            pts = [lo + (hi - lo) * (j + 0.5) / samples for j in range(samples)]
            report = check_monotone_d(n, k, pts, fam)
            tested += 1
            if not report.ok:
                violations.append((n, k))
            for s in report.samples:
                a = eps_derivatives(n, k, s.sigma, fam)
                b = eps_derivatives(n, k, fine.ctx.mpf(s.sigma), fine)
                for u, v in zip(a, b):
                    rel = float(abs(u - v) / abs(v))
                    worst = max(worst, rel)
                    disagreements += rel > 1e-6
        ok = tested > 0 and not violations and not disagreements
        detail = (f"{tested} (n,k) validity intervals x {samples} samples, "
                  f"{len(violations)} bound violations, worst two-precision relative gap {worst:.1e}")
        return ok, detail

    return _timed(4, "monotonicity of d and the iterates", None, body)


# -- 5 and 6: word-level lattice shifts ----------------------------------------

def check_lattice_shifts(depth: int = 30) -> Outcome:
    def body():
        parts, ok = [], True
        for fam, expected in ((P1, (1, 0)), (Pq, (0, 1))):
            rep = lemma1_experiment(P0, fam, depth)
            good = rep.ok and rep.observed_shift == expected and isinstance(rep.verdict, Equivalent)
            ok &= good
            parts.append(f"{fam.name}: {type(rep.verdict).__name__} positional drops "
                         f"{(getattr(rep.verdict, 'd1', None), getattr(rep.verdict, 'd2', None))}, "
                         f"net shift {rep.observed_shift} (expected {expected})")
        return ok, "; ".join(parts)

    return _timed(5, "lattice shifts give equivalent words", None, body)


def check_distinct_families(depth: int = 30) -> Outcome:
    def body():
        rep = lemma1_experiment(P0, P2, depth)
        words_distinct = isinstance(rep.verdict, WordDistinct)
        verdict_mu = classify_pair(P0, P0mu, depth)
        mu_ok = isinstance(verdict_mu, Distinct) and verdict_mu.reason == "A"
        detail = (f"P2 words within {depth} events: {rep.verdict}; "
                  f"P0mu: {type(verdict_mu).__name__} ({getattr(verdict_mu, 'reason', '')})")
        return words_distinct and mu_ok, detail

    return _timed(6, "non-lattice shift and A change are distinct", None, body)


# -- 7: EI letters ------------------------------------------------------------

def check_ei_extension(depth: int = 30) -> Outcome:
    def body():
        rep = lemma1_experiment(P0, P1, depth)
        ms1, ms2 = rep.sequences
        h = build_base_homeo(ms1, ms2, (rep.verdict.d1, rep.verdict.d2))
        ext = lemma3_extension(ms1, ms2, h)
        same = isinstance(ext.verdict, Equivalent) and (ext.verdict.d1, ext.verdict.d2) == h.drops
        detail = f"{ext.verdict}, drops {h.drops}, intervals without exactly one EI: {len(ext.bad_intervals)}"
        return same and not ext.bad_intervals, detail

    return _timed(7, "EI letters keep the word equivalence", None, body)


# -- 8: Diophantine condition -------------------------------------------------

def check_diophantine(Ns=(10, 20, 40)) -> Outcome:
    def body():
        triple = ("(sqrt(5) - 1)/2", "1", "0")
        short, long = diophantine_check(triple, 100), diophantine_check(triple, 500)
        v1 = [(v.m, v.n) for v in short.violations]
        v2 = [(v.m, v.n) for v in long.violations]
        reports = [measure_experiment(1, 0, 1, N) for N in Ns]
        ratios = [a.measure / b.measure for a, b in zip(reports, reports[1:])]
        ok = v1 == v2 and all(r >= 1.8 for r in ratios) and all(r.within_bound for r in reports)
        detail = (f"violations {v1} at n_max 100 and {v2} at 500; measures "
                  + ", ".join(f"N={r.N}: {r.measure:.4f} <= {r.bound:.3f}" for r in reports)
                  + "; decay ratios " + ", ".join(f"{x:.2f}" for x in ratios))
        return ok, detail

    return _timed(8, "Diophantine stabilisation and measure decay", 60.0, body)


# -- 9: LMF suite -------------------------------------------------------------

def check_lmf(copies: int = 20) -> Outcome:
    def body():
        graphs = {r: template(r) for r in REGIMES}
        invalid = [r.value for r, g in graphs.items() if validate(g)]
        pairs = list(itertools.combinations(REGIMES, 2))
        clashes = [(a.value, b.value) for a, b in pairs if isotopic(graphs[a], graphs[b]) is not None]
        generic = graphs[Regime.PosEpsGeneric]
        bad_surgery = [c for c, r in CONNECTION_REGIME.items()
                       if isotopic(surgery(generic, c), graphs[r]) is None]
        rng = random.Random(2024)
        shuffled = [relabel(graphs[REGIMES[j % len(REGIMES)]], rng) for j in range(copies)]
        bad_shuffle = sum(isotopic(graphs[REGIMES[j % len(REGIMES)]], g) is None
                          for j, g in enumerate(shuffled))
        ok = not invalid and not clashes and not bad_surgery and not bad_shuffle
        detail = (f"invalid {invalid}, isotopic pairs {clashes} of {len(pairs)}, "
                  f"surgery mismatches {bad_surgery}, relabel failures {bad_shuffle}/{copies}")
        return ok, detail

    return _timed(9, "LMF templates, surgery and relabelling", 10.0, body)


# -- 10: end to end -------------------------------------------------------------

def _fingerprint(verdict) -> str:
    """Text form of a verdict that is compared byte for byte across runs."""
    parts = [type(verdict).__name__]
    if isinstance(verdict, WeaklyEquivalent):
        parts.append(repr(verdict.drops))
        parts += [repr(p) for p in verdict.h.pairs]
        parts += [f"{k}:{sorted(v.edge_map.items())}" for k, v in sorted(verdict.certificates.items())]
    else:
        parts += [verdict.reason, repr(verdict.witness)]
    return "\n".join(parts)


def _sequence_gap(v1, v2) -> float:
    """Largest sigma movement between two runs of the same classification."""
    if v1.lemma1 is None or v2.lemma1 is None:
        return 0.0
    worst = 0.0
    for a, b in zip(v1.lemma1.sequences, v2.lemma1.sequences):
        if len(a) != len(b):
            return float("inf")
        for x, y in zip(a, b):
            if x.mark != y.mark:
                return float("inf")
            worst = max(worst, float(abs(x.sigma - y.sigma)))
    return worst


def check_end_to_end(depth: int = 30) -> Outcome:
    def body():
        base = DEFAULT_PRECISION
        v1 = classify_pair(P0, P1, depth, prec=base)
        v1b = classify_pair(P0, P1, depth, prec=base)
        v2 = classify_pair(P0, P2, depth, prec=base)
        up1 = classify_pair(P0, P1, depth, prec=base + 64)
        up2 = classify_pair(P0, P2, depth, prec=base + 64)
        certified = isinstance(v1, WeaklyEquivalent) and len(v1.certificates) == len(REGIMES)
        distinct = isinstance(v2, Distinct)
        same_bytes = _fingerprint(v1) == _fingerprint(v1b)
        same_verdicts = (type(up1) is type(v1)) and (type(up2) is type(v2))
        moves = max(_sequence_gap(v1, up1), _sequence_gap(v2, up2))
        ok = certified and distinct and same_bytes and same_verdicts and moves <= 2.0 ** -100
        detail = (f"(P0,P1) {type(v1).__name__} shift {getattr(v1, 'shift', None)}; "
                  f"(P0,P2) {type(v2).__name__} ({getattr(v2, 'reason', '')}); "
                  f"repeat identical {same_bytes}; +64 bits same verdicts {same_verdicts}, "
                  f"max sigma move {moves:.1e}")
        return ok, detail

    return _timed(10, "end-to-end classification", None, body)


CHECKS = {
    1: check_invariants,
    2: check_progressions,
    3: check_one_ei_per_interval,
    4: check_monotonicity,
    5: check_lattice_shifts,
    6: check_distinct_families,
    7: check_ei_extension,
    8: check_diophantine,
    9: check_lmf,
    10: check_end_to_end,
}


def run(criteria=None, report=None) -> list:
    """Run the selected criteria (all by default); ``report`` gets each outcome as it finishes."""
    out = []
    for c in criteria or sorted(CHECKS):
        outcome = CHECKS[c]()
        out.append(outcome)
        if report is not None:
            report(outcome)
    return out
