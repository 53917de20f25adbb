"""Sparkling saddle connections of the standard family.

LE connections (the exterior separatrix hits the stable separatrix of L after
``n`` turns) and LI connections (the interior separatrix, ``k`` turns in
reversed time) form perturbed arithmetic progressions in the sigma chart with
differences ``gamma = ln nu`` and ``beta = -ln lam``.  Between consecutive
LE/LI parameters both separatrices land in the gap, and an EI connection is a
zero of their signed distance ``d_{n,k}``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import BracketError, ConsistencyError, DepthError, DomainError, ResonanceError
from .events import EI, LE, LI, ConnectionEvent, MarkedSequence
from .kernel import bisect_monotone, required_precision
from .model import F, G, as_family, derive, formal_iterate, landing, ln_eps, pre_landing, zero_cut

_MAX_EXPANSIONS = 64


def depth_budget(prec: int, rate) -> int:
    """Largest turn count whose orbit is resolved at ``prec`` bits."""
    n = 1
    while required_precision(n + 1, rate) <= prec:
        n += 1
    return n


def _connection_root(which: str, turns: int, fam):
    """Increasing function of sigma vanishing at the ``turns``-turn connection."""

    def g(sigma):
        lneps = ln_eps(sigma, fam.ctx)
        pre = pre_landing(which, turns, lneps, fam)
        if pre is None:
            return fam.ctx.ninf
        return pre - lneps

    return g


def full_tol(fam, sigma_scale=1):
    """Bisection tolerance that resolves sigma down to a few ulps."""
    return fam.ctx.mpf(2) ** (8 - fam.prec) * max(1, abs(sigma_scale))


def _locate(which, turns, params, tol, prec):
    fam = as_family(params, prec)
    if int(turns) != turns or turns < 1:
        raise DomainError(f"turn count must be a positive integer, got {turns!r}")
    if tol is not None and not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    rate = fam.gamma if which == F else fam.beta
    if turns > depth_budget(fam.prec, rate):
        raise DepthError(
            f"{turns} turns exceed the budget of {fam.prec}-bit precision "
            f"(needs {required_precision(turns, rate)} bits)"
        )
    inv = derive(fam)
    intercept = inv.c_E if which == F else inv.c_I
    ctx = fam.ctx
    g = _connection_root(which, turns, fam)
    guess = turns * rate + intercept
    lo, hi = guess - rate * ctx.mpf("0.45"), guess + rate * ctx.mpf("0.45")
    # coarse outward pre-scan when the asymptotic bracket misses
    for _ in range(_MAX_EXPANSIONS):
        if g(lo) < 0:
            break
        lo -= rate
    for _ in range(_MAX_EXPANSIONS):
        if g(hi) > 0:
            break
        hi += rate
    if tol is None:
        tol = full_tol(fam, hi)
    return bisect_monotone(g, lo, hi, tol)


def locate_LE(n: int, params, tol=None, prec: int | None = None) -> ConnectionEvent:
    """Parameter of the LE connection after ``n`` turns of the exterior separatrix.

    By default sigma is resolved to a few ulps: at a connection the
    connecting separatrix must sit on the gap endpoint to about
    ``rho * 2**(-prec/2)``, which a coarser tolerance would not achieve.
    """
    return ConnectionEvent(_locate(F, n, params, tol, prec), LE, n=int(n))


def locate_LI(k: int, params, tol=None, prec: int | None = None) -> ConnectionEvent:
    """Parameter of the LI connection after ``k`` turns of the interior separatrix."""
    return ConnectionEvent(_locate(G, k, params, tol, prec), LI, k=int(k))


def _d_over_rho(n, k, lneps, fam):
    ctx = fam.ctx
    x = formal_iterate(F, n, lneps, fam)
    y = formal_iterate(G, k, lneps, fam)
    total = ctx.one
    for pt in (x, y):
        if pt.sign:
            total += pt.sign * ctx.exp(pt.ln - lneps)
    return total


def d(n: int, k: int, sigma, params):
    """Signed distance ``y(G^k B1) - y(F^n B2)`` of the two gap entry points.

    Both points are written in the ``y`` chart, so the value equals
    ``y(G^k B1) + x(F^n B2) + rho``; it vanishes exactly at EI connections.
    """
    fam = as_family(params)
    lneps = ln_eps(sigma, fam.ctx)
    return _d_over_rho(n, k, lneps, fam) * fam.ctx.exp(lneps)


def d_over_rho(n: int, k: int, sigma, params):
    """``d_{n,k} / rho``: same sign as ``d`` and of order one inside the gap."""
    fam = as_family(params)
    return _d_over_rho(n, k, ln_eps(sigma, fam.ctx), fam)


def winding_counts(sigma, params) -> tuple:
    """Turns ``(n, k)`` both separatrices make before reaching the gap."""
    fam = as_family(params)
    lneps = ln_eps(sigma, fam.ctx)
    return landing(F, lneps, fam).turns, landing(G, lneps, fam).turns


def _ei_offset(hi, n, k, fam):
    """Sigma distance from an EI root to the right end ``hi`` of its interval.

    At the root ``eps = P_E + P_I`` where ``P_E, P_I`` are the images of the
    last positive iterates before ``eps`` is subtracted.  At the right end one
    of them (the anchor) equals ``eps``, the other is doubly exponentially
    smaller, so ``ln eps`` moves by ``log1p(P_other / P_anchor)``.
    """
    ctx = fam.ctx
    lneps = ln_eps(hi, ctx)
    pe, pi = pre_landing(F, n, lneps, fam), pre_landing(G, k, lneps, fam)
    if pe is None or pi is None:
        raise ConsistencyError(f"(n, k)=({n}, {k}) orbits land early at the interval end")
    anchor, other = (pe, pi) if pe >= pi else (pi, pe)
    if anchor - lneps < zero_cut(fam):
        raise ConsistencyError("interval end is not a connection of the expected orbit")
    delta = ctx.log1p(ctx.exp(other - anchor))
    return -ctx.log1p(-delta * ctx.exp(-hi))


def locate_EI(interval, n: int, k: int, params, tol=None, prec: int | None = None) -> ConnectionEvent:
    """The EI connection inside an open interval between consecutive LE/LI events.

    ``d_{n,k}`` keeps the winding counts ``(n, k)`` of the interior up to and
    including both endpoints, where the formal iterates put one separatrix
    exactly on a gap end; there ``d <= 0`` on the left and ``d >= 0`` on the
    right.  The root lies doubly exponentially close to the right end for all
    but the first few intervals; its distance to that end is returned in
    ``offset`` even when ``sigma`` itself rounds onto the endpoint.

    A missing sign change is raised as :class:`BracketError` and never
    swallowed.
    """
    fam = as_family(params, prec)
    ctx = fam.ctx
    lo, hi = (ctx.mpf(v) for v in interval)
    if not hi > lo:
        raise DomainError(f"empty interval [{lo}, {hi}]")
    tol = full_tol(fam, hi) if tol is None else ctx.mpf(tol)
    counts = winding_counts((lo + hi) / 2, fam)
    if counts != (n, k):
        raise DomainError(f"winding counts inside the interval are {counts}, not {(n, k)}")

    def f(sigma):
        return _d_over_rho(n, k, ln_eps(sigma, ctx), fam)

    try:
        root, info = bisect_monotone(f, lo, hi, tol, full_output=True)
    except BracketError as exc:
        raise BracketError(
            f"no E-I crossing for (n, k)=({n}, {k}) on ({lo}, {hi}): {exc}",
            exc.lo, exc.hi, exc.f_lo, exc.f_hi,
        ) from exc
    if hi - root > ctx.mpf(2) ** (-(fam.prec // 2)) * max(1, abs(hi)):
        offset = hi - root
    else:
        offset = _ei_offset(hi, n, k, fam)
        root = hi - offset
    return ConnectionEvent(root, EI, n=int(n), k=int(k), offset=offset)


def _tie_tolerance(prec):
    return 2 ** (-(prec // 4))


def scan(
    params,
    depth: int | None = None,
    sigma_max=None,
    *,
    tol=None,
    prec: int | None = None,
    with_ei: bool = True,
) -> MarkedSequence:
    """All LE and LI connections up to a horizon, with the EI connection of every gap interval.

    ``depth`` caps the number of LE/LI events (taken in sigma order from the
    start); ``sigma_max`` caps their sigma.  At least one is required.
    Two LE/LI events closer than ``2**(-prec/4)`` raise :class:`ResonanceError`.
    """
    if depth is None and sigma_max is None:
        raise DomainError("scan needs a depth or a sigma horizon")
    fam = as_family(params, prec)
    ctx = fam.ctx
    if sigma_max is not None:
        sigma_max = ctx.mpf(sigma_max)
    events = []
    next_e, next_i = locate_LE(1, fam, tol), locate_LI(1, fam, tol)
    while depth is None or len(events) < depth:
        ev = next_e if next_e.sigma <= next_i.sigma else next_i
        if sigma_max is not None and ev.sigma > sigma_max:
            break
        events.append(ev)
        if ev is next_e:
            next_e = locate_LE(ev.n + 1, fam, tol)
        else:
            next_i = locate_LI(ev.k + 1, fam, tol)
    tie = _tie_tolerance(fam.prec)
    for a, b in zip(events, events[1:]):
        if abs(b.sigma - a.sigma) <= tie:
            raise ResonanceError(
                f"{a.mark}(n={a.n}, k={a.k}) and {b.mark}(n={b.n}, k={b.k}) coincide "
                f"within 2^-{fam.prec // 4} at sigma={ctx.nstr(a.sigma, 20)}",
                a, b,
            )
    merged = list(events)
    if with_ei:
        n_seen = k_seen = 0
        merged = []
        for a, b in zip(events, events[1:]):
            merged.append(a)
            n_seen += a.mark == LE
            k_seen += a.mark == LI
            merged.append(locate_EI((a.sigma, b.sigma), n_seen + 1, k_seen + 1, fam, tol))
        if events:
            merged.append(events[-1])
    horizon = sigma_max if sigma_max is not None else (events[-1].sigma if events else None)
    return MarkedSequence(
        tuple(merged), horizon=horizon, prec=fam.prec,
        meta={"family": fam.params.name, "tol": tol},
    )


def gap_intervals(ms: MarkedSequence) -> list:
    """``(lo, hi, n, k)`` for every interval between consecutive LE/LI events."""
    out = []
    n_seen = k_seen = 0
    ends = ms.only(LE, LI)
    for a, b in zip(ends, ends[1:]):
        n_seen += a.mark == LE
        k_seen += a.mark == LI
        out.append((a.sigma, b.sigma, n_seen + 1, k_seen + 1))
    return out


@dataclass(frozen=True)
class ProgressionFit:
    common_difference: object
    intercept: object
    residuals: tuple
    fitted_from: tuple


def progression_fit(events) -> ProgressionFit:
    """Fit ``sigma_j ~ j * diff + intercept`` from the last two events.

    Indices are the turn counts (``n`` for LE, ``k`` for LI).  Residuals are
    reported for every event so their decay can be inspected.
    """
    events = list(events)
    if len(events) < 4:
        raise DomainError(f"progression_fit needs at least 4 events, got {len(events)}")
    marks = {e.mark for e in events}
    if len(marks) != 1 or EI in marks:
        raise DomainError("progression_fit needs events of a single LE or LI mark")
    idx = [e.n if e.mark == LE else e.k for e in events]
    (j1, s1), (j2, s2) = (idx[-2], events[-2].sigma), (idx[-1], events[-1].sigma)
    diff = (s2 - s1) / (j2 - j1)
    intercept = s2 - j2 * diff
    residuals = tuple(e.sigma - (j * diff + intercept) for j, e in zip(idx, events))
    return ProgressionFit(diff, intercept, residuals, (idx[0], idx[-1]))


@dataclass(frozen=True)
class DerivativeSample:
    sigma: object
    in_domain: bool
    dd_deps: object = None
    dF_deps: object = None
    dG_deps: object = None

    @property
    def ok(self) -> bool:
        return (
            self.in_domain
            and self.dd_deps < -0.5
            and self.dF_deps < -0.75
            and self.dG_deps < -0.75
        )


@dataclass(frozen=True)
class MonotonicityReport:
    n: int
    k: int
    samples: tuple

    @property
    def out_of_domain(self) -> list:
        return [s for s in self.samples if not s.in_domain]

    @property
    def violations(self) -> list:
        return [s for s in self.samples if s.in_domain and not s.ok]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.out_of_domain


def eps_derivatives(n: int, k: int, sigma, params, h=None) -> tuple:
    """Central differences in ``eps`` of ``F^n(B2)``, ``G^k(B1)`` and ``d_{n,k}``.

    ``eps`` is perturbed multiplicatively, ``eps * (1 +- h)``, and every value
    is scaled by the unperturbed ``eps``, so the derivatives come out O(1)
    even though ``eps`` itself is astronomically small.
    """
    fam = as_family(params)
    ctx = fam.ctx
    h = ctx.mpf(2) ** (-(fam.prec // 4)) if h is None else ctx.mpf(h)
    lneps = ln_eps(sigma, ctx)

    def scaled(which, turns, shift):
        pt = formal_iterate(which, turns, lneps + shift, fam)
        return 0 if pt.sign == 0 else pt.sign * ctx.exp(pt.ln - lneps)

    up, down = ctx.log1p(h), ctx.log1p(-h)
    dF = (scaled(F, n, up) - scaled(F, n, down)) / (2 * h)
    dG = (scaled(G, k, up) - scaled(G, k, down)) / (2 * h)
    # rho = eps in the model, so d rho / d eps = 1
    return dF, dG, dF + dG + 1


def check_monotone_d(n: int, k: int, sigma_samples, params) -> MonotonicityReport:
    """Check ``d' < -rho'/2`` and ``dF^n/deps, dG^k/deps < -3/4 rho'`` at samples.

    Samples whose winding counts differ from ``(n, k)`` are flagged
    out-of-domain and not differentiated.
    """
    fam = as_family(params)
    out = []
    for s in sigma_samples:
        s = fam.ctx.mpf(s)
        if winding_counts(s, fam) != (n, k):
            out.append(DerivativeSample(s, False))
            continue
        dF, dG, dd = eps_derivatives(n, k, s, fam)
        out.append(DerivativeSample(s, True, dd, dF, dG))
    return MonotonicityReport(n, k, tuple(out))
