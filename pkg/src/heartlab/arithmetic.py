"""Diophantine bookkeeping for the invariants ``A`` and ``tau``.

``tau`` is compared modulo the subgroup ``Z + A Z`` of the reals.  That
subgroup is dense for irrational ``A``, so the comparison is only meaningful
with bounded lattice coefficients; every routine here takes the bounds
explicitly and reports them back.

A family is Diophantine when the inclusion

    A - m/n in [(s - 1/(m^2+n^2)) / (gamma n), (s + 1/(m^2+n^2)) / (gamma n)]

holds for finitely many integer pairs only.  Equivalently
``|gamma (n A - m) - s| <= 1/(m^2 + n^2)``, which is the form used below.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, DomainError
from .kernel import DEFAULT_PRECISION, context, ctx_of
from .model import Family, FamilyParams, as_family, derive, evaluate

DEFAULT_LATTICE_BOUND = 50
RATIONAL_DENOMINATOR_CAP = 10**6


class RationalityWarning(UserWarning):
    """``A`` is indistinguishable from a rational with a small denominator."""


# -- lattice predicate --------------------------------------------------------

@dataclass(frozen=True)
class LatticeWitness:
    """``tau1 - tau2 + p + q*A`` vanishes up to ``residual``."""

    p: int
    q: int
    residual: object


def equiv_mod_lattice(tau1, tau2, A, p_bound=DEFAULT_LATTICE_BOUND,
                      q_bound=DEFAULT_LATTICE_BOUND, tol=1e-9):
    """Witness ``(p, q)`` with ``|p| <= p_bound``, ``|q| <= q_bound`` of ``tau1 = tau2 mod (1, A)``.

    Returns the witness of least residual when that residual is at most
    ``tol``, otherwise ``None``.  For each ``q`` the best ``p`` is the
    rounded (and clipped) value, so the scan is exhaustive over the box.
    """
    if int(p_bound) != p_bound or int(q_bound) != q_bound or p_bound < 1 or q_bound < 1:
        raise DomainError(f"lattice bounds must be positive integers, got {p_bound}, {q_bound}")
    ctx = ctx_of(tau1) if not isinstance(tau1, (int, float)) else ctx_of(A)
    tau1, tau2, A = ctx.mpf(tau1), ctx.mpf(tau2), ctx.mpf(A)
    if rational_witness(A) is not None:
        warnings.warn(f"A = {ctx.nstr(A, 15)} looks rational; the lattice is discrete", RationalityWarning, stacklevel=2)
    base = tau1 - tau2
    best = None
    for q in range(-int(q_bound), int(q_bound) + 1):
        shifted = base + q * A
        p = int(ctx.nint(-shifted))
        p = max(-int(p_bound), min(int(p_bound), p))
        res = abs(shifted + p)
        key = (res, abs(p) + abs(q))
        if best is None or key < best[0]:
            best = (key, p, q)
    (res, _), p, q = best
    if res <= tol:
        return LatticeWitness(p, q, res)
    return None


# -- continued fractions ------------------------------------------------------

def continued_fraction(A, count: int = 20) -> list:
    """The first ``count`` convergents ``(p, q)`` of ``A``.

    The expansion stops early once a convergent reproduces ``A`` to the
    working precision, so exact binary rationals terminate.
    """
    ctx = ctx_of(A) if not isinstance(A, (int, float, str)) else context(DEFAULT_PRECISION)
    A = evaluate(A, ctx.prec) if isinstance(A, str) else ctx.mpf(A)
    if not A > 0:
        raise DomainError(f"continued_fraction needs A > 0, got {A}")
    if count < 1:
        return []
    limit = ctx.mpf(2) ** (16 - ctx.prec) * max(1, A)
    out = []
    p0, q0, p1, q1 = 0, 1, 1, 0
    x = A
    while len(out) < count:
        a = int(ctx.floor(x))
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
        frac = x - a
        if frac == 0 or abs(A - ctx.mpf(p1) / q1) <= limit:
            break
        x = 1 / frac
    return out


def rational_witness(A, cap: int = RATIONAL_DENOMINATOR_CAP):
    """A convergent ``(p, q)`` with ``q <= cap`` and ``|A - p/q| < 2**(-prec/2)``, or ``None``."""
    ctx = ctx_of(A)
    A = ctx.mpf(A)
    if not A > 0:
        return None
    thresh = ctx.mpf(2) ** (-(ctx.prec // 2))
    for p, q in continued_fraction(A, 64):
        if q > cap:
            break
        if abs(A - ctx.mpf(p) / q) < thresh:
            return p, q
    return None


# -- Definition-3 scan --------------------------------------------------------

def case1_bound(A, gamma, s):
    """``J = 1 + (|s| + 1)/|gamma|``; for ``|m| > (|A| + J) n`` the inclusion has no solution."""
    if gamma == 0:
        raise DomainError("gamma must be non-zero")
    ctx = ctx_of(gamma) if not isinstance(gamma, (int, float)) else ctx_of(s)
    return 1 + (abs(ctx.mpf(s)) + 1) / abs(ctx.mpf(gamma))


@dataclass(frozen=True)
class Violation:
    m: int
    n: int
    offset: object  # gamma*(n*A - m) - s

    def __iter__(self):
        return iter((self.m, self.n, self.offset))


@dataclass(frozen=True)
class NoViolationsBeyond:
    index: int


@dataclass(frozen=True)
class ViolationsFound:
    last: int


@dataclass(frozen=True)
class DiophantineReport:
    n_max: int
    violations: tuple
    verdict: object
    bound_factor: int = 1
    invariants: dict = field(default_factory=dict, compare=False)


def _triple(source, prec):
    """``(A, gamma, s)`` at ``prec`` bits from a family or an explicit triple."""
    if isinstance(source, (FamilyParams, Family)):
        params = source.params if isinstance(source, Family) else source
        inv = derive(params, prec)
        return inv.A, inv.gamma, inv.s_model
    ctx = context(prec)
    vals = []
    for v in source:
        vals.append(evaluate(v, prec) if isinstance(v, str) else ctx.mpf(v))
    if len(vals) != 3:
        raise DomainError("expected a family or an (A, gamma, s) triple")
    return tuple(vals)


def _inclusion_holds(m, n, A, gamma, s):
    return abs(gamma * (n * A - m) - s) <= 1 / gamma.context.mpf(m * m + n * n)


def diophantine_check(source, n_max: int, *, prec: int = DEFAULT_PRECISION,
                      bound_factor: int = 1) -> DiophantineReport:
    """All integer pairs ``(m, n)``, ``1 <= n <= n_max``, satisfying the Diophantine inclusion.

    ``m`` ranges over ``|m| <= bound_factor * ceil((|A| + J) n)``.  A double
    precision sweep proposes candidates with a generous margin; each is then
    decided at ``prec`` bits and confirmed at ``2 * prec``.  ``source`` is a
    family (using ``s_model``) or a triple ``(A, gamma, s)``; strings in the
    triple are parsed at each precision.
    """
    if int(n_max) != n_max or n_max < 1:
        raise DomainError(f"n_max must be a positive integer, got {n_max!r}")
    A, gamma, s = _triple(source, prec)
    if gamma == 0:
        raise DomainError("gamma must be non-zero")
    A2, gamma2, s2 = _triple(source, 2 * prec) if not _is_mp_triple(source) else (
        context(2 * prec).mpf(A), context(2 * prec).mpf(gamma), context(2 * prec).mpf(s))
    J = case1_bound(A, gamma, s)
    slope = float(abs(A) + J)
    fa, fg, fs = float(A), float(gamma), float(s)
    found = []
    chunk = 256
    for n0 in range(1, int(n_max) + 1, chunk):
        ns = np.arange(n0, min(n0 + chunk, int(n_max) + 1), dtype=np.int64)
        M = bound_factor * np.ceil(slope * ns).astype(np.int64)
        width = int(M.max())
        ms = np.arange(-width, width + 1, dtype=np.int64)
        nn, mm = np.meshgrid(ns, ms, indexing="ij")
        inside = np.abs(mm) <= M[:, None]
        r = np.abs(fg * (nn * fa - mm) - fs)
        rhs = 1.0 / (mm.astype(float) ** 2 + nn.astype(float) ** 2)
        margin = 1e-9 * (1.0 + np.abs(nn * fa) * abs(fg) + abs(fs))
        cand = inside & (r <= rhs + margin)
        for i, j in zip(*np.nonzero(cand)):
            m, n = int(mm[i, j]), int(nn[i, j])
            if not _inclusion_holds(m, n, A, gamma, s):
                continue
            if not _inclusion_holds(m, n, A2, gamma2, s2):
                raise ConsistencyError(f"violation (m, n)=({m}, {n}) does not survive doubled precision")
            found.append(Violation(m, n, gamma * (n * A - m) - s))
    found.sort(key=lambda v: (v.n, v.m))
    last = found[-1].n if found else 0
    verdict = NoViolationsBeyond(last) if 2 * last <= n_max else ViolationsFound(last)
    return DiophantineReport(
        int(n_max), tuple(found), verdict, bound_factor,
        {"A": A, "gamma": gamma, "s": s, "J": J},
    )


def _is_mp_triple(source):
    if isinstance(source, (FamilyParams, Family)):
        return False
    return not any(isinstance(v, str) for v in source)


def revalidate(report: DiophantineReport, prec: int) -> list:
    """Violations of ``report`` that fail the inclusion at ``prec`` bits (should be empty)."""
    ctx = context(prec)
    A, gamma, s = (ctx.mpf(report.invariants[k]) for k in ("A", "gamma", "s"))
    return [v for v in report.violations if not _inclusion_holds(v.m, v.n, A, gamma, s)]


# -- measure of the exceptional set -------------------------------------------

@dataclass(frozen=True)
class MeasureReport:
    gamma: float
    s: float
    T: float
    N: int
    N_cap: int
    J: float
    interval_count: int
    measure: float
    bound: float
    sample_count: int
    hits: int
    seed: int | None

    @property
    def within_bound(self) -> bool:
        return self.measure <= self.bound

    @property
    def hit_fraction(self) -> float:
        return self.hits / self.sample_count if self.sample_count else float("nan")

    @property
    def expected_fraction(self) -> float:
        return self.measure / (2 * self.T)

    @property
    def mc_sigma(self) -> float:
        p = self.expected_fraction
        return math.sqrt(max(p * (1 - p), 0.0) / self.sample_count) if self.sample_count else float("nan")


def _segments(gamma, s, T, N, N_cap, J):
    ns, ms = [], []
    for n in range(N + 1, N_cap + 1):
        M = math.floor((T + J) * n)
        m = np.arange(-M, M + 1, dtype=np.int64)
        ms.append(m)
        ns.append(np.full(m.shape, n, dtype=np.int64))
    if not ns:
        return np.empty(0), np.empty(0)
    n = np.concatenate(ns).astype(float)
    m = np.concatenate(ms).astype(float)
    centre = (m + s / gamma) / n
    half = 1.0 / (abs(gamma) * n * (m * m + n * n))
    return centre - half, centre + half


def union_measure(lo: np.ndarray, hi: np.ndarray, T: float) -> float:
    """Lebesgue measure of ``[-T, T]`` intersected with the union of ``[lo_i, hi_i]``."""
    lo, hi = np.clip(lo, -T, T), np.clip(hi, -T, T)
    keep = hi > lo
    lo, hi = lo[keep], hi[keep]
    if lo.size == 0:
        return 0.0
    order = np.argsort(lo, kind="stable")
    lo, hi = lo[order], hi[order]
    reach = np.maximum.accumulate(hi)
    # a new block starts where the left end passes everything seen so far
    starts = np.concatenate(([True], lo[1:] > reach[:-1]))
    idx = np.flatnonzero(starts)
    block_hi = np.maximum.reduceat(hi, idx)
    return float(np.sum(block_hi - lo[idx]))


def _mc_hits(samples, gamma, s, T, N, N_cap):
    hits = np.zeros(samples.shape, dtype=bool)
    shift = s / gamma
    for n in range(N + 1, N_cap + 1):
        m0 = np.rint(n * samples - shift)
        for dm in (-1.0, 0.0, 1.0):
            m = m0 + dm
            centre = (m + shift) / n
            half = 1.0 / (abs(gamma) * n * (m * m + n * n))
            hits |= np.abs(samples - centre) <= half
    return int(hits.sum())


def tail_bound(gamma, s, T, N) -> float:
    """``4 (T + J)/|gamma| * sum_{|n| > N} n^-2``."""
    J = float(case1_bound(1, gamma, s))
    tail = 2 * float(context(64).zeta(2, N + 1))
    return 4 * (T + J) / abs(float(gamma)) * tail


def measure_experiment(gamma, s, T, N: int, sample_count: int = 20_000,
                       seed: int | None = 0, N_cap: int | None = None) -> MeasureReport:
    """Measure of the parameters ``A in [-T, T]`` caught by some ``N < n <= N_cap`` segment.

    Segments are centred at ``m/n + s/(gamma n)`` with length
    ``2/(gamma n (m^2 + n^2))``.  The union is measured exactly by a sweep;
    independently, ``sample_count`` uniform samples of ``A`` are tested
    against their nearest segments.  ``N_cap`` defaults to ``10 N``.
    """
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N}")
    gamma, s, T = float(gamma), float(s), float(T)
    if gamma == 0:
        raise DomainError("gamma must be non-zero")
    N_cap = 10 * N if N_cap is None else int(N_cap)
    J = float(case1_bound(1, gamma, s))
    lo, hi = _segments(gamma, s, T, N, N_cap, J)
    measure = union_measure(lo, hi, T)
    hits = 0
    if sample_count:
        rng = np.random.default_rng(seed)
        samples = rng.uniform(-T, T, size=int(sample_count))
        hits = _mc_hits(samples, gamma, s, T, N, N_cap)
    return MeasureReport(
        gamma, s, T, int(N), N_cap, J, int(lo.size), measure,
        tail_bound(gamma, s, T, N), int(sample_count), hits, seed,
    )
