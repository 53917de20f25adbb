"""Order types of connection sequences and the maps that realise them.

Two marked sequences accumulating at the same end are order equivalent (up
to finitely many exceptions) exactly when their letter words agree after
dropping finitely many leading letters.  With a finite horizon this can only
be tested up to a bounded number of drops and a minimal overlap, so the
verdict is three-valued.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from .arithmetic import DEFAULT_LATTICE_BOUND, equiv_mod_lattice
from .bifurcations import scan
from .errors import ConsistencyError, DomainError
from .events import EI, LE, LETTER, LI, MARKS, ConnectionEvent, MarkedSequence, precedes
from .kernel import context
from .model import as_family, derive

DEFAULT_MAX_DROP = 4
MIN_OVERLAP = 10

__all__ = [
    "MarkedSequence", "Word", "word_of", "Equivalent", "Distinct", "Inconclusive",
    "order_equivalent", "BaseHomeo", "build_base_homeo", "Lemma1Report",
    "lemma1_experiment", "Lemma3Report", "lemma3_extension", "x_counts",
    "rotation_word", "progression_word", "drop_counts",
]


@dataclass(frozen=True)
class Word:
    """Letters over ``{E, I, X}`` in sigma order; ``dropped`` leading letters already removed."""

    letters: str
    dropped: int = 0

    def __post_init__(self):
        bad = set(self.letters) - set(LETTER.values())
        if bad:
            raise DomainError(f"letters outside {{E, I, X}}: {sorted(bad)}")

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return self.letters

    def drop(self, d: int) -> "Word":
        return Word(self.letters[d:], self.dropped + d)


def word_of(ms, alphabet=MARKS) -> Word:
    """Letters of the events of ``ms`` whose mark lies in ``alphabet``."""
    alphabet = set(alphabet)
    unknown = alphabet - set(MARKS)
    if unknown:
        raise DomainError(f"unknown marks {sorted(unknown)}")
    return Word("".join(e.letter for e in ms if e.mark in alphabet))


@dataclass(frozen=True)
class Equivalent:
    d1: int
    d2: int
    overlap: int


@dataclass(frozen=True)
class Distinct:
    """Every tested alignment fails; ``index`` is the shortest prefix of the
    aligned remainders by which all of them have disagreed, and
    ``alignment`` the drops that survive longest."""

    index: int
    alignment: tuple
    letters: tuple = ()


@dataclass(frozen=True)
class Inconclusive:
    overlap: int
    alignment: tuple


def _first_mismatch(a: str, b: str):
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return i
    return None


def order_equivalent(w1, w2, max_drop: int = DEFAULT_MAX_DROP, min_overlap: int = MIN_OVERLAP):
    """Decide whether two words agree after dropping at most ``max_drop`` leading letters each.

    Among agreeing alignments ``(d1, d2)`` the one with the fewest total
    drops wins, then the longest overlap, then the smaller ``d1``.  An
    alignment only counts when its overlap reaches ``min_overlap`` letters;
    two identical words count as equivalent at any length.
    """
    a, b = str(w1), str(w2)
    if a == b and a:
        return Equivalent(0, 0, len(a))
    best = short = None
    latest = (-1, None, ())
    for d1 in range(max_drop + 1):
        for d2 in range(max_drop + 1):
            ra, rb = a[d1:], b[d2:]
            overlap = min(len(ra), len(rb))
            miss = _first_mismatch(ra, rb)
            if miss is None:
                key = (d1 + d2, -overlap, d1)
                if overlap >= min_overlap:
                    if best is None or key < best[0]:
                        best = (key, Equivalent(d1, d2, overlap))
                elif short is None or key < short[0]:
                    short = (key, Inconclusive(overlap, (d1, d2)))
            elif miss > latest[0]:
                latest = (miss, (d1, d2), (ra[miss], rb[miss]))
    if best is not None:
        return best[1]
    if short is not None:
        return short[1]
    miss, alignment, letters = latest
    return Distinct(miss, alignment, letters)


def drop_counts(word, d: int) -> dict:
    """How many of each letter the first ``d`` letters of ``word`` contain."""
    head = str(word)[:d]
    return {c: head.count(c) for c in "EIX"}


# -- base homeomorphism -------------------------------------------------------

@dataclass(frozen=True)
class BaseHomeo:
    """Piecewise affine increasing map through ``(sigma_j, sigma~_j)``.

    ``pairs`` holds the matched events.  Breakpoints are the pairs whose
    sigma values are separated from their neighbours on both sides; an EI
    event that rounds onto the end of its interval is still matched (it is
    recorded in ``pairs``) but does not become a breakpoint.  Beyond the ends
    the first and last segments are extended.
    """

    pairs: tuple
    drops: tuple = (0, 0)
    breakpoints: tuple = field(init=False)

    def __post_init__(self):
        pts = []
        for e1, e2 in self.pairs:
            if pts and (e1.sigma <= pts[-1][0] or e2.sigma <= pts[-1][1]):
                continue
            pts.append((e1.sigma, e2.sigma))
        object.__setattr__(self, "breakpoints", tuple(pts))

    def __call__(self, sigma):
        pts = self.breakpoints
        if not pts:
            raise DomainError("empty base homeomorphism")
        if len(pts) == 1:
            return sigma - pts[0][0] + pts[0][1]
        xs = [p[0] for p in pts]
        j = bisect.bisect_right(xs, sigma) - 1
        j = min(max(j, 0), len(pts) - 2)
        (x0, y0), (x1, y1) = pts[j], pts[j + 1]
        return y0 + (sigma - x0) * (y1 - y0) / (x1 - x0)

    def slopes(self) -> list:
        pts = self.breakpoints
        return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(pts, pts[1:])]

    def check(self) -> list:
        """Problems with the matching: mark changes or order reversals."""
        out = []
        for j, (e1, e2) in enumerate(self.pairs):
            if e1.mark != e2.mark:
                out.append(f"pair {j}: {e1.mark} matched to {e2.mark}")
        for j, ((a1, a2), (b1, b2)) in enumerate(zip(self.pairs, self.pairs[1:])):
            if not (precedes(a1, b1) and precedes(a2, b2)):
                out.append(f"pairs {j}, {j + 1} are not in increasing order")
        if any(s <= 0 for s in self.slopes()):
            out.append("non-increasing segment")
        return out


def _retained(ms, d: int) -> list:
    """Events after dropping ``d`` LE/LI events and the EI events before the next one."""
    events = list(ms)
    seen = 0
    for i, e in enumerate(events):
        if e.mark != EI:
            if seen == d:
                return events[i:]
            seen += 1
    return []


def build_base_homeo(ms1, ms2, drops) -> BaseHomeo:
    """Map the retained events of ``ms1`` onto those of ``ms2`` one by one.

    ``drops`` counts LE/LI events removed from the front of each sequence
    (the drops found on the ``{E, I}`` words).  EI events travel with the
    interval that contains them.
    """
    d1, d2 = drops
    r1, r2 = _retained(ms1, d1), _retained(ms2, d2)
    pairs = tuple(zip(r1, r2))
    for j, (e1, e2) in enumerate(pairs):
        if e1.mark != e2.mark:
            raise ConsistencyError(
                f"retained event {j} has mark {e1.mark} in the first sequence "
                f"and {e2.mark} in the second"
            )
    h = BaseHomeo(pairs, (d1, d2))
    problems = h.check()
    if problems:
        raise ConsistencyError("; ".join(problems))
    return h


# -- word models of exact progressions ----------------------------------------

def progression_word(e_start, e_step, i_start, i_step, depth: int) -> str:
    """Merge ``e_start + n*e_step`` and ``i_start + k*i_step`` (``n, k >= 1``) into a word of ``depth`` letters."""
    out = []
    n = k = 1
    while len(out) < depth:
        e, i = e_start + n * e_step, i_start + k * i_step
        if e < i:
            out.append("E")
            n += 1
        else:
            out.append("I")
            k += 1
    return "".join(out)


def rotation_word(A, depth: int) -> str:
    """Coding of the rotation by ``alpha = A/(1+A)`` started at 0.

    Letter ``j`` (1-based) is ``E`` when ``floor((j+1) alpha) - floor(j alpha) = 1``.
    This is the cutting sequence of a line of slope ``1/A``: the word of the
    two progressions ``n`` and ``k A`` merged.
    """
    ctx = context(256)
    A = ctx.mpf(A)
    alpha = A / (1 + A)
    return "".join(
        "E" if ctx.floor((j + 1) * alpha) - ctx.floor(j * alpha) == 1 else "I"
        for j in range(1, depth + 1)
    )


# -- experiments --------------------------------------------------------------

@dataclass(frozen=True)
class Lemma1Report:
    tau1: object
    tau2: object
    A1: object
    A2: object
    witness: object
    words: tuple
    verdict: object
    observed_shift: tuple | None
    max_drop: int
    bounds: tuple
    sequences: tuple = field(default=(), compare=False, repr=False)

    @property
    def predicted_shift(self):
        return None if self.witness is None else (self.witness.p, self.witness.q)

    @property
    def ok(self) -> bool:
        """A lattice witness forces equivalent words with the predicted shift."""
        if self.witness is None:
            return True
        return isinstance(self.verdict, Equivalent) and self.observed_shift == self.predicted_shift


def _net_shift(w1, w2, verdict):
    c1, c2 = drop_counts(w1, verdict.d1), drop_counts(w2, verdict.d2)
    return c2["E"] - c1["E"], c1["I"] - c2["I"]


def lemma1_experiment(params1, params2, depth: int = 30, *, max_drop: int = DEFAULT_MAX_DROP,
                      p_bound: int = DEFAULT_LATTICE_BOUND, q_bound: int = DEFAULT_LATTICE_BOUND,
                      tol=None, prec: int | None = None, sequences=None) -> Lemma1Report:
    """Compare the LE/LI words of two families against their ``tau`` lattice relation.

    When ``tau1 - tau2 + p + q A = 0`` for a bounded witness, the words must
    be equivalent with a net shift of ``p`` E letters (dropped from the
    second word) and ``q`` I letters (dropped from the first).
    """
    fam1, fam2 = as_family(params1, prec), as_family(params2, prec)
    inv1, inv2 = derive(fam1), derive(fam2)
    tol = 1e-9 * inv1.gamma if tol is None else tol
    witness = None
    if abs(inv1.A - inv2.A) <= tol:
        witness = equiv_mod_lattice(inv1.tau_model, inv2.tau_model, inv1.A, p_bound, q_bound, tol)
    if sequences is None:
        sequences = (scan(fam1, depth=depth), scan(fam2, depth=depth))
    w1, w2 = (word_of(ms, (LE, LI)) for ms in sequences)
    verdict = order_equivalent(w1, w2, max_drop)
    shift = _net_shift(w1, w2, verdict) if isinstance(verdict, Equivalent) else None
    return Lemma1Report(
        inv1.tau_model, inv2.tau_model, inv1.A, inv2.A, witness, (w1, w2),
        verdict, shift, max_drop, (p_bound, q_bound), tuple(sequences),
    )


def x_counts(ms) -> list:
    """Number of EI events between consecutive LE/LI events."""
    out, count, started = [], 0, False
    for e in ms:
        if e.mark == EI:
            count += 1
        else:
            if started:
                out.append(count)
            started, count = True, 0
    return out


@dataclass(frozen=True)
class Lemma3Report:
    words: tuple
    drops: tuple
    verdict: object
    bad_intervals: tuple  # (side, interval index, X count)

    @property
    def ok(self) -> bool:
        return isinstance(self.verdict, Equivalent) and not self.bad_intervals


def lemma3_extension(ms1, ms2, h, min_overlap: int = MIN_OVERLAP) -> Lemma3Report:
    """Check that the full LE/LI/EI words stay equivalent with the LE/LI drops of ``h``.

    ``h`` is a :class:`BaseHomeo` or a ``(d1, d2)`` pair.  Each interval
    between consecutive LE/LI events must carry exactly one EI; offending
    intervals are listed, and a mismatch is reported as :class:`Distinct`
    whose ``index`` counts the LE/LI letters before it, i.e. the interval.
    """
    d1, d2 = h.drops if isinstance(h, BaseHomeo) else h
    bad = []
    for side, ms in ((1, ms1), (2, ms2)):
        bad.extend((side, j, c) for j, c in enumerate(x_counts(ms)) if c != 1)
    r1 = "".join(e.letter for e in _retained(ms1, d1))
    r2 = "".join(e.letter for e in _retained(ms2, d2))
    miss = _first_mismatch(r1, r2)
    overlap = min(len(r1), len(r2))
    if miss is not None:
        interval = sum(1 for c in r1[:miss] if c != "X") - 1
        verdict = Distinct(interval, (d1, d2), (r1[miss], r2[miss]))
    elif overlap >= min_overlap:
        verdict = Equivalent(d1, d2, overlap)
    else:
        verdict = Inconclusive(overlap, (d1, d2))
    return Lemma3Report((word_of(ms1), word_of(ms2)), (d1, d2), verdict, tuple(bad))
