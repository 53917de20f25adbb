import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heartlab.arithmetic import (
    NoViolationsBeyond, RationalityWarning, ViolationsFound, case1_bound, continued_fraction,
    diophantine_check, equiv_mod_lattice, measure_experiment, rational_witness, revalidate,
    tail_bound, union_measure,
)
from heartlab.errors import DomainError
from heartlab.families import P0, P1, P2, Pq
from heartlab.kernel import context
from heartlab.model import derive

CTX = context()
A0 = CTX.ln2 / CTX.ln(3)
GOLDEN = "(sqrt(5) - 1)/2"


def test_lattice_identity():
    w = equiv_mod_lattice(CTX.mpf("0.3"), CTX.mpf("0.3"), A0)
    assert (w.p, w.q, w.residual) == (0, 0, 0)


def test_lattice_constructed_shift():
    tau1 = CTX.mpf("0.123")
    w = equiv_mod_lattice(tau1, tau1 + 1 + 2 * A0, A0)
    assert (w.p, w.q) == (1, 2)
    assert w.residual < 1e-70


def test_lattice_rejects_non_lattice_shift():
    tau1 = CTX.mpf("0.123")
    assert equiv_mod_lattice(tau1, tau1 + CTX.mpf("0.37"), A0, 3, 3, 1e-9) is None
    # brute force over the 49 lattice points agrees
    best = min(abs(-CTX.mpf("0.37") + p + q * A0) for p, q in itertools.product(range(-3, 4), repeat=2))
    assert best > 1e-9


def test_lattice_bounds_must_be_positive():
    with pytest.raises(DomainError):
        equiv_mod_lattice(0, 0, A0, 0, 3)


def test_lattice_warns_on_rational_A():
    with pytest.warns(RationalityWarning):
        equiv_mod_lattice(0, 0, CTX.mpf(1) / 2)


@settings(max_examples=50, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5), st.floats(-3, 3))
def test_lattice_symmetry(p, q, t):
    tau1 = CTX.mpf(t)
    tau2 = tau1 + p + q * A0
    w12 = equiv_mod_lattice(tau1, tau2, A0)
    w21 = equiv_mod_lattice(tau2, tau1, A0)
    assert (w12.p, w12.q) == (p, q)
    assert (w21.p, w21.q) == (-p, -q)


def test_family_shifts_on_the_lattice():
    t0 = derive(P0).tau_model
    for fam, pq in ((P1, (-1, 0)), (Pq, (0, -1))):
        w = equiv_mod_lattice(t0, derive(fam).tau_model, A0)
        assert (w.p, w.q) == (-pq[0], -pq[1]) or (w.p, w.q) == pq
    assert equiv_mod_lattice(t0, derive(P2).tau_model, A0, tol=1e-9 * float(CTX.ln(3))) is None


def test_continued_fraction_golden_ratio():
    cf = continued_fraction(GOLDEN, 7)
    assert cf == [(0, 1), (1, 1), (1, 2), (2, 3), (3, 5), (5, 8), (8, 13)]


def test_continued_fraction_terminates_for_one_half():
    assert continued_fraction(CTX.mpf(1) / 2, 20)[-1] == (1, 2)


def test_continued_fraction_of_A_at_two_precisions():
    hi = context(512)
    a256 = continued_fraction(A0, 25)
    a512 = continued_fraction(hi.ln2 / hi.ln(3), 25)
    assert a256 == a512
    for p, q in a256:
        assert abs(A0 - CTX.mpf(p) / q) < CTX.mpf(1) / q ** 2
    with pytest.raises(DomainError):
        continued_fraction(-1)


def test_rational_witness():
    assert rational_witness(CTX.mpf(3) / 7) == (3, 7)
    assert rational_witness(A0) is None


@pytest.mark.parametrize("gamma, s, J", [(1, 0, 2), (2, 3, 3)])
def test_case1_bound(gamma, s, J):
    assert case1_bound(0.5, gamma, s) == J


def test_case1_bound_needs_gamma():
    with pytest.raises(DomainError):
        case1_bound(0.5, 0, 1)


def brute_force_violations(A, gamma, s, n_max, prec=160):
    """Pure mpmath oracle over the doubled box ``|m| <= 2 ceil((|A|+J) n)``."""
    ctx = context(prec)
    A, gamma, s = ctx.mpf(A), ctx.mpf(gamma), ctx.mpf(s)
    J = 1 + (abs(s) + 1) / abs(gamma)
    out = []
    for n in range(1, n_max + 1):
        M = 2 * int(ctx.ceil((abs(A) + J) * n))
        for m in range(-M, M + 1):
            if abs(gamma * (n * A - m) - s) <= ctx.mpf(1) / (m * m + n * n):
                out.append((m, n))
    return out


def test_golden_ratio_violations_stabilise():
    short, long = diophantine_check((GOLDEN, "1", "0"), 100), diophantine_check((GOLDEN, "1", "0"), 500)
    assert [(v.m, v.n) for v in short.violations] == [(0, 1), (1, 1)]
    assert [(v.m, v.n) for v in long.violations] == [(0, 1), (1, 1)]
    assert short.verdict == NoViolationsBeyond(1)
    hi = context(512)
    assert brute_force_violations((hi.sqrt(5) - 1) / 2, 1, 0, 60) == [(0, 1), (1, 1)]


@pytest.mark.parametrize("triple", [("0.7071", "1.3", "0.4"), ("ln(2)/ln(3)", "ln(3)", "2*ln(2)")])
def test_sweep_matches_brute_force(triple):
    rep = diophantine_check(triple, 40)
    vals = [float(x) for x in (rep.invariants["A"], rep.invariants["gamma"], rep.invariants["s"])]
    want = brute_force_violations(rep.invariants["A"], rep.invariants["gamma"], rep.invariants["s"], 40)
    assert [(v.m, v.n) for v in rep.violations] == want
    assert vals[1] > 0


def test_doubled_box_finds_nothing_new():
    a = diophantine_check(("0.5", "1", "7"), 60)
    b = diophantine_check(("0.5", "1", "7"), 60, bound_factor=2)
    assert a.violations == b.violations


def test_rational_A_with_matching_shift_violates_forever():
    rep = diophantine_check(("1/2", "1", "0"), 50)
    assert isinstance(rep.verdict, ViolationsFound)
    assert all(v.offset == 0 for v in rep.violations if v.n % 2 == 0)


def test_violations_revalidate_and_accumulate():
    small = diophantine_check(P0, 50)
    big = diophantine_check(P0, 100)
    assert revalidate(small, 512) == []
    assert set((v.m, v.n) for v in small.violations) <= set((v.m, v.n) for v in big.violations)


def test_diophantine_guards():
    with pytest.raises(DomainError):
        diophantine_check(("0.5", "0", "1"), 10)
    with pytest.raises(DomainError):
        diophantine_check(("0.5", "1", "1"), 0)


def test_union_measure_by_hand():
    lo = np.array([0.0, 0.5, 2.0, -5.0])
    hi = np.array([1.0, 1.5, 3.0, -4.5])
    assert union_measure(lo, hi, 2.5) == pytest.approx(1.5 + 0.5)
    assert union_measure(np.array([]), np.array([]), 1.0) == 0.0


def test_measure_decay_and_bound():
    reps = [measure_experiment(1, 0, 1, N) for N in (10, 20, 40)]
    assert [round(r.measure, 4) for r in reps] == [0.2010, 0.1026, 0.0521]
    for a, b in zip(reps, reps[1:]):
        assert a.measure / b.measure >= 1.8
    assert all(r.within_bound for r in reps)
    assert reps[0].bound == pytest.approx(12 * 2 * (math.pi ** 2 / 6 - sum(1 / n ** 2 for n in range(1, 11))))
    assert reps[0].bound == pytest.approx(2.28, abs=0.01)


def test_measure_empty_range():
    rep = measure_experiment(1, 0, 1, 10, N_cap=10)
    assert rep.measure == 0 and rep.hits == 0


def test_measure_guards():
    with pytest.raises(DomainError):
        measure_experiment(1, 0, 0, 10)
    with pytest.raises(DomainError):
        measure_experiment(1, 0, 1, 0)


@pytest.mark.parametrize("gamma, s, T, N", [(1, 0, 1, 10), (1.3, 0.4, 2, 8), (0.7, -1, 1, 15)])
def test_monte_carlo_agrees_with_sweep(gamma, s, T, N):
    rep = measure_experiment(gamma, s, T, N, sample_count=20000, seed=7)
    assert abs(rep.hit_fraction - rep.expected_fraction) <= 3 * rep.mc_sigma
    assert rep.measure <= tail_bound(gamma, s, T, N)


def test_measure_is_seeded():
    a = measure_experiment(1, 0, 1, 10, seed=3)
    b = measure_experiment(1, 0, 1, 10, seed=3)
    assert a == b
