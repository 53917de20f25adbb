import pytest

from heartlab.acceptance import validity_interval
from heartlab.bifurcations import (
    check_monotone_d, d, d_over_rho, depth_budget, gap_intervals, locate_EI, locate_LE,
    locate_LI, progression_fit, scan, winding_counts,
)
from heartlab.errors import DepthError, DomainError, ResonanceError
from heartlab.events import EI, LE, LI, ConnectionEvent
from heartlab.families import P0
from heartlab.kernel import context
from heartlab.model import as_family

FAM = as_family(P0)
CTX = FAM.ctx
LN2, LN3 = CTX.ln2, CTX.ln(3)
ULPS = CTX.mpf(2) ** -240


def e_closed(n):
    """LE parameter of P0 when the eps of earlier turns is negligible: ln((3^n - 1)/2)."""
    return CTX.ln((CTX.mpf(3) ** n - 1) / 2)


def i_closed(k):
    """LI parameter of P0 likewise: ln(2^(k+1) - 2)."""
    return CTX.ln(CTX.mpf(2) ** (k + 1) - 2)


@pytest.mark.parametrize("n", range(6, 21))
def test_le_matches_closed_form(n):
    s = locate_LE(n, FAM).sigma
    assert abs(s - e_closed(n)) <= ULPS * s


@pytest.mark.parametrize("k", range(8, 26))
def test_li_matches_closed_form(k):
    s = locate_LI(k, FAM).sigma
    assert abs(s - i_closed(k)) <= ULPS * s


@pytest.mark.parametrize("n, k, gap", [(2, 2, 0.0329), (3, 3, 3.27e-5), (4, 4, 1.41e-13)])
def test_early_turns_feel_the_earlier_eps(n, k, gap):
    # the closed form ignores eps at intermediate turns; frozen deviations
    assert float(abs(locate_LE(n, FAM).sigma - e_closed(n))) == pytest.approx(gap, rel=0.01)
    assert locate_LI(k, FAM).sigma != i_closed(k)


def test_spec_examples():
    e10 = locate_LE(10, FAM).sigma
    assert abs(e10 - (10 * LN3 - LN2)) <= 3 * CTX.mpf(3) ** -10
    assert float(e10) == pytest.approx(10.2930, abs=1e-4)
    # 11 ln 2 is the asymptote; i_10 = ln 2046 lies 2^-10 below it
    assert float(locate_LI(10, FAM).sigma) == pytest.approx(7.6246, abs=2 ** -10)
    assert abs(locate_LE(1, FAM).sigma) <= CTX.mpf(2) ** -240
    assert abs(locate_LI(1, FAM).sigma - LN2) <= CTX.mpf(2) ** -240


def test_tolerance_and_depth_errors():
    with pytest.raises(DomainError):
        locate_LE(3, FAM, tol=0)
    with pytest.raises(DomainError):
        locate_LI(0, FAM)
    with pytest.raises(DepthError):
        locate_LI(depth_budget(FAM.prec, FAM.beta) + 1, FAM)


def test_events_carry_their_index():
    ev = locate_LE(4, FAM)
    assert (ev.mark, ev.n, ev.k) == (LE, 4, None)
    with pytest.raises(DomainError):
        ConnectionEvent(ev.sigma, LI, n=4)


def test_connection_is_an_exact_landing():
    for n in (3, 7):
        assert winding_counts(locate_LE(n, FAM).sigma, FAM)[0] == n


def test_d_plumbing_value():
    sigma = CTX.mpf(1)
    eps = CTX.exp(-CTX.e)
    assert abs(d(0, 0, sigma, FAM) - (eps + 2)) < 1e-70


def test_ei_root_is_a_zero_of_d():
    ms = scan(FAM, depth=6)
    for (lo, hi, n, k), ev in zip(gap_intervals(ms), ms.only(EI)):
        assert lo < ev.sigma <= hi
        if ev.offset > CTX.mpf(2) ** -100:
            assert abs(d_over_rho(n, k, ev.sigma, FAM)) < CTX.mpf(2) ** -200


def test_ei_interval_guards():
    e3 = locate_LE(3, FAM).sigma
    with pytest.raises(DomainError):
        locate_EI((e3, e3), 3, 3, FAM)
    lo, hi, n, k = gap_intervals(scan(FAM, depth=4, with_ei=False))[2]
    with pytest.raises(DomainError):
        locate_EI((lo, hi), n + 1, k, FAM)


def test_scan_word_matches_closed_form_merge(p0_scan):
    # independent oracle: sort the closed-form LE/LI values, all well separated
    vals = [(e_closed(n), "E") for n in range(1, 20)] + [(i_closed(k), "I") for k in range(1, 30)]
    expected = "".join(c for _, c in sorted(vals))[:30]
    assert p0_scan.only(LE, LI)[-1].sigma < min(e_closed(20), i_closed(30))
    assert "".join(e.letter for e in p0_scan.only(LE, LI)) == expected


def test_scan_structure(p0_scan):
    assert p0_scan.depth == 30 and len(p0_scan) == 59
    assert p0_scan.word()[:11] == "EXIXEXIXEXI"
    marks = [e.mark for e in p0_scan]
    assert marks[1::2] == [EI] * 29


def test_scan_depth_six_is_strictly_increasing():
    ms = scan(FAM, depth=6)
    assert len(ms) >= 6
    assert all(a.sigma < b.sigma for a, b in zip(ms, ms.events[1:]))


def test_empty_horizon():
    assert len(scan(FAM, sigma_max=-1)) == 0
    with pytest.raises(DomainError):
        scan(FAM)


def test_resonance_is_reported():
    # B2 chosen so that the closed forms give e_5 = i_8 = ln 510
    tuned = P0.replace(B2="exp(-389/243)", name="tuned")
    with pytest.raises(ResonanceError) as exc:
        scan(tuned, depth=20, with_ei=False)
    assert {exc.value.first.mark, exc.value.second.mark} == {LE, LI}


def test_progression_fit_exact_input():
    evs = [ConnectionEvent(CTX.mpf(j) * 2 + 1, LE, n=j) for j in range(1, 7)]
    fit = progression_fit(evs)
    assert fit.common_difference == 2 and fit.intercept == 1
    assert all(r == 0 for r in fit.residuals)
    with pytest.raises(DomainError):
        progression_fit(evs[:3])


def test_progression_fit_le():
    fit = progression_fit([locate_LE(n, FAM) for n in range(10, 21)])
    assert abs(fit.common_difference - LN3) <= 1e-8
    assert abs(fit.intercept + LN2) <= 1e-7
    res = [abs(r) for r in fit.residuals]
    assert all(a >= b for a, b in zip(res, res[1:]))


def test_progression_fit_li_needs_later_turns():
    # perturbation of i_k is about 2^-(k+1); 1e-8 is reached only from k ~ 27 on
    fit = progression_fit([locate_LI(k, FAM) for k in range(30, 41)])
    assert abs(fit.common_difference - LN2) <= 1e-8
    assert abs(fit.intercept - LN2) <= 1e-7
    ratio = fit.common_difference / progression_fit([locate_LE(n, FAM) for n in range(16, 21)]).common_difference
    assert abs(ratio - LN2 / LN3) <= 1e-8


@pytest.mark.parametrize("j", range(5, 25))
def test_exponentially_perturbed_progressions(j):
    de = locate_LE(j + 1, FAM).sigma - locate_LE(j, FAM).sigma - LN3
    di = locate_LI(j + 1, FAM).sigma - locate_LI(j, FAM).sigma - LN2
    assert abs(de) <= 10 * CTX.mpf(3) ** -j
    assert abs(di) <= 10 * CTX.mpf(2) ** -j


def test_monotone_d_inside_a_validity_interval():
    e = {n: locate_LE(n, FAM).sigma for n in range(3, 7)}
    i = {k: locate_LI(k, FAM).sigma for k in range(3, 7)}
    assert validity_interval(5, 8, {**e, 7: 0, 8: 0}, {**i, 7: i_closed(7), 8: i_closed(8)}) is None
    lo, hi = validity_interval(5, 5, e, i)
    pts = [lo + (hi - lo) * (j + 0.5) / 10 for j in range(10)]
    rep = check_monotone_d(5, 5, pts, FAM)
    assert rep.ok and len(rep.samples) == 10
    assert all(s.dd_deps < -0.5 for s in rep.samples)


def test_monotone_d_flags_out_of_domain():
    rep = check_monotone_d(5, 5, [CTX.mpf(1)], FAM)
    assert rep.out_of_domain and not rep.ok


def test_precision_escalation_moves_nothing():
    a = scan(FAM, depth=12)
    b = scan(P0, depth=12, prec=FAM.prec + 64)
    assert a.word() == b.word()
    for x, y in zip(a, b):
        assert abs(x.sigma - y.sigma) <= CTX.mpf(2) ** -(FAM.prec // 2)


def test_scan_is_deterministic():
    a, b = scan(FAM, depth=8), scan(P0, depth=8)
    assert [(e.sigma, e.mark, e.n, e.k) for e in a] == [(e.sigma, e.mark, e.n, e.k) for e in b]
