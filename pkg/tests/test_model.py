import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heartlab.bifurcations import locate_LE
from heartlab.errors import DepthError, ParamError
from heartlab.families import P0
from heartlab.kernel import LnValue, context
from heartlab.model import (
    F, G, F_step, FamilyParams, G_step, as_family, coordinate_change, derive, evaluate, rho,
    wind,
)

CTX = context()
LN2, LN3 = CTX.ln2, CTX.ln(3)


def test_evaluate_reads_decimals_exactly():
    assert evaluate("0.1", 256) == CTX.mpf(1) / 10
    assert evaluate("exp(-4)", 256) == CTX.exp(-4)
    with pytest.raises(ParamError):
        evaluate("__import__('os')")


def test_derive_nu_four():
    inv = derive(P0.replace(mu="16"))
    assert inv.nu == 4
    assert inv.A == CTX.mpf("0.5")


def test_derive_reference_family():
    inv = derive(P0)
    assert abs(inv.gamma - LN3) < 1e-70
    assert abs(inv.A - LN2 / LN3) < 1e-70
    assert abs(inv.c_I - LN2) < 1e-70
    assert abs(inv.c_E + LN2) < 1e-70
    assert abs(inv.s_model - 2 * LN2) < 1e-70
    assert abs(inv.tau_model - 2 * LN2 / LN3) < 1e-70
    assert float(inv.A) == pytest.approx(0.6309297536, abs=1e-10)
    assert float(inv.tau_model) == pytest.approx(1.2618595, abs=1e-7)


def test_paper_convention_reported_alongside():
    inv = derive(P0)
    # ln C2/(1 - 1/nu) = 3/2 for P0
    assert abs(inv.s_paper - (LN2 - CTX.ln(CTX.mpf(3) / 2))) < 1e-70
    assert abs(inv.tau_paper * inv.gamma - inv.s_paper) < 1e-70


@pytest.mark.parametrize("change, word", [
    ({"mu": "2"}, "lambda^2*mu"),
    ({"lam": "1"}, "lambda"),
    ({"B1": "exp(3)"}, "ln B1"),
    ({"B2": "exp(1)"}, "ln B2"),
    ({"C1": "0"}, "positive"),
])
def test_parameter_inequalities(change, word):
    with pytest.raises(ParamError, match=re.escape(word)):
        as_family(P0.replace(**change))


@pytest.mark.parametrize("sigma, ln_rho", [(CTX.zero, -1), (LN2, -2)])
def test_rho_examples(sigma, ln_rho):
    assert abs(rho(sigma, CTX).ln - ln_rho) < 1e-70


def test_rho_at_ten():
    assert float(rho(10, CTX).ln) == pytest.approx(-22026.4658, abs=1e-4)


def test_step_maps_send_zero_to_minus_rho():
    for sigma in (0, 1, 5, 12):
        assert F_step(LnValue.zero(), sigma, P0) == -rho(sigma, CTX)
        assert G_step(LnValue.zero(), sigma, P0) == -rho(sigma, CTX)


def test_F_step_hand_value():
    sigma = CTX.ln(100)  # eps = e^-100
    got = F_step(LnValue(1, CTX.zero), sigma, P0)
    want = -1 + CTX.log1p(-CTX.exp(-99))
    assert got.sign == 1 and abs(got.ln - want) < 1e-70


def test_unperturbed_steps():
    x = LnValue(1, CTX.mpf(-3))
    assert F_step(x, CTX.ninf, P0).ln == 3 * -3 - 1
    assert G_step(LnValue(1, CTX.one), CTX.ninf, P0).ln == 0
    # y = 1/e with eps negligible: ln G = (ln y - ln C1)/lam = -4
    assert abs(G_step(LnValue(1, -CTX.one), 20, P0).ln + 4) < 1e-70


@pytest.mark.parametrize("x, y", [(LnValue.zero(), "minus_rho"), ("minus_rho", "zero"), ("half", "half")])
def test_coordinate_change(x, y):
    sigma = CTX.mpf(2)
    r = rho(sigma, CTX)
    half = LnValue(-1, r.ln - LN2)
    vals = {"minus_rho": -r, "zero": LnValue.zero(), "half": half}
    x = vals.get(x, x) if isinstance(x, str) else x
    got = coordinate_change(x, sigma, CTX)
    want = vals[y]
    if want.sign == 0:
        assert got.sign == 0
    else:
        assert got.sign == want.sign and abs(got.ln - want.ln) < 1e-70


def test_wind_at_connection_is_exact_zero():
    e3 = locate_LE(3, P0).sigma
    landing = wind(F, e3, P0)
    assert landing.exact_zero and landing.turns == 3


def test_wind_between_connections():
    fam = as_family(P0)
    mid = (locate_LE(3, fam).sigma + locate_LE(4, fam).sigma) / 2
    landing = wind(F, mid, fam)
    assert landing.turns == 4 and not landing.exact_zero
    assert landing.position.sign == -1 and landing.position.ln < rho(mid, fam.ctx).ln


def test_wind_turn_budget():
    with pytest.raises(DepthError):
        wind(G, 40, P0, max_turns=1)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=-50, max_value=-1.25), st.floats(min_value=1, max_value=12))
def test_contraction_near_zero(ln_x, sigma):
    # dF/dx = nu x^(nu-1)/C2; derivative through the log chart
    h = CTX.mpf(2) ** -60
    a = F_step(LnValue(1, CTX.mpf(ln_x) + h), sigma, P0).to_real()
    b = F_step(LnValue(1, CTX.mpf(ln_x) - h), sigma, P0).to_real()
    x = CTX.exp(ln_x)
    slope = (a - b) / (x * (CTX.exp(h) - CTX.exp(-h)))
    # far below zero the change is under the working precision and reads 0
    assert 0 <= slope < CTX.mpf(1) / 10


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=-20, max_value=-0.1), st.floats(min_value=0, max_value=2))
def test_eps_derivative_is_minus_one(ln_x, sigma):
    ctx = context(512)
    fam = as_family(P0, 512)
    lneps = -ctx.exp(ctx.mpf(sigma))
    h = ctx.mpf(2) ** -100
    x = LnValue(1, ctx.mpf(ln_x))

    def at(shift):
        s = ctx.ln(-(lneps + shift))
        return F_step(x, s, fam).to_real()

    # eps * (1 +- h) in log form
    up, down = ctx.log1p(h), ctx.log1p(-h)
    eps = ctx.exp(lneps)
    d = (at(up) - at(down)) / (eps * 2 * h)
    assert abs(d + 1) < 1e-12


@settings(max_examples=1000, deadline=None)
@given(st.floats(min_value=-2, max_value=9), st.sampled_from([F, G]),
       st.floats(min_value=-3, max_value=0), st.sampled_from(["12", "16", "9"]))
def test_landing_inside_the_gap(sigma, which, ln_b, mu):
    params = P0.replace(mu=mu, B1=f"exp({ln_b})", B2=f"exp({ln_b / 4})")
    landing = wind(which, sigma, params)
    r = rho(sigma, CTX)
    assert landing.turns >= 1
    if landing.exact_zero:
        assert landing.position.sign == 0
    else:
        assert landing.position.sign == -1 and landing.position.ln <= r.ln
