"""The concrete standard family: coefficients, invariants and monodromy maps.

The model unfolding used throughout is::

    F_eps(x) = x**nu / C2 - eps              (whole polycycle, forward time)
    G_eps(y) = (y / C1)**(1 / lam) - eps     (the loop, reversed time)
    rho(eps) = eps                           (size of the gap)

with ``nu = lam**2 * mu``.  Both maps send the gap endpoint 0 to the other
endpoint ``-rho``, are contracting near 0 and have ``dF/deps = -1``.
Points are handled as :class:`~heartlab.kernel.LnValue` and the parameter
as ``sigma = ln(-ln eps)``.
"""
from __future__ import annotations

import ast
import functools
import operator
from dataclasses import dataclass, fields

import mpmath

from .errors import DepthError, DomainError, ParamError
from .kernel import DEFAULT_PRECISION, LnValue, context, ln_sub, ln_sum

F = "F"
G = "G"


# -- coefficient expressions -------------------------------------------------

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_FUNCS = {"exp": "exp", "ln": "ln", "log": "ln", "sqrt": "sqrt"}
_CONSTS = {"e": "e", "pi": "pi"}


def evaluate(expr: str, prec: int = DEFAULT_PRECISION):
    """Evaluate a coefficient expression at ``prec`` bits.

    Accepts decimal literals (parsed from their text, never through a
    double), ``+ - * / **``, the constants ``e`` and ``pi`` and the functions
    ``exp``, ``ln``/``log`` and ``sqrt``.

    >>> str(evaluate("1/2", 64))
    '0.5'
    """
    ctx = context(prec)
    text = str(expr).strip()
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ParamError(f"cannot parse coefficient {expr!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            literal = ast.get_source_segment(text, node)
            return ctx.mpf(literal)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = ev(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.Name) and node.id in _CONSTS:
            return getattr(ctx, _CONSTS[node.id]) + 0
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS
            and len(node.args) == 1
            and not node.keywords
        ):
            return getattr(ctx, _FUNCS[node.func.id])(ev(node.args[0]))
        raise ParamError(f"unsupported construct in coefficient {expr!r}")

    return ctx.mpf(ev(tree))


def _ln_of(expr: str, ctx):
    """``ln`` of a coefficient; ``exp(...)`` is unwrapped instead of round-tripped."""
    text = str(expr).strip()
    tree = ast.parse(text, mode="eval").body
    if (
        isinstance(tree, ast.Call)
        and isinstance(tree.func, ast.Name)
        and tree.func.id == "exp"
        and len(tree.args) == 1
    ):
        return evaluate(ast.get_source_segment(text, tree.args[0]), ctx.prec)
    if isinstance(tree, ast.Name) and tree.id == "e":
        return ctx.mpf(1)
    val = evaluate(text, ctx.prec)
    if not val > 0:
        raise ParamError(f"coefficient {expr!r} must be positive")
    return ctx.ln(val)


# -- family coefficients -------------------------------------------------------

@dataclass(frozen=True)
class FamilyParams:
    """Coefficients ``(lambda, mu, B1, B2, C1, C2)`` of one standard family.

    Every field is an expression string (see :func:`evaluate`); numbers are
    accepted and converted with ``str``.
    """

    lam: str
    mu: str
    B1: str
    B2: str
    C1: str
    C2: str
    name: str = ""

    def __post_init__(self):
        for f in fields(self):
            if f.name != "name":
                object.__setattr__(self, f.name, str(getattr(self, f.name)))

    def replace(self, **changes) -> "FamilyParams":
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data.update(changes)
        return FamilyParams(**data)

    def as_dict(self) -> dict:
        return {
            "lambda": self.lam, "mu": self.mu, "B1": self.B1,
            "B2": self.B2, "C1": self.C1, "C2": self.C2,
        }

    def materialize(self, prec: int = DEFAULT_PRECISION) -> "Family":
        return _materialize(self, int(prec))


@dataclass(frozen=True, eq=False)
class Family:
    """A :class:`FamilyParams` evaluated at a fixed working precision."""

    params: FamilyParams
    prec: int
    ctx: object
    lam: object
    mu: object
    nu: object
    gamma: object
    beta: object
    ln_B1: object
    ln_B2: object
    ln_C1: object
    ln_C2: object

    @property
    def fixed_ln_F(self):
        """``ln`` of the repelling fixed point of the unperturbed ``F``."""
        return self.ln_C2 / (self.nu - 1)

    @property
    def fixed_ln_G(self):
        """``ln`` of the repelling fixed point of the unperturbed ``G``."""
        return self.ln_C1 / (1 - self.lam)

    def at(self, prec: int) -> "Family":
        return self.params.materialize(prec)


@functools.lru_cache(maxsize=256)
def _materialize(params: FamilyParams, prec: int) -> Family:
    ctx = context(prec)
    lam = evaluate(params.lam, prec)
    mu = evaluate(params.mu, prec)
    if not (0 < lam < 1):
        raise ParamError(f"need 0 < lambda < 1, got lambda={lam}")
    if not mu > 0:
        raise ParamError(f"need mu > 0, got mu={mu}")
    nu = lam * lam * mu
    if not nu > 1:
        raise ParamError(f"need lambda^2*mu > 1, got lambda^2*mu={mpmath.nstr(nu, 12)}")
    ln_B1, ln_B2 = _ln_of(params.B1, ctx), _ln_of(params.B2, ctx)
    ln_C1, ln_C2 = _ln_of(params.C1, ctx), _ln_of(params.C2, ctx)
    fam = Family(
        params=params, prec=prec, ctx=ctx, lam=lam, mu=mu, nu=nu,
        gamma=ctx.ln(nu), beta=-ctx.ln(lam),
        ln_B1=ln_B1, ln_B2=ln_B2, ln_C1=ln_C1, ln_C2=ln_C2,
    )
    if not ln_B1 < fam.fixed_ln_G:
        raise ParamError("winding admissibility fails: need ln B1 < ln C1/(1-lambda)")
    if not ln_B2 < fam.fixed_ln_F:
        raise ParamError("winding admissibility fails: need ln B2 < ln C2/(lambda^2*mu-1)")
    return fam


def as_family(params, prec: int | None = None) -> Family:
    """Accept either :class:`FamilyParams` or :class:`Family`."""
    if isinstance(params, Family):
        if prec is None or prec == params.prec:
            return params
        return params.at(prec)
    return params.materialize(prec or DEFAULT_PRECISION)


# -- invariants ---------------------------------------------------------------

@dataclass(frozen=True)
class Derived:
    nu: object
    gamma: object
    beta: object
    A: object
    s_paper: object
    s_model: object
    tau_paper: object
    tau_model: object
    c_E: object
    c_I: object

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def derive(params, prec: int | None = None) -> Derived:
    """Numeric invariants of a family.

    ``c_I`` and ``c_E`` are the intercepts of the connection progressions in
    the sigma chart; ``s_model = c_I - c_E``.  ``s_paper`` uses
    ``ln C2 / (1 - 1/nu)`` in its second term instead of ``ln C2/(nu - 1)``;
    it is ``None`` when that logarithm's argument is not positive.
    """
    fam = as_family(params, prec)
    ctx = fam.ctx
    c_I = ctx.ln(fam.fixed_ln_G - fam.ln_B1)
    c_E = ctx.ln(fam.fixed_ln_F - fam.ln_B2)
    s_model = c_I - c_E
    paper_arg = fam.ln_C2 / (1 - 1 / fam.nu) - fam.ln_B2
    s_paper = c_I - ctx.ln(paper_arg) if paper_arg > 0 else None
    return Derived(
        nu=fam.nu,
        gamma=fam.gamma,
        beta=fam.beta,
        A=fam.beta / fam.gamma,
        s_paper=s_paper,
        s_model=s_model,
        tau_paper=None if s_paper is None else s_paper / fam.gamma,
        tau_model=s_model / fam.gamma,
        c_E=c_E,
        c_I=c_I,
    )


# -- chart and gap -----------------------------------------------------------

def ln_eps(sigma, ctx):
    """``ln eps`` for ``sigma = ln(-ln eps)``; ``sigma = -inf`` means ``eps = 0``."""
    sigma = ctx.mpf(sigma)
    if sigma == ctx.ninf:
        return None
    return -ctx.exp(sigma)


def _eps_value(lneps) -> LnValue:
    return LnValue.zero() if lneps is None else LnValue(1, lneps)


def rho(sigma, ctx=None) -> LnValue:
    """Gap size in log form: ``ln rho = ln eps = -exp(sigma)``."""
    ctx = ctx or context()
    return _eps_value(ln_eps(sigma, ctx))


def coordinate_change(x: LnValue, sigma, ctx=None) -> LnValue:
    """``y = -rho(eps) - x`` between the two natural charts on the transversal."""
    ctx = ctx or context()
    r = rho(sigma, ctx)
    # y = -(rho + x)
    if x.sign >= 0:
        return -ln_sum(r, x)
    return -ln_sub(r, -x)


# -- monodromy maps ----------------------------------------------------------

def _map_coeffs(which: str, fam: Family):
    """(exponent, additive log constant) of the unperturbed map."""
    if which == F:
        return fam.nu, -fam.ln_C2
    if which == G:
        inv = 1 / fam.lam
        return inv, -fam.ln_C1 * inv
    raise DomainError(f"unknown map {which!r}; expected 'F' or 'G'")


def _start(which: str, fam: Family) -> LnValue:
    return LnValue(1, fam.ln_B2 if which == F else fam.ln_B1)


def _step(pt: LnValue, lneps, expo, const, prec: int) -> LnValue:
    if pt.sign < 0:
        raise DomainError("monodromy maps are defined on the winding side (x >= 0)")
    if pt.sign == 0:
        return -_eps_value(lneps)
    pre = expo * pt.ln + const
    if lneps is None:
        return LnValue(1, pre)
    # eps below working precision relative to pre: the subtraction is exact
    if lneps - pre < -(prec + 16) * 0.6931471805599453:
        return LnValue(1, pre)
    return ln_sub(LnValue(1, pre), LnValue(1, lneps))


def step(which: str, pt: LnValue, sigma, params) -> LnValue:
    fam = as_family(params)
    expo, const = _map_coeffs(which, fam)
    return _step(pt, ln_eps(sigma, fam.ctx), expo, const, fam.prec)


def F_step(ln_x: LnValue, sigma, params) -> LnValue:
    """One turn around the whole polycycle: ``x -> x**nu / C2 - eps``."""
    return step(F, ln_x, sigma, params)


def G_step(ln_y: LnValue, sigma, params) -> LnValue:
    """One turn around the loop in reversed time: ``y -> (y/C1)**(1/lam) - eps``."""
    return step(G, ln_y, sigma, params)


def pre_landing(which: str, turns: int, lneps, fam: Family):
    """``ln`` of the last iterate before ``eps`` is subtracted, or ``None``.

    Iterates the chosen map ``turns - 1`` times from its separatrix entry
    point and returns ``exponent * ln x + const``, i.e. the logarithm of the
    unperturbed image whose comparison with ``eps`` decides whether the
    ``turns``-th image is positive.  Returns ``None`` when the orbit reached
    the gap earlier.
    """
    expo, const = _map_coeffs(which, fam)
    pt = _start(which, fam)
    for _ in range(turns - 1):
        pt = _step(pt, lneps, expo, const, fam.prec)
        if pt.sign <= 0:
            return None
    return expo * pt.ln + const


def zero_cut(fam: Family):
    """Log-ratio to ``rho`` below which a gap landing counts as exactly 0."""
    return -(fam.prec // 2) * fam.ctx.ln2


def formal_iterate(which: str, turns: int, lneps, fam: Family, snap: bool = True) -> LnValue:
    """``turns`` applications of the map to the separatrix entry point.

    Intermediate iterates must be non-negative; the last may be anything.
    With ``snap`` an iterate within ``rho * 2**(-prec/2)`` of 0 is replaced
    by 0, which is what it is at an exact connection parameter.
    """
    expo, const = _map_coeffs(which, fam)
    cut = zero_cut(fam)
    pt = _start(which, fam)
    for j in range(turns):
        if pt.sign < 0:
            raise DomainError(
                f"{which}-orbit reached the gap after {j} of {turns} turns"
            )
        pt = _step(pt, lneps, expo, const, fam.prec)
        if snap and pt.sign != 0 and lneps is not None and pt.ln - lneps <= cut:
            pt = LnValue.zero()
    return pt


@dataclass(frozen=True)
class GapLanding:
    """Where a winding separatrix first meets the gap ``[-rho, 0]``."""

    position: LnValue
    turns: int
    exact_zero: bool


def landing(which: str, lneps, fam: Family, max_turns: int = 10_000) -> GapLanding:
    expo, const = _map_coeffs(which, fam)
    if lneps is None:
        raise DepthError("with eps = 0 the separatrix never reaches the gap")
    pt = _start(which, fam)
    cut = zero_cut(fam)
    for turns in range(1, max_turns + 1):
        pt = _step(pt, lneps, expo, const, fam.prec)
        if pt.sign == 0 or pt.ln - lneps <= cut:
            return GapLanding(LnValue.zero(), turns, True)
        if pt.sign < 0:
            return GapLanding(pt, turns, False)
    raise DepthError(
        f"{which}-orbit did not reach the gap within {max_turns} turns; "
        "raise the turn budget (and precision)"
    )


def wind(which: str, sigma, params, max_turns: int = 10_000) -> GapLanding:
    """Iterate ``F`` from ``B2`` (or ``G`` from ``B1``) until the gap is reached.

    The landing position always lies in ``[-rho, 0]``; a landing within
    ``rho * 2**(-prec/2)`` of 0 is reported as an exact zero, i.e. the
    parameter is (numerically) a connection.
    """
    if max_turns < 1:
        raise DomainError("max_turns must be at least 1")
    fam = as_family(params)
    return landing(which, ln_eps(sigma, fam.ctx), fam, max_turns)
