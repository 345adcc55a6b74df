"""Single-equation formulations in the auxiliary function f.

Each regime's equation is stored as a committed evaluation plan (see
:mod:`b2p1.oracle.golden`).  Residuals evaluate the plan on a jet; the time
stepper splits the plan into a constant-coefficient operator acting on f_tt
and everything else, and inverts the operator in Fourier space.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import StepperConfig, as_sample, check_form, rk4_fields
from .errors import InvalidParameter, TauNotNegligible, UnsupportedRegime
from .grid import Grid2D, OperatorSymbol
from .jets import JetProvider, StateJet
from .oracle.derive import ORDERINGS
from .oracle.golden import load_plan
from .oracle.plan import EvaluationPlan, evaluate_plan
from .params import TAU_NEGLIGIBLE, Regime, SmallParams

STEPPABLE = (Regime.CASE1, Regime.CASE3, Regime.CASE4)


@dataclass
class ScalarState:
    f: np.ndarray
    q: np.ndarray  # f_t
    t: float
    grid: Grid2D

    def copy(self) -> "ScalarState":
        return ScalarState(self.f.copy(), self.q.copy(), self.t, self.grid)


def _regime(r) -> Regime:
    r = r if isinstance(r, Regime) else Regime.parse(r)
    if r is Regime.CASE3ST:
        raise UnsupportedRegime("the surface-tension Case3 variant has no single-f equation here; "
                                "use the pair formulation")
    return r


def _grade(exps, weights) -> int:
    """Grade with gamma/beta counted as order one (the ratio is kept explicit)."""
    k = min(exps[2], -exps[1]) if exps[1] < 0 else 0
    e = (exps[0], exps[1] + k, exps[2] - k) + tuple(exps[3:])
    return sum(a * w for a, w in zip(e, weights))


def _ratio_only(exps) -> bool:
    return exps[0] == exps[3] == exps[4] == 0 and exps[1] == -exps[2]


def scalar_plan(r, form: str = "consistent", order: int | None = None,
                linear_only: bool = False) -> EvaluationPlan:
    """The plan for regime ``r``.

    ``order`` keeps only terms of grade <= order; ``linear_only`` keeps the
    terms free of small parameters apart from the ratio gamma/beta.
    """
    r = _regime(r)
    plan = load_plan("scalar", r, check_form(form))
    if linear_only:
        plan = plan.select(lambda t: _ratio_only(t.exps))
    if order is not None:
        w = ORDERINGS[r].weights
        plan = plan.select(lambda t: _grade(t.exps, w) <= order)
    return plan


def _field_source(jet: JetProvider, bath):
    g = jet.grid

    def fields(req):
        base, a, b, c = req
        if base == "f":
            return jet(a, b, c)
        if base == "h_h":
            # printed symbol in the Case2 bottom block; read as the y-slope
            return bath.hy
        if (a, b) == (0, 0):
            return bath.h
        if (a, b) == (1, 0):
            return bath.hx
        if (a, b) == (0, 1):
            return bath.hy
        return g.deriv(bath.h, a, b)

    return fields


def scalar_residual(jet: JetProvider, bath, p: SmallParams, r, form: str = "consistent",
                    order: int | None = None, linear_only: bool = False) -> np.ndarray:
    """Pointwise residual of the regime's single-f equation on ``jet``.

    ``linear_only=True`` switches every alpha, beta, gamma, delta multiplier
    off, leaving the zeroth-order wave equation.
    """
    plan = scalar_plan(r, form, order, linear_only)
    b = as_sample(bath, jet.grid)
    return evaluate_plan(plan, _field_source(jet, b), p, jet.grid.shape)


def case1_residual_direct(jet: JetProvider, bath, p: SmallParams) -> np.ndarray:
    """Case1 equation assembled term by term, independent of the plan machinery."""
    b = as_sample(bath, jet.grid)
    r = p.gamma / p.beta
    fx, fy, ft = jet(1, 0, 0), jet(0, 1, 0), jet(0, 0, 1)
    fxx, fyy = jet(2, 0, 0), jet(0, 2, 0)
    out = fxx + r * fyy - jet(0, 0, 2)
    out -= p.alpha * (ft * (fxx + r * fyy) + 2 * fx * jet(1, 0, 1) + 2 * r * fy * jet(0, 1, 1))
    out += p.beta / 3 * (jet(4, 0, 0) + 2 * r * jet(2, 2, 0) + r * r * jet(0, 4, 0))
    out -= p.delta * (b.hx * fx + b.h * fxx + r * (b.hy * fy + b.h * fyy))
    return out


# -- time stepping -------------------------------------------------------------

_SYMBOL_SLOTS = {(0, 0): "c0", (2, 0): "c20", (0, 2): "c02", (4, 0): "c40", (2, 2): "c22",
                 (0, 4): "c04", (6, 0): "c60", (4, 2): "c42", (2, 4): "c24", (0, 6): "c06"}


class ScalarModel:
    """Split ``B f_tt + E(f, f_t) = 0`` with B constant-coefficient; f_tt = -B^-1 E."""

    def __init__(self, grid: Grid2D, bath, p: SmallParams, r, form: str = "consistent",
                 dealias: bool = True):
        r = _regime(r)
        if r not in STEPPABLE:
            raise UnsupportedRegime(f"{r.name}: f_tt enters nonlinearly; evolve the pair instead")
        self.grid, self.p, self.regime = grid, p, r
        self.bath = as_sample(bath, grid)
        self.dealias = dealias
        plan = scalar_plan(r, form)
        coeffs = {}
        explicit = []
        for t in plan.terms:
            reqs = [plan.requests[i] for i in t.factors]
            if any(q[0] == "f" and q[3] == 2 for q in reqs):
                if len(reqs) != 1:
                    raise UnsupportedRegime(f"{r.name}: nonlinear f_tt term in the equation")
                _, a, b, _ = reqs[0]
                slot = _SYMBOL_SLOTS.get((a, b))
                if slot is None:
                    raise UnsupportedRegime(f"{r.name}: f_tt carries an odd derivative ({a}, {b})")
                coeffs[slot] = coeffs.get(slot, 0.0) + plan.param_value(t, p)
            else:
                explicit.append(t)
        coeffs.setdefault("c0", 0.0)
        self.B = OperatorSymbol(**coeffs)
        self.explicit = EvaluationPlan(plan.name, plan.requests, tuple(explicit))

    def f_tt(self, f: np.ndarray, q: np.ndarray, t: float = 0.0) -> np.ndarray:
        g = self.grid
        jet = StateJet(g, f, q, t)
        e = evaluate_plan(self.explicit, _field_source(jet, self.bath), self.p, g.shape)
        eh = g.fft(e)
        if self.dealias:
            eh = g.dealias_hat(eh)
        return g.ifft(g.invert_symbol_hat(-eh, self.B))

    def rhs(self, f, q, t=0.0):
        return q, self.f_tt(f, q, t)

    def jet(self, state: ScalarState) -> StateJet:
        """Numerically backed jet with f_tt supplied by the equation itself."""
        return StateJet(state.grid, state.f, state.q, state.t,
                        ftt=self.f_tt(state.f, state.q, state.t))


def scalar_step(state: ScalarState, cfg: StepperConfig, bath=None, p: SmallParams | None = None,
                r=None, *, form: str = "consistent", model: ScalarModel | None = None) -> ScalarState:
    """One RK4 step of (f, q) with q_t = f_tt from the regime's equation."""
    if model is None:
        if p is None or r is None:
            raise InvalidParameter("scalar_step needs (bath, p, r) or a prebuilt model")
        model = ScalarModel(state.grid, bath, p, r, form=form, dealias=cfg.dealias)
    g = state.grid
    filt = None
    if cfg.filter:
        filt = lambda u: g.ifft(g.filter_hat(g.fft(u), cfg.filter))  # noqa: E731
    f, q = rk4_fields((state.f, state.q), state.t, cfg.dt, lambda fl, t: model.rhs(fl[0], fl[1], t),
                      filt)
    return ScalarState(f, q, state.t + cfg.dt, g)


def evolve_scalar(state: ScalarState, cfg: StepperConfig, model: ScalarModel, nsteps: int,
                  callback=None) -> ScalarState:
    for n in range(1, nsteps + 1):
        state = scalar_step(state, cfg, model=model)
        if callback is not None:
            callback(n, state)
    return state


# -- eta recovery --------------------------------------------------------------

def eta_from_jet(jet: JetProvider, p: SmallParams, r, form: str = "consistent") -> np.ndarray:
    r = _regime(r)
    if r is Regime.CASE4 and p.tau * max(p.beta, p.gamma) > TAU_NEGLIGIBLE:
        raise TauNotNegligible(
            f"Case4 elimination needs negligible surface tension: tau*max(beta, gamma) = "
            f"{p.tau * max(p.beta, p.gamma):.3e} > {TAU_NEGLIGIBLE:g}")
    plan = load_plan("eta", r, check_form(form))
    return evaluate_plan(plan, lambda req: jet(*req[1:]), p, jet.grid.shape)


def eta_from_f(state: ScalarState, p: SmallParams, r, form: str = "consistent") -> np.ndarray:
    """Surface elevation recovered from (f, f_t) by the regime's dynamic relation."""
    return eta_from_jet(StateJet(state.grid, state.f, state.q, state.t), p, r, form)
