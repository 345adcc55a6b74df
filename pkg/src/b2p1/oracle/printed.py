"""Literal transcriptions of the typeset equations, typos included.

These are data, not derivations: each function rebuilds one displayed
equation term by term so the derivation engine can be diffed against it.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ..params import Regime
from .termsum import TermSum, add, parse_params

# Case2 is printed in the leading-parameter shorthand alpha=A*beta, gamma=G*beta, delta=D*beta^2
CASE2_ALIASES = {
    "A": (1, -1, 0, 0, 0),
    "G": (0, -1, 1, 0, 0),
    "D": (0, -2, 0, 1, 0),
}


def s(name: str) -> TermSum:
    return TermSum.symbol(name)


def c(coef=1, params: str = "1", aliases=None) -> TermSum:
    return TermSum({(parse_params(params, aliases), ()): Fraction(coef)})


def prod(*names: str) -> TermSum:
    out = TermSum.one()
    for n in names:
        out = out * s(n)
    return out


def terms(rows, aliases=None) -> TermSum:
    """rows of (coef, params, "sym sym ...")."""
    return add(*[c(k, p, aliases) * prod(*syms.split()) for k, p, syms in rows])


def _hx(u: str) -> TermSum:
    return (s("h") * s(f"f_{u}")).diff(u)


# Case1 -------------------------------------------------------------------

def case1_kinematic() -> TermSum:
    eta, fx, fy = s("eta"), s("f_x"), s("f_y")
    return add(
        s("eta_t"), s("f_xx"), c(1, "r") * s("f_yy"),
        c(1, "alpha") * ((eta * fx).diff("x") + c(1, "r") * (eta * fy).diff("y")),
        c(Fraction(-1, 6), "beta") * (s("f_4x") + c(2, "r") * s("f_2x2y") + c(1, "r^2") * s("f_4y")),
        c(-1, "delta") * (_hx("x") + c(1, "r") * _hx("y")),
    )


def case1_dynamic() -> TermSum:
    return add(
        s("eta"), s("f_t"),
        c(Fraction(1, 2), "alpha") * (prod("f_x", "f_x") + c(1, "r") * prod("f_y", "f_y")),
        c(Fraction(-1, 2), "beta") * (s("f_xxt") + c(1, "r") * s("f_yyt")),
    )


def _case1_common() -> TermSum:
    return add(
        s("f_xx"), c(1, "r") * s("f_yy"), c(-1) * s("f_tt"),
        c(-1, "alpha") * (s("f_t") * (s("f_xx") + c(1, "r") * s("f_yy"))
                          + (prod("f_x", "f_x") + c(1, "r") * prod("f_y", "f_y")).diff("t")),
        c(-1, "delta") * (_hx("x") + c(1, "r") * _hx("y")),
    )


def case1_scalar_unreduced() -> TermSum:
    bracket = (c(Fraction(1, 6)) * (s("f_4x") + c(2, "r") * s("f_2x2y") + c(1, "r^2") * s("f_4y"))
               - c(Fraction(1, 2)) * (s("f_xxtt") + c(1, "r") * s("f_yytt")))
    return _case1_common() + c(-1, "beta") * bracket


def case1_scalar() -> TermSum:
    bracket = c(Fraction(1, 3)) * (s("f_4x") + c(2, "r") * s("f_2x2y") + c(1, "r^2") * s("f_4y"))
    return _case1_common() + c(1, "beta") * bracket


def case1_eta() -> TermSum:
    return -(case1_dynamic() - s("eta"))


# Case2 -------------------------------------------------------------------

def case2_kinematic() -> TermSum:
    eta = s("eta")
    return add(
        s("eta_t"), s("f_xx"), c(1, "r") * s("f_yy"),
        c(1, "alpha") * ((eta * s("f_x")).diff("x") + c(1, "r") * (eta * s("f_y")).diff("y")),
        c(Fraction(-1, 6), "beta") * (s("f_4x") + c(2, "r") * s("f_2x2y") + c(1, "r^2") * s("f_4y")),
        c(Fraction(-1, 2), "alpha*beta") * (eta * s("f_3x")).diff("x"),
        c(Fraction(-1, 2), "alpha*gamma") * (prod("eta_x", "f_x2y") + c(2) * prod("eta", "f_2x2y")
                                             + prod("eta_y", "f_2xy")),
        c(Fraction(-1, 120), "beta^2") * s("f_6x"),
        c(Fraction(-1, 40), "beta*gamma") * (s("f_4x2y") + c(1, "r") * s("f_2x4y")
                                             + c(Fraction(1, 3), "r^2") * s("f_6y")),
        c(-1, "delta") * (_hx("x") + c(1, "r") * _hx("y")),
    )


def _case2_dynamic_rest() -> TermSum:
    """Everything in the printed dynamic condition except eta and the eta*f_..t terms."""
    return add(
        s("f_t"),
        c(Fraction(1, 2), "alpha") * (prod("f_x", "f_x") + c(1, "r") * prod("f_y", "f_y")),
        c(Fraction(-1, 2), "beta") * (s("f_xxt") + c(1, "r") * s("f_yyt")),
        c(Fraction(1, 2), "alpha*beta") * (prod("f_xx", "f_xx") - prod("f_x", "f_3x")),
        c(1, "alpha*gamma") * (prod("f_xx", "f_yy")
                               - c(Fraction(1, 2)) * (prod("f_x", "f_xyy") + prod("f_y", "f_xxy"))
                               + c(1, "r") * (prod("f_yy", "f_yy") - prod("f_y", "f_3y"))),
        c(Fraction(1, 24), "beta^2") * (s("f_4xt") + c(2, "r") * s("f_2x2yt") + c(1, "r^2") * s("f_4yt")),
    )


def case2_dynamic() -> TermSum:
    return add(s("eta"), _case2_dynamic_rest(),
               c(-1, "alpha*beta") * prod("eta", "f_xxt"),
               c(1, "alpha*gamma") * prod("eta", "f_yyt"))


def case2_eta() -> TermSum:
    return (-_case2_dynamic_rest()
            + s("f_t") * (c(1, "alpha*beta") * s("f_xxt") + c(1, "alpha*gamma") * s("f_yyt")))


_CASE2_SCALAR_ROWS = [
    # order beta^0
    (1, "1", "f_xx"), (1, "G", "f_yy"), (-1, "1", "f_tt"),
    (-1, "A*G", "f_tt f_yyt"), (-1, "A*G", "f_t f_2y2t"),
    (-1, "A", "f_tt f_2xt"), (-1, "A", "f_t f_2x2t"),
    # beta [ ... ]
    (-1, "G*A^2*beta", "f_yyt f_x f_xt"),
    (-1, "G*A^4*beta", "f_t f_x f_x2yt"),
    (-1, "G*A^2*beta", "f_t f_yyt f_xx"),
    (-1, "G*A^2*beta", "f_y f_xy f_2xt"),
    (-1, "G*A^2*beta", "f_t f_yy f_2xt"),
    (1, "G*A^2*beta", "f_t f_y f_2xyt"),
    (-1, "G*A^2*beta", "f_t f_yy"),
    (-1, "G^2*A^2*beta", "f_y f_xy f_yyt"),
    (-1, "G^2*A^2*beta", "f_t f_yy f_yyt"),
    (-1, "G^2*A^2*beta", "f_t f_y f_3yt"),
    (-1, "A^2*beta", "f_x f_xt f_2xt"),
    (1, "A^2*beta", "f_t f_xx f_2xt"),
    (1, "A^2*beta", "f_t f_x f_3xt"),
    (-2, "G*A*beta", "f_y f_xy"),
    (-2, "beta", "f_x f_xt"),
    (-1, "A*beta", "f_t f_xx"),
    (Fraction(1, 2), "G*beta", "f_2y2t"),
    (Fraction(-1, 6), "G^2*beta", "f_4y"),
    (Fraction(1, 2), "beta", "f_2x2t"),
    (Fraction(-1, 3), "G*beta", "f_2x2y"),
    (Fraction(-1, 6), "beta", "f_4x"),
    # beta^2 [ ... ]
    (1, "A^2*G^3*beta^2", "f_xy f_yyt f_3y"),
    (1, "A^2*G^3*beta^2", "f_t f_3y f_3yt"),
    (1, "A^2*G^3*beta^2", "f_t f_yyt f_4y"),
    (Fraction(1, 120), "G^3*beta^2", "f_6y"),
    (Fraction(-3, 2), "A^2*G^2*beta^2", "f_y f_y f_yy"),
    (Fraction(1, 2), "A^2*G^2*beta^2", "f_yyt f_xt f_x2y"),
    (Fraction(1, 2), "A^2*G^2*beta^2", "f_t f_x2y f_x2yt"),
    (Fraction(1, 2), "A^2*G^2*beta^2", "f_xy f_3y f_2xt"),
    (Fraction(1, 2), "A^2*G^2*beta^2", "f_t f_4y f_2xt"),
    (Fraction(1, 2), "A^2*G^2*beta^2", "f_xy f_yyt f_2xy"),
    (Fraction(1, 2), "A^2*G^2*beta^2", "f_t f_3yt f_2xy"),
    (Fraction(1, 2), "A^2*G^2*beta^2", "f_t f_3y f_2xyt"),
    (1, "A^2*G^2*beta^2", "f_t f_yyt f_2x2y"),
    (Fraction(-1, 2), "A*G^2*beta^2", "f_yy f_yyt"),
    (1, "A*G^2*beta^2", "f_xy f_3y"),
    (1, "A*G^2*beta^2", "f_y f_3yt"),
    (Fraction(1, 2), "A*G^2*beta^2", "f_t f_4y"),
    (Fraction(-1, 2), "A^2*G*beta^2", "f_yy f_x f_x"),
    (Fraction(-1, 2), "A^2*G*beta^2", "f_y f_y f_xx"),
    (Fraction(1, 2), "A^2*G*beta^2", "f_xt f_x2y f_2xt"),
    (Fraction(1, 2), "A^2*G*beta^2", "f_xy f_2xt f_2xy"),
    (Fraction(1, 2), "A^2*G*beta^2", "f_t f_2xy f_2xyt"),
    (Fraction(1, 2), "A^2*G*beta^2", "f_yyt f_xt f_3x"),
    (Fraction(1, 2), "A^2*G*beta^2", "f_t f_x2yt f_3x"),
    (Fraction(1, 2), "A^2*G*beta^2", "f_t f_x2y f_3xt"),
    (Fraction(1, 2), "A^2*G*beta^2", "f_t f_yyt f_4x"),
    (1, "A^2*G*beta^2", "f_t f_2xt f_2x2y"),
    (-2, "A^2*G*beta^2", "f_y f_x f_xy"),
    (Fraction(-1, 24), "G^2*beta^2", "f_4y2t"),
    (Fraction(1, 40), "G^2*beta^2", "f_2x4y"),
    (-1, "D*G*beta^2", "h_h f_y"),
    (-1, "D*G*beta^2", "h f_yy"),
    (-1, "D*beta^2", "h f_x"),
    (-1, "D*beta^2", "h f_xx"),
    (1, "A*G*beta^2", "f_xt f_x2y"),
    (1, "A*G*beta^2", "f_x f_x2yt"),
    (Fraction(-1, 2), "A*G*beta^2", "f_yyt f_xx"),
    (Fraction(-1, 2), "A*G*beta^2", "f_yy f_2xt"),
    (1, "A*G*beta^2", "f_xy f_2xy"),
    (1, "A*G*beta^2", "f_y f_2xyt"),
    (1, "A*G*beta^2", "f_t f_2x2y"),
    (Fraction(-1, 12), "G*beta^2", "f_2x2y2t"),
    (Fraction(1, 40), "G*beta^2", "f_4x2y"),
    (Fraction(-1, 2), "A*beta^2", "f_xx f_2xt"),
    (1, "A*beta^2", "f_xt f_3x"),
    (1, "A*beta^2", "f_x f_3xt"),
    (Fraction(1, 2), "A*beta^2", "f_t f_4x"),
    (Fraction(1, 2), "A^2*beta^2", "f_xt f_2xt f_3x"),
    (Fraction(1, 2), "A^2*beta^2", "f_t f_3x f_3xt"),
    (Fraction(1, 2), "A^2*beta^2", "f_t f_2xt f_4x"),
    (Fraction(-1, 24), "beta^2", "f_4x2t"),
    (Fraction(1, 120), "beta^2", "f_6x"),
]


def case2_scalar() -> TermSum:
    return terms(_CASE2_SCALAR_ROWS, CASE2_ALIASES)


# Case3 -------------------------------------------------------------------

def case3_kinematic() -> TermSum:
    return add(
        s("eta_t"), s("f_xx"), c(Fraction(-1, 6), "beta") * s("f_4x"), c(1, "r") * s("f_yy"),
        c(1, "alpha") * (s("eta") * s("f_x")).diff("x"),
        c(Fraction(-1, 120), "beta^2") * s("f_6x"),
        c(Fraction(-1, 3), "gamma") * s("f_2x2y"),
        c(-1, "delta") * _hx("x"),
    )


def case3_dynamic() -> TermSum:
    return add(
        s("eta"), s("f_t"), c(Fraction(-1, 2), "beta") * s("f_xxt"),
        c(Fraction(1, 2), "alpha") * prod("f_x", "f_x"),
        c(Fraction(1, 24), "beta^2") * s("f_4xt"),
        c(Fraction(-1, 2), "gamma") * s("f_yyt"),
    )


def case3st_dynamic() -> TermSum:
    return add(
        s("eta"), s("f_t"),
        c(-1, "beta") * (c(Fraction(1, 2)) * s("f_xxt") + c(1, "tau") * s("eta_xx")),
        c(Fraction(1, 2), "alpha") * prod("f_x", "f_x"),
        c(Fraction(1, 24), "beta^2") * s("f_4xt"),
        c(-1, "gamma") * (c(Fraction(1, 2)) * s("f_yyt") + c(1, "tau") * s("eta_yy")),
    )


def case3_scalar() -> TermSum:
    return add(
        s("f_xx"), c(-1) * s("f_tt"), c(1, "r") * s("f_yy"),
        c(1, "beta") * (c(Fraction(1, 2)) * s("f_xxtt") - c(Fraction(1, 6)) * s("f_4x")),
        c(-1, "beta^2") * (c(Fraction(1, 24)) * s("f_4x2t") + c(Fraction(1, 120)) * s("f_6x")),
        c(1, "gamma") * (c(Fraction(-1, 3)) * s("f_xxyy") + c(Fraction(1, 2)) * s("f_yytt")),
        c(-1, "alpha") * (c(2) * prod("f_x", "f_xt") + prod("f_t", "f_xx")),
        c(-1, "delta") * _hx("x"),
    )


def case3_eta() -> TermSum:
    return -(case3_dynamic() - s("eta"))


# Case4 -------------------------------------------------------------------

def case4_kinematic() -> TermSum:
    eta = s("eta")
    return add(
        s("eta_t"), s("f_xx"), c(1, "r") * s("f_yy"),
        c(1, "alpha") * ((eta * s("f_x")).diff("x") + c(1, "r") * (eta * s("f_y")).diff("y")),
        c(Fraction(-1, 6), "beta") * (s("f_4x") + c(1, "r^2") * s("f_4y")),
        c(Fraction(-1, 3), "gamma") * s("f_2x2y"),
        c(-1, "delta") * (_hx("x") + c(1, "r") * _hx("y")),
    )


def case4_dynamic() -> TermSum:
    return add(
        s("eta"), s("f_t"),
        c(Fraction(1, 2), "alpha") * (prod("f_x", "f_x") + c(1, "r") * prod("f_y", "f_y")),
        c(Fraction(-1, 2)) * (c(1, "beta") * s("f_xxt") + c(1, "gamma") * s("f_yyt")),
        c(-1, "tau") * (c(1, "beta") * s("eta_xx") + c(1, "gamma") * s("eta_yy")),
    )


def case4_scalar() -> TermSum:
    return add(
        s("f_xx"), c(1, "r") * s("f_yy"), c(-1) * s("f_tt"),
        c(-1, "alpha") * ((c(2) * prod("f_x", "f_xt") + prod("f_t", "f_xx"))
                          + c(1, "r") * (c(2) * prod("f_y", "f_yt") + prod("f_t", "f_yy"))),
        c(-1, "delta") * (_hx("x") + _hx("y")),
        c(Fraction(-1, 6), "beta") * (s("f_4x") + c(1, "r^2") * s("f_4y")),
        c(Fraction(1, 2), "beta") * s("f_xxtt"), c(Fraction(1, 2), "gamma") * s("f_yytt"),
        c(Fraction(-1, 3), "gamma") * s("f_xxyy"),
        c(-1, "alpha^2") * (
            c(Fraction(3, 2)) * (prod("f_x", "f_x", "f_xx") + c(1, "r^2") * prod("f_y", "f_y", "f_yy"))
            + c(Fraction(1, 2), "r") * (prod("f_x", "f_x", "f_yy") + prod("f_y", "f_y", "f_xx"))
            + c(4) * prod("f_x", "f_y", "f_xt")),
    )


def case4_eta() -> TermSum:
    """Recovery with tau = 0 (the printed prose drops the alpha on the quadratic term;
    the displayed dynamic condition keeps it, and that is what is transcribed)."""
    return -(case4_dynamic().select(lambda e, fs, v: e[4] == 0) - s("eta"))


# lookup --------------------------------------------------------------------

_PAIRS = {
    Regime.CASE1: (case1_kinematic, case1_dynamic),
    Regime.CASE2: (case2_kinematic, case2_dynamic),
    Regime.CASE3: (case3_kinematic, case3_dynamic),
    Regime.CASE3ST: (case3_kinematic, case3st_dynamic),
    Regime.CASE4: (case4_kinematic, case4_dynamic),
}

_SCALARS = {
    Regime.CASE1: case1_scalar,
    Regime.CASE2: case2_scalar,
    Regime.CASE3: case3_scalar,
    Regime.CASE4: case4_scalar,
}

_ETAS = {
    Regime.CASE1: case1_eta,
    Regime.CASE2: case2_eta,
    Regime.CASE3: case3_eta,
    Regime.CASE4: case4_eta,
}


@lru_cache(maxsize=None)
def printed_pair(regime: Regime) -> tuple[TermSum, TermSum]:
    k, d = _PAIRS[regime]
    return k(), d()


@lru_cache(maxsize=None)
def printed_scalar(regime: Regime) -> TermSum:
    try:
        return _SCALARS[regime]()
    except KeyError:
        raise ValueError(f"no single-f equation is printed for {regime.name}") from None


@lru_cache(maxsize=None)
def printed_eta(regime: Regime) -> TermSum:
    try:
        return _ETAS[regime]()
    except KeyError:
        raise ValueError(f"no eta recovery for {regime.name}") from None
