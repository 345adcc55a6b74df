"""Exact sums of graded derivative-monomial products.

A term is ``coef * alpha^a beta^b gamma^c delta^d tau^e * prod(factors)`` where
each factor is a derivative symbol ``(base, nx, ny, nt)``.  Coefficients are
:class:`fractions.Fraction`; parameter exponents are integers and may be
negative (``gamma/beta`` is stored as ``gamma^1 beta^-1``).  Repeated factors
encode powers, so the product rule needs no special casing.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Iterator, NamedTuple

PARAMS = ("alpha", "beta", "gamma", "delta", "tau")
MAX_DERIV_ORDER = 8

Factor = tuple  # (base, nx, ny, nt)
Exps = tuple  # five ints, ordered as PARAMS
Key = tuple  # (Exps, tuple of sorted Factors)

_ZERO_EXPS = (0, 0, 0, 0, 0)
_AXES = {"x": 0, "y": 1, "t": 2}


class GradeError(ValueError):
    pass


class DerivativeOrderError(ValueError):
    pass


class Monomial(NamedTuple):
    base: str
    nx: int
    ny: int
    nt: int
    power: int

    def __str__(self):
        s = symbol_name((self.base, self.nx, self.ny, self.nt))
        return s if self.power == 1 else f"{s}^{self.power}"


def symbol_name(factor: Factor) -> str:
    base, nx, ny, nt = factor
    parts = []
    for n, ax in ((nx, "x"), (ny, "y"), (nt, "t")):
        if n == 1:
            parts.append(ax)
        elif n > 1:
            parts.append(f"{n}{ax}")
    return base if not parts else f"{base}_{''.join(parts)}"


_SYM_RE = re.compile(r"(\d*)([xyt])")


def parse_symbol(text: str) -> Factor:
    """Parse typeset derivative notation: ``f_2x2yt``, ``f_xxt``, ``h_y``, ``eta``."""
    text = text.strip()
    if text == "h_h":
        # typeset anomaly in one printed equation; kept as an opaque symbol
        return ("h_h", 0, 0, 0)
    if "_" not in text:
        return (text, 0, 0, 0)
    base, suffix = text.split("_", 1)
    counts = [0, 0, 0]
    pos = 0
    for m in _SYM_RE.finditer(suffix):
        if m.start() != pos:
            raise ValueError(f"cannot parse derivative suffix in {text!r}")
        counts[_AXES[m.group(2)]] += int(m.group(1) or 1)
        pos = m.end()
    if pos != len(suffix):
        raise ValueError(f"cannot parse derivative suffix in {text!r}")
    return (base, *counts)


# shorthand used by the printed transcriptions: A=alpha/beta etc.
_PARAM_ALIASES = {
    "alpha": (1, 0, 0, 0, 0),
    "beta": (0, 1, 0, 0, 0),
    "gamma": (0, 0, 1, 0, 0),
    "delta": (0, 0, 0, 1, 0),
    "tau": (0, 0, 0, 0, 1),
    "r": (0, -1, 1, 0, 0),
}


def parse_params(text: str, aliases: dict | None = None) -> Exps:
    """``"alpha*gamma/beta"`` or ``"A^2*G*beta^2"`` -> exponent vector."""
    table = dict(_PARAM_ALIASES)
    if aliases:
        table.update(aliases)
    exps = [0] * 5
    text = text.replace(" ", "")
    if text in ("", "1"):
        return tuple(exps)
    for sign, tok in re.findall(r"([*/]?)([^*/]+)", text):
        name, _, power = tok.partition("^")
        p = int(power) if power else 1
        if sign == "/":
            p = -p
        if name == "1":
            continue
        try:
            vec = table[name]
        except KeyError:
            raise ValueError(f"unknown parameter {name!r}") from None
        for i in range(5):
            exps[i] += p * vec[i]
    return tuple(exps)


def params_name(exps: Exps) -> str:
    num, den = [], []
    for name, e in zip(PARAMS, exps):
        if e > 0:
            num.append(name if e == 1 else f"{name}^{e}")
        elif e < 0:
            den.append(name if e == -1 else f"{name}^{-e}")
    s = "*".join(num) or "1"
    if den:
        s += "/" + "/".join(den)
    return s


def _bump(factor: Factor, axis: int) -> Factor:
    base = factor[0]
    if base in ("h", "h_h") and axis == 2:
        return None
    idx = list(factor[1:])
    idx[axis] += 1
    if sum(idx) > MAX_DERIV_ORDER:
        raise DerivativeOrderError(f"derivative order exceeds {MAX_DERIV_ORDER}: {base}{idx}")
    return (base, *idx)


class TermSum:
    """Normalized sum of terms; equal sums compare equal."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict | None = None):
        self._terms = {}
        if terms:
            for k, v in terms.items():
                if v:
                    self._terms[k] = Fraction(v)

    # construction -----------------------------------------------------
    @classmethod
    def one(cls) -> "TermSum":
        return cls({(_ZERO_EXPS, ()): Fraction(1)})

    @classmethod
    def symbol(cls, factor: Factor | str, coef=1, exps: Exps = _ZERO_EXPS) -> "TermSum":
        if isinstance(factor, str):
            factor = parse_symbol(factor)
        return cls({(tuple(exps), (factor,)): Fraction(coef)})

    @classmethod
    def term(cls, coef, params: str | Exps, *symbols, aliases=None) -> "TermSum":
        exps = parse_params(params, aliases) if isinstance(params, str) else tuple(params)
        factors = tuple(sorted(parse_symbol(s) if isinstance(s, str) else s for s in symbols))
        return cls({(exps, factors): Fraction(coef)})

    @classmethod
    def from_items(cls, items: Iterable[tuple[Exps, tuple, Fraction]]) -> "TermSum":
        out: dict = {}
        for exps, factors, coef in items:
            k = (tuple(exps), tuple(sorted(factors)))
            out[k] = out.get(k, 0) + Fraction(coef)
        return cls(out)

    # inspection -------------------------------------------------------
    def __iter__(self) -> Iterator[tuple[Exps, tuple, Fraction]]:
        for k in sorted(self._terms):
            yield k[0], k[1], self._terms[k]

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        return isinstance(other, TermSum) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def coefficient(self, params: str | Exps, *symbols) -> Fraction:
        exps = parse_params(params) if isinstance(params, str) else tuple(params)
        factors = tuple(sorted(parse_symbol(s) if isinstance(s, str) else s for s in symbols))
        return self._terms.get((exps, factors), Fraction(0))

    def bases(self) -> set:
        return {f[0] for _, fs, _ in self for f in fs}

    def max_grade(self, weights) -> int:
        return max((grade(e, weights) for e, _, _ in self), default=0)

    # arithmetic -------------------------------------------------------
    def __add__(self, other: "TermSum") -> "TermSum":
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        res = TermSum()
        res._terms = out
        return res

    def __neg__(self) -> "TermSum":
        res = TermSum()
        res._terms = {k: -v for k, v in self._terms.items()}
        return res

    def __sub__(self, other: "TermSum") -> "TermSum":
        return self + (-other)

    def scale(self, coef=1, params: str | Exps = _ZERO_EXPS) -> "TermSum":
        exps = parse_params(params) if isinstance(params, str) else tuple(params)
        c = Fraction(coef)
        res = TermSum()
        if c:
            res._terms = {
                (tuple(a + b for a, b in zip(k[0], exps)), k[1]): v * c
                for k, v in self._terms.items()
            }
        return res

    def multiply(self, other: "TermSum", weights=None, max_grade=None) -> "TermSum":
        out: dict = {}
        for (e1, f1), v1 in self._terms.items():
            for (e2, f2), v2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if max_grade is not None and grade(e, weights) > max_grade:
                    continue
                k = (e, tuple(sorted(f1 + f2)))
                out[k] = out.get(k, 0) + v1 * v2
        return TermSum(out)

    __mul__ = multiply

    def power(self, n: int, weights=None, max_grade=None) -> "TermSum":
        res = TermSum.one()
        for _ in range(n):
            res = res.multiply(self, weights, max_grade)
        return res

    def diff(self, axis: str, times: int = 1) -> "TermSum":
        """Total derivative by the product rule over every factor."""
        res = self
        for _ in range(times):
            res = res._diff1(_AXES[axis])
        return res

    def _diff1(self, ax: int) -> "TermSum":
        out: dict = {}
        for (e, fs), v in self._terms.items():
            for i, fac in enumerate(fs):
                nf = _bump(fac, ax)
                if nf is None:
                    continue
                k = (e, tuple(sorted(fs[:i] + (nf,) + fs[i + 1:])))
                out[k] = out.get(k, 0) + v
        return TermSum(out)

    def truncate(self, weights, max_grade: int) -> "TermSum":
        res = TermSum()
        res._terms = {k: v for k, v in self._terms.items() if grade(k[0], weights) <= max_grade}
        return res

    def select(self, pred: Callable[[Exps, tuple, Fraction], bool]) -> "TermSum":
        res = TermSum()
        res._terms = {k: v for k, v in self._terms.items() if pred(k[0], k[1], v)}
        return res

    def substitute(self, base: str, expr: Callable[[int, int, int], "TermSum"],
                   weights=None, max_grade=None) -> "TermSum":
        """Replace every factor with ``base`` by ``expr(nx, ny, nt)``."""
        out = TermSum()
        for e, fs, v in self:
            keep = tuple(f for f in fs if f[0] != base)
            acc = TermSum({(e, keep): v})
            for f in fs:
                if f[0] == base:
                    acc = acc.multiply(expr(*f[1:]), weights, max_grade)
            out = out + acc
        return out

    # presentation -----------------------------------------------------
    def monomials(self, factors: tuple) -> list[Monomial]:
        counts: dict = {}
        for f in factors:
            counts[f] = counts.get(f, 0) + 1
        return [Monomial(*f, p) for f, p in sorted(counts.items())]

    def format_term(self, exps, factors, coef) -> str:
        mono = " ".join(str(m) for m in self.monomials(factors)) or "1"
        sign = "-" if coef < 0 else "+"
        return f"{sign} {abs(coef)} * {params_name(exps)} * {mono}"

    def __str__(self):
        if not self._terms:
            return "0"
        return "\n".join(self.format_term(*t) for t in self)

    def __repr__(self):
        return f"TermSum({len(self)} terms)"


def grade(exps: Exps, weights) -> int:
    return sum(e * w for e, w in zip(exps, weights))


def add(*sums: TermSum) -> TermSum:
    res = TermSum()
    for s in sums:
        res = res + s
    return res


def diff_termsums(a: TermSum, b: TermSum) -> TermSum:
    """Normalized ``a - b``; empty when identical."""
    return a - b
