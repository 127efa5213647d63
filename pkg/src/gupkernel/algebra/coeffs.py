"""Exact graded polynomials in the formal deformation symbols.

Each symbol carries a grade: alpha-like symbols count 1, beta-like symbols
count 2, the integer ``n`` counts 0. Products may be truncated above a
maximum grade, which is how the engine implements "up to second order".
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

GENS = ("b", "beta2", "beta1", "a", "alpha1", "alpha2", "alpha", "n")
GRADE = (2, 2, 2, 1, 1, 1, 1, 0)
_INDEX = {g: k for k, g in enumerate(GENS)}
_ZERO_EXP = (0,) * len(GENS)


def _grade(exps) -> int:
    return sum(e * g for e, g in zip(exps, GRADE))


class Poly:
    """Immutable polynomial with :class:`~fractions.Fraction` coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, Fraction] | None = None):
        clean = {}
        for exps, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(exps)] = clean.get(tuple(exps), 0) + c
        self._terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly":
        return cls({_ZERO_EXP: Fraction(c)})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Poly":
        exps = [0] * len(GENS)
        exps[_INDEX[name]] = power
        return cls({tuple(exps): Fraction(1)})

    # inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree_grade(self) -> int:
        return max((_grade(e) for e in self._terms), default=0)

    def constant(self) -> Fraction:
        return self._terms.get(_ZERO_EXP, Fraction(0))

    def symbols(self) -> set[str]:
        return {GENS[k] for e in self._terms for k, x in enumerate(e) if x}

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _lift(x) -> "Poly":
        return x if isinstance(x, Poly) else Poly.const(x)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def mul(self, other, max_grade: int | None = None) -> "Poly":
        """Product, dropping monomials whose grade exceeds ``max_grade``."""
        other = self._lift(other)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                if max_grade is not None and _grade(e) > max_grade:
                    continue
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(out)

    def __mul__(self, other):
        return self.mul(other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def truncate(self, max_grade: int) -> "Poly":
        return Poly({e: c for e, c in self._terms.items() if _grade(e) <= max_grade})

    def subs(self, values: Mapping[str, "Poly | int | Fraction"],
             max_grade: int | None = None) -> "Poly":
        """Substitute polynomials for symbols."""
        vals = {_INDEX[k]: self._lift(v) for k, v in values.items()}
        out = Poly()
        for e, c in self._terms.items():
            term = Poly.const(c)
            rest = list(e)
            for k, v in vals.items():
                if rest[k]:
                    term = term.mul(v ** rest[k], max_grade)
                    rest[k] = 0
            term = term.mul(Poly({tuple(rest): 1}), max_grade)
            out = out + term
        return out

    def coefficient_in(self, name: str, power: int) -> "Poly":
        """Coefficient polynomial of ``name**power`` (other symbols kept)."""
        k = _INDEX[name]
        out = {}
        for e, c in self._terms.items():
            if e[k] == power:
                e2 = list(e)
                e2[k] = 0
                out[tuple(e2)] = c
        return Poly(out)

    # normal form for equations ----------------------------------------------
    def _order_key(self, exps):
        return (_grade(exps), exps)

    def leading(self):
        """Leading monomial: highest grade, ties broken lexicographically in GENS order."""
        return max(self._terms, key=self._order_key)

    def primitive(self) -> "Poly":
        """Scale so coefficients are coprime integers with positive leading coefficient."""
        if self.is_zero():
            return self
        from math import gcd, lcm
        den = lcm(*(c.denominator for c in self._terms.values()))
        nums = [int(c * den) for c in self._terms.values()]
        g = gcd(*nums)
        scale = Fraction(den, g)
        if self._terms[self.leading()] < 0:
            scale = -scale
        return Poly({e: c * scale for e, c in self._terms.items()})

    # printing -------------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: self._order_key(kv[0]),
                      reverse=True)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def _monomial_str(exps) -> str:
    parts = []
    for name, e in zip(GENS, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _factor_n_linear(p: Poly) -> str | None:
    """Render ``(c1*n+c0)*m`` when p = (c1 n + c0) * m for one monomial m."""
    k = _INDEX["n"]
    rests = {}
    for e, c in p.terms.items():
        if e[k] > 1:
            return None
        base = list(e)
        base[k] = 0
        rests.setdefault(tuple(base), {})[e[k]] = c
    if len(rests) != 1 or len(p.terms) != 2:
        return None
    (base, cs), = rests.items()
    c1, c0 = cs.get(1, 0), cs.get(0, 0)
    if c1 == 0 or c0 == 0:
        return None
    inner = f"{_num(c1, True)}n{'+' if c0 > 0 else '-'}{_num(abs(c0))}"
    mono = _monomial_str(base)
    return f"({inner})*{mono}" if mono else f"({inner})"


def _num(c: Fraction, as_factor: bool = False) -> str:
    s = str(c)
    if as_factor:
        if c == 1:
            return ""
        if c == -1:
            return "-"
        return s + "*"
    return s


def format_poly(p: Poly) -> str:
    """Plain-text rendering such as ``2*beta1+alpha1^2`` or ``(n+1)*alpha^2``."""
    if p.is_zero():
        return "0"
    factored = _factor_n_linear(p)
    if factored is not None:
        return factored
    out = ""
    for exps, c in p.sorted_terms():
        mono = _monomial_str(exps)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        out += (("-" if c < 0 else "") + body) if not out else sign + body
    return out


def poly_from_symbols(expr: Iterable[tuple[Fraction, dict[str, int]]]) -> Poly:
    """Helper: build from ``[(coef, {"alpha": 2}), ...]``."""
    out = {}
    for c, powers in expr:
        e = [0] * len(GENS)
        for name, k in powers.items():
            e[_INDEX[name]] = k
        out[tuple(e)] = out.get(tuple(e), 0) + Fraction(c)
    return Poly(out)
