"""Operator monomials built from Kronecker deltas, momentum components and
integer powers of the momentum magnitude.

Index names ``i, j, k, l`` are fixed (free) components. Any other single
letter is a summation index and is contracted Einstein-style in three
dimensions. Momentum factors commute with each other, so a monomial is a
commutative product and its canonical form is well defined.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from ..errors import StructureError
from .coeffs import GENS, Poly

FREE = frozenset("ijkl")
DIM = 3
MAX_GRADE = 2
_CANON_DUMMIES = "rstuvwxyz"


def is_free(name: str) -> bool:
    return name in FREE


@dataclass(frozen=True)
class MomentumTerm:
    """``coeff * (i**imag) * hbar**hbar * prod(deltas) * prod(p_c) * |p|**pnorm_power``."""

    coeff: Poly
    deltas: tuple[tuple[str, str], ...] = ()
    components: tuple[str, ...] = ()
    pnorm_power: int = 0
    hbar: int = 0
    imag: int = 0

    @property
    def signature(self):
        return (self.hbar, self.imag, self.deltas, self.components, self.pnorm_power)

    def with_coeff(self, coeff: Poly) -> "MomentumTerm":
        return MomentumTerm(coeff, self.deltas, self.components, self.pnorm_power,
                            self.hbar, self.imag)

    def indices(self) -> list[str]:
        return [x for d in self.deltas for x in d] + list(self.components)


@dataclass(frozen=True)
class TermSum:
    """A normalized sum of :class:`MomentumTerm`.

    ``frame`` is ``"p"`` for the deformed momenta or ``"p0"`` for the
    canonical pair; the two are never mixed inside one sum.
    """

    terms: tuple[MomentumTerm, ...] = ()
    frame: str = "p"
    max_grade: int = MAX_GRADE

    def __post_init__(self):
        if self.frame not in ("p", "p0"):
            raise StructureError(f"unknown frame {self.frame!r}")

    # construction helpers -----------------------------------------------
    @classmethod
    def of(cls, terms: Iterable[MomentumTerm], frame: str = "p",
           max_grade: int = MAX_GRADE) -> "TermSum":
        return normalize(cls(tuple(terms), frame, max_grade))

    @classmethod
    def scalar(cls, c, frame: str = "p", max_grade: int = MAX_GRADE) -> "TermSum":
        c = c if isinstance(c, Poly) else Poly.const(c)
        return cls.of([MomentumTerm(c)], frame, max_grade)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other: "TermSum"):
        if self.frame != other.frame:
            raise StructureError("cannot combine sums from different momentum frames")

    def __add__(self, other: "TermSum") -> "TermSum":
        self._check(other)
        return normalize(TermSum(self.terms + other.terms, self.frame,
                                 min(self.max_grade, other.max_grade)))

    def __neg__(self) -> "TermSum":
        return TermSum(tuple(t.with_coeff(-t.coeff) for t in self.terms), self.frame,
                       self.max_grade)

    def __sub__(self, other: "TermSum") -> "TermSum":
        return self + (-other)

    def scale(self, c, hbar: int = 0, imag: int = 0) -> "TermSum":
        """Multiply by a coefficient and optionally by ``hbar**hbar * i**imag``."""
        c = c if isinstance(c, Poly) else Poly.const(c)
        return normalize(TermSum(tuple(
            MomentumTerm(t.coeff.mul(c), t.deltas, t.components, t.pnorm_power,
                         t.hbar + hbar, t.imag + imag) for t in self.terms),
            self.frame, self.max_grade))

    def __mul__(self, other: "TermSum") -> "TermSum":
        return product(self, other)

    def subs(self, values, max_grade: int | None = None) -> "TermSum":
        """Substitute polynomials for deformation symbols in every coefficient."""
        mg = self.max_grade if max_grade is None else max_grade
        return normalize(TermSum(tuple(t.with_coeff(t.coeff.subs(values, mg))
                                       for t in self.terms), self.frame, mg))

    def truncate(self, max_grade: int) -> "TermSum":
        return normalize(TermSum(self.terms, self.frame, max_grade))

    def __str__(self):
        return format_termsum(self)


# normalization --------------------------------------------------------------

def _rename(names, old, new):
    return [new if x == old else x for x in names]


def _contract(term: MomentumTerm) -> MomentumTerm | None:
    coeff = term.coeff
    deltas = [tuple(d) for d in term.deltas]
    comps = list(term.components)
    ppow = term.pnorm_power
    changed = True
    while changed:
        changed = False
        for idx, (x, y) in enumerate(deltas):
            rest = deltas[:idx] + deltas[idx + 1:]
            if x == y:
                if not is_free(x):
                    coeff = coeff * DIM
                deltas = rest
                changed = True
                break
            flat = [z for d in rest for z in d] + comps
            hits = [z for z in (x, y) if z in flat]
            if not hits:
                dangling = [z for z in (x, y) if not is_free(z)]
                if len(dangling) == 1:
                    # sum over a lone summation index of a delta gives 1
                    deltas = rest
                    changed = True
                    break
                continue
            dummies = [z for z in hits if not is_free(z)]
            elim = dummies[0] if dummies else max(hits)
            keep = y if elim == x else x
            deltas = [tuple(_rename(d, elim, keep)) for d in rest]
            comps = _rename(comps, elim, keep)
            changed = True
            break
    # repeated summation indices on momentum components: p_r p_r = p^2
    for name in sorted(set(comps)):
        if is_free(name):
            continue
        cnt = comps.count(name)
        if cnt == 2:
            comps = [c for c in comps if c != name]
            ppow += 2
        elif cnt > 2:
            raise StructureError(f"summation index {name!r} used {cnt} times")
    return MomentumTerm(coeff, tuple(deltas), tuple(comps), ppow, term.hbar, term.imag)


def _canonical_indices(term: MomentumTerm) -> MomentumTerm:
    def mask(z):
        return z if is_free(z) else "~"

    def order(deltas, comps):
        ds = sorted((tuple(sorted(d, key=mask)) for d in deltas),
                    key=lambda d: tuple(map(mask, d)))
        cs = sorted(comps, key=mask)
        return ds, cs

    ds, cs = order(term.deltas, term.components)
    seen = []
    for z in [x for d in ds for x in d] + cs:
        if not is_free(z) and z not in seen:
            seen.append(z)
    if len(seen) > len(_CANON_DUMMIES):
        raise StructureError("too many summation indices")
    table = {z: _CANON_DUMMIES[k] for k, z in enumerate(seen)}
    ds = [tuple(sorted(table.get(x, x) for x in d)) for d in ds]
    cs = [table.get(x, x) for x in cs]
    return MomentumTerm(term.coeff, tuple(sorted(ds)), tuple(sorted(cs)),
                        term.pnorm_power, term.hbar, term.imag)


def normalize(s: TermSum) -> TermSum:
    """Contract, canonicalize, collect like terms and drop zeros.

    Idempotent. Two sums denoting the same operator at the same truncation
    order compare equal with ``==`` after normalization.
    """
    acc: dict = {}
    for t in s.terms:
        t = _contract(t)
        coeff = t.coeff.truncate(s.max_grade)
        imag = t.imag % 4
        if imag >= 2:
            coeff = -coeff
            imag -= 2
        t = _canonical_indices(MomentumTerm(coeff, t.deltas, t.components,
                                            t.pnorm_power, t.hbar, imag))
        if t.coeff.is_zero():
            continue
        key = t.signature
        acc[key] = acc[key] + t.coeff if key in acc else t.coeff
    terms = [MomentumTerm(c, k[2], k[3], k[4], k[0], k[1])
             for k, c in acc.items() if not c.is_zero()]
    terms.sort(key=lambda t: t.signature)
    return TermSum(tuple(terms), s.frame, s.max_grade)


# products -------------------------------------------------------------------

def _freshen(term: MomentumTerm, tag: str, shared=frozenset()) -> MomentumTerm:
    table = {z: f"_{tag}{z}" for z in term.indices()
             if not is_free(z) and z not in shared}
    return MomentumTerm(term.coeff,
                        tuple(tuple(table.get(x, x) for x in d) for d in term.deltas),
                        tuple(table.get(x, x) for x in term.components),
                        term.pnorm_power, term.hbar, term.imag)


def multiply_terms(t1: MomentumTerm, t2: MomentumTerm, max_grade: int,
                   shared: frozenset = frozenset()) -> MomentumTerm:
    t1 = _freshen(t1, "L", shared)
    t2 = _freshen(t2, "R", shared)
    return MomentumTerm(t1.coeff.mul(t2.coeff, max_grade), t1.deltas + t2.deltas,
                        t1.components + t2.components, t1.pnorm_power + t2.pnorm_power,
                        t1.hbar + t2.hbar, t1.imag + t2.imag)


def product(s: TermSum, t: TermSum, shared: frozenset = frozenset()) -> TermSum:
    """Commutative operator product of two sums in the same frame.

    Summation indices are renamed apart before multiplying, except those
    listed in ``shared`` which are meant to be contracted across the factors.
    """
    s._check(t)
    mg = min(s.max_grade, t.max_grade)
    return normalize(TermSum(tuple(multiply_terms(a, b, mg, shared) for a in s.terms
                                   for b in t.terms), s.frame, mg))


def power(s: TermSum, k: int) -> TermSum:
    """Integer power; negative powers use the truncated geometric series.

    A negative power requires the sum to be ``1 + u`` with ``u`` of positive
    grade, which the truncation turns into a finite series.
    """
    one = TermSum.scalar(1, s.frame, s.max_grade)
    if k >= 0:
        out = one
        for _ in range(k):
            out = out * s
        return out
    u = s - one
    if any(t.coeff.constant() != 0 for t in u.terms):
        raise StructureError("inverse needs a sum of the form 1 + (positive grade)")
    inv = one
    term = one
    for _ in range(s.max_grade):
        term = term * (-u)
        inv = inv + term
    return power(inv, -k)


# text format ----------------------------------------------------------------

_FACTOR = re.compile(
    r"""^(?:
      (?P<num>\d+(?:/\d+)?)
    | (?P<ih>ih|i|h)(?:\^(?P<ihpow>\d+))?
    | d_(?P<d1>[a-z])(?P<d2>[a-z])
    | (?P<pc>p0?)_(?P<pci>[a-z])
    | (?P<pn>p0?)(?:\^(?P<pnpow>-?\d+))?
    | (?P<sym>[a-z][a-z0-9]*)(?:\^(?P<sympow>\d+))?
    )$""", re.X)


def _parse_term(text: str, sign: int):
    coeff = Poly.const(sign)
    deltas, comps = [], []
    ppow = hb = im = 0
    frames = set()
    for fac in text.split("*"):
        fac = fac.strip()
        m = _FACTOR.match(fac)
        if not m:
            raise StructureError(f"cannot parse factor {fac!r}")
        if m["num"]:
            coeff = coeff * Fraction(m["num"])
        elif m["ih"]:
            k = int(m["ihpow"] or 1)
            im += k * ("i" in m["ih"])
            hb += k * ("h" in m["ih"])
        elif m["d1"]:
            deltas.append((m["d1"], m["d2"]))
        elif m["pc"]:
            frames.add(m["pc"])
            comps.append(m["pci"])
        elif m["pn"]:
            frames.add(m["pn"])
            ppow += int(m["pnpow"] or 1)
        else:
            name = m["sym"]
            if name not in GENS:
                raise StructureError(f"unknown symbol {name!r}")
            coeff = coeff * Poly.var(name, int(m["sympow"] or 1))
    return MomentumTerm(coeff, tuple(deltas), tuple(comps), ppow, hb, im), frames


def parse_termsum(text: str, max_grade: int = MAX_GRADE) -> TermSum:
    """Parse expressions such as ``"a*p0*p0_j"`` or ``"ih*d_ij*p^2 - 2*b*p_i*p_j"``.

    Factors: rational numbers, ``i``/``h``/``ih`` (with optional ``^k``),
    deformation symbols with ``^k``, deltas ``d_xy``, components ``p_x`` or
    ``p0_x`` and magnitudes ``p^k`` or ``p0^k``.
    """
    src = text.replace(" ", "")
    if not src or src == "0":
        return TermSum((), "p", max_grade)
    terms, frames = [], set()
    for chunk in re.split(r"(?<!\^)(?=[+-])", src):
        if not chunk:
            continue
        sign, body = (chunk[0], chunk[1:]) if chunk[0] in "+-" else ("+", chunk)
        t, f = _parse_term(body, -1 if sign == "-" else 1)
        terms.append(t)
        frames |= f
    if len(frames) > 1:
        raise StructureError("expression mixes p and p0 factors")
    return TermSum.of(terms, frames.pop() if frames else "p", max_grade)


def _format_factors(t: MomentumTerm, frame: str):
    out = []
    if t.imag and t.hbar:
        out.append("ih" if t.hbar == 1 else f"i*h^{t.hbar}")
    elif t.imag:
        out.append("i")
    elif t.hbar:
        out.append("h" if t.hbar == 1 else f"h^{t.hbar}")
    out += [f"d_{x}{y}" for x, y in t.deltas]
    out += [f"{frame}_{c}" for c in t.components]
    if t.pnorm_power == 1:
        out.append(frame)
    elif t.pnorm_power:
        out.append(f"{frame}^{t.pnorm_power}")
    return out


def format_termsum(s: TermSum) -> str:
    """Inverse of :func:`parse_termsum`; one printed term per coefficient monomial."""
    if s.is_zero():
        return "0"
    chunks = []
    for t in s.terms:
        ops = _format_factors(t, s.frame)
        for exps, c in t.coeff.sorted_terms():
            mono = [f"{g}^{e}" if e > 1 else g for g, e in zip(GENS, exps) if e]
            facs = ([str(abs(c))] if abs(c) != 1 or not (mono or ops) else []) + mono + ops
            chunks.append(("-" if c < 0 else "+") + "*".join(facs))
    text = "".join(chunks)
    return text[1:] if text.startswith("+") else text
