"""Commutators of the deformed algebra, the Jacobi constraint and the
matching of a momentum representation onto the algebra."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import InconsistencyError, StructureError
from .coeffs import Poly, format_poly
from .terms import MAX_GRADE, MomentumTerm, TermSum, normalize, power, product

_A1, _A2 = Poly.var("alpha1"), Poly.var("alpha2")
_B1, _B2 = Poly.var("beta1"), Poly.var("beta2")
_ONE = Poly.const(1)
_DUMMY = "_D"


def _term(coeff, deltas=(), comps=(), ppow=0, hbar=0, imag=0):
    return MomentumTerm(coeff if isinstance(coeff, Poly) else Poly.const(coeff),
                        tuple(deltas), tuple(comps), ppow, hbar, imag)


def theta(i: str, j: str, max_grade: int = MAX_GRADE) -> TermSum:
    """The bracket ``[q_i, p_j] / (i hbar)`` of the most general algebra."""
    return normalize(_raw_theta(i, j, max_grade))


def _raw_theta(i, j, max_grade):
    return TermSum((
        _term(_ONE, [(i, j)]),
        _term(_A1, [(i, j)], ppow=1),
        _term(_A2, comps=(i, j), ppow=-1),
        _term(_B1, [(i, j)], ppow=2),
        _term(_B2, comps=(i, j)),
    ), "p", max_grade)


def _canonical_theta(i: str, j: str, frame: str, max_grade: int) -> TermSum:
    return TermSum((_term(_ONE, [(i, j)]),), frame, max_grade)


def derivative(s: TermSum, index: str) -> TermSum:
    """Partial derivative with respect to the momentum component ``p_index``."""
    return normalize(_raw_derivative(s, index))


def _raw_derivative(s: TermSum, index: str) -> TermSum:
    # left unnormalized so that ``index`` keeps its name for a later contraction
    out = []
    for t in s.terms:
        comps = list(t.components)
        for pos, c in enumerate(comps):
            rest = comps[:pos] + comps[pos + 1:]
            out.append(MomentumTerm(t.coeff, t.deltas + ((index, c),), tuple(rest),
                                    t.pnorm_power, t.hbar, t.imag))
        if t.pnorm_power:
            out.append(MomentumTerm(t.coeff * t.pnorm_power, t.deltas,
                                    tuple(comps) + (index,), t.pnorm_power - 2,
                                    t.hbar, t.imag))
    return TermSum(tuple(out), s.frame, s.max_grade)


def commutator_q(i: str, s: TermSum, canonical: bool | None = None) -> TermSum:
    """``[q_i, F(p)]`` computed as ``i hbar Theta_il dF/dp_l``.

    Sums in the ``p0`` frame always use the canonical rule
    ``[q0_i, p0_j] = i hbar delta_ij``; sums in the ``p`` frame use the
    deformed bracket unless ``canonical`` is set.
    """
    if canonical is None:
        canonical = s.frame == "p0"
    th = (_canonical_theta(i, _DUMMY, s.frame, s.max_grade) if canonical
          else _raw_theta(i, _DUMMY, s.max_grade))
    return product(th, _raw_derivative(s, _DUMMY), frozenset([_DUMMY])).scale(1, hbar=1, imag=1)


def commutator_qi_pj(i: str = "i", j: str = "j", max_grade: int = MAX_GRADE) -> TermSum:
    """``i hbar (d_ij + alpha1 p d_ij + alpha2 p_i p_j / p + beta1 p^2 d_ij + beta2 p_i p_j)``."""
    return theta(i, j, max_grade).scale(1, hbar=1, imag=1)


def commutator_qi_pnorm(i: str = "i", max_grade: int = 1) -> TermSum:
    """``[q_i, p]``; truncated at first order by default, as in the derivation."""
    return commutator_q(i, TermSum.of([_term(_ONE, ppow=1)], "p", max_grade))


def commutator_qi_pinv(i: str = "i", max_grade: int = 1) -> TermSum:
    """``[q_i, 1/p]``; truncated at first order by default."""
    return commutator_q(i, TermSum.of([_term(_ONE, ppow=-1)], "p", max_grade))


def jacobi_residual(max_grade: int = MAX_GRADE) -> TermSum:
    """``[[q_j, p_k], q_i] + [[p_k, q_i], q_j]`` for the general algebra.

    With ``[q_i, q_j] = 0`` the first Jacobi term vanishes and the other two
    reduce to ``[q_j, [q_i, p_k]] - [q_i, [q_j, p_k]]``.
    """
    inner_jk = commutator_qi_pj("j", "k", max_grade)
    inner_ik = commutator_qi_pj("i", "k", max_grade)
    return commutator_q("j", inner_ik) - commutator_q("i", inner_jk)


@dataclass(frozen=True)
class ConstraintSet:
    """Polynomial equations ``poly == 0`` in primitive form.

    ``solution`` optionally records solved values for unknowns.
    """

    equations: tuple[Poly, ...] = ()
    solution: tuple[tuple[str, Poly], ...] = ()

    @classmethod
    def build(cls, polys, solution=()) -> "ConstraintSet":
        seen = []
        for p in polys:
            p = p.primitive()
            if not p.is_zero() and p not in seen:
                seen.append(p)
        return cls(tuple(seen), tuple(solution))

    def strings(self) -> list[str]:
        return [equation_str(p) for p in self.equations]

    def solved(self) -> dict[str, str]:
        return {k: format_poly(v) for k, v in self.solution}

    def to_dict(self) -> dict:
        doc = {"constraints": self.strings()}
        if self.solution:
            doc["solution"] = self.solved()
        return doc

    def __len__(self):
        return len(self.equations)


def equation_str(p: Poly) -> str:
    """Render ``p == 0`` as ``lead=rest`` with the leading monomial on the left."""
    lead = p.leading()
    lhs = Poly({lead: p.terms[lead]})
    rhs = lhs - p
    return f"{format_poly(lhs)}={format_poly(rhs)}"


def _structure_coefficients(residual: TermSum) -> dict[int, Poly]:
    """Coefficient of ``hbar^2 p^k (p_i d_jk - p_j d_ik)`` for each k."""
    plus, minus = {}, {}
    for t in residual.terms:
        if t.hbar != 2 or t.imag != 0:
            raise StructureError(f"unexpected hbar/i power in term {t}")
        if t.deltas == (("j", "k"),) and t.components == ("i",):
            plus[t.pnorm_power] = t.coeff
        elif t.deltas == (("i", "k"),) and t.components == ("j",):
            minus[t.pnorm_power] = t.coeff
        else:
            raise StructureError(f"unexpected structure {t.deltas} {t.components}")
    for k in set(plus) | set(minus):
        if plus.get(k, Poly()) != -minus.get(k, Poly()):
            raise StructureError(f"residual is not antisymmetric in i, j at p^{k}")
    return plus


def solve_jacobi_constraints(residual: TermSum) -> ConstraintSet:
    """Each independent power of ``p`` in the residual must vanish separately."""
    coeffs = _structure_coefficients(residual)
    return ConstraintSet.build([coeffs[k] for k in sorted(coeffs)])


def momentum_map(a=None, b=None, max_grade: int = MAX_GRADE) -> TermSum:
    """``p_j = p0_j (1 + a p0 + b p0^2)`` in the canonical frame."""
    a = Poly.var("a") if a is None else Poly.const(a) if not isinstance(a, Poly) else a
    b = Poly.var("b") if b is None else Poly.const(b) if not isinstance(b, Poly) else b
    return TermSum.of([_term(_ONE, comps=("j",)), _term(a, comps=("j",), ppow=1),
                       _term(b, comps=("j",), ppow=2)], "p0", max_grade)


def _inverse_scale(a: Poly, b: Poly, max_grade: int) -> TermSum:
    """g with p0 = p g(p), found by iterating g = 1 / h(p g) from g = 1."""
    g = TermSum.scalar(1, "p", max_grade)
    p = TermSum.of([_term(_ONE, ppow=1)], "p", max_grade)
    for _ in range(max_grade + 1):
        x = p * g
        h = TermSum.scalar(1, "p", max_grade) + x.scale(a) + (x * x).scale(b)
        g = power(h, -1)
    return g


def to_deformed(s: TermSum, a=None, b=None) -> TermSum:
    """Rewrite a canonical-frame sum in terms of the deformed momenta."""
    if s.frame != "p0":
        raise StructureError("to_deformed expects a p0-frame sum")
    a = Poly.var("a") if a is None else a
    b = Poly.var("b") if b is None else b
    g = _inverse_scale(a, b, s.max_grade)
    out = TermSum((), "p", s.max_grade)
    for t in s.terms:
        base = TermSum.of([MomentumTerm(t.coeff, t.deltas, t.components, t.pnorm_power,
                                        t.hbar, t.imag)], "p", s.max_grade)
        out = out + base * power(g, len(t.components) + t.pnorm_power)
    return out


def representation_commutator(a=None, b=None, max_grade: int = MAX_GRADE) -> TermSum:
    """``[q_i, p_j]`` for ``p_j = p0_j(1 + a p0 + b p0^2)``, expressed in ``p``."""
    pj = momentum_map(a, b, max_grade)
    return to_deformed(commutator_q("i", pj), a, b)


def target_algebra(n=None, max_grade: int = MAX_GRADE) -> TermSum:
    """The general bracket with alpha1 = alpha2 = -alpha, beta1 = n alpha^2,
    beta2 = (2n + 1) alpha^2."""
    al = Poly.var("alpha")
    nn = Poly.var("n") if n is None else Poly.const(n)
    vals = {"alpha1": -al, "alpha2": -al, "beta1": nn * al * al,
            "beta2": (2 * nn + 1) * al * al}
    return commutator_qi_pj("i", "j", max_grade).subs(vals)


def _solve_linear(eqs: list[Poly], unknowns=("a", "b")):
    """Successively eliminate unknowns that appear linearly with a constant coefficient."""
    solution = {}
    pending = list(eqs)
    for name in unknowns:
        for e in pending:
            c1 = e.coefficient_in(name, 1)
            if c1.is_zero() or c1.symbols() or any(
                    not e.coefficient_in(name, k).is_zero() for k in range(2, 5)):
                continue
            rest = e - c1 * Poly.var(name)
            value = rest * Fraction(-1) * (1 / c1.constant())
            solution[name] = value
            pending = [x.subs({name: value}) for x in pending]
            break
        else:
            raise InconsistencyError(f"cannot isolate {name}")
    leftover = [x for x in pending if not x.is_zero()]
    if leftover:
        raise InconsistencyError(f"unsatisfied equations: {[str(x) for x in leftover]}")
    return solution


def match_representation(n=None, max_grade: int = MAX_GRADE) -> ConstraintSet:
    """Coefficient equations making the representation reproduce the target algebra.

    Returns the primitive equations together with the solved values of
    ``a`` and ``b``; with symbolic ``n`` the latter is ``(n+1)*alpha^2``.
    """
    diff = representation_commutator(max_grade=max_grade) - target_algebra(n, max_grade)
    eqs = [t.coeff for t in diff.terms]
    solution = _solve_linear([e.truncate(max_grade) for e in eqs])
    return ConstraintSet.build(eqs, tuple(sorted(solution.items())))
