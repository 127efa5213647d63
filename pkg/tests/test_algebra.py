import re

import pytest
from hypothesis import given, settings, strategies as st

from gupkernel.algebra import (commutator_q, commutator_qi_pinv, commutator_qi_pj,
                               commutator_qi_pnorm, format_termsum, jacobi_residual,
                               match_representation, normalize, parse_termsum, product,
                               representation_commutator, solve_jacobi_constraints,
                               target_algebra)
from gupkernel.algebra.coeffs import Poly

ZERO_DEFORMATION = {"alpha1": 0, "alpha2": 0, "beta1": 0, "beta2": 0}


def same(a, b):
    return normalize(a) == normalize(b)


def parsed(text, max_grade=2):
    return normalize(parse_termsum(text, max_grade))


def test_contraction_and_collection():
    assert same(parse_termsum("d_ij*p_j"), parse_termsum("p_i"))
    assert same(parse_termsum("p_i*p_j+p_j*p_i"), parse_termsum("2*p_i*p_j"))
    assert normalize(parse_termsum("alpha1*d_jk*p_i-alpha1*d_jk*p_i")).is_zero()


def test_format_parse_round_trip():
    s = jacobi_residual()
    assert same(parse_termsum(format_termsum(s)), s)


def test_general_bracket():
    want = parsed("ih*d_ij+alpha1*ih*d_ij*p+alpha2*ih*p_i*p_j*p^-1+beta1*ih*d_ij*p^2"
                  "+beta2*ih*p_i*p_j")
    assert commutator_qi_pj() == want
    assert commutator_qi_pj().subs(ZERO_DEFORMATION) == parsed("ih*d_ij")


def test_repeated_free_index_stays_uncontracted():
    s = commutator_qi_pj("i", "i")
    text = format_termsum(s)
    assert "p_i*p_i*p^-1" in text
    assert s != normalize(parse_termsum("ih+alpha1*ih*p+beta1*ih*p^2+alpha2*ih*p+beta2*ih*p^2"))


def test_commutator_with_magnitude():
    assert commutator_qi_pnorm() == parsed("ih*p_i*p^-1+alpha1*ih*p_i+alpha2*ih*p_i", 1)
    canon = commutator_qi_pnorm().subs({"alpha1": 0, "alpha2": 0})
    assert canon == parsed("ih*p_i*p^-1", 1)


def test_magnitude_commutator_dummy_independence():
    r = commutator_q("i", parse_termsum("p_r*p_r*p^-1", 1))
    s = commutator_q("i", parse_termsum("p_s*p_s*p^-1", 1))
    assert r == s == commutator_qi_pnorm()


def test_commutator_with_inverse_magnitude():
    assert commutator_qi_pinv() == parsed("-ih*p_i*p^-3-alpha1*ih*p_i*p^-2-alpha2*ih*p_i*p^-2", 1)
    assert commutator_qi_pinv().subs({"alpha1": 0, "alpha2": 0}) == parsed("-ih*p_i*p^-3", 1)


def test_product_rule_on_p_times_inverse():
    p, pinv = parse_termsum("p", 1), parse_termsum("p^-1", 1)
    total = product(commutator_qi_pnorm(), pinv) + product(p, commutator_qi_pinv())
    assert normalize(total).is_zero()


def test_jacobi_residual_structure():
    want = parsed("alpha1*h^2*d_jk*p_i*p^-1-alpha2*h^2*d_jk*p_i*p^-1"
                  "+alpha1^2*h^2*d_jk*p_i+2*beta1*h^2*d_jk*p_i-beta2*h^2*d_jk*p_i"
                  "-alpha1*h^2*d_ik*p_j*p^-1+alpha2*h^2*d_ik*p_j*p^-1"
                  "-alpha1^2*h^2*d_ik*p_j-2*beta1*h^2*d_ik*p_j+beta2*h^2*d_ik*p_j")
    assert jacobi_residual() == want


def test_jacobi_residual_vanishes_on_solution_and_canonical_algebra():
    a = Poly.var("alpha")
    sol = {"alpha1": a, "alpha2": a, "beta2": 2 * Poly.var("beta1") + a * a}
    assert normalize(jacobi_residual().subs(sol)).is_zero()
    assert normalize(jacobi_residual().subs(ZERO_DEFORMATION)).is_zero()


def _swap_ij(text):
    text = re.sub(r"d_([a-z])([a-z])", lambda m: "d_" + m[1].translate(str.maketrans("ij", "ji"))
                  + m[2].translate(str.maketrans("ij", "ji")), text)
    return re.sub(r"p_([ij])", lambda m: "p_" + ("j" if m[1] == "i" else "i"), text)


def test_jacobi_residual_antisymmetric_in_i_j():
    r = jacobi_residual()
    swapped = parse_termsum(_swap_ij(format_termsum(r)))
    assert normalize(swapped + r).is_zero()


def test_constraint_solution_strings():
    cons = solve_jacobi_constraints(jacobi_residual())
    assert cons.strings() == ["alpha1=alpha2", "beta2=2*beta1+alpha1^2"]
    assert cons.to_dict() == {"constraints": ["alpha1=alpha2", "beta2=2*beta1+alpha1^2"]}


def test_constraints_of_partial_and_empty_residuals():
    only_inverse = parse_termsum("alpha1*h^2*d_jk*p_i*p^-1-alpha2*h^2*d_jk*p_i*p^-1"
                                 "-alpha1*h^2*d_ik*p_j*p^-1+alpha2*h^2*d_ik*p_j*p^-1")
    assert solve_jacobi_constraints(normalize(only_inverse)).strings() == ["alpha1=alpha2"]
    assert len(solve_jacobi_constraints(parse_termsum("0"))) == 0


def test_representation_commutator():
    want = parsed("ih*d_ij+a*ih*d_ij*p+b*ih*d_ij*p^2-a^2*ih*d_ij*p^2"
                  "+a*ih*p_i*p_j*p^-1+2*b*ih*p_i*p_j-a^2*ih*p_i*p_j")
    assert representation_commutator() == want
    zero = representation_commutator(a=Poly.const(0), b=Poly.const(0))
    assert zero == parsed("ih*d_ij")


def test_representation_linear_terms_match_target():
    rep = representation_commutator(a=-Poly.var("alpha"), b=Poly.const(0)).truncate(1)
    assert rep == target_algebra().truncate(1)


@pytest.mark.parametrize("n,b", [(None, "(n+1)*alpha^2"), (1, "2*alpha^2"), (4, "5*alpha^2")])
def test_representation_matching(n, b):
    sol = match_representation(n).solved()
    assert sol == {"a": "-alpha", "b": b}


# random term sums -----------------------------------------------------------

SYMS = ["", "alpha1*", "alpha2*", "beta1*", "a*", "alpha1^2*", "b*"]
FACTORS = ["p_j", "p_k", "d_jk", "d_jr*p_r", "p_r*p_r", "d_rs*p_r*p_s", "p^-1", "p", "p^2",
           "d_rk*p_r*p_j"]


@st.composite
def termsums(draw, n_max=4):
    n = draw(st.integers(1, n_max))
    parts = []
    for _ in range(n):
        sign = draw(st.sampled_from(["+", "-"]))
        num = draw(st.integers(1, 5))
        sym = draw(st.sampled_from(SYMS))
        facs = draw(st.lists(st.sampled_from(FACTORS), min_size=1, max_size=3))
        # each factor gets its own pair of summation letters
        facs = [f.replace("r", d1).replace("s", d2)
                for f, (d1, d2) in zip(facs, [("r", "s"), ("t", "u"), ("v", "w")])]
        parts.append(f"{sign}{num}*{sym}{'*'.join(facs)}")
    return parse_termsum("".join(parts))


@settings(max_examples=1000, deadline=None)
@given(termsums())
def test_normalize_idempotent(s):
    once = normalize(s)
    assert normalize(once) == once


@settings(max_examples=100, deadline=None)
@given(termsums(), termsums())
def test_commutator_bilinear(s, t):
    lhs = commutator_q("i", normalize(s + t))
    rhs = commutator_q("i", s) + commutator_q("i", t)
    assert normalize(lhs - rhs).is_zero()


MONOS = ["p_j", "p_k*p^-1", "alpha1*p", "d_jk*p_r*p_r", "beta1*p_j", "a*p^2", "p_r*p_r*p_k"]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(MONOS), st.sampled_from(MONOS))
def test_commutator_product_rule(x, y):
    s, t = parse_termsum(x), parse_termsum(y)
    lhs = commutator_q("i", product(s, t))
    rhs = product(commutator_q("i", s), t) + product(s, commutator_q("i", t))
    assert normalize(lhs - rhs).is_zero()
