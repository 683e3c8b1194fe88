from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkrlab.exterior import (
    FORM, POLYVECTOR, ExteriorElement, ExteriorError, OddSpace, check_innermax,
    contract_form_into_poly, contract_poly_into_form, innermax_exhaustive, innermax_sides,
    top_form, wedge,
)


def form(sp, *terms):
    return ExteriorElement.from_dict(sp, FORM, dict(terms))


def poly(sp, *terms):
    return ExteriorElement.from_dict(sp, POLYVECTOR, dict(terms))


# -- bitmask oracle: fermionic operators on the 2^n basis ------------------------------

def _below(mask, i):
    return bin(mask & ((1 << (i - 1)) - 1)).count("1")


def to_state(el):
    out = {}
    for idx, c in el.terms.items():
        m = 0
        for i in idx:
            m |= 1 << (i - 1)
        out[m] = c
    return out


def from_state(sp, variance, st_):
    terms = {}
    for m, c in st_.items():
        idx = tuple(i for i in range(1, sp.dim + 1) if m >> (i - 1) & 1)
        terms[idx] = c
    return ExteriorElement.from_dict(sp, variance, terms)


def annihilate(i, state, extra_sign=1):
    out = {}
    for m, c in state.items():
        if m >> (i - 1) & 1:
            nm = m ^ (1 << (i - 1))
            out[nm] = out.get(nm, 0) + extra_sign * (-1) ** _below(m, i) * c
    return {k: v for k, v in out.items() if v}


def create(i, state):
    out = {}
    for m, c in state.items():
        if not m >> (i - 1) & 1:
            nm = m | (1 << (i - 1))
            out[nm] = out.get(nm, 0) + (-1) ** _below(m, i) * c
    return {k: v for k, v in out.items() if v}


def oracle_contract(outer, inner, extra_sign):
    total = {}
    for idx, c in outer.terms.items():
        s = to_state(inner)
        for i in reversed(idx):
            s = annihilate(i, s, extra_sign)
        for k, v in s.items():
            total[k] = total.get(k, 0) + c * v
    return {k: v for k, v in total.items() if v}


def oracle_wedge(a, b):
    total = {}
    for idx, c in a.terms.items():
        s = to_state(b)
        for i in reversed(idx):
            s = create(i, s)
        for k, v in s.items():
            total[k] = total.get(k, 0) + c * v
    return {k: v for k, v in total.items() if v}


coeff = st.integers(-3, 3)


@st.composite
def element(draw, n, variance):
    sp = OddSpace(n)
    terms = {m: draw(coeff) for m in sp.monomials() if draw(st.booleans())}
    return ExteriorElement.from_dict(sp, variance, terms)


# -- examples ---------------------------------------------------------------------

def test_wedge_examples():
    sp = OddSpace(4)
    e = lambda *i: ExteriorElement.monomial(sp, FORM, i)
    assert wedge(e(1), e(1)).is_zero()
    assert wedge(e(2), e(1)) == form(sp, ((1, 2), -1))
    assert wedge(e(1, 2), e(3, 4)) == form(sp, ((1, 2, 3, 4), 1))


def test_poly_into_form_examples():
    sp = OddSpace(2)
    assert contract_poly_into_form(poly(sp, ((1,), 1)), form(sp, ((1, 2), 1))) == form(sp, ((2,), 1))
    w = ExteriorElement.monomial(sp, POLYVECTOR, (2, 1))
    assert contract_poly_into_form(w, form(sp, ((1, 2), 1))) == form(sp, ((), 1))
    assert contract_poly_into_form(poly(sp, ((1,), 1)), form(sp, ((), 1))).is_zero()


def test_form_into_poly_examples():
    sp = OddSpace(2)
    w = ExteriorElement.monomial(sp, POLYVECTOR, (2, 1))
    assert contract_form_into_poly(form(sp, ((2,), 1)), w) == poly(sp, ((1,), -1))
    assert contract_form_into_poly(form(sp, ((1,), 1)), poly(sp, ((1,), 1))) == poly(sp, ((), -1))
    w = poly(sp, ((1, 2), 3), ((1,), 5))
    assert contract_form_into_poly(ExteriorElement.one(sp, FORM), w) == w


def test_innermax_worked_instance():
    sp = OddSpace(2)
    beta = top_form(sp)
    bp = form(sp, ((2,), 1))
    w = ExteriorElement.monomial(sp, POLYVECTOR, (2, 1))
    lhs, rhs = innermax_sides(beta, bp, w)
    assert lhs == rhs == form(sp, ((2,), 1))
    assert check_innermax(sp, beta, bp, w)


def test_innermax_ell_zero_reduces():
    sp = OddSpace(3)
    beta = top_form(sp, 2)
    one = ExteriorElement.one(sp, FORM)
    for m in sp.monomials():
        w = poly(sp, (m, 1))
        lhs, rhs = innermax_sides(beta, one, w)
        assert lhs == rhs == contract_poly_into_form(w, beta)


@pytest.mark.parametrize("n,count", [(1, 4), (2, 16), (3, 64), (4, 256)])
def test_innermax_exhaustive(n, count):
    got, fails = innermax_exhaustive(n)
    assert got == count and fails == []


def test_errors():
    sp, sp3 = OddSpace(2), OddSpace(3)
    with pytest.raises(ExteriorError):
        OddSpace(0)
    with pytest.raises(ExteriorError):
        wedge(form(sp, ((1,), 1)), poly(sp, ((1,), 1)))
    with pytest.raises(ExteriorError):
        wedge(form(sp, ((1,), 1)), form(sp3, ((1,), 1)))
    with pytest.raises(ExteriorError):
        contract_poly_into_form(form(sp, ((1,), 1)), form(sp, ((1,), 1)))
    with pytest.raises(ExteriorError):
        ExteriorElement.from_dict(sp, FORM, {(2, 1): 1})
    with pytest.raises(ExteriorError):
        check_innermax(sp, form(sp, ((1,), 1)), form(sp, ((1,), 1)), poly(sp, ((1,), 1)))


# -- invariants ---------------------------------------------------------------------

def test_wedge_associative_and_graded_commutative_n5():
    sp = OddSpace(5)
    monos = [ExteriorElement.from_dict(sp, FORM, {m: 1}) for m in sp.monomials()]
    for a in monos:
        for b in monos:
            ab = wedge(a, b)
            assert ab == wedge(b, a).scale((-1) ** (a.degree() * b.degree()))
    small = [m for m in monos if m.degree() <= 2]
    for a in small:
        for b in small:
            for c in small:
                assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


def test_degree_one_graded_symmetry():
    sp = OddSpace(4)
    for i in range(1, 5):
        for j in range(1, 5):
            a = contract_poly_into_form(poly(sp, ((i,), 1)), form(sp, ((j,), 1)))
            b = contract_form_into_poly(form(sp, ((j,), 1)), poly(sp, ((i,), 1)))
            assert a.coefficient(()) == -b.coefficient(())


def test_contraction_is_module_action_n4():
    sp = OddSpace(4)
    monos = sp.monomials()
    for u in monos:
        for v in monos:
            uv = wedge(poly(sp, (u, 1)), poly(sp, (v, 1)))
            for b in monos:
                beta = form(sp, (b, 1))
                lhs = contract_poly_into_form(uv, beta)
                rhs = contract_poly_into_form(poly(sp, (u, 1)), contract_poly_into_form(poly(sp, (v, 1)), beta))
                assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(element(4, POLYVECTOR), element(4, FORM))
def test_poly_into_form_matches_fermion_oracle(w, beta):
    assert to_state(contract_poly_into_form(w, beta)) == oracle_contract(w, beta, 1)


@settings(max_examples=60, deadline=None)
@given(element(4, FORM), element(4, POLYVECTOR))
def test_form_into_poly_matches_fermion_oracle(bp, w):
    assert to_state(contract_form_into_poly(bp, w)) == oracle_contract(bp, w, -1)


@settings(max_examples=60, deadline=None)
@given(element(4, FORM), element(4, FORM))
def test_wedge_matches_fermion_oracle(a, b):
    assert to_state(wedge(a, b)) == oracle_wedge(a, b)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), element(3, POLYVECTOR), st.integers(1, 4))
def test_innermax_on_combinations(ell, w, k):
    sp = OddSpace(3)
    bp = ExteriorElement.from_dict(sp, FORM, {m: i + 1 for i, m in enumerate(combinations(range(1, 4), ell))})
    assert check_innermax(sp, top_form(sp, k), bp, w)


def test_elements_are_exact():
    sp = OddSpace(2)
    x = form(sp, ((1,), Fraction(1, 3))).scale(3)
    assert x.coefficient((1,)) == 1 and isinstance(x.coefficient((1,)), Fraction)
