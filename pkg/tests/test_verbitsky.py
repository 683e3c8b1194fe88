import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkrlab import linalg
from hkrlab.verbitsky import (
    ProductPowerForm, QuadraticSpace, VerbitskyAlgebra, VerbitskyError, decompose_components,
    load_model, multiplication_matrix, recover_q, total_basis,
)

B3 = [[1, 0, 0], [0, 1, 0], [0, 0, -1]]
G2 = [[2, 1, 0], [1, 3, 0], [0, 0, -1]]


def expected_dims(b, n):
    return [comb(b + min(d, 2 * n - d) - 1, min(d, 2 * n - d)) for d in range(2 * n + 1)]


def proportional(x, y):
    lam = None
    for rx, ry in zip(x, y):
        for a, b in zip(rx, ry):
            if b:
                lam = Fraction(a) / b if lam is None else lam
                if a != lam * b:
                    return None
            elif a:
                return None
    return lam


def test_dims_b3_n1():
    A = VerbitskyAlgebra(QuadraticSpace(B3), 1)
    assert A.cohomological_dims(4) == [1, 3, 1]
    assert A.dims()[:3] == [1, 3, 1]
    assert all(d == 0 for d in A.dims()[3:])


def test_dims_n2():
    A = VerbitskyAlgebra(QuadraticSpace(G2), 2)
    assert A.dims()[:5] == [1, 3, 6, 3, 1]


@pytest.mark.parametrize("b,n", [(3, 1), (4, 1), (3, 2), (4, 2), (3, 3)])
def test_dims_match_symmetric_powers(b, n):
    gram = [[int(i == j) * (1 if i else -1) for j in range(b)] for i in range(b)]
    A = VerbitskyAlgebra(QuadraticSpace(gram), n)
    assert A.dims()[:2 * n + 1] == expected_dims(b, n)


def test_fujiki_constants():
    rng = random.Random(3)
    A = VerbitskyAlgebra(QuadraticSpace(B3), 1)
    c, ok = A.fujiki_check([[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)]
                            for _ in range(50)])
    assert ok and c == 1
    A2 = VerbitskyAlgebra(QuadraticSpace(G2), 2)
    c, ok = A2.fujiki_check([[rng.randint(-4, 4) for _ in range(3)] for _ in range(10)])
    assert ok and c == Fraction(1, 4)


def test_isotropic_power_vanishes():
    A = VerbitskyAlgebra(QuadraticSpace(B3), 1)
    a = A.h2([1, 0, 1])
    assert A.power(a, 2).is_zero()
    assert not A.power(A.h2([1, 0, 0]), 2).is_zero()


@pytest.mark.parametrize("gram,n", [(B3, 1), (G2, 2), (B3, 3)])
def test_recover_q(gram, n):
    A = VerbitskyAlgebra(QuadraticSpace(gram), n)
    rec = recover_q(A.top_power_form(), n)
    lam = proportional(rec.gram, A.space.gram)
    assert lam is not None and lam != 0
    assert rec.sign_ambiguous == (n % 2 == 0)


def test_recover_q_rejects_non_power():
    f = {(3, 0, 0): Fraction(1), (0, 3, 0): Fraction(1)}
    with pytest.raises(VerbitskyError):
        recover_q(f, 1)
    with pytest.raises(VerbitskyError):
        recover_q({}, 1)


def test_ideal_stable_under_reflection():
    A = VerbitskyAlgebra(QuadraticSpace(G2), 2)
    g = A.space.reflection([0, 0, 1])
    assert A.ideal_stable_under(g)
    assert not A.ideal_stable_under([[1, 1, 0], [0, 1, 0], [0, 0, 1]])


def test_multiplication_is_commutative_and_associative():
    A = VerbitskyAlgebra(QuadraticSpace(G2), 2)
    u, v = A.h2([1, 2, 0]), A.h2([0, 1, 3])
    Mu, Mv = multiplication_matrix(A, u), multiplication_matrix(A, v)
    assert linalg.matmul(Mu, Mv) == linalg.matmul(Mv, Mu)
    assert len(total_basis(A)) == 14


def test_product_power_decomposition():
    p = ProductPowerForm([(QuadraticSpace(B3), 1), (QuadraticSpace(G2), 2)])
    comps = decompose_components(p)
    assert [(c.block, c.rank, c.multiplicity) for c in comps] == [(0, 3, 1), (1, 3, 2)]
    bad = dict(p.expected())
    bad[next(iter(bad))] += 1
    with pytest.raises(VerbitskyError):
        decompose_components(ProductPowerForm(p.blocks, bad))


def test_errors_and_loader():
    with pytest.raises(VerbitskyError):
        VerbitskyAlgebra(QuadraticSpace([[1, 0], [0, 1]]), 1)
    with pytest.raises(VerbitskyError):
        VerbitskyAlgebra(QuadraticSpace(B3), 0)
    with pytest.raises(VerbitskyError):
        load_model({"gram": B3})
    assert load_model({"gram": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "-1"]], "n": 1}).dims()[:3] == [1, 3, 1]


@settings(max_examples=12, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3).filter(lambda d: all(d)))
def test_fujiki_holds_for_diagonal_forms(diag):
    gram = [[diag[i] if i == j else 0 for j in range(3)] for i in range(3)]
    A = VerbitskyAlgebra(QuadraticSpace(gram), 1)
    assert A.dims()[:3] == [1, 3, 1]
    c, ok = A.fujiki_check([[1, 2, 3], [2, -1, 1], [0, 1, 1], [5, 0, -2]])
    assert ok


def test_pythagorean_isotropic_classes_square_to_zero():
    A = VerbitskyAlgebra(QuadraticSpace(B3), 1)
    for m in range(1, 5):
        for k in range(0, m):
            a, b, c = m * m - k * k, 2 * m * k, m * m + k * k
            assert A.power(A.h2([a, b, c]), 2).is_zero()
    assert A.dims()[3] == 0


def test_degenerate_gram_rejected():
    with pytest.raises(VerbitskyError):
        QuadraticSpace([[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    with pytest.raises(VerbitskyError):
        QuadraticSpace([[1, 2], [0, 1]])


def test_recover_q_product_of_two_quadrics_fails():
    from hkrlab.verbitsky import poly_mul, quadratic_poly
    q1 = quadratic_poly([[1, 0, 0], [0, 1, 0], [0, 0, -1]])
    q2 = quadratic_poly([[2, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(VerbitskyError):
        recover_q(poly_mul(q1, q2), 2)


def test_recover_q_n1_returns_form():
    A = VerbitskyAlgebra(QuadraticSpace(B3), 1)
    f = A.top_power_form()
    rec = recover_q(f, 1)
    probe_val = sum(rec.probe[i] * rec.gram[i][j] * rec.probe[j] for i in range(3) for j in range(3))
    assert probe_val == 1


def test_two_block_decomposition():
    p = ProductPowerForm([(QuadraticSpace(B3), 1), (QuadraticSpace(G2), 1)])
    assert [c.rank for c in decompose_components(p)] == [3, 3]
