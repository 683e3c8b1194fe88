import random

import pytest

from hkrlab import linalg
from hkrlab.lefschetz import (
    GradedOperatorSpace, Sl2Error, complete_sl2, hard_lefschetz, joint_annihilator,
    primitive_decomposition, verbitsky_space, verify_primitive_decomposition,
)
from hkrlab.verbitsky import QuadraticSpace, VerbitskyAlgebra, multiplication_matrix

B3 = [[1, 0, 0], [0, 1, 0], [0, 0, -1]]


def setup(vec=(1, 2, 1), gram=B3, n=1):
    A = VerbitskyAlgebra(QuadraticSpace(gram), n)
    sp = verbitsky_space(A)
    return A, sp, multiplication_matrix(A, A.h2(list(vec)))


def test_sl2_brackets():
    _, sp, L = setup()
    t = complete_sl2(sp, L)
    assert t.brackets_ok()
    H = linalg.commutator(t.L, t.Lam)
    assert H == t.H
    assert sp.shift_ok(t.Lam, -2)


def test_hard_lefschetz_and_primitives():
    _, sp, L = setup()
    assert hard_lefschetz(sp, L)
    t = complete_sl2(sp, L)
    assert len(primitive_decomposition(t, 0)) == 2
    assert verify_primitive_decomposition(t)


def test_n2_hard_lefschetz():
    _, sp, L = setup((1, 0, 0), [[2, 1, 0], [1, 3, 0], [0, 0, -1]], 2)
    assert hard_lefschetz(sp, L)
    t = complete_sl2(sp, L)
    assert t.brackets_ok() and verify_primitive_decomposition(t)


def test_column_order_independence():
    _, sp, L = setup()
    t = complete_sl2(sp, L)
    n = sum(1 for r in range(sp.dim) for c in range(sp.dim) if sp.weights[r] == sp.weights[c] - 2)
    rng = random.Random(5)
    for _ in range(3):
        perm = list(range(n))
        rng.shuffle(perm)
        assert complete_sl2(sp, L, column_order=perm).Lam == t.Lam


def test_no_solution():
    _, sp, _ = setup()
    with pytest.raises(Sl2Error):
        complete_sl2(sp, linalg.zeros(sp.dim, sp.dim))


def test_isotropic_class_fails():
    _, sp, L = setup((1, 0, 1))
    assert not hard_lefschetz(sp, L)
    with pytest.raises(Sl2Error):
        complete_sl2(sp, L)


def test_wrong_shift_rejected():
    sp = GradedOperatorSpace.from_weights([-1, 1])
    with pytest.raises(Sl2Error):
        complete_sl2(sp, [[1, 0], [0, 1]])


def test_toy_sl2_rep():
    # the 2-dim irreducible: L raises weight -1 to 1
    sp = GradedOperatorSpace.from_weights([-1, 1])
    t = complete_sl2(sp, [[0, 0], [1, 0]])
    assert t.Lam == [[0, 1], [0, 0]]
    assert hard_lefschetz(sp, [[0, 0], [1, 0]])


def test_joint_annihilator():
    sp = GradedOperatorSpace.from_weights([0, 0, 2])
    ops = [[[0, 0, 0], [0, 0, 0], [1, 0, 0]]]
    ker = joint_annihilator(sp, ops, 0)
    assert len(ker) == 1 and ker[0][0] == 0
