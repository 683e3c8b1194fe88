import random
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from hkrlab import linalg
from hkrlab.holonomy import (
    HolonomyError, NormalizerError, SymplecticBlockMatrix, block_swap, check_power_equation, chi_degree,
    enumerate_chi_solutions, generated_family, identity_element, ihs_constrained_solutions,
    induced_permutation, is_in_normalizer, partitions, random_block_diagonal, random_mixing_element,
    random_normalizer_element, standard_form, transvection,
)


def brute(n):
    out = set()
    for k in range(1, n + 1):
        for p in combinations_with_replacement(range(1, n + 1), k):
            if sum(p) == n:
                prod = 1
                for x in p:
                    prod *= 1 + x
                if prod % (n + 1) == 0:
                    out.add((prod // (n + 1), tuple(sorted(p, reverse=True))))
    return out


def test_chi_examples():
    assert enumerate_chi_solutions(1) == [(1, [1])]
    assert enumerate_chi_solutions(2) == [(1, [2])]
    s3 = enumerate_chi_solutions(3)
    assert (1, [3]) in s3 and (2, [1, 1, 1]) in s3 and all(p != [2, 1] for _, p in s3)
    assert chi_degree([2, 1]) is None
    with pytest.raises(HolonomyError):
        enumerate_chi_solutions(0)


def test_chi_against_brute_force():
    for n in range(1, 13):
        got = enumerate_chi_solutions(n)
        assert {(d, tuple(p)) for d, p in got} == brute(n)
        assert len(got) == len(brute(n))
        assert all(p == sorted(p, reverse=True) for _, p in got)


def test_partition_count():
    assert [len(list(partitions(n))) for n in range(1, 11)] == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_power_equation():
    r = check_power_equation(64)
    assert r.solutions == [(1, 1)] and r.proof_checked
    assert "powers of two" in r.proof
    assert check_power_equation(1).solutions == [(1, 1)]
    assert check_power_equation(3).solutions == [(1, 1)]
    assert ihs_constrained_solutions(64) == [(1, 1)]
    with pytest.raises(HolonomyError):
        check_power_equation(0)


def test_identity_and_swap():
    I = identity_element([1, 1])
    assert induced_permutation(I) == ([0, 1], [1, 1])
    P = block_swap([1, 1], 0, 1)
    assert P.matrix == [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
    assert induced_permutation(P) == ([1, 0], [1, 1])
    assert is_in_normalizer(P) and is_in_normalizer(I)
    with pytest.raises(HolonomyError):
        block_swap([1, 2], 0, 1)


def test_mixing_element_rejected():
    T = transvection([1, 1], [1, 0, 1, 0], 1)
    assert not is_in_normalizer(T)
    with pytest.raises(NormalizerError) as e:
        induced_permutation(T)
    assert e.value.index is not None


def test_matrix_must_preserve_form():
    with pytest.raises(HolonomyError):
        SymplecticBlockMatrix([[2, 0], [0, 1]], [1])
    with pytest.raises(HolonomyError):
        SymplecticBlockMatrix(linalg.identity(4), [1])
    with pytest.raises(HolonomyError):
        SymplecticBlockMatrix(linalg.identity(2), [0, 1])


def test_transvection_preserves_form():
    rng = random.Random(2)
    omega, _ = standard_form([1, 2])
    for _ in range(10):
        v = [rng.randint(-3, 3) for _ in range(6)]
        T = transvection([1, 2], v, Fraction(rng.randint(-3, 3), 2))
        A = T.matrix
        assert linalg.matmul(linalg.transpose(A), linalg.matmul(omega, A)) == omega


def test_family_agreement():
    fam = generated_family([1, 1, 2], 60, seed=3) + generated_family([1, 1], 40, seed=4)
    kinds = {"block_diagonal": 0, "normalizer": 0, "mixing": 0}
    for kind, M in fam:
        nz = is_in_normalizer(M)
        try:
            rho, lams = induced_permutation(M)
            ok = True
        except NormalizerError:
            ok = False
        assert nz == ok
        assert nz == (kind != "mixing")
        if ok:
            assert all(M.blocks[j] == M.blocks[i] for i, j in enumerate(rho))
            assert lams == [1] * len(M.blocks)
        kinds[kind] += 1
    assert all(v > 0 for v in kinds.values())


def test_rho_is_homomorphism():
    rng = random.Random(8)
    blocks = [1, 1, 1]
    seen = set()
    for _ in range(15):
        A = random_normalizer_element(blocks, rng)
        B = random_normalizer_element(blocks, rng)
        ra, _ = induced_permutation(A)
        rb, _ = induced_permutation(B)
        rab, _ = induced_permutation(A @ B)
        assert rab == [ra[rb[i]] for i in range(3)]
        seen.add(tuple(ra))
    assert len(seen) > 1


def test_block_diagonal_is_trivial_permutation():
    rng = random.Random(1)
    for _ in range(5):
        M = random_block_diagonal([1, 2], rng)
        assert induced_permutation(M)[0] == [0, 1]
        assert not is_in_normalizer(random_mixing_element([1, 2], rng))
