import random
from fractions import Fraction

import pytest

from hkrlab import linalg
from hkrlab.hodgepair import (
    PairError, annihilator_subspaces, break_pair, case1_check, case2_check, check_td_twist_relation,
    corner_containment, correspondence_pointwise, cy_like_model, derivation_check, form_action_failures,
    identity_pair, k3_h2_class, k3_like_model, k3_operators, load_pair_model, module_axiom_failures, mukai_chi,
    propagate_module_compat, r_annihilator, synthetic_hochschild, top_holomorphic_generators, torus_model,
    twist,
)


def even_class(model, rng):
    a = [Fraction(0)] * model.mod_dim
    for k in model.mod_indices(degree=0):
        a[k] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    a[model.mod_labels.index("1")] = Fraction(1)
    return a


@pytest.fixture(scope="module")
def torus():
    return torus_model(2)


@pytest.fixture(scope="module")
def k3():
    return k3_like_model(3)


def test_torus_shape(torus):
    assert torus.alg_dim == torus.mod_dim == 16
    assert torus.mod_labels[:5] == ["1", "dzb1", "dzb2", "dz1", "dz2"]
    assert not module_axiom_failures(torus)
    assert not form_action_failures(torus)


def test_k3_shape(k3):
    assert k3.mod_labels == ["1", "s", "h1", "sb", "h1*h1"]
    assert not module_axiom_failures(k3)


@pytest.mark.parametrize("name", ["torus", "k3"])
def test_twist_recovers_kontsevich_pair(name, torus, k3):
    model = torus if name == "torus" else k3
    rng = random.Random(11)
    for _ in range(3):
        a = even_class(model, rng)
        hh, std, kont = synthetic_hochschild(model, seed=rng.randint(0, 999), a_class=a)
        assert twist(model, std, a) == kont
        assert twist(model, kont, model.mod_inverse(a)) == std


def test_twist_rejects_odd_class(torus):
    a = torus.mod_basis(torus.mod_labels.index("dz1"))
    with pytest.raises(PairError):
        twist(torus, identity_pair(torus), a)


@pytest.mark.parametrize("name", ["torus", "k3"])
def test_annihilator_correspondence(name, torus, k3):
    model = torus if name == "torus" else k3
    rng = random.Random(2)
    a = even_class(model, rng)
    hh, std, kont = synthetic_hochschild(model, seed=4, a_class=a)
    rep = annihilator_subspaces(model, hh, kont)
    assert rep.correspondence
    assert len(rep.A) == len(rep.R)
    assert correspondence_pointwise(model, hh, kont)


def test_cy_corner_containment():
    for seed in range(3):
        model = cy_like_model(3, 2, 1, seed=seed)
        assert corner_containment(model)
        assert len(r_annihilator(model)) == 6


def test_mukai(torus, k3):
    pt = [k for k in range(torus.mod_dim) if torus.mod_bideg[k] == (2, 2)][0]
    assert mukai_chi(torus, torus.mod_basis(pt)) == 0
    assert mukai_chi(k3, k3_h2_class(k3, h=[1])) == -1
    assert mukai_chi(k3, [0] * k3.mod_dim) == 0
    with pytest.raises(PairError):
        mukai_chi(torus, torus.mod_basis(torus.mod_labels.index("dz1")))


def test_derivation_and_commutation(torus):
    rng = random.Random(9)
    h1t = torus.alg_indices(bideg=(1, 1))
    assert h1t
    for i in h1t:
        v = torus.alg_basis(i)
        assert derivation_check(torus, v)
        assert case2_check(torus, v, even_class(torus, rng))
        assert case1_check(torus, v, torus.mod_unit())


def test_derivation_detects_broken_operator(torus):
    i = torus.alg_indices(bideg=(1, 1))[0]
    v = torus.alg_basis(i)
    D = [row[:] for row in torus.op(v)]
    D[0][0] += 1
    assert not derivation_check(torus, v, operator=D)


def test_td_twist_relation(torus):
    hh, std, kont = synthetic_hochschild(torus, seed=1)
    top = [k for k in range(torus.mod_dim) if torus.mod_bideg[k] == (2, 2)][0]
    td = torus.mod_unit()
    td[top] = Fraction(1, 3)
    tilde = type(std)(std.ring_iso, linalg.matmul(torus.mod_mult_matrix(td), std.module_iso))
    assert check_td_twist_relation(torus, std, tilde, td)
    assert not check_td_twist_relation(torus, std, std, td)


@pytest.mark.parametrize("name", ["torus", "k3"])
def test_propagation_positive(name, torus, k3):
    model = torus if name == "torus" else k3
    hh, std, kont = synthetic_hochschild(model, seed=5, a_class=even_class(model, random.Random(1)))
    gens = top_holomorphic_generators(model, kont)
    probes = [(model.alg_labels[i], model.alg_basis(i)) for i in range(model.alg_dim)]
    r = propagate_module_compat(model, hh, kont, gens, probes)
    assert r.ok and r.checked > 0 and r.span_dim > 0


def test_fault_injection_found_past_generators(torus):
    hh, std, kont = synthetic_hochschild(torus, seed=3, a_class=even_class(torus, random.Random(4)))
    gens = top_holomorphic_generators(torus, kont)
    probes = [(torus.alg_labels[i], torus.alg_basis(i)) for i in torus.alg_indices(degree=1)]
    for seed in range(3):
        br = break_pair(torus, hh, kont, gens, probes, keep_depth=1, seed=seed)
        r = propagate_module_compat(torus, hh, br, gens, probes)
        assert not r.ok and r.failure_kind == "propagation"
        assert len(r.chain) >= 3


def test_fault_injection_impossible_when_saturated(k3):
    hh, std, kont = synthetic_hochschild(k3, seed=3)
    gens = top_holomorphic_generators(k3, kont)
    probes = [(k3.alg_labels[i], k3.alg_basis(i)) for i in range(k3.alg_dim)]
    with pytest.raises(PairError):
        break_pair(k3, hh, kont, gens, probes, keep_depth=1)


def test_load_pair_model():
    assert load_pair_model({"kind": "torus", "n": 1}).mod_dim == 4
    assert load_pair_model({"kind": "k3_like"}).mod_dim == 5
    assert load_pair_model({"kind": "synthetic", "m": 3}).mod_mul is None
    with pytest.raises(PairError):
        load_pair_model({"kind": "nope"})


def test_k3_restricted_annihilator_in_h11():
    K = k3_like_model(4)
    ops = k3_operators(K)
    idx = [k for k, b in enumerate(K.mod_bideg) if b == (1, 1)]

    def kernel(mats):
        rows = [[r[c] for c in idx] for M in mats for r in M]
        return linalg.nullspace(rows, len(idx))

    # σ̄∧ and Λ_σ kill every (1,1) class orthogonal to σ and σ̄, i.e. all of them here
    assert len(kernel([ops["sigmabar_wedge"], ops["lambda_sigma"]])) == len(idx) == 2
    # the (1,1)-contractions cut this down to nothing
    assert kernel([ops["sigmabar_wedge"], ops["lambda_sigma"]] + ops["h11_contractions"]) == []
    # and they do not kill the σ or σ̄ directions either
    s = K.mod_labels.index("s")
    assert any(row[s] for row in ops["lambda_sigma"])
