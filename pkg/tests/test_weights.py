import random
from fractions import Fraction

import pytest

from hkrlab import linalg
from hkrlab.jacobi import (
    CIRCLE, INTERVAL, STAR, DiagramSeries, JacobiDiagram, juxtapose, random_diagram, reversed_vertex,
    shuffled, strut, union_product, wheel,
)
from hkrlab.weights import (
    WeightError, WeightValue, abelian, as_instance, backend, check_relation_vanishing, evaluate,
    evaluate_naive, generate_relation_instances, gl, ihx_instance, sl2, stu_instance, verify_series_identity,
)

THETA = JacobiDiagram([(1, 2, 3), (4, 5, 6)], {}, [(1, 4), (2, 6), (3, 5)])


def circle_tripod():
    legs = {"l1": "x", "l2": "x", "l3": "x"}
    return JacobiDiagram([("a", "b", "c")], legs, [("a", "l1"), ("b", "l2"), ("c", "l3")],
                         {"x": CIRCLE}, {"x": ("l1", "l2", "l3")})


def poly_product(u, v):
    """Product of two star-only values read as commutative polynomials per label."""
    out = {}
    for ku, cu in u.data.items():
        for kv, cv in v.data.items():
            parts = dict(ku)
            for lab, mono in kv:
                parts[lab] = tuple(sorted(parts.get(lab, ()) + mono))
            k = tuple(sorted(parts.items(), key=lambda t: repr(t[0])))
            out[k] = out.get(k, 0) + cu * cv
    return WeightValue(out)


def as_matrix(val, lab, n):
    m = linalg.zeros(n, n)
    for k, c in val.data.items():
        (l, (r, s)), = k
        assert l == lab
        m[r][s] = c
    return m


def test_backends_are_valid():
    for desc in ("abelian3", "sl2", "gl2", {"kind": "gl", "n": 3}, {"kind": "sl2", "scale": "1/2"}):
        g, m = backend(desc)
        assert g.check() and m.check(g)
    assert backend("abelian3")[0].dim == 3 and backend("gl2")[0].dim == 4
    for bad in ("so3", {"kind": "e8"}):
        with pytest.raises(WeightError):
            backend(bad)


def test_abelian_kills_trivalent(rng):
    g = abelian(3)
    for _ in range(20):
        d = random_diagram(rng, ["x"], max_tri=4)
        if d.tris:
            assert evaluate(d, g).is_zero()


def test_strut_in_one_dim():
    g, _ = abelian(1)
    v = evaluate(strut("x", "x"), g)
    assert v.data == {(("x", (0, 0)),): 1}
    assert evaluate_naive(strut("x", "x"), g) == v


def test_theta_sl2():
    g = sl2()
    assert evaluate(THETA, g).scalar() == 12
    assert evaluate_naive(THETA, g).scalar() == 12
    assert evaluate(THETA, sl2(2)).scalar() == 6


def test_naive_oracle_agrees(rng):
    g = sl2()
    for _ in range(8):
        kind = rng.choice([STAR, INTERVAL, CIRCLE])
        d = random_diagram(rng, ["x"], max_tri=2, max_legs=2, kinds={"x": kind})
        assert evaluate(d, g) == evaluate_naive(d, g)


def test_module_required():
    g, _ = sl2()
    with pytest.raises(WeightError):
        evaluate_naive(circle_tripod(), g)


def test_as_on_theta():
    assert check_relation_vanishing(as_instance(THETA, 0), sl2())
    assert evaluate(reversed_vertex(THETA, 0), sl2()).scalar() == -12


def test_stu_on_circle():
    inst = stu_instance(circle_tripod(), "l1")
    assert len(inst.terms) == 3
    assert check_relation_vanishing(inst, sl2())
    assert check_relation_vanishing(inst, gl(2))


def test_ihx_on_wheel():
    w = wheel(4, "x")
    inst = ihx_instance(w, ("b", 0))
    for b in ("sl2", "gl2"):
        assert check_relation_vanishing(inst, backend(b))


def test_relation_errors():
    with pytest.raises(WeightError):
        as_instance(strut("x", "y"), 0)
    with pytest.raises(WeightError):
        stu_instance(strut("x", "y"), "a")
    with pytest.raises(WeightError):
        ihx_instance(THETA, "nope")


def test_relation_corpus():
    insts = generate_relation_instances(random.Random(21), count=4)
    assert {i.kind for i in insts} == {"AS", "IHX", "STU"}
    for b in ("abelian3", "sl2", "gl2"):
        g = backend(b)
        assert all(check_relation_vanishing(i, g) for i in insts)


def test_a_broken_relation_is_caught():
    # a single diagram is not a relation; its value is nonzero
    bad = as_instance(THETA, 0)
    bad.terms = [(1, THETA), (-1, reversed_vertex(THETA, 0))]
    assert not check_relation_vanishing(bad, sl2())


def test_isomorphism_and_rotation_invariance(rng):
    g = sl2()
    for _ in range(15):
        d = random_diagram(rng, ["x", "y"], max_tri=3, max_legs=3, kinds={"y": INTERVAL})
        assert evaluate(shuffled(d, rng), g) == evaluate(d, g)


def test_union_is_polynomial_product(rng):
    g = sl2()
    for _ in range(10):
        c = random_diagram(rng, ["x", "y"], max_tri=2, max_legs=3)
        d = random_diagram(rng, ["x"], max_tri=2, max_legs=3)
        u = evaluate(union_product(c, d), g)
        assert u == poly_product(evaluate(c, g), evaluate(d, g))


def test_juxtapose_composes(rng):
    g = sl2()
    n = g[1].dim
    for _ in range(10):
        c = random_diagram(rng, ["x"], max_tri=2, max_legs=3, kinds={"x": INTERVAL})
        d = random_diagram(rng, ["x"], max_tri=2, max_legs=3, kinds={"x": INTERVAL})
        j = as_matrix(evaluate(juxtapose(c, d, "x"), g), "x", n)
        assert j == linalg.matmul(as_matrix(evaluate(c, g), "x", n), as_matrix(evaluate(d, g), "x", n))


def test_series_identity_reports():
    s = DiagramSeries.of(strut("x", "y"))
    same = verify_series_identity(s, s, 1, ["sl2", "gl2"])
    assert same["status"] == "consistent"
    assert all(r["ok"] and r.get("scaling_ok", True) for b in same["backends"] for r in b["degrees"])
    diff = verify_series_identity(s, s.scale(2), 1, ["sl2"])
    assert diff["status"] == "inconsistent"
    row = diff["backends"][0]["degrees"][1]
    want = evaluate(strut("x", "y"), sl2()).scale(-1).to_json()
    assert not row["ok"] and row["residual"] == want


def test_scaling_covariance(rng):
    for _ in range(5):
        d = random_diagram(rng, ["x"], max_tri=2, max_legs=2)
        for k in (2, Fraction(1, 3)):
            assert evaluate(d, sl2(k)) == evaluate(d, sl2()).scale(Fraction(1) / k ** d.degree)
