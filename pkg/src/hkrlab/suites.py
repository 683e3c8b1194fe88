"""Named check suites behind `hkrlab suite run`.

Every case returns (ok, details).  Randomized cases draw from a Random seeded
by the suite seed and the case name, so reports are reproducible.
"""
import random
import zlib
from fractions import Fraction
from itertools import combinations_with_replacement

from . import exterior, genus, hodgepair, holonomy, jacobi, lefschetz, linalg, verbitsky, weights

SUITES = ("innermax", "genus", "verbitsky", "lefschetz", "pair", "jacobi", "weights", "holonomy")
_CASES = {s: [] for s in SUITES}


def case(suite, name, anchor):
    def deco(fn):
        _CASES[suite].append((name, anchor, fn))
        return fn
    return deco


def _rng(seed, name):
    return random.Random(seed * 1000003 + zlib.crc32(name.encode()))


def fmt(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# -- innermax -----------------------------------------------------------------------

def _innermax_case(n):
    def run(rng):
        count, fails = exterior.innermax_exhaustive(n)
        return not fails, f"{count} basis pairs, {len(fails)} failures"
    return run


for _n in range(1, 5):
    case("innermax", f"exhaustive_n{_n}", "(-1)^l (b'⌟w)⌟b = b'∧(w⌟b), b top form")(_innermax_case(_n))


@case("innermax", "random_combinations_n3", "linearity of both sides")
def _innermax_random(rng):
    sp = exterior.OddSpace(3)
    beta = exterior.top_form(sp, rng.randint(1, 5))
    for _ in range(30):
        ell = rng.randint(0, 3)
        bp = exterior.ExteriorElement.from_dict(
            sp, exterior.FORM, {m: rng.randint(-3, 3) for m in sp.monomials(ell)})
        w = exterior.ExteriorElement.from_dict(
            sp, exterior.POLYVECTOR, {m: rng.randint(-3, 3) for m in sp.monomials()})
        if not exterior.check_innermax(sp, beta, bp, w):
            return False, f"failed for {bp} and {w}"
    return True, "30 random homogeneous b', mixed w"


# -- genus --------------------------------------------------------------------------

@case("genus", "ahat_univariate", "x/(e^{x/2}-e^{-x/2})")
def _ahat(rng):
    got = genus.ahat_univariate(6)
    want = [1, 0, Fraction(-1, 24), 0, Fraction(7, 5760), 0, Fraction(-31, 967680)]
    return got == want, " ".join(fmt(x) for x in got)


@case("genus", "td_univariate", "x/(1-e^{-x})")
def _td(rng):
    got = genus.td_univariate(4)
    want = [1, Fraction(1, 2), Fraction(1, 12), 0, Fraction(-1, 720)]
    return got == want, " ".join(fmt(x) for x in got)


for _r in (1, 2, 3):
    def _rel(rng, r=_r):
        return genus.check_todd_relation(r, 6), f"r={r}, degree 6"
    case("genus", f"todd_relation_r{_r}", "td = exp(c1/2) Â")(_rel)


@case("genus", "sqrt_ahat_squares_back", "(Â^{1/2})^2 = Â")
def _sqrt(rng):
    a = genus.ahat(2, 6)
    s = genus.series_sqrt(a)
    return s * s == a, "r=2, degree 6"


@case("genus", "elementary_basis_roundtrip", "symmetric series in c_1..c_r")
def _elem(rng):
    for r in (2, 3):
        s = genus.todd(r, 4)
        c = genus.to_elementary_basis(s)
        back = genus.elementary_to_roots(c, r)
        if back != s.terms:
            return False, f"r={r}"
    return True, "td for r=2,3 to degree 4"


# -- verbitsky ------------------------------------------------------------------------

def k3_b3():
    return verbitsky.VerbitskyAlgebra(verbitsky.QuadraticSpace([[1, 0, 0], [0, 1, 0], [0, 0, -1]]), 1)


def _rand_vec(rng, b):
    return [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(b)]


@case("verbitsky", "dims_b3_n1", "S*H^2 / <a^{n+1} : q(a)=0>")
def _dims(rng):
    A = k3_b3()
    d = A.cohomological_dims(4)
    return d == [1, 3, 1], f"dims {d}"


@case("verbitsky", "fujiki_b3_n1", "a^{2n} = c q(a)^n")
def _fujiki(rng):
    A = k3_b3()
    c, ok = A.fujiki_check([_rand_vec(rng, 3) for _ in range(50)])
    return ok and c is not None, f"c = {fmt(c) if c is not None else None}, 50 random classes"


@case("verbitsky", "recover_q_b3_n1", "q recovered from the top power form")
def _recover(rng):
    A = k3_b3()
    rec = verbitsky.recover_q(A.top_power_form(), 1)
    lam = _proportional(rec.gram, A.space.gram)
    return lam is not None, f"recovered = {fmt(lam) if lam is not None else '?'} x seed gram"


@case("verbitsky", "dims_b3_n2", "dimensions for n = 2")
def _dims2(rng):
    A = verbitsky.VerbitskyAlgebra(verbitsky.QuadraticSpace([[2, 1, 0], [1, 3, 0], [0, 0, -1]]), 2)
    d = A.dims()[:5]
    c, ok = A.fujiki_check([_rand_vec(rng, 3) for _ in range(10)])
    return d == [1, 3, 6, 3, 1] and ok, f"dims {d}, fujiki c = {fmt(c)}"


def _proportional(x, y):
    lam = None
    for rx, ry in zip(x, y):
        for a, b in zip(rx, ry):
            a, b = Fraction(a), Fraction(b)
            if b:
                lam = a / b if lam is None else lam
                if a != lam * b:
                    return None
            elif a:
                return None
    return lam


# -- lefschetz -----------------------------------------------------------------------

def _lefschetz_setup(vec=(1, 2, 1)):
    A = k3_b3()
    sp = lefschetz.verbitsky_space(A)
    L = verbitsky.multiplication_matrix(A, A.h2(list(vec)))
    return A, sp, L


@case("lefschetz", "sl2_brackets_b3_n1", "[L,Λ]=H, [H,L]=2L, [H,Λ]=-2Λ")
def _sl2(rng):
    _, sp, L = _lefschetz_setup()
    t = lefschetz.complete_sl2(sp, L)
    return t.brackets_ok(), "L = multiplication by a q-positive class"


@case("lefschetz", "hard_lefschetz_b3_n1", "L: weight(-2) -> weight(2) bijective")
def _hl(rng):
    _, sp, L = _lefschetz_setup()
    return lefschetz.hard_lefschetz(sp, L), "weights -2, 0, 2"


@case("lefschetz", "primitive_decomposition_b3_n1", "V = ⊕ L^k P")
def _prim(rng):
    _, sp, L = _lefschetz_setup()
    t = lefschetz.complete_sl2(sp, L)
    p0 = lefschetz.primitive_decomposition(t, 0)
    return lefschetz.verify_primitive_decomposition(t) and len(p0) == 2, f"primitive weight-0 dim {len(p0)}"


@case("lefschetz", "column_order_independence", "Λ is unique")
def _order(rng):
    _, sp, L = _lefschetz_setup()
    t = lefschetz.complete_sl2(sp, L)
    n = sum(1 for r in range(sp.dim) for c in range(sp.dim) if sp.weights[r] == sp.weights[c] - 2)
    perm = list(range(n))
    rng.shuffle(perm)
    t2 = lefschetz.complete_sl2(sp, L, column_order=perm)
    return t.Lam == t2.Lam, "random permutation of unknowns"


@case("lefschetz", "no_solution_errors", "L = 0 has no sl2 completion")
def _nosol(rng):
    _, sp, _ = _lefschetz_setup()
    try:
        lefschetz.complete_sl2(sp, linalg.zeros(sp.dim, sp.dim))
    except lefschetz.Sl2Error as e:
        return True, f"raised: {e}"
    return False, "no error"


@case("lefschetz", "isotropic_class_fails_hard_lefschetz", "q(a)=0 kills a^2")
def _iso(rng):
    _, sp, L = _lefschetz_setup((1, 0, 1))
    return not lefschetz.hard_lefschetz(sp, L), "a = x1 + x3"


# -- pair ------------------------------------------------------------------------------

def _rand_even(model, rng):
    a = [Fraction(0)] * model.mod_dim
    for k in model.mod_indices(degree=0):
        a[k] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    a[model.mod_labels.index("1")] = Fraction(1)
    return a


PAIR_MODELS = {
    "torus2": lambda: hodgepair.torus_model(2),
    "k3_b3": lambda: hodgepair.k3_like_model(3),
}


def _pair_setup(model, rng):
    a = _rand_even(model, rng)
    hh, std, kont = hodgepair.synthetic_hochschild(model, seed=rng.randint(0, 10 ** 6), a_class=a)
    return a, hh, std, hodgepair.twist(model, std, a)


def _pc_twist(model, rng):
    a = _rand_even(model, rng)
    hh, std, kont = hodgepair.synthetic_hochschild(model, seed=rng.randint(0, 10 ** 6), a_class=a)
    back = hodgepair.twist(model, hodgepair.twist(model, std, a), model.mod_inverse(a))
    return hodgepair.twist(model, std, a) == kont and back == std, "twist(std, a) = kont, twisting back by a^-1"


def _pc_annihilators(model, rng):
    a, hh, std, tw = _pair_setup(model, rng)
    rep = hodgepair.annihilator_subspaces(model, hh, tw)
    pw = hodgepair.correspondence_pointwise(model, hh, tw)
    return bool(rep.correspondence and pw), f"dim R = {len(rep.R)}, dim A = {len(rep.A)}"


def _pc_module_axiom(model, rng):
    bad = hodgepair.module_axiom_failures(model, limit=1)
    return not bad, f"{len(bad)} failures"


def _pc_derivation(model, rng):
    ok = all(hodgepair.derivation_check(model, model.alg_basis(i)) for i in model.alg_indices(bideg=(1, 1)))
    return ok, "basis of H^1(T)"


def _pc_commutation(model, rng):
    a = _rand_even(model, rng)
    ok = all(hodgepair.case2_check(model, model.alg_basis(i), a) for i in model.alg_indices(bideg=(1, 1)))
    return ok, "basis of H^1(T), random a"


def _pc_propagation(model, rng):
    a, hh, std, tw = _pair_setup(model, rng)
    gens = hodgepair.top_holomorphic_generators(model, tw)
    probes = [(model.alg_labels[i], model.alg_basis(i)) for i in range(model.alg_dim)]
    r = hodgepair.propagate_module_compat(model, hh, tw, gens, probes)
    return r.ok, f"{r.checked} checks, span {r.span_dim}"


PAIR_CHECKS = {
    "twist_recovers_kontsevich_pair": ("twisting the standard pair by a", _pc_twist),
    "annihilator_correspondence": ("α ∈ A ⇔ I(α) ∈ R", _pc_annihilators),
    "module_axiom": ("(v∧w)⌟α = v⌟(w⌟α)", _pc_module_axiom),
    "h1t_derivation": ("v⌟(α∧β) = (v⌟α)∧β + ± α∧(v⌟β)", _pc_derivation),
    "twist_commutation_h1t": ("a∧(v⌟β) = v⌟(a∧β) - (v⌟a)∧β", _pc_commutation),
    "propagation": ("compatibility spreads from generators", _pc_propagation),
}


def pair_checks(model, rng):
    """All model-level checks as (name, anchor, ok, details)."""
    out = []
    for name, (anchor, fn) in sorted(PAIR_CHECKS.items()):
        ok, details = fn(model, rng)
        out.append((name, anchor, ok, details))
    return out


def _pair_case(model_name, fn):
    def run(rng):
        return fn(PAIR_MODELS[model_name](), rng)
    return run


for _m in ("torus2", "k3_b3"):
    for _lab, (_anchor, _fn) in PAIR_CHECKS.items():
        case("pair", f"{_m}_{_lab}", _anchor)(_pair_case(_m, _fn))


@case("pair", "cy_corner_containment", "corners (0,0),(1,1),(m-1,m-1),(m,m) lie in R")
def _cy(rng):
    model = hodgepair.cy_like_model(3, 2, 1, seed=rng.randint(0, 1000))
    return hodgepair.corner_containment(model), f"dim R = {len(hodgepair.r_annihilator(model))}"


@case("pair", "mukai_point_class_torus", "(-1)^n ∫ γ∧γ = 0 for the point class")
def _mukai_pt(rng):
    T = hodgepair.torus_model(2)
    top = [k for k in range(T.mod_dim) if T.mod_bideg[k] == (2, 2)]
    val = hodgepair.mukai_chi(T, T.mod_basis(top[0]))
    return val == 0, f"value {fmt(val)}"


@case("pair", "mukai_anisotropic_k3", "(-1)^n ∫ γ∧γ ≠ 0 for q(γ) ≠ 0")
def _mukai_k3(rng):
    K = hodgepair.k3_like_model(3)
    val = hodgepair.mukai_chi(K, hodgepair.k3_h2_class(K, h=[1]))
    return val != 0, f"value {fmt(val)}"


@case("pair", "fault_injection_torus2", "a broken pair is caught past the generators")
def _fault(rng):
    T = hodgepair.torus_model(2)
    a, hh, std, tw = _pair_setup(T, rng)
    gens = hodgepair.top_holomorphic_generators(T, tw)
    probes = [(T.alg_labels[i], T.alg_basis(i)) for i in T.alg_indices(degree=1)]
    br = hodgepair.break_pair(T, hh, tw, gens, probes, keep_depth=1, seed=rng.randint(0, 100))
    r = hodgepair.propagate_module_compat(T, hh, br, gens, probes)
    return (not r.ok and r.failure_kind == "propagation"), f"{r.failure_kind} via {r.chain}"


# -- jacobi ---------------------------------------------------------------------------

def _rd(rng, labels=("x", "z"), **kw):
    return jacobi.random_diagram(rng, list(labels), **kw)


@case("jacobi", "union_commutative", "C ∪ D = D ∪ C")
def _jc(rng):
    for _ in range(100):
        c, d = _rd(rng), _rd(rng)
        if jacobi.union_product(c, d) != jacobi.union_product(d, c):
            return False, "mismatch"
    return True, "100 random pairs"


@case("jacobi", "juxtapose_associative", "(C ⋈ D) ⋈ E = C ⋈ (D ⋈ E)")
def _ja(rng):
    kinds = {"x": jacobi.INTERVAL}
    for _ in range(30):
        c, d, e = (_rd(rng, kinds=kinds) for _ in range(3))
        if jacobi.juxtapose(jacobi.juxtapose(c, d, "x"), e, "x") != \
                jacobi.juxtapose(c, jacobi.juxtapose(d, e, "x"), "x"):
            return False, "mismatch"
    return True, "30 random triples"


def no_xx(rng, labels=("x", "z"), **kw):
    while True:
        d = _rd(rng, labels, **kw)
        if not d.has_strut_within(["x"]):
            return d


@case("jacobi", "glue_vs_pairing_with_exp_strut", "Δ^x_y(C ⌟ D) = <C ∪ exp(strut_xy), D>")
def _jg(rng):
    for _ in range(10):
        c, d = no_xx(rng, max_tri=2, max_legs=3), no_xx(rng, max_tri=2, max_legs=4)
        lhs = jacobi.relabel(jacobi.inner_glue(c, d, "x"), "x", "y")
        k = d.leg_count("x")
        e = jacobi.exp_strut("x", "y", k)
        rhs = jacobi.pairing(jacobi.union_product(jacobi.DiagramSeries.of(c, c.degree + k), e, D=c.degree + k),
                             jacobi.DiagramSeries.of(d), ["x"], D=c.degree + d.degree + k)
        lhs = lhs.truncate(rhs.max_degree)
        if lhs != rhs:
            return False, f"mismatch for {c} and {d}"
    return True, "10 random pairs"


@case("jacobi", "inner_glue_leibniz", "C ⌟ (D1 ∪ D2) via splitting C")
def _jl(rng):
    for _ in range(10):
        c = no_xx(rng, max_tri=2, max_legs=2)
        d1, d2 = no_xx(rng, max_tri=2, max_legs=3), no_xx(rng, max_tri=2, max_legs=3)
        if leibniz_sides(c, d1, d2) is False:
            return False, "mismatch"
    return True, "10 random triples"


def leibniz_sides(c, d1, d2):
    lhs = jacobi.inner_glue(c, jacobi.union_product(d1, d2), "x", D=c.degree + d1.degree + d2.degree)
    s = jacobi.split(c, "x", "x1", "x2")
    u = jacobi.union_product(jacobi.relabel(d1, "x", "x1"), jacobi.relabel(d2, "x", "x2"),
                             D=d1.degree + d2.degree)
    rhs = jacobi.inner_glue(s, u, ["x1", "x2"], D=lhs.max_degree)
    rhs = jacobi.relabel(jacobi.relabel(rhs, "x1", "x"), "x2", "x")
    return lhs == rhs


@case("jacobi", "split_collapse_counts", "collapse(split C) = 2^m C")
def _js(rng):
    for _ in range(20):
        c = _rd(rng, ("y", "z"))
        s = jacobi.relabel(jacobi.relabel(jacobi.split(c, "y", "a", "b"), "a", "y"), "b", "y")
        m = c.leg_count("y")
        if s != jacobi.DiagramSeries.of(c).scale(2 ** m):
            return False, "mismatch"
    return True, "20 random diagrams"


@case("jacobi", "exp_strut_pairing", "<exp(strut_xy), exp(strut_xz)> = exp(strut_yz)")
def _je(rng):
    D = 4
    p = jacobi.pairing(jacobi.exp_strut("x", "y", D), jacobi.exp_strut("x", "z", D), ["x"])
    return p == jacobi.exp_strut("y", "z", D), f"degree ≤ {D}"


def wheel_identities(rng, D):
    coeffs = {2 * m: Fraction(rng.randint(-5, 5), rng.randint(1, 9)) for m in range(1, D // 2 + 2)}
    om = jacobi.wheel_series("x", coeffs, D + 2)
    e = jacobi.exp_strut("x", "y", D + 2)
    lhs1 = jacobi.inner_glue(om, e, "x").truncate(D)
    rhs1 = jacobi.union_product(jacobi.relabel(om, "x", "y"), e).truncate(D)
    half = jacobi.DiagramSeries.of(jacobi.strut("x", "x"), D + 2).scale(Fraction(1, 2))
    lhs2 = jacobi.inner_glue(om, jacobi.union_product(e, half), "x").truncate(D)
    hy = jacobi.DiagramSeries.of(jacobi.strut("y", "y"), D + 2).scale(Fraction(1, 2))
    rhs2 = jacobi.inner_glue(hy, jacobi.union_product(jacobi.relabel(om, "x", "y"), e), "y").truncate(D)
    return (lhs1, rhs1), (lhs2, rhs2), coeffs


@case("jacobi", "wheel_identities_on_the_nose", "Ω⌟exp(strut) = Ω ∪ exp(strut) and its strut variant")
def _jw(rng):
    (l1, r1), (l2, r2), coeffs = wheel_identities(rng, 3)
    return l1 == r1 and l2 == r2, "random wheel series, degree ≤ 3"


# -- weights --------------------------------------------------------------------------

BACKENDS = ("abelian3", "sl2", "gl2")


@case("weights", "relation_instances_vanish", "AS, IHX, STU in the kernel of weight systems")
def _wr(rng):
    insts = weights.generate_relation_instances(rng, count=8)
    bad = []
    for b in BACKENDS:
        g, m = weights.backend(b)
        bad += [(b, i.kind) for i in insts if not weights.check_relation_vanishing(i, g, m)]
    return not bad, f"{len(insts)} instances x {len(BACKENDS)} backends, {len(bad)} nonzero"


@case("weights", "naive_oracle_agrees", "contraction order does not matter")
def _wn(rng):
    g = weights.backend("sl2")
    for _ in range(10):
        kind = rng.choice([jacobi.STAR, jacobi.INTERVAL, jacobi.CIRCLE])
        d = jacobi.random_diagram(rng, ["x"], max_tri=2, max_legs=2, kinds={"x": kind})
        if weights.evaluate(d, g) != weights.evaluate_naive(d, g):
            return False, f"mismatch on {d}"
    return True, "10 random diagrams, sl2"


@case("weights", "theta_sl2", "theta = c_abc c^abc")
def _wt(rng):
    theta = jacobi.JacobiDiagram([(1, 2, 3), (4, 5, 6)], {}, [(1, 4), (2, 6), (3, 5)])
    v = weights.evaluate(theta, weights.backend("sl2")).scalar()
    return v == 12, f"value {fmt(v)}"


@case("weights", "wheel_identities", "weight-system check of both wheel identities")
def _ww(rng):
    (l1, r1), (l2, r2), _ = wheel_identities(rng, 3)
    reps = [weights.verify_series_identity(l, r, 3, ["gl2", "sl2"]) for l, r in ((l1, r1), (l2, r2))]
    return all(r["status"] == "consistent" for r in reps), "degree ≤ 3, gl2 and sl2: " + \
        ", ".join(r["status"] for r in reps)


@case("weights", "linearity_control", "strut vs 2·strut differ")
def _wl(rng):
    s = jacobi.DiagramSeries.of(jacobi.strut("x", "y"))
    r = weights.verify_series_identity(s, s.scale(2), 1, ["sl2"])
    return r["status"] == "inconsistent", r["status"]


# -- holonomy -------------------------------------------------------------------------

@case("holonomy", "power_equation_64", "e k (k+1) = 2^k")
def _hp(rng):
    r = holonomy.check_power_equation(64)
    return r.solutions == [(1, 1)] and r.proof_checked, r.proof


def chi_brute(n):
    out = []
    for k in range(1, n + 1):
        for p in combinations_with_replacement(range(n, 0, -1), k):
            if sum(p) != n:
                continue
            prod = 1
            for x in p:
                prod *= 1 + x
            if prod % (n + 1) == 0:
                out.append((prod // (n + 1), list(p)))
    return sorted(out, key=lambda t: (t[1], t[0]), reverse=True)


@case("holonomy", "chi_enumeration_vs_brute_force", "d (1+n) = Π (1+n_i)")
def _hc(rng):
    for n in range(1, 13):
        got = sorted(holonomy.enumerate_chi_solutions(n), key=lambda t: (t[1], t[0]), reverse=True)
        if got != chi_brute(n):
            return False, f"n={n}"
    return True, "n = 1..12"


@case("holonomy", "ihs_constrained_trivial", "all n_i = 1, d = e k")
def _hi(rng):
    s = holonomy.ihs_constrained_solutions(64)
    return s == [(1, 1)], str(s)


@case("holonomy", "normalizer_family", "ρ defined exactly on the normalizer")
def _hn(rng):
    fam = holonomy.generated_family([1, 1, 2], 60, seed=rng.randint(0, 1000))
    fam += holonomy.generated_family([1, 1], 40, seed=rng.randint(0, 1000))
    bad, inside = 0, 0
    for _, M in fam:
        nz = holonomy.is_in_normalizer(M)
        try:
            holonomy.induced_permutation(M)
            ok = True
        except holonomy.NormalizerError:
            ok = False
        bad += nz != ok
        inside += nz
    return bad == 0, f"{len(fam)} matrices, {inside} in the normalizer, {bad} disagreements"


@case("holonomy", "rho_multiplicative", "ρ(AB) = ρ(A)∘ρ(B)")
def _hm(rng):
    blocks = [1, 1, 1]
    for _ in range(15):
        A = holonomy.random_normalizer_element(blocks, rng)
        B = holonomy.random_normalizer_element(blocks, rng)
        ra, _ = holonomy.induced_permutation(A)
        rb, _ = holonomy.induced_permutation(B)
        rab, _ = holonomy.induced_permutation(A @ B)
        if rab != [ra[rb[i]] for i in range(len(blocks))]:
            return False, "not multiplicative"
    return True, "15 pairs, blocks 1,1,1"


# -- runner ----------------------------------------------------------------------------

def run_suite(name, seed=0):
    if name == "all":
        names = list(SUITES)
    elif name in _CASES:
        names = [name]
    else:
        raise KeyError(name)
    cases = []
    for s in names:
        for cname, anchor, fn in _CASES[s]:
            full = cname if name != "all" else f"{s}.{cname}"
            try:
                ok, details = fn(_rng(seed, f"{s}.{cname}"))
                status = "pass" if ok else "fail"
            except Exception as e:  # reported, not raised
                status, details = "error", f"{type(e).__name__}: {e}"
            cases.append({"name": full, "status": status, "details": details, "anchor": anchor})
    cases.sort(key=lambda c: c["name"])
    summary = {k: sum(1 for c in cases if c["status"] == k) for k in ("pass", "fail", "error")}
    return {"suite": name, "seed": seed, "cases": cases, "summary": summary}
