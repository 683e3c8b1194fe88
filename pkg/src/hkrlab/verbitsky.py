"""The quotient S*H^2 / <α^{n+1} : q(α) = 0> and recovery of q from α ↦ α^{2n}.

Polynomials in the basis x_1..x_b of H^2 are dicts {exponent tuple: Fraction}.
Monomials of a fixed degree are listed in descending lexicographic order, so
x_1^d comes first.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial

from . import linalg
from .linalg import frac


class VerbitskyError(ValueError):
    pass


def monomials(b, d):
    if b == 1:
        return [(d,)]
    out = []
    for k in range(d, -1, -1):
        out.extend((k,) + rest for rest in monomials(b - 1, d - k))
    return out


def multinomial(e):
    c = factorial(sum(e))
    for k in e:
        c //= factorial(k)
    return c


def poly_mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return {e: c for e, c in out.items() if c}


def poly_pow(a, k, b):
    out = {(0,) * b: Fraction(1)}
    for _ in range(k):
        out = poly_mul(out, a)
    return out


def linear_form(vec):
    b = len(vec)
    return {tuple(int(i == j) for j in range(b)): frac(c) for i, c in enumerate(vec) if frac(c)}


def quadratic_poly(gram):
    """q(a) = a^T G a as a polynomial in the coordinates a."""
    b = len(gram)
    out = {}
    for i in range(b):
        for j in range(b):
            if gram[i][j]:
                e = [0] * b
                e[i] += 1
                e[j] += 1
                e = tuple(e)
                out[e] = out.get(e, Fraction(0)) + gram[i][j]
    return {e: c for e, c in out.items() if c}


def poly_eval(p, point):
    point = [frac(x) for x in point]
    total = Fraction(0)
    for e, c in p.items():
        t = c
        for x, k in zip(point, e):
            if k:
                t *= x ** k
        total += t
    return total


def substitute_linear(p, g):
    """Replace x_j by sum_i g[i][j] x_i (the action of g on H^2)."""
    b = len(g)
    images = [linear_form([g[i][j] for i in range(b)]) for j in range(b)]
    out = {}
    for e, c in p.items():
        term = {(0,) * b: c}
        for j, k in enumerate(e):
            for _ in range(k):
                term = poly_mul(term, images[j])
        for m, v in term.items():
            out[m] = out.get(m, Fraction(0)) + v
    return {m: v for m, v in out.items() if v}


@dataclass(frozen=True)
class QuadraticSpace:
    gram: tuple

    def __init__(self, gram):
        g = tuple(tuple(frac(x) for x in row) for row in gram)
        object.__setattr__(self, "gram", g)
        b = len(g)
        if any(len(r) != b for r in g):
            raise VerbitskyError("gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(b) for j in range(b)):
            raise VerbitskyError("gram matrix must be symmetric")
        if linalg.det([list(r) for r in g]) == 0:
            raise VerbitskyError("gram matrix is degenerate")

    @property
    def dim(self):
        return len(self.gram)

    def q(self, a, c=None):
        c = a if c is None else c
        a = [frac(x) for x in a]
        c = [frac(x) for x in c]
        return sum((a[i] * self.gram[i][j] * c[j] for i in range(self.dim) for j in range(self.dim)), Fraction(0))

    def reflection(self, v):
        """Matrix of x ↦ x - 2 q(x, v)/q(v) v; columns are images of basis vectors."""
        qv = self.q(v)
        if qv == 0:
            raise VerbitskyError("cannot reflect in an isotropic vector")
        b = self.dim
        v = [frac(x) for x in v]
        m = linalg.identity(b)
        for j in range(b):
            ej = [Fraction(int(i == j)) for i in range(b)]
            s = 2 * self.q(ej, v) / qv
            for i in range(b):
                m[i][j] -= s * v[i]
        return m


@dataclass
class VElement:
    """Homogeneous element of polynomial degree ``degree``; coords over the quotient basis."""
    degree: int
    coords: tuple

    def is_zero(self):
        return not any(self.coords)


class VerbitskyAlgebra:
    def __init__(self, space, n, max_degree=None):
        if not isinstance(space, QuadraticSpace):
            space = QuadraticSpace(space)
        if space.dim < 3:
            raise VerbitskyError("need b >= 3")
        if n < 1:
            raise VerbitskyError("need n >= 1")
        self.space = space
        self.n = n
        self.b = space.dim
        self.max_degree = 2 * n + 1 if max_degree is None else max(max_degree, 0)
        self._monos = {}
        self._index = {}
        self._ideal = {}
        self._pivots = {}
        self._basis = {}
        self._build()
        self._gauge()

    # -- construction --------------------------------------------------------
    def monomials(self, d):
        if d not in self._monos:
            self._monos[d] = monomials(self.b, d)
            self._index[d] = {m: i for i, m in enumerate(self._monos[d])}
        return self._monos[d]

    def laplacian_matrix(self):
        """Matrix of Σ G_ij ∂_i ∂_j : S^{n+1} → S^{n-1}."""
        n, b, G = self.n, self.b, self.space.gram
        src, tgt = self.monomials(n + 1), self.monomials(n - 1)
        tidx = self._index[n - 1]
        mat = linalg.zeros(len(tgt), len(src))
        for col, e in enumerate(src):
            for i in range(b):
                for j in range(b):
                    if not G[i][j]:
                        continue
                    e2 = list(e)
                    c = e2[i]
                    e2[i] -= 1
                    if c == 0:
                        continue
                    c *= e2[j]
                    e2[j] -= 1
                    if c <= 0:
                        continue
                    mat[tidx[tuple(e2)]][col] += G[i][j] * c
        return mat

    def harmonic_kernel(self):
        """Basis of ker Δ_q in degree n+1, as coefficient vectors over monomials."""
        return linalg.nullspace(self.laplacian_matrix(), len(self.monomials(self.n + 1)))

    def _build(self):
        n = self.n
        kernel = self.harmonic_kernel()
        kpolys = [{m: c for m, c in zip(self.monomials(n + 1), v) if c} for v in kernel]
        self._kernel_polys = kpolys
        for d in range(self.max_degree + 1):
            ms = self.monomials(d)
            rows = []
            if d >= n + 1:
                for m in self.monomials(d - n - 1):
                    for kp in kpolys:
                        prod = poly_mul({m: Fraction(1)}, kp)
                        rows.append(self._vec(d, prod))
            red, piv = linalg.rref(rows, len(ms)) if rows else ([], ())
            self._ideal[d] = red
            self._pivots[d] = piv
            self._basis[d] = [i for i in range(len(ms)) if i not in set(piv)]

    def _vec(self, d, poly):
        idx = self._index[d]
        v = [Fraction(0)] * len(self._monos[d])
        for m, c in poly.items():
            v[idx[m]] += c
        return v

    def _gauge(self):
        top = 2 * self.n
        if top > self.max_degree:
            self._top = None
            return
        if len(self._basis[top]) != 1:
            raise VerbitskyError(f"top component has dimension {len(self._basis[top])}, expected 1")
        vals = [self.normal_form(top, self._unit_vec(top, i))[0] for i in range(len(self._monos[top]))]
        first = next(i for i, v in enumerate(vals) if v)
        self._top = (first, [v / vals[first] for v in vals])

    def _unit_vec(self, d, i):
        v = [Fraction(0)] * len(self._monos[d])
        v[i] = Fraction(1)
        return v

    # -- reduction and products ---------------------------------------------
    def dims(self):
        """Quotient dimension in each polynomial degree 0..max_degree."""
        return [len(self._basis[d]) for d in range(self.max_degree + 1)]

    def cohomological_dims(self, max_cdeg):
        """Dimensions in cohomological degrees 0, 2, ..., max_cdeg."""
        out = []
        for c in range(0, max_cdeg + 1, 2):
            d = c // 2
            if d > self.max_degree:
                if self.dims()[self.max_degree] != 0:
                    raise VerbitskyError("requested degree beyond computed range")
                out.append(0)
            else:
                out.append(len(self._basis[d]))
        return out

    def basis_monomials(self, d):
        return [self._monos[d][i] for i in self._basis[d]]

    def ideal_rows(self, d):
        return [list(r) for r in self._ideal[d]]

    def normal_form(self, d, vec):
        """Coordinates over the quotient basis of the class of vec."""
        v = list(vec)
        for row, p in zip(self._ideal[d], self._pivots[d]):
            c = v[p]
            if c:
                for k, x in enumerate(row):
                    if x:
                        v[k] -= c * x
        return tuple(v[i] for i in self._basis[d])

    def element(self, poly, degree=None):
        if degree is None:
            degs = {sum(e) for e in poly} or {0}
            if len(degs) != 1:
                raise VerbitskyError("polynomial is not homogeneous")
            degree = degs.pop()
        if degree > self.max_degree:
            return self._overflow(degree)
        self.monomials(degree)
        return VElement(degree, self.normal_form(degree, self._vec(degree, poly)))

    def _overflow(self, degree):
        if self.dims()[self.max_degree] != 0:
            raise VerbitskyError(f"degree {degree} beyond computed range {self.max_degree}")
        return VElement(degree, ())

    def lift(self, u):
        if not u.coords:
            return {}
        ms = self.basis_monomials(u.degree)
        return {m: c for m, c in zip(ms, u.coords) if c}

    def unit(self):
        return self.element({(0,) * self.b: Fraction(1)})

    def h2(self, vec):
        return self.element(linear_form(vec), 1)

    def basis_element(self, d, k):
        c = [Fraction(0)] * len(self._basis[d])
        c[k] = Fraction(1)
        return VElement(d, tuple(c))

    def multiply(self, u, v):
        d = u.degree + v.degree
        if d > self.max_degree:
            return self._overflow(d)
        return self.element(poly_mul(self.lift(u), self.lift(v)), d)

    def add(self, u, v):
        if u.degree != v.degree:
            raise VerbitskyError("degree mismatch")
        return VElement(u.degree, tuple(a + b for a, b in zip(u.coords, v.coords)))

    def scale(self, c, u):
        c = frac(c)
        return VElement(u.degree, tuple(c * a for a in u.coords))

    def power(self, u, k):
        out = self.unit()
        for _ in range(k):
            out = self.multiply(out, u)
        return out

    # -- top degree -----------------------------------------------------------
    def omega_monomial(self):
        if self._top is None:
            raise VerbitskyError("top degree not computed")
        return self._monos[2 * self.n][self._top[0]]

    def integral(self, u):
        """Top-degree functional, normalised so the first monomial with nonzero value gives 1."""
        if u.degree != 2 * self.n:
            return Fraction(0)
        vals = self._top[1]
        poly = self.lift(u)
        idx = self._index[u.degree]
        return sum((c * vals[idx[m]] for m, c in poly.items()), Fraction(0))

    def monomial_integral(self, e):
        return self._top[1][self._index[sum(e)][tuple(e)]]

    def top_power_form(self):
        """f(a) = ∫ (Σ a_i x_i)^{2n} as a polynomial in the coordinates a."""
        top = 2 * self.n
        out = {}
        for e in self.monomials(top):
            c = multinomial(e) * self.monomial_integral(e)
            if c:
                out[e] = Fraction(c)
        return out

    def fujiki_check(self, alphas):
        """Check ∫α^{2n} = c q(α)^n with one constant c; returns (c, ok)."""
        c = None
        for a in alphas:
            lhs = self.integral(self.power(self.h2(a), 2 * self.n))
            qn = self.space.q(a) ** self.n
            if qn == 0:
                if lhs != 0:
                    return c, False
                continue
            if c is None:
                c = lhs / qn
            elif lhs != c * qn:
                return c, False
        return c, True

    def ideal_stable_under(self, g):
        """Is the degree-(n+1) ideal part mapped into itself by g ∈ GL(H^2)?"""
        d = self.n + 1
        rows = self.ideal_rows(d)
        images = []
        for r in rows:
            poly = {m: c for m, c in zip(self._monos[d], r) if c}
            images.append(self._vec(d, substitute_linear(poly, g)))
        return linalg.span_equal(rows, images, len(self._monos[d]))


# -- form recovery ------------------------------------------------------------

def _shifted_univariate(f, a0, beta):
    """Coefficients of t ↦ f(a0 + t beta)."""
    deg = max((sum(e) for e in f), default=0)
    out = [Fraction(0)] * (deg + 1)
    for e, c in f.items():
        poly = [c]
        for x0, bx, k in zip(a0, beta, e):
            for _ in range(k):
                nxt = [Fraction(0)] * (len(poly) + 1)
                for i, p in enumerate(poly):
                    nxt[i] += p * x0
                    nxt[i + 1] += p * bx
                poly = nxt
        for i, p in enumerate(poly):
            out[i] += p
    return out


def _root_series(g, n, D):
    """(g/g0)^{1/n} to order D via the binomial series."""
    g0 = g[0]
    u = [x / g0 for x in g] + [Fraction(0)] * (D + 1)
    u[0] = Fraction(0)
    u = u[: D + 1]
    out = [Fraction(0)] * (D + 1)
    out[0] = Fraction(1)
    upow = [Fraction(1)] + [Fraction(0)] * D
    coef = Fraction(1)
    for k in range(1, D + 1):
        coef = coef * (Fraction(1, n) - (k - 1)) / k
        nxt = [Fraction(0)] * (D + 1)
        for i, a in enumerate(upow):
            if a:
                for j in range(1, D + 1 - i):
                    nxt[i + j] += a * u[j]
        upow = nxt
        for i in range(D + 1):
            out[i] += coef * upow[i]
    return out


@dataclass
class RecoveredForm:
    gram: list
    scale: Fraction
    probe: list
    sign_ambiguous: bool

    def space(self):
        return QuadraticSpace(self.gram)


def _candidate_probes(b):
    for k in range(1, 4):
        for v in product(range(k + 1), repeat=b):
            if max(v) == k:
                yield [Fraction(x) for x in v]


def recover_q(f, n, probe=None):
    """Find q with f = f(α0) q^n, q(α0) = 1, by univariate roots along lines."""
    if not f:
        raise VerbitskyError("zero form")
    b = len(next(iter(f)))
    if probe is None:
        probe = next((p for p in _candidate_probes(b) if poly_eval(f, p)), None)
        if probe is None:
            raise VerbitskyError("no probe with f != 0 found")
    probe = [frac(x) for x in probe]
    f0 = poly_eval(f, probe)
    if f0 == 0:
        raise VerbitskyError("probe has f(probe) = 0")

    def along(beta):
        g = _shifted_univariate(f, probe, beta)
        h = _root_series(g, n, 2)
        # h must be a quadratic polynomial whose n-th power is g/g0 exactly
        hn = [Fraction(1)]
        for _ in range(n):
            nxt = [Fraction(0)] * (len(hn) + 2)
            for i, a in enumerate(hn):
                for j, c in enumerate(h):
                    nxt[i + j] += a * c
            hn = nxt
        target = [x / g[0] for x in g] + [Fraction(0)] * (len(hn) - len(g))
        if hn != target:
            raise VerbitskyError(f"f is not an n-th power of a quadratic form (probe {beta})")
        return h

    basis = [[Fraction(int(i == j)) for j in range(b)] for i in range(b)]
    diag = [along(e)[2] for e in basis]
    gram = [[Fraction(0)] * b for _ in range(b)]
    for i in range(b):
        gram[i][i] = diag[i]
        for j in range(i + 1, b):
            s = along([x + y for x, y in zip(basis[i], basis[j])])[2]
            gram[i][j] = gram[j][i] = (s - diag[i] - diag[j]) / 2
    # cross-check the linear coefficient against the polarisation
    for e in basis:
        lin = along(e)[1] / 2
        pol = sum((probe[i] * gram[i][j] * e[j] for i in range(b) for j in range(b)), Fraction(0))
        if lin != pol:
            raise VerbitskyError("inconsistent polarisation across probes")
    qpoly = quadratic_poly(gram)
    expected = {m: f0 * c for m, c in poly_pow(qpoly, n, b).items()}
    if expected != {m: c for m, c in f.items() if c}:
        raise VerbitskyError("f is not a constant times an n-th power of the recovered form")
    return RecoveredForm(gram, f0, probe, n % 2 == 0)


# -- products of power forms ---------------------------------------------------

@dataclass
class ProductPowerForm:
    blocks: list  # [(QuadraticSpace, n_i)]
    form: dict = field(default=None)

    @property
    def dim(self):
        return sum(s.dim for s, _ in self.blocks)

    def expected(self):
        total = self.dim
        out = {(0,) * total: Fraction(1)}
        offset = 0
        for space, k in self.blocks:
            g = [[Fraction(0)] * total for _ in range(total)]
            for i in range(space.dim):
                for j in range(space.dim):
                    g[offset + i][offset + j] = space.gram[i][j]
            out = poly_mul(out, poly_pow(quadratic_poly(g), k, total))
            offset += space.dim
        return out

    def polynomial(self):
        return self.form if self.form is not None else self.expected()


@dataclass(frozen=True)
class Component:
    block: int
    rank: int
    multiplicity: int


def decompose_components(p):
    f = {m: c for m, c in p.polynomial().items() if c}
    g = p.expected()
    if not f:
        raise VerbitskyError("zero form")
    m0 = next(iter(g))
    c = f.get(m0, Fraction(0)) / g[m0]
    if c == 0 or {m: c * v for m, v in g.items()} != f:
        raise VerbitskyError("form is not a constant times the product of block powers")
    return [
        Component(i, linalg.rank([list(r) for r in s.gram]), k)
        for i, (s, k) in enumerate(p.blocks)
    ]


def load_model(data):
    """Parse {"gram": [[rational strings]], "n": int}."""
    if not isinstance(data, dict) or "gram" not in data or "n" not in data:
        raise VerbitskyError("model needs 'gram' and 'n'")
    gram = [[frac(x) for x in row] for row in data["gram"]]
    return VerbitskyAlgebra(QuadraticSpace(gram), int(data["n"]))


def total_basis(A, top=None):
    """(degree, k) labels of the quotient basis in degrees 0..top (default 2n)."""
    top = 2 * A.n if top is None else top
    return [(d, k) for d in range(top + 1) for k in range(A.dims()[d])]


def multiplication_matrix(A, u, top=None):
    """Matrix of v ↦ u·v on the direct sum of degrees 0..top."""
    labels = total_basis(A, top)
    pos = {lab: i for i, lab in enumerate(labels)}
    N = len(labels)
    m = linalg.zeros(N, N)
    for col, (d, k) in enumerate(labels):
        prod = A.multiply(u, A.basis_element(d, k))
        for kk, c in enumerate(prod.coords):
            if c:
                m[pos[(prod.degree, kk)]][col] = c
    return m
