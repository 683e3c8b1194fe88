"""Truncated power series in Chern roots: Â, td, square roots, exp(λ c1)."""
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial


class GenusError(ValueError):
    pass


# -- univariate series, stored as coefficient lists -------------------------

def series_div(num, den, D):
    """q with num = den*q to order D; den[0] must be nonzero."""
    if not den or den[0] == 0:
        raise GenusError("division by a series with zero constant term")
    num = list(num) + [Fraction(0)] * (D + 1 - len(num))
    den = list(den) + [Fraction(0)] * (D + 1 - len(den))
    q = []
    for k in range(D + 1):
        s = num[k] - sum((den[j] * q[k - j] for j in range(1, k + 1)), Fraction(0))
        q.append(s / den[0])
    return q


def ahat_univariate(D):
    """x / (e^{x/2} - e^{-x/2}), via division by (e^{x/2}-e^{-x/2})/x."""
    # (e^{x/2} - e^{-x/2})/x = sum_m c_m x^m with c_m from x^{m+1}
    den = []
    for m in range(D + 1):
        k = m + 1
        den.append(Fraction(2, 2 ** k * factorial(k)) if k % 2 else Fraction(0))
    return series_div([Fraction(1)], den, D)


def td_univariate(D):
    """x / (1 - e^{-x}), via division by (1 - e^{-x})/x."""
    den = [Fraction((-1) ** m, factorial(m + 1)) for m in range(D + 1)]
    return series_div([Fraction(1)], den, D)


def exp_univariate(lam, D):
    lam = Fraction(lam)
    return [lam ** k / factorial(k) for k in range(D + 1)]


def univariate_product(a, b, D):
    out = [Fraction(0)] * (D + 1)
    for i, x in enumerate(a[: D + 1]):
        if x:
            for j, y in enumerate(b[: D + 1 - i]):
                out[i + j] += x * y
    return out


# -- multivariate symmetric series ------------------------------------------

def _exponents(r, d):
    if r == 1:
        yield (d,)
        return
    for k in range(d, -1, -1):
        for rest in _exponents(r - 1, d - k):
            yield (k,) + rest


@dataclass(frozen=True)
class GenusSeries:
    roots: int
    max_degree: int
    items: tuple
    symmetric: bool = True

    @classmethod
    def from_dict(cls, roots, max_degree, terms, symmetric=True):
        if roots < 1 or max_degree < 0:
            raise GenusError("need roots >= 1 and max_degree >= 0")
        clean = {}
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != roots:
                raise GenusError(f"exponent {e} has wrong length")
            if sum(e) <= max_degree and c:
                clean[e] = clean.get(e, Fraction(0)) + Fraction(c)
        items = tuple(sorted((e, c) for e, c in clean.items() if c))
        return cls(roots, max_degree, items, symmetric)

    @classmethod
    def one(cls, roots, max_degree):
        return cls.from_dict(roots, max_degree, {(0,) * roots: 1})

    @property
    def terms(self):
        return dict(self.items)

    def coefficient(self, e):
        return self.terms.get(tuple(e), Fraction(0))

    def homogeneous(self, d):
        return {e: c for e, c in self.items if sum(e) == d}

    def truncate(self, D):
        return GenusSeries.from_dict(self.roots, min(D, self.max_degree), self.terms, self.symmetric)

    def is_symmetric(self):
        t = self.terms
        for e, c in t.items():
            for p in set(permutations(e)):
                if t.get(p, Fraction(0)) != c:
                    return False
        return True

    def _check(self, other):
        if self.roots != other.roots or self.max_degree != other.max_degree:
            raise GenusError("series have different roots or truncation degree")

    def __mul__(self, other):
        return series_product(self, other)

    def __add__(self, other):
        self._check(other)
        t = self.terms
        for e, c in other.items:
            t[e] = t.get(e, Fraction(0)) + c
        return GenusSeries.from_dict(self.roots, self.max_degree, t, self.symmetric and other.symmetric)

    def __repr__(self):
        body = " + ".join(f"{c}*x^{e}" for e, c in self.items) or "0"
        return f"GenusSeries(r={self.roots}, D={self.max_degree}: {body})"


def genus_from_univariate(f, r, D):
    f = [Fraction(c) for c in f]
    if len(f) < D + 1:
        raise GenusError("univariate series too short for the requested degree")
    if f[0] != 1:
        raise GenusError("univariate series must have constant term 1")
    terms = {}
    for d in range(D + 1):
        for e in _exponents(r, d):
            c = Fraction(1)
            for k in e:
                c *= f[k]
                if not c:
                    break
            if c:
                terms[e] = c
    return GenusSeries.from_dict(r, D, terms, True)


def series_product(a, b):
    a._check(b)
    out = {}
    for ea, ca in a.items:
        for eb, cb in b.items:
            if sum(ea) + sum(eb) <= a.max_degree:
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, Fraction(0)) + ca * cb
    return GenusSeries.from_dict(a.roots, a.max_degree, out, a.symmetric and b.symmetric)


def series_sqrt(a):
    """The unique square root with constant term 1."""
    zero = (0,) * a.roots
    if a.coefficient(zero) != 1 or any(sum(e) == 0 and e != zero for e, _ in a.items):
        raise GenusError("square root needs constant term 1")
    parts = [{zero: Fraction(1)}]
    for d in range(1, a.max_degree + 1):
        acc = dict(a.homogeneous(d))
        for i in range(1, d):
            for ei, ci in parts[i].items():
                for ej, cj in parts[d - i].items():
                    e = tuple(x + y for x, y in zip(ei, ej))
                    acc[e] = acc.get(e, Fraction(0)) - ci * cj
        parts.append({e: c / 2 for e, c in acc.items() if c})
    terms = {}
    for p in parts:
        terms.update(p)
    return GenusSeries.from_dict(a.roots, a.max_degree, terms, a.symmetric)


def series_exp_linear(lam, r, D):
    """exp(λ (x_1 + ... + x_r)) = prod_i exp(λ x_i)."""
    return genus_from_univariate(exp_univariate(lam, D), r, D)


def ahat(r, D):
    return genus_from_univariate(ahat_univariate(D), r, D)


def todd(r, D):
    return genus_from_univariate(td_univariate(D), r, D)


def named_series(name, r, D):
    if name == "ahat":
        return ahat(r, D)
    if name == "td":
        return todd(r, D)
    if name == "sqrt_ahat":
        return series_sqrt(ahat(r, D))
    if name == "exp_half_c1":
        return series_exp_linear(Fraction(1, 2), r, D)
    raise GenusError(f"unknown series {name!r}")


def check_todd_relation(r, D):
    lhs = todd(r, D)
    rhs = series_exp_linear(Fraction(1, 2), r, D) * ahat(r, D)
    return lhs == rhs


# -- symmetric reduction ----------------------------------------------------

def _elementary(k, r):
    """e_k(x_1..x_r) as an exponent dict."""
    from itertools import combinations
    out = {}
    for s in combinations(range(r), k):
        e = tuple(1 if i in s else 0 for i in range(r))
        out[e] = Fraction(1)
    return out


def _poly_mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return {e: c for e, c in out.items() if c}


def elementary_to_roots(cpoly, r):
    """Expand a polynomial in c_1..c_r back into the roots."""
    es = [_elementary(k, r) for k in range(1, r + 1)]
    out = {}
    for ce, coeff in cpoly.items():
        p = {(0,) * r: Fraction(coeff)}
        for k, power in enumerate(ce):
            for _ in range(power):
                p = _poly_mul(p, es[k])
        for e, c in p.items():
            out[e] = out.get(e, Fraction(0)) + c
    return {e: c for e, c in out.items() if c}


def to_elementary_basis(s):
    """Rewrite a symmetric series in c_i = e_i(x), deg c_i = i.

    Returns {(k_1, ..., k_r): coeff} meaning coeff * c_1^k_1 ... c_r^k_r.
    """
    if not s.symmetric or not s.is_symmetric():
        raise GenusError("series is not symmetric")
    r = s.roots
    rest = dict(s.terms)
    out = {}
    while rest:
        lead = max(rest)
        c = rest[lead]
        # lead is sorted nonincreasing for a symmetric polynomial
        ks = tuple(lead[i] - (lead[i + 1] if i + 1 < r else 0) for i in range(r))
        out[ks] = out.get(ks, Fraction(0)) + c
        for e, v in elementary_to_roots({ks: c}, r).items():
            rest[e] = rest.get(e, Fraction(0)) - v
            if not rest[e]:
                del rest[e]
    return {k: v for k, v in out.items() if v}
