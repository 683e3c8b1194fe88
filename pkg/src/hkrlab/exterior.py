"""Exterior algebra over Q with wedge and the two contractions.

Elements are polyvectors (basis e_1..e_n) or forms (dual basis e^1..e^n) on
an odd space of dimension n.  Monomials are keyed by strictly increasing
index tuples.

Sign conventions:

* e_i ⌟ (e^{j1}∧...∧e^{jq}) = sum_t (-1)^(t-1) δ(i, j_t) · (drop e^{j_t})
* e^j ⌟ e_i = -δ(i, j), extended as an antiderivation
* multivector contraction nests outermost first: (u∧v)⌟β = u⌟(v⌟β)
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

POLYVECTOR = "polyvector"
FORM = "form"


class ExteriorError(ValueError):
    pass


@dataclass(frozen=True)
class OddSpace:
    dim: int

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ExteriorError(f"dimension must be a positive integer, got {self.dim!r}")

    def monomials(self, degree=None):
        """Index tuples of the given degree, or of every degree."""
        rng = range(self.dim + 1) if degree is None else [degree]
        out = []
        for k in rng:
            out.extend(combinations(range(1, self.dim + 1), k))
        return out

    def label(self, variance, idx):
        if not idx:
            return "1"
        sym = "e_" if variance == POLYVECTOR else "e^"
        return "∧".join(f"{sym}{i}" for i in idx)


def _sort_sign(seq):
    """Sign of the permutation sorting seq, or 0 if seq has a repeat."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class ExteriorElement:
    space: OddSpace
    variance: str
    _items: tuple = field(default=())

    @classmethod
    def from_dict(cls, space, variance, terms):
        if variance not in (POLYVECTOR, FORM):
            raise ExteriorError(f"unknown variance {variance!r}")
        clean = {}
        for idx, c in terms.items():
            idx = tuple(idx)
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise ExteriorError(f"index tuple {idx} not strictly increasing")
            if idx and (idx[0] < 1 or idx[-1] > space.dim):
                raise ExteriorError(f"index tuple {idx} out of range for dim {space.dim}")
            c = Fraction(c)
            if c:
                clean[idx] = clean.get(idx, Fraction(0)) + c
        items = tuple(sorted((k, v) for k, v in clean.items() if v))
        return cls(space, variance, items)

    @classmethod
    def monomial(cls, space, variance, indices, coeff=1):
        """Wedge of basis elements in the given (unsorted) order."""
        s = _sort_sign(indices)
        if s == 0:
            return cls.zero(space, variance)
        return cls.from_dict(space, variance, {tuple(sorted(indices)): s * Fraction(coeff)})

    @classmethod
    def zero(cls, space, variance):
        return cls(space, variance, ())

    @classmethod
    def one(cls, space, variance):
        return cls.from_dict(space, variance, {(): 1})

    @property
    def terms(self):
        return dict(self._items)

    def is_zero(self):
        return not self._items

    def degrees(self):
        return sorted({len(k) for k, _ in self._items})

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        ds = self.degrees()
        if len(ds) > 1:
            raise ExteriorError("element is not homogeneous")
        return ds[0] if ds else 0

    def part(self, degree):
        return ExteriorElement.from_dict(
            self.space, self.variance, {k: v for k, v in self._items if len(k) == degree}
        )

    def coefficient(self, idx):
        return self.terms.get(tuple(idx), Fraction(0))

    def _check(self, other):
        if self.space != other.space:
            raise ExteriorError("space mismatch")
        if self.variance != other.variance:
            raise ExteriorError("variance mismatch")

    def __add__(self, other):
        self._check(other)
        t = self.terms
        for k, v in other._items:
            t[k] = t.get(k, Fraction(0)) + v
        return ExteriorElement.from_dict(self.space, self.variance, t)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return ExteriorElement.from_dict(self.space, self.variance, {k: c * v for k, v in self._items})

    def __rmul__(self, c):
        return self.scale(c)

    def __xor__(self, other):
        return wedge(self, other)

    def __repr__(self):
        if not self._items:
            return "0"
        parts = []
        for k, v in self._items:
            parts.append(f"{v}*{self.space.label(self.variance, k)}")
        return " + ".join(parts)


def wedge(a, b):
    a._check(b)
    out = {}
    for ka, va in a._items:
        for kb, vb in b._items:
            s = _sort_sign(ka + kb)
            if s:
                key = tuple(sorted(ka + kb))
                out[key] = out.get(key, Fraction(0)) + s * va * vb
    return ExteriorElement.from_dict(a.space, a.variance, out)


def _vector_into_form(i, mono):
    # e_i ⌟ e^{mono}
    if i not in mono:
        return None
    t = mono.index(i)
    return (-1) ** t, mono[:t] + mono[t + 1:]


def _covector_into_poly(j, mono):
    # e^j ⌟ e_{mono}, with e^j ⌟ e_j = -1
    if j not in mono:
        return None
    t = mono.index(j)
    return -((-1) ** t), mono[:t] + mono[t + 1:]


def _nested(step, outer, inner_items):
    """Apply outer = g_1 ∧ ... ∧ g_k as g_1 ⌟ (... (g_k ⌟ x))."""
    current = dict(inner_items)
    for g in reversed(outer):
        nxt = {}
        for mono, c in current.items():
            r = step(g, mono)
            if r is None:
                continue
            s, rest = r
            nxt[rest] = nxt.get(rest, Fraction(0)) + s * c
        current = {k: v for k, v in nxt.items() if v}
        if not current:
            break
    return current


def _contract(step, a, b, out_variance):
    out = {}
    for ka, va in a._items:
        for kb, vb in _nested(step, ka, b._items).items():
            out[kb] = out.get(kb, Fraction(0)) + va * vb
    return ExteriorElement.from_dict(b.space, out_variance, out)


def contract_poly_into_form(w, beta):
    if w.space != beta.space:
        raise ExteriorError("space mismatch")
    if w.variance != POLYVECTOR or beta.variance != FORM:
        raise ExteriorError("expected (polyvector, form)")
    return _contract(_vector_into_form, w, beta, FORM)


def contract_form_into_poly(beta, w):
    if w.space != beta.space:
        raise ExteriorError("space mismatch")
    if beta.variance != FORM or w.variance != POLYVECTOR:
        raise ExteriorError("expected (form, polyvector)")
    return _contract(_covector_into_poly, beta, w, POLYVECTOR)


def top_form(space, coeff=1):
    return ExteriorElement.from_dict(space, FORM, {tuple(range(1, space.dim + 1)): coeff})


def innermax_sides(beta, beta_p, w):
    """Both sides of (-1)^l (β'⌟w)⌟β = β'∧(w⌟β)."""
    space = beta.space
    if beta.variance != FORM or beta.degrees() != [space.dim]:
        raise ExteriorError("β must be a nonzero form of top degree")
    ell = beta_p.degree()
    lhs = contract_poly_into_form(contract_form_into_poly(beta_p, w), beta).scale((-1) ** ell)
    rhs = wedge(beta_p, contract_poly_into_form(w, beta))
    return lhs, rhs


def check_innermax(space, beta, beta_p, w):
    if beta.space != space or beta_p.space != space or w.space != space:
        raise ExteriorError("space mismatch")
    lhs, rhs = innermax_sides(beta, beta_p, w)
    return lhs == rhs


def innermax_exhaustive(n):
    """Check the identity on every basis pair (β', w) in dimension n.

    Returns (number of pairs checked, list of failing (β', w) index pairs).
    """
    space = OddSpace(n)
    beta = top_form(space)
    failures = []
    count = 0
    for bp in space.monomials():
        beta_p = ExteriorElement.from_dict(space, FORM, {bp: 1})
        for wi in space.monomials():
            w = ExteriorElement.from_dict(space, POLYVECTOR, {wi: 1})
            count += 1
            if not check_innermax(space, beta, beta_p, w):
                failures.append((bp, wi))
    return count, failures
