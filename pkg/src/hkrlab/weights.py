"""Lie-algebra weight systems on Jacobi diagrams.

A trivalent vertex carries the lowered structure tensor c_abc = <[e_a, e_b], e_c>,
every edge carries the inverse metric, star legs are free indices, and legs on
an interval (circle) label are fed through the module action in their linear
(cyclic) order.  Star parts are reported as commutative polynomials: the
coefficient of a sorted index tuple is the sum of the tensor over all its
orderings.

The production path contracts a sparse tensor network pairwise.  A naive sum
over every index assignment is kept as an independent oracle.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import linalg
from .jacobi import CIRCLE, INTERVAL, STAR, DiagramSeries, JacobiDiagram, JacobiError

F0 = Fraction(0)


class WeightError(ValueError):
    pass


@dataclass
class MetricLieAlgebra:
    name: str
    dim: int
    brackets: list      # brackets[a][b]: coordinates of [e_a, e_b]
    gram: list

    def __post_init__(self):
        self.gram = [[Fraction(x) for x in row] for row in self.gram]
        self.ginv = linalg.inverse(self.gram)
        n = self.dim
        c = {}
        for a in range(n):
            for b in range(n):
                br = self.brackets[a][b]
                for k in range(n):
                    v = sum((br[d] * self.gram[d][k] for d in range(n)), F0)
                    if v:
                        c[(a, b, k)] = v
        self.c = c

    def check(self):
        """Antisymmetry of c (so invariance of the metric) and the Jacobi identity."""
        n = self.dim
        for a, b, k in product(range(n), repeat=3):
            v = self.c.get((a, b, k), F0)
            if self.c.get((b, a, k), F0) != -v or self.c.get((a, k, b), F0) != -v:
                return False
        for a, b, k in product(range(n), repeat=3):
            tot = [F0] * n
            for x, y, z in ((a, b, k), (b, k, a), (k, a, b)):
                inner = self.brackets[x][y]
                for d in range(n):
                    if inner[d]:
                        for e in range(n):
                            tot[e] += inner[d] * self.brackets[d][z][e]
            if any(tot):
                return False
        return self.gram == linalg.transpose(self.gram)


@dataclass
class LieModule:
    dim: int
    rho: list           # rho[a]: dim × dim matrix

    def check(self, g):
        for a in range(g.dim):
            for b in range(g.dim):
                lhs = linalg.zeros(self.dim, self.dim)
                for d, x in enumerate(g.brackets[a][b]):
                    if x:
                        lhs = linalg.add(lhs, linalg.scale(x, self.rho[d]))
                if lhs != linalg.commutator(self.rho[a], self.rho[b]):
                    return False
        return True


# -- backends -------------------------------------------------------------------

def _matrix_algebra(name, basis, gram_scale=1, gram=None):
    """Lie algebra spanned by matrices, with the trace form unless gram is given."""
    n = len(basis)
    flat = [[x for row in m for x in row] for m in basis]
    cols = linalg.transpose(flat)
    brackets = []
    for a in range(n):
        row = []
        for b in range(n):
            com = linalg.commutator(basis[a], basis[b])
            x, ker = linalg.solve(cols, [v for r in com for v in r])
            if x is None:
                raise WeightError("matrix basis is not closed under the bracket")
            row.append(x)
        brackets.append(row)
    if gram is None:
        k = Fraction(gram_scale)
        gram = [[k * sum((basis[a][i][j] * basis[b][j][i]
                          for i in range(len(basis[a])) for j in range(len(basis[a]))), F0)
                 for b in range(n)] for a in range(n)]
    g = MetricLieAlgebra(name, n, brackets, gram)
    return g, LieModule(len(basis[0]), [[[Fraction(x) for x in r] for r in m] for m in basis])


def _unit(n, i, j):
    m = linalg.zeros(n, n)
    m[i][j] = Fraction(1)
    return m


def abelian(dim):
    """dim-dimensional abelian algebra acting diagonally on Q^dim."""
    basis = [_unit(dim, i, i) for i in range(dim)]
    return _matrix_algebra(f"abelian{dim}", basis, gram=linalg.identity(dim))


def sl2(scale=1):
    """sl2 in the basis (h, e, f) with scale·tr(ab) in the defining representation."""
    h = [[Fraction(1), F0], [F0, Fraction(-1)]]
    return _matrix_algebra("sl2" if scale == 1 else f"sl2[{scale}]", [h, _unit(2, 0, 1), _unit(2, 1, 0)], scale)


def gl(n, scale=1):
    basis = [_unit(n, i, j) for i in range(n) for j in range(n)]
    return _matrix_algebra(f"gl{n}" if scale == 1 else f"gl{n}[{scale}]", basis, scale)


def backend(desc):
    """Backend from a descriptor: {"kind": "gl", "n": 2}, "sl2", "abelian3", ..."""
    if isinstance(desc, str):
        s = desc.strip()
        if s.startswith("abelian"):
            desc = {"kind": "abelian", "n": int(s[7:] or 1)}
        elif s.startswith("gl"):
            desc = {"kind": "gl", "n": int(s[2:])}
        elif s == "sl2":
            desc = {"kind": "sl2"}
        else:
            raise WeightError(f"unknown backend {desc!r}")
    kind = desc.get("kind")
    scale = Fraction(desc.get("scale", 1))
    if kind == "abelian":
        return abelian(int(desc.get("n", 1)))
    if kind == "sl2":
        return sl2(scale)
    if kind == "gl":
        return gl(int(desc.get("n", 2)), scale)
    raise WeightError(f"unknown backend kind {kind!r}")


# -- values -------------------------------------------------------------------------

class WeightValue:
    """Sparse tensor: key is a tuple of (label, part) for star and interval labels.

    The star part is a sorted index tuple (a monomial), the interval part is a
    (row, col) pair of End(E).  Circle labels are traced away.
    """

    def __init__(self, data=None):
        self.data = {k: Fraction(v) for k, v in (data or {}).items() if v}

    def __add__(self, other):
        out = dict(self.data)
        for k, v in other.data.items():
            out[k] = out.get(k, F0) + v
        return WeightValue(out)

    def scale(self, c):
        c = Fraction(c)
        return WeightValue({k: c * v for k, v in self.data.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def is_zero(self):
        return not self.data

    def __eq__(self, other):
        return isinstance(other, WeightValue) and self.data == other.data

    def scalar(self):
        if any(k for k in self.data):
            raise WeightError("value is not a scalar")
        return self.data.get((), F0)

    def to_json(self):
        out = []
        for k in sorted(self.data, key=repr):
            v = self.data[k]
            out.append({"key": [[str(l), list(p)] for l, p in k],
                        "value": f"{v.numerator}/{v.denominator}"})
        return out

    def __repr__(self):
        return f"WeightValue({self.data})"


# -- sparse contraction -------------------------------------------------------------

def _tensor_mul(t1, t2, drop):
    v1, d1 = t1
    v2, d2 = t2
    shared = [v for v in v1 if v in v2]
    i1 = [v1.index(v) for v in shared]
    i2 = [v2.index(v) for v in shared]
    rest2 = [k for k, v in enumerate(v2) if v not in shared]
    allv = list(v1) + [v2[k] for k in rest2]
    keep = [k for k, v in enumerate(allv) if v not in drop]
    out_vars = tuple(allv[k] for k in keep)
    index = {}
    for key, val in d2.items():
        index.setdefault(tuple(key[k] for k in i2), []).append((key, val))
    out = {}
    for key1, val1 in d1.items():
        for key2, val2 in index.get(tuple(key1[k] for k in i1), ()):
            full = key1 + tuple(key2[k] for k in rest2)
            nk = tuple(full[k] for k in keep)
            out[nk] = out.get(nk, F0) + val1 * val2
    return out_vars, {k: v for k, v in out.items() if v}


def _contract(factors, outputs):
    """Contract a list of (vars, {index tuple: value}) tensors down to ``outputs``."""
    factors = list(factors)
    outputs = set(outputs)
    if not factors:
        return (), {(): Fraction(1)}
    while len(factors) > 1:
        # merge the cheapest connected pair; fall back to an outer product
        best = None
        for i in range(len(factors)):
            for j in range(i + 1, len(factors)):
                if set(factors[i][0]) & set(factors[j][0]):
                    cost = len(factors[i][1]) * len(factors[j][1])
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
        if best is None:
            i, j = 0, 1
        else:
            _, i, j = best
        others = set()
        for k, f in enumerate(factors):
            if k not in (i, j):
                others.update(f[0])
        shared = set(factors[i][0]) | set(factors[j][0])
        drop = {v for v in shared if v not in outputs and v not in others}
        merged = _tensor_mul(factors[i], factors[j], drop)
        factors = [f for k, f in enumerate(factors) if k not in (i, j)] + [merged]
        if not merged[1]:
            return tuple(sorted(outputs, key=repr)), {}
    vars_, data = factors[0]
    extra = [v for v in vars_ if v not in outputs]
    if extra:
        vars_, data = _tensor_mul((vars_, data), ((), {(): Fraction(1)}), set(extra))
    return vars_, data


def _rho_chain(module, legs, close):
    """Tensor of ρ(e_{i1})···ρ(e_{ik}) over (i1..ik, row, col), or its trace."""
    n = module.dim
    data = {(r, r): Fraction(1) for r in range(n)}  # keyed by (row, col) at first
    vars_ = ["row", "col"]
    for leg in legs:
        new = {}
        for key, val in data.items():
            col = key[-1]
            for a, m in enumerate(module.rho):
                for c2 in range(n):
                    x = m[col][c2]
                    if x:
                        nk = key[:-1] + (a, c2)
                        new[nk] = new.get(nk, F0) + val * x
        data = new
        # index order: row, leg indices so far, col
    leg_vars = list(legs)
    vars_ = ["row"] + leg_vars + ["col"]
    if close:
        tr = {}
        for key, val in data.items():
            if key[0] == key[-1]:
                tr[key[1:-1]] = tr.get(key[1:-1], F0) + val
        return leg_vars, tr
    return vars_, data


def _network(d, g, module, intervals, circles):
    """Factors, output variables and key layout for one diagram."""
    factors = []
    for t in d.tris:
        factors.append((tuple(t), dict(g.c)))
    ginv = {(a, b): v for a, row in enumerate(g.ginv) for b, v in enumerate(row) if v}
    seen = set()
    for a, b in d.edges.items():
        if (b, a) in seen:
            continue
        seen.add((a, b))
        factors.append(((a, b), dict(ginv)))
    outputs = []
    star_labels = []
    for lab in d.used_labels():
        kind = d.labels[lab]
        if kind == STAR:
            star_labels.append(lab)
            outputs.extend(d.label_legs(lab))
    scalar = Fraction(1)
    layout = []
    for lab in sorted(set(intervals) | set(circles), key=repr):
        kind = INTERVAL if lab in intervals else CIRCLE
        if d.labels.get(lab, kind) != kind:
            raise WeightError(f"label {lab!r} changes kind inside a series")
        legs = d.label_legs(lab) if lab in d.labels else []
        if module is None:
            raise WeightError("a module is needed for interval or circle labels")
        if kind == CIRCLE:
            if legs:
                vs, data = _rho_chain(module, legs, True)
                factors.append((tuple(vs), data))
            else:
                scalar *= module.dim
        else:
            vs, data = _rho_chain(module, legs, False)
            rv, cv = ("row", lab), ("col", lab)
            vs = [rv if v == "row" else cv if v == "col" else v for v in vs]
            factors.append((tuple(vs), data))
            outputs.extend([rv, cv])
            layout.append(lab)
    return factors, outputs, star_labels, layout, scalar


def _to_value(d, vars_, data, star_labels, layout, scalar):
    pos = {v: k for k, v in enumerate(vars_)}
    out = {}
    for key, val in data.items():
        parts = []
        for lab in sorted(set(star_labels) | set(layout), key=repr):
            if lab in layout:
                parts.append((lab, (key[pos[("row", lab)]], key[pos[("col", lab)]])))
            else:
                parts.append((lab, tuple(sorted(key[pos[h]] for h in d.label_legs(lab)))))
        k = tuple(parts)
        out[k] = out.get(k, F0) + val * scalar
    return WeightValue(out)


def _label_sets(ds):
    intervals, circles = set(), set()
    for d in ds:
        for lab, kind in d.labels.items():
            if kind == INTERVAL:
                intervals.add(lab)
            elif kind == CIRCLE:
                circles.add(lab)
    if intervals & circles:
        raise WeightError("a label is interval in one term and circle in another")
    return intervals, circles


def evaluate(d, g, module=None, _labels=None):
    """Weight of a diagram or series under (g, module)."""
    if isinstance(g, tuple):
        g, module = g
    if isinstance(d, DiagramSeries):
        ds = [x for x, _ in d.items()]
        labels = _labels or _label_sets(ds)
        total = WeightValue()
        for x, c in d.items():
            total = total + evaluate(x, g, module, labels).scale(c)
        return total
    if not isinstance(d, JacobiDiagram):
        raise WeightError("expected a diagram or a series")
    intervals, circles = _labels or _label_sets([d])
    factors, outputs, stars, layout, scalar = _network(d, g, module, intervals, circles)
    vars_, data = _contract(factors, outputs)
    return _to_value(d, vars_, data, stars, layout, scalar)


def evaluate_naive(d, g, module=None):
    """Oracle: sum of the full product over every assignment of every index."""
    if isinstance(g, tuple):
        g, module = g
    intervals, circles = _label_sets([d])
    if (intervals or circles) and module is None:
        raise WeightError("a module is needed for interval or circle labels")
    hs = d.half_edges()
    n = g.dim
    m = module.dim if module else 0
    extra = [("row", lab) for lab in sorted(intervals, key=repr)] + \
            [("col", lab) for lab in sorted(intervals, key=repr)]
    circ_rows = [("cr", lab) for lab in sorted(circles, key=repr)]
    ranges = [range(n)] * len(hs) + [range(m)] * (len(extra) + len(circ_rows))
    names = hs + extra + circ_rows
    stars = [lab for lab in d.used_labels() if d.labels[lab] == STAR]
    edges = [(a, b) for a, b in d.edges.items() if repr(a) < repr(b)]
    out = {}
    for assign in product(*ranges):
        idx = dict(zip(names, assign))
        val = Fraction(1)
        for t in d.tris:
            val *= g.c.get(tuple(idx[h] for h in t), F0)
            if not val:
                break
        if not val:
            continue
        for a, b in edges:
            val *= g.ginv[idx[a]][idx[b]]
            if not val:
                break
        if not val:
            continue
        for lab in sorted(intervals | circles, key=repr):
            legs = d.label_legs(lab) if lab in d.labels else []
            if lab in intervals:
                r, c = idx[("row", lab)], idx[("col", lab)]
            else:
                r = c = idx[("cr", lab)]
            mat = linalg.identity(m)
            for h in legs:
                mat = linalg.matmul(mat, module.rho[idx[h]])
            val *= mat[r][c]
            if not val:
                break
        if not val:
            continue
        parts = []
        for lab in sorted(set(stars) | intervals, key=repr):
            if lab in intervals:
                parts.append((lab, (idx[("row", lab)], idx[("col", lab)])))
            else:
                parts.append((lab, tuple(sorted(idx[h] for h in d.label_legs(lab)))))
        k = tuple(parts)
        out[k] = out.get(k, F0) + val
    return WeightValue(out)


# -- relations -----------------------------------------------------------------

@dataclass
class RelationInstance:
    kind: str
    terms: list         # [(coefficient, diagram)]
    note: str = ""


def as_instance(d, i):
    """D + D' with the cyclic order at vertex i reversed."""
    from .jacobi import reversed_vertex
    if not 0 <= i < len(d.tris):
        raise WeightError("vertex index out of range")
    return RelationInstance("AS", [(1, d), (1, reversed_vertex(d, i))], f"vertex {i}")


def _rot(t, h):
    k = t.index(h)
    return t[k:] + t[:k]


def ihx_instance(d, edge_half):
    """I + H + X around the internal edge starting at half-edge edge_half.

    With u = (A, B, e) and v = (e', C, D) the three terms put (A, B), (B, C)
    and (C, A) at u and the remaining slot next to D at v.
    """
    owner = {h: k for k, t in enumerate(d.tris) for h in t}
    e = edge_half
    if e not in owner or d.edges[e] not in owner:
        raise WeightError("IHX needs an edge between two trivalent vertices")
    ep = d.edges[e]
    ui, vi = owner[e], owner[ep]
    if ui == vi:
        raise WeightError("IHX needs an edge between distinct vertices")
    A, B, _ = _rot(d.tris[ui], e)[1:] + (e,)
    _, C, D = _rot(d.tris[vi], ep)
    terms = []
    for (p, q), r in (((A, B), C), ((B, C), A), ((C, A), B)):
        tris = list(d.tris)
        tris[ui] = (p, q, e)
        tris[vi] = (ep, r, D)
        terms.append((1, JacobiDiagram(tris, d.legs, list(d.edges.items()), d.labels, d.orders)))
    return RelationInstance("IHX", terms, f"edge {e!r}")


def stu_instance(d, leg):
    """S - T + U at a trivalent vertex attached to an ordered leg."""
    if leg not in d.legs:
        raise WeightError("STU needs a leg")
    lab = d.legs[leg]
    if d.labels[lab] == STAR:
        raise WeightError("STU needs an interval or circle label")
    c = d.edges[leg]
    tri = next((t for t in d.tris if c in t), None)
    if tri is None:
        raise WeightError("leg is not attached to a trivalent vertex")
    _, a, b = _rot(tri, c)
    tris = [t for t in d.tris if t != tri]
    legs = {h: l for h, l in d.legs.items() if h != leg}
    legs[a] = legs[b] = lab
    edges = [(x, y) for x, y in d.edges.items() if x not in (c, leg) and y not in (c, leg)]
    seq = list(d.orders[lab])
    p = seq.index(leg)
    out = [(1, d)]
    for sign, pair in ((-1, (a, b)), (1, (b, a))):
        orders = dict(d.orders)
        orders[lab] = tuple(seq[:p] + list(pair) + seq[p + 1:])
        out.append((sign, JacobiDiagram(tris, legs, edges, d.labels, orders)))
    return RelationInstance("STU", out, f"leg {leg!r}")


def check_relation_vanishing(inst, g, module=None):
    if isinstance(g, tuple):
        g, module = g
    if inst.kind not in ("AS", "IHX", "STU") or not inst.terms:
        raise WeightError("malformed relation instance")
    ds = [d for _, d in inst.terms]
    labels = _label_sets(ds)
    total = WeightValue()
    for c, d in inst.terms:
        total = total + evaluate(d, g, module, labels).scale(c)
    return total.is_zero()


def generate_relation_instances(rng, count=8):
    """Random AS, IHX and STU instances of each kind (count of each)."""
    from .jacobi import random_diagram
    out = []
    while len([i for i in out if i.kind == "AS"]) < count:
        d = random_diagram(rng, ["x"], max_tri=4, max_legs=3)
        if d.tris:
            out.append(as_instance(d, rng.randrange(len(d.tris))))
    while len([i for i in out if i.kind == "IHX"]) < count:
        d = random_diagram(rng, ["x"], max_tri=4, max_legs=4)
        owner = {h: k for k, t in enumerate(d.tris) for h in t}
        cands = [h for h in owner if d.edges[h] in owner and owner[d.edges[h]] != owner[h]]
        if cands:
            out.append(ihx_instance(d, rng.choice(sorted(cands, key=repr))))
    while len([i for i in out if i.kind == "STU"]) < count:
        kind = rng.choice([INTERVAL, CIRCLE])
        d = random_diagram(rng, ["x"], max_tri=3, max_legs=4, kinds={"x": kind})
        owner = {h for t in d.tris for h in t}
        cands = [h for h in d.legs if d.edges[h] in owner]
        if cands:
            out.append(stu_instance(d, rng.choice(sorted(cands, key=repr))))
    return out


# -- series identities -------------------------------------------------------------

def verify_series_identity(lhs, rhs, D, backends, scale_check=2):
    """Compare lhs and rhs degree by degree under each backend.

    Each backend is a name/descriptor or a (name, g, module) triple.  The
    metric-scaling covariance (a diagram of degree k picks up κ^-k) is
    checked on lhs for named sl2/gl backends.
    """
    report = {"max_degree": D, "backends": [], "status": "consistent"}
    for b in backends:
        if isinstance(b, tuple):
            name, g, module = b
            desc = None
        else:
            desc = b if isinstance(b, dict) else {"name": b}
            g, module = backend(b)
            name = g.name
        entry = {"backend": name, "degrees": []}
        for k in range(D + 1):
            lk = lhs.degree_part(k) if isinstance(lhs, DiagramSeries) else lhs
            rk = rhs.degree_part(k) if isinstance(rhs, DiagramSeries) else rhs
            labels = _label_sets([x for x, _ in lk.items()] + [x for x, _ in rk.items()])
            res = evaluate(lk, g, module, labels) - evaluate(rk, g, module, labels)
            row = {"degree": k, "ok": res.is_zero()}
            if not res.is_zero():
                row["residual"] = res.to_json()
                report["status"] = "inconsistent"
            if desc is not None and scale_check and name.rstrip("0123456789") in ("sl", "gl"):
                sd = dict(desc) if "kind" in desc else _desc_of(name)
                sd["scale"] = Fraction(sd.get("scale", 1)) * scale_check
                g2, m2 = backend(sd)
                scaled = evaluate(lk, g2, m2, labels)
                expect = evaluate(lk, g, module, labels).scale(Fraction(1, scale_check) ** k)
                row["scaling_ok"] = scaled == expect
                if not row["scaling_ok"]:
                    report["status"] = "inconsistent"
            entry["degrees"].append(row)
        report["backends"].append(entry)
    return report


def _desc_of(name):
    if name.startswith("gl"):
        return {"kind": "gl", "n": int(name[2:])}
    if name == "sl2":
        return {"kind": "sl2"}
    raise WeightError(f"no descriptor for {name}")
