"""Jacobi diagrams, their canonical forms, and the gluing operations on series.

A diagram is stored on half-edges.  Trivalent vertices are triples of
half-edges in cyclic order, legs are single half-edges carrying a label, and
edges pair up all half-edges.  Labels are star (unordered legs), interval
(linearly ordered) or circle (cyclically ordered).

Series are dicts from canonical keys to (representative, coefficient), so
isomorphic diagrams always collapse to one term.  Nothing here works modulo
AS/IHX/STU; identities in graph homology go through weight systems instead.
"""
from fractions import Fraction
from itertools import permutations, product
from math import factorial

STAR = "star"
INTERVAL = "interval"
CIRCLE = "circle"
KINDS = (STAR, INTERVAL, CIRCLE)


class JacobiError(ValueError):
    pass


class JacobiDiagram:
    """Immutable uni-trivalent graph; compare and hash through ``key``."""

    def __init__(self, tris=(), legs=None, edges=None, labels=None, orders=None):
        self.tris = tuple(tuple(t) for t in tris)
        self.legs = dict(legs or {})
        self.labels = dict(labels or {})
        self.orders = {k: tuple(v) for k, v in (orders or {}).items()}
        pairs = edges or {}
        if isinstance(pairs, dict):
            pairs = pairs.items()
        self.edges = {}
        for a, b in pairs:
            self.edges[a] = b
            self.edges[b] = a
        self._key = None
        self._validate()

    # -- structure ------------------------------------------------------------
    def _validate(self):
        halves = [h for t in self.tris for h in t] + list(self.legs)
        if len(set(halves)) != len(halves):
            raise JacobiError("half-edge used twice")
        if any(len(t) != 3 for t in self.tris):
            raise JacobiError("trivalent vertex needs exactly three half-edges")
        hs = set(halves)
        if set(self.edges) != hs:
            raise JacobiError("edges must form a perfect matching on the half-edges")
        for a, b in self.edges.items():
            if a == b or self.edges.get(b) != a:
                raise JacobiError(f"bad edge at {a!r}")
        for h, lab in self.legs.items():
            if lab not in self.labels:
                raise JacobiError(f"label {lab!r} of leg {h!r} is not declared")
        for lab, kind in self.labels.items():
            if kind not in KINDS:
                raise JacobiError(f"unknown label kind {kind!r}")
            legs = sorted(self.label_legs_unordered(lab), key=repr)
            if kind == STAR:
                if lab in self.orders and self.orders[lab]:
                    raise JacobiError(f"star label {lab!r} cannot carry an order")
            else:
                order = self.orders.get(lab, ())
                if sorted(order, key=repr) != legs:
                    raise JacobiError(f"order of {lab!r} must list each of its legs once")
        for lab in self.orders:
            if lab not in self.labels:
                raise JacobiError(f"order given for undeclared label {lab!r}")
        if (len(self.tris) + len(self.legs)) % 2:
            raise JacobiError("vertex count must be even")

    @property
    def degree(self):
        return (len(self.tris) + len(self.legs)) // 2

    def half_edges(self):
        return [h for t in self.tris for h in t] + list(self.legs)

    def label_legs_unordered(self, lab):
        return [h for h, l in self.legs.items() if l == lab]

    def label_legs(self, lab):
        if self.labels.get(lab, STAR) == STAR:
            return sorted(self.label_legs_unordered(lab), key=repr)
        return list(self.orders.get(lab, ()))

    def leg_count(self, lab):
        return len(self.label_legs_unordered(lab))

    def used_labels(self):
        return sorted(set(self.legs.values()))

    def struts(self):
        """Edges joining two legs, as (label, label) pairs."""
        out = []
        for h, lab in self.legs.items():
            p = self.edges[h]
            if p in self.legs and repr(h) < repr(p):
                out.append(tuple(sorted((lab, self.legs[p]))))
        return out

    def has_strut_within(self, labels):
        labels = set(labels)
        return any(a in labels and b in labels for a, b in self.struts())

    def renamed(self, f):
        """Copy with every half-edge h replaced by f(h)."""
        return JacobiDiagram(
            [tuple(f(h) for h in t) for t in self.tris],
            {f(h): l for h, l in self.legs.items()},
            [(f(a), f(b)) for a, b in self.edges.items()],
            self.labels,
            {k: tuple(f(h) for h in v) for k, v in self.orders.items()},
        )

    # -- canonical form -------------------------------------------------------
    @property
    def key(self):
        if self._key is None:
            self._key, _ = _canonical(self)
        return self._key

    def canonical(self):
        return _canonical(self)[1]

    def __eq__(self, other):
        return isinstance(other, JacobiDiagram) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"JacobiDiagram(deg={self.degree}, {to_sexpr(self)})"


def _tri_next(d):
    nxt = {}
    for a, b, c in d.tris:
        nxt[a], nxt[b], nxt[c] = b, c, a
    return nxt


def _components(d):
    nxt = _tri_next(d)
    seen, comps = set(), []
    for h in d.half_edges():
        if h in seen:
            continue
        comp, stack = [], [h]
        seen.add(h)
        while stack:
            x = stack.pop()
            comp.append(x)
            nbrs = [d.edges[x]]
            if x in nxt:
                nbrs += [nxt[x], nxt[nxt[x]]]
            for y in nbrs:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def _traverse(d, nxt, start, attr):
    """Numbering of a component by a deterministic walk from ``start``."""
    num = {start: 0}
    order = [start]
    code = []
    i = 0
    while i < len(order):
        h = order[i]
        i += 1
        todo = [nxt[h], nxt[nxt[h]]] if h in nxt else []
        todo.append(d.edges[h])
        for y in todo:
            if y not in num:
                num[y] = len(order)
                order.append(y)
        if h in nxt:
            code.append((0, num[nxt[h]], num[d.edges[h]]))
        else:
            code.append((1, attr[h], num[d.edges[h]]))
    return tuple(code), order


def _canonical(d):
    nxt = _tri_next(d)
    comps = _components(d)
    used = d.used_labels()
    circles = [lab for lab in used if d.labels[lab] == CIRCLE]
    rotations = product(*[range(max(1, d.leg_count(lab))) for lab in circles])
    best = None
    for rot in rotations:
        shift = dict(zip(circles, rot))
        attr, orders = {}, {}
        for lab in used:
            kind = d.labels[lab]
            seq = d.label_legs(lab)
            if kind == CIRCLE:
                r = shift[lab]
                seq = seq[r:] + seq[:r]
            orders[lab] = seq
            for pos, h in enumerate(seq):
                attr[h] = (repr(lab), kind, 0 if kind == STAR else pos)
        coded = []
        for comp in comps:
            cands = [_traverse(d, nxt, s, attr) for s in comp]
            coded.append(min(cands, key=lambda c: c[0]))
        coded.sort(key=lambda c: c[0])
        key = (tuple(c for c, _ in coded), tuple((repr(l), d.labels[l]) for l in used))
        if best is None or key < best[0]:
            best = (key, coded, orders)
    key, coded, orders = best
    ren, base = {}, 0
    for _, order in coded:
        for k, h in enumerate(order):
            ren[h] = base + k
        base += len(order)
    canon = JacobiDiagram(
        sorted(_rotate_min(tuple(ren[h] for h in t)) for t in d.tris),
        {ren[h]: l for h, l in d.legs.items()},
        [(ren[a], ren[b]) for a, b in d.edges.items()],
        {l: d.labels[l] for l in used},
        {l: tuple(ren[h] for h in orders[l]) for l in used if d.labels[l] != STAR},
    )
    canon._key = key
    return key, canon


def _rotate_min(t):
    k = t.index(min(t))
    return t[k:] + t[:k]


# -- series -------------------------------------------------------------------

class DiagramSeries:
    """Rational combination of diagrams of degree ≤ max_degree."""

    def __init__(self, max_degree, terms=()):
        if max_degree < 0:
            raise JacobiError("max_degree must be nonnegative")
        self.max_degree = max_degree
        self._terms = {}
        for d, c in terms:
            self._add(d, c)

    def _add(self, d, c):
        c = Fraction(c)
        if not c or d.degree > self.max_degree:
            return
        k = d.key
        if k in self._terms:
            rep, old = self._terms[k]
            new = old + c
            if new:
                self._terms[k] = (rep, new)
            else:
                del self._terms[k]
        else:
            self._terms[k] = (d.canonical(), c)

    @classmethod
    def of(cls, d, max_degree=None, coeff=1):
        return cls(d.degree if max_degree is None else max_degree, [(d, coeff)])

    def items(self):
        """(diagram, coefficient) pairs in canonical order."""
        return [self._terms[k] for k in sorted(self._terms)]

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self.items())

    def coefficient(self, d):
        t = self._terms.get(d.key)
        return t[1] if t else Fraction(0)

    def degree_part(self, k):
        return DiagramSeries(self.max_degree, [(d, c) for d, c in self.items() if d.degree == k])

    def truncate(self, D):
        return DiagramSeries(D, self.items())

    def is_zero(self):
        return not self._terms

    def __add__(self, other):
        D = min(self.max_degree, other.max_degree)
        return DiagramSeries(D, self.items() + other.items())

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return DiagramSeries(self.max_degree, [(d, Fraction(c) * x) for d, x in self.items()])

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, DiagramSeries):
            return NotImplemented
        D = min(self.max_degree, other.max_degree)
        return (self - other).truncate(D).is_zero()

    def __repr__(self):
        body = " + ".join(f"{c}*[{to_sexpr(d)}]" for d, c in self.items()) or "0"
        return f"DiagramSeries(D={self.max_degree}: {body})"


def _series(x, D=None):
    if isinstance(x, DiagramSeries):
        return x
    return DiagramSeries.of(x, D)


def _bilinear(op, C, Dg, D=None):
    # a single diagram imposes no bound; only series inputs truncate
    bounds = [x.max_degree for x in (C, Dg) if isinstance(x, DiagramSeries)]
    C, Dg = _series(C), _series(Dg)
    if D is None:
        D = min(bounds) if bounds else C.max_degree + Dg.max_degree
    out = DiagramSeries(D)
    for a, ca in C.items():
        for b, cb in Dg.items():
            for d, c in op(a, b):
                out._add(d, ca * cb * c)
    return out


def _linear(op, C, D=None):
    C = _series(C)
    out = DiagramSeries(C.max_degree if D is None else D)
    for a, ca in C.items():
        for d, c in op(a):
            out._add(d, ca * c)
    return out


# -- helpers on single diagrams ---------------------------------------------

def _tag(d, t):
    return d.renamed(lambda h: (t, h))


def _merge_labels(a, b, allow=()):
    """Union of two label tables; common labels must be star unless allowed."""
    out = dict(a)
    for lab, kind in b.items():
        if lab in out:
            if out[lab] != kind:
                raise JacobiError(f"label {lab!r} has kinds {out[lab]} and {kind}")
            if kind != STAR and lab not in allow:
                raise JacobiError(f"label {lab!r} is {kind}; only star labels can be shared")
        else:
            out[lab] = kind
    return out


def _disjoint(a, b, labels, orders):
    a, b = _tag(a, 0), _tag(b, 1)
    return JacobiDiagram(
        a.tris + b.tris,
        {**a.legs, **b.legs},
        list(a.edges.items()) + list(b.edges.items()),
        labels,
        orders,
    )


def _require_kind(d, lab, kind):
    k = d.labels.get(lab)
    if k is not None and k != kind:
        raise JacobiError(f"label {lab!r} must be {kind}, not {k}")


# -- constructors -------------------------------------------------------------

def empty_diagram(labels=None):
    return JacobiDiagram(labels=labels or {})


def strut(x, y, kinds=STAR):
    """Single edge joining a leg labelled x to a leg labelled y."""
    kx = kinds if isinstance(kinds, str) else kinds[0]
    ky = kinds if isinstance(kinds, str) else kinds[1]
    labels = {x: kx}
    if y in labels and labels[y] != ky:
        raise JacobiError("x-x strut needs a single kind")
    labels[y] = ky
    orders = {}
    for lab, h in ((x, "a"), (y, "b")):
        if labels[lab] != STAR:
            orders.setdefault(lab, ())
            orders[lab] = orders[lab] + (h,)
    return JacobiDiagram((), {"a": x, "b": y}, [("a", "b")], labels, orders)


def wheel(n_legs, x, kind=STAR):
    """Loop with n_legs trivalent vertices, each with one leg labelled x."""
    if n_legs < 2 or n_legs % 2:
        raise JacobiError("wheel needs an even number of legs, at least 2")
    tris = [(("a", i), ("b", i), ("c", i)) for i in range(n_legs)]
    legs = {("l", i): x for i in range(n_legs)}
    edges = [(("c", i), ("l", i)) for i in range(n_legs)]
    edges += [(("b", i), ("a", (i + 1) % n_legs)) for i in range(n_legs)]
    orders = {x: tuple(("l", i) for i in range(n_legs))} if kind != STAR else {}
    return JacobiDiagram(tris, legs, edges, {x: kind}, orders)


def union_power(s, k, D):
    out = DiagramSeries.of(empty_diagram(), D)
    for _ in range(k):
        out = union_product(out, s, D=D)
    return out


def exp_union(s, D):
    """Σ_k s^{∪k}/k! for a series without constant term."""
    s = _series(s).truncate(D)
    if any(d.degree == 0 for d, _ in s.items()):
        raise JacobiError("exponential needs a series without constant term")
    out = DiagramSeries.of(empty_diagram(), D)
    term = DiagramSeries.of(empty_diagram(), D)
    for k in range(1, D + 1):
        term = union_product(term, s, D=D).scale(Fraction(1, k))
        if term.is_zero():
            break
        out = out + term
    return out


def exp_strut(x, y, D):
    return exp_union(DiagramSeries.of(strut(x, y), D), D)


def wheel_series(x, coeffs, D):
    """exp_∪(Σ b_{2m} w_{2m}) with coeffs {2m: b_{2m}}; constant term 1."""
    base = DiagramSeries(D, [(wheel(n, x), c) for n, c in sorted(coeffs.items()) if n <= D])
    if base.is_zero():
        return DiagramSeries.of(empty_diagram({x: STAR}), D)
    return exp_union(base, D)


# -- products -----------------------------------------------------------------

def _union1(a, b):
    labels = _merge_labels(a.labels, b.labels)
    orders = {}
    for lab in labels:
        if labels[lab] != STAR:
            src = a if lab in a.labels else b
            orders[lab] = tuple((0 if src is a else 1, h) for h in src.orders.get(lab, ()))
    return [(_disjoint(a, b, labels, orders), 1)]


def union_product(C, D_, D=None):
    """Disjoint union; labels present on both sides must be star."""
    return _bilinear(_union1, C, D_, D)


def juxtapose(C, D_, x, D=None):
    """Disjoint union with the x-orders concatenated, C's legs first."""
    def op(a, b):
        _require_kind(a, x, INTERVAL)
        _require_kind(b, x, INTERVAL)
        labels = _merge_labels(a.labels, b.labels, allow=(x,))
        if x not in labels:
            labels[x] = INTERVAL
        orders = {}
        for lab in labels:
            if labels[lab] == STAR:
                continue
            if lab == x:
                orders[x] = tuple((0, h) for h in a.orders.get(x, ())) + tuple(
                    (1, h) for h in b.orders.get(x, ()))
            else:
                src = a if lab in a.labels else b
                orders[lab] = tuple((0 if src is a else 1, h) for h in src.orders.get(lab, ()))
        return [(_disjoint(a, b, labels, orders), 1)]
    return _bilinear(op, C, D_, D)


def _with(d, labels=None, orders=None, legs=None):
    return JacobiDiagram(d.tris, d.legs if legs is None else legs, list(d.edges.items()),
                         d.labels if labels is None else labels,
                         d.orders if orders is None else orders)


def average(C, x):
    """Star label x to interval: mean over all linear orders of the x-legs."""
    def op(a):
        _require_kind(a, x, STAR)
        legs = a.label_legs(x)
        labels = dict(a.labels)
        labels[x] = INTERVAL
        w = Fraction(1, factorial(len(legs)))
        out = []
        for perm in permutations(legs):
            orders = dict(a.orders)
            orders[x] = perm
            out.append((_with(a, labels, orders), w))
        return out
    return _linear(op, C)


def trace(C, x):
    """Interval label x to circle (forget where the linear order starts)."""
    def op(a):
        _require_kind(a, x, INTERVAL)
        labels = dict(a.labels)
        labels[x] = CIRCLE
        orders = dict(a.orders)
        orders.setdefault(x, ())
        return [(_with(a, labels, orders), 1)]
    return _linear(op, C)


def relabel(C, y, x):
    """Replace the label y by x; merging into an existing x needs stars."""
    def op(a):
        if y not in a.labels or y == x:
            return [(a, 1)]
        ky = a.labels[y]
        labels = {l: k for l, k in a.labels.items() if l != y}
        orders = {l: o for l, o in a.orders.items() if l != y}
        if x in labels:
            if ky != STAR or labels[x] != STAR:
                raise JacobiError("relabelling onto an existing label needs star labels")
        else:
            labels[x] = ky
            if ky != STAR:
                orders[x] = a.orders.get(y, ())
        legs = {h: (x if l == y else l) for h, l in a.legs.items()}
        return [(_with(a, labels, orders, legs), 1)]
    return _linear(op, C)


def split(C, y, x1, x2):
    """Σ over the 2^m ways of sending each y-leg to x1 or x2."""
    def op(a):
        _require_kind(a, y, STAR)
        for t in (x1, x2):
            if t != y:
                _require_kind(a, t, STAR)
        ys = a.label_legs(y)
        labels = {l: k for l, k in a.labels.items() if l != y}
        labels[x1] = labels[x2] = STAR
        out = []
        for choice in product((x1, x2), repeat=len(ys)):
            legs = dict(a.legs)
            for h, t in zip(ys, choice):
                legs[h] = t
            out.append((_with(a, labels, a.orders, legs), 1))
        return out
    return _linear(op, C)


# -- gluing -------------------------------------------------------------------

def _glue(a, b, matches, labels):
    """Join diagram a and b along matched legs (pairs of (a-leg, b-leg)).

    Chains through removed legs are followed until a kept half-edge is
    reached; a closed chain would be a loop without vertices and is refused.
    """
    a, b = _tag(a, 0), _tag(b, 1)
    mate = {}
    for p, q in matches:
        mate[(0, p)] = (1, q)
        mate[(1, q)] = (0, p)
    edges = {**a.edges, **b.edges}
    legs = {**a.legs, **b.legs}
    for h in mate:
        del legs[h]
    kept = [h for t in a.tris + b.tris for h in t] + list(legs)
    new_edges, done = [], set()
    visited = set()
    for h in kept:
        if h in done:
            continue
        x = edges[h]
        while x in mate:
            visited.add(x)
            y = mate[x]
            visited.add(y)
            x = edges[y]
        new_edges.append((h, x))
        done.add(h)
        done.add(x)
    if len(visited) != len(mate):
        raise JacobiError("gluing closes a loop without vertices")
    orders = {}
    for lab, kind in labels.items():
        if kind != STAR:
            src = a if lab in a.labels else b
            orders[lab] = src.orders.get(lab, ())
    return JacobiDiagram(a.tris + b.tris, legs, new_edges, labels, orders)


def _glue_labels(a, b, glued, keep_glued):
    for lab in glued:
        _require_kind(a, lab, STAR)
        _require_kind(b, lab, STAR)
    la = {l: k for l, k in a.labels.items() if l not in glued}
    lb = {l: k for l, k in b.labels.items() if l not in glued or l in keep_glued}
    return _merge_labels(la, lb)


def pairing(C, D_, labels, D=None):
    """Glue all legs with a label in ``labels`` of C to those of D, over all bijections."""
    labels = list(labels)

    def op(a, b):
        if a.has_strut_within(labels) and b.has_strut_within(labels):
            raise JacobiError("both sides contain struts between glued labels")
        groups = []
        for lab in labels:
            la, lb = a.label_legs(lab), b.label_legs(lab)
            if len(la) != len(lb):
                return []
            groups.append([list(zip(la, p)) for p in permutations(lb)])
        out_labels = _glue_labels(a, b, labels, ())
        return [(_glue(a, b, [m for g in combo for m in g], out_labels), 1)
                for combo in product(*groups)]
    return _bilinear(op, C, D_, D)


def inner_glue(C, D_, labels, D=None):
    """C ⌟ D: glue every leg of C with a label in ``labels`` to distinct legs of D.

    Unglued legs of D keep their labels.
    """
    if isinstance(labels, str):
        labels = [labels]
    labels = list(labels)

    def op(a, b):
        if a.has_strut_within(labels) and b.has_strut_within(labels):
            raise JacobiError("both sides contain struts between glued labels")
        groups = []
        for lab in labels:
            la, lb = a.label_legs(lab), b.label_legs(lab)
            if len(la) > len(lb):
                return []
            groups.append([list(zip(la, p)) for p in permutations(lb, len(la))])
        keep = [lab for lab in labels if b.leg_count(lab) > a.leg_count(lab)]
        out_labels = _glue_labels(a, b, labels, keep)
        return [(_glue(a, b, [m for g in combo for m in g], out_labels), 1)
                for combo in product(*groups)]
    return _bilinear(op, C, D_, D)


# -- s-expression io -----------------------------------------------------------

def _tokens(text):
    out, cur = [], ""
    for ch in text:
        if ch in "()":
            if cur:
                out.append(cur)
                cur = ""
            out.append(ch)
        elif ch.isspace():
            if cur:
                out.append(cur)
                cur = ""
        else:
            cur += ch
    if cur:
        out.append(cur)
    return out


def parse_sexpr(text):
    toks = _tokens(text)
    pos = 0

    def read():
        nonlocal pos
        if pos >= len(toks):
            raise JacobiError("unexpected end of input")
        t = toks[pos]
        pos += 1
        if t == ")":
            raise JacobiError("unexpected ')'")
        if t != "(":
            return t
        lst = []
        while True:
            if pos >= len(toks):
                raise JacobiError("missing ')'")
            if toks[pos] == ")":
                pos += 1
                return lst
            lst.append(read())

    tree = read()
    if pos != len(toks):
        raise JacobiError("trailing input")
    return tree


def _diagram_from_tree(tree):
    if not isinstance(tree, list) or not tree or tree[0] != "diagram":
        raise JacobiError("expected (diagram ...)")
    tris, legs, edges, labels, orders = [], {}, [], {}, {}
    for item in tree[1:]:
        if not isinstance(item, list) or not item:
            raise JacobiError(f"bad clause {item!r}")
        head = item[0]
        if head == "tri" and len(item) == 3 and isinstance(item[2], list):
            tris.append(tuple(item[2]))
        elif head == "leg" and len(item) == 4:
            _, h, kind, lab = item
            if labels.get(lab, kind) != kind:
                raise JacobiError(f"label {lab!r} declared with two kinds")
            labels[lab] = kind
            legs[h] = lab
        elif head == "label" and len(item) == 3:
            labels[item[1]] = item[2]
        elif head == "edge" and len(item) == 3:
            edges.append((item[1], item[2]))
        elif head == "order" and len(item) >= 2:
            orders[item[1]] = tuple(item[2:])
        else:
            raise JacobiError(f"bad clause {item!r}")
    return JacobiDiagram(tris, legs, edges, labels, orders)


def from_sexpr(text):
    """Parse a (diagram ...) or (series ...) expression."""
    tree = parse_sexpr(text)
    if isinstance(tree, list) and tree and tree[0] == "series":
        D, terms = None, []
        for item in tree[1:]:
            if isinstance(item, list) and item and item[0] == "max-degree":
                D = int(item[1])
            elif isinstance(item, list) and len(item) == 3 and item[0] == "term":
                terms.append((_diagram_from_tree(item[2]), Fraction(item[1])))
            else:
                raise JacobiError(f"bad series clause {item!r}")
        if D is None:
            D = max((d.degree for d, _ in terms), default=0)
        return DiagramSeries(D, terms)
    return _diagram_from_tree(tree)


def to_sexpr(d):
    """Serialize the canonical form of a diagram or series."""
    if isinstance(d, DiagramSeries):
        terms = " ".join(f"(term {c.numerator}/{c.denominator} {to_sexpr(x)})" for x, c in d.items())
        return f"(series (max-degree {d.max_degree}){' ' + terms if terms else ''})"
    c = d.canonical()
    parts = ["diagram"]
    for lab in sorted(c.labels, key=repr):
        if not c.leg_count(lab):
            parts.append(f"(label {lab} {c.labels[lab]})")
    for i, t in enumerate(c.tris):
        parts.append(f"(tri v{i} ({' '.join(f'h{h}' for h in t)}))")
    for h in sorted(c.legs):
        parts.append(f"(leg h{h} {c.labels[c.legs[h]]} {c.legs[h]})")
    for a in sorted(c.edges):
        if a < c.edges[a]:
            parts.append(f"(edge h{a} h{c.edges[a]})")
    for lab in sorted(c.orders, key=repr):
        if c.labels[lab] != STAR and c.orders[lab]:
            parts.append(f"(order {lab} {' '.join(f'h{h}' for h in c.orders[lab])})")
    return "(" + " ".join(parts) + ")"


# -- random diagrams for property tests ---------------------------------------------

def random_diagram(rng, labels, n_tri=None, n_legs=None, max_tri=4, max_legs=4, kinds=None):
    """Random uni-trivalent graph; legs get labels from ``labels``.

    The matching is a uniformly random pairing of all half-edges, so struts
    and multi-edges appear.  Self-loops at a vertex are allowed as well.
    """
    kinds = kinds or {}
    for _ in range(100):
        k = rng.randint(0, max_tri) if n_tri is None else n_tri
        m = rng.randint(0, max_legs) if n_legs is None else n_legs
        if (3 * k + m) % 2 or (k + m) % 2 or (k == 0 and m == 0 and n_tri is None and n_legs is None):
            if n_tri is not None and n_legs is not None:
                raise JacobiError("3*n_tri + n_legs must be even")
            continue
        tris = [(("t", i, 0), ("t", i, 1), ("t", i, 2)) for i in range(k)]
        legs = {("l", j): rng.choice(labels) for j in range(m)}
        hs = [h for t in tris for h in t] + list(legs)
        rng.shuffle(hs)
        edges = [(hs[i], hs[i + 1]) for i in range(0, len(hs), 2)]
        labs = {lab: kinds.get(lab, STAR) for lab in labels}
        orders = {}
        for lab, kind in labs.items():
            if kind != STAR:
                seq = [h for h, l in legs.items() if l == lab]
                rng.shuffle(seq)
                orders[lab] = tuple(seq)
        return JacobiDiagram(tris, legs, edges, labs, orders)
    raise JacobiError("could not draw a diagram")


def shuffled(d, rng):
    """Isomorphic copy: fresh half-edge names and rotated vertex triples."""
    hs = d.half_edges()
    names = list(range(len(hs)))
    rng.shuffle(names)
    f = dict(zip(hs, names))
    tris = []
    for t in d.tris:
        r = rng.randrange(3)
        tris.append(tuple(f[h] for h in t[r:] + t[:r]))
    rng.shuffle(tris)
    orders = {}
    for lab, seq in d.orders.items():
        seq = [f[h] for h in seq]
        if d.labels[lab] == CIRCLE and seq:
            r = rng.randrange(len(seq))
            seq = seq[r:] + seq[:r]
        orders[lab] = tuple(seq)
    return JacobiDiagram(tris, {f[h]: l for h, l in d.legs.items()},
                         [(f[a], f[b]) for a, b in d.edges.items()], d.labels, orders)


def reversed_vertex(d, i):
    """Copy with the cyclic order at trivalent vertex i reversed (AS partner)."""
    tris = list(d.tris)
    a, b, c = tris[i]
    tris[i] = (a, c, b)
    return JacobiDiagram(tris, d.legs, list(d.edges.items()), d.labels, d.orders)


__all__ = [
    "STAR", "INTERVAL", "CIRCLE", "JacobiError", "JacobiDiagram", "DiagramSeries",
    "empty_diagram", "strut", "wheel", "exp_union", "exp_strut", "wheel_series", "union_power",
    "union_product", "juxtapose", "average", "trace", "relabel", "split", "pairing",
    "inner_glue", "parse_sexpr", "from_sexpr", "to_sexpr", "random_diagram", "shuffled",
    "reversed_vertex",
]
