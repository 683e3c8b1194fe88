"""sl2 completion of a Lefschetz operator, primitive parts and joint kernels."""
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg


class Sl2Error(ValueError):
    pass


@dataclass
class GradedOperatorSpace:
    """Direct sum of components; weights are ints (or any hashable for bigradings)."""
    components: list
    operators: dict = field(default_factory=dict)

    weights: list = None

    def __post_init__(self):
        self.components = [(w, int(d)) for w, d in self.components]
        if self.weights is None:
            self.weights = []
            for w, d in self.components:
                self.weights.extend([w] * d)
        elif sum(d for _, d in self.components) != len(self.weights):
            raise Sl2Error("weights do not match the component dimensions")

    @classmethod
    def from_weights(cls, weights):
        """Space whose i-th coordinate has weight weights[i] (any order)."""
        order = []
        for w in weights:
            if w not in order:
                order.append(w)
        return cls([(w, list(weights).count(w)) for w in order], weights=list(weights))

    @property
    def dim(self):
        return len(self.weights)

    def indices(self, weight):
        return [i for i, w in enumerate(self.weights) if w == weight]

    def grading(self):
        n = self.dim
        h = linalg.zeros(n, n)
        for i, w in enumerate(self.weights):
            h[i][i] = Fraction(w)
        return h

    def shift_ok(self, mat, shift):
        """Does mat map weight w into weight w + shift only?"""
        for i in range(self.dim):
            for j in range(self.dim):
                if mat[i][j] and self.weights[i] != self.weights[j] + shift:
                    return False
        return True

    def embed(self, weight, vec):
        out = [Fraction(0)] * self.dim
        for i, x in zip(self.indices(weight), vec):
            out[i] = x
        return out


@dataclass
class Sl2Triple:
    space: GradedOperatorSpace
    L: list
    H: list
    Lam: list

    def brackets_ok(self):
        L, H, Lam = self.L, self.H, self.Lam
        return (
            linalg.commutator(H, L) == linalg.scale(2, L)
            and linalg.commutator(H, Lam) == linalg.scale(-2, Lam)
            and linalg.commutator(L, Lam) == H
        )


def complete_sl2(space, L, column_order=None):
    """Solve [L, Λ] = H, [H, Λ] = -2Λ for Λ, with H the weight grading.

    column_order permutes the unknowns before elimination; the solution must
    not depend on it.
    """
    n = space.dim
    H = space.grading()
    if not space.shift_ok(L, 2) or linalg.commutator(H, L) != linalg.scale(2, L):
        raise Sl2Error("L is not homogeneous of weight +2")
    # [H, Λ] = -2Λ forces Λ to lower weight by 2
    unknowns = [(r, c) for r in range(n) for c in range(n) if space.weights[r] == space.weights[c] - 2]
    if column_order is not None:
        unknowns = [unknowns[i] for i in column_order]
    pos = {u: k for k, u in enumerate(unknowns)}
    rows, rhs = [], []
    for i in range(n):
        for j in range(n):
            row = [Fraction(0)] * len(unknowns)
            # (LΛ)_ij = Σ_k L_ik Λ_kj ; (ΛL)_ij = Σ_k Λ_ik L_kj
            for k in range(n):
                if L[i][k] and (k, j) in pos:
                    row[pos[(k, j)]] += L[i][k]
                if L[k][j] and (i, k) in pos:
                    row[pos[(i, k)]] -= L[k][j]
            if any(row) or H[i][j]:
                rows.append(row)
                rhs.append(H[i][j])
    if not unknowns:
        if any(H[i][i] for i in range(n)):
            raise Sl2Error("no Λ solves [L, Λ] = H")
        return Sl2Triple(space, L, H, linalg.zeros(n, n))
    x, kernel = linalg.solve(rows, rhs) if rows else ([Fraction(0)] * len(unknowns), [])
    if x is None:
        raise Sl2Error("no Λ solves [L, Λ] = H (hard Lefschetz fails)")
    if kernel:
        raise Sl2Error("Λ is not unique")
    Lam = linalg.zeros(n, n)
    for (r, c), v in zip(unknowns, x):
        Lam[r][c] = v
    t = Sl2Triple(space, L, H, Lam)
    if not t.brackets_ok():
        raise Sl2Error("solution violates the sl2 relations")
    return t


def _restrict_cols(mat, cols):
    return [[row[c] for c in cols] for row in mat]


def primitive_decomposition(t, j):
    """Basis of ker Λ inside weight j, as full-length vectors."""
    cols = t.space.indices(j)
    if not cols:
        return []
    ker = linalg.nullspace(_restrict_cols(t.Lam, cols), len(cols))
    return [t.space.embed(j, v) for v in ker]


def verify_primitive_decomposition(t):
    """Check V = ⊕_{j ≤ 0} ⊕_{k ≤ -j} L^k P_j (dimension count and rank)."""
    vectors = []
    weights = sorted({w for w in t.space.weights if w <= 0})
    for j in weights:
        prims = primitive_decomposition(t, j)
        for p in prims:
            v = p
            for k in range(-j + 1):
                vectors.append(v)
                v = linalg.matvec(t.L, v)
    return len(vectors) == t.space.dim and linalg.rank(vectors, t.space.dim) == t.space.dim


def joint_annihilator(space, operators, weight):
    """Basis of the common kernel of the operators inside one weight component."""
    cols = space.indices(weight)
    if not cols:
        return []
    rows = []
    for op in operators:
        rows.extend(_restrict_cols(op, cols))
    rows = [r for r in rows if any(r)]
    ker = linalg.nullspace(rows, len(cols)) if rows else linalg.identity(len(cols))
    return [space.embed(weight, v) for v in ker]


def hard_lefschetz(space, L):
    """L^j : weight(-j) → weight(j) bijective for every j > 0 present."""
    ws = sorted({w for w in space.weights if w > 0})
    power = linalg.identity(space.dim)
    for j in range(1, max(ws, default=0) + 1):
        power = linalg.matmul(L, power)
        src, tgt = space.indices(-j), space.indices(j)
        if len(src) != len(tgt):
            return False
        if not src:
            continue
        block = [[power[r][c] for c in src] for r in tgt]
        if linalg.rank(block, len(src)) != len(src):
            return False
    return True


def verbitsky_space(A):
    """Degrees 0..2n of a Verbitsky algebra with weight 2d - 2n."""
    comps = [(2 * d - 2 * A.n, A.dims()[d]) for d in range(2 * A.n + 1)]
    return GradedOperatorSpace(comps)
