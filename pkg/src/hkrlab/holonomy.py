"""Cover-degree equations and block permutations of symplectic normalizers.

Block symplectic conventions: block i occupies 2·n_i consecutive coordinates
with the standard form [[0, I], [-I, 0]] there.  A matrix acts on 2-forms by
pullback along its inverse, (A·σ)(u, v) = σ(A⁻¹u, A⁻¹v), which is a left
action, so A ↦ ρ(A) is a homomorphism.
"""
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg


class HolonomyError(ValueError):
    pass


class NormalizerError(HolonomyError):
    def __init__(self, msg, index=None):
        super().__init__(msg)
        self.index = index


# -- Euler characteristic equation ------------------------------------------------

def partitions(n, largest=None):
    """Partitions of n as nonincreasing tuples, largest parts first."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def chi_degree(partition):
    """d with d·(1 + n) = Π(1 + n_i), or None if it is not an integer."""
    n = sum(partition)
    prod = 1
    for x in partition:
        prod *= 1 + x
    return prod // (1 + n) if prod % (1 + n) == 0 else None


def enumerate_chi_solutions(n):
    """All (d, partition) with d·(1 + n) = Π(1 + n_i), d ≥ 1."""
    if n < 1:
        raise HolonomyError("n must be at least 1")
    out = []
    for p in partitions(n):
        d = chi_degree(p)
        if d is not None:
            out.append((d, list(p)))
    return out


@dataclass
class PowerEquationResult:
    solutions: list
    proof: str
    proof_checked: bool
    k_max: int = 0


POWER_PROOF = (
    "k and k+1 are coprime divisors of 2^k, so both are powers of two; "
    "consecutive powers of two force k = 1, e = 1"
)


def _is_power_of_two(x):
    return x > 0 and x & (x - 1) == 0


def check_power_equation(k_max):
    """Integer solutions of e·k·(k+1) = 2^k for 1 ≤ k ≤ k_max.

    The direct divisibility search is checked against the structural
    argument for every k in range.
    """
    if k_max < 1:
        raise HolonomyError("k_max must be at least 1")
    sols = []
    agree = True
    for k in range(1, k_max + 1):
        direct = (2 ** k) % (k * (k + 1)) == 0
        structural = _is_power_of_two(k) and _is_power_of_two(k + 1)
        agree &= direct == structural
        if direct:
            sols.append(((2 ** k) // (k * (k + 1)), k))
    agree &= sols == [(1, 1)]
    return PowerEquationResult(sols, POWER_PROOF, agree, k_max)


def ihs_constrained_solutions(k_max):
    """Solutions (e, k) when every n_i = 1 (so n = k) and d = e·k."""
    out = []
    for k in range(1, k_max + 1):
        d = chi_degree([1] * k)
        if d is not None and d % k == 0:
            out.append((d // k, k))
    return out


# -- symplectic block matrices ------------------------------------------------------

def standard_form(blocks):
    """(Ω, [Ω_1, ..., Ω_k]) for the given block half-dimensions."""
    N = 2 * sum(blocks)
    parts = []
    off = 0
    for m in blocks:
        om = linalg.zeros(N, N)
        for i in range(m):
            om[off + i][off + m + i] = Fraction(1)
            om[off + m + i][off + i] = Fraction(-1)
        parts.append(om)
        off += 2 * m
    total = linalg.zeros(N, N)
    for om in parts:
        total = linalg.add(total, om)
    return total, parts


def block_ranges(blocks):
    out, off = [], 0
    for m in blocks:
        out.append(range(off, off + 2 * m))
        off += 2 * m
    return out


@dataclass
class SymplecticBlockMatrix:
    matrix: list
    blocks: list
    forms: list = field(default=None, repr=False)

    def __post_init__(self):
        self.matrix = [[Fraction(x) for x in row] for row in self.matrix]
        self.blocks = [int(b) for b in self.blocks]
        if any(b < 1 for b in self.blocks):
            raise HolonomyError("block sizes must be positive")
        N = 2 * sum(self.blocks)
        if len(self.matrix) != N or any(len(r) != N for r in self.matrix):
            raise HolonomyError(f"matrix must be {N}×{N} for blocks {self.blocks}")
        omega, self.forms = standard_form(self.blocks)
        A = self.matrix
        if linalg.matmul(linalg.transpose(A), linalg.matmul(omega, A)) != omega:
            raise HolonomyError("matrix does not preserve the total symplectic form")

    @property
    def size(self):
        return len(self.matrix)

    def __matmul__(self, other):
        if self.blocks != other.blocks:
            raise HolonomyError("block structures differ")
        return SymplecticBlockMatrix(linalg.matmul(self.matrix, other.matrix), self.blocks)


def pushforward_form(A, form):
    """Matrix of (u, v) ↦ form(A⁻¹u, A⁻¹v)."""
    inv = linalg.inverse(A)
    return linalg.matmul(linalg.transpose(inv), linalg.matmul(form, inv))


def _scalar_multiple(x, y):
    """λ with x = λ·y (y nonzero), or None."""
    lam = None
    for rx, ry in zip(x, y):
        for a, b in zip(rx, ry):
            if b:
                if lam is None:
                    lam = a / b
                if a != lam * b:
                    return None
            elif a:
                return None
    return lam


def induced_permutation(M):
    """(ρ, λ) with A·σ_i = λ_i σ_{ρ(i)}; raise NormalizerError otherwise."""
    rho, lams = [], []
    for i, form in enumerate(M.forms):
        image = pushforward_form(M.matrix, form)
        hit = None
        for j, target in enumerate(M.forms):
            lam = _scalar_multiple(image, target)
            if lam is not None:
                hit = (j, lam)
                break
        if hit is None:
            raise NormalizerError(f"A·σ_{i + 1} is not a multiple of a single block form", i)
        rho.append(hit[0])
        lams.append(hit[1])
    if sorted(rho) != list(range(len(M.blocks))):
        raise NormalizerError("induced map on blocks is not a permutation")
    for i, j in enumerate(rho):
        if M.blocks[j] != M.blocks[i]:
            raise NormalizerError(f"block {i + 1} sent to a block of another size", i)
    if any(lam != 1 for lam in lams):
        raise NormalizerError("scalars must all be 1 when the total form is preserved")
    return rho, lams


def _sp_basis(blocks):
    """Basis of ⊕ sp(2 n_i): X = J S with S symmetric, inside each block."""
    N = 2 * sum(blocks)
    out = []
    for rng, m in zip(block_ranges(blocks), blocks):
        _, (J,) = standard_form([m])
        J = [[-x for x in row] for row in J]   # J with J^T J = I and J J = -I
        idx = list(rng)
        for a in range(2 * m):
            for b in range(a, 2 * m):
                S = linalg.zeros(2 * m, 2 * m)
                S[a][b] = S[b][a] = Fraction(1)
                X = linalg.matmul(J, S)
                big = linalg.zeros(N, N)
                for r in range(2 * m):
                    for c in range(2 * m):
                        big[idx[r]][idx[c]] = X[r][c]
                out.append(big)
    return out


def in_block_sp(X, blocks):
    ranges = block_ranges(blocks)
    owner = {}
    for k, rng in enumerate(ranges):
        for i in rng:
            owner[i] = k
    for i, row in enumerate(X):
        for j, x in enumerate(row):
            if x and owner[i] != owner[j]:
                return False
    for rng, m in zip(ranges, blocks):
        idx = list(rng)
        Xi = [[X[r][c] for c in idx] for r in idx]
        _, (Om,) = standard_form([m])
        if linalg.add(linalg.matmul(linalg.transpose(Xi), Om), linalg.matmul(Om, Xi)) != linalg.zeros(2 * m, 2 * m):
            return False
    return True


def is_in_normalizer(M):
    """Does conjugation by A preserve ⊕ sp(2 n_i)?"""
    A = M.matrix
    inv = linalg.inverse(A)
    return all(in_block_sp(linalg.matmul(A, linalg.matmul(X, inv)), M.blocks)
               for X in _sp_basis(M.blocks))


# -- generators ----------------------------------------------------------------------

def transvection(blocks, v, c):
    """x ↦ x + c·Ω(v, x)·v, which preserves Ω."""
    omega, _ = standard_form(blocks)
    v = [Fraction(x) for x in v]
    c = Fraction(c)
    N = len(v)
    row = [sum((v[k] * omega[k][j] for k in range(N)), Fraction(0)) for j in range(N)]
    T = linalg.identity(N)
    for i in range(N):
        for j in range(N):
            T[i][j] += c * v[i] * row[j]
    return SymplecticBlockMatrix(T, blocks)


def block_swap(blocks, i, j):
    if blocks[i] != blocks[j]:
        raise HolonomyError("only blocks of equal size can be swapped")
    N = 2 * sum(blocks)
    ranges = block_ranges(blocks)
    perm = list(range(N))
    for a, b in zip(ranges[i], ranges[j]):
        perm[a], perm[b] = b, a
    P = linalg.zeros(N, N)
    for src, dst in enumerate(perm):
        P[dst][src] = Fraction(1)
    return SymplecticBlockMatrix(P, blocks)


def identity_element(blocks):
    return SymplecticBlockMatrix(linalg.identity(2 * sum(blocks)), blocks)


def random_block_diagonal(blocks, rng, words=3):
    M = identity_element(blocks)
    for _ in range(words):
        k = rng.randrange(len(blocks))
        v = [0] * (2 * sum(blocks))
        for i in block_ranges(blocks)[k]:
            v[i] = rng.randint(-2, 2)
        if any(v):
            M = M @ transvection(blocks, v, Fraction(rng.randint(-2, 2), rng.randint(1, 2)))
    return M


def random_normalizer_element(blocks, rng):
    """Block-diagonal element composed with a random permutation of equal blocks."""
    M = random_block_diagonal(blocks, rng)
    for _ in range(2):
        same = [(i, j) for i in range(len(blocks)) for j in range(i + 1, len(blocks))
                if blocks[i] == blocks[j]]
        if same and rng.random() < 0.7:
            i, j = rng.choice(same)
            M = M @ block_swap(blocks, i, j)
    return M @ random_block_diagonal(blocks, rng)


def random_mixing_element(blocks, rng):
    """Transvection along a vector meeting two blocks (never a normalizer element
    when the parameter is nonzero and the vector is not isotropic-split)."""
    ranges = block_ranges(blocks)
    N = 2 * sum(blocks)
    while True:
        v = [0] * N
        i, j = rng.sample(range(len(blocks)), 2)
        for k in ranges[i]:
            v[k] = rng.randint(-2, 2)
        for k in ranges[j]:
            v[k] = rng.randint(-2, 2)
        if any(v[k] for k in ranges[i]) and any(v[k] for k in ranges[j]):
            M = transvection(blocks, v, rng.choice([1, -1, 2, Fraction(1, 2)]))
            return M @ random_block_diagonal(blocks, rng, words=1)


def generated_family(blocks, count, seed=0):
    """Mixed family: block-diagonal, normalizer with swaps, and mixing elements."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        r = k % 3
        if r == 0:
            out.append(("block_diagonal", random_block_diagonal(blocks, rng)))
        elif r == 1:
            out.append(("normalizer", random_normalizer_element(blocks, rng)))
        else:
            out.append(("mixing", random_mixing_element(blocks, rng)))
    return out
