"""Quantitative amenability testing on coset orbit balls.

Markov averaging operators of symmetric generator multisets, certified
spectral-radius lower bounds via power iteration, exact invariance checks
for single basis vectors, and constructive almost-invariant (Reiter)
vectors built by window averaging along the shift direction.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .cosets import Coset, OrbitBall, act, orbit_ball
from .errors import ResourceLimitError
from .freegroup import (
    GElement,
    IDENTITY,
    Word,
    format_gelement,
    g_inv,
    minimal_level,
    parse_word,
)


class GenSet:
    """A finite nonempty multiset of group elements, closed under inverse
    with multiplicity."""

    __slots__ = ("elements",)

    def __init__(self, elements: Iterable[GElement]):
        elems = tuple(elements)
        if not elems:
            raise ValueError("generator multiset must be nonempty")
        for g in elems:
            if not isinstance(g, GElement):
                raise TypeError(f"expected GElement, got {type(g).__name__}")
        counts = Counter(elems)
        for g, c in counts.items():
            if counts[g_inv(g)] != c:
                raise ValueError(
                    f"generator multiset is not symmetric: {format_gelement(g)} "
                    f"occurs {c} times, its inverse {counts[g_inv(g)]}"
                )
        self.elements = elems

    @classmethod
    def symmetrized(cls, elements: Iterable[GElement]) -> "GenSet":
        """Close a sequence under inverses (appending whatever is missing)."""
        elems = list(elements)
        counts = Counter(elems)
        for g in list(counts):
            missing = counts[g] - counts[g_inv(g)]
            if missing > 0:
                elems.extend([g_inv(g)] * missing)
                counts[g_inv(g)] += missing
        return cls(elems)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def describe(self) -> str:
        return ", ".join(format_gelement(g) for g in self.elements)

    def __repr__(self) -> str:
        return f"GenSet([{self.describe()}])"


def free_generator_set(k: int) -> GenSet:
    """The symmetric set {(0, x_1)^{+-1}, ..., (0, x_k)^{+-1}}."""
    if k < 1:
        raise ValueError(f"need at least one generator, got k={k}")
    elems = []
    for i in range(1, k + 1):
        elems.append(GElement(0, parse_word(f"x{i}")))
        elems.append(GElement(0, parse_word(f"x{i}^-1")))
    return GenSet(elems)


class SparseOperator:
    """Symmetric substochastic operator on an orbit-ball basis.

    Entries are exact rationals count/denominator, held as an integer-count
    sparse matrix plus the common denominator (the generator multiset size).
    Row sums are <= 1, with equality exactly on interior nodes.
    """

    __slots__ = ("counts", "denominator", "basis", "dimension", "_matrix")

    def __init__(
        self,
        counts: sp.spmatrix,
        denominator: int,
        basis: Optional[OrbitBall] = None,
        validate: bool = True,
    ):
        counts = counts.tocsr()
        n, m = counts.shape
        if n != m:
            raise ValueError(f"operator must be square, got {counts.shape}")
        if denominator < 1:
            raise ValueError(f"denominator must be positive, got {denominator}")
        if validate:
            if (counts != counts.T).nnz != 0:
                raise ValueError("operator is not symmetric")
            row_sums = np.asarray(counts.sum(axis=1)).ravel()
            if len(row_sums) and row_sums.max(initial=0) > denominator:
                raise ValueError("row sum exceeds 1")
            if counts.nnz and counts.data.min() < 0:
                raise ValueError("negative entry count")
        self.counts = counts
        self.denominator = denominator
        self.basis = basis
        self.dimension = n
        self._matrix = None

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.counts[i, j]), self.denominator)

    def row_sum(self, i: int) -> Fraction:
        start, end = self.counts.indptr[i], self.counts.indptr[i + 1]
        return Fraction(int(self.counts.data[start:end].sum()), self.denominator)

    def items(self):
        """((row, col), value) over nonzero entries, values as Fractions."""
        coo = self.counts.tocoo()
        for i, j, v in zip(coo.row, coo.col, coo.data):
            yield (int(i), int(j)), Fraction(int(v), self.denominator)

    @property
    def matrix(self) -> sp.csr_matrix:
        """Floating-point form, counts / denominator."""
        if self._matrix is None:
            self._matrix = self.counts.astype(np.float64) / self.denominator
        return self._matrix


def markov_operator(ball: OrbitBall) -> SparseOperator:
    """M = (1/|S|) sum over s in S of the action permutation compressed to
    the ball (images outside the ball dropped: zero boundary).

    The ball's generator multiset must be symmetric; then M is exactly
    symmetric with rational entries of denominator |S|.
    """
    gens = GenSet(ball.generators)
    n = len(ball)
    rows = []
    cols = []
    for img in ball.gen_images:
        arr = np.frombuffer(img, dtype=np.int32) if len(img) else np.empty(0, np.int32)
        mask = arr >= 0
        rows.append(np.nonzero(mask)[0].astype(np.int64))
        cols.append(arr[mask].astype(np.int64))
    row = np.concatenate(rows) if rows else np.empty(0, np.int64)
    col = np.concatenate(cols) if cols else np.empty(0, np.int64)
    data = np.ones(len(row), dtype=np.int64)
    counts = sp.coo_matrix((data, (row, col)), shape=(n, n)).tocsr()
    return SparseOperator(counts, len(gens), ball)


def _power_iterate(
    matrix: sp.csr_matrix,
    v: np.ndarray,
    iterations: int,
    tol: float,
) -> Tuple[float, np.ndarray]:
    """Power iteration on (matrix + identity), reading off the Rayleigh
    quotient of matrix itself.

    The +identity shift makes the iterated operator positive semidefinite
    (the matrix is symmetric with norm <= 1), which guarantees the Rayleigh
    readout is nondecreasing along iterates and converges to the top
    eigenvalue even on bipartite balls, where unshifted iteration stalls.
    Returns (best Rayleigh quotient seen, final unit iterate).
    """
    best = -math.inf
    prev = -math.inf
    for _ in range(iterations):
        mv = matrix @ v
        ray = float(v @ mv)
        if ray > best:
            best = ray
        if ray - prev < tol:
            break
        prev = ray
        w = mv + v
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            break
        v = w / nw
    return best, v


def norm_lower_bound(
    op: SparseOperator,
    iterations: int = 10_000,
    tol: float = 1e-9,
    start: Optional[np.ndarray] = None,
) -> float:
    """Certified lower bound on the operator norm: the best Rayleigh
    quotient along a power iteration started from the uniform nonnegative
    vector (or `start`).

    Monotone improving in `iterations`; for symmetric nonnegative operators
    it converges to the top eigenvalue.  Early convergence (Rayleigh
    improvement below tol) returns the best value so far.
    """
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    if tol < 0:
        raise ValueError(f"tol must be >= 0, got {tol}")
    n = op.dimension
    if n == 0:
        raise ValueError("operator has dimension 0")
    if start is None:
        v = np.full(n, 1.0 / math.sqrt(n))
    else:
        v = np.asarray(start, dtype=np.float64).copy()
        if v.shape != (n,):
            raise ValueError(f"start vector has shape {v.shape}, expected ({n},)")
        nv = float(np.linalg.norm(v))
        if not math.isfinite(nv) or nv == 0.0:
            raise ValueError("start vector must be finite and nonzero")
        v /= nv
    best, _ = _power_iterate(op.matrix, v, iterations, tol)
    return best


@dataclass(frozen=True)
class SpectralProfile:
    """Certified lower bounds on the Markov operator norm, per ball radius."""

    radii: Tuple[int, ...]
    estimates: Tuple[float, ...]
    generators: str

    def __post_init__(self):
        for e in self.estimates:
            if not (0.0 <= e <= 1.0):
                raise ValueError(f"estimate {e} outside [0, 1]")
        for a, b in zip(self.estimates, self.estimates[1:]):
            if b < a:
                raise ValueError(f"estimates decrease: {a} then {b}")

    def rows(self) -> Tuple[Tuple[int, float], ...]:
        return tuple(zip(self.radii, self.estimates))


def kesten_profile(
    base: Coset,
    gens,
    radii: Sequence[int],
    cap: int = 2_000_000,
    iterations: int = 200_000,
    tol: float = 1e-9,
) -> SpectralProfile:
    """Norm lower bounds for the Markov operator compressed to orbit balls
    of increasing radius around base.

    One ball is built at the largest radius; because breadth-first order
    lists nodes by distance, the ball at any smaller radius is a prefix, and
    the corresponding operator is exactly the leading principal submatrix.
    Each radius warm-starts from the previous eigenvector estimate, and by
    eigenvalue interlacing every earlier estimate stays a valid lower bound,
    so the profile is nondecreasing by construction.
    """
    if not isinstance(gens, GenSet):
        gens = GenSet(gens)
    radii = tuple(int(r) for r in radii)
    if not radii:
        raise ValueError("radii must be nonempty")
    if radii[0] < 0:
        raise ValueError(f"radii must be >= 0, got {radii[0]}")
    for a, b in zip(radii, radii[1:]):
        if b <= a:
            raise ValueError(f"radii must be strictly increasing, got {a} then {b}")

    ball = orbit_ball(base, gens.elements, radii[-1], cap=cap)
    full = markov_operator(ball)
    counts = full.counts

    estimates = []
    prev_est = 0.0
    v: Optional[np.ndarray] = None
    for r in radii:
        nr = ball.prefix_size(r)
        # Principal submatrix of a symmetric matrix: symmetry holds, skip
        # the O(nnz) revalidation done on the full operator above.
        op = SparseOperator(counts[:nr, :nr], full.denominator, ball, validate=False)
        if v is None:
            start = np.full(nr, 1.0 / math.sqrt(nr))
        else:
            start = np.zeros(nr)
            start[: v.size] = v
        est, v = _power_iterate(op.matrix, start, iterations, tol)
        # A lower bound at radius r is a lower bound at every larger radius
        # (ball compressions interlace), so the running maximum is certified.
        prev_est = max(est, prev_est)
        estimates.append(prev_est)
    return SpectralProfile(radii, tuple(estimates), gens.describe())


def delta_invariance_check(
    S: Iterable[Word],
    level: Optional[int] = None,
) -> Tuple[int, Dict[Word, float]]:
    """Exact invariance of the basis vector at Coset(level, e) under the
    shift-0 elements (0, s) for s in S.

    level defaults to the largest minimal_level over the non-identity words
    of S (identity words put no constraint on the level; 0 is used if every
    word is the identity).  Each deviation ||(0,s) . delta - delta|| is 0.0
    when the coset is fixed (decided by exact integer comparison) and
    sqrt(2) when it moves to a different basis vector.
    """
    words = tuple(S)
    if not words:
        raise ValueError("S must be nonempty")
    for w in words:
        if not isinstance(w, Word):
            raise TypeError(f"expected Word, got {type(w).__name__}")
    if level is None:
        levels = [minimal_level(w) for w in words if w.letters]
        level = max(levels) if levels else 0
    base = Coset(int(level), IDENTITY)
    deviations: Dict[Word, float] = {}
    for w in words:
        moved = act(GElement(0, w), base)
        deviations[w] = 0.0 if moved == base else math.sqrt(2.0)
    return int(level), deviations


class ReiterCertificate:
    """A unit vector on the coset space together with its exact deviations
    ||lambda(s) xi - xi|| for every s in the generator multiset; all
    deviations are at most epsilon."""

    __slots__ = ("vector", "norm", "deviations", "epsilon", "window_start", "window_size")

    def __init__(self, vector, norm, deviations, epsilon, window_start, window_size):
        if not deviations:
            raise ValueError("certificate needs at least one deviation")
        worst = max(deviations.values())
        if worst > epsilon:
            raise ValueError(f"max deviation {worst} exceeds epsilon {epsilon}")
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"vector norm {norm} is not 1")
        self.vector = dict(vector)
        self.norm = norm
        self.deviations = dict(deviations)
        self.epsilon = epsilon
        self.window_start = window_start
        self.window_size = window_size

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values())

    def recompute_deviations(self) -> Dict[GElement, float]:
        """Re-derive every deviation from the stored vector by exact coset
        action; must reproduce the stored values."""
        return _exact_deviations(self.vector, self.deviations.keys())


def _exact_deviations(vector: Dict[Coset, float], gens) -> Dict[GElement, float]:
    devs: Dict[GElement, float] = {}
    for g in gens:
        if g in devs:
            continue
        moved = {act(g, c): a for c, a in vector.items()}
        extra = [c for c in moved if c not in vector]
        acc = 0.0
        for c in vector:
            d = moved.get(c, 0.0) - vector[c]
            acc += d * d
        for c in extra:
            acc += moved[c] * moved[c]
        devs[g] = math.sqrt(acc)
    return devs


def reiter_search(S, epsilon: float, max_window: int = 1 << 20) -> ReiterCertificate:
    """Construct an almost-invariant unit vector for the generator multiset
    S: uniform amplitude over the window of cosets Coset(n, e) with
    n0 < n <= n0 + N, where n0 is the largest minimal level among the
    word parts of S.

    Every shift-0 part acts trivially above its level, so only the shift
    components move the window; a shift of size k displaces at most 2|k|
    basis vectors, giving deviation <= sqrt(2 K / N) for K = max shift.  N
    starts at the smallest value that bound admits and doubles until the
    exactly-computed deviations all fall within epsilon.
    """
    if not isinstance(S, GenSet):
        S = GenSet(S)
    epsilon = float(epsilon)
    if not (0.0 < epsilon < 2.0):
        raise ValueError(f"epsilon must lie in (0, 2), got {epsilon}")
    word_levels = [minimal_level(g.word) for g in S if g.word.letters]
    n0 = max(word_levels) if word_levels else 0
    K = max(abs(g.shift) for g in S)
    N = max(1, math.ceil(2 * K / (epsilon * epsilon))) if K else 1
    while True:
        if N > max_window:
            raise ResourceLimitError(
                f"window size {N} exceeds cap {max_window} at epsilon {epsilon}"
            )
        amp = 1.0 / math.sqrt(N)
        vector = {Coset(n, IDENTITY): amp for n in range(n0 + 1, n0 + N + 1)}
        norm = math.sqrt(math.fsum(a * a for a in vector.values()))
        devs = _exact_deviations(vector, S.elements)
        if max(devs.values()) <= epsilon:
            return ReiterCertificate(vector, norm, devs, epsilon, n0, N)
        N *= 2
