"""Doubly symmetric binary source model and exact syndrome distributions.

All information quantities are in bits (base-2 logarithms); infinities are
returned explicitly where divergences diverge, never raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceededError, DimensionMismatchError, DomainError
from .gf2 import DEFAULT_MAX_WORDS, MAX_WIDTH, Gf2Matrix, popcount, syndrome_map

_SUM_TOL = 1e-12


def _check_prob(x, name="probability"):
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"{name} {x!r} outside [0, 1]")


def h2(a: float) -> float:
    """Entropy of Bern(a) in bits, with 0 log 0 = 0."""
    _check_prob(a)
    if a == 0.0 or a == 1.0:
        return 0.0
    return -(a * math.log2(a) + (1.0 - a) * math.log2(1.0 - a))


def d2(a: float, b: float) -> float:
    """KL divergence between Bern(a) and Bern(b) in bits; +inf if b is a
    point mass and a differs."""
    _check_prob(a)
    _check_prob(b)

    def term(x, y):
        if x == 0.0:
            return 0.0
        if y == 0.0:
            return math.inf
        return x * math.log2(x / y)

    return term(a, b) + term(1.0 - a, 1.0 - b)


def conv(a: float, b: float) -> float:
    """Binary convolution a*b = a(1-b) + b(1-a): crossover of two cascaded flips."""
    _check_prob(a)
    _check_prob(b)
    return a * (1.0 - b) + b * (1.0 - a)


def h2_inv(y: float) -> float:
    """The crossover in [0, 1/2] with h2(alpha) = y, by bisection."""
    if not 0.0 <= y <= 1.0:
        raise DomainError(f"entropy value {y!r} outside [0, 1]")
    lo, hi = 0.0, 0.5
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if h2(mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class DsbsPair:
    """Crossover probabilities of the source under the two hypotheses.

    ``p_tilde`` is the extra-flip probability with p1 = p0 * p_tilde; it is
    defined when p1 is at least as close to 1/2 as p0.
    """

    p0: float
    p1: float

    def __post_init__(self):
        _check_prob(self.p0, "p0")
        _check_prob(self.p1, "p1")

    @property
    def rho0(self) -> float:
        return 1.0 - 2.0 * self.p0

    @property
    def rho1(self) -> float:
        return 1.0 - 2.0 * self.p1

    @property
    def p_tilde(self) -> float:
        # tolerance keeps the p1 = 1 - p0 tie from failing to float noise
        if abs(self.p0 - 0.5) < abs(self.p1 - 0.5) - 1e-12:
            raise DomainError(
                "p_tilde undefined: p1 must be at least as close to 1/2 as p0"
            )
        if self.p0 == 0.5:
            return 0.5
        t = (self.p1 - self.p0) / (1.0 - 2.0 * self.p0)
        return min(max(t, 0.0), 1.0)


@dataclass(frozen=True, eq=False)
class Dist:
    """A distribution over k-bit words (2^k outcomes indexed by word value)."""

    k: int
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", p)
        if p.shape != (1 << self.k,):
            raise DimensionMismatchError(
                f"expected {1 << self.k} outcomes, got shape {p.shape}"
            )
        if np.any(p < 0.0):
            raise DomainError("negative probability entry")
        if abs(p.sum() - 1.0) > _SUM_TOL:
            raise DomainError(f"probabilities sum to {p.sum()!r}, not 1")


def bern_product_dist(p: float, k: int) -> Dist:
    """Law of k i.i.d. Bern(p) bits as a distribution over k-bit words."""
    _check_prob(p)
    if k > MAX_WIDTH:
        raise BudgetExceededError(f"k={k} exceeds the width cap")
    w = popcount(np.arange(1 << k, dtype=np.uint32)).astype(np.int64)
    return Dist(k, weight_profile(p, k)[w])


def weight_profile(p: float, n: int) -> np.ndarray:
    """p^w (1-p)^(n-w) for w = 0..n."""
    pw = np.ones(n + 1)
    qw = np.ones(n + 1)
    for w in range(1, n + 1):
        pw[w] = pw[w - 1] * p
        qw[w] = qw[w - 1] * (1.0 - p)
    return pw * qw[::-1]


def syndrome_weight_enumerator(
    g: Gf2Matrix, max_words: int = DEFAULT_MAX_WORDS
) -> np.ndarray:
    """Counts N[s, w] of n-bit words with syndrome s and Hamming weight w.

    Shape (2^k, n+1); row sums are the coset sizes 2^(n-rank).
    """
    syn = syndrome_map(g, max_words=max_words).astype(np.int64)
    w = popcount(np.arange(1 << g.cols, dtype=np.uint32)).astype(np.int64)
    flat = np.bincount(
        syn * (g.cols + 1) + w, minlength=(1 << g.k) * (g.cols + 1)
    )
    return flat.reshape(1 << g.k, g.cols + 1)


def syndrome_dist(
    g: Gf2Matrix, p: float, max_words: int = DEFAULT_MAX_WORDS
) -> Dist:
    """Exact law of G z with z ~ Bern(p)^n, by exhaustive weight enumeration."""
    _check_prob(p)
    enum = syndrome_weight_enumerator(g, max_words=max_words)
    return Dist(g.k, enum @ weight_profile(p, g.cols))


def syndrome_dist_from_enumerator(enum: np.ndarray, ncols: int, p: float) -> np.ndarray:
    """Probability vector from a precomputed weight enumerator (scan fast path)."""
    return enum @ weight_profile(p, ncols)


def pair_dist(
    g: Gf2Matrix, h: Gf2Matrix, p: float, max_cols: int = 12
) -> Dist:
    """Law of the pair (G X^n, H Y^n) under a DSBS(p) source.

    Outcomes are combined words (v1 << h.k) | v2.  Cost is 4^n, so the width
    is capped well below the single-statistic budget.
    """
    if g.cols != h.cols:
        raise DimensionMismatchError(
            f"G has {g.cols} columns but H has {h.cols}"
        )
    _check_prob(p)
    n = g.cols
    if n > max_cols:
        raise BudgetExceededError(f"pair statistic sweep needs 4^{n} steps")
    sg = syndrome_map(g).astype(np.int64)
    sh = syndrome_map(h).astype(np.int64)
    words = np.arange(1 << n, dtype=np.uint32)
    wts = weight_profile(p, n)[popcount(words).astype(np.int64)]
    probs = np.zeros(1 << (g.k + h.k))
    scale = 1.0 / (1 << n)
    for x in range(1 << n):
        idx = (sg[x] << h.k) | sh[np.uint32(x) ^ words]
        probs += np.bincount(idx, weights=wts, minlength=probs.size)
    return Dist(g.k + h.k, probs * scale)
