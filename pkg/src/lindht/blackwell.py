"""Blackwell comparisons between binary statistics.

Two independent dominance oracles are shipped: a degradation LP (does a
single row-stochastic channel map one dichotomy to the other under both
hypotheses?) and ROC-region inclusion (Neyman-Pearson geometry).  For
dichotomies these agree by the Blackwell-Sherman-Stein theorem, which the
test suite exercises heavily.

Direction convention: ``u`` dominates ``v`` means a channel FROM u TO v
exists, i.e. every error pair achievable from v is achievable from u.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import probmodel
from ._simplex import l1_feasibility_gap
from .errors import DimensionMismatchError, DomainError
from .gf2 import CanonicalCode, Gf2Matrix, split_even_odd, syndrome_map

_RATIO_MERGE_RTOL = 1e-12
_ROW_SUM_TOL = 1e-10
_CLIP_TOL = 1e-12


@dataclass(eq=False)
class Dichotomy:
    """A pair of distributions over a shared finite outcome set.

    Outcomes with zero probability under both hypotheses are dropped at
    construction (they affect neither oracle); ``labels`` keeps the original
    outcome indices of the surviving entries.
    """

    dist0: np.ndarray
    dist1: np.ndarray
    labels: np.ndarray

    @classmethod
    def from_dists(cls, d0, d1) -> "Dichotomy":
        p0 = np.asarray(getattr(d0, "probs", d0), dtype=float)
        p1 = np.asarray(getattr(d1, "probs", d1), dtype=float)
        if p0.shape != p1.shape:
            raise DimensionMismatchError("hypothesis laws differ in outcome count")
        keep = (p0 > 0.0) | (p1 > 0.0)
        return cls(p0[keep], p1[keep], np.flatnonzero(keep))

    @property
    def size(self) -> int:
        return self.dist0.size


@dataclass(eq=False)
class Channel:
    """A row-stochastic transition matrix; row u is the law of V given U=u."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if np.any(e < -_CLIP_TOL):
            raise DomainError("channel entry below -1e-12")
        e = np.clip(e, 0.0, None)
        sums = e.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > _ROW_SUM_TOL):
            raise DomainError(f"channel rows sum to {sums}, not 1")
        self.entries = e

    def push(self, dist: np.ndarray) -> np.ndarray:
        """Output law sum_u dist[u] * entries[u, :]."""
        return np.asarray(dist, dtype=float) @ self.entries


@dataclass(eq=False)
class ErrorRegion:
    """Lower-left boundary of the achievable (type-I, type-II) error pairs.

    ``e1`` ascending, ``e2`` strictly decreasing; ``thresholds[i]`` is the
    likelihood ratio of the outcome group randomized along segment i.
    """

    e1: np.ndarray
    e2: np.ndarray
    thresholds: np.ndarray = field(default_factory=lambda: np.array([]))

    def boundary_at(self, x) -> np.ndarray:
        return np.interp(x, self.e1, self.e2)


def roc_region(d: Dichotomy) -> ErrorRegion:
    """Sweep the randomized likelihood-ratio tests of a dichotomy.

    Outcomes are sorted by decreasing ratio dist0/dist1 (infinite first,
    zero last), equal ratios merged, and the cumulative error pairs taken.
    """
    ratio = np.where(d.dist1 > 0.0, d.dist0 / np.where(d.dist1 > 0.0, d.dist1, 1.0), np.inf)
    order = np.argsort(-ratio, kind="stable")
    r, p0, p1 = ratio[order], d.dist0[order], d.dist1[order]

    groups: list[list[float]] = []
    for ri, ai, bi in zip(r, p0, p1):
        if groups and _ratios_equal(groups[-1][0], ri):
            groups[-1][1] += ai
            groups[-1][2] += bi
        else:
            groups.append([ri, ai, bi])
    g_r = np.array([g[0] for g in groups])
    g_p0 = np.array([g[1] for g in groups])
    g_p1 = np.array([g[2] for g in groups])

    # vertex_j = errors when H0 is accepted exactly on the first j groups
    tails = np.concatenate([g_p0[::-1].cumsum()[::-1], [0.0]])
    heads = np.concatenate([[0.0], g_p1.cumsum()])
    seg = list(g_r)
    e1, e2 = list(tails), list(heads)
    if np.isinf(g_r[0]):  # free e1 reduction: (1, 0) is dominated
        e1, e2, seg = e1[1:], e2[1:], seg[1:]
    if g_r[-1] == 0.0:  # free e2 increase: (0, 1) is dominated
        e1, e2, seg = e1[:-1], e2[:-1], seg[:-1]
    return ErrorRegion(
        e1=np.array(e1[::-1]), e2=np.array(e2[::-1]), thresholds=np.array(seg[::-1])
    )


def _ratios_equal(a: float, b: float) -> bool:
    if np.isinf(a) or np.isinf(b):
        return np.isinf(a) and np.isinf(b)
    return abs(a - b) <= _RATIO_MERGE_RTOL * max(abs(a), abs(b))


def roc_margin(a: ErrorRegion, b: ErrorRegion) -> float:
    """Worst violation of "a's boundary lies below b's" (<= 0 means inclusion).

    Checking b's vertices suffices: on each segment of b the difference of
    the piecewise-linear boundaries is convex, so its maximum is attained at
    a segment endpoint.
    """
    return float(np.max(a.boundary_at(b.e1) - b.e2))


def region_dominates(a: ErrorRegion, b: ErrorRegion, eps: float = 1e-9) -> bool:
    """True iff region a contains region b up to eps."""
    return roc_margin(a, b) <= eps


def _degradation_gap(u: Dichotomy, v: Dichotomy, max_iter: int = 50000):
    mu, mv = u.size, v.size
    a = np.zeros((mu + 2 * mv, mu * mv))
    b = np.zeros(mu + 2 * mv)
    for uu in range(mu):
        a[uu, uu * mv : (uu + 1) * mv] = 1.0
        b[uu] = 1.0
    for i, (du, dv) in enumerate(((u.dist0, v.dist0), (u.dist1, v.dist1))):
        for vv in range(mv):
            a[mu + i * mv + vv, vv::mv] = du
            b[mu + i * mv + vv] = dv[vv]
    gap, x = l1_feasibility_gap(a, b, max_iter=max_iter)
    return float(gap), x.reshape(mu, mv)


def degradation_gap(u: Dichotomy, v: Dichotomy) -> float:
    """Phase-I infeasibility of the degradation LP (0 iff u dominates v)."""
    return _degradation_gap(u, v)[0]


def degradation_feasible(
    u: Dichotomy, v: Dichotomy, eps: float = 1e-9, max_iter: int = 50000
) -> tuple[bool, Channel | None]:
    """Does a row-stochastic W with v.dist_i = u.dist_i @ W exist (both i)?

    Solved as a linear feasibility problem over the entries of W; returns the
    witness channel when feasible.

    Raises:
        SolverFailureError: if the simplex does not terminate (distinct from
            an infeasible verdict).
    """
    gap, k = _degradation_gap(u, v, max_iter=max_iter)
    if gap > eps:
        return False, None
    k = np.clip(k, 0.0, None)
    sums = k.sum(axis=1)
    sums[sums == 0.0] = 1.0
    return True, Channel(k / sums[:, None])


def dominates(
    u: Dichotomy, v: Dichotomy, oracle: str = "roc", eps: float = 1e-9
) -> tuple[bool, dict]:
    """Decide u >=_B v with the chosen oracle ("roc", "lp", or "both").

    Returns (flag, info); info carries the raw scores and, in "both" mode,
    whether the oracles agreed (the LP verdict is reported on disagreement,
    being the definitional one).
    """
    if oracle not in ("roc", "lp", "both"):
        raise DomainError(f"unknown oracle {oracle!r}")
    info: dict = {}
    flag = None
    if oracle in ("roc", "both"):
        margin = roc_margin(roc_region(u), roc_region(v))
        info["roc_margin"] = margin
        flag = margin <= eps
    if oracle in ("lp", "both"):
        gap, _ = _degradation_gap(u, v)
        info["lp_gap"] = gap
        lp_flag = bool(gap <= eps)
        if oracle == "both":
            info["oracle_agreement"] = lp_flag == flag
        flag = lp_flag
    return bool(flag), info


# ---------------------------------------------------------------------------
# dichotomy builders


def truncation_dichotomy(k: int, p0: float, p1: float) -> Dichotomy:
    """Laws of X^k xor Y^k under the two hypotheses: Bern(p_i)^k."""
    return Dichotomy.from_dists(
        probmodel.bern_product_dist(p0, k), probmodel.bern_product_dist(p1, k)
    )


def syndrome_dichotomy(g: Gf2Matrix, p0: float, p1: float) -> Dichotomy:
    """Laws of G(X^n xor Y^n) under the two hypotheses."""
    return Dichotomy.from_dists(
        probmodel.syndrome_dist(g, p0), probmodel.syndrome_dist(g, p1)
    )


def pair_dichotomy(g: Gf2Matrix, h: Gf2Matrix, p0: float, p1: float) -> Dichotomy:
    """Laws of the pair (G X^n, H Y^n); outcomes are (v1 << h.k) | v2."""
    return Dichotomy.from_dists(
        probmodel.pair_dist(g, h, p0), probmodel.pair_dist(g, h, p1)
    )


_BOOL_FUNCS = {
    "and": lambda w: int(w == 3),
    "or": lambda w: int(w != 0),
}


def bool_pair_dichotomy(p0: float, p1: float, fx: str, fy: str) -> Dichotomy:
    """Laws of (f_x(X^2), f_y(Y^2)) for two-bit boolean statistics.

    ``fx``/``fy`` name the per-agent functions ("and" or "or"); outcomes are
    (f_x value << 1) | f_y value.
    """
    try:
        func_x, func_y = _BOOL_FUNCS[fx], _BOOL_FUNCS[fy]
    except KeyError as exc:
        raise DomainError(f"unknown boolean statistic {exc.args[0]!r}") from exc
    dists = []
    for p in (p0, p1):
        wp = probmodel.weight_profile(p, 2)
        probs = np.zeros(4)
        for x in range(4):
            for w in range(4):
                probs[(func_x(x) << 1) | func_y(x ^ w)] += 0.25 * wp[bin(w).count("1")]
        dists.append(probs)
    return Dichotomy.from_dists(*dists)


# ---------------------------------------------------------------------------
# explicit channels from the dominance proofs


def pair_channel(g: Gf2Matrix, h: Gf2Matrix) -> Channel:
    """Channel simulating the pair statistic (G X^n, H Y^n) from the
    xor-syndrome statistic G(X^n xor Y^n).

    Built by marginalizing over an auxiliary uniform n-bit vector y':
    entry[u][(v1, v2)] = 2^-n |{y' : G y' = u xor v1, H y' = v2}|.  Pushing the
    syndrome laws through it reproduces the pair laws exactly, for any source
    crossover.
    """
    if g.cols != h.cols:
        raise DimensionMismatchError(
            f"G has {g.cols} columns but H has {h.cols}"
        )
    kg, kh = g.k, h.k
    sg = syndrome_map(g).astype(np.int64)
    sh = syndrome_map(h).astype(np.int64)
    counts = np.bincount((sg << kh) | sh, minlength=1 << (kg + kh))
    base = counts / float(1 << g.cols)  # law of (G y', H y'), y' uniform
    v2 = np.arange(1 << kh)
    ent = np.empty((1 << kg, 1 << (kg + kh)))
    for u in range(1 << kg):
        idx = ((np.arange(1 << kg) ^ u) << kh)[:, None] | v2[None, :]
        ent[u] = base[idx].reshape(-1)
    return Channel(ent)


def trunc_to_syndrome_channel_indep(code: CanonicalCode, p: float) -> Channel:
    """Channel simulating the syndrome of [I_k A] from the k-bit truncation
    statistic when one hypothesis is independence (crossover 1/2).

    V = U xor A Z' with Z' ~ Bern(p)^(n-k); ``p`` is the non-1/2 crossover.
    """
    law = probmodel.syndrome_dist(code.a_part, p).probs
    size = 1 << code.k
    v = np.arange(size)
    return Channel(law[v[None, :] ^ v[:, None]])


def trunc_to_syndrome_channel_opposite(code: CanonicalCode, p: float) -> Channel:
    """Channel simulating the syndrome of [I_k A] from the k_e-bit truncation
    statistic for the test DSBS(p) versus DSBS(1-p).

    k_e counts the even-weight rows of A.  The syndrome decomposes as
    pad(U) xor C Z' where C stacks unit columns at the odd-row positions next
    to A; all rows of C have even weight, so the all-ones shift between the
    hypotheses cancels and one channel serves both.
    """
    split = split_even_odd(code.a_part)
    k, m = code.k, code.n - code.k
    c_words = []
    for rrow in range(k):
        unit = sum(
            (1 << j) for j, oi in enumerate(split.odd_indices) if oi == rrow
        )
        c_words.append(unit | (code.a_part.row_words[rrow] << split.k_odd))
    c = Gf2Matrix(tuple(c_words), split.k_odd + m)
    law = probmodel.syndrome_dist(c, p).probs

    pads = []
    for u in range(1 << split.k_even):
        pads.append(
            sum(((u >> j) & 1) << ei for j, ei in enumerate(split.even_indices))
        )
    v = np.arange(1 << k)
    ent = np.empty((1 << split.k_even, 1 << k))
    for u, pad in enumerate(pads):
        ent[u] = law[v ^ pad]
    return Channel(ent)


def and_or_incomparable(
    p0: float, p1: float, eps: float = 1e-9
) -> tuple[bool, bool]:
    """Degradation feasibility between (AND(X^2), OR(Y^2)) and
    (AND(X^2), AND(Y^2)), in both directions; (False, False) means the two
    statistics are Blackwell-incomparable at (p0, p1)."""
    d_mixed = bool_pair_dichotomy(p0, p1, "and", "or")
    d_same = bool_pair_dichotomy(p0, p1, "and", "and")
    fwd, _ = degradation_feasible(d_mixed, d_same, eps=eps)
    back, _ = degradation_feasible(d_same, d_mixed, eps=eps)
    return fwd, back
