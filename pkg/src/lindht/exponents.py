"""Stein-exponent curves for symmetric-rate quantize-and-test schemes.

The random-quantization exponent is the I-projection value
min D(pi || P1) over joint laws pi on (U,X,Y,V) matching three pair
marginals of P0; it is computed by iterative proportional fitting on the
16-cell table.  Closed forms are available for testing for/against
independence; the truncation exponent is the straight line R * d2(p0||p1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NoConvergenceError, SupportViolationError
from .probmodel import _check_prob, conv, d2, h2, h2_inv

AXES = "uxyv"
DEFAULT_MARGINAL_PAIRS = ("ux", "vy", "uv")
_ZERO_FLOOR = 1e-300


@dataclass(frozen=True, eq=False)
class JointDist4:
    """A distribution over (U, X, Y, V) in {0,1}^4, axis order u, x, y, v."""

    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", p)
        if p.shape != (2, 2, 2, 2):
            raise DomainError(f"expected shape (2,2,2,2), got {p.shape}")
        if np.any(p < -1e-15):
            raise DomainError("negative joint probability")
        if abs(p.sum() - 1.0) > 1e-12:
            raise DomainError(f"joint probabilities sum to {p.sum()!r}")


@dataclass
class IpfScalingState:
    """Scaling factors of the fitted product form target * f1 * f2 * f3."""

    factors: dict[str, np.ndarray]
    iteration: int
    residual: float

    @property
    def f1(self) -> np.ndarray:
        return self.factors["ux"]

    @property
    def f2(self) -> np.ndarray:
        return self.factors["vy"]

    @property
    def f3(self) -> np.ndarray:
        return self.factors["uv"]


@dataclass
class ExponentPoint:
    """One sampled point of the exponent-rate curves."""

    alpha: float
    rate: float
    e_tr: float
    e_han: float
    e_com: float | None = None


def e_truncation(rate: float, p0: float, p1: float) -> float:
    """Stein exponent of keeping a rate-R prefix: R * d2(p0 || p1)."""
    if not 0.0 <= rate <= 1.0:
        raise DomainError(f"rate {rate!r} outside [0, 1]")
    return rate * d2(p0, p1)


def dsbs_joint(p: float) -> np.ndarray:
    """Joint law of (X, Y) with X uniform and crossover p, as a 2x2 array."""
    _check_prob(p)
    return np.array([[(1.0 - p) / 2.0, p / 2.0], [p / 2.0, (1.0 - p) / 2.0]])


def bsc(alpha: float) -> np.ndarray:
    _check_prob(alpha)
    return np.array([[1.0 - alpha, alpha], [alpha, 1.0 - alpha]])


def general_joint(pxy: np.ndarray, chan_ux: np.ndarray, chan_vy: np.ndarray) -> JointDist4:
    """Induced law P_XY * P_U|X * P_V|Y; channels are (input, output) indexed."""
    return JointDist4(np.einsum("xy,xu,yv->uxyv", pxy, chan_ux, chan_vy))


def induced_joint(p: float, alpha: float) -> JointDist4:
    """Source with crossover p quantized through matched BSC(alpha) channels."""
    return general_joint(dsbs_joint(p), bsc(alpha), bsc(alpha))


def pair_marginal(joint: JointDist4 | np.ndarray, pair: str) -> np.ndarray:
    """Marginal over an axis pair named by two letters of "uxyv"."""
    probs = getattr(joint, "probs", joint)
    if len(pair) != 2 or any(c not in AXES for c in pair):
        raise DomainError(f"bad marginal pair {pair!r}")
    return np.einsum(f"uxyv->{pair}", probs)


def _expand_pair(arr2: np.ndarray, pair: str) -> np.ndarray:
    a0, a1 = AXES.index(pair[0]), AXES.index(pair[1])
    if a0 > a1:
        arr2 = arr2.T
        a0, a1 = a1, a0
    shape = [1, 1, 1, 1]
    shape[a0] = 2
    shape[a1] = 2
    return arr2.reshape(shape)


def kl_bits(p: np.ndarray, q: np.ndarray) -> float:
    """D(p || q) in bits with 0 log(0/.) = 0; entries below 1e-300 count as 0."""
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    mask = p > _ZERO_FLOOR
    if np.any(q[mask] <= _ZERO_FLOOR):
        return math.inf
    return float(np.sum(p[mask] * np.log2(p[mask] / q[mask])))


def ipf_project(
    target: JointDist4,
    constraints,
    tol: float = 1e-10,
    max_iter: int = 100000,
) -> tuple[JointDist4, IpfScalingState, float]:
    """I-projection of ``target`` onto the given pair-marginal constraints.

    ``constraints`` is a sequence of (pair, marginal) items, e.g.
    ``[("ux", m1), ("vy", m2), ("uv", m3)]``; the marginals are 2x2 arrays
    indexed in the order of the pair letters.  Cycles proportional fitting
    over the constraints in the given order until the maximum L1 marginal
    mismatch drops below ``tol``.

    Returns the projected law, the accumulated scaling factors, and the
    divergence D(projection || target) in bits.

    Raises:
        SupportViolationError: a constraint puts mass where target has none.
        NoConvergenceError: tolerance not reached within ``max_iter`` cycles.
    """
    constraints = [(pair, np.asarray(m, dtype=float)) for pair, m in constraints]
    probs = np.array(target.probs, dtype=float)
    for pair, tgt in constraints:
        cur = pair_marginal(probs, pair)
        if np.any((tgt > _ZERO_FLOOR) & (cur <= _ZERO_FLOOR)):
            raise SupportViolationError(
                f"constraint {pair} has mass outside the target support"
            )
    factors = {pair: np.ones((2, 2)) for pair, _ in constraints}
    residual = math.inf
    for it in range(1, max_iter + 1):
        for pair, tgt in constraints:
            cur = pair_marginal(probs, pair)
            ratio = np.where(cur > _ZERO_FLOOR, tgt / np.where(cur > 0, cur, 1.0), 1.0)
            probs *= _expand_pair(ratio, pair)
            factors[pair] = factors[pair] * ratio
        residual = max(
            float(np.abs(pair_marginal(probs, pair) - tgt).sum())
            for pair, tgt in constraints
        )
        if residual <= tol:
            state = IpfScalingState(factors=factors, iteration=it, residual=residual)
            return JointDist4(probs), state, kl_bits(probs, target.probs)
    raise NoConvergenceError(
        f"IPF residual {residual:.3e} above tol after {max_iter} cycles",
        iterations=max_iter,
        residual=residual,
    )


def han_exponent_bsc(
    p0: float,
    p1: float,
    alpha: float,
    marginal_pairs=DEFAULT_MARGINAL_PAIRS,
    tol: float = 1e-10,
    max_iter: int = 100000,
) -> ExponentPoint:
    """Random-quantization exponent with matched BSC(alpha) test channels.

    Requires p1 strictly inside (0, 1) so the reference law has full support.
    """
    if not 0.0 < p1 < 1.0:
        raise DomainError("p1 must lie strictly inside (0, 1)")
    _check_prob(p0)
    if not 0.0 < alpha < 0.5:
        raise DomainError(f"alpha {alpha!r} outside (0, 1/2)")
    joint0 = induced_joint(p0, alpha)
    joint1 = induced_joint(p1, alpha)
    cons = [(pair, pair_marginal(joint0, pair)) for pair in marginal_pairs]
    _, _, div = ipf_project(joint1, cons, tol=tol, max_iter=max_iter)
    rate = 1.0 - h2(alpha)
    return ExponentPoint(
        alpha=alpha, rate=rate, e_tr=e_truncation(rate, p0, p1), e_han=div
    )


def han_closed_form_independence(p: float, alpha: float) -> tuple[float, float]:
    """Closed-form (rate, exponent) for testing for/against independence:
    exponent 1 - h2(alpha*alpha*p) at rate 1 - h2(alpha)."""
    _check_prob(p)
    if not 0.0 <= alpha <= 0.5:
        raise DomainError(f"alpha {alpha!r} outside [0, 1/2]")
    rate = 1.0 - h2(alpha)
    return rate, 1.0 - h2(conv(conv(alpha, alpha), p))


def fi_curve(p: float, alpha: float) -> tuple[float, float]:
    """(rate, exponent) for the one-sided rate constraint: the concave
    bottleneck curve (1 - h2(alpha), 1 - h2(alpha * p))."""
    _check_prob(p)
    if not 0.0 <= alpha <= 0.5:
        raise DomainError(f"alpha {alpha!r} outside [0, 1/2]")
    return 1.0 - h2(alpha), 1.0 - h2(conv(alpha, p))


def one_minus_h2_corr(t: float) -> float:
    """1 - h2((1-t)/2) as a function of the correlation t, accurate for
    small t where the direct formula cancels catastrophically."""
    at = abs(t)
    if at > 0.25:
        return 1.0 - h2((1.0 - at) / 2.0)
    t2 = t * t
    power = t2
    acc = power / 2.0
    k = 2
    while k <= 60:
        power *= t2
        delta = power / (2 * k * (2 * k - 1))
        acc += delta
        if delta <= 1e-20 * acc:
            break
        k += 1
    return acc / math.log(2.0)


def derivative_at_rate_one(p: float, deltas=(1e-2, 1e-3, 1e-4)) -> float:
    """Limit of the exponent/rate derivative ratio as alpha -> 1/2, i.e. the
    slope of the symmetric closed-form curve at full compression.

    Central differences at alpha = 1/2 - delta, Richardson-extrapolated over
    the given shrinking deltas (the ratio is a 0/0 form).  Both curves are
    evaluated through correlations, 1 - 2(a*b) = (1-2a)(1-2b), which keeps
    the differences far from the floating-point floor.
    """
    if not 0.0 < p < 1.0 or p == 0.5:
        raise DomainError("p must lie in (0, 1) and differ from 1/2")
    rho_p = 1.0 - 2.0 * p

    def num(alpha):
        return one_minus_h2_corr((1.0 - 2.0 * alpha) ** 2 * rho_p)

    def den(alpha):
        return one_minus_h2_corr(1.0 - 2.0 * alpha)

    def ratio_at(delta):
        a = 0.5 - delta
        s = delta * 1e-3
        return (num(a + s) - num(a - s)) / (den(a + s) - den(a - s))

    vals = [ratio_at(d) for d in deltas]
    # The sequence vanishes quadratically in delta; eliminate the leading
    # delta^2 term pairwise.
    ds = list(deltas)
    while len(vals) > 1:
        nxt = []
        for i in range(len(vals) - 1):
            r = (ds[i] / ds[i + 1]) ** 2
            nxt.append((r * vals[i + 1] - vals[i]) / (r - 1.0))
        vals = nxt
        ds = ds[1:]
    return float(vals[0])


def concave_envelope(points) -> list[tuple[float, float]]:
    """Upper concave envelope of (rate, exponent) samples.

    Returns the upper-hull vertices; the envelope is their linear
    interpolation.  Input should be sorted by rate and include (0, 0).
    """
    pts = sorted({(float(r), float(e)) for r, e in points})
    # keep only the highest exponent at duplicated rates
    dedup: list[tuple[float, float]] = []
    for r, e in pts:
        if dedup and dedup[-1][0] == r:
            dedup[-1] = (r, max(dedup[-1][1], e))
        else:
            dedup.append((r, e))
    hull: list[tuple[float, float]] = []
    for pt in dedup:
        while len(hull) >= 2:
            (ox, oy), (ax, ay) = hull[-2], hull[-1]
            if (ax - ox) * (pt[1] - oy) - (ay - oy) * (pt[0] - ox) >= 0.0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def envelope_at(hull, rates) -> np.ndarray:
    """Evaluate an upper hull (from concave_envelope) at the given rates."""
    hx = np.array([r for r, _ in hull])
    hy = np.array([e for _, e in hull])
    return np.interp(rates, hx, hy)


@dataclass
class CurveSweep:
    """A full alpha sweep of the exponent curves."""

    points: list[ExponentPoint]
    hull: list[tuple[float, float]]
    failures: list[tuple[float, str]]


def default_alphas(count: int = 400, floor: float = 1e-4) -> np.ndarray:
    """Log-spaced alphas covering both the full-rate and zero-rate ends."""
    return np.geomspace(floor, 0.5 - floor, count)


def sweep_bsc_curves(
    p0: float,
    p1: float,
    alphas=None,
    marginal_pairs=DEFAULT_MARGINAL_PAIRS,
    tol: float = 1e-10,
    max_iter: int = 100000,
) -> CurveSweep:
    """Sample the truncation and random-quantization curves over alpha and
    fill in the concave combination exponent from the upper envelope."""
    if alphas is None:
        alphas = default_alphas()
    points: list[ExponentPoint] = []
    failures: list[tuple[float, str]] = []
    for alpha in alphas:
        try:
            points.append(
                han_exponent_bsc(
                    p0, p1, float(alpha),
                    marginal_pairs=marginal_pairs, tol=tol, max_iter=max_iter,
                )
            )
        except NoConvergenceError as exc:
            failures.append((float(alpha), str(exc)))
    hull = concave_envelope(
        [(0.0, 0.0)] + [(pt.rate, pt.e_han) for pt in points]
    )
    if points:
        vals = envelope_at(hull, np.array([pt.rate for pt in points]))
        for pt, e_com in zip(points, vals):
            pt.e_com = float(e_com)
    return CurveSweep(points=points, hull=hull, failures=failures)


# ---------------------------------------------------------------------------
# search over general binary test channels


@dataclass
class SearchResult:
    best_exponent: float
    best_channels: tuple[np.ndarray, np.ndarray] | None
    bsc_alpha: float
    bsc_exponent: float
    beaten: bool
    trials: int
    seed: int


def mutual_information_bits(chan: np.ndarray) -> float:
    """I(input; output) of a binary channel with a uniform input."""
    out = chan.mean(axis=0)
    acc = 0.0
    for x in range(2):
        for u in range(2):
            if chan[x, u] > 0.0 and out[u] > 0.0:
                acc += 0.5 * chan[x, u] * math.log2(chan[x, u] / out[u])
    return acc


def _cap_rate(chan: np.ndarray, rate: float) -> np.ndarray:
    """Blend toward the uninformative channel until I(input;output) <= rate."""
    if mutual_information_bits(chan) <= rate:
        return chan
    flat = np.repeat(chan.mean(axis=0, keepdims=True), 2, axis=0)
    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if mutual_information_bits(flat + mid * (chan - flat)) <= rate:
            lo = mid
        else:
            hi = mid
    return flat + lo * (chan - flat)


def general_han_exponent(
    p0: float,
    p1: float,
    chan_ux: np.ndarray,
    chan_vy: np.ndarray,
    marginal_pairs=DEFAULT_MARGINAL_PAIRS,
    tol: float = 1e-10,
    max_iter: int = 100000,
) -> float:
    """Random-quantization exponent for arbitrary binary test channels."""
    joint0 = general_joint(dsbs_joint(p0), chan_ux, chan_vy)
    joint1 = general_joint(dsbs_joint(p1), chan_ux, chan_vy)
    cons = [(pair, pair_marginal(joint0, pair)) for pair in marginal_pairs]
    _, _, div = ipf_project(joint1, cons, tol=tol, max_iter=max_iter)
    return div


def random_test_channels_search(
    p0: float,
    p1: float,
    rate: float,
    trials: int,
    seed: int = 0,
    concentration: float = 1.0,
    tol: float = 1e-8,
    max_iter: int = 100000,
) -> SearchResult:
    """Random search over general binary test-channel pairs at a rate budget.

    Channel rows are Dirichlet(concentration) draws, blended down to the rate
    budget when too informative; each trial derives its own substream from
    the seed so results do not depend on evaluation order.  Reports whether
    any sampled pair beats the matched-BSC choice at the same rate.
    """
    if trials < 1:
        raise DomainError("need at least one trial")
    if not 0.0 < rate < 1.0:
        raise DomainError(f"rate {rate!r} outside (0, 1)")
    bsc_alpha = h2_inv(1.0 - rate)
    bsc_val = han_exponent_bsc(p0, p1, bsc_alpha, tol=tol, max_iter=max_iter).e_han

    best = -math.inf
    best_pair = None
    streams = np.random.SeedSequence(seed).spawn(trials)
    for ss in streams:
        rng = np.random.default_rng(ss)
        chans = []
        for _ in range(2):
            rows = rng.dirichlet([concentration, concentration], size=2)
            chans.append(_cap_rate(rows, rate))
        val = general_han_exponent(
            p0, p1, chans[0], chans[1], tol=tol, max_iter=max_iter
        )
        if val > best:
            best = val
            best_pair = (chans[0], chans[1])
    return SearchResult(
        best_exponent=best,
        best_channels=best_pair,
        bsc_alpha=bsc_alpha,
        bsc_exponent=bsc_val,
        beaten=best > bsc_val + 1e-6,
        trials=trials,
        seed=seed,
    )
