import numpy as np

from lindht import blackwell as bw


def random_dichotomy(rng, max_outcomes=16, with_zeros=True):
    m = int(rng.integers(2, max_outcomes + 1))
    d0 = rng.dirichlet(np.ones(m))
    d1 = rng.dirichlet(np.ones(m))
    if with_zeros and rng.random() < 0.2:
        # zero some entries in one law (keeping every outcome alive overall)
        kill = rng.random(m) < 0.3
        d = d0 if rng.random() < 0.5 else d1
        d[kill] = 0.0
        total = d.sum()
        if total > 0:
            d /= total
        else:
            d[0] = 1.0
    return bw.Dichotomy.from_dists(d0, d1)


def random_dichotomy_pair(rng, max_outcomes=16):
    """A (u, v) pair; v is a garbling of u half the time, independent otherwise."""
    u = random_dichotomy(rng, max_outcomes)
    if rng.random() < 0.5:
        mv = int(rng.integers(2, max_outcomes + 1))
        chan = rng.dirichlet(np.ones(mv), size=u.size)
        v = bw.Dichotomy.from_dists(u.dist0 @ chan, u.dist1 @ chan)
    else:
        v = random_dichotomy(rng, max_outcomes)
    return u, v
