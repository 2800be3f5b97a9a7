"""Dense phase-I simplex for small linear feasibility problems.

Kept in-repo (no external solver) so the degradation checks are fully
reproducible.  Problem sizes here are tiny: tens of rows, a few hundred
columns.
"""

from __future__ import annotations

import numpy as np

from .errors import SolverFailureError

_PIVOT_TOL = 1e-11
_STALL_LIMIT = 64


def l1_feasibility_gap(
    a_eq: np.ndarray, b_eq: np.ndarray, max_iter: int = 50000
) -> tuple[float, np.ndarray]:
    """Minimum total violation of ``a_eq @ x = b_eq`` over ``x >= 0``.

    Solves  min sum(s+ + s-)  s.t.  a_eq @ x + s+ - s- = b_eq,  x, s >= 0
    with a dense tableau simplex: Dantzig's rule, switching to Bland's rule
    after a stall so termination is guaranteed.  The optimum is 0 (up to
    tolerance) iff the system is feasible; ``x`` is the attaining point.

    Raises:
        SolverFailureError: iteration cap reached before optimality.
    """
    a = np.array(a_eq, dtype=float)
    b = np.array(b_eq, dtype=float)
    m, nv = a.shape
    neg = b < 0
    if neg.any():
        a[neg] *= -1.0
        b = np.where(neg, -b, b)

    ncols = nv + 2 * m
    tab = np.zeros((m + 1, ncols + 1))
    tab[:m, :nv] = a
    tab[:m, nv : nv + m] = np.eye(m)
    tab[:m, nv + m : ncols] = -np.eye(m)
    tab[:m, -1] = b
    # Reduced-cost row c - z for c = [0..0, 1..1, 1..1]; basis starts at s+.
    tab[m, nv:ncols] = 1.0
    tab[m] -= tab[:m].sum(axis=0)

    basis = list(range(nv, nv + m))
    bland = False
    stall = 0
    for _ in range(max_iter):
        red = tab[m, :ncols]
        if bland:
            elig = np.flatnonzero(red < -_PIVOT_TOL)
            if elig.size == 0:
                break
            j = int(elig[0])
        else:
            j = int(np.argmin(red))
            if red[j] >= -_PIVOT_TOL:
                break
        col = tab[:m, j]
        pos = col > _PIVOT_TOL
        if not pos.any():
            raise SolverFailureError("phase-I pivot column has no positive entry")
        ratios = np.full(m, np.inf)
        ratios[pos] = tab[:m, -1][pos] / col[pos]
        r = int(np.argmin(ratios))
        if bland:
            ties = np.flatnonzero(ratios <= ratios[r] + _PIVOT_TOL)
            r = int(min(ties, key=lambda i: basis[i]))

        before = tab[m, -1]
        tab[r] /= tab[r, j]
        other = tab[:, j].copy()
        other[r] = 0.0
        tab -= np.outer(other, tab[r])
        basis[r] = j
        if tab[m, -1] <= before + 1e-13:
            stall += 1
            if stall >= _STALL_LIMIT:
                bland = True
        else:
            stall = 0
    else:
        raise SolverFailureError(f"phase-I simplex hit the iteration cap ({max_iter})")

    x = np.zeros(ncols)
    for i, bj in enumerate(basis):
        x[bj] = max(tab[i, -1], 0.0)
    gap = max(-tab[m, -1], 0.0)
    return gap, x[:nv]
