"""Grid scans of the (p0, p1) plane: where does truncation Blackwell-dominate
every rank-k linear encoder?

Each grid point asks, for every enumerated systematic code [I_k A], whether
the k-bit truncation dichotomy dominates the code's syndrome dichotomy.  The
scan is embarrassingly parallel across grid points and merged by grid index,
so output never depends on scheduling.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import blackwell, probmodel
from .errors import DomainError
from .gf2 import DEFAULT_MAX_CODES, CanonicalCode, enumerate_codes

CODE_BUDGET_ENV = "LINDHT_MAX_CODES"


def code_budget(default: int = DEFAULT_MAX_CODES) -> int:
    """Enumeration cap, overridable through the environment."""
    raw = os.environ.get(CODE_BUDGET_ENV)
    return int(raw) if raw else default


@dataclass(frozen=True)
class ScanConfig:
    k: int
    n: int
    grid_step: float = 0.01
    eps: float = 1e-9
    oracle: str = "roc"  # roc | lp | both
    dedupe: bool = False
    include_endpoints: bool = False
    max_codes: int | None = None

    def __post_init__(self):
        # Steps above 0.1 give smoke-level grids only, but stay accepted
        # (a 0.25 step makes a useful 9-point sanity run).
        if not 0.0 < self.grid_step <= 0.5:
            raise DomainError(f"grid step {self.grid_step} outside (0, 0.5]")
        if abs(round(1.0 / self.grid_step) * self.grid_step - 1.0) > 1e-9:
            raise DomainError(f"grid step {self.grid_step} must divide 1")
        if not 1 <= self.k < self.n:
            raise DomainError(f"need 1 <= k < n, got ({self.k}, {self.n})")
        if self.oracle not in ("roc", "lp", "both"):
            raise DomainError(f"unknown oracle {self.oracle!r}")

    def grid_values(self) -> np.ndarray:
        count = round(1.0 / self.grid_step)
        idx = np.arange(0, count + 1) if self.include_endpoints else np.arange(1, count)
        return idx / float(count)


@dataclass
class PointResult:
    dominates_all: bool
    failing_code: CanonicalCode | None = None
    oracle_agreement: bool | None = None


@dataclass
class ScanResult:
    config: ScanConfig
    p_values: np.ndarray
    grid: dict[tuple[int, int], PointResult]
    metadata: dict = field(default_factory=dict)

    def flag(self, i0: int, i1: int) -> bool:
        return self.grid[(i0, i1)].dominates_all


def _scan_cell(args):
    p0, p1, codes_payload, eps, oracle, k = args
    trunc = blackwell.truncation_dichotomy(k, p0, p1)
    agreement = True
    for enum, ncols, code in codes_payload:
        b0 = probmodel.syndrome_dist_from_enumerator(enum, ncols, p0)
        b1 = probmodel.syndrome_dist_from_enumerator(enum, ncols, p1)
        synd = blackwell.Dichotomy.from_dists(b0, b1)
        ok, info = blackwell.dominates(trunc, synd, oracle=oracle, eps=eps)
        if info.get("oracle_agreement") is False:
            agreement = False
        if not ok:
            return PointResult(False, code, agreement if oracle == "both" else None)
    return PointResult(True, None, agreement if oracle == "both" else None)


def _scan_row(args):
    i0, p0, p_values, codes_payload, eps, oracle, k = args
    out = []
    for i1, p1 in enumerate(p_values):
        out.append(
            ((i0, i1), _scan_cell((p0, p1, codes_payload, eps, oracle, k)))
        )
    return out


def scan_grid(cfg: ScanConfig, workers: int = 1) -> ScanResult:
    """Evaluate dominates_all on the whole grid.

    Per-point work exits early at the first failing code; the per-code
    syndrome weight enumerators are computed once up front.
    """
    start = time.perf_counter()
    budget = cfg.max_codes if cfg.max_codes is not None else code_budget()
    codes = enumerate_codes(cfg.k, cfg.n, dedupe=cfg.dedupe, max_codes=budget)
    payload = []
    for code in codes:
        g = code.generator()
        payload.append((probmodel.syndrome_weight_enumerator(g), g.cols, code))
    p_values = cfg.grid_values()

    grid: dict[tuple[int, int], PointResult] = {}
    row_args = [
        (i0, p0, p_values, payload, cfg.eps, cfg.oracle, cfg.k)
        for i0, p0 in enumerate(p_values)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for row in pool.map(_scan_row, row_args, chunksize=4):
                grid.update(row)
    else:
        for args in row_args:
            grid.update(_scan_row(args))

    meta = {
        "code_count": len(codes),
        "runtime_s": time.perf_counter() - start,
        "grid_points": len(grid),
        "workers": workers,
    }
    if cfg.oracle == "both":
        meta["oracle_disagreements"] = sum(
            1 for r in grid.values() if r.oracle_agreement is False
        )
    return ScanResult(config=cfg, p_values=p_values, grid=grid, metadata=meta)


def boundary_extract(result: ScanResult) -> list[tuple[float, float]]:
    """Grid points whose dominates_all flag differs from a 4-neighbor's."""
    vals = result.p_values
    m = len(vals)
    cells = []
    for (i0, i1), res in sorted(result.grid.items()):
        for j0, j1 in ((i0 - 1, i1), (i0 + 1, i1), (i0, i1 - 1), (i0, i1 + 1)):
            if 0 <= j0 < m and 0 <= j1 < m:
                if result.grid[(j0, j1)].dominates_all != res.dominates_all:
                    cells.append((float(vals[i0]), float(vals[i1])))
                    break
    return cells


def iter_csv_rows(result: ScanResult):
    """Rows (p0, p1, dominates_all, failing_code_A_bits) in grid order."""
    vals = result.p_values
    for (i0, i1), res in sorted(result.grid.items()):
        failing = res.failing_code.a_bits() if res.failing_code else ""
        yield (
            repr(float(vals[i0])),
            repr(float(vals[i1])),
            "1" if res.dominates_all else "0",
            failing,
        )
