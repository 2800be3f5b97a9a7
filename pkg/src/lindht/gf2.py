"""Exact linear algebra over GF(2) with rows stored as machine-word bitmasks.

Conventions used throughout the package:

* a matrix row is an ``n``-bit integer whose bit ``j`` (``1 << j``) is the
  entry in column ``j``;
* a length-``n`` binary vector is likewise an ``n``-bit integer;
* the syndrome of ``z`` under ``G`` is the k-bit integer whose bit ``i`` is
  the parity of ``row_i & z``.

Widths are capped at 24 columns so exhaustive ``2^n`` sweeps stay near 16M
states.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, DomainError, ZeroMatrixError

MAX_WIDTH = 24
DEFAULT_MAX_WORDS = 1 << MAX_WIDTH
DEFAULT_MAX_CODES = 1 << 16


if hasattr(np, "bitwise_count"):

    def popcount(words: np.ndarray) -> np.ndarray:
        """Per-element population count."""
        return np.bitwise_count(words)

else:  # numpy < 2.0

    def popcount(words: np.ndarray) -> np.ndarray:
        """Per-element population count (SWAR fold, 32-bit inputs)."""
        w = words.astype(np.uint32)
        w = w - ((w >> 1) & 0x55555555)
        w = (w & 0x33333333) + ((w >> 2) & 0x33333333)
        w = (w + (w >> 4)) & 0x0F0F0F0F
        return ((w * 0x01010101) >> 24).astype(np.uint32)


def parity(words: np.ndarray) -> np.ndarray:
    return (popcount(words) & 1).astype(np.uint32)


@dataclass(frozen=True)
class Gf2Matrix:
    """A binary matrix; ``row_words[i]`` holds row ``i`` as an n-bit mask."""

    row_words: tuple[int, ...]
    cols: int

    def __post_init__(self):
        if not 0 <= self.cols <= MAX_WIDTH:
            raise DomainError(f"column count {self.cols} outside [0, {MAX_WIDTH}]")
        mask = (1 << self.cols) - 1
        for w in self.row_words:
            if not 0 <= w <= mask:
                raise DomainError(f"row word {w} does not fit in {self.cols} columns")

    @property
    def k(self) -> int:
        return len(self.row_words)

    @property
    def n(self) -> int:
        return self.cols

    @classmethod
    def from_rows(cls, rows) -> "Gf2Matrix":
        """Build from a list of 0/1 lists; ``rows[i][j]`` is column ``j`` of row ``i``."""
        rows = list(rows)
        if not rows:
            raise DomainError("matrix needs at least one row")
        ncols = len(rows[0])
        words = []
        for r in rows:
            if len(r) != ncols:
                raise DomainError("ragged rows")
            if any(int(b) not in (0, 1) for b in r):
                raise DomainError("entries must be 0 or 1")
            words.append(sum(int(b) << j for j, b in enumerate(r)))
        return cls(tuple(words), ncols)

    @classmethod
    def from_string(cls, text: str) -> "Gf2Matrix":
        """Parse ``"101;011"``; leftmost character is column 0."""
        rows = [[int(c) for c in part] for part in text.strip().split(";") if part]
        return cls.from_rows(rows)

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.k, self.cols), dtype=np.uint8)
        for i, w in enumerate(self.row_words):
            for j in range(self.cols):
                out[i, j] = (w >> j) & 1
        return out

    def row_bits(self, i: int) -> str:
        return "".join(str((self.row_words[i] >> j) & 1) for j in range(self.cols))

    def __str__(self) -> str:
        return ";".join(self.row_bits(i) for i in range(self.k))


def identity(k: int) -> Gf2Matrix:
    return Gf2Matrix(tuple(1 << i for i in range(k)), k)


def truncation_matrix(k: int, n: int) -> Gf2Matrix:
    """The encoder [I_k 0] keeping the first k of n coordinates."""
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got ({k}, {n})")
    return Gf2Matrix(tuple(1 << i for i in range(k)), n)


def _rref(m: Gf2Matrix) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    rows = list(m.row_words)
    pivots = []
    r = 0
    for col in range(m.cols):
        bit = 1 << col
        piv = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(col)
        r += 1
    return rows[:r], pivots


def rank(m: Gf2Matrix) -> int:
    """GF(2) row rank."""
    return len(_rref(m)[0])


@dataclass(frozen=True)
class CanonicalCode:
    """A full-rank encoder in systematic form [I_k A] plus the column
    permutation that produced it.

    ``col_perm[i]`` is the original column sitting at position ``i`` of the
    systematic matrix; positions 0..k-1 are the pivot columns.
    """

    k: int
    n: int
    a_part: Gf2Matrix
    col_perm: tuple[int, ...]

    def generator(self) -> Gf2Matrix:
        """[I_k | A] in the permuted column order."""
        words = tuple(
            (1 << i) | (self.a_part.row_words[i] << self.k) for i in range(self.k)
        )
        return Gf2Matrix(words, self.n)

    def generator_original_order(self) -> Gf2Matrix:
        """Undo the recorded column permutation."""
        g = self.generator()
        words = []
        for w in g.row_words:
            orig = 0
            for pos, col in enumerate(self.col_perm):
                orig |= ((w >> pos) & 1) << col
            words.append(orig)
        return Gf2Matrix(tuple(words), self.n)

    def a_bits(self) -> str:
        return str(self.a_part)


def canonicalize(m: Gf2Matrix) -> CanonicalCode:
    """Reduce to systematic form [I_k A], recording the column permutation.

    Column permutation is allowed (and recorded) because the coordinates the
    encoders act on are i.i.d., so permuting columns changes no induced
    statistic distribution.

    Raises:
        ZeroMatrixError: if the matrix has rank 0.
    """
    reduced, pivots = _rref(m)
    if not reduced:
        raise ZeroMatrixError("cannot canonicalize the zero matrix")
    k = len(reduced)
    nonpivots = [c for c in range(m.cols) if c not in set(pivots)]
    a_words = tuple(
        sum(((row >> c) & 1) << j for j, c in enumerate(nonpivots)) for row in reduced
    )
    return CanonicalCode(
        k=k,
        n=m.cols,
        a_part=Gf2Matrix(a_words, m.cols - k),
        col_perm=tuple(pivots + nonpivots),
    )


@dataclass(frozen=True)
class RowSplit:
    """Rows of a matrix classified by Hamming-weight parity, original order kept."""

    even: Gf2Matrix
    odd: Gf2Matrix
    k_even: int
    k_odd: int
    even_indices: tuple[int, ...]
    odd_indices: tuple[int, ...]


def split_even_odd(a: Gf2Matrix) -> RowSplit:
    even_idx = tuple(i for i, w in enumerate(a.row_words) if bin(w).count("1") % 2 == 0)
    odd_idx = tuple(i for i in range(a.k) if i not in even_idx)
    even = Gf2Matrix(tuple(a.row_words[i] for i in even_idx), a.cols)
    odd = Gf2Matrix(tuple(a.row_words[i] for i in odd_idx), a.cols)
    return RowSplit(even, odd, len(even_idx), len(odd_idx), even_idx, odd_idx)


def _class_key(rows: tuple[int, ...], width: int) -> tuple[int, ...]:
    # Minimum over column permutations of the sorted row tuple; sorting rows
    # realizes the minimum over row permutations for a fixed column order.
    best = None
    for perm in itertools.permutations(range(width)):
        permuted = tuple(
            sorted(
                sum(((w >> c) & 1) << j for j, c in enumerate(perm)) for w in rows
            )
        )
        if best is None or permuted < best:
            best = permuted
    return best if best is not None else tuple(sorted(rows))


def enumerate_codes(
    k: int,
    n: int,
    dedupe: bool = False,
    max_codes: int = DEFAULT_MAX_CODES,
) -> list[CanonicalCode]:
    """All systematic encoders [I_k A] with A in {0,1}^(k x (n-k)).

    With ``dedupe`` set, keeps one representative per equivalence class under
    row permutations x column permutations of A (both leave the Blackwell
    comparison against truncation invariant); the representative is the
    lexicographically smallest row tuple in its class.

    Raises:
        BudgetExceededError: if 2^(k(n-k)) exceeds ``max_codes``.
    """
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got ({k}, {n})")
    width = n - k
    nbits = k * width
    if 1 << nbits > max_codes:
        raise BudgetExceededError(
            f"2^{nbits} codes exceed the enumeration budget ({max_codes})"
        )
    mask = (1 << width) - 1
    perm = tuple(range(n))
    out = []
    for bits in range(1 << nbits):
        rows = tuple((bits >> (i * width)) & mask for i in range(k))
        if dedupe and rows != _class_key(rows, width):
            continue
        out.append(CanonicalCode(k, n, Gf2Matrix(rows, width), perm))
    return out


def syndrome_map(g: Gf2Matrix, max_words: int = DEFAULT_MAX_WORDS) -> np.ndarray:
    """The value G z for every z in {0,1}^n, as a uint32 array of length 2^n.

    Raises:
        BudgetExceededError: if 2^n exceeds ``max_words``.
    """
    nwords = 1 << g.cols
    if nwords > max_words:
        raise BudgetExceededError(f"2^{g.cols} words exceed the sweep budget ({max_words})")
    words = np.arange(nwords, dtype=np.uint32)
    syn = np.zeros(nwords, dtype=np.uint32)
    for i, row in enumerate(g.row_words):
        syn |= parity(words & np.uint32(row)) << np.uint32(i)
    return syn
