"""Binary linear codes: construction, duals, matroid rank, minimum distance."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .errors import DimensionTooLargeError, FormatError, ParameterRangeError

RM_MAX_M = 20
ENUMERATION_CUTOFF = 28


@dataclass(frozen=True)
class BinaryCode:
    """An [n, k] binary linear code given by a generator matrix.

    ``rows`` are int-encoded generator rows (bit j = coordinate j).
    ``family`` records known construction parameters, e.g. ``("RM", r, m)``;
    it is metadata only and is never used to shortcut a computation unless a
    caller asks for a trusted formula explicitly.

    k = 0 is allowed only as the degenerate dual of the full space.
    """

    n: int
    rows: tuple[int, ...]
    name: str | None = None
    family: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ParameterRangeError(f"block length must be positive, got {self.n}")
        k = len(self.rows)
        if k > self.n:
            raise ParameterRangeError(f"dimension {k} exceeds length {self.n}")
        limit = 1 << self.n
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ParameterRangeError("generator row has bits outside the block")
        if gf2.rank(self.rows) != k:
            raise ParameterRangeError("generator rows are linearly dependent")

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def degenerate(self) -> bool:
        return self.k == 0

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def packed(self) -> np.ndarray:
        """Generator as a (k, words) uint64 array, 64 coordinates per word."""
        return gf2.pack(self.rows, self.n)

    @cached_property
    def columns(self) -> tuple[int, ...]:
        return tuple(gf2.columns(self.rows, self.n))

    def matrix(self) -> np.ndarray:
        return gf2.to_matrix(self.rows, self.n)

    def has_all_ones(self) -> bool:
        return gf2.rank(self.rows + (self.full_mask,)) == self.k

    def contains(self, word: int) -> bool:
        return gf2.rank(self.rows + (word,)) == self.k

    def codewords(self) -> list[int]:
        if self.k > ENUMERATION_CUTOFF:
            raise DimensionTooLargeError(f"k={self.k} above enumeration cutoff")
        return gf2.span(self.rows)

    def __str__(self):
        label = f" {self.name}" if self.name else ""
        return f"[{self.n},{self.k}]{label}"


def from_matrix(matrix, name: str | None = None) -> BinaryCode:
    m = np.asarray(matrix, dtype=np.uint8) & 1
    if m.ndim != 2:
        raise ParameterRangeError("generator must be two-dimensional")
    rows = tuple(gf2.from_bits(r) for r in m)
    return BinaryCode(n=m.shape[1], rows=rows, name=name)


def rm_monomials(r: int, m: int) -> list[tuple[int, ...]]:
    """Monomials of degree <= r in m variables, degree first, then lexicographic."""
    return [mono for d in range(r + 1) for mono in combinations(range(m), d)]


def rm_code(r: int, m: int, max_m: int = RM_MAX_M) -> BinaryCode:
    """Reed-Muller code RM(r, m).

    Coordinate x in [0, 2^m) is the point whose variable j equals bit j of x;
    row t is the evaluation vector of the t-th monomial of ``rm_monomials``.
    """
    if m < 1 or m > max_m:
        raise ParameterRangeError(f"m={m} outside [1, {max_m}]")
    if r < 0 or r > m:
        raise ParameterRangeError(f"r={r} outside [0, m={m}]")
    n = 1 << m
    points = np.arange(n)
    var = [((points >> j) & 1).astype(bool) for j in range(m)]
    rows = []
    for mono in rm_monomials(r, m):
        ev = np.ones(n, dtype=bool)
        for j in mono:
            ev &= var[j]
        rows.append(int.from_bytes(np.packbits(ev, bitorder="little").tobytes(), "little"))
    return BinaryCode(n=n, rows=tuple(rows), name=f"RM({r},{m})", family=("RM", r, m))


def repetition_code(n: int) -> BinaryCode:
    return BinaryCode(n=n, rows=((1 << n) - 1,), name=f"Rep({n})", family=("REP", n))


def random_code(n: int, k: int, seed: int) -> BinaryCode:
    """Uniformly random full-rank [n, k] generator (rejection sampling)."""
    if not 1 <= k <= n:
        raise ParameterRangeError(f"need 1 <= k <= n, got n={n}, k={k}")
    rng = np.random.default_rng(seed)
    while True:
        m = rng.integers(0, 2, size=(k, n), dtype=np.uint8)
        rows = tuple(gf2.from_bits(r) for r in m)
        if gf2.rank(rows) == k:
            return BinaryCode(n=n, rows=rows, name=f"random[{n},{k}]#{seed}")


def dual(code: BinaryCode) -> BinaryCode:
    """Dual code via standard-form reduction.

    With the generator in reduced echelon form (pivots P), each non-pivot
    coordinate q yields the dual vector e_q + sum_t G[t, q] e_{P[t]}.
    Coordinates keep their original labels.
    """
    red, pivots = gf2.rref(code.rows, code.n)
    pivot_set = set(pivots)
    out = []
    for q in range(code.n):
        if q in pivot_set:
            continue
        h = 1 << q
        for row, p in zip(red, pivots):
            if (row >> q) & 1:
                h |= 1 << p
        out.append(h)
    family = None
    if code.family and code.family[0] == "RM":
        _, r, m = code.family
        if m - r - 1 >= 0:
            family = ("RM", m - r - 1, m)
    name = f"{code.name}^perp" if code.name else None
    return BinaryCode(n=code.n, rows=tuple(out), name=name, family=family)


def mask_of(coords: Iterable[int], n: int) -> int:
    """Subset mask from 0-based coordinate indices."""
    m = 0
    for j in coords:
        if not 0 <= j < n:
            raise ParameterRangeError(f"coordinate {j} outside [0, {n})")
        m |= 1 << j
    return m


def _check_mask(code: BinaryCode, mask: int):
    if mask < 0 or mask >> code.n:
        raise ParameterRangeError("subset mask has bits outside the block")


def rank_of_subset(code: BinaryCode, mask: int) -> int:
    """Rank of the generator columns indexed by ``mask``."""
    _check_mask(code, mask)
    return gf2.rank(r & mask for r in code.rows)


def corank(code: BinaryCode, mask: int) -> int:
    """f(S) = |S| - r(S)."""
    return gf2.weight(mask) - rank_of_subset(code, mask)


def min_distance(code: BinaryCode, cutoff: int = ENUMERATION_CUTOFF) -> int:
    """Minimum nonzero codeword weight by exhaustive enumeration."""
    if code.k == 0:
        raise ParameterRangeError("zero-dimensional code has no nonzero codewords")
    if code.k > cutoff:
        raise DimensionTooLargeError(
            f"k={code.k} above enumeration cutoff {cutoff}; "
            "use rm_min_distance for Reed-Muller codes"
        )
    from .spectrum import weight_distribution_exact

    counts = weight_distribution_exact(code, cutoff=cutoff).counts
    return next(i for i in range(1, code.n + 1) if counts[i])


def rm_min_distance(r: int, m: int) -> int:
    """Trusted closed form d(RM(r, m)) = 2^(m - r); not a computed value."""
    if not 0 <= r <= m:
        raise ParameterRangeError(f"r={r} outside [0, m={m}]")
    return 1 << (m - r)


def rm_dimension(r: int, m: int) -> int:
    return sum(comb(m, j) for j in range(r + 1))


def load_gm(path: str | Path) -> BinaryCode:
    """Read a ``.gm`` file: header "n k", then k rows of n characters in {0,1}."""
    path = Path(path)
    lines = [ln.strip() for ln in path.read_text().splitlines() if ln.strip()]
    if not lines:
        raise FormatError(f"{path}: empty file")
    try:
        n, k = (int(t) for t in lines[0].split())
    except ValueError:
        raise FormatError(f"{path}: header must be 'n k'") from None
    body = lines[1:]
    if len(body) != k:
        raise FormatError(f"{path}: expected {k} rows, found {len(body)}")
    rows = []
    for t, ln in enumerate(body):
        if len(ln) != n or set(ln) - {"0", "1"}:
            raise FormatError(f"{path}: row {t + 1} is not {n} characters of 0/1")
        rows.append(gf2.from_bits(int(c) for c in ln))
    if gf2.rank(rows) != k:
        raise FormatError(f"{path}: generator rows are linearly dependent")
    try:
        return BinaryCode(n=n, rows=tuple(rows), name=path.stem)
    except ParameterRangeError as exc:
        raise FormatError(f"{path}: {exc}") from None


def dump_gm(code: BinaryCode, path: str | Path | None = None) -> str:
    lines = [f"{code.n} {code.k}"]
    for r in code.rows:
        lines.append("".join(str((r >> j) & 1) for j in range(code.n)))
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def same_codewords(a: BinaryCode, b: BinaryCode) -> bool:
    """Equality of row spaces (no enumeration needed)."""
    return a.n == b.n and a.k == b.k and all(a.contains(r) for r in b.rows)


def code_from_spec(spec: Sequence) -> BinaryCode:
    """Build a code from ("rm", r, m) or ("file", path)."""
    kind = spec[0]
    if kind == "rm":
        return rm_code(int(spec[1]), int(spec[2]))
    if kind == "file":
        return load_gm(spec[1])
    raise ParameterRangeError(f"unknown code spec {spec!r}")
