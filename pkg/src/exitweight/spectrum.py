"""Weight distributions, the MacWilliams transform and weight-distribution bounds.

Bounds are returned as exponents in bits. The unquantified 2^{o(n)} and O(1)
factors are not part of any exponent; the comparison harness reports the
per-weight slack (log2 a_i - exponent) / n instead of asserting inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, isfinite, lgamma, log, log2

import numpy as np

from .codes import ENUMERATION_CUTOFF, BinaryCode, dual
from .errors import (
    DimensionTooLargeError,
    InconsistentDistributionError,
    ParameterRangeError,
)
from .parallel import ordered_map

TWO_LN2 = 2.0 * log(2.0)
LOW_BITS = 16


@dataclass(frozen=True)
class WeightDistribution:
    counts: tuple[int, ...]
    n: int
    k: int

    def __post_init__(self):
        if len(self.counts) != self.n + 1:
            raise InconsistentDistributionError("counts must have n + 1 entries")
        if any(c < 0 for c in self.counts):
            raise InconsistentDistributionError("negative weight count")
        if self.counts[0] != 1:
            raise InconsistentDistributionError("a_0 must equal 1")
        if sum(self.counts) != 1 << self.k:
            raise InconsistentDistributionError("counts do not sum to 2^k")

    def __getitem__(self, i: int) -> int:
        return self.counts[i]

    @property
    def min_distance(self) -> int | None:
        return next((i for i in range(1, self.n + 1) if self.counts[i]), None)

    def is_symmetric(self) -> bool:
        return all(self.counts[i] == self.counts[self.n - i] for i in range(self.n + 1))


def _offsets(rows: np.ndarray) -> np.ndarray:
    """All XOR combinations of ``rows`` in message order."""
    out = np.zeros((1, rows.shape[1]), dtype=np.uint64)
    for r in rows:
        out = np.concatenate([out, out ^ r])
    return out


def codeword_blocks(code: BinaryCode, low_bits: int = LOW_BITS):
    """(low table, high offsets): codeword for message (h, l) is high[h] ^ low[l]."""
    g = code.packed
    lo = min(code.k, low_bits)
    return _offsets(g[:lo]), _offsets(g[lo:])


def _block_histogram(low: np.ndarray, off: np.ndarray, n: int) -> np.ndarray:
    w = np.bitwise_count(low ^ off).sum(axis=1, dtype=np.int64)
    return np.bincount(w, minlength=n + 1)


def weight_distribution_exact(
    code: BinaryCode, cutoff: int = ENUMERATION_CUTOFF, threads: int = 1
) -> WeightDistribution:
    """Count codewords by weight by enumerating all 2^k messages."""
    if code.k > cutoff:
        raise DimensionTooLargeError(f"k={code.k} above enumeration cutoff {cutoff}")
    low, high = codeword_blocks(code)
    hists = ordered_map(lambda off: _block_histogram(low, off, code.n), list(high), threads)
    total = np.sum(hists, axis=0)
    return WeightDistribution(tuple(int(c) for c in total), code.n, code.k)


def weight_distribution(code: BinaryCode, cutoff: int = ENUMERATION_CUTOFF, threads: int = 1):
    """Enumerate whichever of C, C-perp is smaller, then transform if needed."""
    if code.k <= code.n - code.k:
        return weight_distribution_exact(code, cutoff, threads)
    d = dual(code)
    if d.k > cutoff:
        raise DimensionTooLargeError(
            f"both C (k={code.k}) and its dual (k={d.k}) exceed cutoff {cutoff}"
        )
    return macwilliams(weight_distribution_exact(d, cutoff, threads))


@lru_cache(maxsize=64)
def krawtchouk_matrix(n: int) -> tuple[tuple[int, ...], ...]:
    """K[j][i] = sum_s (-1)^s C(i, s) C(n - i, j - s), exact integers."""
    return tuple(
        tuple(
            sum((-1) ** s * comb(i, s) * comb(n - i, j - s) for s in range(min(i, j) + 1))
            for i in range(n + 1)
        )
        for j in range(n + 1)
    )


def macwilliams(wd: WeightDistribution) -> WeightDistribution:
    """Weight distribution of the dual code: B_j = 2^-k sum_i A_i K_j(i)."""
    K = krawtchouk_matrix(wd.n)
    size = 1 << wd.k
    out = []
    for j in range(wd.n + 1):
        s = sum(a * kj for a, kj in zip(wd.counts, K[j]))
        q, r = divmod(s, size)
        if r or q < 0:
            raise InconsistentDistributionError(
                f"dual count at weight {j} is {s}/{size}, not a nonnegative integer"
            )
        out.append(q)
    return WeightDistribution(tuple(out), wd.n, wd.n - wd.k)


def _check_rate(R: float):
    if not 0.0 < R < 1.0:
        raise ParameterRangeError(f"rate must lie in (0, 1), got {R}")


def _check_index(i: int, n: int):
    if not 0 <= i <= n:
        raise ParameterRangeError(f"index {i} outside [0, {n}]")


def istar(i: int, n: int) -> int:
    return min(i, n - i)


def theta(R: float) -> float:
    _check_rate(R)
    return R**TWO_LN2


def log2_binom(n: int, i: int) -> float:
    return (lgamma(n + 1) - lgamma(i + 1) - lgamma(n - i + 1)) / log(2.0)


def bound_first(i: int, n: int, R: float) -> float:
    """Exponent of (1/(1-R))^{2 ln2 * i*} in bits."""
    _check_rate(R)
    _check_index(i, n)
    return TWO_LN2 * istar(i, n) * -log2(1.0 - R)


@dataclass(frozen=True)
class SecondBound:
    exponent: float
    branch: int  # 1: |C| / ((1-theta)^i* (1+theta)^(n-i*)); 2: binomial band
    threshold: float  # (1 - theta) n / 2

    def __float__(self):
        return self.exponent


def bound_second(i: int, n: int, R: float, logC: float) -> SecondBound:
    """Exponent of the two-branch bound; branch 2 is the random-code band."""
    t = theta(R)
    _check_index(i, n)
    s = istar(i, n)
    cut = (1.0 - t) * n / 2.0
    if s <= cut:
        e = logC - s * log2(1.0 - t) - (n - s) * log2(1.0 + t)
        return SecondBound(e, 1, cut)
    return SecondBound(log2_binom(n, s) + logC - n, 2, cut)


def bound_from_constant(i: int, a: float, n: int | None = None, use_istar: bool = False) -> float:
    """Exponent of a^{-2 ln2 * i}; with ``use_istar`` the index is min(i, n-i)."""
    if not 0.0 < a <= 1.0:
        raise ParameterRangeError(f"constant a must lie in (0, 1], got {a}")
    if use_istar:
        if n is None:
            raise ParameterRangeError("n is required for the i* variant")
        _check_index(i, n)
        i = istar(i, n)
    elif i < 0:
        raise ParameterRangeError(f"index {i} is negative")
    return TWO_LN2 * i * -log2(a)


def bound_rm_constant(i: int, Rstar: float, n: int | None = None, use_istar: bool = False):
    """Reed-Muller bound O((1 - R*)^{-2 ln2 * i})."""
    _check_rate(Rstar)
    return bound_from_constant(i, 1.0 - Rstar, n, use_istar)


def a_of_R_c_t(R: float, c: float, t: float) -> float:
    """((1-R)/2)^((1-c)/t), the constant for codes of distance Omega(n^c)."""
    _check_rate(R)
    if not 0.0 < c <= 1.0:
        raise ParameterRangeError(f"c must lie in (0, 1], got {c}")
    if t <= 0:
        raise ParameterRangeError(f"t must be positive, got {t}")
    return ((1.0 - R) / 2.0) ** ((1.0 - c) / t)


def a_low_rate(R: float, beta: float) -> float:
    """Parametric 1 - R^beta for the low-rate claim (beta stands in for Omega(1))."""
    _check_rate(R)
    if beta <= 0:
        raise ParameterRangeError(f"beta must be positive, got {beta}")
    return 1.0 - R**beta


@dataclass(frozen=True)
class BoundRecord:
    i: int
    istar: int
    a: int
    log2_a: float
    bound1: float
    bound2: float
    branch: int
    eps1: float
    eps2: float

    @property
    def eps(self) -> float:
        """Slack against the tighter of the two bounds."""
        return max(self.eps1, self.eps2)


@dataclass(frozen=True)
class BoundReport:
    code_name: str
    n: int
    k: int
    records: tuple[BoundRecord, ...]
    threshold: float

    @property
    def max_eps1(self) -> float:
        return max(r.eps1 for r in self.records if r.a)

    @property
    def max_eps2(self) -> float:
        return max(r.eps2 for r in self.records if r.a)

    def branch_indices(self, branch: int) -> list[int]:
        return [r.i for r in self.records if r.branch == branch]

    def summary(self) -> dict:
        return {
            "code": self.code_name,
            "n": self.n,
            "k": self.k,
            "max_eps1": self.max_eps1,
            "max_eps2": self.max_eps2,
            "branch1_indices": self.branch_indices(1),
            "branch2_indices": self.branch_indices(2),
            "branch_threshold": self.threshold,
        }


def bound_report_from(wd: WeightDistribution, name: str = "") -> BoundReport:
    n, k = wd.n, wd.k
    R = k / n
    recs = []
    thr = 0.0
    for i, a in enumerate(wd.counts):
        la = log2(a) if a else float("-inf")
        b1 = bound_first(i, n, R)
        b2 = bound_second(i, n, R, k)
        thr = b2.threshold
        e1 = (la - b1) / n if isfinite(la) else la
        e2 = (la - b2.exponent) / n if isfinite(la) else la
        recs.append(BoundRecord(i, istar(i, n), a, la, b1, b2.exponent, b2.branch, e1, e2))
    return BoundReport(name, n, k, tuple(recs), thr)


def bound_report(code: BinaryCode, threads: int = 1) -> BoundReport:
    return bound_report_from(weight_distribution(code, threads=threads), code.name or str(code))
