"""Binary symmetric channel: ML-error simulation, Sanov/union bounds, rate curves."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb, fsum, inf, log, log2, sqrt
from statistics import NormalDist

import numpy as np

from .codes import BinaryCode, dual
from .errors import DimensionTooLargeError, GridError, ParameterRangeError
from .parallel import chunk_sizes, ordered_map, substream
from .spectrum import WeightDistribution, weight_distribution

CRITICAL_EXPONENT = 1.0 / (4.0 * log(2.0))
CODEWORD_CUTOFF = 22
SYNDROME_CUTOFF = 24
SYNDROME_PATTERN_LIMIT = 20_000_000
TRIAL_CHUNK = 10_000
TIE_POLICY = "tie-is-error"
_BSC_STREAM = 4
_Z95 = NormalDist().inv_cdf(0.975)


def entropy(p: float) -> float:
    """Binary entropy in bits, H(0) = H(1) = 0."""
    if not 0.0 <= p <= 1.0:
        raise ParameterRangeError(f"probability {p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * log2(p) - (1.0 - p) * log2(1.0 - p)


def kl_half(p: float) -> float:
    """D(1/2 || p) in bits; infinite at p in {0, 1}."""
    if not 0.0 <= p <= 1.0:
        raise ParameterRangeError(f"probability {p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return inf
    return -0.5 * log2(4.0 * p * (1.0 - p))


def sanov_term(w: int, p: float) -> float:
    """(w+1)^2 (4p(1-p))^{w/2}, dominating Pr[Bin(w, p) >= w/2]."""
    if w < 1:
        raise ParameterRangeError(f"weight must be positive, got {w}")
    if not 0.0 <= p <= 1.0:
        raise ParameterRangeError(f"probability {p} outside [0, 1]")
    return (w + 1) ** 2 * (4.0 * p * (1.0 - p)) ** (w / 2)


def union_bound(wd: WeightDistribution, p: float) -> float:
    """sum_{i >= 1} a_i (i+1)^2 (4p(1-p))^{i/2}; may exceed 1 (vacuous)."""
    return fsum(float(a) * sanov_term(i, p) for i, a in enumerate(wd.counts) if i and a)


def critical_rate(p: float) -> float:
    """1 - (4p(1-p))^{1/(4 ln 2)} on [0, 1/2]."""
    if not 0.0 <= p <= 0.5:
        raise ParameterRangeError(f"p={p} outside [0, 1/2]")
    return 1.0 - (4.0 * p * (1.0 - p)) ** CRITICAL_EXPONENT


def spectrum_constant_suffices(a: float, p: float) -> bool:
    """a > (4p(1-p))^{1/(4 ln 2)}: spectrum constant a suffices for BSC(p)."""
    return a > 1.0 - critical_rate(p)


@dataclass(frozen=True)
class GrowthCheck:
    growth: float  # smallest c with a_i <= c^i for all i >= d
    min_distance: int
    d_over_log2n: float
    p: float
    holds: bool  # 4p(1-p) < 1/c^2


def growth_condition(wd: WeightDistribution, p: float) -> GrowthCheck:
    """Evaluate the spectrum-growth hypothesis a_i <= c^i with the smallest c."""
    d = wd.min_distance
    if d is None:
        raise ParameterRangeError("distribution has no nonzero codewords")
    c = max(a ** (1.0 / i) for i, a in enumerate(wd.counts) if i >= d and a)
    return GrowthCheck(c, d, d / log2(wd.n) if wd.n > 1 else inf, p,
                       4.0 * p * (1.0 - p) < 1.0 / c**2)


@dataclass(frozen=True)
class BoundCurve:
    p: np.ndarray
    capacity: np.ndarray
    critical_rate: np.ndarray


def rate_curves(grid) -> BoundCurve:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(grid < 0) or np.any(grid > 0.5):
        raise GridError("grid must lie within [0, 1/2]")
    cap = np.array([1.0 - entropy(p) for p in grid])
    crit = np.array([critical_rate(p) for p in grid])
    return BoundCurve(grid, cap, crit)


def union_bound_curve(wd: WeightDistribution, grid) -> tuple[np.ndarray, np.ndarray]:
    grid = np.asarray(grid, dtype=float)
    vals = np.array([union_bound(wd, p) for p in grid])
    return vals, vals > 1.0


# ------------------------------------------------------------------ simulation


@dataclass(frozen=True)
class SimResult:
    p: float
    trials: int
    errors: int
    seed: int
    method: str
    tie_policy: str = TIE_POLICY

    @property
    def estimate(self) -> float:
        return self.errors / self.trials

    @property
    def stderr(self) -> float:
        e = self.estimate
        return sqrt(e * (1.0 - e) / self.trials)

    @property
    def ci95(self) -> tuple[float, float]:
        return wilson_interval(self.errors, self.trials)


def wilson_interval(k: int, n: int, z: float = _Z95) -> tuple[float, float]:
    ph = k / n
    denom = 1.0 + z * z / n
    centre = (ph + z * z / (2 * n)) / denom
    half = z / denom * sqrt(ph * (1 - ph) / n + z * z / (4 * n * n))
    return max(0.0, centre - half), min(1.0, centre + half)


def _pack_rows(z: np.ndarray) -> np.ndarray:
    b, n = z.shape
    words = max(1, (n + 63) // 64)
    raw = np.packbits(z, axis=1, bitorder="little")
    buf = np.zeros((b, words * 8), dtype=np.uint8)
    buf[:, : raw.shape[1]] = raw
    return buf.view("<u8").astype(np.uint64)


class _CodewordDecider:
    """Error iff some nonzero codeword x has 2|x & z| >= |x|."""

    def __init__(self, code: BinaryCode, block: int = 1 << 22):
        from .spectrum import codeword_blocks

        low, high = codeword_blocks(code)
        words = np.concatenate([low ^ off for off in high])
        wt = np.bitwise_count(words).sum(axis=1, dtype=np.int64)
        order = np.argsort(wt, kind="stable")
        order = order[wt[order] > 0]
        self.words = words[order]
        self.wt = wt[order]
        self.d = int(self.wt[0]) if self.wt.size else None
        self.block = block

    def __call__(self, z: np.ndarray) -> int:
        if self.d is None:
            return 0
        zw = z.sum(axis=1)
        cand = _pack_rows(z[2 * zw >= self.d])
        czw = zw[2 * zw >= self.d]
        if cand.shape[0] == 0:
            return 0
        errs = 0
        per = max(1, self.block // max(1, self.words.shape[0]))
        for s in range(0, cand.shape[0], per):
            zb, wb = cand[s : s + per], czw[s : s + per]
            # only codewords of weight <= 2|z| can satisfy the event
            limit = int(np.searchsorted(self.wt, 2 * wb.max(), side="right"))
            x, xw = self.words[:limit], self.wt[:limit]
            hit = np.zeros(zb.shape[0], dtype=bool)
            step = max(1, self.block // max(1, zb.shape[0]))
            for t in range(0, limit, step):
                todo = ~hit
                if not todo.any():
                    break
                ov = np.bitwise_count(zb[todo, None, :] & x[None, t : t + step, :]).sum(
                    axis=2, dtype=np.int64
                )
                hit[todo] = np.any(2 * ov >= xw[None, t : t + step], axis=1)
            errs += int(hit.sum())
        return errs


class _SyndromeDecider:
    """Coset table of (minimum weight, min(#minimum-weight members, 2))."""

    def __init__(self, code: BinaryCode, limit: int = SYNDROME_PATTERN_LIMIT):
        h = dual(code)
        r = h.k
        self.hcols = np.array(h.columns, dtype=np.int64) if r else np.zeros(code.n, np.int64)
        minw = np.full(1 << r, -1, dtype=np.int64)
        count = np.zeros(1 << r, dtype=np.int64)
        seen, used = 0, 0
        for w in range(code.n + 1):
            used += comb(code.n, w)
            if used > limit:
                raise DimensionTooLargeError(
                    f"syndrome table needs more than {limit} error patterns"
                )
            combos = np.array(list(combinations(range(code.n), w)), dtype=np.int64)
            if w == 0:
                syn = np.zeros(1, dtype=np.int64)
            else:
                syn = np.bitwise_xor.reduce(self.hcols[combos], axis=1)
            hist = np.bincount(syn, minlength=1 << r)
            new = (minw < 0) & (hist > 0)
            minw[new] = w
            count[new] = np.minimum(hist[new], 2)
            seen += int(new.sum())
            if seen == 1 << r:
                break
        self.minw, self.count = minw, count

    def __call__(self, z: np.ndarray) -> int:
        syn = np.bitwise_xor.reduce(np.where(z, self.hcols[None, :], 0), axis=1)
        zw = z.sum(axis=1)
        mw, ct = self.minw[syn], self.count[syn]
        return int(np.sum((zw > mw) | ((zw == mw) & (ct >= 2))))


def _decider(code: BinaryCode, method: str):
    if method == "auto":
        if code.k <= CODEWORD_CUTOFF:
            method = "codewords"
        elif code.n - code.k <= SYNDROME_CUTOFF:
            method = "syndrome"
        else:
            raise DimensionTooLargeError(
                f"k={code.k} above {CODEWORD_CUTOFF} and n-k={code.n - code.k} "
                f"above {SYNDROME_CUTOFF}: no exact ML decider"
            )
    if method == "codewords":
        if code.k > CODEWORD_CUTOFF:
            raise DimensionTooLargeError(f"k={code.k} above {CODEWORD_CUTOFF}")
        return method, _CodewordDecider(code)
    if method == "syndrome":
        if code.n - code.k > SYNDROME_CUTOFF:
            raise DimensionTooLargeError(f"n-k={code.n - code.k} above {SYNDROME_CUTOFF}")
        return method, _SyndromeDecider(code)
    raise ParameterRangeError(f"unknown decoder method {method!r}")


def simulate_bsc(code: BinaryCode, p: float, trials: int, seed: int, threads: int = 1,
                 method: str = "auto", chunk: int = TRIAL_CHUNK) -> SimResult:
    """Monte Carlo ML block-error rate with the all-zero codeword transmitted."""
    if not 0.0 <= p <= 0.5:
        raise ParameterRangeError(f"p={p} outside [0, 1/2]")
    if trials <= 0:
        raise ParameterRangeError("trials must be positive")
    method, decide = _decider(code, method)

    def job(task):
        c, size = task
        z = substream(seed, _BSC_STREAM, c).random((size, code.n)) < p
        return decide(z)

    counts = ordered_map(job, list(enumerate(chunk_sizes(trials, chunk))), threads)
    return SimResult(p, trials, sum(counts), seed, method)


def binomial_tail(w: int, p, at_least) -> float:
    """Pr[Bin(w, p) >= at_least] by exact summation (works with Fractions)."""
    lo = int(np.ceil(at_least))
    return sum(comb(w, j) * p**j * (1 - p) ** (w - j) for j in range(max(lo, 0), w + 1))


def repetition_block_error(n: int, p: float) -> float:
    """Exact ML block-error probability of Rep(n) with ties counted as errors."""
    return binomial_tail(n, p, n / 2)


def union_bound_for(code: BinaryCode, p: float, threads: int = 1) -> float:
    return union_bound(weight_distribution(code, threads=threads), p)
