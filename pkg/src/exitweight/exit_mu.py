"""EXIT functions on the BEC, the corank functional mu, and their identity.

Notation: lambda is the probability that a coordinate is *kept* (unerased),
p = 1 - lambda the erasure probability. For a code C with generator G,

    f(S)    = |S| - rank(G_S)
    mu(l)   = E_{S ~ l} f(S)
    h_i(p)  = Pr[column i is outside span(G_R)], R ~ (1 - p) on the other n - 1
              coordinates, so p * h_i(p) is the bit-i erasure probability
    h(p)    = mean_i h_i(p)

and d mu / d lambda = n (1 - h(1 - lambda)).

Exact mode enumerates all 2^n subsets once and reduces everything to integer
counts grouped by subset size; the curves are then polynomials in lambda.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import fsum

import numpy as np
from scipy.optimize import isotonic_regression

from . import gf2
from .codes import BinaryCode, rank_of_subset
from .errors import DimensionTooLargeError, GridError, ParameterRangeError
from .parallel import chunk_sizes, ordered_map, substream

EXACT_CUTOFF = 20
DEFAULT_SAMPLES = 100_000
CHUNK = 8192

# substream tags
_MU_STREAM = 1
_EXIT_STREAM = 2
_BIT_STREAM = 3


@dataclass(frozen=True)
class SamplingConfig:
    """``mode`` is "exact" or "mc"; ``seed`` is mandatory for "mc"."""

    mode: str = "exact"
    samples: int = DEFAULT_SAMPLES
    seed: int | None = None
    threads: int = 1
    chunk: int = CHUNK

    def __post_init__(self):
        if self.mode not in ("exact", "mc"):
            raise ParameterRangeError(f"unknown mode {self.mode!r}")
        if self.mode == "mc":
            if self.samples <= 0:
                raise ParameterRangeError("Monte Carlo mode needs a positive sample count")
            if self.seed is None:
                raise ParameterRangeError("Monte Carlo mode needs a seed")


EXACT = SamplingConfig()


@dataclass(eq=False)
class CurveSamples:
    grid: np.ndarray
    values: np.ndarray
    stderr: np.ndarray
    mode: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        self.stderr = np.asarray(self.stderr, dtype=float)
        check_grid(self.grid)
        if not (self.values.shape == self.stderr.shape == self.grid.shape):
            raise ParameterRangeError("grid, values and stderr must have equal length")
        if np.any(self.stderr < 0):
            raise ParameterRangeError("negative standard error")
        if self.mode == "exact" and np.any(self.stderr != 0):
            raise ParameterRangeError("exact curves carry zero standard error")


def check_grid(grid: np.ndarray):
    if grid.ndim != 1 or grid.size == 0:
        raise GridError("grid must be a non-empty 1-d array")
    if np.any(grid < 0) or np.any(grid > 1):
        raise GridError("grid values must lie in [0, 1]")
    if np.any(np.diff(grid) <= 0):
        raise GridError("grid must be strictly ascending")


def _check_prob(x: float, what: str = "probability"):
    if not 0.0 <= x <= 1.0:
        raise ParameterRangeError(f"{what} {x} outside [0, 1]")


# ---------------------------------------------------------------- exact mode


def rank_table(code: BinaryCode, cutoff: int = EXACT_CUTOFF) -> np.ndarray:
    """rank(G_T) for every mask T in [0, 2^n).

    dim{c in C : supp(c) avoids T} = k - rank(G_T), so the table follows from
    counting codewords whose support lies inside each mask (subset-sum
    transform over the 2^k codeword supports).
    """
    n = code.n
    if n > cutoff:
        raise DimensionTooLargeError(
            f"n={n} above exact cutoff {cutoff}; use Monte Carlo mode"
        )
    counts = np.zeros(1 << n, dtype=np.int64)
    np.add.at(counts, np.asarray(gf2.span(code.rows), dtype=np.int64), 1)
    for j in range(n):
        view = counts.reshape(-1, 2, 1 << j)
        view[:, 1, :] += view[:, 0, :]
    # counts are powers of two: log2 via bit length
    inside = np.frexp(counts.astype(np.float64))[1] - 1
    comp = np.arange(1 << n, dtype=np.int64) ^ ((1 << n) - 1)
    return (code.k - inside[comp]).astype(np.int64)


@dataclass(frozen=True)
class ExactProfile:
    """Integer sufficient statistics for all exact curves.

    corank_by_size[j] = sum_{|S| = j} f(S)
    unrec_by_size[i, j] = #{R not containing i, |R| = j : col i outside span(G_R)}
    """

    n: int
    k: int
    corank_by_size: tuple[int, ...]
    unrec_by_size: np.ndarray


@lru_cache(maxsize=32)
def exact_profile(code: BinaryCode, cutoff: int = EXACT_CUTOFF) -> ExactProfile:
    n = code.n
    ranks = rank_table(code, cutoff)
    masks = np.arange(1 << n, dtype=np.int64)
    sizes = np.bitwise_count(masks).astype(np.int64)
    f = sizes - ranks
    F = np.zeros(n + 1, dtype=np.int64)
    np.add.at(F, sizes, f)
    E = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        bit = 1 << i
        without = masks[(masks & bit) == 0]
        inc = ranks[without | bit] - ranks[without]
        np.add.at(E[i], sizes[without], inc)
    E.setflags(write=False)
    return ExactProfile(n, code.k, tuple(int(x) for x in F), E)


def _pow(x: float, e: int) -> float:
    return 1.0 if e == 0 else x**e


def _bernstein(coeffs, lam: float, deg: int) -> float:
    """sum_j c_j lam^j (1-lam)^(deg-j)."""
    q = 1.0 - lam
    return fsum(float(c) * _pow(lam, j) * _pow(q, deg - j) for j, c in enumerate(coeffs) if c)


def _mu_exact(prof: ExactProfile, lam: float) -> float:
    return _bernstein(prof.corank_by_size, lam, prof.n)


def _dmu_exact(prof: ExactProfile, lam: float) -> float:
    n = prof.n
    q = 1.0 - lam
    terms = []
    for j, c in enumerate(prof.corank_by_size):
        if not c:
            continue
        if j:
            terms.append(c * j * _pow(lam, j - 1) * _pow(q, n - j))
        if n - j:
            terms.append(-c * (n - j) * _pow(lam, j) * _pow(q, n - j - 1))
    return fsum(terms)


def _exit_bit_exact(prof: ExactProfile, i: int, p: float) -> float:
    return _bernstein(prof.unrec_by_size[i], 1.0 - p, prof.n - 1)


def _exit_avg_exact(prof: ExactProfile, p: float) -> float:
    return _bernstein(prof.unrec_by_size.sum(axis=0), 1.0 - p, prof.n - 1) / prof.n


# ------------------------------------------------------------ Monte Carlo mode


def _pack_bool(a: np.ndarray) -> np.ndarray:
    b, n = a.shape
    words = gf2.words_for(n)
    raw = np.packbits(a, axis=1, bitorder="little")
    buf = np.zeros((b, words * 8), dtype=np.uint8)
    buf[:, : raw.shape[1]] = raw
    return buf.view("<u8").astype(np.uint64)


def _unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    raw = words.astype("<u8").view(np.uint8)
    return np.unpackbits(raw, axis=1, count=n, bitorder="little").astype(bool)


def _mc_batch(code: BinaryCode, keep: float, size: int, rng: np.random.Generator,
              force_out: int | None = None):
    """Sample S (each coordinate kept w.p. ``keep``); return (|S|, rank, unrecovered)."""
    from ._kernels import erasure_rows

    inside = rng.random((size, code.n)) < keep
    if force_out is not None:
        inside[:, force_out] = False
    ranks = np.empty(size, dtype=np.int64)
    unrec = np.empty((size, gf2.words_for(code.n)), dtype=np.uint64)
    erasure_rows(code.packed, _pack_bool(inside), ranks, unrec)
    return inside.sum(axis=1), ranks, unrec


def _mean_stderr(chunks: list[np.ndarray]) -> tuple[float, float]:
    y = np.concatenate(chunks)
    m = float(y.mean())
    se = float(y.std(ddof=1) / np.sqrt(y.size)) if y.size > 1 else 0.0
    return m, se


def _run_chunks(cfg: SamplingConfig, tag: int, point: int, job):
    sizes = chunk_sizes(cfg.samples, cfg.chunk)
    tasks = [(c, s) for c, s in enumerate(sizes)]
    return ordered_map(lambda t: job(substream(cfg.seed, tag, point, t[0]), t[1]),
                       tasks, cfg.threads)


def _mu_mc(code, lam, cfg, point=0):
    def job(rng, size):
        sizes, ranks, _ = _mc_batch(code, lam, size, rng)
        return sizes - ranks
    return _mean_stderr(_run_chunks(cfg, _MU_STREAM, point, job))


def _coloops(code: BinaryCode) -> list[bool]:
    full = code.full_mask
    k = code.k
    return [rank_of_subset(code, full ^ (1 << i)) < k for i in range(code.n)]


def _exit_avg_mc(code, p, cfg, point=0):
    if p == 0.0:
        return float(np.mean(_coloops(code))), 0.0
    n = code.n

    def job(rng, size):
        _, _, unrec = _mc_batch(code, 1.0 - p, size, rng)
        # E[#unrecovered erased coordinates] = n p h(p)
        return np.bitwise_count(unrec).sum(axis=1) / (n * p)
    return _mean_stderr(_run_chunks(cfg, _EXIT_STREAM, point, job))


def _exit_bit_mc(code, i, p, cfg, point=0):
    def job(rng, size):
        _, _, unrec = _mc_batch(code, 1.0 - p, size, rng, force_out=i)
        return ((unrec[:, i // 64] >> np.uint64(i % 64)) & np.uint64(1)).astype(np.float64)
    m, _ = _mean_stderr(_run_chunks(cfg, _BIT_STREAM, point * code.n + i, job))
    return m, float(np.sqrt(m * (1 - m) / cfg.samples))


# ----------------------------------------------------------------- public API


def mu(code: BinaryCode, lam: float, cfg: SamplingConfig = EXACT):
    """mu_C(lambda); returns (value, stderr)."""
    _check_prob(lam, "lambda")
    if cfg.mode == "exact":
        return _mu_exact(exact_profile(code), lam), 0.0
    return _mu_mc(code, lam, cfg)


def mu_derivative_exact(code: BinaryCode, lam: float) -> float:
    """d mu / d lambda from the polynomial form, endpoints by exact limits."""
    _check_prob(lam, "lambda")
    return _dmu_exact(exact_profile(code), lam)


def exit_bit(code: BinaryCode, i: int, p: float, cfg: SamplingConfig = EXACT):
    """h_i(p) for 0-based coordinate i; returns (value, stderr)."""
    if not 0 <= i < code.n:
        raise ParameterRangeError(f"coordinate {i} outside [0, {code.n})")
    _check_prob(p)
    if cfg.mode == "exact":
        return _exit_bit_exact(exact_profile(code), i, p), 0.0
    return _exit_bit_mc(code, i, p, cfg)


def exit_avg(code: BinaryCode, p: float, cfg: SamplingConfig = EXACT):
    """Average EXIT function h(p); returns (value, stderr)."""
    _check_prob(p)
    if cfg.mode == "exact":
        return _exit_avg_exact(exact_profile(code), p), 0.0
    return _exit_avg_mc(code, p, cfg)


def exit_curve(code: BinaryCode, grid, cfg: SamplingConfig = EXACT) -> CurveSamples:
    grid = np.asarray(grid, dtype=float)
    check_grid(grid)
    if cfg.mode == "exact":
        prof = exact_profile(code)
        vals = [_exit_avg_exact(prof, p) for p in grid]
        errs = [0.0] * len(grid)
    else:
        pairs = [_exit_avg_mc(code, p, cfg, point=g) for g, p in enumerate(grid)]
        vals, errs = zip(*pairs)
    return CurveSamples(grid, vals, errs, cfg.mode, _meta(code, cfg, "exit"))


def mu_curve(code: BinaryCode, grid, cfg: SamplingConfig = EXACT) -> CurveSamples:
    grid = np.asarray(grid, dtype=float)
    check_grid(grid)
    if cfg.mode == "exact":
        prof = exact_profile(code)
        vals = [_mu_exact(prof, lam) for lam in grid]
        errs = [0.0] * len(grid)
    else:
        pairs = [_mu_mc(code, lam, cfg, point=g) for g, lam in enumerate(grid)]
        vals, errs = zip(*pairs)
    return CurveSamples(grid, vals, errs, cfg.mode, _meta(code, cfg, "mu"))


def _meta(code: BinaryCode, cfg: SamplingConfig, kind: str) -> dict:
    meta = {"curve": kind, "code": code.name or str(code), "n": code.n, "k": code.k,
            "mode": cfg.mode}
    if cfg.mode == "mc":
        meta.update(samples=cfg.samples, seed=cfg.seed)
    return meta


@dataclass(frozen=True)
class IdentityTable:
    lam: np.ndarray
    mu: np.ndarray
    dmu: np.ndarray
    rhs: np.ndarray  # n (1 - h(1 - lambda))

    @property
    def discrepancy(self) -> float:
        return float(np.max(np.abs(self.dmu - self.rhs)))


def identity_table(code: BinaryCode, grid) -> IdentityTable:
    grid = np.asarray(grid, dtype=float)
    check_grid(grid)
    prof = exact_profile(code)
    n = code.n
    return IdentityTable(
        grid,
        np.array([_mu_exact(prof, lam) for lam in grid]),
        np.array([_dmu_exact(prof, lam) for lam in grid]),
        np.array([n * (1.0 - _exit_avg_exact(prof, 1.0 - lam)) for lam in grid]),
    )


def verify_exit_identity(code: BinaryCode, grid) -> float:
    """Max over the grid of |mu'(lambda) - n (1 - h(1 - lambda))|, exact mode."""
    return identity_table(code, grid).discrepancy


# --------------------------------------------------------- threshold location


@dataclass(frozen=True)
class ThresholdEstimate:
    inside_grid: bool
    p_star: float | None = None
    p_star_err: float | None = None
    width: float | None = None
    width_err: float | None = None
    p_low: float | None = None  # h = 0.1
    p_high: float | None = None  # h = 0.9


def _crossing(grid, fit, err, level):
    idx = np.flatnonzero(fit >= level)
    if idx.size == 0:
        return None, None
    j = idx[0]
    if j == 0:
        if fit[0] > level:
            return None, None
        return float(grid[0]), 0.0
    x0, x1, y0, y1 = grid[j - 1], grid[j], fit[j - 1], fit[j]
    t = (level - y0) / (y1 - y0)
    x = x0 + t * (x1 - x0)
    slope = (y1 - y0) / (x1 - x0)
    e = ((1 - t) * err[j - 1] + t * err[j]) / slope
    return float(x), float(e)


def threshold_estimate(curve: CurveSamples) -> ThresholdEstimate:
    """Locate h(p) = 1/2 and the 0.1-0.9 transition after an isotonic fit."""
    err = curve.stderr
    if np.all(err > 0):
        fit = isotonic_regression(curve.values, weights=1.0 / err**2).x
    else:
        fit = isotonic_regression(curve.values).x
    grid = curve.grid
    mid, mid_e = _crossing(grid, fit, err, 0.5)
    if mid is None:
        return ThresholdEstimate(False)
    lo, lo_e = _crossing(grid, fit, err, 0.1)
    hi, hi_e = _crossing(grid, fit, err, 0.9)
    if lo is None or hi is None:
        return ThresholdEstimate(True, mid, mid_e)
    return ThresholdEstimate(True, mid, mid_e, hi - lo, float(np.hypot(lo_e, hi_e)), lo, hi)
