"""Exact bitwise-MAP decoding and error functionals for small Reed-Muller codes.

Every decision reduces to comparing two posterior masses.  With the
crossover rate read exactly as a rational eps = p/q, the mass of
hypothesis v is proportional to the integer

    score(v) = sum_d N_v[d] * p^d * (q-p)^(D-d)

where N_v[d] counts codewords taking value v at the target coordinate
at disagreement count d from the observation, and D is the number of
scored coordinates.  A float fast path handles clear cases; anything
within a small relative margin is re-decided with the integer scores,
so a reported tie is a true tie and the fair coin is the only
randomness in any decision.

Exhaustive error probabilities enumerate all 2^n noise patterns at
once: the per-pattern histograms N_v[d, z] are XOR-convolutions of the
codeword indicator with the distance-class indicator, computed with an
integer Walsh-Hadamard transform.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import channels as _channels
from .channels import BmsObservation, noise_weights
from .errors import FeasibilityError, ParameterError
from .rm_core import RmCode, Word, codebook, packed_weights, pack_int, row_to_int
from .seeding import SeedLike, derive_rng, ensure_rng, fresh_master

__all__ = [
    "BitDecision",
    "ErrorEstimate",
    "wilson_interval",
    "exit_bit_map",
    "bit_map_full",
    "block_ml",
    "bms_exit_bit_map",
    "exit_error",
    "full_bit_error",
    "bms_exit_error",
    "q_table",
    "conditional_table",
    "conditional_error",
    "decide_bit",
    "PATTERN_GUARD_DEFAULT",
]

PATTERN_GUARD_DEFAULT = 16
_FLOAT_MARGIN = 1e-9
_Z99 = 2.5758293035489004  # two-sided 99% normal quantile
_MC_CHUNK = 1024


@dataclass(frozen=True)
class BitDecision:
    """A decoded bit plus whether it came from a fair tie-break."""

    value: int
    tie: bool


@dataclass(frozen=True)
class ErrorEstimate:
    """Error probability with its evidence: exact enumerations report a
    zero-width interval, Monte Carlo runs report a Wilson 99% interval."""

    trials: float
    errors: float
    p_hat: float
    ci_low: float
    ci_high: float


def wilson_interval(errors: float, trials: float, z: float = _Z99) -> Tuple[float, float]:
    if trials <= 0:
        raise ParameterError("interval needs a positive trial count")
    phat = errors / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2.0 * trials)) / denom
    half = (
        z
        * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials))
        / denom
    )
    return max(0.0, center - half), min(1.0, center + half)


def _check_eps(eps: float) -> None:
    if not 0.0 < eps < 0.5:
        raise ParameterError(f"decoding needs eps in (0, 1/2), got {eps}")


# ---------------------------------------------------------------------------
# Exact mass comparison


@lru_cache(maxsize=256)
def _eps_fraction(eps: float) -> Tuple[int, int]:
    frac = Fraction(eps)
    return frac.numerator, frac.denominator


def _compare_hists_exact(n0: Sequence[int], n1: Sequence[int], eps: float, total: int) -> int:
    """Sign of score(0) - score(1), computed over the integers."""
    p, q = _eps_fraction(eps)
    qp = q - p
    score = 0
    for d in range(total + 1):
        c = int(n0[d]) - int(n1[d])
        if c:
            score += c * pow(p, d) * pow(qp, total - d)
    return (score > 0) - (score < 0)


def decide_bit(
    n0: np.ndarray,
    n1: np.ndarray,
    eps: float,
    total: int,
    rng: np.random.Generator,
) -> BitDecision:
    """MAP decision from the two disagreement histograms; coin only on true ties."""
    t = eps / (1.0 - eps)
    tp = t ** np.arange(total + 1)
    s0 = float(np.dot(n0, tp))
    s1 = float(np.dot(n1, tp))
    if abs(s0 - s1) > _FLOAT_MARGIN * (s0 + s1):
        sign = 1 if s0 > s1 else -1
    else:
        sign = _compare_hists_exact(n0, n1, eps, total)
    if sign > 0:
        return BitDecision(0, False)
    if sign < 0:
        return BitDecision(1, False)
    return BitDecision(int(rng.integers(2)), True)


# ---------------------------------------------------------------------------
# Single decisions


def _split_hists(
    code: RmCode, zbits: int, include_coord0: bool
) -> Tuple[np.ndarray, np.ndarray, int]:
    rows = codebook(code)
    width = rows.shape[1]
    x = rows ^ pack_int(zbits, width)
    if not include_coord0:
        x = x.copy()
        x[:, 0] &= np.uint64(0xFFFFFFFFFFFFFFFE)
    d = np.bitwise_count(x).sum(axis=1).astype(np.int64)
    v1 = (rows[:, 0] & np.uint64(1)).astype(bool)
    total = code.n - (0 if include_coord0 else 1)
    n1 = np.bincount(d[v1], minlength=total + 1)
    n0 = np.bincount(d[~v1], minlength=total + 1)
    return n0, n1, total


def exit_bit_map(code: RmCode, noisy: Word, eps: float, seed: SeedLike = None) -> BitDecision:
    """MAP estimate of the bit at coordinate 0 from the other n-1 coordinates."""
    _check_eps(eps)
    if noisy.m != code.m:
        raise ParameterError(f"word has m={noisy.m}, code has m={code.m}")
    n0, n1, total = _split_hists(code, noisy.bits, include_coord0=False)
    return decide_bit(n0, n1, eps, total, ensure_rng(seed))


def bit_map_full(code: RmCode, noisy: Word, eps: float, seed: SeedLike = None) -> BitDecision:
    """MAP estimate of the bit at coordinate 0 from the complete word."""
    _check_eps(eps)
    if noisy.m != code.m:
        raise ParameterError(f"word has m={noisy.m}, code has m={code.m}")
    n0, n1, total = _split_hists(code, noisy.bits, include_coord0=True)
    return decide_bit(n0, n1, eps, total, ensure_rng(seed))


def block_ml(code: RmCode, noisy: Word, eps: float, seed: SeedLike = None) -> Word:
    """Minimum-distance codeword; ties are broken uniformly at random."""
    _check_eps(eps)
    if noisy.m != code.m:
        raise ParameterError(f"word has m={noisy.m}, code has m={code.m}")
    rows = codebook(code)
    d = packed_weights(rows ^ pack_int(noisy.bits, rows.shape[1]))
    best = np.flatnonzero(d == d.min())
    if len(best) == 1:
        pick = int(best[0])
    else:
        pick = int(best[int(ensure_rng(seed).integers(len(best)))])
    return Word(code.m, row_to_int(rows[pick]))


def bms_exit_bit_map(code: RmCode, obs: BmsObservation, seed: SeedLike = None) -> BitDecision:
    """MAP bit at coordinate 0 when every other coordinate reveals its own
    crossover rate: a rate of 1/2 carries no weight, a rate of 0 is a hard
    constraint, and the rest are scored in groups by rate."""
    if obs.bits.m != code.m:
        raise ParameterError(f"observation has m={obs.bits.m}, code has m={code.m}")
    rng = ensure_rng(seed)
    n = code.n
    zero_mask = 0
    group_masks: Dict[float, int] = {}
    for x in range(1, n):
        e = obs.eps[x]
        if e == 0.5:
            continue
        if e == 0.0:
            zero_mask |= 1 << x
        else:
            group_masks[e] = group_masks.get(e, 0) | (1 << x)

    rows = codebook(code)
    width = rows.shape[1]
    diff = rows ^ pack_int(obs.bits.bits, width)
    feasible = np.ones(rows.shape[0], dtype=bool)
    if zero_mask:
        hit = diff & pack_int(zero_mask, width)
        feasible = ~np.any(hit != 0, axis=1)
    v1 = (rows[:, 0] & np.uint64(1)).astype(bool)

    rates = sorted(group_masks)
    dmat = np.zeros((rows.shape[0], len(rates)), dtype=np.int64)
    for k, e in enumerate(rates):
        dmat[:, k] = packed_weights(diff & pack_int(group_masks[e], width))

    log_t = np.array([math.log(e / (1.0 - e)) for e in rates])
    loglik = dmat @ log_t
    w = np.where(feasible, np.exp(loglik), 0.0)
    s0 = float(w[~v1].sum())
    s1 = float(w[v1].sum())
    if abs(s0 - s1) > _FLOAT_MARGIN * (s0 + s1) and (s0 + s1) > 0.0:
        sign = 1 if s0 > s1 else -1
    else:
        sign = _compare_joint_exact(dmat, feasible, v1, rates, group_masks)
    if sign > 0:
        return BitDecision(0, False)
    if sign < 0:
        return BitDecision(1, False)
    return BitDecision(int(rng.integers(2)), True)


def _compare_joint_exact(
    dmat: np.ndarray,
    feasible: np.ndarray,
    v1: np.ndarray,
    rates: List[float],
    group_masks: Dict[float, int],
) -> int:
    fractions = [_eps_fraction(e) for e in rates]
    sizes = [group_masks[e].bit_count() for e in rates]
    counts: Counter = Counter()
    for i in np.flatnonzero(feasible):
        key = tuple(int(v) for v in dmat[i])
        counts[key] += -1 if v1[i] else 1
    score = 0
    for key, c in counts.items():
        if not c:
            continue
        term = c
        for (p, q), d, size in zip(fractions, key, sizes):
            term *= pow(p, d) * pow(q - p, size - d)
        score += term
    return (score > 0) - (score < 0)


# ---------------------------------------------------------------------------
# Exhaustive pattern tables


def _fwht(vec: np.ndarray) -> np.ndarray:
    """In-place-style integer Walsh-Hadamard transform (unnormalized)."""
    a = vec.copy()
    n = a.size
    h = 1
    while h < n:
        b = a.reshape(-1, 2 * h)
        x = b[:, :h].copy()
        y = b[:, h:].copy()
        b[:, :h] = x + y
        b[:, h:] = x - y
        h *= 2
    return a


def _check_pattern_guard(code: RmCode, guard: Optional[int]) -> int:
    limit = PATTERN_GUARD_DEFAULT if guard is None else int(guard)
    if code.n > limit:
        raise FeasibilityError(
            f"full pattern sum over n={code.n} coordinates exceeds the guard {limit}"
        )
    return limit


@lru_cache(maxsize=32)
def _pattern_hists(code: RmCode, include_coord0: bool, guard: Optional[int]) -> np.ndarray:
    """Integer tables hists[v, d, z]: codewords with coordinate-0 value v at
    disagreement count d from noise pattern z.  Shape (2, total+1, 2^n)."""
    _check_pattern_guard(code, guard)
    n = code.n
    N = 1 << n
    rows = codebook(code)
    ints = rows[:, 0].astype(np.int64)
    bit0 = (ints & 1).astype(bool)
    a0 = np.bincount(ints[~bit0], minlength=N).astype(np.int64)
    a1 = np.bincount(ints[bit0], minlength=N).astype(np.int64)

    idx = np.arange(N, dtype=np.uint64)
    pc = np.bitwise_count(idx).astype(np.int64)
    if include_coord0:
        eff = pc
        total = n
    else:
        eff = pc - (np.arange(N) & 1)
        total = n - 1

    fa0 = _fwht(a0)
    fa1 = _fwht(a1)
    hists = np.empty((2, total + 1, N), dtype=np.int64)
    for d in range(total + 1):
        fb = _fwht((eff == d).astype(np.int64))
        hists[0, d] = _fwht(fa0 * fb) // N
        hists[1, d] = _fwht(fa1 * fb) // N
    hists.setflags(write=False)
    return hists


def _decision_table(hists: np.ndarray, eps: float, total: int) -> np.ndarray:
    """Per-pattern error contribution of the MAP decision against truth bit 0:
    0 for a correct decision, 1 for a wrong one, 1/2 for a true tie."""
    n0 = hists[0]
    n1 = hists[1]
    t = eps / (1.0 - eps)
    tp = t ** np.arange(total + 1)
    s0 = tp @ n0
    s1 = tp @ n1
    table = np.where(s1 > s0, 1.0, 0.0)
    sure_tie = np.all(n0 == n1, axis=0)
    table[sure_tie] = 0.5
    near = (np.abs(s0 - s1) <= _FLOAT_MARGIN * (s0 + s1)) & ~sure_tie
    for z in np.flatnonzero(near):
        sign = _compare_hists_exact(n0[:, z], n1[:, z], eps, total)
        table[z] = 0.5 if sign == 0 else (1.0 if sign < 0 else 0.0)
    return table


@lru_cache(maxsize=32)
def q_table(code: RmCode, eps: float, guard: Optional[int] = None) -> np.ndarray:
    """Error mass of the coordinate-0 decision from the other coordinates, for
    every noise pattern z: values in {0, 1/2, 1} indexed by the packed pattern."""
    _check_eps(eps)
    hists = _pattern_hists(code, False, guard)
    table = _decision_table(hists, eps, code.n - 1)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=32)
def _full_table(code: RmCode, eps: float, guard: Optional[int] = None) -> np.ndarray:
    _check_eps(eps)
    hists = _pattern_hists(code, True, guard)
    table = _decision_table(hists, eps, code.n)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=64)
def conditional_table(
    code: RmCode, m_under: int, eps: float, guard: Optional[int] = None
) -> np.ndarray:
    """Expected error of the coordinate-0 decision given the noise restricted to
    the first 2^m_under coordinates (the span of the first m_under axes)."""
    if not 0 <= m_under <= code.m:
        raise ParameterError(f"m_under must lie in 0..{code.m}, got {m_under}")
    q = q_table(code, eps, guard)
    low = 1 << m_under
    w = noise_weights(code.n - low, eps)
    mat = q.reshape(1 << (code.n - low), 1 << low)
    out = w @ mat
    out.setflags(write=False)
    return out


def conditional_error(
    code: RmCode, m_under: int, z_prime: Word, eps: float, guard: Optional[int] = None
) -> float:
    if z_prime.m != m_under:
        raise ParameterError(f"conditioning word has m={z_prime.m}, expected {m_under}")
    return float(conditional_table(code, m_under, eps, guard)[z_prime.bits])


# ---------------------------------------------------------------------------
# Error estimates


def _exact_estimate(code: RmCode, eps: float, table: np.ndarray) -> ErrorEstimate:
    p = float(np.dot(noise_weights(code.n, eps), table))
    trials = float(1 << code.n)
    return ErrorEstimate(trials=trials, errors=p * trials, p_hat=p, ci_low=p, ci_high=p)


def _mc_bit_error(
    code: RmCode,
    eps: float,
    trials: int,
    master: int,
    include_coord0: bool,
    threads: int,
) -> ErrorEstimate:
    zero = Word(code.m, 0)

    def one(i: int) -> int:
        rng = derive_rng(master, i)
        z = _channels.bsc_transmit(zero, eps, rng)
        n0, n1, total = _split_hists(code, z.bits, include_coord0)
        dec = decide_bit(n0, n1, eps, total, rng)
        return int(dec.value != 0)

    errors = _sum_over_trials(one, trials, threads)
    p_hat = errors / trials
    lo, hi = wilson_interval(errors, trials)
    return ErrorEstimate(trials=float(trials), errors=float(errors), p_hat=p_hat, ci_low=lo, ci_high=hi)


def _sum_over_trials(one: Callable[[int], int], trials: int, threads: int) -> int:
    """Fixed chunking and ordered reduction keep the total independent of the
    thread count; each trial's generator depends only on its index."""
    spans = [(lo, min(lo + _MC_CHUNK, trials)) for lo in range(0, trials, _MC_CHUNK)]

    def chunk(span: Tuple[int, int]) -> int:
        return sum(one(i) for i in range(span[0], span[1]))

    if threads <= 1:
        parts = [chunk(s) for s in spans]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(chunk, spans))
    return sum(parts)


def _run_error(
    code: RmCode,
    eps: float,
    mode: str,
    trials: Optional[int],
    seed: SeedLike,
    threads: int,
    include_coord0: bool,
    guard: Optional[int],
) -> ErrorEstimate:
    _check_eps(eps)
    if mode == "exact":
        table = _full_table(code, eps, guard) if include_coord0 else q_table(code, eps, guard)
        return _exact_estimate(code, eps, table)
    if mode in ("montecarlo", "mc"):
        if trials is None or trials < 1:
            raise ParameterError("Monte Carlo mode needs a positive trial count")
        if not isinstance(seed, (int, np.integer)) and seed is not None:
            raise ParameterError("Monte Carlo mode seeds by integer, not generator")
        master = fresh_master(None if seed is None else int(seed))
        return _mc_bit_error(code, eps, int(trials), master, include_coord0, threads)
    raise ParameterError(f"unknown mode {mode!r}; use 'exact' or 'montecarlo'")


def exit_error(
    code: RmCode,
    eps: float,
    mode: str = "exact",
    trials: Optional[int] = None,
    seed: SeedLike = None,
    threads: int = 1,
    guard: Optional[int] = None,
) -> ErrorEstimate:
    """Error probability of the coordinate-0 decision that ignores coordinate 0.

    Exact mode enumerates every noise pattern (ties contribute 1/2);
    Monte Carlo mode transmits the zero codeword and counts realized errors.
    """
    return _run_error(code, eps, mode, trials, seed, threads, False, guard)


def full_bit_error(
    code: RmCode,
    eps: float,
    mode: str = "exact",
    trials: Optional[int] = None,
    seed: SeedLike = None,
    threads: int = 1,
    guard: Optional[int] = None,
) -> ErrorEstimate:
    """Error probability of the coordinate-0 decision that sees the whole word."""
    return _run_error(code, eps, mode, trials, seed, threads, True, guard)


def bms_exit_error(
    code: RmCode,
    channel: "_channels.BmsChannel",
    trials: int,
    seed: Optional[int] = None,
    threads: int = 1,
) -> ErrorEstimate:
    """Monte Carlo error of the rate-weighted coordinate-0 decision on a
    mixture channel (the zero codeword is transmitted each trial)."""
    if trials < 1:
        raise ParameterError("Monte Carlo mode needs a positive trial count")
    master = fresh_master(seed)
    zero = Word(code.m, 0)

    def one(i: int) -> int:
        rng = derive_rng(master, i)
        obs = _channels.bms_transmit(zero, channel, rng)
        dec = bms_exit_bit_map(code, obs, rng)
        return int(dec.value != 0)

    errors = _sum_over_trials(one, trials, threads)
    p_hat = errors / trials
    lo, hi = wilson_interval(errors, trials)
    return ErrorEstimate(trials=float(trials), errors=float(errors), p_hat=p_hat, ci_low=lo, ci_high=hi)
