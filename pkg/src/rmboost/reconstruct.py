"""List-decoding reconstruction of Reed-Muller codewords.

The plain reconstructor decodes every coordinate independently by
bitwise MAP, then searches the ball around that center for codewords
and returns the one agreeing most with the observation.  The grid
variant first reconstructs every axis-aligned slice of a coarse
variable grid, majority-votes the slice outputs coordinate by
coordinate, and runs the same list step around the vote.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .decoders import decide_bit
from .errors import ParameterError
from .rm_core import (
    RmCode,
    Word,
    codebook,
    codebook_bits,
    mobius,
    pack_int,
    packed_weights,
    row_to_int,
    slice_coordinate_map,
)
from .seeding import SeedLike, ensure_rng

__all__ = [
    "CandidateList",
    "ReconstructResult",
    "bitwise_decode",
    "list_within",
    "reconstruction_radius",
    "grid_radius",
    "rm_reconstruct",
    "rm_reconstruct_grid",
]


@dataclass(frozen=True)
class CandidateList:
    """Codewords within ``radius`` of ``center``, sorted by coefficient mask."""

    center: Word
    radius: int
    members: Tuple[Word, ...]


@dataclass(frozen=True)
class ReconstructResult:
    word: Word
    radius: int
    list_size: int
    fallback: bool


def bitwise_decode(code: RmCode, noisy: Word, eps: float, seed: SeedLike = None) -> Word:
    """Independent MAP decision for every coordinate, each using the full word.

    Tie coins are drawn in coordinate order from the caller's generator.
    """
    if noisy.m != code.m:
        raise ParameterError(f"word has m={noisy.m}, code has m={code.m}")
    if not 0.0 < eps < 0.5:
        raise ParameterError(f"decoding needs eps in (0, 1/2), got {eps}")
    rng = ensure_rng(seed)
    rows = codebook(code)
    bits = codebook_bits(code)
    n = code.n
    d = packed_weights(rows ^ pack_int(noisy.bits, rows.shape[1]))
    # per-coordinate, per-distance counts of codewords with a 1 there
    ones = np.zeros((n + 1, n), dtype=np.int64)
    np.add.at(ones, d, bits.astype(np.int64))
    totals = np.bincount(d, minlength=n + 1)
    out = 0
    for x in range(n):
        n1 = ones[:, x]
        n0 = totals - n1
        dec = decide_bit(n0, n1, eps, n, rng)
        out |= dec.value << x
    return Word(code.m, out)


def list_within(code: RmCode, center: Word, radius: int) -> CandidateList:
    """All codewords within Hamming distance ``radius`` of ``center``."""
    if center.m != code.m:
        raise ParameterError(f"word has m={center.m}, code has m={code.m}")
    if radius < 0:
        raise ParameterError(f"negative radius {radius}")
    rows = codebook(code)
    d = packed_weights(rows ^ pack_int(center.bits, rows.shape[1]))
    members = [Word(code.m, row_to_int(rows[int(i)])) for i in np.flatnonzero(d <= radius)]
    members.sort(key=lambda w: mobius(w).coeffs)
    return CandidateList(center, radius, tuple(members))


def _clamped_radius(m: int, shrink: float) -> int:
    raw = math.floor(2.0 ** (m - shrink) / 2.0)
    return max(1, min(raw, 1 << m))


def reconstruction_radius(m: int, c: float = 1.0) -> int:
    """floor(2^(m - c*sqrt(m)*log2(m)/2) / 2), clamped into [1, 2^m]."""
    if m < 0:
        raise ParameterError("negative m")
    if c <= 0:
        raise ParameterError(f"radius constant must be positive, got {c}")
    shrink = 0.0 if m <= 1 else c * math.sqrt(m) * math.log2(m) / 2.0
    return _clamped_radius(m, shrink)


def grid_radius(m: int) -> int:
    """floor(2^(m - sqrt(m)*log2(m)) / 2), clamped into [1, 2^m]."""
    if m < 0:
        raise ParameterError("negative m")
    shrink = 0.0 if m <= 1 else math.sqrt(m) * math.log2(m)
    return _clamped_radius(m, shrink)


def _pick_by_agreement(
    candidates: CandidateList, noisy: Word, rng: np.random.Generator
) -> Tuple[Word, int, bool]:
    """Best-agreeing list member (uniform over ties); falls back to the center
    when the list is empty."""
    if not candidates.members:
        return candidates.center, 0, True
    agreements = [noisy.n - w.distance(noisy) for w in candidates.members]
    best = max(agreements)
    tied = [i for i, a in enumerate(agreements) if a == best]
    pick = tied[0] if len(tied) == 1 else tied[int(rng.integers(len(tied)))]
    return candidates.members[pick], len(candidates.members), False


def rm_reconstruct(
    code: RmCode,
    noisy: Word,
    eps: float,
    c: float = 1.0,
    radius: Optional[int] = None,
    seed: SeedLike = None,
) -> ReconstructResult:
    """Bitwise-MAP center, then the best-agreeing codeword in the list around it."""
    rng = ensure_rng(seed)
    if radius is None:
        radius = reconstruction_radius(code.m, c)
    elif not 0 <= radius <= code.n:
        raise ParameterError(f"radius {radius} outside 0..{code.n}")
    center = bitwise_decode(code, noisy, eps, rng)
    candidates = list_within(code, center, radius)
    word, size, fallback = _pick_by_agreement(candidates, noisy, rng)
    return ReconstructResult(word=word, radius=radius, list_size=size, fallback=fallback)


def _grid_blocks(m: int, m_prime: int) -> List[List[int]]:
    """Split variables 1..m into m_prime contiguous blocks, larger blocks first."""
    base = m // m_prime
    extra = m % m_prime
    blocks = []
    start = 1
    for i in range(m_prime):
        size = base + (1 if i < extra else 0)
        blocks.append(list(range(start, start + size)))
        start += size
    return blocks


def rm_reconstruct_grid(
    code: RmCode,
    noisy: Word,
    eps: float,
    c: float = 1.0,
    c_prime: float = 1.0,
    seed: SeedLike = None,
) -> ReconstructResult:
    """Slice-wise reconstruction with a coordinate-majority merge.

    The variables are split into ceil(sqrt(m)/c) contiguous blocks.  For
    each block and each assignment to it, the restricted word is
    reconstructed on the smaller cube (degree capped at its dimension)
    and its bits are voted back onto the ambient coordinates they came
    from.  Coordinate majorities (fair coin on an even split) give the
    merged center, and a final list step picks the best-agreeing
    codeword within grid_radius.
    """
    if noisy.m != code.m:
        raise ParameterError(f"word has m={noisy.m}, code has m={code.m}")
    if c <= 0 or c_prime <= 0:
        raise ParameterError("grid constants must be positive")
    m = code.m
    if m < 1:
        raise ParameterError("grid reconstruction needs m >= 1")
    m_prime = math.ceil(math.sqrt(m) / c)
    if m_prime > m:
        raise ParameterError(
            f"grid would need {m_prime} blocks for {m} variables; increase c"
        )
    rng = ensure_rng(seed)
    votes = np.zeros(code.n, dtype=np.int64)
    for block in _grid_blocks(m, m_prime):
        rest = m - len(block)
        sub_code = RmCode(rest, min(code.r, rest))
        for assignment in range(1 << len(block)):
            fixed = {var: (assignment >> pos) & 1 for pos, var in enumerate(block)}
            coord_map = slice_coordinate_map(m, fixed)
            sliced = Word(rest, _gather_bits(noisy.bits, coord_map))
            result = rm_reconstruct(sub_code, sliced, eps, c=c_prime, seed=rng)
            for local, ambient in enumerate(coord_map):
                votes[ambient] += (result.word.bits >> local) & 1
    merged = 0
    for x in range(code.n):
        twice = 2 * int(votes[x])
        if twice > m_prime:
            merged |= 1 << x
        elif twice == m_prime and rng.integers(2):
            merged |= 1 << x
    center = Word(m, merged)
    radius = grid_radius(m)
    candidates = list_within(code, center, radius)
    word, size, fallback = _pick_by_agreement(candidates, noisy, rng)
    return ReconstructResult(word=word, radius=radius, list_size=size, fallback=fallback)


def _gather_bits(bits: int, coord_map: List[int]) -> int:
    out = 0
    for local, ambient in enumerate(coord_map):
        out |= ((bits >> ambient) & 1) << local
    return out
