"""Subspace sunflowers and majority boosting of bitwise decoders.

A sunflower in F2^m_over is a family of m_mid-dimensional subspaces
(petals) that pairwise intersect in one fixed m_under-dimensional
kernel.  Restricting a noisy word to each petal gives almost
independent looks at the same coordinate-0 bit, so a majority vote
over per-petal decodings drives the error rate down geometrically in
the petal count.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Set, Tuple

from .decoders import BitDecision, exit_bit_map
from .errors import FeasibilityError, ParameterError
from .rm_core import RmCode, Subspace, Word, gf2_rank, gf2_span, restrict_to_subspace
from .seeding import SeedLike, ensure_rng

__all__ = [
    "Sunflower",
    "build_sunflower",
    "verify_sunflower",
    "boost_decode_bit",
    "boost_schedule_decode",
    "l2_boost_bound",
]

BaseDecoder = Callable[[RmCode, Word, float, SeedLike], BitDecision]


@dataclass(frozen=True)
class Sunflower:
    """Petals of dimension m_mid in F2^m_over sharing an m_under-dim kernel."""

    m_under: int
    m_mid: int
    m_over: int
    kernel: Subspace
    petals: Tuple[Subspace, ...]

    @property
    def size(self) -> int:
        return len(self.petals)


def target_petal_count(m_under: int, m_mid: int, m_over: int) -> int:
    """2^(m_over + m_under + 1 - 2*m_mid), the guaranteed constructible size."""
    if not 0 <= m_under < m_mid < m_over:
        raise ParameterError(
            f"need 0 <= m_under < m_mid < m_over, got ({m_under}, {m_mid}, {m_over})"
        )
    exponent = m_over + m_under + 1 - 2 * m_mid
    if exponent < 0:
        raise ParameterError(
            f"dimensions ({m_under}, {m_mid}, {m_over}) admit no petals: "
            f"exponent {exponent} is negative"
        )
    return 1 << exponent


@lru_cache(maxsize=None)
def build_sunflower(m_under: int, m_mid: int, m_over: int) -> Sunflower:
    """Greedy construction reaching the full guaranteed petal count.

    The kernel is the span of the first m_under axes.  Each petal starts
    from the kernel and repeatedly adjoins the smallest point outside
    every pairwise sumset with the petals built so far (its own included,
    which keeps the new point off the current petal)."""
    count = target_petal_count(m_under, m_mid, m_over)
    kernel_basis = tuple(1 << j for j in range(m_under))
    petals: List[Subspace] = []
    petal_points: List[Set[int]] = []
    for _ in range(count):
        basis = list(kernel_basis)
        points = set(gf2_span(basis))
        while len(basis) < m_mid:
            forbidden: Set[int] = set()
            for other in petal_points:
                forbidden.update(a ^ c for a in other for c in points)
            forbidden.update(a ^ c for a in points for c in points)
            pick = -1
            for x in range(1, 1 << m_over):
                if x not in forbidden:
                    pick = x
                    break
            if pick < 0:
                raise FeasibilityError(
                    f"greedy petal extension stalled at ({m_under}, {m_mid}, {m_over})"
                )
            basis.append(pick)
            points = set(gf2_span(basis))
        petals.append(Subspace(m_over, tuple(basis)))
        petal_points.append(points)
    kernel = Subspace(m_over, kernel_basis)
    return Sunflower(m_under, m_mid, m_over, kernel, tuple(petals))


def verify_sunflower(sf: Sunflower) -> bool:
    """Check the defining properties: petal dimensions, kernel containment,
    and pairwise intersections equal to the kernel (by rank counting)."""
    if sf.kernel.ambient_m != sf.m_over or sf.kernel.dim != sf.m_under:
        return False
    for petal in sf.petals:
        if petal.ambient_m != sf.m_over or petal.dim != sf.m_mid:
            return False
        for v in sf.kernel.basis:
            if not petal.contains(v):
                return False
    want = 2 * sf.m_mid - sf.m_under
    for i in range(len(sf.petals)):
        for j in range(i + 1, len(sf.petals)):
            joined = sf.petals[i].basis + sf.petals[j].basis
            if gf2_rank(joined) != want:
                return False
    return True


def boost_decode_bit(
    noisy: Word,
    m_under: int,
    m_mid: int,
    r: int,
    eps: float,
    b: Optional[int] = None,
    base: Optional[BaseDecoder] = None,
    seed: SeedLike = None,
) -> BitDecision:
    """Majority vote of a base bit decoder over the first b sunflower petals.

    The base decoder defaults to exit_bit_map on RM(m_mid, r).  Petals are
    decoded in construction order and share the caller's generator, so a
    seed pins every tie coin; the final vote breaks even splits fairly.
    """
    sf = build_sunflower(m_under, m_mid, noisy.m)
    if b is None:
        b = sf.size
    if not 1 <= b <= sf.size:
        raise ParameterError(f"petal count {b} outside 1..{sf.size}")
    rng = ensure_rng(seed)
    code = RmCode(m_mid, r)
    decoder = base if base is not None else exit_bit_map
    ones = 0
    for i in range(b):
        look = restrict_to_subspace(noisy, sf.petals[i])
        ones += decoder(code, look, eps, rng).value
    if 2 * ones > b:
        return BitDecision(1, False)
    if 2 * ones < b:
        return BitDecision(0, False)
    return BitDecision(int(rng.integers(2)), True)


def boost_schedule_decode(
    noisy: Word,
    m_base: int,
    r: int,
    k: int,
    gap: int,
    rounds: int,
    eps: float,
    b: Optional[int] = None,
    seed: SeedLike = None,
) -> BitDecision:
    """Stacked boosting: round j votes over petals of dimension
    m_base + (j-1)*(k+gap) inside an ambient larger by k+gap, and decodes
    each petal with the previous round (round 0 is plain exit_bit_map)."""
    if rounds < 1:
        raise ParameterError(f"need at least one round, got {rounds}")
    if k < 1 or gap < 0:
        raise ParameterError(f"need k >= 1 and gap >= 0, got k={k}, gap={gap}")
    step = k + gap
    if noisy.m != m_base + rounds * step:
        raise ParameterError(
            f"word has m={noisy.m}, schedule expects {m_base + rounds * step}"
        )
    rng = ensure_rng(seed)
    mid = m_base + (rounds - 1) * step
    if rounds == 1:
        return boost_decode_bit(noisy, mid - k, mid, r, eps, b=b, seed=rng)

    def previous(code: RmCode, look: Word, e: float, s: SeedLike) -> BitDecision:
        return boost_schedule_decode(look, m_base, r, k, gap, rounds - 1, e, b=b, seed=s)

    return boost_decode_bit(noisy, mid - k, mid, r, eps, b=b, base=previous, seed=rng)


def l2_boost_bound(p_e: float, k: int) -> float:
    """Chebyshev-style bound 2^(2-k) / (1/2 - p_e)^2 on the majority's error
    after k petals with per-petal error p_e and pairwise independence."""
    if not 0.0 <= p_e < 0.5:
        raise ParameterError(f"per-petal error {p_e} outside [0, 1/2)")
    if k < 1:
        raise ParameterError(f"need k >= 1, got {k}")
    return 2.0 ** (2 - k) / (0.5 - p_e) ** 2
