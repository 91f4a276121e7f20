"""Binary-input symmetric channels as finite mixtures of crossover rates.

A channel is a list of (probability, eps) components.  Transmission
draws one component per coordinate, flips with that component's rate,
and reveals the drawn rate alongside the flipped bit, which is the
whole point of the mixture model: the decoder may weight coordinates
by their revealed reliability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from .errors import ParameterError
from .rm_core import Word
from .seeding import SeedLike, ensure_rng

__all__ = [
    "BmsChannel",
    "BmsObservation",
    "bsc",
    "bsc_transmit",
    "bms_transmit",
    "binary_entropy",
    "capacity",
    "quantize",
    "parse_channel",
    "format_channel",
    "noise_weights",
]

_PROB_TOL = 1e-12


@dataclass(frozen=True)
class BmsChannel:
    """Finite mixture of symmetric crossover rates: ((prob, eps), ...)."""

    components: Tuple[Tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise ParameterError("channel needs at least one component")
        total = 0.0
        for p, e in self.components:
            if p < 0.0:
                raise ParameterError(f"negative component probability {p}")
            if not 0.0 <= e <= 0.5:
                raise ParameterError(f"crossover rate {e} outside [0, 1/2]")
            total += p
        if abs(total - 1.0) > _PROB_TOL:
            raise ParameterError(f"component probabilities sum to {total}, not 1")


@dataclass(frozen=True)
class BmsObservation:
    """Received word plus the revealed crossover rate of each coordinate."""

    bits: Word
    eps: Tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.eps) != self.bits.n:
            raise ParameterError(
                f"observation carries {len(self.eps)} rates for {self.bits.n} coordinates"
            )
        for e in self.eps:
            if not 0.0 <= e <= 0.5:
                raise ParameterError(f"revealed rate {e} outside [0, 1/2]")


def bsc(eps: float) -> BmsChannel:
    """Single-component channel with crossover rate eps."""
    return BmsChannel(((1.0, float(eps)),))


def bsc_transmit(word: Word, eps: float, seed: SeedLike = None) -> Word:
    """Flip each coordinate independently with probability eps in (0, 1/2)."""
    if not 0.0 < eps < 0.5:
        raise ParameterError(f"transmission needs eps in (0, 1/2), got {eps}")
    rng = ensure_rng(seed)
    flips = rng.random(word.n) < eps
    noise = 0
    for i in np.flatnonzero(flips):
        noise |= 1 << int(i)
    return Word(word.m, word.bits ^ noise)


def bms_transmit(word: Word, channel: BmsChannel, seed: SeedLike = None) -> BmsObservation:
    """Per coordinate: draw a component, flip at its rate, reveal the rate.

    Consumes the generator in a fixed order (component picks for all
    coordinates, then flip uniforms), so a seed pins the whole draw.
    """
    rng = ensure_rng(seed)
    probs = np.array([p for p, _ in channel.components], dtype=float)
    rates = np.array([e for _, e in channel.components], dtype=float)
    probs = probs / probs.sum()
    picks = rng.choice(len(rates), size=word.n, p=probs)
    eps_per = rates[picks]
    flips = rng.random(word.n) < eps_per
    noise = 0
    for i in np.flatnonzero(flips):
        noise |= 1 << int(i)
    return BmsObservation(Word(word.m, word.bits ^ noise), tuple(float(e) for e in eps_per))


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"entropy argument {p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def capacity(channel: BmsChannel) -> float:
    """Mixture capacity: the revealed rate makes it an average of BSC capacities."""
    return sum(p * (1.0 - binary_entropy(e)) for p, e in channel.components)


def quantize(channel: BmsChannel, k: int) -> BmsChannel:
    """Coarsen rates to multiples of 1/k: components are grouped by rounding
    each rate down to a multiple of 1/k, and each group keeps its
    probability-weighted average rate, so the mean crossover rate is preserved.

    Rounding down (rather than to nearest) makes the k and 2k cell partitions
    nest, which is what forces capacity(quantize(ch, 2^t)) to be non-decreasing
    in t: coarsening then factors exactly through the finer quantization, and
    merging components never raises capacity because binary entropy is concave.
    """
    if k < 2:
        raise ParameterError(f"quantize needs k >= 2, got {k}")
    mass: Dict[int, float] = {}
    weighted: Dict[int, float] = {}
    for p, e in channel.components:
        if p == 0.0:
            continue
        j = math.floor(e * k)
        mass[j] = mass.get(j, 0.0) + p
        weighted[j] = weighted.get(j, 0.0) + p * e
    comps = tuple((mass[j], weighted[j] / mass[j]) for j in sorted(mass))
    return BmsChannel(comps)


def parse_channel(text: str) -> BmsChannel:
    """Parse "bsc:0.05" or "bms:0.4@0.02,0.6@0.11"."""
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ParameterError(f"channel spec {text!r} lacks a ':'")
    try:
        if kind == "bsc":
            return bsc(float(rest))
        if kind == "bms":
            comps: List[Tuple[float, float]] = []
            for part in rest.split(","):
                prob_text, at, eps_text = part.partition("@")
                if not at:
                    raise ParameterError(f"component {part!r} lacks '@'")
                comps.append((float(prob_text), float(eps_text)))
            return BmsChannel(tuple(comps))
    except ValueError as exc:
        raise ParameterError(f"bad channel spec {text!r}: {exc}") from None
    raise ParameterError(f"unknown channel kind {kind!r}")


def format_channel(channel: BmsChannel) -> str:
    if len(channel.components) == 1:
        return f"bsc:{channel.components[0][1]:g}"
    return "bms:" + ",".join(f"{p:g}@{e:g}" for p, e in channel.components)


def noise_weights(num_coords: int, eps: float) -> np.ndarray:
    """Probability of every flip pattern on num_coords independent coordinates,
    indexed by the packed pattern int."""
    if num_coords < 0:
        raise ParameterError("negative coordinate count")
    if num_coords > 26:
        raise ParameterError(f"pattern table over {num_coords} coordinates is too large")
    if not 0.0 <= eps <= 0.5:
        raise ParameterError(f"crossover rate {eps} outside [0, 1/2]")
    idx = np.arange(1 << num_coords, dtype=np.uint64)
    pc = np.bitwise_count(idx).astype(np.int64)
    return (eps ** pc) * ((1.0 - eps) ** (num_coords - pc))
