"""Reed-Muller code algebra over F2.

Every length-2^m bit vector is packed LSB-first into a Python int:
coordinate i of a Word is bit i of ``bits``.  The evaluation point
behind coordinate i assigns variable x_j the value of bit (j-1) of i,
so x_1 varies fastest.  Coefficient vectors use the same packing with
one bit per monomial, indexed by the subset mask of its variables.

Evaluating a multilinear polynomial at every point is a subset-XOR
(zeta) transform over F2, which is its own inverse; ``encode`` and
``mobius`` are therefore the same butterfly run on different data.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from .errors import FeasibilityError, ParameterError
from .seeding import SeedLike, ensure_rng

__all__ = [
    "Word",
    "CoeffVector",
    "RmCode",
    "Subspace",
    "binom_le",
    "monomials",
    "subset_xor_transform",
    "encode",
    "mobius",
    "is_codeword",
    "random_codeword",
    "min_distance",
    "restrict_to_subspace",
    "restrict_to_slice",
    "apply_linear",
    "invertible_matrices",
    "gf2_basis",
    "gf2_rank",
    "gf2_span",
    "codebook",
    "codebook_bits",
    "pack_int",
    "packed_word",
    "packed_weights",
    "row_to_int",
    "enumeration_guard",
]

_DIM_GUARD_DEFAULT = 24
_HEX_DIGITS = "0123456789abcdef"


def enumeration_guard() -> int:
    """Codebook dimension ceiling; RMBOOST_GUARD_DIM overrides the default of 24."""
    raw = os.environ.get("RMBOOST_GUARD_DIM")
    if raw is None:
        return _DIM_GUARD_DEFAULT
    try:
        return int(raw)
    except ValueError:
        raise ParameterError(f"RMBOOST_GUARD_DIM is not an integer: {raw!r}") from None


def binom_le(m: int, r: int) -> int:
    """Number of multilinear monomials of degree at most r in m variables."""
    if m < 0 or r < 0 or r > m:
        raise ParameterError(f"binom_le needs 0 <= r <= m, got m={m}, r={r}")
    return sum(comb(m, j) for j in range(r + 1))


# ---------------------------------------------------------------------------
# GF(2) linear algebra on int-packed vectors


def gf2_basis(vectors: Iterable[int]) -> List[int]:
    """Row-reduce to an independent basis (ints as bit vectors)."""
    basis: List[int] = []
    for v in vectors:
        v = int(v)
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return basis


def gf2_rank(vectors: Iterable[int]) -> int:
    return len(gf2_basis(vectors))


def gf2_span(basis: Sequence[int]) -> List[int]:
    """All 2^k combinations; entry i is the XOR of basis[j] over the set bits j of i."""
    points = [0]
    for b in basis:
        points = points + [p ^ int(b) for p in points]
    return points


def _in_span(x: int, reduced_basis: Sequence[int]) -> bool:
    for b in reduced_basis:
        x = min(x, x ^ b)
    return x == 0


# ---------------------------------------------------------------------------
# Core dataclasses


@dataclass(frozen=True)
class Word:
    """Bit vector over the 2^m points of F2^m, packed LSB-first into an int."""

    m: int
    bits: int

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ParameterError(f"negative variable count m={self.m}")
        if not 0 <= self.bits < (1 << self.n):
            raise ParameterError(f"bits out of range for m={self.m}")

    @property
    def n(self) -> int:
        return 1 << self.m

    def bit(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise ParameterError(f"coordinate {i} out of range for n={self.n}")
        return (self.bits >> i) & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def distance(self, other: "Word") -> int:
        if other.m != self.m:
            raise ParameterError("distance between words of different length")
        return (self.bits ^ other.bits).bit_count()

    def __xor__(self, other: "Word") -> "Word":
        if other.m != self.m:
            raise ParameterError("xor between words of different length")
        return Word(self.m, self.bits ^ other.bits)

    def to_array(self) -> np.ndarray:
        return np.array([(self.bits >> i) & 1 for i in range(self.n)], dtype=np.uint8)

    @classmethod
    def from_bits(cls, m: int, values: Iterable[int]) -> "Word":
        bits = 0
        count = 0
        for i, v in enumerate(values):
            if v not in (0, 1):
                raise ParameterError(f"bit value {v!r} is not 0 or 1")
            bits |= int(v) << i
            count += 1
        if count != (1 << m):
            raise ParameterError(f"expected {1 << m} bits, got {count}")
        return cls(m, bits)

    def to_hex(self) -> str:
        """Little-endian nibbles: coordinate 0 lives in the first digit."""
        ndig = ((self.n - 1) >> 2) + 1
        return "".join(_HEX_DIGITS[(self.bits >> (4 * k)) & 0xF] for k in range(ndig))

    @classmethod
    def from_hex(cls, m: int, text: str) -> "Word":
        ndig = (((1 << m) - 1) >> 2) + 1
        if len(text) != ndig:
            raise ParameterError(
                f"hex word for m={m} needs {ndig} digits, got {len(text)}"
            )
        bits = 0
        for k, ch in enumerate(text.lower()):
            try:
                bits |= int(ch, 16) << (4 * k)
            except ValueError:
                raise ParameterError(f"bad hex digit {ch!r}") from None
        return cls(m, bits)


@dataclass(frozen=True)
class CoeffVector:
    """Multilinear polynomial over F2; bit S of ``coeffs`` is the monomial prod_{j in S} x_j."""

    m: int
    coeffs: int

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ParameterError(f"negative variable count m={self.m}")
        if not 0 <= self.coeffs < (1 << (1 << self.m)):
            raise ParameterError(f"coefficients out of range for m={self.m}")

    def degree(self) -> int:
        """Largest monomial degree present; -1 for the zero polynomial."""
        deg = -1
        c = self.coeffs
        while c:
            s = c & -c
            deg = max(deg, (s.bit_length() - 1).bit_count())
            c ^= s
        return deg

    def support(self) -> List[int]:
        """Set-mask of every monomial present, ordered by (degree, mask)."""
        masks = [s for s in range(1 << self.m) if (self.coeffs >> s) & 1]
        masks.sort(key=lambda s: (s.bit_count(), s))
        return masks

    def to_hex(self) -> str:
        ndig = (((1 << self.m) - 1) >> 2) + 1
        return "".join(_HEX_DIGITS[(self.coeffs >> (4 * k)) & 0xF] for k in range(ndig))


@dataclass(frozen=True)
class RmCode:
    """The Reed-Muller code of m-variable polynomials with degree at most r."""

    m: int
    r: int

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ParameterError(f"negative variable count m={self.m}")
        if not 0 <= self.r <= self.m:
            raise ParameterError(f"degree bound must satisfy 0 <= r <= m, got r={self.r}, m={self.m}")

    @property
    def n(self) -> int:
        return 1 << self.m

    @property
    def dim(self) -> int:
        return binom_le(self.m, self.r)

    @property
    def rate(self) -> float:
        return self.dim / self.n


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of F2^ambient_m given by an independent basis of point ints."""

    ambient_m: int
    basis: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.ambient_m < 0:
            raise ParameterError("negative ambient dimension")
        for v in self.basis:
            if not 0 <= v < (1 << self.ambient_m):
                raise ParameterError(f"basis vector {v} outside F2^{self.ambient_m}")
        if gf2_rank(self.basis) != len(self.basis):
            raise ParameterError("dependent basis")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def points(self) -> List[int]:
        """Every point of the subspace; entry i is the combination coded by i's bits."""
        return gf2_span(self.basis)

    def contains(self, x: int) -> bool:
        return _in_span(int(x), gf2_basis(self.basis))


# ---------------------------------------------------------------------------
# Evaluation / interpolation


@lru_cache(maxsize=None)
def _axis_masks(m: int) -> Tuple[int, ...]:
    """For each variable axis j: the mask of coordinates whose index bit j is 0."""
    n = 1 << m
    masks = []
    for j in range(m):
        block = (1 << (1 << j)) - 1
        period = 1 << (j + 1)
        mask = 0
        for base in range(0, n, period):
            mask |= block << base
        masks.append(mask)
    return tuple(masks)


def subset_xor_transform(bits: int, m: int) -> int:
    """Butterfly computing, at every position, the XOR over its subset of positions.

    Self-inverse over F2, so it serves as both evaluation and interpolation.
    """
    for j, mask in enumerate(_axis_masks(m)):
        bits ^= (bits & mask) << (1 << j)
    return bits


@lru_cache(maxsize=None)
def monomials(m: int, r: int) -> Tuple[int, ...]:
    """Subset masks of the monomials with degree <= r, sorted by (degree, mask)."""
    if m < 0 or not 0 <= r <= m:
        raise ParameterError(f"monomials needs 0 <= r <= m, got m={m}, r={r}")
    masks = [s for s in range(1 << m) if s.bit_count() <= r]
    masks.sort(key=lambda s: (s.bit_count(), s))
    return tuple(masks)


@lru_cache(maxsize=None)
def _high_degree_mask(m: int, r: int) -> int:
    mask = 0
    for s in range(1 << m):
        if s.bit_count() > r:
            mask |= 1 << s
    return mask


def encode(code: RmCode, message: CoeffVector) -> Word:
    """Evaluate the message polynomial at every point of F2^m."""
    if message.m != code.m:
        raise ParameterError(f"message has m={message.m}, code has m={code.m}")
    if message.coeffs & _high_degree_mask(code.m, code.r):
        raise ParameterError(f"message degree exceeds the bound r={code.r}")
    return Word(code.m, subset_xor_transform(message.coeffs, code.m))


def mobius(word: Word) -> CoeffVector:
    """Interpolate the unique multilinear polynomial through the word's values."""
    return CoeffVector(word.m, subset_xor_transform(word.bits, word.m))


def is_codeword(code: RmCode, word: Word) -> bool:
    if word.m != code.m:
        raise ParameterError(f"word has m={word.m}, code has m={code.m}")
    interp = subset_xor_transform(word.bits, code.m)
    return interp & _high_degree_mask(code.m, code.r) == 0


def random_codeword(code: RmCode, seed: SeedLike = None) -> Word:
    """Uniform codeword: one fair coin per admissible monomial, then evaluate."""
    rng = ensure_rng(seed)
    coeffs = 0
    for s in monomials(code.m, code.r):
        if rng.integers(2):
            coeffs |= 1 << s
    return Word(code.m, subset_xor_transform(coeffs, code.m))


def min_distance(code: RmCode) -> int:
    """Exactly 2^(m-r): each degree unit halves the guaranteed support."""
    return 1 << (code.m - code.r)


# ---------------------------------------------------------------------------
# Restrictions and coordinate maps


def restrict_to_subspace(word: Word, sub: Subspace) -> Word:
    """Read the word along a subspace; output coordinate i is the point whose
    basis combination is coded by the bits of i."""
    if sub.ambient_m != word.m:
        raise ParameterError(f"subspace lives in F2^{sub.ambient_m}, word in F2^{word.m}")
    out = 0
    for i, p in enumerate(gf2_span(sub.basis)):
        out |= ((word.bits >> p) & 1) << i
    return Word(sub.dim, out)


def restrict_to_slice(word: Word, fixed: Mapping[int, int]) -> Word:
    """Pin the 1-based variables in ``fixed`` to bit values; the free variables
    keep their relative order in the smaller cube."""
    m = word.m
    base = 0
    for var, val in fixed.items():
        if not 1 <= var <= m:
            raise ParameterError(f"variable index {var} outside 1..{m}")
        if val not in (0, 1):
            raise ParameterError(f"fixed value for x_{var} must be 0 or 1")
        base |= int(val) << (var - 1)
    free = [j for j in range(1, m + 1) if j not in fixed]
    out = 0
    for i in range(1 << len(free)):
        idx = base
        for pos, j in enumerate(free):
            idx |= ((i >> pos) & 1) << (j - 1)
        out |= ((word.bits >> idx) & 1) << i
    return Word(len(free), out)


def slice_coordinate_map(m: int, fixed: Mapping[int, int]) -> List[int]:
    """Ambient coordinate behind each output coordinate of restrict_to_slice."""
    base = 0
    for var, val in fixed.items():
        if not 1 <= var <= m:
            raise ParameterError(f"variable index {var} outside 1..{m}")
        if val not in (0, 1):
            raise ParameterError(f"fixed value for x_{var} must be 0 or 1")
        base |= int(val) << (var - 1)
    free = [j for j in range(1, m + 1) if j not in fixed]
    out = []
    for i in range(1 << len(free)):
        idx = base
        for pos, j in enumerate(free):
            idx |= ((i >> pos) & 1) << (j - 1)
        out.append(idx)
    return out


def apply_linear(word: Word, cols: Sequence[int]) -> Word:
    """Precompose with the invertible map sending e_{j+1} to point cols[j]:
    output coordinate x reads the input at T(x)."""
    m = word.m
    if len(cols) != m:
        raise ParameterError(f"need {m} columns, got {len(cols)}")
    for v in cols:
        if not 0 <= v < (1 << m):
            raise ParameterError(f"column {v} outside F2^{m}")
    if gf2_rank(cols) != m:
        raise ParameterError("singular linear map")
    images = gf2_span(cols)
    out = 0
    for x in range(1 << m):
        out |= ((word.bits >> images[x]) & 1) << x
    return Word(m, out)


@lru_cache(maxsize=None)
def invertible_matrices(m: int) -> Tuple[Tuple[int, ...], ...]:
    """Every invertible m-by-m matrix over F2, as a tuple of column ints.

    Counts grow like ~2^(m^2), so this is only meant for m <= 4.
    """
    if m < 0:
        raise ParameterError("negative dimension")
    if m > 4:
        raise FeasibilityError(f"refusing to enumerate GL({m}, F2)")
    out: List[Tuple[int, ...]] = []

    def grow(cols: List[int]) -> None:
        if len(cols) == m:
            out.append(tuple(cols))
            return
        reduced = gf2_basis(cols)
        for v in range(1, 1 << m):
            if not _in_span(v, reduced):
                grow(cols + [v])

    grow([])
    return tuple(out)


def apply_point_map(cols: Sequence[int], x: int) -> int:
    """Image of point x under the linear map with the given columns."""
    y = 0
    j = 0
    while x:
        if x & 1:
            y ^= cols[j]
        x >>= 1
        j += 1
    return y


# ---------------------------------------------------------------------------
# Packed codebook enumeration


def pack_int(value: int, width: int) -> np.ndarray:
    """Split a bit-packed int into ``width`` little-endian uint64 lanes."""
    out = np.zeros(width, dtype=np.uint64)
    for w in range(width):
        out[w] = (value >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return out


def packed_word(word: Word, width: int) -> np.ndarray:
    return pack_int(word.bits, width)


def row_to_int(row: np.ndarray) -> int:
    value = 0
    for w in range(row.shape[0]):
        value |= int(row[w]) << (64 * w)
    return value


def packed_weights(rows: np.ndarray) -> np.ndarray:
    """Hamming weight of each packed row."""
    return np.bitwise_count(rows).sum(axis=-1).astype(np.int64)


@lru_cache(maxsize=None)
def codebook(code: RmCode) -> np.ndarray:
    """All 2^dim codewords as packed uint64 rows.

    Row index i is the message whose bit j multiplies monomials(m, r)[j].
    Refuses dimensions above enumeration_guard().
    """
    if code.dim > enumeration_guard():
        raise FeasibilityError(
            f"codebook for RM({code.m},{code.r}) has dimension {code.dim}, "
            f"above the guard {enumeration_guard()}"
        )
    width = ((code.n - 1) >> 6) + 1
    gens = [subset_xor_transform(1 << s, code.m) for s in monomials(code.m, code.r)]
    rows = np.zeros((1, width), dtype=np.uint64)
    for g in gens:
        rows = np.concatenate([rows, rows ^ pack_int(g, width)], axis=0)
    rows.setflags(write=False)
    return rows


_BIT_MATRIX_BYTES = 1 << 26


@lru_cache(maxsize=None)
def codebook_bits(code: RmCode) -> np.ndarray:
    """Unpacked (2^dim, n) uint8 codeword matrix, for per-coordinate statistics."""
    if (1 << code.dim) * code.n > _BIT_MATRIX_BYTES:
        raise FeasibilityError(
            f"unpacked codebook for RM({code.m},{code.r}) exceeds {_BIT_MATRIX_BYTES} bytes"
        )
    rows = codebook(code)
    n = code.n
    out = np.zeros((rows.shape[0], n), dtype=np.uint8)
    for i in range(n):
        out[:, i] = (rows[:, i >> 6] >> np.uint64(i & 63)) & np.uint64(1)
    out.setflags(write=False)
    return out
