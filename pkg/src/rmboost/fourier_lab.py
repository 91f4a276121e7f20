"""Biased Fourier-Walsh analysis of exhaustive decoding-error tables.

Functions of a noise pattern z under the product measure with flip
rate eps expand in the orthonormal characters

    X_S(z) = (eps/(1-eps))^(|S|/2) * (-(1-eps)/eps)^|{x in S : z_x = 1}|

indexed by subsets S of the coordinate points.  A subset is packed as
an int mask (bit x = membership of point x); coefficient arrays are
indexed by that mask.  The transform is a per-axis weighted butterfly,
so the full table of coefficients costs O(N log N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .channels import noise_weights
from .decoders import conditional_table, q_table
from .errors import FeasibilityError, ParameterError
from .rm_core import RmCode, Word, apply_point_map, gf2_rank, invertible_matrices
from .seeding import SeedLike, ensure_rng

__all__ = [
    "FourierTable",
    "chi",
    "biased_inner",
    "transform",
    "inverse_transform",
    "restriction_identity_check",
    "orbit_symmetry_check",
    "subset_dim",
    "subset_orbit",
    "l4_orbit_moment",
    "l4_bound",
    "orbit_containment_probability",
]


def _check_eps(eps: float) -> None:
    if not 0.0 < eps < 0.5:
        raise ParameterError(f"biased analysis needs eps in (0, 1/2), got {eps}")


@dataclass(frozen=True, eq=False)
class FourierTable:
    """Character coefficients of a function of noise patterns on 2^m_under points."""

    m_under: int
    eps: float
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        _check_eps(self.eps)
        if self.m_under < 0:
            raise ParameterError("negative m_under")
        want = 1 << (1 << self.m_under)
        if len(self.coeffs) != want:
            raise ParameterError(
                f"coefficient table for m_under={self.m_under} needs {want} entries, "
                f"got {len(self.coeffs)}"
            )


def chi(S: int, z: Word, eps: float) -> float:
    """The character X_S evaluated at pattern z."""
    _check_eps(eps)
    if not 0 <= S < (1 << z.n):
        raise ParameterError(f"subset mask {S} outside the {z.n}-point cube")
    size = S.bit_count()
    ones = (S & z.bits).bit_count()
    t = eps / (1.0 - eps)
    return t ** (size / 2.0) * (-(1.0 - eps) / eps) ** ones


def chi_row(S: int, num_points: int, eps: float) -> np.ndarray:
    """X_S over every pattern of num_points coordinates, indexed by pattern int."""
    _check_eps(eps)
    if num_points > 16:
        raise FeasibilityError(f"character table over {num_points} points is too large")
    if not 0 <= S < (1 << num_points):
        raise ParameterError(f"subset mask {S} outside the {num_points}-point cube")
    zs = np.arange(1 << num_points, dtype=np.uint64)
    ones = np.bitwise_count(zs & np.uint64(S)).astype(np.int64)
    t = eps / (1.0 - eps)
    return t ** (S.bit_count() / 2.0) * np.power(-(1.0 - eps) / eps, ones)


def biased_inner(G: np.ndarray, H: np.ndarray, eps: float) -> float:
    """Inner product sum_z w(z) G(z) H(z) under the flip-rate product measure."""
    g = np.asarray(G, dtype=float)
    h = np.asarray(H, dtype=float)
    if g.shape != h.shape or g.ndim != 1:
        raise ParameterError("inner product needs two equal-length tables")
    size = g.size
    if size & (size - 1) or size == 0:
        raise ParameterError(f"table length {size} is not a power of two")
    num = size.bit_length() - 1
    return float(np.dot(noise_weights(num, eps), g * h))


def _table_m_under(length: int) -> int:
    """Recover m_under from a table of length 2^(2^m_under)."""
    if length < 2 or length & (length - 1):
        raise ParameterError(f"table length {length} is not a power of two")
    num_points = length.bit_length() - 1
    if num_points & (num_points - 1):
        raise ParameterError(f"table length {length} is not of the form 2^(2^k)")
    if num_points > 16:
        raise FeasibilityError(f"transform over {num_points} points is too large")
    return num_points.bit_length() - 1


def transform(table: np.ndarray, eps: float) -> FourierTable:
    """Coefficient of every character, via the weighted butterfly.

    Axis x maps (a, b) = (value at z_x=0, at z_x=1) to
    ((1-eps)a + eps*b, sqrt(eps(1-eps))*(a-b)); afterwards index bit x
    of the array means x is in S rather than z_x = 1.
    """
    _check_eps(eps)
    a = np.asarray(table, dtype=float).copy()
    m_under = _table_m_under(a.size)
    num_points = 1 << m_under
    s = math.sqrt(eps * (1.0 - eps))
    for x in range(num_points):
        b = a.reshape(-1, 2, 1 << x)
        lo = b[:, 0, :].copy()
        hi = b[:, 1, :].copy()
        b[:, 0, :] = (1.0 - eps) * lo + eps * hi
        b[:, 1, :] = s * (lo - hi)
    return FourierTable(m_under, eps, a)


def inverse_transform(ft: FourierTable) -> np.ndarray:
    """Rebuild the pattern table from its coefficients (exact inverse butterfly)."""
    a = np.asarray(ft.coeffs, dtype=float).copy()
    eps = ft.eps
    rt = math.sqrt(eps / (1.0 - eps))
    for x in range(1 << ft.m_under):
        b = a.reshape(-1, 2, 1 << x)
        c0 = b[:, 0, :].copy()
        c1 = b[:, 1, :].copy()
        b[:, 0, :] = c0 + rt * c1
        b[:, 1, :] = c0 - c1 / rt
    return a


def restriction_identity_check(code: RmCode, m_under: int, eps: float) -> float:
    """Max discrepancy between the conditional error table on the first
    2^m_under coordinates and the same table rebuilt from the embedded
    low-support coefficients of the full table."""
    if not 0 <= m_under <= code.m:
        raise ParameterError(f"m_under must lie in 0..{code.m}, got {m_under}")
    full = transform(q_table(code, eps), eps)
    low_masks = 1 << (1 << m_under)
    embedded = FourierTable(m_under, eps, full.coeffs[:low_masks].copy())
    rebuilt = inverse_transform(embedded)
    direct = conditional_table(code, m_under, eps)
    return float(np.max(np.abs(rebuilt - direct)))


def _map_mask(S: int, cols: Tuple[int, ...]) -> int:
    out = 0
    x = 0
    while S:
        if S & 1:
            out |= 1 << apply_point_map(cols, x)
        S >>= 1
        x += 1
    return out


def orbit_symmetry_check(code: RmCode, eps: float) -> float:
    """Max over subsets S and invertible maps T of |coeff[S] - coeff[T(S)]|
    for the exhaustive error table's spectrum."""
    if code.m > 3:
        raise FeasibilityError(f"orbit check enumerates GL({code.m}, F2); m <= 3 only")
    coeffs = transform(q_table(code, eps), eps).coeffs
    worst = 0.0
    for cols in invertible_matrices(code.m):
        moved = np.array([coeffs[_map_mask(S, cols)] for S in range(len(coeffs))])
        worst = max(worst, float(np.max(np.abs(coeffs - moved))))
    return worst


def subset_dim(S: int) -> int:
    """Dimension of the span of the points in S (the zero point adds nothing)."""
    if S < 0:
        raise ParameterError("negative subset mask")
    pts = []
    x = 0
    while S:
        if S & 1:
            pts.append(x)
        S >>= 1
        x += 1
    return gf2_rank(pts)


def subset_orbit(S: int, m: int) -> Tuple[int, ...]:
    """All linear images of the point set S, sorted; m <= 3."""
    if m > 3:
        raise FeasibilityError(f"orbit enumeration needs GL({m}, F2); m <= 3 only")
    if not 0 <= S < (1 << (1 << m)):
        raise ParameterError(f"subset mask {S} outside the {1 << m}-point cube")
    return tuple(sorted({_map_mask(S, cols) for cols in invertible_matrices(m)}))


def l4_orbit_moment(S: int, eps: float, m: int) -> float:
    """Exact fourth moment of the orbit character sum X = sum over the linear
    orbit of S of X_S', under the biased measure on all patterns."""
    _check_eps(eps)
    orbit = subset_orbit(S, m)
    num_points = 1 << m
    X = np.zeros(1 << num_points)
    for Sp in orbit:
        X += chi_row(Sp, num_points, eps)
    w = noise_weights(num_points, eps)
    return float(np.dot(w, X ** 4))


def l4_bound(d: int, m: int, eps: float) -> float:
    """2^(2dm + 8d^2) * (1/(eps(1-eps)))^(2^d); inf when it overflows a float."""
    _check_eps(eps)
    if d < 0 or m < 0:
        raise ParameterError("negative dimension")
    log2_val = 2 * d * m + 8 * d * d + (1 << d) * math.log2(1.0 / (eps * (1.0 - eps)))
    if log2_val > 1023:
        return math.inf
    return 2.0 ** log2_val


def _random_invertible(m: int, rng: np.random.Generator) -> Tuple[int, ...]:
    while True:
        cols = tuple(int(v) for v in rng.integers(0, 1 << m, size=m))
        if gf2_rank(cols) == m:
            return cols


def orbit_containment_probability(
    S: int,
    m: int,
    m_under: int,
    samples: int,
    seed: SeedLike = None,
) -> float:
    """Monte Carlo estimate of P[pi(S) lands in the embedded F2^m_under] over
    uniformly random invertible pi."""
    if m > 8:
        raise FeasibilityError(f"containment sampling capped at m <= 8, got m={m}")
    if not 0 <= m_under <= m:
        raise ParameterError(f"m_under must lie in 0..{m}, got {m_under}")
    if not 0 <= S < (1 << (1 << m)):
        raise ParameterError(f"subset mask {S} outside the {1 << m}-point cube")
    if samples < 1:
        raise ParameterError("need at least one sample")
    rng = ensure_rng(seed)
    pts = []
    x = 0
    rest = S
    while rest:
        if rest & 1 and x != 0:
            pts.append(x)
        rest >>= 1
        x += 1
    point_limit = 1 << m_under
    hits = 0
    for _ in range(samples):
        cols = _random_invertible(m, rng)
        if all(apply_point_map(cols, p) < point_limit for p in pts):
            hits += 1
    return hits / samples
