"""Closed-form error and counting bounds, usable standalone and as test oracles.

Quantities that can be astronomically large are computed and returned
in the log2 domain end to end.  Where a formula mixes logarithm bases,
the unmarked "log" is read as the natural log (the same convention the
neighboring explicit "ln" constants use); log2 appears only where the
exponent structure demands it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List

from .channels import BmsChannel, capacity
from .errors import ParameterError
from .rm_core import RmCode, binom_le

__all__ = [
    "BoundReport",
    "base_case_margin",
    "boost_step_bound",
    "conditional_tail_bound",
    "weight_enum_log_bound",
    "bhattacharyya",
    "list_error_log_bound",
    "rate",
    "capacity_gap",
    "evaluate",
    "BOUND_NAMES",
]


@dataclass(frozen=True)
class BoundReport:
    name: str
    inputs: Dict[str, float]
    value: float
    log2_domain: bool = False


def _check_eps(eps: float) -> None:
    if not 0.0 < eps < 0.5:
        raise ParameterError(f"bound needs eps in (0, 1/2), got {eps}")


def base_case_margin(rate_gap: float) -> float:
    """(2^(gap/2) - 1) / 2: how far below 1/2 the exit error of any symmetric
    code sits when its rate is ``rate_gap`` below capacity."""
    if not 0.0 < rate_gap <= 1.0:
        raise ParameterError(f"rate gap must lie in (0, 1], got {rate_gap}")
    return (2.0 ** (rate_gap / 2.0) - 1.0) / 2.0


def conditional_tail_bound(p_e: float, k: int, eps: float) -> float:
    """Two-term tail bound 18*p^(5/4) + 9p * (4*ln(64/(eps(1-eps))) / ln(1/p))^k
    on the probability that the conditional error reaches 1/3 after a
    k-dimension gain; zero error mass gives zero by convention."""
    _check_eps(eps)
    if k < 0:
        raise ParameterError(f"need k >= 0, got {k}")
    if p_e == 0.0:
        return 0.0
    if not 0.0 < p_e < 1.0:
        raise ParameterError(f"error probability {p_e} outside (0, 1)")
    first = 18.0 * p_e ** 1.25
    ratio = 4.0 * math.log(64.0 / (eps * (1.0 - eps))) / math.log(1.0 / p_e)
    return first + 9.0 * p_e * ratio ** k


def boost_step_bound(p_e: float, k: int, gap: int, eps: float) -> float:
    """Tail bound plus the majority-failure term (8/9)^(2^gap) for one
    boosting round with subspace gain k and dimension slack gap."""
    if not 0.0 < p_e < 1.0:
        raise ParameterError(f"error probability {p_e} outside (0, 1)")
    if gap < 0:
        raise ParameterError(f"need gap >= 0, got {gap}")
    return conditional_tail_bound(p_e, k, eps) + (8.0 / 9.0) ** (2.0 ** gap)


def weight_enum_log_bound(m: int, r: int, l: int) -> float:
    """log2 of the bound on codewords of RM(m, r) within distance 2^(m-l) of
    any fixed word: sum over j = l..r of
    17*m*(j-1)*(j+2) + 17*(j+2)*binom_le(m-(j-1), r-(j-1)).
    l = r+1 is the empty sum (count bound 1)."""
    if not 0 <= r <= m:
        raise ParameterError(f"need 0 <= r <= m, got r={r}, m={m}")
    if not 1 <= l <= r + 1:
        raise ParameterError(f"need 1 <= l <= r+1, got l={l}")
    total = 0
    for j in range(l, r + 1):
        total += 17 * m * (j - 1) * (j + 2) + 17 * (j + 2) * binom_le(m - (j - 1), r - (j - 1))
    return float(total)


def bhattacharyya(eps: float, disagreements: int) -> float:
    """(4*eps*(1-eps))^(d/2): the chance that d coin flips at rate eps favor a
    word disagreeing in d places, up to that classical bound."""
    _check_eps(eps)
    if disagreements < 0:
        raise ParameterError(f"negative disagreement count {disagreements}")
    return (4.0 * eps * (1.0 - eps)) ** (disagreements / 2.0)


def _log2_sum_exp(terms: List[float]) -> float:
    top = max(terms)
    if math.isinf(top):
        return top
    return top + math.log2(sum(2.0 ** (t - top) for t in terms))


def list_error_log_bound(m: int, r: int, eps: float, l_min: int) -> float:
    """log2 of sum over l = l_min..r of
    (4*eps*(1-eps))^(2^(m-l-2)) * 2^weight_enum_log_bound(m, r, l),
    the union bound on any far codeword beating the truth."""
    _check_eps(eps)
    if not 0 <= r <= m:
        raise ParameterError(f"need 0 <= r <= m, got r={r}, m={m}")
    if not 1 <= l_min <= r:
        raise ParameterError(f"need 1 <= l_min <= r, got l_min={l_min}")
    base = math.log2(4.0 * eps * (1.0 - eps))
    terms = []
    for l in range(l_min, r + 1):
        terms.append(2.0 ** (m - l - 2) * base + weight_enum_log_bound(m, r, l))
    return _log2_sum_exp(terms)


def rate(code: RmCode) -> float:
    return code.dim / code.n


def capacity_gap(code: RmCode, channel: BmsChannel) -> float:
    """capacity - rate; positive below capacity, negative in the converse regime."""
    return capacity(channel) - rate(code)


BOUND_NAMES = (
    "base_case_margin",
    "boost_step_bound",
    "conditional_tail_bound",
    "weight_enum_log_bound",
    "bhattacharyya",
    "list_error_log_bound",
)


def evaluate(name: str, **params: float) -> BoundReport:
    """Dispatch a named bound with keyword parameters, reporting its domain."""
    try:
        if name == "base_case_margin":
            value = base_case_margin(params["rate_gap"])
            log2_domain = False
        elif name == "boost_step_bound":
            value = boost_step_bound(
                params["p_e"], int(params["k"]), int(params["gap"]), params["eps"]
            )
            log2_domain = False
        elif name == "conditional_tail_bound":
            value = conditional_tail_bound(params["p_e"], int(params["k"]), params["eps"])
            log2_domain = False
        elif name == "weight_enum_log_bound":
            value = weight_enum_log_bound(int(params["m"]), int(params["r"]), int(params["l"]))
            log2_domain = True
        elif name == "bhattacharyya":
            value = bhattacharyya(params["eps"], int(params["d"]))
            log2_domain = False
        elif name == "list_error_log_bound":
            value = list_error_log_bound(
                int(params["m"]), int(params["r"]), params["eps"], int(params["l_min"])
            )
            log2_domain = True
        else:
            raise ParameterError(f"unknown bound {name!r}; choose from {BOUND_NAMES}")
    except KeyError as exc:
        raise ParameterError(f"bound {name!r} is missing parameter {exc}") from None
    return BoundReport(name=name, inputs=dict(params), value=value, log2_domain=log2_domain)
