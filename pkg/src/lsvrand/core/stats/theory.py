"""
Predicted rates

Closed-form exponents and hypothesis checks as functions of the configured
environment (γ, the integrability exponents p, r, s of the random constants,
the mixing rate q). Fitted slopes are compared against these values in the
run manifest and the summary table.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from ...errors import RangeError

INF = math.inf


def _check_gamma(gamma: float) -> None:
    if not 0.0 < gamma < 1.0:
        raise RangeError(f"gamma must lie in (0, 1), got {gamma}")


def _inverse(p: float) -> float:
    """1/p with 1/∞ = 0."""
    if p <= 0.0:
        raise RangeError(f"integrability exponent must be positive, got {p}")
    return 0.0 if math.isinf(p) else 1.0 / p


def decay_rate(gamma: float) -> float:
    """η = 1/γ − 1, the polynomial rate of the single-fiber memory loss."""
    _check_gamma(gamma)
    return 1.0 / gamma - 1.0


def memory_loss_exponent(gamma: float, s: float = 1.0) -> float:
    """Predicted log-log slope of the L^s memory-loss curve: −(1/s)(1/γ − 1)."""
    if s < 1.0:
        raise RangeError(f"norm index s must be >= 1, got {s}")
    return -decay_rate(gamma) / s


def prefactor_exponent(gamma: float) -> float:
    """Power 1 ∨ (1/γ − 1) carried by (1 + N_ε) in the quenched bound."""
    return max(1.0, decay_rate(gamma))


def survey_exponent(gamma: float, s: float = 1.0) -> float:
    """Power (1/s)(1/γ − 1) of (1 + N_ε) in the realized L^s prefactor."""
    return -memory_loss_exponent(gamma, s)


def return_tail_exponent(beta: float) -> float:
    """Slope −1/β of n ↦ m(τ ≥ n) restricted to Y for a constant fiber."""
    if not 0.0 < beta < 1.0:
        raise RangeError(f"beta must lie in (0, 1), got {beta}")
    return -1.0 / beta


def measure_tail_exponent(gamma: float) -> float:
    """Slope 1 − 1/γ of n ↦ μ(τ ≥ n)."""
    return -decay_rate(gamma)


def coupling_tail_exponent(gamma: float) -> float:
    """Slope −(1/γ − 1) of n ↦ P(S ≥ n)."""
    return -decay_rate(gamma)


def moment_exponent(p: float = INF, r: float = INF) -> float:
    """Growth 1/2 + 1/p + 1/r of ‖S_n φ‖_{L^s}."""
    return 0.5 + _inverse(p) + _inverse(r)


def quadratic_clt_exponent(a: float, p: float = INF, r: float = INF) -> float:
    """Berry-Esseen type rate −1/5 + 2/(5a) + 8/(5r) + 8/(5p) for quadratic tails."""
    return -0.2 + 2.0 * _inverse(a) / 5.0 + 8.0 * _inverse(r) / 5.0 + 8.0 * _inverse(p) / 5.0


def clt_exponent(s: float, p: float = INF, r: float = INF, a_const: float = 0.0) -> float:
    """General CLT rate for moment index s.

    −s/(2(2s+1)) + 2s/(p(2s+1)) + 2s/(r(2s+1)) + A/(2s+1), where A is the
    proof constant, left at 0 unless supplied.
    """
    if s < 1.0:
        raise RangeError(f"s must be >= 1, got {s}")
    d = 2.0 * s + 1.0
    return -s / (2.0 * d) + 2.0 * s * (_inverse(p) + _inverse(r)) / d + a_const / d


def mixing_requirement(gamma: float, p: float, s: float = 1.0) -> float:
    """Lower bound on q: (p/s)(1/γ − 1) + 2."""
    return p / s * decay_rate(gamma) + 2.0


def asip_mixing_requirement(gamma: float, r: float = INF) -> Optional[float]:
    """Lower bound on q for the invariance principle, None when γ >= 1/5 or r too small.

    q > 2 / ((1 − 5γ)/(1 − γ) − 8/r) · (1 − γ)/γ + 2
    """
    _check_gamma(gamma)
    if gamma >= 0.2:
        return None
    margin = (1.0 - 5.0 * gamma) / (1.0 - gamma) - 8.0 * _inverse(r)
    if margin <= 0.0:
        return None
    return 2.0 / margin * (1.0 - gamma) / gamma + 2.0


def concentration_bound(
    t: float, n: int, k_const: float, s: float, p: float = INF, r: float = INF, delta: float = 0.0
) -> float:
    """P(|S_n| >= t n) <= t^{−s} K^s n^{−s(1/2 − 1/p − 1/r − δ)}."""
    if t <= 0.0 or n < 1:
        raise RangeError("t must be positive and n >= 1")
    exponent = -s * (0.5 - _inverse(p) - _inverse(r) - delta)
    return min(1.0, t**-s * k_const**s * n**exponent)


def is_summable(rate: float) -> bool:
    """∑ n^{−a} < ∞ iff a > 1."""
    return rate > 1.0


@dataclass
class Prediction:
    """Theory values for one configuration, keyed by fit name."""

    gamma: float
    s: float = 1.0
    p: float = INF
    r: float = INF
    values: Dict[str, float] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    def get(self, name: str) -> Optional[float]:
        return self.values.get(name)


def predictions(
    gamma: float, s: float = 1.0, p: float = INF, r: float = INF, q: Optional[float] = None
) -> Prediction:
    """Collect every predicted exponent and the hypothesis warnings for γ."""
    out = Prediction(gamma=gamma, s=s, p=p, r=r)
    eta = decay_rate(gamma)
    out.values.update(
        {
            "decay": memory_loss_exponent(gamma, s),
            "prefactor": prefactor_exponent(gamma),
            "measure_tail": measure_tail_exponent(gamma),
            "coupling": coupling_tail_exponent(gamma),
            "return_tails": return_tail_exponent(gamma),
            "moments": moment_exponent(p, r),
            "clt": quadratic_clt_exponent(2.0, p, r),
            "survey": survey_exponent(gamma, s),
        }
    )
    asip = asip_mixing_requirement(gamma, r)
    if asip is not None:
        out.values["asip_q"] = asip
    if not is_summable(eta / s):
        out.warnings.append(
            f"predicted memory-loss exponent 1/gamma-1 = {eta:.3f} is non-summable "
            f"for s={s:g}; CLT diagnostics disabled"
        )
    if q is not None and not math.isinf(p) and q <= mixing_requirement(gamma, p, s):
        out.warnings.append(
            f"mixing rate q={q:.3g} does not exceed {mixing_requirement(gamma, p, s):.3g}"
        )
    return out


__all__ = [
    "Prediction",
    "asip_mixing_requirement",
    "clt_exponent",
    "concentration_bound",
    "coupling_tail_exponent",
    "decay_rate",
    "is_summable",
    "measure_tail_exponent",
    "memory_loss_exponent",
    "mixing_requirement",
    "moment_exponent",
    "prefactor_exponent",
    "predictions",
    "quadratic_clt_exponent",
    "return_tail_exponent",
    "survey_exponent",
]
