"""Closed forms for the scalar Gaussian broadcast pair with receiver cooperation.

User k observes sqrt(s_k)*X + Z_k with unit-variance noise, s1 > s2 > 0.
The boundary family is parameterized by the share of input power carried by
the private layer: f1(a) = cap(a*s1), f2(a) = C2 + c12 - cap(a*s2) on [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

from .numerics import DEFAULT_TOL, LogBase, Tolerance, gaussian_cap, gaussian_cap_inv
from .regions import ParametricFamily

_SLACK = 1e-9


@dataclass(frozen=True)
class GaussianBC:
    """SNR pair of the two marginal channels; user 1 is the stronger receiver."""

    s1: float
    s2: float

    def __post_init__(self):
        if not self.s1 > self.s2 > 0:
            raise ValueError(f"requires s1 > s2 > 0, got s1={self.s1}, s2={self.s2}")

    def cap1(self, base: LogBase = LogBase.BITS) -> float:
        return gaussian_cap(self.s1, base)

    def cap2(self, base: LogBase = LogBase.BITS) -> float:
        return gaussian_cap(self.s2, base)


def _check_c12(bc: GaussianBC, c12: float, base: LogBase) -> tuple[float, float]:
    c1, c2 = bc.cap1(base), bc.cap2(base)
    if not -_SLACK <= c12 <= c1 - c2 + _SLACK:
        raise ValueError(
            f"requires 0 <= C12 <= C1 - C2 (got C12={c12}, C1-C2={c1 - c2})"
        )
    return c1, c2


def gaussian_family(
    bc: GaussianBC, c12: float, base: LogBase = LogBase.BITS
) -> ParametricFamily:
    """The power-split boundary family for this SNR pair and cooperation rate."""
    c1, c2 = _check_c12(bc, c12, base)
    return ParametricFamily(
        b=1.0,
        f1=lambda a: gaussian_cap(a * bc.s1, base),
        f2=lambda a: c2 + c12 - gaussian_cap(a * bc.s2, base),
        c1=c1,
        c2=c2,
        c12=max(c12, 0.0),
    )


def alpha_th_closed(bc: GaussianBC, c12: float, base: LogBase = LogBase.BITS) -> float:
    """Threshold power split in closed form: ((s1-s2)/capinv(C1-C2-C12) - s2)^-1.

    At C12 = C1 - C2 the inner expression blows up and the limit value 0 is
    returned directly.
    """
    c1, c2 = _check_c12(bc, c12, base)
    delta = max(c1 - c2 - c12, 0.0)
    snr = gaussian_cap_inv(delta, base)
    if snr <= 0.0:
        return 0.0
    return 1.0 / ((bc.s1 - bc.s2) / snr - bc.s2)


def r1_th_closed(bc: GaussianBC, c12: float, base: LogBase = LogBase.BITS) -> float:
    """Threshold rate for user 1: cap at the threshold split times s1."""
    return gaussian_cap(alpha_th_closed(bc, c12, base) * bc.s1, base)


def r2star_closed(
    bc: GaussianBC,
    c12: float,
    r1: float,
    base: LogBase = LogBase.BITS,
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    """Best r2 at rate r1 in closed form: C2 + C12 - cap(capinv(r1) * s2/s1).

    Valid for r1 up to the threshold rate; beyond it the curve is not a
    proven boundary and the call is rejected.
    """
    c1, c2 = _check_c12(bc, c12, base)
    r1_th = r1_th_closed(bc, c12, base)
    if not -_SLACK <= r1 <= r1_th + _SLACK:
        raise ValueError(f"r1 must lie in [0, {r1_th}], got {r1}")
    r1 = max(r1, 0.0)
    return c2 + c12 - gaussian_cap(gaussian_cap_inv(r1, base) * bc.s2 / bc.s1, base)
