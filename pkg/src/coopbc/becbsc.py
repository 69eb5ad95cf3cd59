"""Erasure-to-strong / symmetric-to-weak binary broadcast pair.

User 1 sees a BEC(tau1), user 2 a BSC(p2), with tau1 < H_b(p2) so that the
erasure channel dominates for every input law.  The boundary family is
parameterized by the crossover q of the symmetric satellite layer:
f1(q) = (1-tau1)*H_b(q), f2(q) = log2 - H_b(p2*q) + c12 on [0, 1/2]
(* is binary convolution, log2 meaning the value of one bit in the base).

A caution on parameter ranges: the family contract additionally needs f1+f2
strictly increasing, which near q = 1/2 amounts to 1 - tau1 > (1 - 2*p2)**2,
i.e. tau1 < 4*p2*(1-p2).  That bound is NOT implied by tau1 < H_b(p2), so a
small sliver of channel pairs passes construction here but is rejected by
the family validation in :mod:`coopbc.regions`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import (
    DEFAULT_TOL,
    LogBase,
    Tolerance,
    binary_convolution,
    binary_entropy,
    binary_entropy_inv,
    bisect_monotone,
)
from .regions import ParametricFamily

_SLACK = 1e-9


@dataclass(frozen=True)
class BecBscBC:
    """Erasure probability for user 1 and crossover for user 2.

    Requires p2 in [0, 1/2) and 0 <= tau1 < H_b(p2) (in bits), which makes
    C1 = 1 - tau1 strictly larger than C2 = 1 - H_b(p2) and puts the pair in
    the more-capable ordering.
    """

    tau1: float
    p2: float

    def __post_init__(self):
        if not 0.0 <= self.p2 < 0.5:
            raise ValueError(f"requires p2 in [0, 1/2), got {self.p2}")
        hbp2 = binary_entropy(self.p2)
        if not 0.0 <= self.tau1 < hbp2:
            raise ValueError(
                f"requires 0 <= tau1 < H_b(p2) (got tau1={self.tau1}, H_b(p2)={hbp2})"
            )

    def cap1(self, base: LogBase = LogBase.BITS) -> float:
        return (1.0 - self.tau1) * base.one_bit()

    def cap2(self, base: LogBase = LogBase.BITS) -> float:
        return base.one_bit() - binary_entropy(self.p2, base)


def _check_c12(bc: BecBscBC, c12: float, base: LogBase) -> tuple[float, float]:
    c1, c2 = bc.cap1(base), bc.cap2(base)
    if not -_SLACK <= c12 <= c1 - c2 + _SLACK:
        raise ValueError(
            f"requires 0 <= C12 <= C1 - C2 (got C12={c12}, C1-C2={c1 - c2})"
        )
    return c1, c2


def becbsc_family(
    bc: BecBscBC, c12: float, base: LogBase = LogBase.BITS
) -> ParametricFamily:
    """The crossover-parameterized boundary family for this channel pair."""
    c1, c2 = _check_c12(bc, c12, base)
    one = base.one_bit()
    return ParametricFamily(
        b=0.5,
        f1=lambda q: (1.0 - bc.tau1) * binary_entropy(q, base),
        f2=lambda q: one - binary_entropy(binary_convolution(bc.p2, q), base) + c12,
        c1=c1,
        c2=c2,
        c12=max(c12, 0.0),
    )


def q_threshold(
    bc: BecBscBC,
    c12: float,
    base: LogBase = LogBase.BITS,
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    """Threshold crossover: the unique q in [0, 1/2] where the boundary meets
    the sum-rate line.

    Solves H_b(p2*q) - (1-tau1)*H_b(q) = C12 + tau1*log2, whose left side
    falls monotonically from H_b(p2) at q=0 to tau1*log2 at q=1/2; the
    admissible C12 range brackets the target, and boundary targets clamp to
    the exact endpoint.
    """
    _check_c12(bc, c12, base)
    target = c12 + bc.tau1 * base.one_bit()

    def g(q: float) -> float:
        return binary_entropy(binary_convolution(bc.p2, q), base) - (
            1.0 - bc.tau1
        ) * binary_entropy(q, base)

    return bisect_monotone(g, 0.0, 0.5, target, "decreasing", tol)


def r1_th(
    bc: BecBscBC,
    c12: float,
    base: LogBase = LogBase.BITS,
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    """Threshold rate for user 1: (1-tau1)*H_b at the threshold crossover."""
    return (1.0 - bc.tau1) * binary_entropy(q_threshold(bc, c12, base, tol), base)


def r2star_closed(
    bc: BecBscBC,
    c12: float,
    r1: float,
    base: LogBase = LogBase.BITS,
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    """Best r2 at rate r1: log2 - H_b(p2 * Hinv(r1/(1-tau1))) + C12.

    The entropy inverse reuses the shared bisection so this closed form and
    the parametric route round identically.  Valid up to the threshold rate.
    """
    c1, c2 = _check_c12(bc, c12, base)
    top = r1_th(bc, c12, base, tol)
    if not -_SLACK <= r1 <= top + _SLACK:
        raise ValueError(f"r1 must lie in [0, {top}], got {r1}")
    r1 = max(r1, 0.0)
    q = binary_entropy_inv(r1 / (1.0 - bc.tau1), base, tol)
    return (
        base.one_bit()
        - binary_entropy(binary_convolution(bc.p2, q), base)
        + c12
    )


def mgl_gap(p_u, p_x_given_u, p2: float, base: LogBase = LogBase.BITS) -> float:
    """Slack in the binary-convolution entropy bound for a BSC(p2) stage.

    For binary X with conditional law P_{X|U} and Y2 the BSC(p2) output,
    returns H(Y2|U) - H_b(Hinv(H(X|U)) * p2), which is nonnegative: the
    mixture over U can only add output entropy relative to a single
    Bernoulli input with the same conditional entropy.  Zero when every
    conditional P_{X|U=u} has the same entropy.

    The entropy inversion runs at 1e-14 bracket width; the looser default
    would leak solver noise of a few 1e-12 into a quantity whose sign is
    the whole point.
    """
    if not 0.0 <= p2 <= 0.5:
        raise ValueError(f"requires p2 in [0, 1/2], got {p2}")
    pu = np.asarray(p_u, dtype=np.float64)
    pxu = np.asarray(p_x_given_u, dtype=np.float64)
    if pxu.ndim != 2 or pxu.shape[1] != 2:
        raise ValueError(f"X must be binary: p_x_given_u shape {pxu.shape}")
    if pu.shape != (pxu.shape[0],):
        raise ValueError("p_u length must match the rows of p_x_given_u")
    x1 = pxu[:, 1]
    h_x_given_u = float(pu @ np.array([binary_entropy(float(t), base) for t in x1]))
    y1 = np.array([binary_convolution(float(t), p2) for t in x1])
    h_y_given_u = float(pu @ np.array([binary_entropy(float(t), base) for t in y1]))
    q = binary_entropy_inv(h_x_given_u, base, Tolerance(abs_tol=1e-14, max_iters=200))
    bound = binary_entropy(binary_convolution(q, p2), base)
    return h_y_given_u - bound
