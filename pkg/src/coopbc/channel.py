"""Discrete memoryless channels, mutual information, capacity, and channel ordering.

Channels are row-stochastic matrices over finite alphabets.  All mutual
informations are computed in nats internally and converted to the requested
base on the way out.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .numerics import DEFAULT_TOL, IterationLimitError, LogBase, Tolerance

_ROW_SUM_TOL = 1e-12


def _xlogx(a: np.ndarray) -> np.ndarray:
    """Elementwise a*ln(a) with 0*ln(0) = 0."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(a > 0.0, a * np.log(a), 0.0)


def _validate_stochastic(mat: np.ndarray, what: str) -> np.ndarray:
    mat = np.asarray(mat, dtype=np.float64)
    if mat.ndim != 2:
        raise ValueError(f"{what} must be a 2-D matrix, got shape {mat.shape}")
    if np.any(mat < -_ROW_SUM_TOL) or np.any(mat > 1.0 + _ROW_SUM_TOL):
        raise ValueError(f"{what} entries must lie in [0, 1]")
    rowsums = mat.sum(axis=1)
    if np.any(np.abs(rowsums - 1.0) > _ROW_SUM_TOL):
        raise ValueError(f"{what} rows must sum to 1 within {_ROW_SUM_TOL}")
    mat = np.clip(mat, 0.0, 1.0)
    mat.flags.writeable = False
    return mat


@dataclass(frozen=True)
class DiscreteChannel:
    """Row-stochastic transition matrix from a finite input to a finite output."""

    transitions: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "transitions", _validate_stochastic(self.transitions, "transition matrix")
        )

    @property
    def input_size(self) -> int:
        return self.transitions.shape[0]

    @property
    def output_size(self) -> int:
        return self.transitions.shape[1]

    def as_dict(self) -> dict:
        return {
            "input_size": self.input_size,
            "output_size": self.output_size,
            "rows": [[float(v) for v in row] for row in self.transitions],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "DiscreteChannel":
        ch = cls(np.asarray(d["rows"], dtype=np.float64))
        if ch.input_size != d["input_size"] or ch.output_size != d["output_size"]:
            raise ValueError("declared sizes do not match the row matrix")
        return ch

    @classmethod
    def from_json(cls, s: str) -> "DiscreteChannel":
        return cls.from_dict(json.loads(s))


@dataclass(frozen=True)
class ChannelPair:
    """The two marginal channels of a broadcast setup, sharing one input alphabet."""

    ch1: DiscreteChannel
    ch2: DiscreteChannel

    def __post_init__(self):
        if self.ch1.input_size != self.ch2.input_size:
            raise ValueError(
                f"input alphabets differ: {self.ch1.input_size} vs {self.ch2.input_size}"
            )

    @property
    def input_size(self) -> int:
        return self.ch1.input_size


@dataclass(frozen=True)
class InputDistribution:
    """Probability vector over the channel input alphabet."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if p.ndim != 1:
            raise ValueError("input distribution must be a vector")
        if np.any(p < -_ROW_SUM_TOL) or abs(p.sum() - 1.0) > _ROW_SUM_TOL:
            raise ValueError("input distribution must be nonnegative and sum to 1")
        p = np.clip(p, 0.0, 1.0)
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)


@dataclass(frozen=True)
class AuxiliaryJoint:
    """A joint law (P_U, P_{X|U}) for an auxiliary variable over the channel input."""

    p_u: np.ndarray
    p_x_given_u: np.ndarray

    def __post_init__(self):
        pu = np.asarray(self.p_u, dtype=np.float64)
        if pu.ndim != 1 or np.any(pu < -_ROW_SUM_TOL) or abs(pu.sum() - 1.0) > _ROW_SUM_TOL:
            raise ValueError("p_u must be a probability vector")
        pu = np.clip(pu, 0.0, 1.0)
        pu.flags.writeable = False
        object.__setattr__(self, "p_u", pu)
        pxu = _validate_stochastic(self.p_x_given_u, "p_x_given_u")
        if pxu.shape[0] != pu.shape[0]:
            raise ValueError("p_x_given_u must have one row per value of U")
        object.__setattr__(self, "p_x_given_u", pxu)

    @property
    def u_size(self) -> int:
        return self.p_u.shape[0]

    @property
    def x_size(self) -> int:
        return self.p_x_given_u.shape[1]

    def as_dict(self) -> dict:
        return {
            "u_size": self.u_size,
            "p_u": [float(v) for v in self.p_u],
            "p_x_given_u": [[float(v) for v in row] for row in self.p_x_given_u],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AuxiliaryJoint":
        joint = cls(np.asarray(d["p_u"], float), np.asarray(d["p_x_given_u"], float))
        if joint.u_size != d["u_size"]:
            raise ValueError("declared u_size does not match p_u")
        return joint


def make_bsc(p: float) -> DiscreteChannel:
    """Binary symmetric channel with crossover probability p in [0, 1/2]."""
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"BSC crossover must lie in [0, 1/2], got {p}")
    return DiscreteChannel(np.array([[1.0 - p, p], [p, 1.0 - p]]))


def make_bec(tau: float) -> DiscreteChannel:
    """Binary erasure channel; outputs are ordered (0, 1, erasure)."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"erasure probability must lie in [0, 1], got {tau}")
    return DiscreteChannel(np.array([[1.0 - tau, 0.0, tau], [0.0, 1.0 - tau, tau]]))


def _as_probs(px, n: int) -> np.ndarray:
    p = px.probs if isinstance(px, InputDistribution) else np.asarray(px, dtype=np.float64)
    if p.shape != (n,):
        raise ValueError(f"input distribution must have length {n}, got shape {p.shape}")
    return p


def _mi_batch_nats(pxs: np.ndarray, transitions: np.ndarray) -> np.ndarray:
    """I(X;Y) in nats for a batch of input rows against one channel matrix."""
    pys = pxs @ transitions
    h_y = -_xlogx(pys).sum(axis=1)
    h_y_given_x = pxs @ (-_xlogx(transitions).sum(axis=1))
    return np.maximum(h_y - h_y_given_x, 0.0)


def mutual_information(px, ch: DiscreteChannel, base: LogBase = LogBase.BITS) -> float:
    """I(X;Y) between the given input law and the channel output."""
    p = _as_probs(px, ch.input_size)
    i_nats = float(_mi_batch_nats(p[None, :], ch.transitions)[0])
    return i_nats / base.ln_scale


def capacity(
    ch: DiscreteChannel,
    tol: Optional[Tolerance] = None,
    base: LogBase = LogBase.BITS,
) -> tuple[float, InputDistribution]:
    """Channel capacity by Blahut-Arimoto fixed-point iteration.

    Each pass computes the per-input divergences d_x = D(P(.|x) || p_Y); their
    input-weighted mean is an achievable rate and their maximum an upper
    bound on capacity, so iteration stops once max - mean <= tol.abs_tol
    (a certified two-sided gap).  Returns the achieved rate and the input
    law that achieves it.

    Convergence is linear, not quadratic, so the default iteration cap is
    much larger than the bisection default.
    """
    if tol is None:
        tol = Tolerance(abs_tol=DEFAULT_TOL.abs_tol, max_iters=10_000)
    transitions = ch.transitions
    n_x = ch.input_size
    r = np.full(n_x, 1.0 / n_x)
    with np.errstate(divide="ignore"):
        log_t = np.where(transitions > 0.0, np.log(transitions), 0.0)
    gap_tol_nats = tol.abs_tol * base.ln_scale
    for _ in range(tol.max_iters):
        py = r @ transitions
        with np.errstate(divide="ignore", invalid="ignore"):
            log_py = np.where(py > 0.0, np.log(py), 0.0)
        d = (np.where(transitions > 0.0, transitions * (log_t - log_py), 0.0)).sum(axis=1)
        lower = float(r @ d)
        upper = float(d.max())
        if upper - lower <= gap_tol_nats:
            return lower / base.ln_scale, InputDistribution(r)
        r = r * np.exp(d - d.max())
        r = r / r.sum()
    raise IterationLimitError(
        f"capacity iteration gap did not reach {tol.abs_tol} in {tol.max_iters} passes"
    )


@dataclass(frozen=True)
class MoreCapableVerdict:
    """Outcome of the numerical channel-ordering scan.

    ``holds`` means I(X;Y1) - I(X;Y2) >= -abs_tol at every tested input law.
    When violated, ``witness`` is an input law with a strictly negative gap.
    The scan samples a finite set of inputs, so a ``holds`` verdict is
    numerical evidence, not a proof.
    """

    holds: bool
    min_gap: float
    witness: Optional[InputDistribution]
    note: str = "numerical scan, not a proof"


def _golden_refine(f, lo: float, hi: float, iters: int = 80) -> tuple[float, float]:
    """Derivative-free minimizer of f on [lo, hi] (golden-section search)."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
        if b - a < 1e-14:
            break
    x = 0.5 * (a + b)
    return x, f(x)


def _simplex_lattice(k: int, steps: int) -> np.ndarray:
    """All probability vectors of length k with coordinates on a grid of 1/steps."""
    if k == 1:
        return np.ones((1, 1))
    rows = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            rows.append(prefix + [remaining])
            return
        for v in range(remaining + 1):
            rec(prefix + [v], remaining - v, slots - 1)

    rec([], steps, k)
    return np.asarray(rows, dtype=np.float64) / steps


def is_more_capable(
    pair: ChannelPair,
    resolution: int = 10_000,
    base: LogBase = LogBase.BITS,
    tol: Tolerance = DEFAULT_TOL,
) -> MoreCapableVerdict:
    """Scan input laws for a violation of the ordering I(X;Y1) >= I(X;Y2).

    Binary inputs are scanned on a uniform grid of ``resolution``+1 points
    over P_X(0), and the grid minimum of the gap is polished with a
    derivative-free local search.  Larger alphabets use a simplex lattice
    (100 points per dimension) plus 10^5 seeded Dirichlet samples.
    """
    n_x = pair.input_size
    t1, t2 = pair.ch1.transitions, pair.ch2.transitions
    if n_x == 2:
        p0 = np.linspace(0.0, 1.0, resolution + 1)
        pxs = np.stack([p0, 1.0 - p0], axis=1)
    else:
        lattice = _simplex_lattice(n_x, 100)
        rng = np.random.default_rng(0)
        pxs = np.vstack([lattice, rng.dirichlet(np.ones(n_x), size=100_000)])
    gaps = _mi_batch_nats(pxs, t1) - _mi_batch_nats(pxs, t2)
    k = int(np.argmin(gaps))
    min_gap = float(gaps[k]) / base.ln_scale
    witness_p = pxs[k]

    if n_x == 2:
        # polish around the grid minimum; the gap is smooth in P_X(0)
        def gap_at(p: float) -> float:
            px = np.array([p, 1.0 - p])
            return float(_mi_batch_nats(px[None, :], t1)[0] - _mi_batch_nats(px[None, :], t2)[0])

        h = 1.0 / resolution
        x, fx = _golden_refine(gap_at, max(0.0, p0[k] - h), min(1.0, p0[k] + h))
        if fx / base.ln_scale < min_gap:
            min_gap = fx / base.ln_scale
            witness_p = np.array([x, 1.0 - x])

    if min_gap < -tol.abs_tol:
        return MoreCapableVerdict(False, min_gap, InputDistribution(witness_p))
    return MoreCapableVerdict(True, min_gap, None)


def conditional_informations(
    joint: AuxiliaryJoint, pair: ChannelPair, base: LogBase = LogBase.BITS
) -> tuple[float, float, float]:
    """The triple (I(X;Y1|U), I(U;Y2), I(X;Y1)) induced by an auxiliary joint.

    I(X;Y1|U) averages the per-U mutual informations; I(U;Y2) treats the
    composition P_{X|U} followed by channel 2 as a channel from U; I(X;Y1)
    uses the induced marginal P_X.
    """
    if joint.x_size != pair.input_size:
        raise ValueError(
            f"joint X alphabet ({joint.x_size}) does not match channels ({pair.input_size})"
        )
    scale = base.ln_scale
    i_x_y1_given_u = float(joint.p_u @ _mi_batch_nats(joint.p_x_given_u, pair.ch1.transitions))
    u_to_y2 = joint.p_x_given_u @ pair.ch2.transitions
    i_u_y2 = float(_mi_batch_nats(joint.p_u[None, :], u_to_y2)[0])
    px = joint.p_u @ joint.p_x_given_u
    i_x_y1 = float(_mi_batch_nats(px[None, :], pair.ch1.transitions)[0])
    return i_x_y1_given_u / scale, i_u_y2 / scale, i_x_y1 / scale
