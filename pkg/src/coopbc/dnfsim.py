"""Monte Carlo simulation of layered random coding with a decode-and-forward hop.

The transmitter superimposes a satellite codeword (user 1's message) on a
cloud center (user 2's message).  User 1 decodes both messages by exhaustive
maximum likelihood over the whole codebook and forwards the bin index of its
estimate of user 2's message over the rate-limited link; user 2 then decodes
by maximum likelihood over the cloud centers inside that bin.

Everything is deterministic given the seed: the codebook derives its stream
from (seed, 0) and trial t from (seed, 1, t), so reports are reproducible
trial-by-trial regardless of batching or thread count.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import _accel
from .channel import AuxiliaryJoint

_ERASURE = 2  # output symbol index for the erased position


class BudgetExceededError(RuntimeError):
    """The requested code would materialize more codewords than the budget allows."""


@dataclass(frozen=True)
class BecBsc:
    """Erasure channel to user 1, symmetric flip channel to user 2."""

    tau1: float
    p2: float

    def __post_init__(self):
        if not 0.0 <= self.tau1 <= 1.0:
            raise ValueError(f"erasure probability must lie in [0, 1], got {self.tau1}")
        if not 0.0 <= self.p2 <= 0.5:
            raise ValueError(f"crossover must lie in [0, 1/2], got {self.p2}")


@dataclass(frozen=True)
class Gaussian:
    """Unit-noise additive channels with per-user SNR scaling."""

    s1: float
    s2: float

    def __post_init__(self):
        if not (self.s1 > 0 and self.s2 > 0):
            raise ValueError(f"SNRs must be positive, got s1={self.s1}, s2={self.s2}")


ChannelFamily = Union[BecBsc, Gaussian]


@dataclass(frozen=True)
class CodeConfig:
    """Blocklength, rate pair, cooperation rate, input law, and seed for one code.

    Message counts round up: nu_k = ceil(2**(n*r_k)), and the cooperation
    link carries one of ceil(2**(n*c12)) bin indices.  Exactly one of
    ``input_law`` (discrete cloud/satellite law) or ``power_split``
    (Gaussian: fraction of unit power given to the satellite layer) must be
    set.  ``codeword_budget`` caps nu1*nu2.
    """

    n: int
    r1: float
    r2: float
    c12: float
    seed: int
    input_law: Optional[AuxiliaryJoint] = None
    power_split: Optional[float] = None
    codeword_budget: int = 65536

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"blocklength must be >= 1, got {self.n}")
        if self.r1 < 0 or self.r2 < 0 or self.c12 < 0:
            raise ValueError("rates must be nonnegative")
        if (self.input_law is None) == (self.power_split is None):
            raise ValueError("set exactly one of input_law or power_split")
        if self.power_split is not None and not 0.0 <= self.power_split <= 1.0:
            raise ValueError(f"power split must lie in [0, 1], got {self.power_split}")
        if self.nu1 * self.nu2 > self.codeword_budget:
            raise BudgetExceededError(
                f"codebook of {self.nu1}*{self.nu2} codewords exceeds the budget "
                f"of {self.codeword_budget}"
            )

    @property
    def nu1(self) -> int:
        return math.ceil(2.0 ** (self.n * self.r1))

    @property
    def nu2(self) -> int:
        return math.ceil(2.0 ** (self.n * self.r2))

    @property
    def n_bins(self) -> int:
        return math.ceil(2.0 ** (self.n * self.c12))

    @property
    def bin_size(self) -> int:
        return math.ceil(2.0 ** (self.n * max(self.r2 - self.c12, 0.0)))


@dataclass(frozen=True)
class Codebook:
    clouds: np.ndarray      # (nu2, n)
    satellites: np.ndarray  # (nu1, nu2, n)
    discrete: bool


@dataclass(frozen=True)
class SimReport:
    """Error tallies for one simulated configuration.

    ``user1_joint_errors`` counts trials where user 1's joint decode missed
    its own message; ``user2_errors`` counts trials where user 2's final
    decision missed user 2's message; ``error_events`` counts trials where
    either happened, and ``p_e_estimate`` is that count over trials with a
    normal-approximation 95% half-width.
    """

    trials: int
    user1_joint_errors: int
    user2_errors: int
    error_events: int
    p_e_estimate: float
    p_e_half_width: float

    @staticmethod
    def half_width(k: int, n: int) -> float:
        p = k / n
        return 1.96 * math.sqrt(p * (1.0 - p) / n)

    @property
    def user1_error_rate(self) -> float:
        return self.user1_joint_errors / self.trials

    @property
    def user2_error_rate(self) -> float:
        return self.user2_errors / self.trials

    @property
    def user2_half_width(self) -> float:
        return self.half_width(self.user2_errors, self.trials)

    def to_json(self) -> str:
        return json.dumps(
            {
                "trials": self.trials,
                "user1_joint_errors": self.user1_joint_errors,
                "user2_errors": self.user2_errors,
                "error_events": self.error_events,
                "p_e_estimate": self.p_e_estimate,
                "p_e_half_width": self.p_e_half_width,
            },
            indent=2,
        )


def _codebook_rng(cfg: CodeConfig) -> np.random.Generator:
    return np.random.default_rng((cfg.seed, 0))


def _trial_rng(cfg: CodeConfig, trial: int) -> np.random.Generator:
    return np.random.default_rng((cfg.seed, 1, trial))


def build_superposition_codebook(cfg: CodeConfig) -> Codebook:
    """Draw the layered random codebook for this configuration.

    Discrete: cloud symbols i.i.d. from P_U, satellite symbols i.i.d. from
    P_{X|U} conditioned per position on the cloud of the same user-2
    message.  Gaussian: clouds are sqrt(1-split) times a standard normal
    block and satellites add sqrt(split) times an independent one, for unit
    average input power.  Draw order is clouds first, then satellites.
    """
    rng = _codebook_rng(cfg)
    nu1, nu2, n = cfg.nu1, cfg.nu2, cfg.n
    if cfg.input_law is not None:
        law = cfg.input_law
        clouds = rng.choice(law.u_size, size=(nu2, n), p=law.p_u).astype(np.int8)
        cum = np.cumsum(law.p_x_given_u, axis=1)
        draws = rng.random((nu1, nu2, n))
        satellites = np.empty((nu1, nu2, n), dtype=np.int8)
        for u in range(law.u_size):
            mask = clouds == u
            satellites[:, mask] = np.searchsorted(cum[u], draws[:, mask], side="right").astype(
                np.int8
            )
        np.clip(satellites, 0, law.x_size - 1, out=satellites)
        return Codebook(clouds, satellites, discrete=True)
    split = cfg.power_split
    clouds = math.sqrt(1.0 - split) * rng.standard_normal((nu2, n))
    satellites = clouds[None, :, :] + math.sqrt(split) * rng.standard_normal((nu1, nu2, n))
    return Codebook(clouds, satellites, discrete=False)


def bin_assignment(cfg: CodeConfig) -> np.ndarray:
    """Bin index for each user-2 message: consecutive blocks of bin_size messages."""
    return (np.arange(cfg.nu2) // cfg.bin_size).astype(np.int64)


def _bin_members(bins: np.ndarray, n_bins: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flattened per-bin member lists (members are sorted ascending per bin)."""
    counts = np.bincount(bins, minlength=n_bins).astype(np.int64)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]]).astype(np.int64)
    flat = np.argsort(bins, kind="stable").astype(np.int64)
    return flat, starts, counts


def _draw_trials_discrete(cfg: CodeConfig, trials: int):
    """Per-trial messages and channel noise, one independent stream per trial."""
    m1 = np.empty(trials, dtype=np.int64)
    m2 = np.empty(trials, dtype=np.int64)
    u_erase = np.empty((trials, cfg.n))
    u_flip = np.empty((trials, cfg.n))
    for t in range(trials):
        rng = _trial_rng(cfg, t)
        m1[t] = rng.integers(cfg.nu1)
        m2[t] = rng.integers(cfg.nu2)
        u_erase[t] = rng.random(cfg.n)
        u_flip[t] = rng.random(cfg.n)
    return m1, m2, u_erase, u_flip


def _draw_trials_gaussian(cfg: CodeConfig, trials: int):
    m1 = np.empty(trials, dtype=np.int64)
    m2 = np.empty(trials, dtype=np.int64)
    z1 = np.empty((trials, cfg.n))
    z2 = np.empty((trials, cfg.n))
    for t in range(trials):
        rng = _trial_rng(cfg, t)
        m1[t] = rng.integers(cfg.nu1)
        m2[t] = rng.integers(cfg.nu2)
        z1[t] = rng.standard_normal(cfg.n)
        z2[t] = rng.standard_normal(cfg.n)
    return m1, m2, z1, z2


def simulate(
    cfg: CodeConfig,
    channels: ChannelFamily,
    trials: int,
    threads: int = 1,
) -> SimReport:
    """Run the full encode/transmit/decode loop for the given trial count.

    Per trial: pick both messages uniformly, send the corresponding
    satellite codeword through both marginal channels independently, let
    user 1 decode the message pair by exhaustive maximum likelihood, pass
    the bin index of its user-2 estimate over the cooperation link, and let
    user 2 decode over the cloud centers of that bin.  Discrete decoding
    uses integer mismatch penalties (exact ties, first-index tie-break);
    Gaussian decoding uses squared distance.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    book = build_superposition_codebook(cfg)
    bins = bin_assignment(cfg)
    cand_flat, cand_start, cand_count = _bin_members(bins, cfg.n_bins)
    nu1, nu2, n = cfg.nu1, cfg.nu2, cfg.n
    sat_flat = np.ascontiguousarray(book.satellites.reshape(nu1 * nu2, n))

    if isinstance(channels, BecBsc):
        if not book.discrete:
            raise ValueError("discrete channels require a discrete input law")
        if cfg.input_law.x_size != 2:
            raise ValueError("the erasure/flip family expects a binary input alphabet")
        m1, m2, u_erase, u_flip = _draw_trials_discrete(cfg, trials)
        x = sat_flat[m1 * nu2 + m2]
        y1 = np.where(u_erase < channels.tau1, _ERASURE, x).astype(np.int8)
        y2 = np.where(u_flip < channels.p2, 1 - x, x).astype(np.int8)
        # mismatch on an unerased position disqualifies; erasures are free
        penalty1 = np.array([[0, 1, 0], [1, 0, 0]], dtype=np.int64)
        q2 = cfg.input_law.p_x_given_u @ np.array(
            [[1.0 - channels.p2, channels.p2], [channels.p2, 1.0 - channels.p2]]
        )
        with np.errstate(divide="ignore"):
            logq2 = np.log(q2)
        clouds = np.ascontiguousarray(book.clouds.astype(np.int8))

        def decode_chunk(sl):
            flat_hat = _accel.decode_map_int(sat_flat, penalty1, y1[sl])
            m2_hat_u1 = flat_hat % nu2
            m2_hat_u2 = _accel.decode_map_float(
                clouds, logq2, y2[sl], cand_flat, cand_start, cand_count, bins[m2_hat_u1]
            )
            return flat_hat // nu2, m2_hat_u1, m2_hat_u2

    elif isinstance(channels, Gaussian):
        if book.discrete:
            raise ValueError("Gaussian channels require a power-split input law")
        m1, m2, z1, z2 = _draw_trials_gaussian(cfg, trials)
        x = sat_flat[m1 * nu2 + m2]
        root_s1, root_s2 = math.sqrt(channels.s1), math.sqrt(channels.s2)
        y1 = root_s1 * x + z1
        y2 = root_s2 * x + z2
        clouds = np.ascontiguousarray(book.clouds)

        def decode_chunk(sl):
            flat_hat = _accel.decode_sq(sat_flat, root_s1, y1[sl])
            m2_hat_u1 = flat_hat % nu2
            m2_hat_u2 = _accel.decode_sq_restricted(
                clouds, root_s2, y2[sl], cand_flat, cand_start, cand_count, bins[m2_hat_u1]
            )
            return flat_hat // nu2, m2_hat_u1, m2_hat_u2

    else:
        raise ValueError(f"unsupported channel family: {channels!r}")

    if threads > 1:
        bounds = np.linspace(0, trials, threads + 1).astype(int)
        slices = [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(decode_chunk, slices))
        m1_hat = np.concatenate([p[0] for p in parts])
        m2_hat_u2 = np.concatenate([p[2] for p in parts])
    else:
        m1_hat, _, m2_hat_u2 = decode_chunk(slice(0, trials))

    e1 = m1_hat != m1
    e2 = m2_hat_u2 != m2
    events = int(np.count_nonzero(e1 | e2))
    return SimReport(
        trials=trials,
        user1_joint_errors=int(np.count_nonzero(e1)),
        user2_errors=int(np.count_nonzero(e2)),
        error_events=events,
        p_e_estimate=events / trials,
        p_e_half_width=SimReport.half_width(events, trials),
    )
