"""Channel simulation: p-ary erasure, BPSK-AWGN, and 3PAM-AWGN.

All channels are stateless; every trial owns an rng derived from
(master_seed, grid_index, trial_index) through the splitmix-based mixer in
`trial_rng`, so results are independent of worker scheduling.

SNR convention: E_b/N0 in dB together with b_c information bits per channel
use fixes the noise variance as sigma^2 = 1 / (2 * b_c * 10^(dB/10)) for
unit-average-energy signaling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LLR_CAP = 300.0
PAM3_AMP = np.sqrt(1.5)  # {-A, 0, A} has unit average symbol energy


def mix64(*parts: int) -> int:
    """Deterministic 64-bit mix of integers (splitmix64 finalizer chain)."""
    h = 0x9E3779B97F4A7C15
    for x in parts:
        h = (h + (x & 0xFFFFFFFFFFFFFFFF)) & 0xFFFFFFFFFFFFFFFF
        h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9 & 0xFFFFFFFFFFFFFFFF
        h = (h ^ (h >> 27)) * 0x94D049BB133111EB & 0xFFFFFFFFFFFFFFFF
        h = h ^ (h >> 31)
    return h


def trial_rng(master_seed: int, grid_index: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng(mix64(master_seed, grid_index, trial_index))


def sigma_from_ebn0_db(ebn0_db: float, b_c: float) -> float:
    return float(np.sqrt(1.0 / (2.0 * b_c * 10.0 ** (ebn0_db / 10.0))))


@dataclass
class BecOutput:
    """Erasure-channel output: per position either the transmitted digit or erased."""

    values: np.ndarray  # (N,) int8; contents at erased positions are unspecified
    known: np.ndarray   # (N,) bool

    @property
    def known_set(self) -> np.ndarray:
        return np.flatnonzero(self.known)

    @property
    def erased_set(self) -> np.ndarray:
        return np.flatnonzero(~self.known)

    @property
    def n_known(self) -> int:
        return int(self.known.sum())


@dataclass
class SoftOutput:
    """Soft-decision channel output with per-position error-value costs.

    z holds hard decisions for the unshifted code digit (the coset shift is
    folded into the likelihoods).  For p=2, r is the signed LLR of the code
    digit and |r| its reliability; for p=3, r >= 0 is the log-ratio of the
    most likely to the second most likely digit.  costs[i, e-1] is the soft
    weight gamma_i(e) of mistaking z_i for z_i - e, for e in 1..p-1.
    """

    p: int
    y: np.ndarray
    z: np.ndarray
    r: np.ndarray
    costs: np.ndarray
    sigma2: float

    @property
    def reliability(self) -> np.ndarray:
        return np.abs(self.r) if self.p == 2 else self.r


def bec_transmit(x, eps: float, rng: np.random.Generator) -> BecOutput:
    """Erase each digit independently with probability eps (never flips)."""
    x = np.asarray(x, dtype=np.int8)
    if not (0.0 <= eps <= 1.0):
        raise ValueError(f"erasure probability {eps} outside [0, 1]")
    known = rng.random(x.shape[0]) >= eps
    values = np.where(known, x, 0).astype(np.int8)
    return BecOutput(values=values, known=known)


def bpsk_awgn_transmit(x, ebn0_db: float, b_c: float, rng: np.random.Generator,
                       a_p=None) -> SoftOutput:
    """Map bits 0 -> +1, 1 -> -1, add Gaussian noise, return LLRs and costs.

    If a coset shift is given, x must be the shifted word phi^{-1}(c + a); the
    returned hard decisions and costs refer to the unshifted code digit.
    """
    x = np.asarray(x, dtype=np.int8)
    sigma = sigma_from_ebn0_db(ebn0_db, b_c)
    s = 1.0 - 2.0 * x
    y = s + sigma * rng.standard_normal(x.shape[0])
    llr_x = np.clip(2.0 * y / sigma**2, -LLR_CAP, LLR_CAP)
    if a_p is not None:
        a_p = np.asarray(a_p, dtype=np.int8)
        r = np.where(a_p == 1, -llr_x, llr_x)
    else:
        r = llr_x
    z = (r < 0).astype(np.int8)
    costs = np.abs(r)[:, None]
    return SoftOutput(p=2, y=y, z=z, r=r, costs=costs, sigma2=sigma**2)


def pam3_awgn_transmit(x, a_p, ebn0_db: float, b_c: float,
                       rng: np.random.Generator) -> SoftOutput:
    """3PAM transmission of trits with the coset shift folded into decisions.

    x is the transmitted word phi^{-1}(c + a); digits map to amplitudes by
    natural order 0 -> -A, 1 -> 0, 2 -> +A with A = sqrt(3/2).  Hard decisions
    maximize the likelihood of the code digit beta given x_i = beta + a_i.
    """
    x = np.asarray(x, dtype=np.int8)
    a_p = np.zeros_like(x) if a_p is None else np.asarray(a_p, dtype=np.int8)
    sigma = sigma_from_ebn0_db(ebn0_db, b_c)
    amps = PAM3_AMP * (np.arange(3.0) - 1.0)
    y = amps[x] + sigma * rng.standard_normal(x.shape[0])
    # loglik[i, beta] ~ -(y_i - amp(beta + a_i))^2 / (2 sigma^2)
    shifted = (np.arange(3)[None, :] + a_p[:, None]) % 3
    d2 = (y[:, None] - amps[shifted]) ** 2
    loglik = -d2 / (2.0 * sigma**2)
    order = np.argsort(-loglik, axis=1, kind="stable")
    z = order[:, 0].astype(np.int8)
    second = loglik[np.arange(len(y)), order[:, 1]]
    best = loglik[np.arange(len(y)), order[:, 0]]
    r = np.clip(best - second, 0.0, LLR_CAP)
    # costs[i, e-1] = loglik(z_i) - loglik(z_i - e)
    ze = (z[:, None] - np.arange(1, 3)[None, :]) % 3
    costs = np.clip(
        best[:, None] - loglik[np.arange(len(y))[:, None], ze], 0.0, LLR_CAP
    )
    return SoftOutput(p=3, y=y, z=z, r=r, costs=costs, sigma2=sigma**2)
