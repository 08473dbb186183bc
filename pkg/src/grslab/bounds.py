"""Random-coding machinery: Gallager exponents, spectrum union bound,
erasure-channel Approx-UB, and a Monte Carlo RCU bound for GRS ensembles.

Exponent formulas use base-p logarithms (rates are p-ary digits per channel
use); natural logs are used internally and converted at the boundary.
Continuous-output channels are integrated by Gauss-Hermite quadrature with
one node set per constellation point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np
from scipy.special import logsumexp
from scipy.stats import beta as beta_dist
from scipy.stats import binom

from .channel import PAM3_AMP
from .errors import ConfigError
from .grs import GrsCode, weight_class_bound, r_tilde_w

GH_NODES = 64


@dataclass
class DmcModel:
    """Memoryless channel with p-ary input: finite transition matrix or AWGN."""

    p: int
    kind: str = "dmc"                    # "dmc" | "bpsk-awgn" | "pam3-awgn"
    P: np.ndarray | None = None          # (p, J) transition probabilities
    Q: np.ndarray | None = None          # input distribution, default uniform
    sigma: float | None = None

    def __post_init__(self):
        if self.Q is None:
            self.Q = np.full(self.p, 1.0 / self.p)
        self.Q = np.asarray(self.Q, dtype=float)
        if abs(self.Q.sum() - 1.0) > 1e-12:
            raise ConfigError("model.Q", "input distribution must sum to 1")
        if self.kind == "dmc":
            self.P = np.asarray(self.P, dtype=float)
            if self.P.shape[0] != self.p:
                raise ConfigError("model.P", f"need {self.p} rows, got {self.P.shape}")
            if np.any(np.abs(self.P.sum(axis=1) - 1.0) > 1e-12):
                raise ConfigError("model.P", "transition rows must sum to 1")
        elif self.kind in ("bpsk-awgn", "pam3-awgn"):
            if self.sigma is None or self.sigma <= 0:
                raise ConfigError("model.sigma", "AWGN models need sigma > 0")
        else:
            raise ConfigError("model.kind", f"unknown channel kind {self.kind!r}")

    @property
    def centers(self) -> np.ndarray:
        if self.kind == "bpsk-awgn":
            return np.array([1.0, -1.0])
        if self.kind == "pam3-awgn":
            return PAM3_AMP * (np.arange(3.0) - 1.0)
        raise ConfigError("model.kind", "no constellation for a finite DMC")

    @staticmethod
    def bec(eps: float) -> "DmcModel":
        """Binary erasure channel as a 3-output DMC: outputs (0, 1, erasure)."""
        P = np.array([[1 - eps, 0.0, eps], [0.0, 1 - eps, eps]])
        return DmcModel(p=2, kind="dmc", P=P)

    @staticmethod
    def erasure(p: int, eps: float) -> "DmcModel":
        P = np.zeros((p, p + 1))
        P[:, :p] = (1 - eps) * np.eye(p)
        P[:, p] = eps
        return DmcModel(p=p, kind="dmc", P=P)

    @staticmethod
    def bpsk_awgn(sigma: float) -> "DmcModel":
        return DmcModel(p=2, kind="bpsk-awgn", sigma=sigma)

    @staticmethod
    def pam3_awgn(sigma: float) -> "DmcModel":
        return DmcModel(p=3, kind="pam3-awgn", sigma=sigma)


@dataclass
class BoundCurve:
    kind: str
    params: list
    values: list
    ci_lo: list = dataclass_field(default_factory=list)
    ci_hi: list = dataclass_field(default_factory=list)
    meta: dict = dataclass_field(default_factory=dict)

    def rows(self):
        for i, (x, v) in enumerate(zip(self.params, self.values)):
            lo = self.ci_lo[i] if self.ci_lo else ""
            hi = self.ci_hi[i] if self.ci_hi else ""
            yield (self.kind, x, v, lo, hi)


def _gh(nodes: int):
    t, w = np.polynomial.hermite.hermgauss(nodes)
    return t, w / math.sqrt(math.pi)


def e0(model: DmcModel, rho: float, nodes: int = GH_NODES) -> float:
    """Gallager's E_0(rho, Q) in base p; exactly 0 at rho = 0."""
    if not (0 <= rho <= 1):
        raise ValueError(f"rho={rho} outside [0, 1]")
    if rho == 0:
        return 0.0
    s = 1.0 / (1.0 + rho)
    lp = math.log(model.p)
    if model.kind == "dmc":
        inner = model.Q @ np.power(model.P, s)
        val = float(np.power(inner, 1.0 + rho).sum())
        return -math.log(val) / lp
    # AWGN: sum_i Q_i * integral of p(y|i)^s * [sum_i' Q_i' p(y|i')^s]^rho dy,
    # with p(y|i)^s proportional to a Gaussian of variance sigma^2/s around
    # center i, integrated by Gauss-Hermite per center.
    sig = model.sigma
    t, w = _gh(nodes)
    mus = model.centers
    log_c = (1.0 - s) * 0.5 * math.log(2 * math.pi * sig**2) - 0.5 * math.log(s)
    logq = np.log(model.Q)
    log_terms = []
    for i, mu in enumerate(mus):
        y = mu + sig * math.sqrt(2.0 / s) * t  # (nodes,)
        logpdf = -((y[:, None] - mus[None, :]) ** 2) / (2 * sig**2) - 0.5 * math.log(
            2 * math.pi * sig**2
        )
        log_g = rho * logsumexp(logq[None, :] + s * logpdf, axis=1)
        log_int = logsumexp(np.log(w) + log_g)
        log_terms.append(logq[i] + log_c + log_int)
    return -float(logsumexp(log_terms)) / lp


def mutual_information(model: DmcModel, nodes: int = GH_NODES) -> float:
    """I(Q; P) in base-p units per channel use."""
    lp = math.log(model.p)
    if model.kind == "dmc":
        out = model.Q @ model.P
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(model.P > 0, np.log(model.P / out[None, :]), 0.0)
        return float((model.Q[:, None] * model.P * ratio).sum()) / lp
    sig = model.sigma
    t, w = _gh(nodes)
    mus = model.centers
    logq = np.log(model.Q)
    acc = 0.0
    for i, mu in enumerate(mus):
        y = mu + sig * math.sqrt(2.0) * t
        logpdf = -((y[:, None] - mus[None, :]) ** 2) / (2 * sig**2)
        log_ratio = logpdf[:, i] - logsumexp(logq[None, :] + logpdf, axis=1)
        acc += model.Q[i] * float(w @ log_ratio)
    return acc / lp


def bec_capacity(eps: float) -> float:
    return 1.0 - eps


def er(model: DmcModel, R: float, tol: float = 1e-9) -> float:
    """Random-coding exponent max_{0<=rho<=1} (E_0(rho) - rho R), base p."""
    if R < 0 and not math.isfinite(R):
        return e0(model, 1.0) * math.inf  # unreachable guard
    def f(rho):
        return e0(model, rho) - rho * R

    # golden-section maximization of a concave function on [0, 1]
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = 0.0, 1.0
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = f(d)
    best = max(f(a), f(b), fc, fd, 0.0)
    return best


def ensemble_union_bound(spectrum, n: int, k: int, q: int, m: int,
                         model: DmcModel) -> float:
    """Sum over weight classes of p^(-N E_r(R~_w)), clipped to 1.

    spectrum[w] is A_w (or an upper bound); classes with A_w = 0 contribute
    nothing, and the w = 0 class (the transmitted word itself) is skipped.
    """
    spectrum = np.asarray(spectrum, dtype=object)
    N = n * m
    lp = math.log(model.p)
    total = 0.0
    for w in range(1, n + 1):
        A_w = spectrum[w] if w < len(spectrum) else 0
        if A_w == 0:
            continue
        Rw = r_tilde_w(n, k, q, m, w, A_w=A_w)
        total += math.exp(-N * er(model, Rw) * lp)
    return min(1.0, total)


def approx_ub_bec(N: int, K: int, n: int, k: int, eps: float) -> float:
    """P(L < K) + sum_{l=K}^{N-(n-k+1)} P(L=l) 2^-(l-K), clipped to [0,1].

    L is the binomial count of known digits; the 2^-(l-K) factor estimates the
    rank-deficiency probability of the K x l restriction.
    """
    if eps <= 0.0:
        return 0.0
    if eps >= 1.0:
        return 1.0
    head = float(binom.cdf(K - 1, N, 1.0 - eps))
    hi = N - (n - k + 1)
    total = head
    if hi >= K:
        ells = np.arange(K, hi + 1)
        logpmf = binom.logpmf(ells, N, 1.0 - eps)
        total += float(np.exp(logpmf - (ells - K) * math.log(2.0)).sum())
    return float(min(1.0, max(0.0, total)))


def rcu_bound_grs(code: GrsCode, channel_kind: str, param: float, trials: int,
                  seed: int = 0, spectrum=None, cw_samples: int = 200,
                  b_c: float | None = None):
    """Monte Carlo RCU bound for the GRS coset ensemble.

    Per trial: a uniform coset representative is transmitted, pairwise error
    probabilities PEP_w are estimated by sampling uniform weight-w competitor
    vectors, and min(1, sum_w A_w PEP_w) is accumulated.  Returns
    (mean, ci_lo, ci_hi) with a 95% normal interval.
    """
    F = code.field
    p, m, n, k, q = F.p, F.m, code.n, code.k, F.q
    N = n * m
    if spectrum is None:
        spectrum = [weight_class_bound(n, k, q, w) for w in range(n + 1)]
    log_aw = {w: math.log(spectrum[w]) for w in range(1, n + 1) if spectrum[w]}
    if b_c is None:
        b_c = code.K * math.log2(p) / N
    rng = np.random.default_rng(seed)
    if channel_kind == "bpsk-awgn":
        sigma = math.sqrt(1.0 / (2.0 * b_c * 10.0 ** (param / 10.0)))
        centers = np.array([1.0, -1.0])
    elif channel_kind == "pam3-awgn":
        sigma = math.sqrt(1.0 / (2.0 * b_c * 10.0 ** (param / 10.0)))
        centers = PAM3_AMP * (np.arange(3.0) - 1.0)
    elif channel_kind == "bec":
        sigma = None
    else:
        raise ConfigError("rcu.channel", f"unsupported channel {channel_kind!r}")

    vals = np.zeros(trials)
    for t in range(trials):
        a = rng.integers(0, q, size=n)
        x = F.phi_inv_vec(a).reshape(N).astype(np.int64)
        if sigma is not None:
            y = centers[x] + sigma * rng.standard_normal(N)
        else:
            known = rng.random(N) >= param
        log_total = []
        for w, law in log_aw.items():
            hits = 0
            for _ in range(cw_samples):
                support = rng.permutation(n)[:w]
                cw = np.zeros(n, dtype=np.int64)
                cw[support] = rng.integers(1, q, size=w)
                xp = F.phi_inv_vec(F.add_vec(cw, a)).reshape(N).astype(np.int64)
                if sigma is not None:
                    diff = np.flatnonzero(xp != x)
                    d_new = ((y[diff] - centers[xp[diff]]) ** 2).sum()
                    d_old = ((y[diff] - centers[x[diff]]) ** 2).sum()
                    hits += d_new <= d_old
                else:
                    diff = xp != x
                    hits += not np.any(diff & known)
            if hits:
                log_total.append(law + math.log(hits / cw_samples))
        if log_total:
            vals[t] = min(1.0, float(np.exp(logsumexp(log_total))))
    mean = float(vals.mean())
    half = 1.96 * float(vals.std(ddof=1)) / math.sqrt(trials) if trials > 1 else 0.0
    return mean, max(0.0, mean - half), min(1.0, mean + half)


def clopper_pearson(errors: int, trials: int, alpha: float = 0.05):
    """Exact binomial 95% CI for a frame error rate."""
    if trials == 0:
        return 0.0, 1.0
    lo = 0.0 if errors == 0 else float(beta_dist.ppf(alpha / 2, errors, trials - errors + 1))
    hi = 1.0 if errors == trials else float(
        beta_dist.ppf(1 - alpha / 2, errors + 1, trials - errors)
    )
    return lo, hi
