"""Seeded Monte Carlo experiment driver.

Every trial derives its generator from (master_seed, grid_index, trial_index),
so results are bit-identical for any worker count; trials are executed in
fixed-size chunks and chunk results are folded in chunk order, which makes the
adaptive stopping rule scheduler-independent as well.

Frame errors compare decoded and transmitted information digits bit-exactly.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dataclass_field

import numpy as np
from scipy.stats import binom

from . import __version__
from .bounds import clopper_pearson
from .channel import bec_transmit, bpsk_awgn_transmit, pam3_awgn_transmit, trial_rng
from .erasure import cob_iteration_stats, decode_bec, decode_bec_dual
from .errors import ConfigError, InvalidTritPairError
from .gf import field_new
from .grs import GrsCode, grs_new
from .lcosd import OsdConfig, lcosd_decode, pack_bits_to_trits, unpack_trits_to_bits

SCHEMA_VERSION = "grslab-sim-v1"
SIM_COLUMNS = [
    "channel_param", "trials", "errors", "fer", "ci_lo", "ci_hi",
    "mean_iters", "mean_queries", "certified_frac",
]
TABLE1_COLUMNS = [
    "K", "eps", "trials", "p_condition",
    "mean_iters_change_of_basis", "mean_iters_original_ge",
]
DEFAULT_CODE_SEED = 101

# Named code presets used by the comparison experiments; AWGN code labels are
# p-ary [N, K] with shortening when K is not a multiple of m.
CODE_PRESETS = {
    "tern-63-32": dict(p=3, m=3, n=21, k=11, shorten=1, j="random", a="random"),
    "tern-63-35": dict(p=3, m=3, n=21, k=12, shorten=1, j="random", a="random"),
    "bin-64-51": dict(p=2, m=4, n=16, k=13, shorten=1, j="random", a="zero", extend_zero=True),
    "bin-64-56": dict(p=2, m=4, n=16, k=14, shorten=0, j="random", a="zero", extend_zero=True),
    "tern-128-80": dict(p=3, m=4, n=32, k=20, shorten=0, j="random", a="random"),
    "bin-128-120": dict(p=2, m=8, n=16, k=15, shorten=0, j="random", a="zero"),
    "bec-128-64": dict(p=2, m=8, n=16, k=8, j="random", a="zero"),
    "bec-256-128": dict(p=2, m=8, n=32, k=16, j="random", a="zero"),
    "bec-512-256": dict(p=2, m=8, n=64, k=32, j="random", a="zero"),
    "bec-1024-256": dict(p=2, m=8, n=128, k=32, j="random", a="zero"),
    "bec-1024-512": dict(p=2, m=8, n=128, k=64, j="random", a="zero"),
    "bec-1024-768": dict(p=2, m=8, n=128, k=96, j="random", a="zero"),
}

COMPARE_PAIRINGS = {
    # ternary source vs binary source at matched bits per channel use
    "tern32-vs-bin51": ("tern-63-32", "native", "bin-64-51", "native"),
    "tern35-vs-bin56": ("tern-63-35", "native", "bin-64-56", "native"),
    # 120-bit binary source: packed ternary coding vs direct binary coding
    "packed120-vs-bin120": ("tern-128-80", "packed-bits:120", "bin-128-120", "native"),
}


def make_code(params: dict) -> GrsCode:
    if "path" in params:
        with open(params["path"]) as fh:
            return GrsCode.from_json(fh.read())
    if "preset" in params:
        base = dict(CODE_PRESETS[params["preset"]])
        base["seed"] = params.get("seed", DEFAULT_CODE_SEED)
        return make_code(base)
    p, m = params["p"], params["m"]
    field = field_new(p, m, params.get("f"))
    return grs_new(
        field, params["n"], params["k"],
        j=params.get("j", "random"), a=params.get("a", "zero"),
        seed=params.get("seed", DEFAULT_CODE_SEED),
        extend_zero=params.get("extend_zero", False),
        shorten=params.get("shorten", 0),
    )


@dataclass
class TrialPolicy:
    min_trials: int = 1000
    min_errors: int = 100
    max_trials: int = 10_000_000
    chunk: int = 0  # 0: derived from min_trials

    def chunk_size(self) -> int:
        if self.chunk:
            return self.chunk
        return max(50, min(2000, self.min_trials // 2 or 50))


@dataclass
class ExperimentSpec:
    code: dict
    channel_kind: str
    grid: list
    decoder: dict = dataclass_field(default_factory=lambda: {"kind": "auto"})
    source: str = "native"
    policy: TrialPolicy = dataclass_field(default_factory=TrialPolicy)
    seed: int = 0
    workers: int = 1

    @staticmethod
    def from_dict(doc: dict) -> "ExperimentSpec":
        def need(key):
            if key not in doc:
                raise ConfigError(key, "missing required field")
            return doc[key]

        code = need("code")
        channel = need("channel")
        if "kind" not in channel:
            raise ConfigError("channel.kind", "missing channel kind")
        if channel["kind"] not in ("bec", "bpsk-awgn", "pam3-awgn"):
            raise ConfigError("channel.kind", f"unknown channel {channel['kind']!r}")
        grid = channel.get("grid", [])
        if not grid:
            raise ConfigError("channel.grid", "parameter grid must be non-empty")
        policy = TrialPolicy(**doc.get("trials", {}))
        if policy.min_errors < 1:
            raise ConfigError("trials.min_errors", "min error events must be >= 1")
        spec = ExperimentSpec(
            code=code, channel_kind=channel["kind"], grid=list(grid),
            decoder=doc.get("decoder", {"kind": "auto"}),
            source=doc.get("source", "native"), policy=policy,
            seed=int(doc.get("seed", 0)), workers=int(doc.get("workers", 1)),
        )
        spec.validate()
        return spec

    def validate(self):
        code = make_code(self.code)
        kind = self.decoder.get("kind", "auto")
        if self.channel_kind == "bec":
            if kind not in ("auto", "erasure-ml", "erasure-ml-dual", "erasure-rank"):
                raise ConfigError("decoder.kind", f"{kind!r} cannot decode erasures")
        else:
            if kind not in ("auto", "lc-osd"):
                raise ConfigError("decoder.kind", f"{kind!r} cannot decode soft output")
            OsdConfig(
                delta=self.decoder.get("delta", 4),
                l_max=self.decoder.get("l_max", 1 << 14),
                stop_rule=self.decoder.get("stop_rule", "safe-optimal"),
            ).validate(code.N, code.K_full)
        if self.source.startswith("packed-bits"):
            if code.field.p != 3:
                raise ConfigError("source", "bit packing requires a ternary code")
            bits = int(self.source.split(":")[1])
            if 2 * ((bits + 2) // 3) != code.K:
                raise ConfigError(
                    "source", f"{bits} bits pack into {2 * ((bits + 2) // 3)} trits != K={code.K}"
                )
        elif self.source != "native":
            raise ConfigError("source", f"unknown source {self.source!r}")

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "channel": {"kind": self.channel_kind, "grid": self.grid},
            "decoder": self.decoder,
            "source": self.source,
            "trials": asdict(self.policy),
            "seed": self.seed,
            "workers": self.workers,
        }

    def b_c(self, code: GrsCode) -> float:
        if self.source.startswith("packed-bits"):
            return int(self.source.split(":")[1]) / code.N
        return code.K * math.log2(code.field.p) / code.N


@dataclass
class RunResult:
    points: list
    manifest: dict

    def write_csv(self, path: str):
        with open(path, "w") as fh:
            fh.write(",".join(SIM_COLUMNS) + "\n")
            for pt in self.points:
                fh.write(",".join(_fmt(pt[c]) for c in SIM_COLUMNS) + "\n")
        with open(path + ".manifest.json", "w") as fh:
            json.dump(self.manifest, fh, indent=1)


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".10g")
    return str(x)


# -- per-trial execution -------------------------------------------------------------


class _Runner:
    def __init__(self, spec: ExperimentSpec):
        self.spec = spec
        self.code = make_code(spec.code)
        self.image = self.code.image_matrices()
        self.b_c = spec.b_c(self.code)
        kind = spec.decoder.get("kind", "auto")
        if spec.channel_kind == "bec" and kind == "auto":
            kind = "erasure-ml-dual" if self.code.k > self.code.n - self.code.k else "erasure-ml"
        elif kind == "auto":
            kind = "lc-osd"
        self.kind = kind
        if kind == "lc-osd":
            self.osd = OsdConfig(
                delta=spec.decoder.get("delta", 4),
                l_max=spec.decoder.get("l_max", 1 << 14),
                stop_rule=spec.decoder.get("stop_rule", "safe-optimal"),
            )
        self.src_bits = (
            int(spec.source.split(":")[1]) if spec.source.startswith("packed-bits") else 0
        )

    def run_chunk(self, grid_index: int, t0: int, t1: int, trace: bool = False):
        spec = self.spec
        param = spec.grid[grid_index]
        p = self.code.field.p
        agg = {"trials": 0, "errors": 0, "iters": 0.0, "queries": 0.0, "certified": 0}
        rows = [] if trace else None
        for t in range(t0, t1):
            rng = trial_rng(spec.seed, grid_index, t)
            if self.src_bits:
                bits = rng.integers(0, 2, self.src_bits).astype(np.int8)
                v = pack_bits_to_trits(bits)
            else:
                v = rng.integers(0, p, self.code.K).astype(np.int8)
            x = self.code.encode_p(v)
            if spec.channel_kind == "bec":
                out = bec_transmit(x, param, rng)
                if self.kind == "erasure-rank":
                    counts = out.known.reshape(self.code.n, self.code.field.m).sum(axis=1)
                    if int((counts == self.code.field.m).sum()) >= self.code.k:
                        iters, ok = 0, True
                    else:
                        iters, _, ok = cob_iteration_stats(self.code, out.known)
                    err = not ok
                    agg["iters"] += iters
                    if trace:
                        rows.append((t, int((~out.known).sum()), iters, int(not ok), int(not err)))
                else:
                    dec = decode_bec_dual if self.kind == "erasure-ml-dual" else decode_bec
                    vhat, st = dec(self.code, self.image, out)
                    err = not np.array_equal(vhat, v)
                    agg["iters"] += st.iterations
                    if trace:
                        rows.append((
                            t, int((~out.known).sum()), st.iterations,
                            int(st.rank_deficient), int(not err),
                        ))
            else:
                if spec.channel_kind == "bpsk-awgn":
                    soft = bpsk_awgn_transmit(x, param, self.b_c, rng, a_p=self.image.a_p)
                else:
                    soft = pam3_awgn_transmit(x, self.image.a_p, param, self.b_c, rng)
                res = lcosd_decode(self.code, self.image, soft, self.osd)
                if self.src_bits:
                    try:
                        bhat = unpack_trits_to_bits(res.message, self.src_bits)
                        err = not np.array_equal(bhat, bits)
                    except InvalidTritPairError:
                        err = True
                else:
                    err = not np.array_equal(res.message, v)
                agg["queries"] += res.queries
                agg["certified"] += int(res.ml_certified)
                if trace:
                    rows.append((t, res.queries, int(res.ml_certified), int(not err),
                                 format(res.weight, ".6g")))
            agg["trials"] += 1
            agg["errors"] += int(err)
        return agg, rows


_WORKER_RUNNER: dict = {}


def _chunk_task(spec_json: str, grid_index: int, t0: int, t1: int, trace: bool):
    runner = _WORKER_RUNNER.get(spec_json)
    if runner is None:
        runner = _Runner(ExperimentSpec.from_dict(json.loads(spec_json)))
        _WORKER_RUNNER.clear()
        _WORKER_RUNNER[spec_json] = runner
    return runner.run_chunk(grid_index, t0, t1, trace)


def _iter_chunk_results(spec: ExperimentSpec, grid_index: int, trace: bool, pool):
    """Yield chunk results in chunk order regardless of completion order."""
    chunk = spec.policy.chunk_size()
    max_chunks = math.ceil(spec.policy.max_trials / chunk)
    spec_json = json.dumps(spec.to_dict(), sort_keys=True)
    if pool is None:
        for ci in range(max_chunks):
            t0 = ci * chunk
            t1 = min(t0 + chunk, spec.policy.max_trials)
            yield _chunk_task(spec_json, grid_index, t0, t1, trace)
        return
    window = spec.workers * 2
    pending = {}
    next_submit = 0
    next_yield = 0
    while next_yield < max_chunks:
        while next_submit < max_chunks and len(pending) < window:
            t0 = next_submit * chunk
            t1 = min(t0 + chunk, spec.policy.max_trials)
            pending[next_submit] = pool.submit(_chunk_task, spec_json, grid_index, t0, t1, trace)
            next_submit += 1
        fut = pending.pop(next_yield)
        yield fut.result()
        next_yield += 1
    for fut in pending.values():
        fut.cancel()


def run(spec: ExperimentSpec, trace_path: str | None = None) -> RunResult:
    """Sweep the channel grid; each point stops at min(max_trials, first chunk
    boundary with >= min_errors after >= min_trials)."""
    pool = None
    if spec.workers > 1:
        pool = ProcessPoolExecutor(max_workers=spec.workers)
    trace_rows = []
    try:
        points = []
        for g, param in enumerate(spec.grid):
            agg = {"trials": 0, "errors": 0, "iters": 0.0, "queries": 0.0, "certified": 0}
            for chunk_agg, rows in _iter_chunk_results(spec, g, trace_path is not None, pool):
                for key in agg:
                    agg[key] += chunk_agg[key]
                if rows:
                    trace_rows.extend([(param,) + r for r in rows])
                done = agg["trials"]
                if done >= spec.policy.max_trials:
                    break
                if done >= spec.policy.min_trials and agg["errors"] >= spec.policy.min_errors:
                    break
            fer = agg["errors"] / agg["trials"]
            lo, hi = clopper_pearson(agg["errors"], agg["trials"])
            points.append({
                "channel_param": param,
                "trials": agg["trials"],
                "errors": agg["errors"],
                "fer": fer,
                "ci_lo": lo,
                "ci_hi": hi,
                "mean_iters": agg["iters"] / agg["trials"],
                "mean_queries": agg["queries"] / agg["trials"],
                "certified_frac": agg["certified"] / agg["trials"],
            })
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    code = make_code(spec.code)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "spec": spec.to_dict(),
        "code_json": json.loads(code.to_json()),
        "b_c": spec.b_c(code),
        "version": __version__,
    }
    if trace_path:
        _write_trace(trace_path, spec, trace_rows)
    return RunResult(points=points, manifest=manifest)


def _write_trace(path: str, spec: ExperimentSpec, rows: list):
    with open(path, "w") as fh:
        if spec.channel_kind == "bec":
            fh.write("channel_param,trial,erasures,iterations,rank_deficient,success\n")
        else:
            fh.write("channel_param,trial,queries_used,ml_certified,success,soft_weight_of_output\n")
        for r in rows:
            fh.write(",".join(str(x) for x in r) + "\n")


# -- Table-I style iteration accounting ------------------------------------------------


def conditional_erasure_sampler(n: int, m: int, eps: float, k: int, K: int):
    """Exact sampler of per-symbol erased counts conditioned on the event that
    the change-of-basis path runs: fewer than k fully known symbols and at
    least K known digits overall.

    Returns (sample(rng) -> counts, P(condition)).  Sampling walks a DP over
    (remaining erasure budget, remaining fully-known allowance).
    """
    S = n * m - K
    zmax = k - 1
    pmf = binom.pmf(np.arange(m + 1), m, eps)
    layers = [np.ones((S + 1, zmax + 1))]
    for _ in range(n):
        T = layers[-1]
        Tn = np.zeros_like(T)
        for e in range(m + 1):
            if pmf[e] == 0.0:
                continue
            if e == 0:
                Tn[:, 1:] += pmf[0] * T[:, :-1]
            elif e <= S:
                Tn[e:, :] += pmf[e] * T[: S + 1 - e, :]
        layers.append(Tn)
    layers = layers[::-1]
    p_cond = min(1.0, float(layers[0][S, zmax]))

    def sample(rng: np.random.Generator) -> np.ndarray:
        s, z = S, zmax
        counts = np.zeros(n, dtype=np.int64)
        for i in range(n):
            nxt = layers[i + 1]
            w = np.zeros(m + 1)
            top = min(m, s)
            w[1 : top + 1] = pmf[1 : top + 1] * nxt[s - np.arange(1, top + 1), z]
            if z > 0:
                w[0] = pmf[0] * nxt[s, z - 1]
            cum = np.cumsum(w)
            e = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
            counts[i] = e
            s -= e
            if e == 0:
                z -= 1
        return counts

    return sample, p_cond


def _known_mask_from_counts(counts: np.ndarray, m: int, rng: np.random.Generator) -> np.ndarray:
    n = counts.shape[0]
    ranks = np.argsort(rng.random((n, m)), axis=1).argsort(axis=1)
    return (ranks >= counts[:, None]).reshape(-1)


def _table1_chunk(code_doc: str, eps: float, cell: int, seed: int, t0: int, t1: int):
    key = (code_doc, eps)
    ctx = _WORKER_RUNNER.get(key)
    if ctx is None:
        code = GrsCode.from_json(code_doc)
        sampler, p_cond = conditional_erasure_sampler(
            code.n, code.field.m, eps, code.k, code.K_full
        )
        ctx = (code, sampler, p_cond)
        _WORKER_RUNNER[key] = ctx
    code, sampler, p_cond = ctx
    m = code.field.m
    sums = np.zeros(2)
    for t in range(t0, t1):
        rng = trial_rng(seed, cell, t)
        counts = sampler(rng)
        known = _known_mask_from_counts(counts, m, rng)
        it_cob, _, _ = cob_iteration_stats(code, known)
        it_ge, _, _ = cob_iteration_stats(code, known, offline=True)
        sums += (it_cob, it_ge)
    return sums, p_cond


def table1(K_list=(256, 512, 768), eps_list=(0.1, 0.2, 0.3), trials: int = 10_000,
           seed: int = 0, workers: int = 1, code_seed: int = DEFAULT_CODE_SEED,
           poly=None):
    """Mean column-reduction iterations for C_GRS[1024, K] over GF(2^8).

    Averages are over trials where the change-of-basis path runs (fewer than
    k fully known symbols and at least K known digits); realizations are drawn
    exactly from that conditional law, so every trial counts.
    """
    F = field_new(2, 8, poly)
    rows = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        cell = 0
        for K in K_list:
            code = grs_new(F, 128, K // 8, j="random", a="zero", seed=code_seed)
            doc = code.to_json()
            for eps in eps_list:
                chunk = max(200, trials // max(1, 4 * workers))
                ranges = [(t0, min(t0 + chunk, trials)) for t0 in range(0, trials, chunk)]
                if pool is None:
                    parts = [_table1_chunk(doc, eps, cell, seed, a, b) for a, b in ranges]
                else:
                    futs = [pool.submit(_table1_chunk, doc, eps, cell, seed, a, b)
                            for a, b in ranges]
                    parts = [f.result() for f in futs]
                sums = np.sum([p[0] for p in parts], axis=0)
                p_cond = parts[0][1]
                rows.append({
                    "K": K, "eps": eps, "trials": trials, "p_condition": p_cond,
                    "mean_iters_change_of_basis": sums[0] / trials,
                    "mean_iters_original_ge": sums[1] / trials,
                })
                cell += 1
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return rows


def write_table1_csv(rows, path: str):
    with open(path, "w") as fh:
        fh.write(",".join(TABLE1_COLUMNS) + "\n")
        for r in rows:
            fh.write(",".join(_fmt(r[c]) for c in TABLE1_COLUMNS) + "\n")


# -- paired source comparisons -----------------------------------------------------------


def compare_sources(pairing: str, grid, policy: TrialPolicy | None = None,
                    decoder: dict | None = None, seed: int = 0, workers: int = 1):
    """Run the two codes of a pairing over a shared E_b/N0 grid in dB.

    E_b is normalized by each run's own information rate (bits per channel
    use), which is what makes ternary and binary curves comparable.
    """
    if pairing not in COMPARE_PAIRINGS:
        raise ConfigError("pairing", f"unknown pairing {pairing!r}; "
                          f"choose from {sorted(COMPARE_PAIRINGS)}")
    preset_a, source_a, preset_b, source_b = COMPARE_PAIRINGS[pairing]
    policy = policy or TrialPolicy()
    decoder = decoder or {"kind": "lc-osd", "delta": 6, "l_max": 1 << 12}
    results = []
    for preset, source in ((preset_a, source_a), (preset_b, source_b)):
        kind = "pam3-awgn" if CODE_PRESETS[preset]["p"] == 3 else "bpsk-awgn"
        spec = ExperimentSpec(
            code={"preset": preset}, channel_kind=kind, grid=list(grid),
            decoder=dict(decoder), source=source, policy=policy,
            seed=seed, workers=workers,
        )
        spec.validate()
        results.append(run(spec))
    return tuple(results)


# -- rank-deficiency statistics -----------------------------------------------------------


def rank_deficiency_curve(code: GrsCode, offsets, samples: int, seed: int = 0):
    """Estimate P(rank(image restricted to l uniform columns) < K | L = l).

    Conditioned on its size, the known set of an erasure channel is a uniform
    subset, so sampling uniform column subsets gives the exact conditional law.
    Binary codes only (rows are packed into machine words for the rank).
    """
    if code.field.p != 2:
        raise ConfigError("rank-deficiency", "bit-packed rank requires p=2")
    G = code.image_matrices().G_p.astype(np.int64)
    K, N = G.shape
    rng = np.random.default_rng(seed)
    out = []
    for off in offsets:
        ell = K + off
        weights = 1 << np.arange(ell, dtype=np.int64)
        deficient = 0
        batch = 2000
        left = samples
        while left > 0:
            b = min(batch, left)
            cols = np.argsort(rng.random((b, N)), axis=1)[:, :ell]
            subs = G.T[cols]                # (b, ell, K)
            packed = np.einsum("bek,e->bk", subs, weights)  # (b, K) rows as ints
            for rowset in packed:
                deficient += _gf2_rank(rowset.tolist()) < K
            left -= b
        out.append({"ell_minus_K": off, "samples": samples,
                    "p_deficient": deficient / samples})
    return out


def _gf2_rank(rows) -> int:
    pivots = {}
    rank = 0
    for v in rows:
        while v:
            hb = v.bit_length() - 1
            piv = pivots.get(hb)
            if piv is None:
                pivots[hb] = v
                rank += 1
                break
            v ^= piv
    return rank
