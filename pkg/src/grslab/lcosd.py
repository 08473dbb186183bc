"""Soft-decision LC-OSD decoding of p-ary GRS images (p in {2, 3}).

Pipeline per trial: symbol reliability ordering, parallel Lagrange
interpolation to a systematic form, change-of-basis swaps that pull the most
reliable positions into the basis (the extended MRB), then ordered test
error pattern (TEP) enumeration.  TEP prefixes over the basis and the delta
most reliable parity positions are emitted in non-decreasing partial soft
weight by a serial list Viterbi search over a trellis with p^delta states
(plus p^t more when t message digits are pinned by shortening).  Each prefix
extends uniquely to a full TEP; enumeration stops once the best completed
weight is no larger than the next partial weight (a sound ML certificate,
since completion weights are non-negative) or the query budget is exhausted.
"""

from __future__ import annotations

import heapq
from array import array
from dataclasses import dataclass

import numpy as np

from .channel import SoftOutput
from .errors import ConfigError, InvalidTritPairError, LengthMismatchError
from .erasure import SymbolReliabilityOrder
from .grs import GrsCode, PAryImage
from .systematic import build_systematic_form


@dataclass
class OsdConfig:
    delta: int = 4
    l_max: int = 1 << 14
    stop_rule: str = "safe-optimal"  # or "max-queries"

    def validate(self, N: int, K: int):
        if not (0 <= self.delta <= N - K):
            raise ConfigError("decoder.delta", f"delta={self.delta} outside [0, N-K={N-K}]")
        if self.l_max < 1:
            raise ConfigError("decoder.l_max", "l_max must be >= 1")
        if self.stop_rule not in ("safe-optimal", "max-queries"):
            raise ConfigError("decoder.stop_rule", f"unknown stop rule {self.stop_rule!r}")


@dataclass
class Tep:
    e_I: np.ndarray
    e_P1: np.ndarray
    e_P2: np.ndarray
    weight: float


@dataclass
class LcosdResult:
    message: np.ndarray        # information digits (after shortening)
    codeword: np.ndarray       # linear-part image word, original digit order
    queries: int
    ml_certified: bool
    weight: float
    basis_swaps: int


def order_soft_symbols(soft: SoftOutput, m: int, K: int) -> SymbolReliabilityOrder:
    """Sort symbols by membership count in the K most reliable digits, then by
    total digit reliability, then by index."""
    rel = soft.reliability
    N = rel.shape[0]
    n = N // m
    by_rel = np.lexsort((np.arange(N), -rel))
    zstar = np.zeros(N, dtype=bool)
    zstar[by_rel[:K]] = True
    counts = zstar.reshape(n, m).sum(axis=1)
    sums = rel.reshape(n, m).sum(axis=1)
    perm = np.lexsort((np.arange(n), -sums, -counts))
    return SymbolReliabilityOrder(perm=perm, counts=counts)


def soft_weight(e, soft: SoftOutput) -> float:
    """gamma(e) = sum over the support of the per-position log-density drops.

    The coset shift is already folded into soft.costs by the channel front
    end, so gamma(e) >= 0 with equality iff e = 0.
    """
    e = np.asarray(e)
    if e.shape != soft.z.shape:
        raise LengthMismatchError(f"pattern shape {e.shape} != output shape {soft.z.shape}")
    nz = np.flatnonzero(e)
    if nz.size == 0:
        return 0.0
    return float(soft.costs[nz, e[nz] - 1].sum())


# -- bit/trit packing -------------------------------------------------------------


def pack_bits_to_trits(v) -> np.ndarray:
    """Represent each 3 bits as 2 trits; output length 2*ceil(K/3).

    The 8 binary patterns map injectively into trit pairs via the base-3
    digits of the block value, leaving the pair (2, 2) unused.
    """
    v = np.asarray(v, dtype=np.int64)
    K = v.shape[0]
    nb = (K + 2) // 3
    padded = np.zeros(3 * nb, dtype=np.int64)
    padded[:K] = v
    blocks = padded.reshape(nb, 3)
    vals = blocks[:, 0] * 4 + blocks[:, 1] * 2 + blocks[:, 2]
    out = np.stack([vals // 3, vals % 3], axis=1).reshape(-1)
    return out.astype(np.int8)


def unpack_trits_to_bits(t, K: int) -> np.ndarray:
    """Inverse of pack_bits_to_trits onto the image; raises off the image."""
    t = np.asarray(t, dtype=np.int64)
    if t.shape[0] != 2 * ((K + 2) // 3):
        raise LengthMismatchError(f"expected {2 * ((K + 2) // 3)} trits for K={K} bits")
    pairs = t.reshape(-1, 2)
    vals = pairs[:, 0] * 3 + pairs[:, 1]
    if np.any(vals > 7):
        raise InvalidTritPairError("trit pair (2,2) is outside the packing image")
    bits = np.stack([(vals >> 2) & 1, (vals >> 1) & 1, vals & 1], axis=1).reshape(-1)
    return bits[:K].astype(np.int8)


# -- constraint trellis and ordered enumeration ------------------------------------


class ConstraintTrellis:
    """Ordered enumeration of label sequences meeting affine GF(p) constraints.

    Stage j contributes label * h[j] to a running checksum in GF(p)^d; the
    accepted sequences are those whose final checksum equals the target.
    next_prefix() emits accepted sequences one at a time in non-decreasing
    total cost, ties broken deterministically by discovery order.
    """

    def __init__(self, costs: np.ndarray, hvecs: np.ndarray, target: np.ndarray, p: int):
        self.p = p
        self.costs = np.asarray(costs, dtype=np.float64)  # (S, p)
        self.S = self.costs.shape[0]
        hvecs = np.asarray(hvecs, dtype=np.int64) % p
        self.d = hvecs.shape[1]
        self.nstates = p**self.d
        target_idx = self._pack(np.asarray(target, dtype=np.int64) % p)
        # transition index arrays: trans[j][e][s] = successor state
        digits = self._state_digits()
        self.trans = []
        base = np.arange(self.nstates)
        for j in range(self.S):
            per_e = [base]
            for e in range(1, p):
                u = (e * hvecs[j]) % p
                per_e.append(self._pack((digits + u[None, :]) % p))
            self.trans.append(per_e)
        # backward min-cost-to-go
        D = np.full((self.S + 1, self.nstates), np.inf)
        D[self.S, target_idx] = 0.0
        for j in range(self.S - 1, -1, -1):
            cand = np.stack([self.costs[j, e] + D[j + 1][self.trans[j][e]] for e in range(p)])
            D[j] = cand.min(axis=0)
        self.D = D
        # search state: heap of (f, tiebreak, node, stage, state)
        self._parent = array("q", [-1])
        self._label = array("b", [0])
        self._heap = [(float(D[0, 0]), 0, 0, 0, 0)]
        self._ctr = 1
        self._ready = None  # cached next complete emission (weight, labels)
        self.emitted = 0

    def _state_digits(self) -> np.ndarray:
        if self.d == 0:
            return np.zeros((1, 0), dtype=np.int64)
        v = np.arange(self.nstates)
        return np.stack([(v // self.p**i) % self.p for i in range(self.d)], axis=1)

    def _pack(self, digits: np.ndarray) -> np.ndarray:
        if self.d == 0:
            return np.zeros(digits.shape[:-1], dtype=np.int64)
        w = self.p ** np.arange(self.d)
        return (digits * w).sum(axis=-1)

    def _advance(self):
        heap = self._heap
        parent, label = self._parent, self._label
        p, S = self.p, self.S
        while heap:
            f, _, node, stage, state = heapq.heappop(heap)
            if stage == S:
                labels = np.zeros(S, dtype=np.int8)
                nd = node
                for jj in range(S - 1, -1, -1):
                    labels[jj] = label[nd]
                    nd = parent[nd]
                self._ready = (f, labels)
                return
            g = f - self.D[stage, state]
            nxt = self.D[stage + 1]
            for e in range(p):
                s2 = int(self.trans[stage][e][state])
                comp = nxt[s2]
                if comp == np.inf:
                    continue
                parent.append(node)
                label.append(e)
                heapq.heappush(
                    heap, (g + self.costs[stage, e] + comp, self._ctr, len(parent) - 1, stage + 1, s2)
                )
                self._ctr += 1
        self._ready = None

    def peek_weight(self):
        """Partial weight of the next emission; None when exhausted."""
        if self._ready is None:
            self._advance()
        return None if self._ready is None else self._ready[0]

    def next_prefix(self):
        """(weight, labels) of the next accepted sequence; None when exhausted."""
        if self._ready is None:
            self._advance()
        out = self._ready
        self._ready = None
        if out is not None:
            self.emitted += 1
        return out


def slva_next(trellis: ConstraintTrellis):
    """Emit the next-lightest valid prefix, or None when exhausted."""
    return trellis.next_prefix()


# -- per-trial decoder state --------------------------------------------------------


@dataclass
class OsdState:
    code: GrsCode
    cfg: OsdConfig
    bits: np.ndarray        # (K, N) [I | P] after basis improvement + column order
    msg_rows: np.ndarray    # (K, K_full)
    final_perm: np.ndarray  # working position -> original digit index
    z: np.ndarray           # hard decisions, working order
    costs: np.ndarray       # (N, p-1), working order
    basis_swaps: int

    @property
    def K(self) -> int:
        return self.bits.shape[0]

    @property
    def N(self) -> int:
        return self.bits.shape[1]

    def split(self):
        K, d = self.K, self.cfg.delta
        P = self.bits[:, K:]
        return P[:, :d], P[:, d:]


def _improve_basis(bits, msg, reliable_mask, rel, p):
    """Swap unreliable basis columns for reliable non-basis columns.

    Candidates are the reliable non-basis positions in decreasing reliability;
    each successful swap reduces one candidate column to a unit vector.  Rows
    that cannot be repaired keep their original basis position.
    Returns (bits, msg, pivot_col per row, swap count).
    """
    K = bits.shape[0]
    bits = bits.astype(np.int64)
    msg = msg.astype(np.int64)
    pivot = np.arange(K)
    unresolved = list(np.flatnonzero(~reliable_mask[:K]))
    cand = K + np.flatnonzero(reliable_mask[K:])
    cand = cand[np.lexsort((cand, -rel[cand]))]
    swaps = 0
    for c in cand:
        if not unresolved:
            break
        r = next((rr for rr in unresolved if bits[rr, c] != 0), None)
        if r is None:
            continue
        swaps += 1
        f = pow(int(bits[r, c]), -1, p)
        if f != 1:
            bits[r] = (bits[r] * f) % p
            msg[r] = (msg[r] * f) % p
        col = bits[:, c].copy()
        col[r] = 0
        nz = np.flatnonzero(col)
        if nz.size:
            bits[nz] = (bits[nz] - np.outer(col[nz], bits[r])) % p
            msg[nz] = (msg[nz] - np.outer(col[nz], msg[r])) % p
        pivot[r] = c
        unresolved.remove(r)
    return bits, msg, pivot, swaps


def prepare_osd(code: GrsCode, soft: SoftOutput, cfg: OsdConfig) -> OsdState:
    """Reliability ordering, interpolation, and extended-MRB construction."""
    F = code.field
    p, m = F.p, F.m
    K, N = code.K_full, code.N
    cfg.validate(N, K)
    order = order_soft_symbols(soft, m, K)
    sf = build_systematic_form(code, order.perm, want_messages=True)
    rel = soft.reliability[sf.bit_perm]
    by_rel = np.lexsort((np.arange(N), -rel))
    reliable = np.zeros(N, dtype=bool)
    reliable[by_rel[:K]] = True
    bits, msg, pivot, swaps = _improve_basis(sf.bits, sf.msg_rows, reliable, rel, p)
    nonbasis = np.setdiff1d(np.arange(N), pivot)
    nonbasis = nonbasis[np.lexsort((nonbasis, -rel[nonbasis]))]
    colperm = np.concatenate([pivot, nonbasis])
    final_perm = sf.bit_perm[colperm]
    return OsdState(
        code=code, cfg=cfg,
        bits=np.ascontiguousarray(bits[:, colperm]),
        msg_rows=msg, final_perm=final_perm,
        z=soft.z[final_perm].astype(np.int64),
        costs=soft.costs[final_perm], basis_swaps=swaps,
    )


def build_trellis(state: OsdState, soft: SoftOutput | None = None,
                  cfg: OsdConfig | None = None) -> ConstraintTrellis:
    """Trellis over the basis and the delta most reliable parity columns.

    When the code is shortened, the pinned message digits add equality
    constraints of the same affine form, so certified outputs stay inside the
    shortened code.
    """
    cfg = cfg or state.cfg
    p = state.code.field.p
    K, d, t = state.K, cfg.delta, state.code.shorten
    P1, _ = state.split()
    z_I, z_P1 = state.z[:K], state.z[K : K + d]
    Mc = state.msg_rows[:, :t]
    hv = np.zeros((K + d, d + t), dtype=np.int64)
    hv[:K, :d] = P1
    hv[:K, d:] = Mc
    for ell in range(d):
        hv[K + ell, ell] = (-1) % p
    target = np.concatenate([(z_I @ P1 - z_P1) % p, (z_I @ Mc) % p])
    stage_costs = np.zeros((K + d, p))
    stage_costs[:, 1:] = state.costs[: K + d]
    return ConstraintTrellis(stage_costs, hv, target, p)


def complete_tep(state: OsdState, labels: np.ndarray) -> Tep:
    """Extend a valid prefix to the full TEP and its total soft weight."""
    p = state.code.field.p
    K, d = state.K, state.cfg.delta
    e_I = labels[:K].astype(np.int64)
    e_P1 = labels[K:].astype(np.int64)
    _, P2 = state.split()
    z_I, z_P2 = state.z[:K], state.z[K + d :]
    w_P2 = ((z_I - e_I) @ P2) % p
    e_P2 = (z_P2 - w_P2) % p
    nz = np.flatnonzero(labels)
    wt = float(state.costs[nz, labels[nz] - 1].sum()) if nz.size else 0.0
    nz2 = np.flatnonzero(e_P2)
    if nz2.size:
        wt += float(state.costs[K + d :][nz2, e_P2[nz2] - 1].sum())
    return Tep(e_I=e_I, e_P1=e_P1, e_P2=e_P2, weight=wt)


def lcosd_decode(code: GrsCode, image: PAryImage | None, soft: SoftOutput,
                 cfg: OsdConfig) -> LcosdResult:
    """Lightest-soft-weight decoding with ordered queries and a sound stop.

    Output is the best candidate among the queried TEPs; ml_certified is set
    iff no unqueried TEP can be lighter (next partial weight already reaches
    the best total weight, or the query space was exhausted).
    """
    F = code.field
    p = F.p
    state = prepare_osd(code, soft, cfg)
    trellis = build_trellis(state)
    K, d = state.K, cfg.delta
    _, P2 = state.split()
    z_I = state.z[:K]
    base_P2 = (z_I @ P2) % p
    z_P2 = state.z[K + d :]
    cost_P2 = state.costs[K + d :]

    best_w = np.inf
    best_eI = None
    best_prefix_labels = None
    queries = 0
    certified = False
    while queries < cfg.l_max:
        nxt = trellis.peek_weight()
        if nxt is None:
            certified = True
            break
        if cfg.stop_rule == "safe-optimal" and best_w <= nxt:
            certified = True
            break
        prefix_w, labels = trellis.next_prefix()
        queries += 1
        e_I = labels[:K].astype(np.int64)
        nz = np.flatnonzero(e_I)
        w_P2 = base_P2.copy()
        for i in nz:
            w_P2 = w_P2 - e_I[i] * P2[i]
        w_P2 %= p
        e_P2 = (z_P2 - w_P2) % p
        wt = prefix_w
        nz2 = np.flatnonzero(e_P2)
        if nz2.size:
            wt += float(cost_P2[nz2, e_P2[nz2] - 1].sum())
        if wt < best_w:
            best_w = wt
            best_eI = e_I
            best_prefix_labels = labels
    if not certified:
        nxt = trellis.peek_weight()
        if nxt is None or best_w <= nxt:
            certified = True

    t_coef = (z_I - best_eI) % p
    v_full = (t_coef @ state.msg_rows.astype(np.int64)) % p
    w_work = np.concatenate([t_coef, (t_coef @ state.bits[:, K:].astype(np.int64)) % p])
    w_orig = np.zeros(state.N, dtype=np.int64)
    w_orig[state.final_perm] = w_work
    return LcosdResult(
        message=v_full[code.shorten :].astype(np.int8),
        codeword=w_orig.astype(np.int8),
        queries=queries,
        ml_certified=certified,
        weight=float(best_w),
        basis_swaps=state.basis_swaps,
    )
