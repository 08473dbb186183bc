"""Exact ML decoding of GRS p-ary images over erasure channels.

If at least k symbols are completely known, the message polynomial is
reconstructed directly by interpolation.  Otherwise the decoder builds a
symbol-reliability-ordered systematic matrix by parallel Lagrange
interpolation and repairs the erased basis digits by a change of basis:
column reductions that swap erased basis columns for known non-basis columns.
When the repair system is rank deficient the unresolved basis digits are
zero-filled and the output is flagged; the emitted guess is still compared
bit-exactly by the harness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import BecOutput
from .grs import GrsCode, PAryImage, interpolate_coeffs
from .systematic import (
    SystematicForm,
    build_systematic_form,
    count_column_reductions_gf2,
    interpolation_rows,
    solve_by_column_reduction,
)


@dataclass
class SymbolReliabilityOrder:
    """Symbol permutation, most reliable first; ties broken by ascending index."""

    perm: np.ndarray
    counts: np.ndarray  # known digits per symbol, original order


@dataclass
class DecodeStats:
    iterations: int = 0
    rank_deficient: bool = False
    fallback_used: bool = False
    success: bool = True
    path: str = "cob"
    n_known: int = 0
    delta: int = 0


def order_symbols(out: BecOutput, m: int) -> SymbolReliabilityOrder:
    """Sort symbols by known-digit count (desc), then by index (asc)."""
    known = out.known
    n = known.shape[0] // m
    counts = known.reshape(n, m).sum(axis=1)
    perm = np.lexsort((np.arange(n), -counts))
    return SymbolReliabilityOrder(perm=perm, counts=counts)


def lagrange_systematize(code: GrsCode, order: SymbolReliabilityOrder) -> SystematicForm:
    """Systematic form on the ordered basis symbols (identity on the first k)."""
    return build_systematic_form(code, order.perm, want_messages=True)


def change_of_basis(sf: SystematicForm, out: BecOutput):
    """Column-reduce erased basis columns against known non-basis columns.

    Returns the transformed SystematicForm (msg_rows transformed consistently)
    and the iteration statistics.  One iteration reduces one column to a unit
    vector across all rows.
    """
    p = sf.code.field.p
    K = sf.KK
    known_perm, basis_known, defic_rows, delta = sf.basis_split(out.known)
    bits = sf.bits.astype(np.int64).copy()
    msg = None if sf.msg_rows is None else sf.msg_rows.astype(np.int64).copy()
    unresolved = list(np.flatnonzero(defic_rows))
    iterations = 0
    for c in np.flatnonzero(known_perm[K:]) + K:
        if not unresolved:
            break
        r = next((rr for rr in unresolved if bits[rr, c] != 0), None)
        if r is None:
            continue
        iterations += 1
        f = pow(int(bits[r, c]), -1, p)
        if f != 1:
            bits[r] = (bits[r] * f) % p
            if msg is not None:
                msg[r] = (msg[r] * f) % p
        col = bits[:, c].copy()
        col[r] = 0
        nz = np.flatnonzero(col)
        if nz.size:
            bits[nz] = (bits[nz] - np.outer(col[nz], bits[r])) % p
            if msg is not None:
                msg[nz] = (msg[nz] - np.outer(col[nz], msg[r])) % p
        unresolved.remove(r)
    deficient = bool(unresolved)
    stats = DecodeStats(
        iterations=iterations,
        rank_deficient=deficient,
        fallback_used=deficient,
        success=not deficient,
        n_known=out.n_known,
        delta=delta,
    )
    sf2 = SystematicForm(
        code=sf.code, sym_order=sf.sym_order, symbol_matrix=sf.symbol_matrix,
        bits=bits.astype(np.int8), bit_perm=sf.bit_perm,
        msg_rows=None if msg is None else msg.astype(np.int8), dual=sf.dual,
    )
    return sf2, stats


def _shift_removed_values(code: GrsCode, out: BecOutput) -> np.ndarray:
    """Known channel digits with the coset shift subtracted (linear-code view)."""
    p = code.field.p
    if np.any(code.a):
        return ((out.values.astype(np.int64) - code.a_p) % p).astype(np.int64)
    return out.values.astype(np.int64)


def _message_by_interpolation(code: GrsCode, sym_idx, sym_values) -> np.ndarray:
    """Message digits from >= k fully known (shift-removed) symbols."""
    F = code.field
    vals = F.mul_vec(sym_values, F.inv_vec(code.col_mults[sym_idx]))
    u = interpolate_coeffs(F, code.eval_points[sym_idx], vals)
    return F.phi_inv_vec(u).reshape(code.K_full).astype(np.int8)


def decode_bec(code: GrsCode, image: PAryImage | None, out: BecOutput):
    """ML erasure decoding through the generator-side systematic form."""
    if code.shorten:
        raise NotImplementedError("erasure decoding of shortened codes is not supported")
    F = code.field
    p, m = F.p, F.m
    n, k, K = code.n, code.k, code.K_full
    y = _shift_removed_values(code, out)
    counts = out.known.reshape(n, m).sum(axis=1)
    full = np.flatnonzero(counts == m)
    if full.size >= k:
        idx = full[:k]
        zeta = F.phi_vec(y.reshape(n, m)[idx])
        v = _message_by_interpolation(code, idx, zeta)
        return v, DecodeStats(path="direct", n_known=out.n_known)

    order = order_symbols(out, m)
    sf = build_systematic_form(code, order.perm, want_messages=True)
    kp = out.known[sf.bit_perm]
    yp = y[sf.bit_perm]
    basis_known = kp[:K]
    defic = ~basis_known
    delta = int(defic.sum())
    cand = K + np.flatnonzero(kp[K:])
    t = np.zeros(K, dtype=np.int64)
    t[basis_known] = yp[:K][basis_known]
    Q21 = sf.bits[defic][:, cand]
    rhs = (yp[cand] - t[basis_known] @ sf.bits[basis_known][:, cand].astype(np.int64)) % p
    res = solve_by_column_reduction(Q21, rhs, p)
    t[defic] = res.t
    v = ((t @ sf.msg_rows.astype(np.int64)) % p).astype(np.int8)
    stats = DecodeStats(
        iterations=res.iterations, rank_deficient=res.deficient,
        fallback_used=res.deficient, success=not res.deficient,
        n_known=out.n_known, delta=delta,
    )
    return v, stats


def decode_bec_dual(code: GrsCode, image: PAryImage | None, out: BecOutput):
    """Same ML solution set as decode_bec, via a systematic parity-check form.

    The dual code is interpolated with its identity on the least-known
    symbols; erased digits outside that identity are repaired by the same
    column-reduction step, which is cheaper than the generator-side path for
    rates above 1/2.
    """
    if code.shorten:
        raise NotImplementedError("erasure decoding of shortened codes is not supported")
    F = code.field
    p, m = F.p, F.m
    n, k, K, N = code.n, code.k, code.K_full, code.N
    NK = N - K
    y = _shift_removed_values(code, out)
    counts = out.known.reshape(n, m).sum(axis=1)
    full = np.flatnonzero(counts == m)
    if full.size >= k:
        idx = full[:k]
        zeta = F.phi_vec(y.reshape(n, m)[idx])
        v = _message_by_interpolation(code, idx, zeta)
        return v, DecodeStats(path="direct", n_known=out.n_known)

    perm = np.lexsort((np.arange(n), counts))  # least-known symbols first
    ds = build_systematic_form(code, perm, dual=True, want_messages=False)
    kp = out.known[ds.bit_perm]
    yp = y[ds.bit_perm]
    w = np.where(kp, yp, 0).astype(np.int64)
    bits = ds.bits.astype(np.int64)
    f_cols = NK + np.flatnonzero(~kp[NK:])
    known_tail = NK + np.flatnonzero(kp[NK:])
    eq_rows = np.flatnonzero(kp[:NK])
    rhs = (-(w[eq_rows] + bits[eq_rows][:, known_tail] @ w[known_tail])) % p
    Q = bits[eq_rows][:, f_cols].T
    res = solve_by_column_reduction(Q, rhs, p)
    w[f_cols] = res.t
    er_rows = np.flatnonzero(~kp[:NK])
    if er_rows.size:
        w[er_rows] = (-(bits[er_rows][:, NK:] @ w[NK:])) % p
    w_orig = np.zeros(N, dtype=np.int64)
    w_orig[ds.bit_perm] = w
    zeta = F.phi_vec(w_orig.reshape(n, m)[:k])
    v = _message_by_interpolation(code, np.arange(k), zeta)
    stats = DecodeStats(
        iterations=res.iterations, rank_deficient=res.deficient,
        fallback_used=res.deficient, success=not res.deficient,
        n_known=out.n_known, delta=int(f_cols.size),
    )
    return v, stats


# -- fast iteration measurement (no message recovery) ---------------------------


def _partial_image_rows(code: GrsCode, g: np.ndarray, sym_rows, digit_rows) -> np.ndarray:
    """Digit rows (sym_rows[i]*m + digit_rows[i]) of the non-basis expansion of g."""
    F = code.field
    blocks = F.element_blocks()[g[sym_rows]]  # (R, n-k, m, m)
    R = len(sym_rows)
    picked = blocks[np.arange(R)[:, None], np.arange(g.shape[1])[None, :], digit_rows[:, None], :]
    return picked.reshape(R, g.shape[1] * F.m)


def cob_iteration_stats(code: GrsCode, known: np.ndarray, offline: bool = False):
    """(iterations, delta, resolved_all) for one erasure pattern.

    offline=False uses the reliability-ordered basis (change-of-basis after
    interpolation); offline=True uses the fixed basis on digit positions
    0..K-1 (the from-scratch GE baseline).  Only the rows and columns that
    participate in the repair are materialized.
    """
    F = code.field
    p, m = F.p, F.m
    n, k, K = code.n, code.k, code.K_full
    if offline:
        perm = np.arange(n)
    else:
        counts = known.reshape(n, m).sum(axis=1)
        perm = np.lexsort((np.arange(n), -counts))
    g = _measure_g(code, perm, offline)
    bit_perm = (perm[:, None] * m + np.arange(m)[None, :]).reshape(-1)
    kp = known[bit_perm]
    defic = np.flatnonzero(~kp[:K])
    delta = defic.size
    if delta == 0:
        return 0, 0, True
    cand_local = np.flatnonzero(kp[K:])
    rows = _partial_image_rows(code, g, defic // m, defic % m)
    limit = min(cand_local.size, delta + 64)
    while True:
        Q21 = rows[:, cand_local[:limit]]
        if p == 2:
            iters, complete = count_column_reductions_gf2(Q21)
        else:
            res = solve_by_column_reduction(Q21, np.zeros(limit, dtype=np.int64), p)
            iters, complete = res.iterations, not res.deficient
        if complete or limit == cand_local.size:
            return iters, delta, complete
        limit = min(cand_local.size, limit * 4)


_MEASURE_CACHE: dict = {}


def _measure_g(code: GrsCode, perm: np.ndarray, offline: bool) -> np.ndarray:
    if offline:
        key = (id(code), "offline")
        g = _MEASURE_CACHE.get(key)
        if g is None:
            sym, _ = interpolation_rows(code, perm, want_coeffs=False)
            g = sym[:, code.k :]
            _MEASURE_CACHE[key] = g
        return g
    sym, _ = interpolation_rows(code, perm, want_coeffs=False)
    return sym[:, code.k :]
