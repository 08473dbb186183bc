"""Reliability-ordered systematic forms via parallel Lagrange interpolation.

Given a symbol permutation whose first k entries are the chosen basis symbols,
each row of the systematic symbol matrix is the codeword of one interpolation
polynomial: row i evaluates to 1 (after the column multiplier) at basis symbol
i and to 0 at the other basis symbols.  The k interpolants are data-independent
and can be evaluated in parallel; no Gaussian elimination is involved.

The column-reduction solver below is the change-of-basis workhorse shared by
the erasure decoder and the soft-decision front end: one iteration reduces one
column to a unit vector, which is also the unit of iteration counting reported
in decoder statistics.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .gf import Field
from .grs import (
    GrsCode,
    expand_symbol_rows,
    expand_symbol_rows_dual_basis,
    poly_derivative,
    poly_divide_linear,
    poly_from_roots,
)


@dataclass
class SystematicForm:
    """Symbol- and digit-level systematic form of a (possibly dual) code.

    bits is [I | P] with the identity on the first K permuted digit positions;
    bit_perm maps permuted position -> original position.  msg_rows[r] is the
    p-ary message whose codeword is row r (None for dual/parity forms).
    """

    code: GrsCode
    sym_order: np.ndarray          # symbol permutation, basis first
    symbol_matrix: np.ndarray      # (kk, n) over GF(q), identity on basis symbols
    bits: np.ndarray               # (KK, NN) over GF(p), [I | P]
    bit_perm: np.ndarray           # (NN,) permuted -> original digit index
    msg_rows: np.ndarray | None    # (KK, KK) over GF(p) or None
    dual: bool = False

    @property
    def kk(self) -> int:
        return self.symbol_matrix.shape[0]

    @property
    def KK(self) -> int:
        return self.bits.shape[0]

    @property
    def NN(self) -> int:
        return self.bits.shape[1]

    def basis_split(self, known: np.ndarray):
        """Partition digit positions per the known/reliable mask (original order).

        Returns (known_perm, basis_known_rows, deficient_rows, delta) where the
        row masks refer to the KK rows of `bits` and delta counts basis rows
        whose own position is not in the known set.
        """
        known_perm = np.asarray(known)[self.bit_perm]
        basis_known = known_perm[: self.KK]
        return known_perm, basis_known, ~basis_known, int((~basis_known).sum())

    def blocks(self, known: np.ndarray):
        """The block decomposition (I_|B|, Q11, Q12 ; 0, Q21, Q22).

        Columns are regrouped as: known basis positions, known non-basis
        positions, then all unknown positions; rows as basis-known rows then
        deficient rows.
        """
        known_perm, basis_known, defic, delta = self.basis_split(known)
        cols_known_basis = np.flatnonzero(known_perm[: self.KK])
        cols_known_other = self.KK + np.flatnonzero(known_perm[self.KK :])
        cols_unknown = np.flatnonzero(~known_perm)
        row_order = np.concatenate([np.flatnonzero(basis_known), np.flatnonzero(defic)])
        top = self.bits[row_order[: self.KK - delta]]
        bot = self.bits[row_order[self.KK - delta :]]
        return {
            "I": top[:, cols_known_basis],
            "Q11": top[:, cols_known_other],
            "Q12": top[:, cols_unknown],
            "zero": bot[:, cols_known_basis],
            "Q21": bot[:, cols_known_other],
            "Q22": bot[:, cols_unknown],
            "delta": delta,
            "col_groups": (cols_known_basis, cols_known_other, cols_unknown),
            "row_order": row_order,
        }


def interpolation_rows(code: GrsCode, sym_order, dual: bool = False,
                       want_coeffs: bool = True):
    """Systematic symbol matrix on the ordered basis plus message coefficients.

    Row i is determined by the interpolation constraints: the scaled evaluation
    at basis symbol i equals 1 and at the other basis symbols equals 0; the
    non-basis entries are the scaled evaluations of the same polynomial.
    Returns (symbol_matrix (kk, n), U (kk, kk) polynomial coefficients, or None
    when want_coeffs is False).
    """
    base = code.dual() if dual else code
    F = code.field
    q = F.q
    kk = base.k
    n = base.n
    order = np.asarray(sym_order, dtype=np.int64)
    pts = base.eval_points[order]
    mults = base.col_mults[order]
    xb, xo = pts[:kk], pts[kk:]
    mb, mo = mults[:kk], mults[kk:]

    master = poly_from_roots(F, xb)
    dvals = F.poly_eval(poly_derivative(F, master), xb)  # prod_{l != i} (xb_i - xb_l)
    mvals = F.poly_eval(master, xo)                      # master at non-basis points

    # g[i][jj] = mo_jj * mvals_jj / ((xo_jj - xb_i) * dvals_i * mb_i), all factors nonzero
    qm1 = q - 1
    diff = F.sub_vec(xo[None, :], xb[:, None])
    log_num = (F._log[mo] + F._log[mvals])[None, :]
    log_den = (F._log[diff] + (F._log[dvals] + F._log[mb])[:, None]) % qm1
    g = F._exp[(log_num - log_den) % qm1] if n > kk else np.zeros((kk, 0), dtype=np.int64)

    U = None
    if want_coeffs:
        U = np.zeros((kk, kk), dtype=np.int64)
        for i in range(kk):
            qi = poly_divide_linear(F, master, int(xb[i]))
            scale = F.inv(F.mul(int(dvals[i]), int(mb[i])))
            U[i] = F.mul_vec(qi, np.full(kk, scale, dtype=np.int64))

    sym = np.zeros((kk, n), dtype=np.int64)
    sym[:, :kk] = np.eye(kk, dtype=np.int64)
    sym[:, kk:] = g
    return sym, U


def build_systematic_form(code: GrsCode, sym_order, dual: bool = False,
                          want_messages: bool = True) -> SystematicForm:
    """Digit-level systematic form [I | P] for the code (or its dual)."""
    F = code.field
    m = F.m
    order = np.asarray(sym_order, dtype=np.int64)
    sym, U = interpolation_rows(code, order, dual=dual,
                                want_coeffs=want_messages and not dual)
    if dual:
        bits = expand_symbol_rows_dual_basis(F, sym)
        msg_rows = None
    else:
        bits = expand_symbol_rows(F, sym)
        msg_rows = expand_symbol_rows(F, U) if want_messages else None
    bit_perm = (order[:, None] * m + np.arange(m)[None, :]).reshape(-1)
    return SystematicForm(
        code=code, sym_order=order, symbol_matrix=sym, bits=bits,
        bit_perm=bit_perm, msg_rows=msg_rows, dual=dual,
    )


@dataclass
class ReductionResult:
    t: np.ndarray                # solved unknowns, zero-filled where unresolved
    iterations: int              # columns reduced to unit vectors
    resolved: np.ndarray         # bool mask over unknowns
    schedule: list = dataclass_field(default_factory=list)  # (eq_index, unknown) pivots

    @property
    def deficient(self) -> bool:
        return not bool(self.resolved.all())


def solve_by_column_reduction(Q: np.ndarray, rhs: np.ndarray, p: int) -> ReductionResult:
    """Solve t @ Q = rhs over GF(p) by reducing columns of Q to unit vectors.

    Q has one row per unknown and one column per equation; equations are
    consumed left to right, the pivot is the first still-unresolved unknown
    with a nonzero coefficient.  Unresolvable unknowns are zero-filled.
    """
    delta, C = Q.shape
    E = Q.T.astype(np.int64) % p          # (C, delta): equations as rows
    y = np.asarray(rhs, dtype=np.int64) % p
    resolved = np.zeros(delta, dtype=bool)
    pivot_eq = np.full(delta, -1, dtype=np.int64)
    schedule = []
    iterations = 0
    remaining = delta
    for c in range(C):
        if remaining == 0:
            break
        row = E[c]
        cand = np.flatnonzero((row != 0) & ~resolved)
        if cand.size == 0:
            continue
        r = int(cand[0])
        iterations += 1
        f = pow(int(row[r]), -1, p)
        if f != 1:
            E[c] = (E[c] * f) % p
            y[c] = (y[c] * f) % p
        col = E[:, r].copy()
        col[c] = 0
        nz = np.flatnonzero(col)
        if nz.size:
            E[nz] = (E[nz] - np.outer(col[nz], E[c])) % p
            y[nz] = (y[nz] - col[nz] * y[c]) % p
        resolved[r] = True
        pivot_eq[r] = c
        schedule.append((c, r))
        remaining -= 1
    t = np.zeros(delta, dtype=np.int64)
    got = np.flatnonzero(resolved)
    t[got] = y[pivot_eq[got]]
    return ReductionResult(t=t, iterations=iterations, resolved=resolved, schedule=schedule)


def count_column_reductions_gf2(Q: np.ndarray) -> tuple[int, bool]:
    """Iteration count of solve_by_column_reduction over GF(2), bit-packed.

    Same pivot rule (equations left to right, first unresolved unknown with a
    nonzero coefficient); only the count and completeness are returned.
    """
    delta, C = Q.shape
    if delta == 0:
        return 0, True
    W = (delta + 63) // 64
    E = np.zeros((C, W), dtype=np.uint64)
    idx = np.arange(delta)
    for w in range(W):
        lane = idx[(idx >= 64 * w) & (idx < 64 * (w + 1))]
        if lane.size:
            bits = Q[lane].astype(np.uint64).T << (lane - 64 * w).astype(np.uint64)
            E[:, w] = bits.sum(axis=1, dtype=np.uint64)
    unresolved = np.zeros(W, dtype=np.uint64)
    for r in range(delta):
        unresolved[r // 64] |= np.uint64(1) << np.uint64(r % 64)
    iterations = 0
    remaining = delta
    for c in range(C):
        if remaining == 0:
            break
        row = E[c] & unresolved
        w = 0
        while w < W and row[w] == 0:
            w += 1
        if w == W:
            continue
        b = int(row[w]) & -int(row[w])
        r_local = b.bit_length() - 1
        iterations += 1
        remaining -= 1
        unresolved[w] &= ~np.uint64(b)
        col = (E[:, w] >> np.uint64(r_local)) & np.uint64(1)
        col[c] = 0
        nz = np.flatnonzero(col)
        if nz.size:
            E[nz] ^= E[c][None, :]
    return iterations, remaining == 0
