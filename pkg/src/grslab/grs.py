"""Generalized Reed-Solomon coset codes and their p-ary image matrices.

A code is defined by evaluation points (consecutive powers of alpha, plus
optionally the zero point), nonzero per-column multipliers alpha^{j_i}, and a
coset shift vector a.  Encoding evaluates the message polynomial, scales, and
shifts.  The p-ary image expands every symbol into its coordinate vector; the
image generator replaces each matrix entry alpha^e with the companion-matrix
power A^e.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    FieldTooSmallError,
    LengthMismatchError,
)
from .gf import Field, field_new

CODE_SCHEMA = "grslab-code-v1"


@dataclass
class PAryImage:
    """Bit/trit-level matrices of a GRS coset code."""

    G_p: np.ndarray  # (K, N) over GF(p)
    H_p: np.ndarray  # (N-K, N) over GF(p), G_p @ H_p.T == 0
    a_p: np.ndarray  # (N,) coset shift image


class GrsCode:
    """A concrete generalized RS coset code over GF(p^m).

    n, k are in symbols.  `shorten` pins that many leading p-ary message
    digits to zero, lowering the information dimension to K = k*m - shorten
    without changing the transmitted length.
    """

    def __init__(self, field: Field, n: int, k: int, j, a, extend_zero: bool = False,
                 shorten: int = 0, seed=None):
        q = field.q
        if not (0 < k < n):
            raise DimensionError(f"need 0 < k < n, got k={k}, n={n}")
        if extend_zero:
            if n > q:
                raise FieldTooSmallError(f"n={n} > q={q} even with the zero evaluation point")
        elif n > q - 1:
            raise FieldTooSmallError(
                f"n={n} > q-1={q-1}; enable extend_zero to evaluate at x=0"
            )
        j = np.asarray(j, dtype=np.int64)
        a = np.asarray(a, dtype=np.int64)
        if j.shape != (n,) or a.shape != (n,):
            raise DimensionError(f"j and a must have length n={n}")
        if np.any((j < 0) | (j >= q - 1)):
            raise DimensionError("multiplier exponents must lie in [0, q-1)")
        if np.any((a < 0) | (a >= q)):
            raise DimensionError("shift components must be field elements")
        if not (0 <= shorten < k * field.m):
            raise DimensionError(f"shorten={shorten} out of range for K={k * field.m}")
        self.field = field
        self.n = n
        self.k = k
        self.j = j
        self.a = a
        self.extend_zero = extend_zero
        self.shorten = shorten
        self.seed = seed
        if extend_zero and n == q:
            pts = [field.alpha_pow(i) for i in range(n - 1)] + [0]
        elif extend_zero:
            pts = [field.alpha_pow(i) for i in range(n - 1)] + [0]
        else:
            pts = [field.alpha_pow(i) for i in range(n)]
        self.eval_points = np.array(pts, dtype=np.int64)
        if len(set(self.eval_points.tolist())) != n:
            raise FieldTooSmallError("evaluation points are not pairwise distinct")
        self.col_mults = np.array([field.alpha_pow(int(e)) for e in j], dtype=np.int64)
        self._dual = None

    # -- dimensions -------------------------------------------------------

    @property
    def N(self) -> int:
        return self.n * self.field.m

    @property
    def K_full(self) -> int:
        return self.k * self.field.m

    @property
    def K(self) -> int:
        """Information dimension in p-ary digits (after shortening)."""
        return self.K_full - self.shorten

    @property
    def a_p(self) -> np.ndarray:
        return self.field.phi_inv_vec(self.a).reshape(self.N).astype(np.int8)

    # -- encoding ----------------------------------------------------------

    def encode(self, u) -> np.ndarray:
        """c_i = alpha^{j_i} * u(x_i) + a_i for a symbol message u of length k."""
        u = np.asarray(u, dtype=np.int64)
        if u.shape != (self.k,):
            raise LengthMismatchError(f"message must have {self.k} symbols, got {u.shape}")
        F = self.field
        vals = F.poly_eval(u, self.eval_points)
        return F.add_vec(F.mul_vec(self.col_mults, vals), self.a)

    def encode_p(self, v) -> np.ndarray:
        """Encode K information digits; returns the transmitted p-ary word.

        Equals phi^{-1}(encode(phi(v_padded))) and also v_padded @ G_p + a_p.
        """
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (self.K,):
            raise LengthMismatchError(f"expected {self.K} information digits, got {v.shape}")
        full = np.concatenate([np.zeros(self.shorten, dtype=np.int64), v])
        u = self.field.phi_vec(full.reshape(self.k, self.field.m))
        c = self.encode(u)
        return self.field.phi_inv_vec(c).reshape(self.N).astype(np.int8)

    # -- matrices -----------------------------------------------------------

    def generator_matrix(self) -> np.ndarray:
        """(k, n) symbol matrix with entries alpha^{j_i} * x_i^r."""
        F = self.field
        rows = []
        row = self.col_mults.copy()
        for _ in range(self.k):
            rows.append(row)
            row = F.mul_vec(row, self.eval_points)
        return np.stack(rows)

    def image_matrices(self) -> PAryImage:
        G_p = expand_symbol_rows(self.field, self.generator_matrix())
        H_p = expand_symbol_rows_dual_basis(self.field, self.dual().generator_matrix())
        return PAryImage(G_p=G_p, H_p=H_p, a_p=self.a_p)

    def dual(self) -> "GrsCode":
        """The dual GRS code: same points, multipliers 1/(alpha^{j_i} M'(x_i))."""
        if self._dual is None:
            F = self.field
            master = poly_from_roots(F, self.eval_points)
            dm = poly_derivative(F, master)
            dvals = F.poly_eval(dm, self.eval_points)
            denom = F.mul_vec(self.col_mults, dvals)
            logs = (-(F._log[denom])) % (F.q - 1)
            self._dual = GrsCode(
                F, self.n, self.n - self.k, logs,
                np.zeros(self.n, dtype=np.int64), extend_zero=self.extend_zero,
            )
        return self._dual

    # -- serialization --------------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "schema": CODE_SCHEMA,
            "p": self.field.p,
            "m": self.field.m,
            "f": list(self.field.f),
            "n": self.n,
            "k": self.k,
            "j": [int(x) for x in self.j],
            "a": [int(x) for x in self.a],
            "seed": self.seed,
            "extend_zero": self.extend_zero,
            "shorten": self.shorten,
        }
        return json.dumps(doc, indent=1)

    @staticmethod
    def from_json(text: str) -> "GrsCode":
        doc = json.loads(text)
        if doc.get("schema") != CODE_SCHEMA:
            raise DimensionError(f"unsupported code schema {doc.get('schema')!r}")
        field = field_new(doc["p"], doc["m"], doc["f"])
        return GrsCode(
            field, doc["n"], doc["k"], doc["j"], doc["a"],
            extend_zero=doc.get("extend_zero", False),
            shorten=doc.get("shorten", 0), seed=doc.get("seed"),
        )

    def __repr__(self):
        return (
            f"GrsCode(q={self.field.q}, n={self.n}, k={self.k}, N={self.N}, K={self.K})"
        )


def grs_new(field: Field, n: int, k: int, j="zero", a="zero", seed: int = 0,
            extend_zero: bool = False, shorten: int = 0) -> GrsCode:
    """Construct a GRS coset code; 'random' draws are deterministic per seed.

    Multipliers are drawn uniformly from the nonzero elements, shift
    components uniformly from the whole field.
    """
    rng = np.random.default_rng(seed)
    if isinstance(j, str):
        if j == "zero":
            jv = np.zeros(n, dtype=np.int64)
        elif j == "random":
            jv = rng.integers(0, field.q - 1, size=n)
        else:
            raise DimensionError(f"unknown multiplier spec {j!r}")
    else:
        jv = np.asarray(j, dtype=np.int64)
    if isinstance(a, str):
        if a == "zero":
            av = np.zeros(n, dtype=np.int64)
        elif a == "random":
            av = rng.integers(0, field.q, size=n)
        else:
            raise DimensionError(f"unknown shift spec {a!r}")
    else:
        av = np.asarray(a, dtype=np.int64)
    return GrsCode(field, n, k, jv, av, extend_zero=extend_zero, shorten=shorten, seed=seed)


# -- symbol-matrix expansion to GF(p) ------------------------------------------


def expand_symbol_rows(field: Field, S: np.ndarray) -> np.ndarray:
    """(r, c) symbol matrix -> (r*m, c*m) matrix over GF(p).

    Symbol row i expands into m rows: row (i, s) is the image of alpha^s times
    row i, so each entry beta becomes the m x m multiplication block of beta.
    """
    r, c = S.shape
    m = field.m
    blocks = field.element_blocks()[S]  # (r, c, m, m)
    return np.ascontiguousarray(blocks.transpose(0, 2, 1, 3)).reshape(r * m, c * m)


def expand_symbol_rows_dual_basis(field: Field, S: np.ndarray) -> np.ndarray:
    """Like expand_symbol_rows but rows scale by the trace-dual basis elements
    and entries expand into trace coordinates.

    Used for parity-check images: if the symbol rows span the q-ary dual code,
    the result is a parity-check matrix of the p-ary image code.
    """
    r, c = S.shape
    m = field.m
    blocks = dual_basis_blocks(field)[S]
    return np.ascontiguousarray(blocks.transpose(0, 2, 1, 3)).reshape(r * m, c * m)


def dual_basis_blocks(field: Field) -> np.ndarray:
    """(q, m, m) table: entry [v][s][t] = Tr(b*_s * v * alpha^t)."""
    cached = getattr(field, "_dual_blocks", None)
    if cached is None:
        tr = field.trace_table()
        db = field.dual_basis()
        vs = np.arange(field.q)
        rows = []
        for s in range(field.m):
            scaled = field.mul_vec(np.full(field.q, db[s], dtype=np.int64), vs)
            cols = [tr[field.mul_vec(scaled, np.full(field.q, field.alpha_pow(t), dtype=np.int64))]
                    for t in range(field.m)]
            rows.append(np.stack(cols, axis=1))
        cached = np.stack(rows, axis=1).astype(np.int8)  # (q, m, m)
        field._dual_blocks = cached
    return cached


# -- polynomial helpers ----------------------------------------------------------


def poly_from_roots(field: Field, roots) -> np.ndarray:
    """Coefficients (ascending) of prod_i (x - r_i)."""
    coeffs = np.zeros(len(roots) + 1, dtype=np.int64)
    coeffs[0] = 1
    deg = 0
    for r in np.asarray(roots, dtype=np.int64):
        nr = int(field.neg(int(r)))
        shifted = np.zeros_like(coeffs)
        shifted[1 : deg + 2] = coeffs[: deg + 1]
        scaled = field.mul_vec(coeffs, np.full_like(coeffs, nr))
        coeffs = field.add_vec(shifted, scaled)
        deg += 1
    return coeffs


def poly_derivative(field: Field, coeffs) -> np.ndarray:
    """Formal derivative; scalar multiples reduce mod the characteristic p."""
    coeffs = np.asarray(coeffs, dtype=np.int64)
    if len(coeffs) <= 1:
        return np.zeros(1, dtype=np.int64)
    mult = (np.arange(1, len(coeffs)) % field.p).astype(np.int64)
    return field.mul_vec(coeffs[1:], mult)


def poly_divide_linear(field: Field, coeffs, r: int) -> np.ndarray:
    """Synthetic division of a polynomial by (x - r); remainder must be zero."""
    coeffs = np.asarray(coeffs, dtype=np.int64)
    deg = len(coeffs) - 1
    out = np.zeros(deg, dtype=np.int64)
    acc = 0
    for jj in range(deg - 1, -1, -1):
        acc = field.add(field.mul(acc, r), int(coeffs[jj + 1]))
        out[jj] = acc
    rem = field.add(field.mul(int(out[0]), r), int(coeffs[0]))
    if rem != 0:
        raise ValueError("r is not a root of the polynomial")
    return out


def interpolate_coeffs(field: Field, xs, ys) -> np.ndarray:
    """Coefficients of the unique degree-<k polynomial through (x_i, y_i)."""
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    k = len(xs)
    master = poly_from_roots(field, xs)
    dm = poly_derivative(field, master)
    out = np.zeros(k, dtype=np.int64)
    for i in range(k):
        yi = int(ys[i])
        if yi == 0:
            continue
        qi = poly_divide_linear(field, master, int(xs[i]))
        scale = field.mul(yi, field.inv(field.poly_eval(qi, np.array([xs[i]]))[0].item()))
        out = field.add_vec(out, field.mul_vec(qi, np.full(k, scale, dtype=np.int64)))
    return out


# -- weight-class counting --------------------------------------------------------


def weight_class_bound(n: int, k: int, q: int, w: int) -> int:
    """Upper bound on the number of weight-w codewords of an [n,k] MDS code.

    Any k positions (n-w zeros plus k-n+w nonzeros) determine the message, so
    the class has at most q^(k-(n-w)) * C(n, w) members.  Classes below the
    minimum distance are empty and the bound is 0.
    """
    if w < 0 or w > n:
        raise ValueError(f"weight w={w} outside [0, {n}]")
    if w == 0:
        return 1
    if w <= n - k:
        return 0
    return q ** (k - (n - w)) * math.comb(n, w)


def a_tilde_log_p(n: int, k: int, q: int, w: int, p: int, A_w=None) -> float:
    """log_p of A_w * q^n / ((q-1)^w C(n,w)); -inf for empty classes."""
    if A_w is None:
        A_w = weight_class_bound(n, k, q, w)
    if A_w == 0:
        return -math.inf
    lp = math.log(p)
    return (
        math.log(A_w) / lp
        + n * math.log(q) / lp
        - w * math.log(q - 1) / lp
        - math.lgamma(n + 1) / lp
        + math.lgamma(w + 1) / lp
        + math.lgamma(n - w + 1) / lp
    )


def r_tilde_w(n: int, k: int, q: int, m: int, w: int, A_w=None) -> float:
    """Per-digit rate of the w-class: log_p(A~_w) / N with N = n*m."""
    p = round(q ** (1.0 / m))
    return a_tilde_log_p(n, k, q, w, p, A_w=A_w) / (n * m)


def exact_symbol_spectrum(code: GrsCode) -> np.ndarray:
    """A_w of the linear part by exhaustive enumeration (tiny codes only)."""
    q, k, n = code.field.q, code.k, code.n
    total = q**k
    if total > 4_000_000:
        raise ValueError(f"q^k = {total} too large for exhaustive enumeration")
    F = code.field
    G = code.generator_matrix()
    msgs = np.zeros((total, k), dtype=np.int64)
    v = np.arange(total)
    for r in range(k):
        msgs[:, r] = (v // q**r) % q
    cws = np.zeros((total, n), dtype=np.int64)
    for r in range(k):
        cws = F.add_vec(cws, F.mul_vec(msgs[:, r][:, None], G[r][None, :]))
    weights = (cws != 0).sum(axis=1)
    return np.bincount(weights, minlength=n + 1)
