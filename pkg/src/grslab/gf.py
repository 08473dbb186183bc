"""Arithmetic in GF(p) and GF(p^m) with coordinate-vector views over GF(p).

Elements are integers in [0, q).  The base-p digits of the integer are the
coordinates of the element in the polynomial basis (1, alpha, ..., alpha^{m-1}),
where alpha is a root of the defining primitive polynomial
f(x) = f0 + f1*x + ... + f_{m-1}*x^{m-1} + x^m.

Multiplication by alpha acts on coordinate row-vectors as right-multiplication
by the companion matrix of f.
"""

from __future__ import annotations

import numpy as np

from .errors import BadModulusError, LengthMismatchError, NotPrimitiveError

# Default primitive polynomials, ascending coefficients (f0, ..., f_{m-1}),
# leading coefficient of x^m implied 1.  Verified primitive at construction.
DEFAULT_PRIMITIVE_POLYS = {
    (2, 1): [1],
    (2, 2): [1, 1],
    (2, 3): [1, 1, 0],
    (2, 4): [1, 1, 0, 0],
    (2, 5): [1, 0, 1, 0, 0],
    (2, 6): [1, 1, 0, 0, 0, 0],
    (2, 7): [1, 0, 0, 1, 0, 0, 0],
    (2, 8): [1, 0, 1, 1, 1, 0, 0, 0],
    (2, 9): [1, 0, 0, 0, 1, 0, 0, 0, 0],
    (2, 10): [1, 0, 0, 1, 0, 0, 0, 0, 0, 0],
    (2, 11): [1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    (2, 12): [1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0],
    (3, 1): [1],
    (3, 2): [2, 1],
    (3, 3): [1, 2, 0],
    (3, 4): [2, 1, 0, 0],
    (3, 5): [1, 2, 0, 0, 0],
    (3, 6): [2, 1, 0, 0, 0, 0],
}

_EAGER_TABLE_LIMIT = 1 << 20


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """GF(p^m) defined by a primitive polynomial over GF(p)."""

    def __init__(self, p: int, m: int, f):
        if not _is_prime(p):
            raise BadModulusError(f"p={p} is not prime")
        if m < 1:
            raise BadModulusError(f"extension degree m={m} must be positive")
        f = list(int(c) for c in f)
        if len(f) != m:
            raise BadModulusError(
                f"need {m} coefficients f0..f{m-1} for a monic degree-{m} polynomial, got {len(f)}"
            )
        if any(c < 0 or c >= p for c in f):
            raise BadModulusError(f"coefficients {f} not all in GF({p})")
        self.p = p
        self.m = m
        self.q = p**m
        self.f = f
        if self.q > _EAGER_TABLE_LIMIT:
            raise BadModulusError(f"q={self.q} exceeds the supported table size")

        # alpha = x mod f(x); for m=1, x == -f0.
        self.alpha = p if m > 1 else (-f[0]) % p

        self._digits = self._build_digit_table()
        self._weights = np.array([p**j for j in range(m)], dtype=np.int64)
        self._build_log_tables()
        self._build_add_tables()
        self._blocks = None
        self._trace_table = None

    # -- construction ---------------------------------------------------

    def _build_digit_table(self) -> np.ndarray:
        digs = np.zeros((self.q, self.m), dtype=np.int8)
        v = np.arange(self.q)
        for j in range(self.m):
            digs[:, j] = (v // self.p**j) % self.p
        return digs

    def _mul_raw(self, a: int, b: int) -> int:
        """Schoolbook polynomial product mod f, via digit vectors."""
        p, m = self.p, self.m
        da = [(a // p**j) % p for j in range(m)]
        db = [(b // p**j) % p for j in range(m)]
        prod = [0] * (2 * m - 1)
        for i, ca in enumerate(da):
            if ca == 0:
                continue
            for j, cb in enumerate(db):
                prod[i + j] = (prod[i + j] + ca * cb) % p
        # reduce: x^m = -(f0 + f1 x + ... + f_{m-1} x^{m-1})
        for deg in range(2 * m - 2, m - 1, -1):
            c = prod[deg]
            if c == 0:
                continue
            prod[deg] = 0
            for j in range(m):
                prod[deg - m + j] = (prod[deg - m + j] - c * self.f[j]) % p
        return sum(prod[j] * p**j for j in range(m))

    def _build_log_tables(self):
        q = self.q
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            if log[x] != -1:
                raise NotPrimitiveError(
                    f"alpha has order {i} < q-1={q-1}; polynomial f={self.f} is not primitive over GF({self.p})"
                )
            exp[i] = x
            log[x] = i
            x = self._mul_raw(x, self.alpha)
        if x != 1:
            raise NotPrimitiveError(
                f"alpha^(q-1) != 1; polynomial f={self.f} does not define a field"
            )
        exp[q - 1 :] = exp[: q - 1]
        self._exp = exp
        self._log = log

    def _build_add_tables(self):
        a = np.arange(self.q)
        da = self._digits[a]
        add = ((da[:, None, :] + da[None, :, :]) % self.p).astype(np.int64)
        self._add_table = (add * self._weights).sum(axis=2)
        self._neg_table = self._add_table[0].copy()  # placeholder, fixed below
        neg = ((-da) % self.p).astype(np.int64)
        self._neg_table = (neg * self._weights).sum(axis=1)

    # -- scalar operations ----------------------------------------------

    def add(self, a: int, b: int) -> int:
        return int(self._add_table[a, b])

    def neg(self, a: int) -> int:
        return int(self._neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return int(self._add_table[a, self._neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return int(self._exp[(self.q - 1) - self._log[a]])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return int(self._exp[(self._log[a] * e) % (self.q - 1)])

    def alpha_pow(self, i: int) -> int:
        return int(self._exp[i % (self.q - 1)])

    def log(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("log of zero is undefined")
        return int(self._log[a])

    # -- vectorized operations (numpy int arrays of element values) ------

    def add_vec(self, a, b):
        return self._add_table[a, b]

    def neg_vec(self, a):
        return self._neg_table[a]

    def sub_vec(self, a, b):
        return self._add_table[a, self._neg_table[b]]

    def mul_vec(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv_vec(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return self._exp[(self.q - 1) - self._log[a]]

    # -- coordinate-vector correspondence ---------------------------------

    def phi_inv(self, beta: int) -> np.ndarray:
        """Element -> base-p coordinate row vector of length m."""
        return self._digits[beta].copy()

    def phi(self, b) -> int:
        """Coordinate vector of length m -> element."""
        b = np.asarray(b)
        if b.shape != (self.m,):
            raise LengthMismatchError(f"expected {self.m} coordinates, got shape {b.shape}")
        if np.any((b < 0) | (b >= self.p)):
            raise BadModulusError(f"coordinates {b} not all in GF({self.p})")
        return int((b.astype(np.int64) * self._weights).sum())

    def phi_inv_vec(self, betas) -> np.ndarray:
        """Element array of shape (...,) -> digit array of shape (..., m)."""
        return self._digits[np.asarray(betas)]

    def phi_vec(self, digits) -> np.ndarray:
        """Digit array of shape (..., m) -> element array of shape (...,)."""
        digits = np.asarray(digits)
        if digits.shape[-1] != self.m:
            raise LengthMismatchError(f"expected trailing dimension {self.m}, got {digits.shape}")
        return (digits.astype(np.int64) * self._weights).sum(axis=-1)

    # -- companion matrix and element blocks ------------------------------

    def companion(self) -> np.ndarray:
        """The m x m companion matrix of f over GF(p)."""
        A = np.zeros((self.m, self.m), dtype=np.int8)
        for i in range(self.m - 1):
            A[i, i + 1] = 1
        for j in range(self.m):
            A[self.m - 1, j] = (-self.f[j]) % self.p
        return A

    def companion_power(self, i: int) -> np.ndarray:
        """A^i; row s is the coordinate vector of alpha^(s+i)."""
        if i < 0:
            raise ValueError("exponent must be non-negative")
        rows = [self.phi_inv(self.alpha_pow(s + i)) for s in range(self.m)]
        return np.stack(rows).astype(np.int8)

    def element_block(self, beta: int) -> np.ndarray:
        """The m x m matrix over GF(p) representing multiplication by beta.

        Row s is phi_inv(alpha^s * beta); for beta = alpha^i this is A^i and
        for beta = 0 the zero matrix.
        """
        return self.element_blocks()[beta].copy()

    def element_blocks(self) -> np.ndarray:
        """(q, m, m) table of all element multiplication blocks."""
        if self._blocks is None:
            alphas = self._exp[: self.m]  # alpha^0..alpha^{m-1}
            prod = self.mul_vec(alphas[:, None], np.arange(self.q)[None, :])
            self._blocks = np.ascontiguousarray(
                self._digits[prod].transpose(1, 0, 2)
            ).astype(np.int8)
        return self._blocks

    # -- trace and the trace-dual basis -----------------------------------

    def trace(self, beta: int) -> int:
        """Tr(beta) = beta + beta^p + ... + beta^(p^(m-1)), an element of GF(p)."""
        return int(self.trace_table()[beta])

    def trace_table(self) -> np.ndarray:
        if self._trace_table is None:
            v = np.arange(self.q)
            acc = v.copy()
            t = v.copy()
            for _ in range(self.m - 1):
                t = np.array([self.pow(int(x), self.p) for x in t])
                acc = self._add_table[acc, t]
            if np.any(acc >= self.p):
                raise AssertionError("trace landed outside the prime subfield")
            self._trace_table = acc.astype(np.int64)
        return self._trace_table

    def dual_basis(self) -> list[int]:
        """Elements (b*_0..b*_{m-1}) with Tr(alpha^i * b*_j) = delta_ij."""
        tr = self.trace_table()
        # T[i][j] = Tr(alpha^i * alpha^j); solve T * B = I over GF(p).
        T = np.zeros((self.m, self.m), dtype=np.int64)
        for i in range(self.m):
            for j in range(self.m):
                T[i, j] = tr[self.alpha_pow(i + j)]
        B = _inv_mod_p(T, self.p)
        # b*_j = sum_t B[t][j] alpha^t
        out = []
        for j in range(self.m):
            acc = 0
            for t in range(self.m):
                c = int(B[t, j])
                if c:
                    term = self.alpha_pow(t)
                    while c > 1:
                        term = self.add(term, self.alpha_pow(t))
                        c -= 1
                    acc = self.add(acc, term)
            out.append(acc)
        return out

    # -- polynomial helpers (coefficient vectors, ascending) --------------

    def poly_eval(self, coeffs, xs):
        """Evaluate sum_j coeffs[j] x^j at each x in xs (Horner, vectorized)."""
        xs = np.asarray(xs)
        out = np.zeros_like(xs)
        for c in np.asarray(coeffs)[::-1]:
            out = self.add_vec(self.mul_vec(out, xs), np.full_like(xs, c))
        return out

    def elements(self) -> range:
        return range(self.q)

    def nonzero_elements(self) -> range:
        return range(1, self.q)

    def __repr__(self):
        return f"Field(p={self.p}, m={self.m}, f={self.f})"

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and self.p == other.p
            and self.m == other.m
            and self.f == other.f
        )

    def __hash__(self):
        return hash((self.p, self.m, tuple(self.f)))


def _inv_mod_p(M: np.ndarray, p: int) -> np.ndarray:
    """Inverse of a square matrix over GF(p) by Gauss-Jordan elimination."""
    n = M.shape[0]
    A = np.concatenate([M % p, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r, col] % p != 0), None)
        if piv is None:
            raise ValueError("matrix is singular mod p")
        A[[col, piv]] = A[[piv, col]]
        A[col] = (A[col] * pow(int(A[col, col]), -1, p)) % p
        for r in range(n):
            if r != col and A[r, col]:
                A[r] = (A[r] - A[r, col] * A[col]) % p
    return A[:, n:]


def field_new(p: int, m: int, f=None) -> Field:
    """Build a validated GF(p^m); primitivity is checked at construction."""
    if f is None:
        try:
            f = DEFAULT_PRIMITIVE_POLYS[(p, m)]
        except KeyError:
            raise BadModulusError(
                f"no default primitive polynomial for (p={p}, m={m}); pass one explicitly"
            ) from None
    return Field(p, m, f)


def parse_poly(text: str) -> list[int]:
    """Parse comma-separated ascending coefficients, e.g. '1,1,0,1' for 1+x+x^3.

    The leading coefficient must be 1 and is stripped (monic convention).
    """
    coeffs = [int(t) for t in text.split(",")]
    if len(coeffs) < 2 or coeffs[-1] != 1:
        raise BadModulusError(f"polynomial '{text}' must be monic with degree >= 1")
    return coeffs[:-1]
