import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grslab.errors import BadModulusError, LengthMismatchError, NotPrimitiveError
from grslab.gf import DEFAULT_PRIMITIVE_POLYS, Field, field_new, parse_poly


def naive_poly_mul(a, b, f, p, m):
    """Independent schoolbook reference: digit vectors, reduce by f."""
    da = [(a // p**j) % p for j in range(m)]
    db = [(b // p**j) % p for j in range(m)]
    prod = [0] * (2 * m)
    for i in range(m):
        for j in range(m):
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p
    for deg in range(2 * m - 1, m - 1, -1):
        c = prod[deg]
        prod[deg] = 0
        for j in range(m):
            prod[deg - m + j] = (prod[deg - m + j] - c * f[j]) % p
    return sum(prod[j] * p**j for j in range(m))


def test_gf8_constructs():
    F = field_new(2, 3, [1, 1, 0])  # x^3 + x + 1
    assert F.q == 8
    # alpha * alpha^2 = alpha + 1
    assert F.mul(F.alpha, F.mul(F.alpha, F.alpha)) == F.phi(np.array([1, 1, 0]))


def test_prime_field_m1():
    F = field_new(2, 1, [1])  # x + 1, alpha = 1
    assert F.q == 2 and F.alpha == 1
    assert F.mul(1, 1) == 1 and F.add(1, 1) == 0


def test_reducible_poly_rejected():
    # x^3 + x^2 + x + 1 = (x+1)(x^2+1) over GF(2)
    with pytest.raises(NotPrimitiveError):
        Field(2, 3, [1, 1, 1])


def test_irreducible_but_not_primitive_rejected():
    # x^4 + x^3 + x^2 + x + 1 is irreducible over GF(2) but has order-5 root
    with pytest.raises(NotPrimitiveError):
        Field(2, 4, [1, 1, 1, 1])


def test_bad_modulus():
    with pytest.raises(BadModulusError):
        Field(2, 3, [2, 1, 0])
    with pytest.raises(BadModulusError):
        Field(4, 2, [1, 1])  # p must be prime
    with pytest.raises(BadModulusError):
        Field(2, 3, [1, 1])  # wrong length


@pytest.mark.parametrize("p,m", [(2, 3), (3, 3)])
def test_mul_matches_schoolbook_exhaustive(p, m):
    F = field_new(p, m)
    for a in F.elements():
        for b in F.elements():
            assert F.mul(a, b) == naive_poly_mul(a, b, F.f, p, m)


def test_field_axioms_randomized():
    rng = np.random.default_rng(0)
    for p, m in ((2, 4), (3, 3)):
        F = field_new(p, m)
        a, b, c = (rng.integers(0, F.q, 10_500) for _ in range(3))
        assert np.array_equal(F.mul_vec(a, b), F.mul_vec(b, a))
        assert np.array_equal(F.add_vec(a, b), F.add_vec(b, a))
        assert np.array_equal(
            F.mul_vec(a, F.add_vec(b, c)),
            F.add_vec(F.mul_vec(a, b), F.mul_vec(a, c)),
        )
        assert np.array_equal(
            F.mul_vec(F.mul_vec(a, b), c), F.mul_vec(a, F.mul_vec(b, c))
        )
        nz = a[a != 0]
        assert np.all(F.mul_vec(nz, F.inv_vec(nz)) == 1)


def test_identity_and_annihilator():
    F = field_new(3, 2)
    xs = np.arange(F.q)
    assert np.array_equal(F.mul_vec(xs, np.ones_like(xs)), xs)
    assert np.all(F.mul_vec(xs, np.zeros_like(xs)) == 0)


def test_division():
    F = field_new(2, 3)
    for a in F.nonzero_elements():
        for b in F.nonzero_elements():
            assert F.mul(F.div(a, b), b) == a
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        F.div(3, 0)


@pytest.mark.parametrize("p,m", [(2, 3), (3, 3)])
def test_phi_roundtrip_exhaustive(p, m):
    F = field_new(p, m)
    for beta in F.elements():
        assert F.phi(F.phi_inv(beta)) == beta
    assert np.array_equal(F.phi_inv(0), np.zeros(m, dtype=np.int8))


def test_phi_length_check():
    F = field_new(2, 3)
    with pytest.raises(LengthMismatchError):
        F.phi(np.array([1, 0]))


@given(st.integers(0, 26), st.integers(0, 26))
def test_phi_is_linear_gf27(b1, b2):
    F = field_new(3, 3)
    d1, d2 = F.phi_inv(b1), F.phi_inv(b2)
    assert F.phi((d1 + d2) % 3) == F.add(b1, b2)


@pytest.mark.parametrize("p,m", [(2, 3), (3, 3)])
def test_alpha_action_is_companion_matrix(p, m):
    F = field_new(p, m)
    A = F.companion().astype(np.int64)
    for beta in F.elements():
        lhs = F.phi_inv(F.mul(F.alpha, beta)).astype(np.int64)
        rhs = (F.phi_inv(beta).astype(np.int64) @ A) % p
        assert np.array_equal(lhs, rhs)
    # powers act as A^i
    for i in (0, 1, 5, F.q - 1):
        Ai = F.companion_power(i).astype(np.int64)
        for beta in (1, F.alpha, F.q - 1):
            lhs = F.phi_inv(F.mul(F.alpha_pow(i), beta)).astype(np.int64)
            rhs = (F.phi_inv(beta).astype(np.int64) @ Ai) % p
            assert np.array_equal(lhs, rhs)


def test_companion_matrix_display_gf8():
    F = field_new(2, 3, [1, 1, 0])
    expected = np.array([[0, 1, 0], [0, 0, 1], [1, 1, 0]])
    assert np.array_equal(F.companion(), expected)


def test_companion_power_edges():
    F = field_new(3, 3)
    assert np.array_equal(F.companion_power(0), np.eye(3, dtype=np.int8))
    assert np.array_equal(F.companion_power(1), F.companion())
    # A^(q-1) = I by repeated multiplication oracle
    A = F.companion().astype(np.int64)
    acc = np.eye(3, dtype=np.int64)
    for _ in range(F.q - 1):
        acc = (acc @ A) % 3
    assert np.array_equal(acc, np.eye(3, dtype=np.int64))
    assert np.array_equal(F.companion_power(F.q - 1), np.eye(3, dtype=np.int8))


def test_log_antilog_mutually_inverse():
    F = field_new(2, 8)
    for x in F.nonzero_elements():
        assert F.alpha_pow(F.log(x)) == x
    for i in range(F.q - 1):
        assert F.log(F.alpha_pow(i)) == i


def test_all_default_polys_are_primitive():
    for (p, m) in DEFAULT_PRIMITIVE_POLYS:
        F = field_new(p, m)
        assert F.q == p**m


def test_trace_and_dual_basis():
    for p, m in ((2, 4), (3, 3)):
        F = field_new(p, m)
        db = F.dual_basis()
        for i in range(m):
            for j in range(m):
                want = 1 if i == j else 0
                assert F.trace(F.mul(F.alpha_pow(i), db[j])) == want


def test_parse_poly():
    assert parse_poly("1,1,0,1") == [1, 1, 0]
    with pytest.raises(BadModulusError):
        parse_poly("1,1,0,2")  # not monic


def test_element_blocks_match_companion_powers():
    F = field_new(2, 3)
    for i in range(F.q - 1):
        assert np.array_equal(F.element_block(F.alpha_pow(i)), F.companion_power(i))
    assert not np.any(F.element_block(0))
