'''
Tests for truncated q-series: products, inversion, theta, U_p and V.
'''

import numpy as np
import pytest
import asd_forms as af
import asd_forms.qseries as aq


def naive_product(a, b, n):
    out = [0]*n
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < n:
                out[i+j] += x*y
    return out


def random_padic(p=11, B=8, N=60, seed=None, unit=True):
    if seed is not None:
        np.random.seed(seed)
    ring = af.PadicRing(af.PadicContext(p, B))
    coeffs = [int(x) for x in np.random.randint(0, 2**62, size=N)]
    if unit and coeffs[0] % p == 0:
        coeffs[0] += 1
    return af.Series(ring, coeffs)


def test_products_match_schoolbook():
    ''' Kronecker products agree with the naive product, in both rings '''
    np.random.seed(4)
    for i in range(100):
        n = int(np.random.randint(1, 120))
        a = [int(x) for x in np.random.randint(-10**9, 10**9, size=int(np.random.randint(1, 120)))]
        b = [int(x) for x in np.random.randint(-10**9, 10**9, size=int(np.random.randint(1, 120)))]
        assert aq._mul_lists(a, b, n, af.ZZ) == naive_product(a[:n], b[:n], n)
        ring = af.PadicRing(af.PadicContext(7, 12))
        ap = [x % ring.modulus for x in a]
        bp = [x % ring.modulus for x in b]
        assert aq._mul_lists(ap, bp, n, ring) == [x % ring.modulus for x in naive_product(ap[:n], bp[:n], n)]
    return


def test_product_truncation():
    ''' The product is known only up to min(trunc f + offset g, trunc g + offset f) '''
    f = af.Series(af.ZZ, [1, 2, 3, 4])
    g = af.Series(af.ZZ, [5, 6], offset=1)
    h = f*g
    assert h.offset == 1
    assert h.trunc == 3
    assert h.coeffs == [5, 16]
    assert af.series_mul(f, g).coeffs == h.coeffs
    with pytest.raises(af.InsufficientTruncation):
        h.raw(3)
    return


def test_inverse_methods_agree():
    for seed in range(100):
        f = random_padic(N=int(np.random.randint(2, 80)), seed=seed)
        g1 = af.series_inverse(f, method='newton')
        g2 = af.series_inverse(f, method='schoolbook')
        assert g1.equals(g2)
        one = f*g1
        assert one.coeffs == [1] + [0]*(len(f) - 1)
    with pytest.raises(ValueError):
        af.series_inverse(f, method='magic')
    return


def test_laurent_inverse():
    ''' q^-1 + 2 + 3q inverts to q - 2q^2 + q^3 '''
    f = af.Series(af.ZZ, [1, 2, 3], offset=-1)
    g = af.series_inverse(f)
    assert g.offset == 1
    assert g.coeffs == [1, -2, 1]
    assert (f*g).coeffs == [1, 0, 0]
    with pytest.raises(ArithmeticError):
        af.series_inverse(af.Series(af.ZZ, [2, 1]))
    return


def test_arithmetic():
    f = af.Series(af.ZZ, [1, 2, 3])
    g = af.Series(af.ZZ, [0, 1], offset=1)
    assert (f + g).coeffs == [1, 2, 4]
    assert (f - f).is_zero()
    assert (f + 5).coeffs == [6, 2, 3]
    assert (5 - f).coeffs == [4, -2, -3]
    assert (3*f).coeffs == [3, 6, 9]
    assert (f**0).coeffs == [1, 0, 0]
    assert (f**2).coeffs == [1, 4, 10]
    assert f.shift(2).offset == 2
    assert f.truncate(2).coeffs == [1, 2]
    assert f[1] == 2
    assert f.raw(-3) == 0
    with pytest.raises(af.InsufficientTruncation):
        af.coeff(f, 3)
    return


def test_ring_mismatch():
    f = af.Series(af.ZZ, [1, 2, 3])
    g = f.to_ring(af.PadicRing(af.PadicContext(5, 2)))
    assert g.coeffs == [1, 2, 3]
    assert isinstance(g[0], af.PadicInt)
    with pytest.raises(af.RingMismatch):
        f + g
    with pytest.raises(af.RingMismatch):
        f.scale(af.PadicContext(5, 2).element(3))
    with pytest.raises(af.RingMismatch):
        g.scale(af.PadicContext(5, 1).element(3))
    assert g.valuations() == [0, 0, 0]
    return


def test_theta():
    f = af.Series(af.ZZ, [7, 1, 1, 1, 1], offset=-1)
    assert af.theta(f).coeffs == [-7, 0, 1, 2, 3]
    assert af.theta(f, power=3).coeffs == [-7, 0, 1, 8, 27]
    return


def test_u_p_and_v():
    f = af.Series(af.ZZ, list(range(20)))
    U = af.u_p(f, 5)
    assert U.coeffs == [0, 5, 10, 15]
    assert U.trunc == 4
    g = af.Series(af.ZZ, [1, 2, 3])
    V = af.v_operator(g, 5, 2)
    assert V.trunc == 15
    assert V.raw(5) == 50 and V.raw(10) == 75 and V.raw(4) == 0
    assert af.v_operator(g, 5, 2, trunc=7).trunc == 7
    with pytest.raises(ValueError):
        af.u_p(af.Series(af.ZZ, [1, 2], offset=-1), 5)
    return


def test_u_p_inverts_v():
    ''' U_p V = p^k on random series '''
    np.random.seed(5)
    for _ in range(100):
        p = int(np.random.choice([5, 7, 11]))
        k = int(np.random.randint(0, 5))
        f = random_padic(p=p, B=10, N=int(np.random.randint(1, 40)), unit=False)
        assert af.u_p(af.v_operator(f, p, k), p).equals(f.scale(p**k))
    return


def test_theta_leibniz():
    ''' theta(fg) = theta(f) g + f theta(g) '''
    np.random.seed(7)
    for _ in range(100):
        p = int(np.random.choice([5, 7, 11]))
        f = random_padic(p=p, B=10, N=int(np.random.randint(1, 60)), unit=False)
        g = random_padic(p=p, B=10, N=int(np.random.randint(1, 60)), unit=False)
        lhs = af.theta(f*g)
        rhs = af.theta(f)*g + f*af.theta(g)
        assert lhs.trunc == rhs.trunc
        assert lhs.equals(rhs)
    return


def test_projection_formula():
    ''' U_p(f V_0(g)) = U_p(f) g '''
    np.random.seed(8)
    for _ in range(100):
        p = int(np.random.choice([5, 7, 11]))
        f = random_padic(p=p, B=10, N=int(np.random.randint(p, 120)), unit=False)
        g = random_padic(p=p, B=10, N=int(np.random.randint(1, 30)), unit=False)
        lhs = af.u_p(f*af.v_operator(g, p, 0), p)
        rhs = af.u_p(f, p)*g
        assert lhs.equals(rhs)
    return


def test_theta_commutes_with_v():
    ''' theta(V_k f) = p V_k(theta f) '''
    np.random.seed(9)
    for _ in range(100):
        p = int(np.random.choice([5, 7, 11]))
        k = int(np.random.randint(0, 5))
        f = random_padic(p=p, B=12, N=int(np.random.randint(1, 40)), unit=False)
        lhs = af.theta(af.v_operator(f, p, k))
        rhs = af.v_operator(af.theta(f), p, k).scale(p)
        assert lhs.trunc == rhs.trunc
        assert lhs.equals(rhs)
    return


def test_serialize():
    f = random_padic(seed=6)
    text = af.serialize(f)
    assert text.split('\n')[0] == 'padic 11 8'
    g = af.deserialize(text)
    assert g.ring == f.ring and g.offset == f.offset and g.coeffs == f.coeffs
    h = af.deserialize(af.serialize(af.Series(af.ZZ, [-3, 0, 5], offset=-1)))
    assert h.coeffs == [-3, 0, 5] and h.offset == -1
    with pytest.raises(ValueError):
        af.deserialize('float\n0 1\n1\n')
    with pytest.raises(ValueError):
        af.deserialize('exact\n0 3\n1\n')
    return


if __name__ == '__main__':
    test_products_match_schoolbook()
    test_product_truncation()
    test_inverse_methods_agree()
    test_laurent_inverse()
    test_arithmetic()
    test_ring_mismatch()
    test_theta()
    test_u_p_and_v()
    test_u_p_inverts_v()
    test_theta_leibniz()
    test_projection_formula()
    test_theta_commutes_with_v()
    test_serialize()
