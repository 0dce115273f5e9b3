'''
Tests for the classical q-expansions and the meromorphic forms built from them.
'''

import pytest
import asd_forms as af


N = 2000


def test_sigma_table():
    assert af.sigma_table(1, 7) == [0, 1, 3, 4, 7, 6, 12]
    assert af.sigma_table(3, 5, modulus=7) == [0, 1, 9 % 7, 28 % 7, 73 % 7]
    return


def test_eisenstein():
    E4 = af.eisenstein(4, 5)
    E6 = af.eisenstein(6, 4)
    assert E4.coeffs == [1, 240, 2160, 6720, 17520]
    assert E6.coeffs == [1, -504, -16632, -122976]
    with pytest.raises(ValueError):
        af.eisenstein(8, 5)
    return


def test_delta():
    ''' Ramanujan's tau, by both methods '''
    D = af.delta(8)
    assert D.offset == 1
    assert [D.raw(n) for n in range(8)] == [0, 1, -24, 252, -1472, 4830, -6048, -16744]
    assert D.equals(af.delta(300, method='eisenstein'))
    assert af.delta(300).equals(af.delta(300, method='eisenstein'))
    with pytest.raises(ValueError):
        af.delta(1)
    with pytest.raises(ValueError):
        af.delta(10, method='sieve')
    return


def test_eisenstein_identity():
    ''' 1728 Delta = E4^3 - E6^2 '''
    lhs = af.delta(N).scale(1728)
    rhs = af.eisenstein(4, N)**3 - af.eisenstein(6, N)**2
    assert lhs.equals(rhs)
    return


def test_j_series():
    j = af.j_series(4)
    assert j.offset == -1
    assert j.coeffs[:4] == [1, 744, 196884, 21493760]
    return


def test_j_times_delta():
    ''' j Delta = E4^3, checked modulo 11^20 '''
    ring = af.PadicRing(af.PadicContext(11, 20))
    j = af.j_series(N, ring)
    lhs = j*af.delta(N, ring)
    assert lhs.trunc >= N - 1
    assert lhs.equals(af.eisenstein(4, N, ring)**3)
    return


def test_zhang_f1_identity():
    ''' (j + 3375) f1 = E4 '''
    f1, f2, f3 = af.zhang_basis(N, af.PadicRing(af.PadicContext(23, 15)))
    ring = f1.ring
    lhs = (af.j_series(N, ring) + 3375)*f1
    assert lhs.equals(af.eisenstein(4, N, ring))
    assert f1.raw(0) == 0 and f1.raw(1) == 1
    return


def test_zhang_rings_agree():
    exact = af.zhang_basis(200)
    ring = af.PadicRing(af.PadicContext(11, 10))
    padic = af.zhang_basis(200, ring)
    for a, b in zip(exact, padic):
        assert a.to_ring(ring).equals(b)
    with pytest.raises(af.InsufficientTruncation):
        af.zhang_basis(2)
    return


def test_zhang_spec():
    specs = af.zhang_spec()
    assert [s.label for s in specs] == ['zhang_f1', 'zhang_f2', 'zhang_f3']
    assert [s.max_pole_order for s in specs] == [1, 2, 3]
    assert specs[1].terms == [(19, 1, (1, 0, 1)), (-91125, 2, (1, 0, 2))]
    return


def test_default_numerator():
    assert af.default_numerator(4) == (1, 0, 0)
    assert af.default_numerator(6) == (0, 1, 0)
    assert af.default_numerator(8) == (2, 0, 0)
    assert af.default_numerator(10) == (1, 1, 0)
    with pytest.raises(ValueError):
        af.default_numerator(2)
    return


def test_mero_spec_validation():
    with pytest.raises(ValueError):
        af.MeroFormSpec(2, 0, [(1, 1, (1, 0, 1))])
    with pytest.raises(ValueError):
        af.MeroFormSpec(2, -3375, [(1, 1, (2, 0, 1))]) # Weight 8
    with pytest.raises(ValueError):
        af.MeroFormSpec(2, -3375, [(1, 0, (1, 0, 0))])
    spec = af.MeroFormSpec.from_j_quotients(4, 8000, [(1, 1)])
    assert spec.terms == [(1, 1, (0, 1, 1))]
    return


def test_factory_sharing():
    ''' Forms with the same pole share the factory's inversions, with identical results '''
    ring = af.PadicRing(af.PadicContext(13, 8))
    factory = af.FormFactory(300, ring)
    spec = af.MeroFormSpec(2, -3375, [(1, 2, (4, 0, 1))]) # E4^4 Delta / D^2 = E4/(j + 3375) * E4^3/D
    f = af.mero_form(spec, 300, ring, factory=factory)
    g = af.mero_form(af.zhang_spec()[0], 300, ring, factory=factory)
    Dinv = factory.denominator_inverse(-3375)
    assert f.equals(g*factory.power('E4', 3)*Dinv)
    with pytest.raises(ValueError):
        af.mero_form(spec, 200, ring, factory=factory)
    with pytest.raises(af.InsufficientTruncation):
        af.mero_form(spec, 1, ring)
    return


if __name__ == '__main__':
    test_sigma_table()
    test_eisenstein()
    test_delta()
    test_eisenstein_identity()
    test_j_series()
    test_j_times_delta()
    test_zhang_f1_identity()
    test_zhang_rings_agree()
    test_zhang_spec()
    test_default_numerator()
    test_mero_spec_validation()
    test_factory_sharing()
