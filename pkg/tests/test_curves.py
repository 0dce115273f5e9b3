'''
Tests for curve invariants, point counting and supersingular j-invariants.
'''

from fractions import Fraction

import numpy as np
import pytest
import asd_forms as af
import asd_curves as acu


small_primes = [p for p in range(5, 40) if af.is_prime(p)]


def brute_force_count(curve, p):
    ''' Count affine solutions one by one, plus the point at infinity '''
    a1, a2, a3, a4, a6 = curve.ainvs
    count = 1
    for x in range(p):
        for y in range(p):
            if (y*y + a1*x*y + a3*y - x**3 - a2*x*x - a4*x - a6) % p == 0:
                count += 1
    return count


def random_curve(p):
    while True:
        ainvs = [int(a) for a in np.random.randint(-20, 21, size=5)]
        try:
            curve = acu.WeierstrassCurve(*ainvs)
        except ValueError: # Singular over Q
            continue
        if curve.discriminant % p:
            return curve


def test_zhang_invariants():
    C = acu.zhang_curve()
    assert C.ainvs == (1, -1, 0, -2, -1)
    assert C.discriminant == -343
    assert C.j_invariant() == Fraction(-3375)
    assert C.c4 == 105
    return


def test_zhang_frobenius():
    C = acu.zhang_curve()
    f5 = acu.a_p(C, 5)
    assert f5.a_p == 0 and not f5.ordinary
    f11 = acu.a_p(C, 11)
    assert f11.a_p == 4 and f11.ordinary
    assert acu.count_points(C, 11) == 8
    assert f11.coeffs() == [11, -4, 1]
    with pytest.raises(acu.BadReduction):
        acu.a_p(C, 7)
    assert acu.reduce_and_validate(C, 11) == (1, 10, 0, 9, 10)
    with pytest.raises(acu.BadReduction):
        acu.reduce_and_validate(C, 7)
    return


def test_count_matches_brute_force():
    np.random.seed(7)
    for _ in range(100):
        p = int(np.random.choice(small_primes))
        curve = random_curve(p)
        assert acu.count_points(curve, p) == brute_force_count(curve, p)
    return


def test_hasse_bound():
    C = acu.zhang_curve()
    for p in range(5, 400):
        if af.is_prime(p) and p != 7:
            assert acu.a_p(C, p).a_p**2 <= 4*p
    with pytest.raises(acu.HasseBoundViolation):
        acu.FrobeniusQuadratic(11, 7)
    return


def test_coordinate_changes():
    ''' Unimodular changes keep the discriminant, j and a_p '''
    np.random.seed(8)
    C = acu.zhang_curve()
    for _ in range(100):
        r, s, t = [int(x) for x in np.random.randint(-6, 7, size=3)]
        D = C.change_coordinates(r, s, t)
        assert D.discriminant == C.discriminant
        assert D.j_invariant() == C.j_invariant()
    D = C.change_coordinates(2, -1, 3)
    for p in [11, 13, 17, 23]:
        assert acu.a_p(D, p).a_p == acu.a_p(C, p).a_p
    return


def test_short_model_and_twist():
    C = acu.zhang_curve()
    S = C.short_model()
    assert S.a1 == S.a2 == S.a3 == 0
    assert S.j_invariant() == C.j_invariant()
    for p in [11, 13, 17, 19, 23, 29]:
        ap = acu.a_p(C, p).a_p
        assert acu.a_p(S, p).a_p == ap
        for d in [2, 3, 5]:
            if d % p:
                assert acu.a_p(C.quadratic_twist(d), p).a_p == af.legendre(d, p)*ap
    return


def test_curve_with_j():
    for p in [11, 13, 29]:
        for j in range(p):
            curve = acu.curve_with_j(j, p)
            if j % p in (0, 1728 % p):
                continue
            jj = curve.j_invariant()
            assert (jj.numerator*pow(jj.denominator, -1, p) - j) % p == 0
    return


def test_supersingular_lists():
    assert acu.supersingular_j_list(5) == [0]
    assert acu.supersingular_j_list(11) == [0, 1]
    for p in range(5, 100):
        if af.is_prime(p):
            n = len(acu.supersingular_j_list(p))
            assert 1 <= n <= p//12 + 2
    return


def test_frobenius_table():
    table = acu.frobenius_table(acu.zhang_curve(), [5, 7, 11])
    assert isinstance(table[7], acu.BadReduction)
    assert table[11].a_p == 4
    assert table[5].a_p == 0
    return


def test_prime_limits():
    C = acu.zhang_curve()
    with pytest.raises(ValueError):
        acu.a_p(C, 3)
    with pytest.raises(ValueError):
        acu.a_p(C, 15)
    with pytest.raises(ValueError):
        acu.a_p(C, 100_003)
    with pytest.raises(ValueError):
        acu.WeierstrassCurve(0, 0, 0, 0, 0)
    return


if __name__ == '__main__':
    test_zhang_invariants()
    test_zhang_frobenius()
    test_count_matches_brute_force()
    test_hasse_bound()
    test_coordinate_changes()
    test_short_model_and_twist()
    test_curve_with_j()
    test_supersingular_lists()
    test_frobenius_table()
    test_prime_limits()
