'''
Elliptic curves in long Weierstrass form over Q: invariants, reduction modulo
p, point counts over F_p, traces of Frobenius and the supersingular j-invariants
in F_p. Only primes p > 3 are handled, so completing the square and cube is
always allowed.
'''

import math
from fractions import Fraction

import numpy as np

from asd_forms import is_prime, legendre


__all__ = ['BadReduction', 'HasseBoundViolation', 'WeierstrassCurve', 'FrobeniusQuadratic', 'zhang_curve',
           'reduce_and_validate', 'count_points', 'a_p', 'j_invariant', 'curve_with_j', 'supersingular_j_list',
           'frobenius_table']


max_prime = 100_000 # Naive counting keeps int64 arithmetic exact below this


class BadReduction(ValueError):
    ''' The prime divides the discriminant '''
    pass


class HasseBoundViolation(ValueError):
    pass


def _check_prime(p):
    if p <= 3 or not is_prime(p):
        errormsg = f'Only primes p > 3 are supported, not p={p}'
        raise ValueError(errormsg)
    if p > max_prime:
        errormsg = f'Naive point counting is limited to p <= {max_prime}, not p={p}'
        raise ValueError(errormsg)
    return


class WeierstrassCurve:
    '''
    The curve y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.

    **Example**::

        C = WeierstrassCurve(1, -1, 0, -2, -1)
        C.j_invariant()   # Fraction(-3375, 1)
    '''

    def __init__(self, a1, a2, a3, a4, a6):
        self.a1, self.a2, self.a3, self.a4, self.a6 = [int(a) for a in (a1, a2, a3, a4, a6)]
        if self.discriminant == 0:
            errormsg = f'Coefficients {self.ainvs} define a singular curve'
            raise ValueError(errormsg)
        return

    def __repr__(self):
        return f'WeierstrassCurve{self.ainvs}'

    def __eq__(self, other):
        return isinstance(other, WeierstrassCurve) and self.ainvs == other.ainvs

    def __hash__(self):
        return hash(self.ainvs)

    @property
    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self):
        return self.a1**2 + 4*self.a2

    @property
    def b4(self):
        return 2*self.a4 + self.a1*self.a3

    @property
    def b6(self):
        return self.a3**2 + 4*self.a6

    @property
    def b8(self):
        a1, a2, a3, a4, a6 = self.ainvs
        return a1**2*a6 + 4*a2*a6 - a1*a3*a4 + a2*a3**2 - a4**2

    @property
    def c4(self):
        return self.b2**2 - 24*self.b4

    @property
    def c6(self):
        return -self.b2**3 + 36*self.b2*self.b4 - 216*self.b6

    @property
    def discriminant(self):
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2**2*b8 - 8*b4**3 - 27*b6**2 + 9*b2*b4*b6

    def j_invariant(self):
        return j_invariant(self)

    def change_coordinates(self, r, s, t):
        ''' Apply x = x' + r, y = y' + s x' + t (unimodular, so a_p is unchanged) '''
        a1, a2, a3, a4, a6 = self.ainvs
        return WeierstrassCurve(
            a1 + 2*s,
            a2 - s*a1 + 3*r - s**2,
            a3 + r*a1 + 2*t,
            a4 - s*a3 + 2*r*a2 - (t + r*s)*a1 + 3*r**2 - 2*s*t,
            a6 + r*a4 + r**2*a2 + r**3 - t*a3 - t**2 - r*t*a1,
        )

    def short_model(self):
        ''' y^2 = x^3 - 27 c4 x - 54 c6, isomorphic away from 2 and 3 '''
        return WeierstrassCurve(0, 0, 0, -27*self.c4, -54*self.c6)

    def quadratic_twist(self, d):
        ''' Twist of the short model by d: y^2 = x^3 - 27 c4 d^2 x - 54 c6 d^3 '''
        return WeierstrassCurve(0, 0, 0, -27*self.c4*d**2, -54*self.c6*d**3)


class FrobeniusQuadratic:
    '''
    The Frobenius data X^2 - a_p X + p of a curve with good reduction at p.
    '''

    def __init__(self, p, a_p):
        self.p = int(p)
        self.a_p = int(a_p)
        if self.a_p**2 > 4*self.p:
            errormsg = f'a_p={self.a_p} violates the Hasse bound |a_p| <= 2 sqrt({self.p})'
            raise HasseBoundViolation(errormsg)
        self.ordinary = self.a_p % self.p != 0
        return

    def __repr__(self):
        kind = 'ordinary' if self.ordinary else 'supersingular'
        return f'FrobeniusQuadratic(p={self.p}, a_p={self.a_p}, {kind})'

    def coeffs(self):
        ''' Ascending coefficients of X^2 - a_p X + p '''
        return [self.p, -self.a_p, 1]


def zhang_curve():
    ''' The CM curve y^2 + xy = x^3 - x^2 - 2x - 1, with j = -3375 and CM by discriminant -7 '''
    return WeierstrassCurve(1, -1, 0, -2, -1)


def reduce_and_validate(curve, p):
    '''
    Reduce the coefficients modulo p and check for good reduction.

    Returns:
        tuple of the five reduced coefficients
    '''
    _check_prime(p)
    if curve.discriminant % p == 0:
        errormsg = f'p={p} divides the discriminant {curve.discriminant} of {curve}: bad reduction'
        raise BadReduction(errormsg)
    return tuple(a % p for a in curve.ainvs)


def _character_table(p):
    ''' chi[v] = quadratic character of v mod p '''
    xs = np.arange(p, dtype=np.int64)
    chi = -np.ones(p, dtype=np.int64)
    chi[(xs*xs) % p] = 1
    chi[0] = 0
    return chi


def count_points(curve, p):
    '''
    Number of points of the reduction over F_p, including the point at infinity.

    Completing the square turns the curve into (2y + a1 x + a3)^2 = g(x) with
    g(x) = 4x^3 + b2 x^2 + 2 b4 x + b6, so the count is p + 1 + sum_x chi(g(x)).
    '''
    reduce_and_validate(curve, p)
    xs = np.arange(p, dtype=np.int64)
    g = (4*xs + curve.b2 % p) % p
    g = (g*xs + (2*curve.b4) % p) % p
    g = (g*xs + curve.b6 % p) % p
    chi = _character_table(p)
    return int(p + 1 + chi[g].sum())


def a_p(curve, p):
    '''
    Trace of Frobenius a_p = p + 1 - |C(F_p)|, packaged with the ordinary flag.
    '''
    return FrobeniusQuadratic(p, p + 1 - count_points(curve, p))


def j_invariant(curve):
    ''' c4^3 / discriminant as an exact fraction '''
    return Fraction(curve.c4**3, curve.discriminant)


def curve_with_j(j, p):
    '''
    A curve over F_p with j-invariant j: y^2 = x^3 + 1 for j = 0, y^2 = x^3 + x
    for j = 1728, and y^2 = x^3 + 3j(1728 - j) x + 2j(1728 - j)^2 otherwise.
    '''
    j %= p
    if j == 0:
        return WeierstrassCurve(0, 0, 0, 0, 1)
    if j == 1728 % p:
        return WeierstrassCurve(0, 0, 0, 1, 0)
    k = (1728 - j) % p
    return WeierstrassCurve(0, 0, 0, (3*j*k) % p, (2*j*k*k) % p)


def _nonresidue(p):
    for d in range(2, p):
        if legendre(d, p) == -1:
            return d
    raise ValueError(f'No quadratic nonresidue found mod {p}') # pragma: no cover


def supersingular_j_list(p):
    '''
    The j-invariants in F_p of supersingular curves. For each j a model and its
    quadratic twist by a nonresidue are counted; j is supersingular when both
    have exactly p + 1 points.
    '''
    _check_prime(p)
    d = _nonresidue(p)
    found = []
    for j in range(p):
        curve = curve_with_j(j, p)
        twist = curve.quadratic_twist(d)
        if count_points(curve, p) == p + 1 and count_points(twist, p) == p + 1:
            found.append(j)
    return found


def frobenius_table(curve, primes):
    '''
    Frobenius data for a list of primes. Primes of bad reduction map to the
    BadReduction exception instance instead of raising.
    '''
    out = {}
    for p in primes:
        try:
            out[p] = a_p(curve, p)
        except BadReduction as E:
            out[p] = E
    return out
