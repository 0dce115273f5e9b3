'''
q-expansions of the level-1 forms E4, E6, Delta and j, and of meromorphic
forms with poles at a single point j0 of the j-line, e.g. E4/(j - j0)^m.

Since j - j0 = (E4^3 - j0*Delta)/Delta and E4^3 - j0*Delta has constant term 1,
every meromorphic form handled here is a polynomial in E4, E6, Delta times a
power of the unit series (E4^3 - j0*Delta)^(-1): no Laurent inversion is
needed.
'''

import numpy as np
import sciris as sc

from .qseries import Series, ZZ, series_inverse, InsufficientTruncation


__all__ = ['sigma_table', 'eisenstein', 'delta', 'j_series', 'default_numerator', 'MeroFormSpec', 'FormFactory',
           'mero_form', 'zhang_spec', 'zhang_basis']


# Zhang's basis of the Sym^2 piece attached to the CM point j = -3375,
# as integer combinations of E4/(j + 3375)^m for m = 1, 2, 3
zhang_j0 = -3375
zhang_terms = [
    [(1, 1)],
    [(19, 1), (-91125, 2)],
    [(1399, 1), (-19008675, 2), (54251268750, 3)],
]


def sigma_table(k, N, modulus=None):
    '''
    Divisor sums by sieving: entry n of the returned list is sigma_k(n) for
    1 <= n < N (entry 0 is 0). If a modulus is given, the values are reduced.
    '''
    table = np.zeros(max(N, 1), dtype=object)
    for d in range(1, N):
        table[d::d] += pow(d, k) if modulus is None else pow(d, k, modulus)
    if modulus is not None:
        table %= modulus
    return [int(x) for x in table[:N]]


def eisenstein(k, N, ring=ZZ):
    '''
    Normalized Eisenstein series truncated at q^N:
    E4 = 1 + 240 sum sigma_3(n) q^n, E6 = 1 - 504 sum sigma_5(n) q^n.
    '''
    factors = {4: (3, 240), 6: (5, -504)}
    if k not in factors:
        errormsg = f'Only weights {list(factors.keys())} are supported, not k={k}'
        raise ValueError(errormsg)
    power, c = factors[k]
    sig = sigma_table(power, N, modulus=ring.modulus)
    coeffs = [1] + [c*s for s in sig[1:N]]
    return Series(ring, coeffs[:N])


def _eta_cubed(N, ring):
    ''' prod (1 - q^n)^3 = sum_m (-1)^m (2m+1) q^(m(m+1)/2), truncated at q^N '''
    coeffs = [0]*N
    m = 0
    while m*(m+1)//2 < N:
        coeffs[m*(m+1)//2] = (-1)**m*(2*m + 1)
        m += 1
    return Series(ring, coeffs)


def delta(N, ring=ZZ, method='eta'):
    '''
    The discriminant form Delta = q prod (1 - q^n)^24, truncated at q^N.

    Args:
        N (int): truncation order, at least 2
        ring (ring): coefficient ring
        method (str): "eta" for the product formula, "eisenstein" for (E4^3 - E6^2)/1728
    '''
    if N < 2:
        errormsg = f'Delta needs N >= 2, not N={N}'
        raise ValueError(errormsg)
    if method == 'eta':
        e = _eta_cubed(N - 1, ring)
        e8 = ((e*e)**2)**2
        return e8.shift(1)
    elif method == 'eisenstein':
        diff = eisenstein(4, N, ring)**3 - eisenstein(6, N, ring)**2
        if ring.modulus is None:
            return Series(ring, [c//1728 for c in diff.coeffs], diff.offset)
        return diff.scale(pow(1728, -1, ring.modulus))
    else:
        errormsg = f'Method "{method}" not recognized; choices are "eta" and "eisenstein"'
        raise ValueError(errormsg)


def j_series(N, ring=ZZ):
    ''' The j-invariant E4^3/Delta = q^-1 + 744 + ..., reported below q^N '''
    M = N + 2 # Inverting Delta loses two orders
    return (eisenstein(4, M, ring)**3 * series_inverse(delta(M, ring))).truncate(N)


def default_numerator(weight):
    ''' Exponents (a, b, 0) of the monomial E4^a E6^b of the given weight with the fewest factors of E4 '''
    for b in range(weight//6, -1, -1):
        if (weight - 6*b) % 4 == 0 and weight - 6*b >= 0:
            return ((weight - 6*b)//4, b, 0)
    errormsg = f'There is no monomial in E4 and E6 of weight {weight}'
    raise ValueError(errormsg)


class MeroFormSpec:
    '''
    A weight-(k+2) meromorphic form sum_t c_t * E4^a E6^b Delta^c / (E4^3 - j0 Delta)^m
    with poles only along j = j0.

    Args:
        k (int): symmetric power; the weight is k + 2
        j0 (int): pole location on the j-line, not 0 or 1728
        terms (list): tuples (coefficient, m, (a, b, c)) with 4a + 6b + 12c = k + 2 + 12m
        label (str): optional name used for cache keys
    '''

    def __init__(self, k, j0, terms, label=None):
        self.k = int(k)
        self.j0 = int(j0)
        self.terms = [(int(coef), int(m), tuple(int(e) for e in mono)) for coef, m, mono in terms]
        self.label = label
        if self.j0 in (0, 1728):
            errormsg = f'Poles at the elliptic points j0={self.j0} are not supported'
            raise ValueError(errormsg)
        for coef, m, (a, b, c) in self.terms:
            if m < 1:
                errormsg = f'Pole orders must be positive, not m={m}'
                raise ValueError(errormsg)
            weight = 4*a + 6*b + 12*c - 12*m
            if weight != self.k + 2:
                errormsg = f'Term E4^{a} E6^{b} Delta^{c} / D^{m} has weight {weight}, expected {self.k + 2}'
                raise ValueError(errormsg)
        return

    @classmethod
    def from_j_quotients(cls, k, j0, terms, numerator=None, label=None):
        '''
        Build from terms (coefficient, m) meaning coefficient*F/(j - j0)^m, where
        F = E4^a E6^b Delta^c is the weight-(k+2) numerator (by default
        default_numerator(k+2), i.e. E4 for k = 2).
        '''
        a, b, c = default_numerator(k + 2) if numerator is None else numerator
        return cls(k, j0, [(coef, m, (a, b, c + m)) for coef, m in terms], label=label)

    @property
    def max_pole_order(self):
        return max(m for _, m, _ in self.terms)

    def __repr__(self):
        return f'MeroFormSpec(k={self.k}, j0={self.j0}, terms={self.terms}, label={self.label})'


class FormFactory(sc.prettyobj):
    '''
    Builds and caches the classical series at one truncation order and ring,
    so that forms sharing a pole reuse the same inversions.
    '''

    def __init__(self, N, ring=ZZ):
        self.N = int(N)
        self.ring = ring
        self._cache = {}
        return

    def _get(self, key, func):
        if key not in self._cache:
            self._cache[key] = func()
        return self._cache[key]

    @property
    def E4(self):
        return self._get('E4', lambda: eisenstein(4, self.N, self.ring))

    @property
    def E6(self):
        return self._get('E6', lambda: eisenstein(6, self.N, self.ring))

    @property
    def Delta(self):
        return self._get('Delta', lambda: delta(self.N, self.ring))

    def power(self, name, n):
        ''' Cached power of E4, E6 or Delta '''
        base = getattr(self, name)
        if n == 1:
            return base
        return self._get((name, n), lambda: base**n)

    def monomial(self, a, b, c):
        out = None
        for name, n in [('E4', a), ('E6', b), ('Delta', c)]:
            if n:
                term = self.power(name, n)
                out = term if out is None else out*term
        if out is None:
            out = Series(self.ring, [1] + [0]*(self.N - 1))
        return out

    def denominator_inverse(self, j0):
        ''' (E4^3 - j0 Delta)^(-1), a unit power series '''
        def build():
            D = self.power('E4', 3) - self.Delta.scale(j0)
            return series_inverse(D)
        return self._get(('Dinv', j0), build)

    def pole_quotient(self, j0, m):
        ''' Delta^m (E4^3 - j0 Delta)^(-m) = (j - j0)^(-m) '''
        if m == 1:
            return self._get(('r', j0, 1), lambda: self.Delta*self.denominator_inverse(j0))
        return self._get(('r', j0, m), lambda: self.pole_quotient(j0, m - 1)*self.pole_quotient(j0, 1))

    def term(self, j0, m, a, b, c):
        ''' E4^a E6^b Delta^c (E4^3 - j0 Delta)^(-m) '''
        if c >= m: # Peel off factors of 1/(j - j0)
            return self.monomial(a, b, c - m)*self.pole_quotient(j0, m)
        Dinv = self.denominator_inverse(j0)
        return self.monomial(a, b, c)*(Dinv**m)


def mero_form(spec, N, ring=ZZ, factory=None):
    '''
    The q-expansion of a meromorphic form at the cusp, truncated at q^N.

    Args:
        spec (MeroFormSpec): the form
        N (int): truncation order
        ring (ring): coefficient ring
        factory (FormFactory): optional shared cache (must match N and ring)
    '''
    if N < 2:
        errormsg = f'Truncation N={N} is too small to build a meromorphic form'
        raise InsufficientTruncation(errormsg)
    if factory is None:
        factory = FormFactory(N, ring)
    elif factory.N != N or factory.ring != ring:
        errormsg = f'Factory is for N={factory.N}, {factory.ring}; requested N={N}, {ring}'
        raise ValueError(errormsg)
    out = None
    for coef, m, (a, b, c) in spec.terms:
        term = factory.term(spec.j0, m, a, b, c).scale(coef)
        out = term if out is None else out + term
    return out.truncate(N)


def zhang_spec():
    ''' The three forms f1, f2, f3 with poles at j = -3375, as MeroFormSpecs '''
    return [MeroFormSpec.from_j_quotients(2, zhang_j0, terms, label=f'zhang_f{i+1}') for i, terms in enumerate(zhang_terms)]


def zhang_basis(N, ring=ZZ, factory=None):
    '''
    Zhang's basis of weight-4 forms with poles at the CM point j = -3375:

        f1 = E4/(j+3375)
        f2 = 19 E4/(j+3375) - 91125 E4/(j+3375)^2
        f3 = 1399 E4/(j+3375) - 19008675 E4/(j+3375)^2 + 54251268750 E4/(j+3375)^3
    '''
    if N < 3:
        errormsg = f'The Zhang basis needs N >= 3, not N={N}'
        raise InsufficientTruncation(errormsg)
    if factory is None:
        factory = FormFactory(N, ring)
    return tuple(mero_form(spec, N, ring, factory=factory) for spec in zhang_spec())
