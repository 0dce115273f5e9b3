'''
Truncated Laurent series in q over the integers or over Z/p^B Z, together
with the operators used on q-expansions: theta = q d/dq, U_p and the Frobenius
lift V.

A Series stores the coefficients a_offset, ..., a_(trunc-1) as plain Python
integers (reduced modulo p^B for the p-adic ring). Everything from index trunc
on is unknown: asking for it raises InsufficientTruncation instead of
returning zero.

Products of long series go through Kronecker substitution: the coefficient
lists are packed into fixed-width slots of a single gmpy2 integer, multiplied
once and unpacked.
'''

from gmpy2 import mpz

from .padic_core import PadicContext, PadicInt


__all__ = ['RingMismatch', 'InsufficientTruncation', 'ExactRing', 'PadicRing', 'ZZ', 'Series',
           'series_mul', 'series_inverse', 'theta', 'u_p', 'v_operator', 'coeff', 'serialize', 'deserialize']


schoolbook_cutoff = 48 # Below this length, multiply term by term


class RingMismatch(TypeError):
    pass


class InsufficientTruncation(LookupError):
    ''' A coefficient beyond the truncation order was requested '''
    pass


#%% Coefficient rings

class ExactRing:
    ''' The integers '''

    modulus = None

    def __eq__(self, other):
        return isinstance(other, ExactRing)

    def __hash__(self):
        return hash('exact')

    def __repr__(self):
        return 'ExactRing()'

    def descriptor(self):
        return 'exact'

    def reduce(self, value):
        return int(value)

    def element(self, value):
        return int(value)

    def is_unit(self, value):
        return value in (1, -1)

    def inverse(self, value):
        if value not in (1, -1):
            errormsg = f'{value} is not a unit in the integers'
            raise ArithmeticError(errormsg)
        return value

    def scalar(self, value):
        if isinstance(value, PadicInt):
            errormsg = f'Cannot scale an exact series by the p-adic number {value}'
            raise RingMismatch(errormsg)
        return int(value)


class PadicRing:
    ''' The integers modulo p^B, for a PadicContext '''

    def __init__(self, ctx):
        self.ctx = ctx
        self.modulus = ctx.modulus
        return

    def __eq__(self, other):
        return isinstance(other, PadicRing) and self.ctx == other.ctx

    def __hash__(self):
        return hash(self.ctx)

    def __repr__(self):
        return f'PadicRing(p={self.ctx.p}, B={self.ctx.B})'

    def descriptor(self):
        return f'padic {self.ctx.p} {self.ctx.B}'

    def reduce(self, value):
        return int(value) % self.modulus

    def element(self, value):
        return PadicInt(self.ctx, value)

    def is_unit(self, value):
        return value % self.ctx.p != 0

    def inverse(self, value):
        if not self.is_unit(value):
            errormsg = f'{value} is not a unit modulo {self.ctx.p}^{self.ctx.B}'
            raise ArithmeticError(errormsg)
        return pow(value, -1, self.modulus)

    def scalar(self, value):
        if isinstance(value, PadicInt):
            if value.ctx.p != self.ctx.p or value.ctx.B < self.ctx.B:
                errormsg = f'Scalar {value} does not cover the series ring {self}'
                raise RingMismatch(errormsg)
            value = value.value
        return int(value) % self.modulus


ZZ = ExactRing()


#%% Raw coefficient-list kernels

def _schoolbook(a, b, n):
    out = [0]*n
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j in range(min(len(b), n - i)):
            out[i+j] += x*b[j]
    return out


def _kronecker(a, b, n):
    ''' First n coefficients of a*b for lists of nonnegative integers '''
    out_len = min(n, len(a) + len(b) - 1)
    amax = max(a)
    bmax = max(b)
    if amax == 0 or bmax == 0:
        return [0]*n
    bits = amax.bit_length() + bmax.bit_length() + min(len(a), len(b)).bit_length() + 1
    width = (bits + 7)//8
    A = mpz(int.from_bytes(b''.join(x.to_bytes(width, 'little') for x in a), 'little'))
    B = mpz(int.from_bytes(b''.join(x.to_bytes(width, 'little') for x in b), 'little'))
    raw = memoryview(int(A*B).to_bytes((len(a) + len(b) - 1)*width, 'little'))
    out = [int.from_bytes(raw[i*width:(i+1)*width], 'little') for i in range(out_len)]
    out.extend([0]*(n - out_len))
    return out


def _signed_kronecker(a, b, n):
    ''' Split by sign so that every packed product has nonnegative entries '''
    ap = [x if x > 0 else 0 for x in a]
    am = [-x if x < 0 else 0 for x in a]
    bp = [x if x > 0 else 0 for x in b]
    bm = [-x if x < 0 else 0 for x in b]
    pos = [x + y for x, y in zip(_kronecker(ap, bp, n), _kronecker(am, bm, n))]
    neg = [x + y for x, y in zip(_kronecker(ap, bm, n), _kronecker(am, bp, n))]
    return [x - y for x, y in zip(pos, neg)]


def _mul_lists(a, b, n, ring):
    ''' First n coefficients of the product of two coefficient lists '''
    a = a[:n]
    b = b[:n]
    if n <= 0:
        return []
    if not a or not b:
        return [0]*n
    if min(len(a), len(b)) < schoolbook_cutoff:
        out = _schoolbook(a, b, n)
    elif ring.modulus is None:
        out = _signed_kronecker(a, b, n)
    else:
        out = _kronecker(a, b, n)
    if ring.modulus is not None:
        m = ring.modulus
        out = [x % m for x in out]
    return out


def _inverse_list(a, n, ring, method='newton'):
    ''' First n coefficients of 1/a, where a[0] is a unit of the ring '''
    c0 = ring.inverse(a[0])
    if method == 'schoolbook':
        g = [c0] + [0]*(n - 1)
        for i in range(1, n):
            s = 0
            for j in range(1, min(i, len(a) - 1) + 1):
                s += a[j]*g[i-j]
            g[i] = ring.reduce(-c0*s)
        return g
    elif method == 'newton':
        g = [c0]
        prec = 1
        while prec < n:
            prec = min(2*prec, n)
            e = _mul_lists(a, g, prec, ring)
            e = [ring.reduce(-x) for x in e]
            e[0] = ring.reduce(e[0] + 2)
            g = _mul_lists(g, e, prec, ring)
        return g[:n]
    else:
        errormsg = f'Inversion method "{method}" not recognized; choices are "newton" and "schoolbook"'
        raise ValueError(errormsg)


#%% The Series class

class Series:
    '''
    A truncated Laurent series sum_{offset <= n < trunc} a_n q^n.

    Args:
        ring (ExactRing/PadicRing): coefficient ring
        coeffs (list): a_offset, a_(offset+1), ...; PadicInt entries are accepted
        offset (int): exponent of the first coefficient (may be negative)

    **Example**::

        f = Series(PadicRing(PadicContext(11, 4)), [1, -1])   # 1 - q + O(q^2)
    '''

    __slots__ = ('ring', 'offset', 'coeffs')

    def __init__(self, ring, coeffs, offset=0):
        self.ring = ring
        self.offset = int(offset)
        self.coeffs = [ring.reduce(c.value if isinstance(c, PadicInt) else c) for c in coeffs]
        return

    @classmethod
    def _raw(cls, ring, coeffs, offset):
        ''' Build from an already-reduced list without copying '''
        out = cls.__new__(cls)
        out.ring = ring
        out.offset = offset
        out.coeffs = coeffs
        return out

    @property
    def trunc(self):
        ''' Exclusive truncation order N '''
        return self.offset + len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs[:6]):
            if c:
                terms.append(f'{c}*q^{self.offset + i}')
        body = ' + '.join(terms) if terms else '0'
        return f'Series({body} + O(q^{self.trunc}), ring={self.ring})'

    def __getstate__(self):
        return (self.ring, self.offset, self.coeffs)

    def __setstate__(self, state):
        self.ring, self.offset, self.coeffs = state

    def raw(self, n):
        ''' Raw integer coefficient at index n; zero below the offset '''
        if n >= self.trunc:
            errormsg = f'Coefficient {n} requested, but the series is only known below q^{self.trunc}'
            raise InsufficientTruncation(errormsg)
        if n < self.offset:
            return 0
        return self.coeffs[n - self.offset]

    def coeff(self, n):
        return coeff(self, n)

    def __getitem__(self, n):
        return coeff(self, n)

    def _check_ring(self, other):
        if self.ring != other.ring:
            errormsg = f'Series rings differ: {self.ring} vs {other.ring}'
            raise RingMismatch(errormsg)

    def __add__(self, other):
        if not isinstance(other, Series):
            return self._add_scalar(other)
        self._check_ring(other)
        lo = min(self.offset, other.offset)
        hi = min(self.trunc, other.trunc)
        reduce = self.ring.reduce
        coeffs = [reduce(self.raw(n) + other.raw(n)) for n in range(lo, hi)]
        return Series._raw(self.ring, coeffs, lo)

    __radd__ = __add__

    def _add_scalar(self, c):
        c = self.ring.scalar(c)
        if self.trunc <= 0: # The constant term is beyond the truncation
            return self
        lo = min(self.offset, 0)
        coeffs = [self.raw(n) for n in range(lo, self.trunc)]
        coeffs[-lo] = self.ring.reduce(coeffs[-lo] + c)
        return Series._raw(self.ring, coeffs, lo)

    def __neg__(self):
        reduce = self.ring.reduce
        return Series._raw(self.ring, [reduce(-c) for c in self.coeffs], self.offset)

    def __sub__(self, other):
        if isinstance(other, Series):
            return self + (-other)
        return self + (-self.ring.scalar(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        ''' Multiply every coefficient by a scalar (int or PadicInt) '''
        c = self.ring.scalar(c)
        reduce = self.ring.reduce
        return Series._raw(self.ring, [reduce(c*x) for x in self.coeffs], self.offset)

    def __mul__(self, other):
        if isinstance(other, Series):
            return series_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return series_inverse(self)**(-n)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result*base
            n >>= 1
            if n:
                base = base*base
        if result is None: # f^0 = 1, reported to the relative precision of f
            return Series._raw(self.ring, [1] + [0]*(len(self.coeffs) - 1), 0)
        return result

    def truncate(self, N):
        ''' Forget every coefficient from index N on '''
        N = min(N, self.trunc)
        return Series._raw(self.ring, self.coeffs[:max(N - self.offset, 0)], self.offset)

    def shift(self, m):
        ''' Multiply by q^m '''
        return Series._raw(self.ring, list(self.coeffs), self.offset + m)

    def to_ring(self, ring):
        ''' Reduce into another coefficient ring (e.g. exact -> p-adic) '''
        return Series(ring, self.coeffs, self.offset)

    def equals(self, other):
        ''' True if all coefficients known for both series agree '''
        self._check_ring(other)
        lo = min(self.offset, other.offset)
        hi = min(self.trunc, other.trunc)
        reduce = self.ring.reduce
        return all(reduce(self.raw(n) - other.raw(n)) == 0 for n in range(lo, hi))

    def is_zero(self):
        return not any(self.coeffs)

    def valuations(self):
        ''' Capped p-adic valuation of each stored coefficient (p-adic ring only) '''
        ctx = self.ring.ctx
        return [ctx.valuation(c) for c in self.coeffs]


#%% Operations

def series_mul(f, g):
    '''
    Cauchy product. The result is reported exactly up to
    min(trunc(f) + offset(g), trunc(g) + offset(f)).
    '''
    f._check_ring(g)
    offset = f.offset + g.offset
    trunc = min(f.trunc + g.offset, g.trunc + f.offset)
    n = max(trunc - offset, 0)
    return Series._raw(f.ring, _mul_lists(f.coeffs, g.coeffs, n, f.ring), offset)


def series_inverse(f, method='newton'):
    '''
    Multiplicative inverse of a series whose first stored coefficient is a unit.
    The relative precision is preserved, so offset(1/f) = -offset(f).

    Args:
        f (Series): the series to invert
        method (str): "newton" (precision doubling) or "schoolbook" (term by term)
    '''
    if not f.coeffs or not f.ring.is_unit(f.coeffs[0]):
        lead = f.coeffs[0] if f.coeffs else None
        errormsg = f'Cannot invert: leading coefficient {lead} at q^{f.offset} is not a unit of {f.ring}'
        raise ArithmeticError(errormsg)
    coeffs = _inverse_list(f.coeffs, len(f.coeffs), f.ring, method=method)
    return Series._raw(f.ring, coeffs, -f.offset)


def theta(f, power=1):
    ''' Apply theta = q d/dq, i.e. a_n -> n a_n, the given number of times '''
    reduce = f.ring.reduce
    coeffs = [reduce(pow(f.offset + i, power)*c) for i, c in enumerate(f.coeffs)]
    return Series._raw(f.ring, coeffs, f.offset)


def u_p(f, p):
    '''
    The Atkin operator: (U_p f)_n = a_{pn}(f). Only defined for series that are
    holomorphic at the cusp.
    '''
    if f.offset < 0:
        errormsg = f'U_p needs a series without negative powers of q, but the offset is {f.offset}'
        raise ValueError(errormsg)
    start = -(-f.offset//p)
    trunc = -(-f.trunc//p)
    coeffs = [f.coeffs[p*n - f.offset] for n in range(start, trunc)]
    return Series._raw(f.ring, coeffs, start)


def v_operator(f, p, k, trunc=None):
    '''
    Frobenius lift at weight k: (V f)(q) = p^k f(q^p).

    Args:
        f (Series): series with offset >= 0
        p (int): the prime
        k (int): the weight
        trunc (int): optional cap on the truncation order (default p*trunc(f))
    '''
    if f.offset < 0:
        errormsg = f'V needs a series without negative powers of q, but the offset is {f.offset}'
        raise ValueError(errormsg)
    N = p*f.trunc if trunc is None else min(trunc, p*f.trunc)
    scale = p**k
    reduce = f.ring.reduce
    start = p*f.offset
    coeffs = [0]*max(N - start, 0)
    for i, c in enumerate(f.coeffs):
        idx = p*i
        if idx >= len(coeffs):
            break
        coeffs[idx] = reduce(scale*c)
    return Series._raw(f.ring, coeffs, start)


def coeff(f, n):
    '''
    The coefficient a_n(f) as a ring element (int or PadicInt). Indices at or
    beyond the truncation order raise InsufficientTruncation.
    '''
    return f.ring.element(f.raw(n))


#%% Text serialization (used by the series cache)

def serialize(f):
    ''' Ring descriptor line, "offset trunc" line, then one coefficient per line '''
    lines = [f.ring.descriptor(), f'{f.offset} {f.trunc}']
    lines.extend(str(c) for c in f.coeffs)
    return '\n'.join(lines) + '\n'


def deserialize(text):
    ''' Inverse of serialize() '''
    lines = text.strip('\n').split('\n')
    desc = lines[0].split()
    if desc[0] == 'exact':
        ring = ZZ
    elif desc[0] == 'padic':
        ring = PadicRing(PadicContext(int(desc[1]), int(desc[2])))
    else:
        errormsg = f'Ring descriptor "{lines[0]}" not recognized'
        raise ValueError(errormsg)
    offset, trunc = [int(x) for x in lines[1].split()]
    coeffs = [int(x) for x in lines[2:]]
    if len(coeffs) != trunc - offset:
        errormsg = f'Expected {trunc - offset} coefficients, found {len(coeffs)}'
        raise ValueError(errormsg)
    return Series(ring, coeffs, offset)
