'''
Capped-precision p-adic integers. Every value lives in Z/p^B Z for a single
context (p, B); valuations are capped at B, and the unit root of the Frobenius
quadratic X^2 - a_p X + p is found by Newton (Hensel) lifting.
'''

import math


__all__ = ['InfiniteValuation', 'NotAUnit', 'SupersingularPrime', 'PrecisionMismatch',
           'is_prime', 'legendre', 'val_p', 'PadicContext', 'PadicInt', 'padic_inverse', 'unit_root']


class InfiniteValuation(ArithmeticError):
    ''' Raised by val_p() for n = 0 '''
    pass


class NotAUnit(ArithmeticError):
    pass


class SupersingularPrime(ValueError):
    ''' The prime divides a_p, so there is no unit root '''
    pass


class PrecisionMismatch(ValueError):
    pass


def is_prime(n):
    ''' Trial division; the primes used here are small '''
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def legendre(a, p):
    ''' Quadratic character of a modulo an odd prime p, as -1, 0 or 1 '''
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p-1)//2, p) == 1 else -1


def val_p(n, p):
    '''
    Exponent of p in the nonzero integer n.

    **Examples**::

        val_p(75, 5)   # 2
        val_p(7, 5)    # 0
    '''
    n = int(n)
    if n == 0:
        errormsg = f'The valuation of 0 is infinite (p={p})'
        raise InfiniteValuation(errormsg)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicContext:
    '''
    The pair (p, B): arithmetic is carried out modulo p^B.

    Args:
        p (int): a prime larger than 3
        B (int): absolute precision exponent, at least 1
    '''

    __slots__ = ('p', 'B', 'modulus')

    def __init__(self, p, B):
        p = int(p)
        B = int(B)
        if p <= 3 or not is_prime(p):
            errormsg = f'The prime must satisfy p > 3, not p={p}'
            raise ValueError(errormsg)
        if B < 1:
            errormsg = f'Precision must be at least 1, not B={B}'
            raise ValueError(errormsg)
        object.__setattr__(self, 'p', p)
        object.__setattr__(self, 'B', B)
        object.__setattr__(self, 'modulus', p**B)
        return

    def __setattr__(self, key, value):
        raise AttributeError('PadicContext is immutable')

    def __eq__(self, other):
        return isinstance(other, PadicContext) and self.p == other.p and self.B == other.B

    def __hash__(self):
        return hash((self.p, self.B))

    def __repr__(self):
        return f'PadicContext(p={self.p}, B={self.B})'

    def __reduce__(self):
        return (PadicContext, (self.p, self.B))

    def element(self, value):
        return PadicInt(self, value)

    @property
    def zero(self):
        return PadicInt(self, 0)

    @property
    def one(self):
        return PadicInt(self, 1)

    def with_precision(self, B):
        return PadicContext(self.p, B)

    def valuation(self, value):
        ''' Capped valuation of a raw residue '''
        value %= self.modulus
        if value == 0:
            return self.B
        return val_p(value, self.p)


class PadicInt:
    '''
    An element of Z/p^B Z. Mixed-precision arithmetic drops to the smaller B;
    mixing different primes is an error.
    '''

    __slots__ = ('ctx', 'value')

    def __init__(self, ctx, value):
        object.__setattr__(self, 'ctx', ctx)
        object.__setattr__(self, 'value', int(value) % ctx.modulus)
        return

    def __setattr__(self, key, value):
        raise AttributeError('PadicInt is immutable')

    def __reduce__(self):
        return (PadicInt, (self.ctx, self.value))

    def __repr__(self):
        return f'PadicInt({self.value} mod {self.ctx.p}^{self.ctx.B})'

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def _coerce(self, other):
        ''' Return (ctx, a, b) with both operands reduced to a shared context '''
        if isinstance(other, PadicInt):
            if other.ctx.p != self.ctx.p:
                errormsg = f'Cannot combine {self.ctx} with {other.ctx}'
                raise PrecisionMismatch(errormsg)
            ctx = self.ctx if self.ctx.B <= other.ctx.B else other.ctx
            return ctx, self.value, other.value
        if isinstance(other, int):
            return self.ctx, self.value, other
        return None

    def __add__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        ctx, a, b = co
        return PadicInt(ctx, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        ctx, a, b = co
        return PadicInt(ctx, a - b)

    def __rsub__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        ctx, a, b = co
        return PadicInt(ctx, b - a)

    def __mul__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        ctx, a, b = co
        return PadicInt(ctx, a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicInt(self.ctx, -self.value)

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse()**(-n)
        return PadicInt(self.ctx, pow(self.value, n, self.ctx.modulus))

    def __truediv__(self, other):
        if isinstance(other, int):
            other = PadicInt(self.ctx, other)
        if not isinstance(other, PadicInt):
            return NotImplemented
        return self * other.inverse()

    def __eq__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        ctx, a, b = co
        return (a - b) % ctx.modulus == 0

    def __hash__(self):
        return hash((self.ctx, self.value))

    def valuation(self):
        ''' Valuation, reported as B for the zero residue '''
        return self.ctx.valuation(self.value)

    def is_unit(self):
        return self.value % self.ctx.p != 0

    def lift(self):
        ''' Canonical representative in [0, p^B) '''
        return self.value

    def centered(self):
        ''' Representative in (-p^B/2, p^B/2] '''
        m = self.ctx.modulus
        return self.value - m if self.value > m//2 else self.value

    def reduce(self, B):
        ''' Reduce to a lower precision '''
        if B > self.ctx.B:
            errormsg = f'Cannot raise precision from B={self.ctx.B} to B={B}'
            raise PrecisionMismatch(errormsg)
        return PadicInt(self.ctx.with_precision(B), self.value)

    def inverse(self):
        return padic_inverse(self)


def padic_inverse(x):
    '''
    Inverse of a p-adic unit modulo p^B.

    **Example**::

        padic_inverse(PadicContext(5, 2).element(2))  # 13, since 2*13 = 26
    '''
    if not x.is_unit():
        errormsg = f'{x} has valuation {x.valuation()} and is not a unit'
        raise NotAUnit(errormsg)
    return PadicInt(x.ctx, pow(x.value, -1, x.ctx.modulus))


def unit_root(a_p, ctx):
    '''
    The unit root u of X^2 - a_p X + p in Z_p, to precision B.

    Newton iteration starts from u = a_p mod p (the other root is divisible by
    p) and doubles the precision each step. The derivative 2u - a_p is
    congruent to a_p mod p, so it stays invertible.

    Args:
        a_p (int): trace of Frobenius, not divisible by p
        ctx (PadicContext): the target precision

    Returns:
        PadicInt u with u^2 - a_p u + p = 0 mod p^B and u = a_p mod p
    '''
    p = ctx.p
    a_p = int(a_p)
    if a_p % p == 0:
        errormsg = f'p={p} divides a_p={a_p}: supersingular prime, there is no unit root'
        raise SupersingularPrime(errormsg)

    u = a_p % p
    prec = 1
    while prec < ctx.B:
        prec = min(2*prec, ctx.B)
        m = p**prec
        fu = (u*u - a_p*u + p) % m
        dfu = (2*u - a_p) % m
        u = (u - fu*pow(dfu, -1, m)) % m
    return PadicInt(ctx, u)
