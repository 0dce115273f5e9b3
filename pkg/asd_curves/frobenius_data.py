'''
U_p spectra and the polynomials that annihilate them.

For an ordinary prime p with unit root u of X^2 - a_p X + p, the U_p
eigenvalues on the residue piece Sym^k are lambda_a = u^(k-2a) p^a for
a = 0..k. The residue polynomial P has these as roots (optionally twisted),
the classical polynomial Q is assembled from cusp eigenform data plus a safe
Eisenstein factor, and their product gives the coefficients e_0..e_M.
'''

from enum import Enum

import sciris as sc

from asd_forms import PadicInt, unit_root, SupersingularPrime
from .curve_arith import HasseBoundViolation


__all__ = ['TwistConvention', 'UpSpectrum', 'AnnihilatorPoly', 'up_spectrum', 'residue_charpoly',
           'classical_q_poly', 'product_coeffs', 'level_one_dimensions', 'cohomology_dimension', 'slope_roots']


class TwistConvention(Enum):
    '''
    How the shift [1] acts on the residue piece: NONE keeps the roots lambda_a,
    TATE multiplies each by p (equivalently, roots p^(k+1)/lambda_a).
    '''
    NONE = 'none'
    TATE = 'tate'

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = 'none' if value is None else str(value).lower()
        try:
            return cls(key)
        except ValueError:
            errormsg = f'Twist convention "{value}" not recognized; choices are {[t.value for t in cls]}'
            raise sc.KeyNotFoundError(errormsg)


class UpSpectrum(sc.prettyobj):
    '''
    The U_p eigenvalues lambda_a = u^(k-2a) p^a on Sym^k, at the precision of ctx.
    '''

    def __init__(self, p, k, ctx, u):
        self.p = p
        self.k = k
        self.ctx = ctx
        self.u = u
        pk = PadicInt(ctx, p)
        self.lambdas = [u**(k - 2*a) * pk**a for a in range(k + 1)]
        return

    def __len__(self):
        return len(self.lambdas)

    def __getitem__(self, a):
        return self.lambdas[a]

    def product(self):
        out = self.ctx.one
        for lam in self.lambdas:
            out = out*lam
        return out


class AnnihilatorPoly:
    '''
    A monic polynomial over Z/p^B Z, stored with ascending coefficients.

    Args:
        coeffs (list): c_0, ..., c_M as PadicInt or int, with c_M = 1
        ctx (PadicContext): the coefficient precision
        provenance (str): "residue", "classical", "product" or "custom"
    '''

    def __init__(self, coeffs, ctx, provenance='custom'):
        self.ctx = ctx
        self.coeffs = [PadicInt(ctx, int(c)) for c in coeffs]
        self.provenance = provenance
        if not self.coeffs or self.coeffs[-1] != 1:
            errormsg = f'Annihilator polynomials must be monic, but the leading coefficient is {self.coeffs[-1] if self.coeffs else None}'
            raise ValueError(errormsg)
        return

    @classmethod
    def from_roots(cls, roots, ctx, provenance='custom'):
        ''' prod (X - r) over the given roots; no roots gives the constant 1 '''
        coeffs = [1]
        m = ctx.modulus
        for r in roots:
            r = int(r) % m
            new = [0]*(len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                new[i+1] += c
                new[i] -= r*c
            coeffs = [c % m for c in new]
        return cls(coeffs, ctx, provenance=provenance)

    def __repr__(self):
        return f'AnnihilatorPoly({[c.value for c in self.coeffs]} mod {self.ctx.p}^{self.ctx.B}, {self.provenance})'

    def __len__(self):
        return len(self.coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def raw(self):
        ''' Coefficients as plain integers in [0, p^B) '''
        return [c.value for c in self.coeffs]

    def evaluate(self, x):
        ''' Horner evaluation at a PadicInt or int '''
        out = self.ctx.zero
        for c in reversed(self.coeffs):
            out = out*x + c
        return out

    def times(self, other, provenance=None):
        if self.ctx.p != other.ctx.p:
            errormsg = f'Cannot multiply polynomials over {self.ctx} and {other.ctx}'
            raise ValueError(errormsg)
        ctx = self.ctx if self.ctx.B <= other.ctx.B else other.ctx
        a = self.raw()
        b = other.raw()
        out = [0]*(len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i+j] += x*y
        return AnnihilatorPoly(out, ctx, provenance=provenance or 'product')


def up_spectrum(frob, k, ctx, perturb=0):
    '''
    The U_p spectrum on Sym^k for an ordinary prime.

    Args:
        frob (FrobeniusQuadratic): Frobenius data of the curve at p
        k (int): symmetric power
        ctx (PadicContext): target precision; ctx.p must equal frob.p
        perturb (int): added to the unit root before building the eigenvalues (negative controls)
    '''
    if ctx.p != frob.p:
        errormsg = f'Context prime {ctx.p} does not match the Frobenius prime {frob.p}'
        raise ValueError(errormsg)
    if not frob.ordinary:
        errormsg = f'p={frob.p} is supersingular (a_p={frob.a_p}); there is no U_p spectrum of this shape'
        raise SupersingularPrime(errormsg)
    u = unit_root(frob.a_p, ctx) + perturb
    return UpSpectrum(frob.p, k, ctx, u)


def residue_charpoly(spec, twist=TwistConvention.NONE):
    ''' The polynomial P with roots lambda_a (NONE) or p*lambda_a (TATE) '''
    twist = TwistConvention.parse(twist)
    if twist == TwistConvention.NONE:
        roots = spec.lambdas
    else:
        roots = [lam*spec.p for lam in spec.lambdas]
    return AnnihilatorPoly.from_roots(roots, spec.ctx, provenance='residue')


def classical_q_poly(cusp_eigen_aps, num_eisenstein, k, ctx):
    '''
    The classical-part polynomial

        Q(X) = prod_cusp (X^2 - a_p X + p^(k+1)) * prod_Eis (X - 1)(X - p^(k+1))

    Each Eisenstein class contributes both stabilization values, which makes Q
    a multiple of the true characteristic polynomial.
    '''
    p = ctx.p
    pk1 = p**(k + 1)
    out = AnnihilatorPoly([1], ctx, provenance='classical')
    for ap in cusp_eigen_aps:
        ap = int(ap)
        if ap*ap > 4*pk1:
            errormsg = f'Cusp eigenvalue a_p={ap} violates |a_p| <= 2 p^((k+1)/2) for p={p}, k={k}'
            raise HasseBoundViolation(errormsg)
        out = out.times(AnnihilatorPoly([pk1, -ap, 1], ctx), provenance='classical')
    for _ in range(int(num_eisenstein)):
        out = out.times(AnnihilatorPoly.from_roots([1, pk1], ctx), provenance='classical')
    return out


def product_coeffs(P, Q):
    ''' The coefficients e_0..e_M of P(X) Q(X), M = deg P + deg Q '''
    return P.times(Q, provenance='product')


def level_one_dimensions(weight):
    '''
    Dimensions (dim M_w, dim S_w) of level-1 modular and cusp forms of weight w.

    **Examples**::

        level_one_dimensions(4)   # (1, 0)
        level_one_dimensions(12)  # (2, 1)
    '''
    w = int(weight)
    if w < 0 or w % 2:
        return (0, 0)
    if w == 0:
        return (1, 0)
    if w == 2:
        return (0, 0)
    dim_m = w//12 if w % 12 == 2 else w//12 + 1
    return (dim_m, dim_m - 1)


def cohomology_dimension(k):
    ''' d = dim M_(k+2) + dim S_(k+2) '''
    return sum(level_one_dimensions(k + 2))


def _hensel_unit_root(coeffs, p, prec):
    ''' The unique unit root of a monic polynomial whose other roots are divisible by p '''
    deg = len(coeffs) - 1
    r = (-coeffs[deg-1]) % p
    f = lambda x, m: sum(c*pow(x, i, m) for i, c in enumerate(coeffs)) % m
    df = lambda x, m: sum(i*c*pow(x, i-1, m) for i, c in enumerate(coeffs) if i) % m
    pr = 1
    while pr < prec:
        pr = min(2*pr, prec)
        m = p**pr
        r = (r - f(r, m)*pow(df(r, m), -1, m)) % m
    return r


def slope_roots(poly):
    '''
    Recover the roots of a polynomial whose roots have pairwise distinct
    integer valuations (e.g. the residue polynomial, valuations 0..k).

    The unit root is Hensel-lifted and divided out; when no unit root is left,
    X = pY is substituted and the polynomial divided by p^deg, which costs
    deg digits of precision.

    Returns:
        list of (PadicInt root, absolute precision), in order of increasing valuation
    '''
    ctx = poly.ctx
    p = ctx.p
    coeffs = poly.raw()
    prec = ctx.B
    shift = 0
    roots = []
    while len(coeffs) > 1:
        deg = len(coeffs) - 1
        m = p**prec
        first_unit = min(i for i, c in enumerate(coeffs) if c % p) # The leading 1 always qualifies
        n_units = deg - first_unit
        if n_units > 1:
            errormsg = f'Found {n_units} roots of valuation {shift}; slope_roots needs distinct valuations'
            raise ValueError(errormsg)
        elif n_units == 1:
            r = _hensel_unit_root(coeffs, p, prec)
            abs_prec = prec + shift
            roots.append((PadicInt(ctx.with_precision(abs_prec), r*p**shift), abs_prec))
            quotient = [0]*deg
            quotient[deg-1] = 1
            for i in range(deg - 1, 0, -1):
                quotient[i-1] = (coeffs[i] + r*quotient[i]) % m
            coeffs = quotient
        else:
            if prec <= deg:
                errormsg = f'Precision exhausted while separating slopes (prec={prec}, degree={deg})'
                raise ValueError(errormsg)
            coeffs = [c//p**(deg - i) for i, c in enumerate(coeffs)]
            prec -= deg
            shift += 1
            coeffs = [c % p**prec for c in coeffs]
    return roots
