'''
The congruence checks. Every check produces a CongruenceReport made of
per-index records; a record passes only when the observed p-adic valuation
reaches the required exponent and the working precision B can resolve that
exponent. Coefficients beyond the truncation order, or exponents beyond B,
give INCONCLUSIVE records, never passing ones.
'''

import sciris as sc

import asd_forms as af
import asd_curves as acu


__all__ = ['PASS', 'FAIL', 'INCONCLUSIVE', 'SKIPPED', 'InsufficientPrecision', 'NoConventionPasses',
           'CheckConfig', 'CongruenceRecord', 'CongruenceReport', 'theta_image_test', 'eigen_congruence_check',
           'eigen_suite', 'apply_up_polynomial', 'annihilator_check', 'corollary_aggregate_check', 'calibrate',
           'intro_congruence_check', 'cross_ring_check', 'skipped_report']


PASS = 'pass'
FAIL = 'fail'
INCONCLUSIVE = 'inconclusive'
SKIPPED = 'skipped'


class InsufficientPrecision(ValueError):
    pass


class NoConventionPasses(RuntimeError):
    ''' The untwisted data failed a check it must pass '''
    pass


def ceil_log(p, N):
    ''' Smallest e >= 0 with p^e >= N '''
    e = 0
    while p**e < N:
        e += 1
    return e


#%% Configuration

class CheckConfig(sc.prettyobj):
    '''
    Parameters of one batch of checks at a single prime.

    Args:
        p (int): the prime, with p > k + 1
        k (int): symmetric power (forms have weight k + 2)
        l_range (list): exponents l to test
        n_range (list): multipliers n to test
        B (int): working precision; computed from the precision budget if None
        N (int): truncation order of the input series; computed if None
        twist (str): "none" or "tate"
        expc (int): exponent constant c of the aggregate check
        M (int): degree of the operator in play, used for the automatic B and N
        skip_supersingular (bool): report supersingular primes as skipped instead of raising

    **Example**::

        cfg = CheckConfig(11, k=2, l_range=[1, 2], n_range=range(1, 6))
        cfg.B, cfg.N   # filled in from the budget
    '''

    def __init__(self, p, k=2, l_range=(1,), n_range=(1,), B=None, N=None, twist='none', expc=1, M=1,
                 skip_supersingular=True):
        self.p = int(p)
        self.k = int(k)
        self.l_range = sorted(set(int(l) for l in l_range))
        self.n_range = sorted(set(int(n) for n in n_range))
        self.twist = acu.TwistConvention.parse(twist)
        self.expc = int(expc)
        self.M = int(M)
        self.skip_supersingular = skip_supersingular
        if not self.l_range or not self.n_range:
            errormsg = f'Both l_range and n_range must be nonempty, not {self.l_range} and {self.n_range}'
            raise ValueError(errormsg)
        if min(self.l_range) < 0 or min(self.n_range) < 1:
            errormsg = f'Need l >= 0 and n >= 1, not l_range={self.l_range}, n_range={self.n_range}'
            raise ValueError(errormsg)
        if self.p <= self.k + 1:
            errormsg = f'The checks need p > k + 1, not p={self.p}, k={self.k}'
            raise ValueError(errormsg)
        self.N = self.required_trunc(self.M) if N is None else int(N)
        self.B = self.required_precision(self.M) if B is None else int(B)
        return

    @property
    def l_max(self):
        return max(self.l_range)

    @property
    def n_max(self):
        return max(self.n_range)

    @property
    def ctx(self):
        return af.PadicContext(self.p, self.B)

    @property
    def ring(self):
        return af.PadicRing(self.ctx)

    def required_trunc(self, M=None):
        ''' The largest index read is n_max p^(l_max + M), so it must lie below N '''
        M = self.M if M is None else M
        return self.n_max*self.p**(self.l_max + M) + 1

    def required_precision(self, M=None):
        ''' (k+1) l_max + (k+1) ceil(log_p N) + M + 4 '''
        M = self.M if M is None else M
        N = getattr(self, 'N', None) or self.required_trunc(M)
        return (self.k + 1)*self.l_max + (self.k + 1)*ceil_log(self.p, N) + M + 4

    def validate(self, M=None):
        ''' Raise if B or N falls short of the budget for an operator of degree M '''
        M = self.M if M is None else M
        need_N = self.required_trunc(M)
        if self.N < need_N:
            errormsg = f'Truncation N={self.N} is below the required {need_N} for p={self.p}, l_max={self.l_max}, n_max={self.n_max}, M={M}'
            raise af.InsufficientTruncation(errormsg)
        need_B = self.required_precision(M)
        if self.B < need_B:
            errormsg = f'Precision B={self.B} is below the required {need_B} for p={self.p}, k={self.k}, N={self.N}, M={M}'
            raise InsufficientPrecision(errormsg)
        return

    def conventions(self):
        return dict(twist=self.twist.value, expc=self.expc, B=self.B, N=self.N)


#%% Reports

class CongruenceRecord:
    ''' One tested instance: a_(n p^l)-level congruence of a given kind '''

    __slots__ = ('kind', 'form', 'n', 'l', 'required_exponent', 'observed_valuation', 'status')

    def __init__(self, kind, form, n, l, required_exponent, observed_valuation, status):
        self.kind = kind
        self.form = form
        self.n = n
        self.l = l
        self.required_exponent = required_exponent
        self.observed_valuation = observed_valuation
        self.status = status
        return

    def __repr__(self):
        return f'<{self.kind} {self.form} n={self.n} l={self.l}: v={self.observed_valuation} vs {self.required_exponent} -> {self.status}>'

    @property
    def key(self):
        return (self.kind, self.form, self.n, self.l)

    def to_dict(self):
        return dict(kind=self.kind, form=self.form, n=self.n, l=self.l, required_exponent=self.required_exponent,
                    observed_valuation=self.observed_valuation, status=self.status)


def judge(kind, form, n, l, required, value, ctx):
    '''
    Build a record from a raw residue. value=None means the coefficients
    needed were beyond the truncation order.
    '''
    if value is None:
        return CongruenceRecord(kind, form, n, l, required, None, INCONCLUSIVE)
    observed = ctx.valuation(value)
    if required > ctx.B:
        status = INCONCLUSIVE
    else:
        status = PASS if observed >= required else FAIL
    return CongruenceRecord(kind, form, n, l, required, observed, status)


class CongruenceReport(sc.prettyobj):
    '''
    A list of records plus the number of indices whose requirement was
    trivially met (exponent 0), and free-form notes.
    '''

    def __init__(self, p, k, records=None, trivial=0, notes=None):
        self.p = p
        self.k = k
        self.records = list(records) if records else []
        self.trivial = trivial
        self.notes = list(notes) if notes else []
        return

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def add(self, record):
        self.records.append(record)
        return record

    def extend(self, other):
        ''' Merge another report into this one '''
        self.records.extend(other.records)
        self.trivial += other.trivial
        self.notes.extend(other.notes)
        return self

    def count(self, status):
        return sum(r.status == status for r in self.records)

    @property
    def ok(self):
        ''' No failures and nothing inconclusive '''
        return not any(r.status in (FAIL, INCONCLUSIVE) for r in self.records)

    def failures(self):
        return [r for r in self.records if r.status == FAIL]

    def pass_set(self):
        return frozenset(r.key for r in self.records if r.status == PASS)

    def summary(self):
        return dict(
            total        = len(self.records),
            passed       = self.count(PASS),
            failed       = self.count(FAIL),
            inconclusive = self.count(INCONCLUSIVE),
            skipped      = self.count(SKIPPED),
            trivial      = self.trivial,
            failed_p_divides_n = sum(r.status == FAIL and r.n % self.p == 0 for r in self.records),
        )

    def to_list(self):
        return [r.to_dict() for r in self.records]


def _padic_ctx(f):
    if not isinstance(f.ring, af.PadicRing):
        errormsg = f'Congruence checks run on p-adic series, not on {f.ring}; use Series.to_ring() first'
        raise af.RingMismatch(errormsg)
    return f.ring.ctx


def _common_ctx(a, b):
    if a.p != b.p:
        errormsg = f'Cannot compare data at different primes: {a} vs {b}'
        raise af.PrecisionMismatch(errormsg)
    return a if a.B <= b.B else b


def _get(f, n):
    ''' Raw coefficient, or None beyond the truncation '''
    return f.raw(n) if n < f.trunc else None


#%% The checks

def theta_image_test(g, k, form=None, kind='theta_image'):
    '''
    Coefficientwise test for g = theta^(k+1)(h) with h p-integral: a_0(g) = 0 to
    full precision and val_p(a_n(g)) >= (k+1) val_p(n). Indices prime to p
    carry no condition and are only counted as trivial.
    '''
    if g.offset < 0:
        errormsg = f'The theta-image test needs a series without negative powers of q, not offset {g.offset}'
        raise ValueError(errormsg)
    ctx = _padic_ctx(g)
    p = ctx.p
    report = CongruenceReport(p, k)
    report.add(judge(kind, form, 0, 0, ctx.B, _get(g, 0), ctx))
    for n in range(p, g.trunc, p):
        l = af.val_p(n, p)
        report.add(judge(kind, form, n, l, (k + 1)*l, g.raw(n), ctx))
    report.trivial += max(g.trunc - 1, 0) - max(g.trunc - 1, 0)//p
    return report


def eigen_congruence_check(f, lam, cfg, form=None):
    '''
    For each (n, l): val_p(a_(n p^(l+1))(f) - lambda a_(n p^l)(f)) >= (k+1) l.
    '''
    ctx = _common_ctx(_padic_ctx(f), lam.ctx)
    p = ctx.p
    m = ctx.modulus
    report = CongruenceReport(p, cfg.k)
    for n in cfg.n_range:
        for l in cfg.l_range:
            hi = _get(f, n*p**(l + 1))
            lo = _get(f, n*p**l)
            value = None if hi is None else (hi - lam.value*lo) % m
            report.add(judge('eigen', form, n, l, (cfg.k + 1)*l, value, ctx))
    return report


def eigen_suite(forms, lambdas, cfg, labels=None):
    ''' Eigen checks for paired forms and eigenvalues, merged into one report '''
    labels = labels or [f'f{i+1}' for i in range(len(forms))]
    report = CongruenceReport(cfg.p, cfg.k)
    for f, lam, label in zip(forms, lambdas, labels):
        report.extend(eigen_congruence_check(f, lam, cfg, form=label))
    return report


def apply_up_polynomial(f, weights):
    ''' g = sum_i weights[i] U_p^i(f), reported up to the shortest term '''
    p = _padic_ctx(f).p
    g = None
    cur = f
    for i, w in enumerate(weights):
        if i:
            cur = af.u_p(cur, p)
        term = cur.scale(w)
        g = term if g is None else g + term
    return g


def _scaled_reverse(E, p, c):
    ''' Weights e_(M-i) p^(c(M-i)) on U_p^i '''
    e = E.raw()
    M = E.degree
    return [e[M - i]*p**(c*(M - i)) for i in range(M + 1)]


def annihilator_check(f, R, cfg, form=None, scaled=False, expc=None):
    '''
    Apply R(U_p) to f and run the theta-image test on the result.

    Args:
        f (Series): p-adic q-expansion with offset >= 0
        R (AnnihilatorPoly): monic polynomial whose roots are the claimed U_p eigenvalues
        cfg (CheckConfig): supplies k
        form (str): label for the records
        scaled (bool): if True, apply sum_i e_(M-i) p^(c(M-i)) U_p^i instead (c = expc or cfg.expc)
    '''
    p = _padic_ctx(f).p
    if scaled:
        c = cfg.expc if expc is None else expc
        weights = _scaled_reverse(R, p, c)
    else:
        weights = R.raw()
    g = apply_up_polynomial(f, weights)
    report = theta_image_test(g, cfg.k, form=form, kind='annihilator')
    report.notes.append(f'{form}: R of degree {R.degree} ({R.provenance}) maps trunc {f.trunc} to {g.trunc}')
    return report


def corollary_aggregate_check(f, E, cfg, form=None, expc=None):
    '''
    For each (n, l): val_p(sum_{i=0}^{M} e_(M-i) p^(c(M-i)) a_(n p^(l+i))(f)) >= l (k+1).
    '''
    ctx = _common_ctx(_padic_ctx(f), E.ctx)
    p = ctx.p
    m = ctx.modulus
    c = cfg.expc if expc is None else expc
    weights = _scaled_reverse(E, p, c)
    report = CongruenceReport(p, cfg.k)
    for n in cfg.n_range:
        for l in cfg.l_range:
            coeffs = [_get(f, n*p**(l + i)) for i in range(E.degree + 1)]
            value = None if None in coeffs else sum(w*a for w, a in zip(weights, coeffs)) % m
            report.add(judge('aggregate', form, n, l, l*(cfg.k + 1), value, ctx))
    return report


def calibrate(basis, curve, p, k=2, cfg=None, labels=None, perturb=0):
    '''
    Find the conventions under which the theorem-level checks pass on a basis
    whose forms are U_p eigenvectors up to the theta-image.

    The three steps: the eigen checks (which must pass), the convention-free
    annihilator check with untwisted roots (which must pass), then every
    twist in (none, tate) and exponent constant in (1, k+1) on the aggregate
    check.

    Returns:
        list of dicts with keys twist and expc; the first is the convention-free variant
    '''
    frob = acu.a_p(curve, p)
    if not frob.ordinary:
        errormsg = f'p={p} is supersingular for {curve} (a_p={frob.a_p}); calibration needs an ordinary prime'
        raise af.SupersingularPrime(errormsg)
    cfg = cfg or CheckConfig(p, k=k, M=k + 1)
    labels = labels or [f'f{i+1}' for i in range(len(basis))]
    spec = acu.up_spectrum(frob, k, cfg.ctx, perturb=perturb)

    eigen = eigen_suite(basis, spec.lambdas, cfg, labels)
    if eigen.failures():
        errormsg = f'Eigen congruences fail at p={p}: {eigen.failures()[:5]}'
        raise NoConventionPasses(errormsg)
    if not eigen.ok:
        errormsg = f'Eigen congruences are inconclusive at p={p} with B={cfg.B}, N={cfg.N}'
        raise InsufficientPrecision(errormsg)

    R = acu.residue_charpoly(spec, acu.TwistConvention.NONE)
    for f, label in zip(basis, labels):
        if not annihilator_check(f, R, cfg, form=label).ok:
            errormsg = f'The untwisted annihilator fails on {label} at p={p}'
            raise NoConventionPasses(errormsg)

    passing = [dict(twist='none', expc='free')]
    for twist in acu.TwistConvention:
        E = acu.residue_charpoly(spec, twist)
        for c in sorted({1, k + 1}):
            if all(corollary_aggregate_check(f, E, cfg, form=label, expc=c).ok for f, label in zip(basis, labels)):
                passing.append(dict(twist=twist.value, expc=c))
    return passing


def intro_congruence_check(f1, frob, cfg, form='f1'):
    ''' a_p(f1) = a_p(C)^2 mod p, recorded at n = 1, l = 1 with required exponent 1 '''
    ctx = _padic_ctx(f1)
    p = ctx.p
    hi = _get(f1, p)
    value = None if hi is None else (hi - frob.a_p**2) % ctx.modulus
    report = CongruenceReport(p, cfg.k)
    report.add(judge('intro', form, 1, 1, 1, value, ctx))
    return report


def cross_ring_check(p, l_range=(1,), n_range=(1, 2, 3), trunc=None, B=None, curve=None):
    '''
    Run the eigen checks on the Zhang basis twice: built over the integers and
    reduced afterwards, and built directly modulo p^B. Returns an objdict with
    both reports and whether their pass sets agree.
    '''
    curve = curve or acu.zhang_curve()
    cfg = CheckConfig(p, k=2, l_range=l_range, n_range=n_range, N=trunc, B=B)
    if cfg.N > 500:
        errormsg = f'The exact-ring cross-check is limited to trunc <= 500, not {cfg.N}'
        raise ValueError(errormsg)
    spec = acu.up_spectrum(acu.a_p(curve, p), cfg.k, cfg.ctx)
    labels = ['f1', 'f2', 'f3']
    exact = [f.to_ring(cfg.ring) for f in af.zhang_basis(cfg.N, af.ZZ)]
    padic = af.zhang_basis(cfg.N, cfg.ring)
    out = sc.objdict()
    out.exact = eigen_suite(exact, spec.lambdas, cfg, labels)
    out.padic = eigen_suite(padic, spec.lambdas, cfg, labels)
    out.agree = out.exact.pass_set() == out.padic.pass_set() and all(a.equals(b) for a, b in zip(exact, padic))
    return out


def skipped_report(p, k, reason, forms=('f1', 'f2', 'f3'), kind='eigen'):
    ''' One skipped record per form, with the reason kept in the notes '''
    report = CongruenceReport(p, k, notes=[f'p={p} skipped: {reason}'])
    for form in forms:
        report.add(CongruenceRecord(kind, form, None, None, None, None, SKIPPED))
    return report
