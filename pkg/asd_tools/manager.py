'''
Build and run the per-prime check jobs
'''

import psutil
import multiprocessing as mp

import numpy as np
import pandas as pd
import sciris as sc
import gmpy2

import asd_forms as af
import asd_curves as acu

from . import config as cfg
from . import congruence_engine as ce
from .cache import SeriesCache
from .version import __version__


__all__ = ['Job', 'Builder', 'Manager', 'ap_table', 'cache_job', 'run_job', 'run_jobs', 'assemble', 'versions']


def versions():
    ''' Versions recorded in every report '''
    return dict(asdlab=__version__, sciris=sc.__version__, numpy=np.__version__, pandas=pd.__version__, gmpy2=gmpy2.version())


class Job:
    ''' Small class to hold everything one prime needs '''

    def __init__(self, command, p, curve_pars, check_pars, run_pars, paths, count=0, force=False):
        self.command = command
        self.force = force
        self.p = p
        self.curve_pars = curve_pars
        self.check_pars = check_pars
        self.run_pars = run_pars
        self.paths = paths
        self.count = count
        return

    def __repr__(self):
        return f'Job({self.command}, p={self.p}, #{self.count})'


class Builder:
    '''
    Build the jobs -- usually not invoked directly by the user; see the Manager class
    '''

    def __init__(self, curve_pars, check_pars, run_pars, paths):
        self.curve_pars = curve_pars
        self.check_pars = check_pars
        self.run_pars = run_pars
        self.paths = paths
        return

    def get(self, command, force=False):
        jobs = []
        for i, p in enumerate(sorted(set(self.check_pars.primes))):
            jobs.append(Job(command, p, sc.dcp(self.curve_pars), sc.dcp(self.check_pars), sc.dcp(self.run_pars), sc.dcp(self.paths), count=i, force=force))
        print(f'Done: {len(jobs)} jobs created')
        return jobs


class Manager(sc.objdict):
    '''
    The main class for running checks over a list of primes. Parameters not
    supplied are taken from the config module globals. See the scripts folder
    for usage examples.
    '''

    def __init__(self, name=None, curve_pars=None, check_pars=None, run_pars=None, paths=None, cfg=cfg):

        # Handle inputs
        input_pars = sc.objdict()
        input_pars.curve_pars = curve_pars
        input_pars.check_pars = check_pars
        input_pars.run_pars = run_pars
        input_pars.paths = paths
        for k,pars in input_pars.items():
            defaults = getattr(cfg, k)
            self[k] = sc.dcp(sc.objdict(sc.mergedicts(defaults, pars))) # Copy the merged objdict
        self.check_pars.cusp_aps = cfg.parse_cusp_aps(self.check_pars.cusp_aps)

        self.name = self.__class__.__name__ if name is None else name
        self.curve = acu.WeierstrassCurve(*self.curve_pars.ainvs)
        self.results = None
        self.report = None
        self.builder = Builder(self.curve_pars, self.check_pars, self.run_pars, self.paths)
        return

    def ap_table(self):
        return ap_table(self.curve, self.check_pars.primes)

    def run(self, command='check-zhang', force=False):
        ''' Run one job per prime and assemble the JSON-ready report '''
        sc.heading(f'Running {command} for {self.curve}...')
        jobs = self.builder.get(command, force=force)
        self.results = run_jobs(jobs, self.run_pars)
        self.report = assemble(self.results)
        return self.report

    def build_cache(self, force=False):
        ''' Compute and store the Zhang basis for every ordinary prime; returns the files written '''
        if not self.paths.cache:
            errormsg = 'No cache folder set; use --cache or ASDLAB_CACHE'
            raise cfg.ConfigError(errormsg)
        sc.heading(f'Caching the Zhang basis in {self.paths.cache}...')
        files = []
        for job in self.builder.get('cache', force=force):
            files += cache_job(job)
        return files

    def save(self, filename=None):
        filename = filename or self.paths.out
        if filename is None:
            filename = sc.makefilepath(filename=f'{self.name}.json', folder=self.paths.outputs, makedirs=True)
        sc.savejson(filename, self.report)
        print(f'Done, saved {filename}')
        return filename

    @property
    def exit_code(self):
        if self.report is None:
            errormsg = 'Nothing has been run yet; call run() first'
            raise RuntimeError(errormsg)
        s = self.report['summary']
        return 1 if (s['failed'] or s['inconclusive']) else 0


def ap_table(curve, primes):
    ''' One row per prime: a_p, point count and reduction type '''
    rows = []
    for p, frob in acu.frobenius_table(curve, sorted(set(primes))).items():
        if isinstance(frob, acu.BadReduction):
            rows.append(dict(p=p, a_p=None, points=None, ordinary=None, reduction='bad'))
        else:
            rows.append(dict(p=p, a_p=frob.a_p, points=p + 1 - frob.a_p, ordinary=frob.ordinary,
                             reduction='ordinary' if frob.ordinary else 'supersingular'))
    return pd.DataFrame(rows, columns=['p', 'a_p', 'points', 'ordinary', 'reduction'])


#%% Running

def _fit_l_range(p, check_pars, M, max_trunc):
    ''' Largest l_max whose budget fits below max_trunc, and the notes explaining any reduction '''
    notes = []
    l_max = check_pars.l_max
    if check_pars.trunc is not None:
        return l_max, notes
    while l_max >= 1 and check_pars.n_max*p**(l_max + M) + 1 > max_trunc:
        l_max -= 1
    if l_max < check_pars.l_max:
        notes.append(f'p={p}: l_max lowered from {check_pars.l_max} to {l_max} so that the truncation fits below max_trunc={max_trunc}')
    return l_max, notes


def _inconclusive_report(p, k, kind, forms, reason):
    report = ce.CongruenceReport(p, k, notes=[reason])
    for form in forms:
        report.add(ce.CongruenceRecord(kind, form, None, None, None, None, ce.INCONCLUSIVE))
    return report


def _build_forms(specs, check, cache, force, verbose):
    ''' The q-expansions of the given specs at the check's (N, ring), through the cache if any '''
    factory = af.FormFactory(check.N, check.ring)
    out = []
    for spec in specs:
        build = lambda spec=spec: af.mero_form(spec, check.N, check.ring, factory=factory)
        if cache is None:
            out.append(build())
        else:
            out.append(cache.get(spec.label, check.p, check.B, check.N, build, force=force))
        sc.printv(f'  built {spec.label} at p={check.p}, B={check.B}, N={check.N}', 1, verbose)
    return out


def _pole(curve_pars, curve):
    j0 = curve_pars.get('j0', None)
    if j0 is None:
        j = curve.j_invariant()
        if j.denominator != 1:
            errormsg = f'j(C)={j} is not an integer; pass j0 explicitly'
            raise cfg.ConfigError(errormsg)
        j0 = int(j)
    return int(j0)


def _zhang_job(job, curve, frob, verbose):
    p = job.p
    k = 2
    labels = ['f1', 'f2', 'f3']
    cp = job.check_pars
    l_max, notes = _fit_l_range(p, cp, 1, job.run_pars.max_trunc)
    if l_max < 1:
        reason = f'p={p}: even l=1 needs a truncation above max_trunc={job.run_pars.max_trunc}'
        return _inconclusive_report(p, k, 'eigen', labels, reason), dict(k=k)
    check = ce.CheckConfig(p, k=k, l_range=range(1, l_max + 1), n_range=range(1, cp.n_max + 1), N=cp.trunc, B=cp.prec, M=1)
    cache = SeriesCache(job.paths.cache, verbose=verbose) if job.paths.cache else None
    basis = _build_forms(af.zhang_spec(), check, cache, job.force, verbose)
    spec = acu.up_spectrum(frob, k, check.ctx, perturb=p if cp.sabotage else 0)
    report = ce.eigen_suite(basis, spec.lambdas, check, labels)
    report.notes.extend(notes)
    intro = ce.intro_congruence_check(basis[0], frob, check).records[0] # Informational: not part of the exit code
    report.notes.append(f'p={p}: a_p(f1) = a_p(C)^2 mod p is {intro.status} (valuation {intro.observed_valuation})')
    conventions = dict(lambdas=['u^2', 'p', 'p^2 u^-2'], sabotage=bool(cp.sabotage), **check.conventions())
    return report, conventions


def _eisenstein_count(k):
    ''' Eisenstein classes in weight k + 2 at level 1: d = 2 dim S + #Eis '''
    return acu.cohomology_dimension(k) - 2*acu.level_one_dimensions(k + 2)[1]


def _theorem_degree(cp, k):
    ''' Degree M of the polynomial the theorem check applies '''
    if cp.poly == 'empty':
        return 0
    M = k + 1
    if cp.poly == 'enlarged':
        M += acu.cohomology_dimension(k) + _eisenstein_count(k) # Each Eisenstein class gives two linear factors
    return M


def _form_label(k, j0, terms):
    ''' Cache-safe id such as "k2_jm3375_19x1_m91125x2" '''
    body = '_'.join(f'{c}x{m}' for c, m in terms)
    return f'k{k}_j{j0}_{body}'.replace('-', 'm')


def _theorem_polys(spec, cp, k, ctx, p):
    ''' (R, E): the convention-free annihilator and the polynomial for the aggregate check '''
    if cp.poly == 'empty':
        one = acu.AnnihilatorPoly([1], ctx)
        return one, one
    R = acu.residue_charpoly(spec, acu.TwistConvention.NONE)
    E = acu.residue_charpoly(spec, cp.twist)
    if cp.poly == 'enlarged':
        Q = acu.classical_q_poly(cp.cusp_aps.get(p, []), _eisenstein_count(k), k, ctx)
        R = acu.product_coeffs(R, Q)
        E = acu.product_coeffs(E, Q)
    return R, E


def _theorem_job(job, curve, frob, verbose):
    p = job.p
    cp = job.check_pars
    k = cp.k
    if cp.poly == 'enlarged':
        cfg.check_cusp_aps(cp.cusp_aps, [p], k)
    j0 = _pole(job.curve_pars, curve)
    form = af.MeroFormSpec.from_j_quotients(k, j0, job.curve_pars.terms, label=_form_label(k, j0, job.curve_pars.terms))
    expc = cfg.parse_expc(cp.expc, k)
    M = _theorem_degree(cp, k)

    max_trunc = job.run_pars.max_trunc
    l_max, notes = _fit_l_range(p, cp, M, max_trunc)
    run_aggregate = l_max >= 1
    if run_aggregate:
        check = ce.CheckConfig(p, k=k, l_range=range(1, l_max + 1), n_range=range(1, cp.n_max + 1), N=cp.trunc, B=cp.prec, twist=cp.twist, expc=expc, M=M)
    else: # Only the annihilator is feasible, at a short output truncation
        N = cp.trunc or max_trunc
        check = ce.CheckConfig(p, k=k, l_range=[1], n_range=[1], N=N, B=cp.prec, twist=cp.twist, expc=expc, M=M)
        notes.append(f'p={p}: the aggregate check with M={M} needs a truncation above max_trunc={max_trunc}; only the annihilator runs, on {-(-N//p**M)} output coefficients')

    cache = SeriesCache(job.paths.cache, verbose=verbose) if job.paths.cache else None
    f = _build_forms([form], check, cache, job.force, verbose)[0]
    spec = acu.up_spectrum(frob, k, check.ctx, perturb=p if cp.sabotage else 0)
    R, E = _theorem_polys(spec, cp, k, check.ctx, p)

    report = ce.annihilator_check(f, R, check, form='f')
    if run_aggregate:
        report.extend(ce.corollary_aggregate_check(f, E, check, form='f'))
    else:
        report.extend(ce.skipped_report(p, k, 'aggregate check beyond max_trunc', forms=['f'], kind='aggregate'))
    report.notes.extend(notes)
    conventions = dict(poly=cp.poly, j0=j0, terms=[list(t) for t in job.curve_pars.terms], cusp_aps=list(cp.cusp_aps.get(p, [])),
                       degree_R=R.degree, degree_E=E.degree, sabotage=bool(cp.sabotage), **check.conventions())
    return report, conventions


def cache_job(job):
    ''' Build the Zhang basis at the check-zhang budget for one prime and store it '''
    curve = acu.WeierstrassCurve(*job.curve_pars.ainvs)
    frob = acu.frobenius_table(curve, [job.p])[job.p]
    if isinstance(frob, acu.BadReduction) or not frob.ordinary:
        print(f'Skipping p={job.p}: not an ordinary prime of good reduction')
        return []
    cp = job.check_pars
    l_max, notes = _fit_l_range(job.p, cp, 1, job.run_pars.max_trunc)
    for note in notes:
        print(note)
    if l_max < 1:
        return []
    check = ce.CheckConfig(job.p, k=2, l_range=range(1, l_max + 1), n_range=range(1, cp.n_max + 1), N=cp.trunc, B=cp.prec, M=1)
    cache = SeriesCache(job.paths.cache, verbose=job.run_pars.verbose)
    specs = af.zhang_spec()
    _build_forms(specs, check, cache, job.force, job.run_pars.verbose)
    return [cache.filename(spec.label, check.p, check.B, check.N) for spec in specs]


def run_job(job, n_jobs=1):
    '''
    Run the checks of one prime. Bad reduction and (by default) supersingular
    primes give skipped reports.

    Returns:
        dict in the per-prime report schema, plus "summary" and "notes"
    '''
    verbose = job.run_pars.verbose
    T = sc.tic()
    print(f'Running {job.command} at p={job.p} (job {job.count+1} of {n_jobs})...')
    curve = acu.WeierstrassCurve(*job.curve_pars.ainvs)
    k = 2 if job.command == 'check-zhang' else job.check_pars.k
    forms = ['f1', 'f2', 'f3'] if job.command == 'check-zhang' else ['f']
    conventions = {}
    try:
        frob = acu.a_p(curve, job.p)
    except acu.BadReduction as E:
        report = ce.skipped_report(job.p, k, f'bad reduction ({str(E)})', forms=forms)
    else:
        if not frob.ordinary:
            if not job.check_pars.skip_supersingular:
                errormsg = f'p={job.p} is supersingular for {curve} (a_p={frob.a_p})'
                raise af.SupersingularPrime(errormsg)
            report = ce.skipped_report(job.p, k, f'supersingular (a_p={frob.a_p})', forms=forms)
        elif job.command == 'check-zhang':
            report, conventions = _zhang_job(job, curve, frob, verbose)
        elif job.command == 'check-theorem':
            report, conventions = _theorem_job(job, curve, frob, verbose)
        else:
            errormsg = f'Command "{job.command}" does not run per-prime checks; choices are ["check-zhang", "check-theorem"]'
            raise ValueError(errormsg)
    if verbose:
        sc.toc(T)
    return dict(
        curve       = list(curve.ainvs),
        p           = job.p,
        k           = k,
        checks      = report.to_list(),
        conventions = conventions,
        versions    = versions(),
        summary     = report.summary(),
        notes       = report.notes,
    )


def _choose_cpus(jobs, run_cfg):
    ''' Cap by CPU share and by estimated RAM per job '''
    cpu_limit = max(1, int(mp.cpu_count()*run_cfg['cpu_thresh']))
    max_trunc = run_cfg['max_trunc']
    ram_available = psutil.virtual_memory().available/1e9
    ram_required = max(0.1, 40*max_trunc*64/1e9) # Roughly 40 cached series of 64-byte coefficients
    ram_limit = max(1, int(ram_available/ram_required*run_cfg['mem_thresh']))
    n_cpus = min(cpu_limit, ram_limit, len(jobs))
    print(f'{n_cpus} CPUs are being used due to a CPU limit of {cpu_limit} and estimated RAM limit of {ram_limit}')
    return n_cpus


def run_jobs(jobs, run_cfg):
    ''' Run every job, in parallel or in serial, and return the per-prime results sorted by p '''
    n_cpus = run_cfg['n_cpus']
    sc.heading('Running jobs...')
    TT = sc.tic()
    if run_cfg['parallel'] and len(jobs) > 1: # pragma: no cover
        print('...running in parallel')
        if n_cpus is None:
            n_cpus = _choose_cpus(jobs, run_cfg)
        else:
            print(f'Using user-specified {n_cpus} CPUs')
        results = sc.parallelize(run_job, iterarg=jobs, kwargs=dict(n_jobs=len(jobs)), ncpus=n_cpus)
    else:
        print('...running in serial')
        results = [run_job(job, n_jobs=len(jobs)) for job in jobs]
    sc.toc(TT)
    return sorted(results, key=lambda r: r['p'])


def assemble(results):
    ''' Merge per-prime results into the top-level report '''
    keys = ['total', 'passed', 'failed', 'inconclusive', 'skipped', 'trivial', 'failed_p_divides_n']
    summary = {key: sum(r['summary'][key] for r in results) for key in keys}
    summary['primes'] = [r['p'] for r in results]
    summary['status'] = 'fail' if (summary['failed'] or summary['inconclusive']) else 'pass'
    notes = [note for r in results for note in r['notes']]
    reports = [{key: r[key] for key in ['curve', 'p', 'k', 'checks', 'conventions', 'versions']} for r in results]
    return dict(reports=reports, summary=summary, notes=notes)
