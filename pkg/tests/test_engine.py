'''
Tests for the congruence engine, on the Zhang basis and on synthetic series.
'''

import numpy as np
import pytest
import asd_forms as af
import asd_curves as acu
import asd_tools as at
import asd_tools.congruence_engine as ce


curve = acu.zhang_curve()


def zhang_setup(p=11, l_range=(1, 2), n_range=range(1, 6), M=1, **kwargs):
    cfg = at.CheckConfig(p, k=2, l_range=l_range, n_range=n_range, M=M, **kwargs)
    basis = af.zhang_basis(cfg.N, cfg.ring)
    spec = acu.up_spectrum(acu.a_p(curve, p), 2, cfg.ctx)
    return cfg, basis, spec


def test_budget():
    cfg = at.CheckConfig(11, k=2, l_range=[1, 2], n_range=range(1, 6))
    assert cfg.N == 5*11**3 + 1
    assert cfg.B == 23
    assert ce.ceil_log(11, 1) == 0
    assert ce.ceil_log(11, 11) == 1
    assert ce.ceil_log(11, 12) == 2
    assert cfg.required_trunc(3) == 5*11**5 + 1
    cfg.validate()
    with pytest.raises(af.InsufficientTruncation):
        cfg.validate(M=2)
    short = at.CheckConfig(11, k=2, l_range=[1, 2], n_range=range(1, 6), B=10)
    with pytest.raises(at.InsufficientPrecision):
        short.validate()
    assert cfg.conventions() == dict(twist='none', expc=1, B=23, N=6656)
    return


def test_config_errors():
    with pytest.raises(ValueError):
        at.CheckConfig(5, k=4) # Needs p > k + 1
    with pytest.raises(ValueError):
        at.CheckConfig(11, l_range=[])
    with pytest.raises(ValueError):
        at.CheckConfig(11, n_range=[0])
    return


def test_zhang_eigen_pass():
    ''' The three eigen-congruences at p = 11, l <= 2, n <= 5 '''
    cfg, basis, spec = zhang_setup()
    report = at.eigen_suite(basis, spec.lambdas, cfg)
    assert len(report) == 3*2*5
    assert report.ok
    summary = report.summary()
    assert summary['passed'] == 30
    assert summary['failed'] == summary['inconclusive'] == 0
    return


def test_zhang_eigen_other_prime():
    cfg, basis, spec = zhang_setup(p=23, l_range=[1], n_range=[1, 2, 3])
    assert at.eigen_suite(basis, spec.lambdas, cfg, ['f1', 'f2', 'f3']).ok
    return


def test_negative_controls():
    cfg, basis, spec = zhang_setup()
    f1, f2, f3 = basis

    # Perturbing the unit root by p
    bad = acu.up_spectrum(acu.a_p(curve, 11), 2, cfg.ctx, perturb=11)
    report = at.eigen_congruence_check(f1, bad.lambdas[0], cfg, form='f1')
    assert report.failures()
    assert report.summary()['failed'] > 0

    # Swapping the eigenvalues of f1 and f2
    swapped = at.eigen_congruence_check(f1, spec.lambdas[1], cfg, form='f1')
    assert swapped.failures()
    return


def test_cross_ring():
    out = at.cross_ring_check(11, l_range=(1,), n_range=(1, 2, 3))
    assert out.agree
    assert out.padic.ok
    with pytest.raises(ValueError):
        at.cross_ring_check(11, l_range=(1, 2), n_range=(1, 2, 3))
    return


def test_precision_refinement():
    ''' Raising B by 4 does not change which records pass '''
    cfg, basis, spec = zhang_setup(l_range=[1], n_range=[1, 2, 3])
    first = at.eigen_suite(basis, spec.lambdas, cfg)
    cfg2, basis2, spec2 = zhang_setup(l_range=[1], n_range=[1, 2, 3], B=cfg.B + 4)
    second = at.eigen_suite(basis2, spec2.lambdas, cfg2)
    assert first.pass_set() == second.pass_set()
    return


def test_inconclusive():
    ''' Short series and tiny precision give inconclusive records, never passing ones '''
    cfg, basis, spec = zhang_setup(l_range=[1], n_range=[1, 2])
    short = basis[0].truncate(100)
    report = at.eigen_congruence_check(short, spec.lambdas[0], cfg, form='f1')
    assert report.count(at.INCONCLUSIVE) == 2
    assert not report.ok
    ctx = af.PadicContext(11, 2)
    record = ce.judge('eigen', 'f1', 1, 1, 3, 0, ctx)
    assert record.status == at.INCONCLUSIVE
    record = ce.judge('eigen', 'f1', 1, 1, 1, 11, ctx)
    assert record.status == at.PASS and record.observed_valuation == 1
    assert record.to_dict()['status'] == 'pass'
    with pytest.raises(af.RingMismatch):
        at.eigen_congruence_check(af.zhang_basis(50)[0], spec.lambdas[0], cfg)
    return


def test_theta_image_sound():
    ''' theta^(k+1)(h) always passes; a planted unit at a multiple of p fails exactly there '''
    np.random.seed(10)
    p, k = 5, 2
    ring = af.PadicRing(af.PadicContext(p, 20))
    for _ in range(100):
        N = int(np.random.randint(20, 120))
        h = af.Series(ring, [int(x) for x in np.random.randint(0, 2**62, size=N)])
        g = af.theta(h, power=k + 1)
        report = at.theta_image_test(g, k, form='g')
        assert report.ok
        assert report.trivial == (N - 1) - (N - 1)//p
        n0 = p*int(np.random.randint(1, (N - 1)//p + 1))
        coeffs = list(g.coeffs)
        coeffs[n0] = 1
        bad = at.theta_image_test(af.Series(ring, coeffs), k, form='g')
        assert [r.n for r in bad.failures()] == [n0]
    with pytest.raises(ValueError):
        at.theta_image_test(af.Series(ring, [1, 2], offset=-1), k)
    return


def test_annihilator_and_calibration():
    cfg, basis, spec = zhang_setup(l_range=[1], n_range=[1], M=3)
    R = acu.residue_charpoly(spec)

    # Every integral combination of the basis is annihilated up to the theta-image
    np.random.seed(11)
    for _ in range(20):
        c = [int(x) for x in np.random.randint(-50, 50, size=3)]
        f = basis[0].scale(c[0]) + basis[1].scale(c[1]) + basis[2].scale(c[2])
        report = at.annihilator_check(f, R, cfg, form='combo')
        assert report.ok
        assert report.notes

    # The empty polynomial does not annihilate f1
    one = acu.AnnihilatorPoly([1], cfg.ctx)
    assert not at.annihilator_check(basis[0], one, cfg, form='f1').ok

    passing = at.calibrate(basis, curve, 11, cfg=cfg)
    assert passing[0] == dict(twist='none', expc='free')
    assert dict(twist='tate', expc=3) in passing

    E = acu.residue_charpoly(spec, 'tate')
    for f in basis:
        assert at.corollary_aggregate_check(f, E, cfg, expc=3).ok
    return


_long = {}

def long_setup():
    ''' Zhang basis at N = 400*11^3 + 1, so that R(U_p) leaves 401 coefficients; built once '''
    if not _long:
        cfg = at.CheckConfig(11, k=2, l_range=[1], n_range=[1], N=400*11**3 + 1, B=30, M=3)
        f1, f2, f3 = af.zhang_basis(cfg.N, cfg.ring)
        spec = acu.up_spectrum(acu.a_p(curve, 11), 2, cfg.ctx)
        forms = {'f1': f1, 'f2': f2, 'f3': f3, 'f1+f2': f1 + f2, '3f1-f3': f1.scale(3) - f3}
        _long.update(cfg=cfg, forms=forms, R=acu.residue_charpoly(spec))
    return _long['cfg'], _long['forms'], _long['R']


def test_annihilator_long():
    ''' R(X) = (X - u^2)(X - p)(X - p^2 u^-2) maps every named form into the theta^3-image '''
    cfg, forms, R = long_setup()
    assert R.degree == 3
    for label, f in forms.items():
        g = ce.apply_up_polynomial(f, R.raw())
        assert g.trunc >= 400
        report = at.annihilator_check(f, R, cfg, form=label)
        assert report.ok, label
        assert len(report) == 1 + 400//11
        assert report.summary()['failed'] == 0
    return


def test_annihilator_monotone():
    ''' Multiplying R by another factor (X - mu) keeps the theta^3-image property '''
    cfg, forms, R = long_setup()
    np.random.seed(12)
    mus = [0, 1, 11**3] + [int(x) for x in np.random.randint(0, 11**6, size=5)]
    for mu in mus:
        bigger = R.times(acu.AnnihilatorPoly.from_roots([mu], cfg.ctx))
        assert bigger.degree == 4
        for label in ['f1', '3f1-f3']:
            report = at.annihilator_check(forms[label], bigger, cfg, form=label)
            assert report.ok, (label, mu)
            assert [r.n for r in report.records] == [0, 11, 22, 33]

    # Equivalently, U_p - mu applied to a passing g stays in the image
    g = ce.apply_up_polynomial(forms['f2'], R.raw())
    for mu in mus:
        h = af.u_p(g, 11) - g.scale(mu)
        assert at.theta_image_test(h, 2).ok
    return


def test_calibrate_errors():
    with pytest.raises(af.SupersingularPrime):
        at.calibrate([], curve, 5)
    cfg, basis, spec = zhang_setup(l_range=[1], n_range=[1, 2], M=3)
    with pytest.raises(at.NoConventionPasses):
        at.calibrate(basis, curve, 11, cfg=cfg, perturb=11)
    return


def test_intro_congruence():
    cfg, basis, spec = zhang_setup(l_range=[1], n_range=[1])
    report = at.intro_congruence_check(basis[0], acu.a_p(curve, 11), cfg)
    record = report.records[0]
    assert record.kind == 'intro'
    assert (record.n, record.l, record.required_exponent) == (1, 1, 1)
    assert record.status in (at.PASS, at.FAIL)
    return


def test_reports():
    report = at.skipped_report(5, 2, 'supersingular')
    assert report.count(at.SKIPPED) == 3
    assert report.ok
    assert 'supersingular' in report.notes[0]
    other = at.CongruenceReport(5, 2, trivial=4)
    other.add(at.CongruenceRecord('eigen', 'f1', 5, 1, 3, 1, at.FAIL))
    report.extend(other)
    summary = report.summary()
    assert summary['total'] == 4
    assert summary['trivial'] == 4
    assert summary['failed_p_divides_n'] == 1
    assert len(report.to_list()) == 4
    return


if __name__ == '__main__':
    test_budget()
    test_config_errors()
    test_zhang_eigen_pass()
    test_zhang_eigen_other_prime()
    test_negative_controls()
    test_cross_ring()
    test_precision_refinement()
    test_inconclusive()
    test_theta_image_sound()
    test_annihilator_and_calibration()
    test_annihilator_long()
    test_annihilator_monotone()
    test_calibrate_errors()
    test_intro_congruence()
    test_reports()
