'''
The asdlab command line. Each command returns an exit code:

    0 -- every check passed (or was skipped)
    1 -- some check failed or was inconclusive
    2 -- bad configuration or an engine error before any verdict
'''

import sys
import sciris as sc

import asd_forms as af

from . import config as cfg
from . import congruence_engine as ce
from .manager import Manager


__all__ = ['main', 'cmd_ap', 'cmd_check_zhang', 'cmd_check_theorem', 'cmd_cache']


# Errors that stop a run before it produces a verdict
engine_errors = (cfg.ConfigError, sc.KeyNotFoundError, ce.InsufficientPrecision, af.InsufficientTruncation,
                 af.SupersingularPrime, ValueError)


def _print_summary(report):
    s = report['summary']
    print(f"Primes {s['primes']}: {s['passed']} passed, {s['failed']} failed, {s['inconclusive']} inconclusive, "
          f"{s['skipped']} skipped ({s['trivial']} trivial indices; {s['failed_p_divides_n']} failures with p | n)")
    for note in report['notes']:
        print(f'Note: {note}')
    return


def cmd_ap(mgr=None):
    ''' Print p, a_p, #C(F_p) and the reduction type for every prime '''
    if mgr is None:
        mgr = Manager()
    df = mgr.ap_table()
    print(f'Traces of Frobenius for {mgr.curve}:')
    print(df.to_string(index=False))
    return 0


def _run_checks(command, mgr, force):
    mgr.run(command=command, force=force)
    _print_summary(mgr.report)
    if mgr.paths.out:
        mgr.save(mgr.paths.out)
    return mgr.exit_code


def cmd_check_zhang(mgr=None, force=False):
    ''' The three eigen-congruences of the Zhang basis at every prime '''
    if mgr is None:
        mgr = Manager(name='check_zhang')
    return _run_checks('check-zhang', mgr, force)


def cmd_check_theorem(mgr=None, force=False):
    ''' The annihilator and aggregate checks for one form at every prime '''
    if mgr is None:
        mgr = Manager(name='check_theorem')
    return _run_checks('check-theorem', mgr, force)


def cmd_cache(mgr=None, force=False):
    ''' Fill the series cache with the Zhang basis '''
    if mgr is None:
        mgr = Manager(name='cache')
    files = mgr.build_cache(force=force)
    print(f'Done: {len(files)} cache files written or confirmed')
    return 0


commands = {
    'ap':            lambda force: cmd_ap(),
    'check-zhang':   lambda force: cmd_check_zhang(force=force),
    'check-theorem': lambda force: cmd_check_theorem(force=force),
    'cache':         lambda force: cmd_cache(force=force),
}


def main(argv=None):
    '''
    Entry point of the asdlab console script.

    **Examples**::

        asdlab ap --p 5-50
        asdlab check-zhang --p 11,23 --lmax 2 --nmax 5 --out zhang.json
        asdlab check-theorem --poly enlarged --cusp-aps "" --micro
    '''
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = cfg.process_inputs(['asdlab'] + list(argv))
    except (cfg.ConfigError, sc.KeyNotFoundError) as E:
        print(f'Configuration error: {str(E)}', file=sys.stderr)
        return 2

    if args.command is None:
        cfg.make_parser().print_help()
        return 2
    if args.command not in commands:
        print(f'Configuration error: command "{args.command}" not found; choices are {list(commands.keys())}', file=sys.stderr)
        return 2

    try:
        return commands[args.command](args.force)
    except engine_errors as E:
        print(f'Error running {args.command}: {type(E).__name__}: {str(E)}', file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
