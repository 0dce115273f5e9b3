'''
Set global configurations for the runs
'''

import os
import argparse
import numpy as np
import sciris as sc

from asd_forms import is_prime
from asd_curves import level_one_dimensions

# Default settings are for debug runs

commands = ['ap', 'check-zhang', 'check-theorem', 'cache']
serial_full_trunc = 100_000 # Serial full runs: l = 2 only for p <= 23, l = 1 above


class ConfigError(ValueError):
    ''' Bad or inconsistent run configuration; maps to exit code 2 '''
    pass


def get_defaults():

    curve_pars = sc.objdict(
        ainvs = [1, -1, 0, -2, -1], # y^2 + xy = x^3 - x^2 - 2x - 1
        j0    = None,  # Pole location; None means j(C) of the curve (-3375 here)
        terms = [(1, 1)], # Form as coefficient*E4/(j - j0)^m pairs; the default is f1
    )

    check_pars = sc.objdict(
        primes    = [11, 23],
        k         = 2,
        l_max     = 2,
        n_max     = 5,
        twist     = 'tate', # Residue-polynomial convention of the aggregate check; 'none' is the literal reading
        expc      = 'k1',  # Exponent constant of the aggregate check: "1" or "k1" (meaning k + 1)
        trunc     = None,  # Overrides the truncation from the precision budget
        prec      = None,  # Overrides the precision from the precision budget
        poly      = 'residue', # Which annihilator the theorem check uses: residue, enlarged or empty
        cusp_aps  = {},    # Per prime, the a_p of the level-1 cusp eigenforms of weight k + 2, e.g. {11: [534612]}
        sabotage  = False, # Perturb the unit root by p (negative control)
        skip_supersingular = True,
    )

    run_pars = sc.objdict(
        n_cpus     = None,    # Manually set the number of CPUs -- otherwise calculated automatically
        cpu_thresh = 0.95,    # Don't use more than this amount of available CPUs, if number of CPUs is not set
        mem_thresh = 0.80,    # Don't use more than this amount of available RAM, if number of CPUs is not set
        parallel   = True,    # Only switch to False for debugging
        verbose    = 0,
        max_trunc  = 700_000, # Largest series built; l_max is lowered for primes that would need more
        base_seed  = 0,
    )

    paths = sc.objdict(
        cache   = None, # Folder for cached series; None disables the cache
        outputs = 'results',
        out     = None, # JSON report path
    )
    return curve_pars, check_pars, run_pars, paths


# Populate the global namespace
curve_pars, check_pars, run_pars, paths = get_defaults()
np.random.seed(run_pars.base_seed) # Reset the global seed on import


def reset():
    ''' Restore every global group to its defaults, in place '''
    for group, defaults in zip([curve_pars, check_pars, run_pars, paths], get_defaults()):
        group.clear()
        group.update(defaults)
    return


#%% Parsing helpers

def parse_int_list(value, name='value'):
    '''
    Parse "11,23,29" or "11-43" (every prime in the range) into a list of ints.
    Lists and ints pass through.
    '''
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    if isinstance(value, (int, np.integer)):
        return [int(value)]
    out = []
    try:
        for chunk in str(value).split(','):
            chunk = chunk.strip()
            if not chunk:
                continue
            head, sep, tail = chunk[1:].partition('-') # The first character may be a minus sign
            if sep:
                lo, hi = int(chunk[0] + head), int(tail)
                out += [q for q in range(lo, hi + 1) if is_prime(q)]
            else:
                out.append(int(chunk))
    except ValueError as E:
        errormsg = f'Could not parse {name}="{value}" as a list of integers: {str(E)}'
        raise ConfigError(errormsg)
    return out


def parse_curve(value):
    ainvs = parse_int_list(value, name='curve')
    if len(ainvs) != 5:
        errormsg = f'A curve needs exactly five coefficients a1,a2,a3,a4,a6, not {ainvs}'
        raise ConfigError(errormsg)
    return ainvs


def parse_form(value):
    ''' "c:m,c:m" -> [(c, m), ...] '''
    if isinstance(value, (list, tuple)):
        return [tuple(int(x) for x in t) for t in value]
    terms = []
    for chunk in str(value).split(','):
        try:
            c, m = chunk.split(':')
            terms.append((int(c), int(m)))
        except ValueError:
            errormsg = f'Form term "{chunk}" not understood; expected coefficient:order, e.g. "19:1,-91125:2"'
            raise ConfigError(errormsg)
    return terms


def parse_cusp_aps(value):
    '''
    "11:534612,13:-577738" -> {11: [534612], 13: [-577738]}. A prime given
    twice collects one a_p per cusp eigenform. Dicts pass through with int keys.
    '''
    if isinstance(value, dict):
        return {int(p): parse_int_list(aps, name=f'cusp_aps[{p}]') for p, aps in value.items()}
    out = {}
    for chunk in str(value).split(','):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            p, ap = chunk.split(':')
            out.setdefault(int(p), []).append(int(ap))
        except ValueError:
            errormsg = f'Cusp data "{chunk}" not understood; expected prime:a_p, e.g. "11:534612,13:-577738"'
            raise ConfigError(errormsg)
    return out


def check_cusp_aps(cusp_aps, primes, k):
    '''
    Q(X) needs one a_p per cusp eigenform of weight k + 2 at every prime. Raise
    a ConfigError naming the primes whose data has the wrong length.
    '''
    dim_s = level_one_dimensions(k + 2)[1]
    wrong = {p: len(cusp_aps.get(p, [])) for p in primes if len(cusp_aps.get(p, [])) != dim_s}
    if wrong:
        errormsg = f'The enlarged polynomial at weight {k+2} needs {dim_s} cusp a_p per prime; got {wrong} (prime: count)'
        raise ConfigError(errormsg)
    return


def parse_expc(value, k):
    ''' "1" -> 1, "k1" -> k + 1 '''
    key = str(value).lower()
    choices = {'1': 1, 'k1': k + 1}
    if key not in choices:
        errormsg = f'Exponent constant "{value}" not recognized; choices are {list(choices.keys())}'
        raise ConfigError(errormsg)
    return choices[key]


#%% Config file

file_keys = ['command', 'curve', 'p', 'k', 'lmax', 'nmax', 'trunc', 'prec', 'twist', 'expc', 'out', 'cache',
             'sabotage', 'poly', 'j0', 'form', 'cusp_aps', 'serial', 'verbose', 'max_trunc', 'preset']


def read_config_file(path):
    '''
    Read a key = value file. Blank lines and lines starting with # are ignored;
    hyphens in keys are treated as underscores.

    **Example file**::

        # Zhang check at two primes
        p = 11,23
        lmax = 2
    '''
    if not os.path.isfile(path):
        errormsg = f'Config file "{path}" not found'
        raise ConfigError(errormsg)
    out = sc.objdict()
    with open(path) as f:
        for i, line in enumerate(f.readlines()):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                errormsg = f'Line {i+1} of {path} is not of the form key = value: "{line}"'
                raise ConfigError(errormsg)
            key, value = [s.strip() for s in line.split('=', 1)]
            key = key.replace('-', '_')
            if key not in file_keys:
                errormsg = f'Config key "{key}" not found; choices are: {file_keys}'
                raise sc.KeyNotFoundError(errormsg)
            out[key] = value
    return out


def _truthy(value):
    if isinstance(value, str):
        return value.strip().lower() in ['1', 'true', 'yes', 'on']
    return bool(value)


#%% Command line

def make_parser():
    parser = argparse.ArgumentParser(prog='asdlab', description='Verify congruences between q-expansion coefficients and Frobenius data')
    parser.add_argument('command', nargs='?', default=None, choices=commands, help='What to run')
    parser.add_argument('--config', type=str, default=None, help='key = value file; flags given here win')
    parser.add_argument('--full', action='store_true', help='All five ordinary primes below 50, l <= 2, n <= 8 (a few minutes in parallel; with --serial, l = 2 only for p <= 23)')
    parser.add_argument('--debug', action='store_true', help='Primes 11 and 23, l <= 2, n <= 5 (default)')
    parser.add_argument('--micro', action='store_true', help='Prime 11 only, l = 1, n <= 3')
    parser.add_argument('--curve', type=str, default=None, help='a1,a2,a3,a4,a6')
    parser.add_argument('--p', type=str, default=None, help='Primes, e.g. "11,23" or "5-50"')
    parser.add_argument('--k', type=int, default=None, help='Symmetric power; forms have weight k + 2')
    parser.add_argument('--lmax', type=int, default=None, help='Largest l tested')
    parser.add_argument('--nmax', type=int, default=None, help='Largest n tested')
    parser.add_argument('--trunc', type=int, default=None, help='Override the truncation order N')
    parser.add_argument('--prec', type=int, default=None, help='Override the p-adic precision B')
    parser.add_argument('--twist', type=str, default=None, choices=['none', 'tate'], help='Twist convention of the residue polynomial')
    parser.add_argument('--expc', type=str, default=None, choices=['1', 'k1'], help='Exponent constant of the aggregate check')
    parser.add_argument('--out', type=str, default=None, help='Write the JSON report here')
    parser.add_argument('--cache', type=str, default=None, help='Series cache folder (env ASDLAB_CACHE overrides)')
    parser.add_argument('--sabotage', action='store_true', default=None, help='Perturb the unit root by p')
    parser.add_argument('--poly', type=str, default=None, choices=['residue', 'enlarged', 'empty'], help='Annihilator used by check-theorem')
    parser.add_argument('--j0', type=int, default=None, help='Pole location on the j-line')
    parser.add_argument('--form', type=str, default=None, help='Form as c:m terms meaning c*E4/(j - j0)^m, e.g. "1:1"')
    parser.add_argument('--cusp-aps', dest='cusp_aps', type=str, default=None, help='Cusp eigenform a_p for Q(X) as p:a pairs, e.g. "11:534612,13:-577738"; repeat p for several forms')
    parser.add_argument('--serial', action='store_true', default=None, help='Run jobs in serial (for debugging)')
    parser.add_argument('--verbose', action='store_true', default=None, help='Print more detail')
    parser.add_argument('--max-trunc', dest='max_trunc', type=int, default=None, help='Largest truncation order to build')
    parser.add_argument('--force', action='store_true', help='Rebuild cached series even if they exist')
    return parser


def process_inputs(argv, **kwargs):
    '''
    Handle command-line input arguments -- used by the CLI and the scripts.
    The globals are reset, then updated from the config file (if any), then
    from the flags, then from kwargs.
    '''
    parser = make_parser()
    try:
        args = parser.parse_args(argv[1:])
    except SystemExit as E:
        if E.code in (0, None): # --help
            raise
        errormsg = f'Could not parse arguments {argv[1:]}'
        raise ConfigError(errormsg)

    values = sc.objdict()
    if args.config:
        values.update(read_config_file(args.config))
    for key, value in vars(args).items():
        if value is not None and value is not False and key != 'config':
            values[key] = value
    for key, value in kwargs.items():
        if value is not None:
            values[key] = value

    reset()
    preset = values.get('preset', None)
    if args.full or preset == 'full':
        set_full(verbose=False)
    elif args.micro or preset == 'micro':
        set_micro(verbose=False)
    elif args.debug or preset == 'debug':
        set_debug(verbose=False)

    if 'curve' in values:
        curve_pars.ainvs = parse_curve(values.curve)
    if 'j0' in values:
        curve_pars.j0 = int(values.j0)
    if 'form' in values:
        curve_pars.terms = parse_form(values.form)
    if 'p' in values:
        check_pars.primes = parse_int_list(values.p, name='p')
    for key, dest in [('k', 'k'), ('lmax', 'l_max'), ('nmax', 'n_max'), ('trunc', 'trunc'), ('prec', 'prec')]:
        if key in values:
            check_pars[dest] = int(values[key])
    for key in ['twist', 'expc', 'poly']:
        if key in values:
            check_pars[key] = str(values[key]).lower()
    if 'cusp_aps' in values:
        check_pars.cusp_aps = parse_cusp_aps(values.cusp_aps)
    if 'sabotage' in values:
        check_pars.sabotage = _truthy(values.sabotage)
    if 'serial' in values:
        run_pars.parallel = not _truthy(values.serial)
    if 'verbose' in values:
        run_pars.verbose = 1 if _truthy(values.verbose) else 0
    if 'max_trunc' in values:
        run_pars.max_trunc = int(values.max_trunc)
    elif (args.full or preset == 'full') and not run_pars.parallel:
        run_pars.max_trunc = serial_full_trunc
    if 'out' in values:
        paths.out = values.out
    if 'cache' in values:
        paths.cache = values.cache
    env_cache = os.environ.get('ASDLAB_CACHE')
    if env_cache:
        paths.cache = env_cache

    args.command = values.get('command', None)
    args.force = _truthy(values.get('force', False))
    validate()
    return args


def validate():
    ''' Check the globals for consistency before anything is computed '''
    k = check_pars.k
    if k < 0:
        raise ConfigError(f'k must be nonnegative, not {k}')
    if check_pars.l_max < 1 or check_pars.n_max < 1:
        raise ConfigError(f'lmax and nmax must be at least 1, not {check_pars.l_max} and {check_pars.n_max}')
    if not check_pars.primes:
        raise ConfigError('No primes given')
    bad = [p for p in check_pars.primes if p <= 3 or not is_prime(p)]
    if bad:
        raise ConfigError(f'Only primes p > 3 are supported, not {bad}')
    if check_pars.twist not in ['none', 'tate']:
        raise ConfigError(f'Twist "{check_pars.twist}" not recognized; choices are ["none", "tate"]')
    if check_pars.poly not in ['residue', 'enlarged', 'empty']:
        raise ConfigError(f'Polynomial "{check_pars.poly}" not recognized; choices are ["residue", "enlarged", "empty"]')
    parse_expc(check_pars.expc, k)
    if check_pars.poly == 'enlarged':
        check_cusp_aps(check_pars.cusp_aps, check_pars.primes, k)
    if check_pars.prec is not None and check_pars.prec < 1:
        raise ConfigError(f'prec must be positive, not {check_pars.prec}')
    if check_pars.trunc is not None and check_pars.trunc < 2:
        raise ConfigError(f'trunc must be at least 2, not {check_pars.trunc}')
    if run_pars.max_trunc < 2:
        raise ConfigError(f'max_trunc must be at least 2, not {run_pars.max_trunc}')
    return


def print_pars(label):
    ''' Helper function to print the name '''
    print(f'Resetting parameters for a {label} run: primes={check_pars.primes}, l_max={check_pars.l_max}, n_max={check_pars.n_max}')
    return


def set_default(verbose=True):
    ''' Reset to default settings -- currently debug '''
    return set_debug(verbose=verbose)


def set_full(verbose=True):
    ''' Reset the configuration for the full run '''
    check_pars.primes = [11, 23, 29, 37, 43]
    check_pars.l_max  = 2
    check_pars.n_max  = 8
    if verbose:
        print_pars('full')
    return


def set_debug(verbose=True):
    ''' Reset the configuration for quick debugging runs '''
    check_pars.primes = [11, 23]
    check_pars.l_max  = 2
    check_pars.n_max  = 5
    if verbose:
        print_pars('debugging')
    return


def set_micro(verbose=True):
    ''' Reset the configuration to the smallest possible run '''
    check_pars.primes = [11]
    check_pars.l_max  = 1
    check_pars.n_max  = 3
    if verbose:
        print_pars('micro')
    return
