'''
Apply the residue annihilator (and the aggregate congruence) to f1 = E4/(j + 3375),
then repeat with the polynomial enlarged by the classical part Q(X). At weight 4
there are no cusp forms, so Q(X) = (X - 1)(X - p^3).

Example usage:

    python run_theorem.py --micro
    python run_theorem.py --p 11,23 --form "19:1,-91125:2"

'''

import sys
import asd_tools as at

if __name__ == '__main__':

    # Settings
    args = at.config.process_inputs(sys.argv)

    codes = {}
    for poly in ['residue', 'enlarged']:
        check_pars = dict(poly=poly)
        mgr = at.Manager(name=f'Theorem_{poly}', check_pars=check_pars)
        mgr.run(command='check-theorem', force=args.force)
        mgr.save()
        for report in mgr.report['reports']:
            conv = report['conventions']
            if conv:
                print(f"p={report['p']}, poly={poly}: deg R={conv['degree_R']}, deg E={conv['degree_E']}, N={conv['N']}, B={conv['B']}")
        for note in mgr.report['notes']:
            print(f'  {note}')
        codes[poly] = mgr.exit_code

    print(f'Exit codes by polynomial: {codes}')
    sys.exit(max(codes.values()))
