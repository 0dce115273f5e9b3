'''
Check the three eigen-congruences of Zhang's basis at every ordinary prime.

Example usage, all five ordinary primes below 50 with the report saved:

    python run_zhang.py --full --out zhang.json

'''

import sys
import asd_tools as at

if __name__ == '__main__':

    # Settings
    args = at.config.process_inputs(sys.argv)

    # Create and run
    mgr = at.Manager(name='Zhang')
    mgr.run(command='check-zhang', force=args.force)
    mgr.save()

    # Per-prime summary
    for report in mgr.report['reports']:
        statuses = [check['status'] for check in report['checks']]
        print(f"p={report['p']}: " + ', '.join(f'{s}={statuses.count(s)}' for s in sorted(set(statuses))))

    sys.exit(mgr.exit_code)
