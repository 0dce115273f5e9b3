'''
Compute Zhang's basis at every prime of the run and store it in the series
cache, so that later runs load the expansions instead of rebuilding them.

Example usage:

    python create_cache.py --full --cache cache

'''

import sys
import sciris as sc
import asd_tools as at

if __name__ == '__main__':

    args = at.config.process_inputs(sys.argv)
    if not at.config.paths.cache:
        at.config.paths.cache = 'cache'

    T = sc.tic()
    mgr = at.Manager(name='Cache')
    files = mgr.build_cache(force=args.force)
    for fn in files:
        print(fn)
    sc.toc(T)
