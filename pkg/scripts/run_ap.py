'''
Print the traces of Frobenius of a curve (the Zhang curve by default), and the
supersingular j-invariants at each prime.

Example usage:

    python run_ap.py --p 5-50
    python run_ap.py --curve 0,0,1,-1,0 --p 5-30

'''

import sys
import asd_curves as acu
import asd_tools as at

if __name__ == '__main__':

    args = at.config.process_inputs(sys.argv)
    mgr = at.Manager(name='ap')
    df = mgr.ap_table()
    df['supersingular_j'] = [acu.supersingular_j_list(p) for p in df.p]
    print(df.to_string(index=False))
