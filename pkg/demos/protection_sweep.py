"""Sweep the damping strength and compare protected against unprotected
teleportation, both as an input-averaged fidelity and as the success
probability paid for the protection.

Run:  python3 demos/protection_sweep.py [--p-steps 9] [--qw 0.3]
"""
import argparse

import numpy as np

from bqtsim import QubitInput, Scenario, average_fidelity, run_protocol


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-steps", type=int, default=9)
    ap.add_argument("--qw", type=float, default=0.3, help="fixed weak strength column")
    args = ap.parse_args()

    print(f"input-averaged fidelity, fixed q_w = {args.qw:g} vs matched q_w = p")
    print(f"{'p':>5} {'bare I':>9} {'prot I':>9} {'q=p I':>9} {'bare II':>9} {'prot II':>9} {'q=p II':>9} {'g_t I':>9}")
    for p in np.linspace(0.1, 0.9, args.p_steps):
        p = float(p)
        bare1 = average_fidelity(Scenario.UNPROTECTED_RECOVERY, p, 0.0)
        bare2 = average_fidelity(Scenario.UNPROTECTED_ALL, p, 0.0)
        prot1 = average_fidelity(Scenario.RECOVERY_ADC, p, args.qw)
        prot2 = average_fidelity(Scenario.ALL_ADC, p, args.qw)
        match1 = average_fidelity(Scenario.RECOVERY_ADC, p, p)
        match2 = average_fidelity(Scenario.ALL_ADC, p, p)
        # success cost of the matched setting, independent of the inputs
        res = run_protocol(Scenario.RECOVERY_ADC, p, p, QubitInput(0.5), QubitInput(0.5))
        print(
            f"{p:5.2f} {bare1:9.6f} {prot1:9.6f} {match1:9.6f}"
            f" {bare2:9.6f} {prot2:9.6f} {match2:9.6f} {res.total_success:9.6f}"
        )

    print()
    print("matched weak strength pins the fidelity at 1; the last column is")
    print("the post-selection probability that purchase costs.")


if __name__ == "__main__":
    main()
