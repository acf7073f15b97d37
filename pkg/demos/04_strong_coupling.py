"""Strong-coupling effective spectra: displaced frame and zero-field doublets.

In the displaced (polaron) frame the reference ladder omega*(n + 1/2) -
g^2/omega is doubly degenerate; averaging the atomic term over it gives
closed-form energies with Laguerre-damped splittings (strong_avg).
Resolving the residual zero-field doublets with one more photon-shift
transformation (strong_rt) fixes the small-g limit without losing the
large-g collapse.
"""

import numpy as np

from resonancekit.closedform import f_laguerre
from resonancekit.methods import compute_levels
from resonancekit.operators import ModelParams, TruncationConfig

ORACLE_TRUNC = TruncationConfig(n_max=120)


def error_table(n_levels=8):
    print("max |E - E_exact| over the lowest 8 levels:")
    print(f"  {'g':>5} {'strong_avg':>12} {'strong_rt':>12}")
    for g in (0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0):
        params = ModelParams(omega=1.0, omega0=1.0, g=g)
        exact = np.array(
            [lv.energy for lv in compute_levels("exact", params, ORACLE_TRUNC, n_levels)]
        )
        errs = []
        for method in ("strong_avg", "strong_rt"):
            approx = np.array(
                [lv.energy for lv in compute_levels(method, params, ORACLE_TRUNC, n_levels)]
            )
            errs.append(np.abs(approx - exact).max())
        print(f"  {g:>5} {errs[0]:>12.3e} {errs[1]:>12.3e}")


def splitting_collapse():
    print("\nLaguerre-damped splitting factor f_n(g) = exp(-2g^2) L_n(4g^2):")
    print(f"  {'g':>5} " + " ".join(f"{f'f_{n}':>10}" for n in range(4)))
    for g in (0.1, 0.3, 0.5, 1.0, 2.0):
        params = ModelParams(omega=1.0, omega0=1.0, g=g)
        values = [f_laguerre(n, params) for n in range(4)]
        print(f"  {g:>5} " + " ".join(f"{v:>10.4f}" for v in values))
    print("f_1 vanishes exactly at g = omega/2 (the n = 1 averaged doublet")
    print("crosses there); the exp(-2g^2) envelope eventually wins for every")
    print("n, collapsing the doublets into the displaced-ladder degeneracy.")


def main():
    print("Strong-coupling closed forms vs the exact oracle, omega = omega0 = 1\n")
    error_table()
    print("\nstrong_avg degrades toward g -> 0 (its doublets stay split by the")
    print("bare omega0 only on average); strong_rt repairs exactly that regime.")
    splitting_collapse()


if __name__ == "__main__":
    main()
