"""Photon-shift resonant transformations and their bookkeeping.

The one-photon transformation dresses the upper atomic state by removing a
photon; it is an isometry, not a unitary, so it introduces one spurious
zero eigenvalue attached to its kernel vector |0,+>.  The two-photon step
stacks a second shift on top (two more spurious zeros).  This script shows
the bookkeeping the chains carry and compares the resulting level accuracy.
"""

import numpy as np

from resonancekit.methods import compute_levels, rabi_rt1_chain, rabi_rt2_chain
from resonancekit.operators import ModelParams, TruncationConfig

TRUNC = TruncationConfig(n_max=60)


def describe_chain(th, name):
    print(f"\n{name}:")
    print(f"  provenance     : {' -> '.join(th.provenance)}")
    print(f"  spurious zeros : {[sp.label for sp in th.spurious]}")
    print(f"  loss band      : top {th.loss_band} photon level(s) corrupted")
    for rec in th.records:
        r = rec.matrix
        gram = r.conj().T @ r
        missing = np.where(np.abs(np.diag(gram)) < 0.5)[0]
        print(f"  record: dressing {rec.photon_dressing:+d} photon(s), "
              f"kernel {rec.kernel_labels}, "
              f"R^dag R = identity minus slots {missing.tolist()}")


def accuracy_row(g, n_levels=10):
    params = ModelParams(omega=1.0, omega0=1.0, g=g)
    exact = np.array(
        [lv.energy for lv in compute_levels("exact", params, TRUNC, n_levels)]
    )
    errs = {}
    for method in ("jc", "rt1_kam", "rt2"):
        approx = np.array(
            [lv.energy for lv in compute_levels(method, params, TRUNC, n_levels)]
        )
        errs[method] = np.abs(approx - exact).max()
    print(f"  g = {g:<5} " + "  ".join(f"{m}: {e:.2e}" for m, e in errs.items()))


def main():
    params = ModelParams(omega=1.0, omega0=1.0, g=0.2)
    describe_chain(rabi_rt1_chain(params, TRUNC), "one-photon chain")
    describe_chain(rabi_rt2_chain(params, TRUNC), "one- + two-photon chain")

    print("\nmax |E_method - E_exact| over the lowest 10 levels:")
    for g in (0.05, 0.15, 0.3, 0.5):
        accuracy_row(g)
    print("\nA single averaging correction (rt1_kam) already beats the plain")
    print("dressed-pair energies; the two-photon step extends the usable")
    print("coupling range toward the first field-induced resonances.")


if __name__ == "__main__":
    main()
