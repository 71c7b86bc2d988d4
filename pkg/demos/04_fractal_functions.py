"""Weierstrass- and Cantor-type functions on P^1.

Both are limits of step functions; every quantity below is computed on a
truncation and carries the truncation's explicit error bound.

Run:  python3 demos/04_fractal_functions.py
"""

from fractions import Fraction

import numpy as np

from ultrawave.fractals import cantor_truncate, example_packets, fractal_ft_profile, weierstrass_truncate

# %% Truncations converge uniformly at rate 2^-J
for make, name in ((weierstrass_truncate, "weierstrass"), (cantor_truncate, "cantor")):
    print(name)
    for J in (2, 4, 6):
        f = make(J)
        vals = np.array([float(c) for _, c in f.approx.pieces])
        print(f"  J={J}: {len(vals):4d} pieces, range [{vals.min():.4f}, {vals.max():.4f}], sup error <= {f.sup_error}")

# %% Transforms against the constant values claimed for them
for f in (weierstrass_truncate(10), cantor_truncate(7)):
    _, rep = fractal_ft_profile(f)
    shells = ", ".join(f"{m}: {float(v):.4f}" for m, v in sorted(rep.shell_values.items()))
    print(f"\n{f.kind}: integral {rep.integral} = {float(rep.integral):.6f}, claimed {rep.claimed}")
    print(f"  shell averages {shells}")
    print(f"  largest deviation from the claim {rep.max_claim_deviation:.4f} (informational)")

# %% Translates of the packetized truncations
for ex, name in ((9, "weierstrass"), (10, "cantor")):
    rep = example_packets(ex, j=0, n=1, s=Fraction(1))
    print(f"\n{name} packets: exact identity {rep.exact_identity}, off-diagonal {rep.max_offdiag}, bound {rep.bound:.2e}")
