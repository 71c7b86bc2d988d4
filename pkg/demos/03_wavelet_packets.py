"""Filter banks and Sobolev wavelet packets.

Run:  python3 demos/03_wavelet_packets.py
"""

import random
from fractions import Fraction

import numpy as np

from ultrawave.gfq import field_params
from ultrawave.localfield import Ball
from ultrawave.mra import (
    ScalingFamily,
    check_filter_bank,
    make_haar_bank,
    packet_gram,
    perturb_bank,
    projection_demo,
    random_unitary_bank,
    split_sequence_system,
    wavelet_packet,
)
from ultrawave.sobolev import ShellFunction, SobolevParams
from ultrawave.stepfn import indicator

params = field_params(3)
haar = make_haar_bank(params)

# %% Filter banks: Haar and a random unitary one pass, a perturbed one does not
for name, bank in (("haar", haar), ("random", random_unitary_bank(params, random.Random(0))),
                   ("perturbed", perturb_bank(haar))):
    rep = check_filter_bank(bank, 3)
    print(f"{name:<10} passed={rep.passed}  unitarity residual={rep.unitary_residual:.3g}")

# %% Packets in H^s: the frequency side carries the weight (1+|xi|^2)^(-s/2)
s = Fraction(1, 2)
fam = ScalingFamily(params, s)
w = wavelet_packet(haar, fam, n=5, j=1, k=2)
print(f"\nw_(j=1,k=2,n=5): digits {w.digits}, {len(w.freq.step.pieces)} frequency pieces, weights {w.freq.weights}")

G = packet_gram(haar, fam, j=0, N=9, K=3, sp=SobolevParams(s))
Gf = np.array([[complex(v) for v in row] for row in G])
print("Gram over n < 9, k < 3 is the identity:", np.array_equal(Gf, np.eye(len(Gf))))

# %% Splitting a sequence space with a random bank
split = split_sequence_system(random_unitary_bank(params, random.Random(4)), K=4)
print("split sequences orthonormal:", split.orthonormal, f"({len(split.index)} sequences)")

# %% Projections onto V_j grow to the full norm
h = ShellFunction(indicator(Ball.ideal(params, -1), Fraction(1, 3)))
norms = projection_demo(ScalingFamily(params, 0), h, range(0, 4))
print("||P_j h||^2 for j = 0..3:", [str(v) for v in norms])
