"""Characters, translation representatives and the exact Fourier transform.

Run:  python3 demos/01_characters_and_fourier.py
"""

from fractions import Fraction

import numpy as np

from ultrawave.gfq import field_params
from ultrawave.localfield import Ball, character, format_element, lam, parse_element
from ultrawave.stepfn import character_step, exact_gram, indicator, sf_fourier

# %% The translation representatives lambda(n) for q = 3
params = field_params(3)
for n in range(9):
    x = lam(n, params)
    print(f"lambda({n}) = {format_element(x):<20} chi = {complex(character(x)):.3f}")

# %% Characters chi_n restricted to D are an orthonormal system
D = Ball.ideal(params, 0)
chis = [character_step(lam(n, params), D) for n in range(27)]
G = exact_gram(chis)
print("\nGram of chi_0..chi_26 on D is the identity:",
      all(G[a][b] == (a == b) for a in range(27) for b in range(27)))

# the same matrix numerically, for a look at its spectrum
Gf = np.array([[complex(v) for v in row] for row in G])
print("eigenvalues in", np.round(np.linalg.eigvalsh(Gf)[[0, -1]], 12))

# %% Transforms of ball indicators: 1_{P^k} -> q^-k 1_{P^-k}
for k in (-2, 0, 2):
    F = sf_fourier(indicator(Ball.ideal(params, k)))
    (ball, value), = F.pieces
    print(f"k={k:+d}: transform is {value} on P^{ball.level}")

# %% A translated ball picks up a character
a = parse_element("t^-1", params)
f = indicator(Ball(a, 1))
F = sf_fourier(f)
print(f"\ntransform of 1_{{t^-1 + P}} has {len(F.pieces)} pieces; values:",
      sorted({str(np.round(complex(v), 4)) for _, v in F.pieces}))

# %% Involution and Parseval hold exactly
g = indicator(Ball(a, 0), Fraction(1, 2)) + indicator(D, 3)
Gt = sf_fourier(g)
print("F F g = g(-x):", sf_fourier(Gt) == g.reflect())
print("||g||^2 =", (g * g.conj()).integrate(), " ||Fg||^2 =", (Gt * Gt.conj()).integrate())
