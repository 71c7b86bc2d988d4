"""Sobolev membership of radial functions.

A radial function is stored by its values on the spheres |x| = q^a, with
closed-form tails, so its transform and its H^s threshold are exact.

Run:  python3 demos/02_sobolev_membership.py
"""

from fractions import Fraction

import numpy as np

from ultrawave.gfq import field_params
from ultrawave.localfield import Ball
from ultrawave.radial import decay_exponent, make_example, radial_fourier
from ultrawave.sobolev import ShellFunction, SobolevParams, hs_norm2, membership_threshold, series_slope
from ultrawave.stepfn import indicator

params = field_params(2)

# %% |x|^theta on D: the transform decays like |xi|^-(1+theta)
print("theta  head          decay    s*")
for theta in (Fraction(1, 2), Fraction(1), Fraction(2)):
    F = radial_fourier(make_example(1, params, theta=theta))
    print(f"{str(theta):<6} {str(F.value(0)):<13} {decay_exponent(F, range(4, 13)):+.4f}  {membership_threshold(F).s_star}")

# %% The threshold against the series itself
F = radial_fourier(make_example(1, params, theta=Fraction(1)))
s_star = membership_threshold(F).s_star
for s in np.linspace(float(s_star) - 0.5, float(s_star) + 0.5, 5):
    slope = series_slope(F, s, range(20, 41))
    verdict = "borderline" if abs(slope) < 1e-9 else ("converges" if slope < 0 else "diverges")
    print(f"s = {s:+.2f}: log_q shell terms slope {slope:+.3f} ({verdict})")

# %% log|x| on D sits at s* = 1/2; the weighted profile at -2 theta - 1/2
print("\nlog profile s* =", membership_threshold(radial_fourier(make_example(2, params))).s_star)
for theta in (Fraction(-1, 2), Fraction(0), Fraction(1, 2)):
    print(f"(1+|xi|^2)^theta profile, theta={theta}: s* =", membership_threshold(make_example(7, params, theta=theta)).s_star)

# %% Exact norms: ||1_D||^2 in H^s for integer s
for s in range(4):
    r = hs_norm2(ShellFunction(indicator(Ball.ideal(params, 0))), SobolevParams(s))
    print(f"||1_D||^2_H^{s} = {r.value}")

# fractional s uses a certified float sum
r = hs_norm2(ShellFunction(indicator(Ball.ideal(params, 0))), SobolevParams(Fraction(1, 2), "float", 1e-12))
print(f"||1_D||^2_H^1/2 = {r.value.real:.15f} +- {r.error:.1e}")
