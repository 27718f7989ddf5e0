"""CP^2 is the equality case.

Sectional curvatures of CP^2 fill [1, 4]; the minimum of a_sum - b_sum/2 is zero and
is attained on frames made of two orthogonal complex lines. We confirm both with the
optimizer and with the random-sampling oracle, then look at the minimising frame.
"""

from curvlab import FrameFunctional, SearchConfig, brute_force_extremum, extremize, fubini_study

R, J = fubini_study(2)
cfg = SearchConfig(seed=7)

kmin = extremize(R, FrameFunctional.sectional(), cfg).value
kmax = extremize(R, FrameFunctional.sectional(), cfg, maximize=True).value
print(f"sectional curvature range: [{kmin:.9f}, {kmax:.9f}]")

f = FrameFunctional.condition(0.5)
res = extremize(R, f, cfg)
oracle = brute_force_extremum(R, f, 200_000, seed=7)
print(f"min a_sum - b_sum/2: optimizer {res.value:.3e}, oracle over 2e5 frames {oracle:.3e}")

# On the minimiser each of the planes (e1, e2) and (e3, e4) is J-invariant.
e = res.frame.vectors
print(f"|<J e1, e2>| = {abs(J(e[0]) @ e[1]):.12f}")
print(f"|<J e3, e4>| = {abs(J(e[2]) @ e[3]):.12f}")

# Sampling approaches the minimum from above, slowly.
for samples in (10**3, 10**4, 10**5):
    print(f"  oracle with {samples:>6} samples: {brute_force_extremum(R, f, samples, seed=7):.2e}")
