"""
Step correlations of the Hadamard quantum walk
==============================================

With a single coin carried through every step, coin outcomes at step 0
and step n stay correlated. The covariance settles near 1 - sqrt(2)/2 with
oscillations that shrink like 1/sqrt(n). Independent coins, classical or
quantum, give exactly zero.
"""

# %%
import numpy as np

from coinwalk import (
    COVARIANCE_LIMIT,
    CoinState2,
    covariance_series,
    independent_flip_covariance,
    qw_distribution,
)
from coinwalk.qw import coin_reduced_direct, coin_reduced_integral

mixed = CoinState2.maximally_mixed()

# %%
# The walk spreads ballistically: variance grows like n^2.
for n in (25, 50, 100, 200):
    v = qw_distribution(mixed, n).variance()
    print(f"n={n:4d}  var/n^2 = {v / n**2:.4f}")

# %%
# Reduced coin matrix two ways: exact evolution and momentum integrals.
for n in (0, 1, 10, 64):
    d = coin_reduced_direct(1, n).matrix()
    i = coin_reduced_integral(1, n).matrix()
    print(f"n={n:3d}  max |direct - integral| = {np.max(np.abs(d - i)):.2e}")

# %%
series = covariance_series(mixed, 400)
steps = series.steps("direct")
cov = series.values("direct")
print("cov(1) =", cov[0])
print("cov(400) =", cov[-1], " limit =", COVARIANCE_LIMIT)

# %%
# Envelope: |cov - limit| * sqrt(n) stays bounded on the even steps.
even = (steps >= 20) & (steps % 2 == 0)
scaled = np.abs(cov[even] - COVARIANCE_LIMIT) * np.sqrt(steps[even])
print("max |cov - limit| sqrt(n) over even n >= 20:", scaled.max())

# %%
print("independent coins:", independent_flip_covariance(mixed, mixed))
