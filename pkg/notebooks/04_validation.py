"""
Checking the engines against independent oracles
================================================

Exhaustive path sums and a seeded Monte Carlo sampler give answers that do
not share code with the closed forms.
"""

# %%
import numpy as np

from coinwalk import (
    CoinState2,
    GroverProbabilities,
    compare_distributions,
    enumerate_paths_1d,
    enumerate_paths_2d,
    qrw1d_distribution,
    qrw2d_distribution,
    sample_walk,
)
from coinwalk.figures import fig4_state

# %%
# 1D: all 2^12 sign sequences.
coin = CoinState2(0.5, 0.5, 0.1)
e = enumerate_paths_1d((0.6, 0.4), 12)
print("1D max diff:", np.max(np.abs(e.probs - qrw1d_distribution(coin, n=12).probs)))

# %%
# 2D: all 4^6 direction sequences for the drifting Grover panel.
e2 = enumerate_paths_2d(GroverProbabilities(0.45, 0.25, 0.05, 0.25), 6)
print("2D max diff:", np.max(np.abs(e2.probs - qrw2d_distribution(fig4_state("fig4h"), 6).probs)))

# %%
# Monte Carlo: one Philox stream per chunk, so the result depends on the seed only.
report = sample_walk("qrw1d", coin, 100, 200_000, seed=42)
cmp = compare_distributions(qrw1d_distribution(coin, n=100), report.empirical, report.n_samples)
print("empirical mean, variance:", report.empirical_moments())
print("total variation:", cmp.total_variation, " chi-square p:", cmp.chi_square_p)
print("rerun identical:", report == sample_walk("qrw1d", coin, 100, 200_000, seed=42))
