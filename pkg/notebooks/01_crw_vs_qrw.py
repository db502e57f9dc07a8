"""
Classical and quantum random walks on a line
============================================

A fresh coin is used at every step. If the coin is incoherent the walk is
the textbook binomial one; a real coherence term in the coin state tilts
the Hadamard-flipped coin and the walker drifts.
"""

# %%
import numpy as np

from coinwalk import CoinState2, CrwParams, crw_distribution, flip_coin2, qrw1d_distribution, qrw1d_moments

n = 100

# %%
# An incoherent coin: the quantum walk reproduces the classical law exactly.
crw = crw_distribution(CrwParams.symmetric(n))
qrw0 = qrw1d_distribution(CoinState2(0.5, 0.5, 0.0), n=n)
print("max |qrw - crw| with eta = 0:", np.max(np.abs(qrw0.probs - crw.probs)))

# %%
# Coherence eta = 0.1. After the Hadamard flip the coin favours the right.
coin = CoinState2(0.5, 0.5, 0.1)
flipped = flip_coin2(coin)
print("step probabilities:", flipped.rho11, flipped.rho_m1m1)

qrw = qrw1d_distribution(coin, n=n)
x, p = qrw.even_sites()
print("peak at x =", x[np.argmax(p)])
print("mean, variance (closed form):", qrw1d_moments(coin, n))
print("mean, variance (summed):     ", qrw.mean(), qrw.variance())

# %%
# Only Re(eta) matters: an imaginary coherence leaves the walk unbiased.
qrw_im = qrw1d_distribution(CoinState2(0.5, 0.5, 0.1j), n=n)
print("max |qrw(0.1i) - crw|:", np.max(np.abs(qrw_im.probs - crw.probs)))

# %%
# A coarse text histogram of both laws on the even sites near the origin.
for xi in range(-30, 51, 10):
    bar_c = "#" * int(400 * crw[xi])
    bar_q = "*" * int(400 * qrw[xi])
    print(f"{xi:4d} {bar_c:<35s} {bar_q}")
