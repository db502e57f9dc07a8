"""
Quantum random walk on the square lattice
=========================================

Each step uses a fresh four-level coin flipped by the Grover operator. The
six coherences of the coin enter only through three differences, the
effective coherences zeta, and these fix the four step probabilities.
"""

# %%
import numpy as np

from coinwalk import (
    EffectiveCoherence,
    effective_coherence,
    feasibility_region_check,
    grover_probabilities,
    qrw2d_distribution,
    qrw2d_moments,
)
from coinwalk.figures import FIG4_PATTERNS, fig4_state
from coinwalk.qrw import grover_probabilities_from_zeta

n = 40

# %%
for fid in sorted(FIG4_PATTERNS):
    s = fig4_state(fid)
    z = effective_coherence(s)
    m = qrw2d_moments(s, n)
    print(
        f"{fid}: zeta=({z.zeta1:+.2f}, {z.zeta2:+.2f}, {z.zeta3:+.2f})"
        f"  probs={np.round(grover_probabilities(s), 3)}"
        f"  mean={m.mean}  var=({m.var_x:.1f}, {m.var_y:.1f})"
    )

# %%
# Uniform coherence cancels in every zeta, so the walk is unbiased.
print("fig4b mean:", qrw2d_moments(fig4_state("fig4b"), n).mean)

# %%
# The drifting panel, summed directly over the lattice.
d = qrw2d_distribution(fig4_state("fig4h"), n)
print("summed mean:", d.mean(), " variances:", d.variances())
mx, my = d.marginal_x(), d.marginal_y()
print("x-marginal peak:", mx.sites[np.argmax(mx.probs)], " y-marginal peak:", my.sites[np.argmax(my.probs)])

# %%
# Feasible zeta form a tetrahedron; its vertices move the walker in one direction only.
for z in [(-0.5, -0.5, -0.5), (-0.5, 0.5, 0.5), (0.5, -0.5, 0.5), (0.5, 0.5, -0.5), (0.5, 0.5, 0.5)]:
    ez = EffectiveCoherence(*z)
    print(z, feasibility_region_check(ez), np.round(grover_probabilities_from_zeta(ez), 3))
