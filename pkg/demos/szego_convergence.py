"""
Limit law of gaps within a cluster
==================================

The Robin-Neumann gaps of cluster l, taken over m < l, have an empirical
distribution that converges to the law with CDF
sqrt(1 - (4 sigma / (pi y))^2) on [4 sigma / pi, infinity). The
Kolmogorov-Smirnov distance shrinks roughly like 1/l.
"""
# %%
import math

import numpy as np

from hemirobin import GapSample, robin_cluster, szego_cdf, szego_ks_distance

sigma = 1.0
print(f"support starts at 4 sigma / pi = {4 * sigma / math.pi:.5f}")

# %%
for ell in (100, 400, 1600, 6400):
    sample = GapSample.from_cluster(robin_cluster(ell, sigma))
    print(f"l = {ell:5d}  KS = {szego_ks_distance(sample):.5f}")

# %%
# Empirical quantiles against the limit CDF for the largest cluster.
gaps = np.sort(GapSample.from_cluster(robin_cluster(6400, sigma)).gaps)
for q in (0.1, 0.25, 0.5, 0.75, 0.9):
    y = gaps[int(q * (gaps.size - 1))]
    print(f"empirical q={q:.2f} at y={y:.4f}, limit CDF there {szego_cdf(y, sigma):.4f}")
