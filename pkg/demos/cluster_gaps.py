"""
Robin-Neumann gaps inside one cluster
=====================================

At sigma = 1 the 76 Robin eigenvalues with degree in (150, 151) are pushed up
from the Neumann level 150 * 151 by different amounts. The gap grows with the
order m, from roughly (2/pi)(2l+1)/l at m = 0 to about (2/sqrt(pi)) sqrt(l)
at m = l, while the cluster mean stays close to 2 sigma.

Run with ``python demos/cluster_gaps.py``; the table goes to stdout.
"""
# %%
import numpy as np

from hemirobin import cluster_gap_mean, gap_asymptotic, robin_cluster

ell, sigma = 150, 1.0
cluster = robin_cluster(ell, sigma)
pred = np.array([gap_asymptotic(ell, int(m), sigma) for m in cluster.m])

# %%
# Every fifth order, exact gap next to the asymptotic one.
print(f"{'m':>4} {'exact':>12} {'asymptotic':>12} {'rel.dev':>9}")
for m, d, p in list(zip(cluster.m, cluster.gaps, pred))[::5]:
    print(f"{m:4d} {d:12.6f} {p:12.6f} {abs(d / p - 1):9.2e}")

# %%
# The mean over the cluster is the quantity that settles down.
print(f"\ncluster mean {cluster_gap_mean(cluster):.5f} (2 sigma = {2 * sigma})")
