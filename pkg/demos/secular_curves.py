"""
The secular functions S_4 and S_5
=================================

Robin degrees in sector m solve S_m(nu) = sigma. Between consecutive poles
S_m increases from 0 to +infinity on the branches that carry roots, so every
horizontal line sigma > 0 meets each such branch exactly once. This script
samples both curves away from the poles and marks where sigma = 1 crosses.
"""
# %%
import numpy as np

from hemirobin import secular_S, solve_nu

sigma = 1.0
grid = np.round(np.arange(0.05, 10.0, 0.05), 12)

# %%
for m in (4, 5):
    print(f"S_{m}(nu), skipping a 0.1 window around each pole")
    for nu in grid[::4]:
        if nu > m and abs((nu - m) % 2 - 1) < 0.1:
            continue
        s = secular_S(m, float(nu))
        bar = "#" * int(min(abs(s), 20))
        print(f"  nu={nu:5.2f}  S={s:+10.4f}  {bar}")

# %%
# Roots at sigma = 1: one in each interval (l, l+1) with l - m even.
for m in (4, 5):
    roots = [solve_nu(ell, m, sigma).nu for ell in range(m, 10) if (ell - m) % 2 == 0]
    print(f"m={m}: nu = " + ", ".join(f"{r:.6f}" for r in roots))
