"""
Spacings on a spherical cap of opening pi/3
===========================================

For the Dirichlet cap theta <= pi/3 the desymmetrized levels with nu < 100
are found by scanning P_nu^m(1/2) in nu. Their unit-mean spacings look like
exp(-s), unlike the hemisphere, whose levels are integers l(l+1) with high
multiplicity. Takes about half a minute.
"""
# %%
import math

import numpy as np

from hemirobin import BoundaryCondition, CapProblem, cap_spacing_report, cap_spectrum, weyl_count

problem = CapProblem(math.pi / 3, BoundaryCondition.dirichlet(), 100.0)
spec = cap_spectrum(problem, workers=4)
print(f"{len(spec)} eigenvalues, Weyl estimate {weyl_count(problem, spec.lambdas[-1]):.1f}")

# %%
report = cap_spacing_report(spec)
h = report.histogram
centers = 0.5 * (h.bin_edges[:-1] + h.bin_edges[1:])
print("s      density   exp(-s)")
for c, d in list(zip(centers, h.density))[:40:4]:
    print(f"{c:5.3f}  {d:7.4f}   {np.exp(-c):7.4f}")
print(f"KS distance to exp(-s): {report.ks_exponential:.4f}")

# %%
hemi = cap_spacing_report(CapProblem(math.pi / 2, BoundaryCondition.dirichlet(), 50.0))
print(f"hemisphere (nu < 50) for comparison: {hemi.ks_exponential:.4f}")
