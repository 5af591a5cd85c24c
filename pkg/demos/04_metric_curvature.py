"""Metric, determinant identity and curvature by finite differences."""
# %%
from fractions import Fraction

import numpy as np

from hartogs_quant import hartogs, quantization
from hartogs_quant.hartogs import HartogsPoint
from hartogs_quant.reports import block_rng

params = hartogs.make_params("I:1,1", 2)
print("g at the origin:\n", hartogs.metric_tensor(params, HartogsPoint.origin(params)).real.round(9))

# %% log det g differs from the model by a constant
params = hartogs.make_params("III:5", 3)
pts = hartogs.sample_points(params, 6, block_rng(0, 0), rmax=0.7, wmax=0.7)
rep = hartogs.det_identity_residual(params, pts)
print(rep.summary(), rep.details["c_fit"], rep.details["c_exact"])

# %% Kahler-Einstein exactly at mu0
for mu in (Fraction(3, 4), 1, 2):
    params = hartogs.make_params("I:1,2", mu)
    p = hartogs.sample_points(params, 1, block_rng(1, 0), rmax=0.5, wmax=0.5)[0]
    g = hartogs.metric_tensor(params, p, 1e-3, levels=2)
    ric = hartogs.curvature(params, p, method="direct").ricci
    print(f"mu={mu}: max |Ric + 4 g| = {np.abs(ric + 4 * g).max():.2e}")

# %% On the diagonal B is half the scalar curvature
params = hartogs.make_params("I:1,1", 2)
pts = hartogs.sample_points(params, 5, block_rng(2, 0), rmax=0.7, wmax=0.7)
print(quantization.scalar_curvature_remark_report(params, [pts[i] for i in range(5)]).details["values"])
