"""Truncated projective embedding of a Hartogs domain over the ball."""
# %%
import numpy as np

from hartogs_quant import embedding, hartogs
from hartogs_quant.hartogs import HartogsPoint, PointPair

params = hartogs.make_params("I:1,1", 1)
p = HartogsPoint(np.array([0.5 + 0j]), 0j)
for order in (5, 10, 20, 40):
    vec = embedding.embed_truncated(params, 3, p, order)
    print(order, len(vec.components), vec.squared_norm, 0.75**-3 - vec.squared_norm, vec.tail_bound)

# %% The Fubini-Study diastasis of the image is alpha times the diastasis
x = HartogsPoint(np.array([0.3 - 0.1j]), 0.2j)
y = HartogsPoint(np.array([-0.2 + 0j]), 0.4 + 0j)
for order in (10, 20, 40):
    print(order, embedding.pullback_residual(params, 3, PointPair(x, y), order))

# %% Two-dimensional base, non-integer mu
params = hartogs.make_params("I:1,2", 1.5)
x = HartogsPoint(np.array([0.2, 0.1j]), 0.3 + 0j)
y = HartogsPoint(np.array([-0.1, 0.3 + 0j]), 0.1j)
print(embedding.pullback_residual(params, 4.5, PointPair(x, y), 30))
