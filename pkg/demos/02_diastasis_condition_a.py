"""Diastasis on a Cartan-Hartogs domain and the bound exp(-D) <= 1."""
# %%
import numpy as np

from hartogs_quant import hartogs
from hartogs_quant.reports import SamplerConfig

params = hartogs.make_params("I:2,2", 2)
print(params.as_dict())

# %% Pairs: uniform in the domain, a share pushed towards |w|^2 = N^mu, a share near the diagonal
pairs = hartogs.sample_pairs(params, SamplerConfig(n_samples=5000, seed=1))
dist = hartogs.diastasis(params, pairs)
print("min D:", dist.min(), " max exp(-D):", np.exp(-dist).max())
print("symmetric:", np.array_equal(dist, hartogs.diastasis(params, pairs.swapped())))

# %% The packaged report
rep = hartogs.exp_minus_diastasis_report(params, SamplerConfig(n_samples=10_000, seed=42))
print(rep.summary())
print(rep.details)
