"""The epsilon-function as an exact polynomial in alpha."""
# %%
from fractions import Fraction

import numpy as np

from hartogs_quant import hartogs, quantization
from hartogs_quant.hartogs import HartogsPoint, PointPair
from hartogs_quant.reports import SamplerConfig, block_rng

disk = hartogs.make_params("I:1,1", 2)
o = HartogsPoint.origin(disk)
print("eps(alpha=4) at the origin:", complex(quantization.epsilon_eval(disk, 4, PointPair(o, o))))
print("coefficients:", quantization.epsilon_alpha_polynomial(disk, PointPair(o, o)).coeffs.real)

# %% chi and its backward differences are exact rationals
params = hartogs.make_params("IV:4", Fraction(5, 2))
print([quantization.chi_tilde(params, x) for x in range(6)])
print(quantization.leading_identities(params).details)

# %% At mu0 the second coefficient is the constant -(d+1)(d+2)/2
params = hartogs.make_params("II:2", Fraction(3, 4))
pairs = hartogs.sample_pairs(params, SamplerConfig(n_samples=1000, seed=0))
print("B at mu0:", np.unique(quantization.coefficient_B(params, pairs)))

# %% Away from mu0 it moves with X, but stays bounded
params = hartogs.make_params("II:2", 2)
rep = quantization.condition_bprime_report(params, range(5, 11), SamplerConfig(n_samples=4000, seed=0))
print(rep.summary())
print({k: rep.details[k] for k in ("sup_B", "B_bound", "sup_C_integer_alpha", "C_bound")})
print("sup|X| ladder towards the boundary:", np.round(rep.details["limite_trend"]["sup"], 4))

# %% Positivity on the diagonal for a non-integer alpha
pts = hartogs.sample_points(params, 1000, block_rng(0, 0), stress_fraction=0.3)
print("min eps(6.3):", quantization.epsilon_eval(params, 6.3, PointPair(pts, pts)).real.min())
