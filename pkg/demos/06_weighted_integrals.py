"""The weighted norm of the constant function: Monte Carlo against closed form."""
# %%
import math

from hartogs_quant import hartogs, integration

for d in (1, 2, 3):
    for mu in (1, 2):
        params = hartogs.make_params(f"I:1,{d}", mu)
        alpha = d + 2
        est = integration.weighted_norm_integral_mc(params, alpha, 400_000, seed=42, shards=4)
        exact = integration.weighted_norm_integral_closed(params, alpha)
        print(f"d={d} mu={mu}: {est.value:.6f} +- {est.stderr:.1e}  exact {exact:.6f}"
              f"  z={(est.value - exact) / est.stderr:+.2f}")

# %% Simple pole at alpha = d+1
params = hartogs.make_params("I:1,2", 1)
for k in range(1, 6):
    print(k, integration.weighted_norm_integral_closed(params, 3 + 10.0**-k) * 10.0**-k,
          math.pi**3 / 2)

# %% Nontrivial base
params = hartogs.make_params("IV:3", 1)
print(integration.weighted_norm_integral_mc(params, 6, 400_000, seed=1).as_dict())
