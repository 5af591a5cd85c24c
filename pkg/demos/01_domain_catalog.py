"""Classical Cartan domains: invariants, generic norm, Wallach set."""
# %%
import numpy as np

from hartogs_quant import domains
from hartogs_quant.reports import block_rng

for text in ["I:1,1", "I:2,3", "II:3", "III:5", "III:6", "IV:4"]:
    s = domains.parse_domain(text)
    print(f"{text:7s} d={s.d:2d} r={s.r} a={s.a} b={s.b} genus={s.genus:2d} volume={s.volume:.6g}")

# %% The generic norm is Hermitian: N(z, conj zeta) = conj N(zeta, conj z)
spec = domains.parse_domain("III:5")
rng = block_rng(0, 0)
z = domains.sample_base(spec, 5, rng)
zeta = domains.sample_base(spec, 5, rng)
print(domains.generic_norm(spec, z, zeta))
print(np.conj(domains.generic_norm(spec, zeta, z)))

# %% Along a ray the diagonal norm falls from 1 to 0 at the boundary
u = z[0] / domains.minkowski_norm(spec, z[0])
for t in (0.0, 0.5, 0.9, 0.99, 1.0):
    print(t, domains.generic_norm(spec, t * u, t * u).real)

# %% Wallach set: a finite progression plus a half-line
spec = domains.parse_domain("IV:6")
print("discrete part:", [str(p) for p in domains.wallach_points(spec)])
for mu in (0.5, 1, 1.5, 2, 2.5):
    print(mu, domains.wallach_contains(spec, mu))
