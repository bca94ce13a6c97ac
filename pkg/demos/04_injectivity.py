"""Band-limited Funk transform: a kernel on CP^1 = S^2, none on CP^2.

Run with ``python demos/04_injectivity.py``.
"""
from funkgeo import lab

# %% same pipeline, same degree, same number of geodesics
for n in (1, 2):
    res = lab.rank_experiment(n, D=2, n_geo=200, seed=7)
    print(f"CP^{n}: basis {res.basis_dim:3d}, rank {res.rank:3d}, kernel {res.kernel_dim}, "
          f"sigma_min/sigma_max {res.condition_ratio:.3e}")

# %% stability across seeds on CP^2
for D, n_geo in [(1, 50), (2, 200)]:
    ratios = [lab.injectivity_experiment(2, D, n_geo, seed).condition_ratio for seed in range(10)]
    print(f"D={D}: smallest sigma ratio over 10 seeds {min(ratios):.3e}")
