"""The Funk transform on S^2 loses exactly the odd part of a function.

Run with ``python demos/02_sphere_funk.py``.
"""
import numpy as np

from funkgeo import sphere

rng = np.random.default_rng(0)

# %% eigenvalues 2 pi P_l(0)
for l in range(7):
    print(f"l={l}: {sphere.funk_hecke_eigenvalue(l): .6f}")

# %% the operator on 400 random great circles
B = sphere.HarmonicBasis(8)
op = sphere.assemble_operator(B, sphere.random_circles(400, rng))
ka = sphere.kernel_analysis(op)
print(f"rank {ka.rank} of {B.size}; kernel {ka.kernel_dim}; "
      f"odd harmonics {sphere.odd_degree_indices(8).size}; gap {ka.gap:.2e}")

# %% an even function comes back, an odd one is invisible
c = rng.standard_normal(B.size)
f_even = c.copy()
f_even[sphere.odd_degree_indices(8)] = 0
back = sphere.invert_even(sphere.transform_as_function(sphere.SphereFunction(f_even)))
print("even round trip error:", np.linalg.norm(back.coefficients - f_even))
f_odd = c - f_even
print("transform of odd part:", np.abs(op.apply(f_odd)).max())
