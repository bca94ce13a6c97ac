"""Lines, antipodes and the avoiding-line construction in CP^2.

Run with ``python demos/03_cpn_geometry.py``.
"""
import numpy as np

from funkgeo import cpn

rng = np.random.default_rng(1)
p, q = (cpn.ProjPoint(v) for v in cpn.sample_points(2, 2, rng))

# %% distance and the geodesic through two points
s = cpn.fs_distance(p, q)
g = cpn.geodesic_through(p, q)
print(f"d(p, q) = {s:.6f};  gamma(d) equals q: {g.point(s).equiv(q)}")
print(f"gamma closes after 2 pi: {g.point(2 * np.pi).equiv(p)}")

# %% triple antipode: start on a line, jump to the antipode, turn, jump again
P = cpn.line_through(p, q)
print("residual |<r, p>| =", cpn.remark31_residual(p, P, rng))

# %% a line through q that stays at distance >= s from p
S = cpn.avoiding_line(p, q)
print(f"s = {s:.6f}, closed-form d(p, S) = {cpn.line_distance(p, S):.6f}, "
      f"sampled = {cpn.sampled_line_distance(p, S):.6f}")

# %% CP^1 is the round sphere: the Bloch map
z = cpn.ProjPoint(np.array([1, 1j]) / np.sqrt(2))
print("Bloch image of [1 : i]:", np.round(cpn.bloch_map(z), 12))
