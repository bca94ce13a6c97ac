"""Transform data on geodesics that avoid a ball.

Once enough avoiding geodesics are used, no band-limited function has
vanishing integrals on all of them, so the kernel is empty. With fewer
geodesics than basis functions the kernel is a sampling artifact and its
functions are not concentrated in the ball.

Run with ``python demos/05_support.py``.
"""
import numpy as np

from funkgeo import lab
from funkgeo.cpn import Ball, ProjPoint

ball = Ball(ProjPoint(np.eye(3)[0]), 0.5)
for n_geo in (6, 8, 9, 45):
    rep = lab.support_experiment(2, 1, ball, n_geo, seed=0)
    worst = max(rep.outside_sup, default=0.0)
    print(f"n_geo={n_geo:2d}: kernel {rep.kernel_dim}, vacuous {rep.vacuous}, "
          f"max outside sup {worst:.3f}")
