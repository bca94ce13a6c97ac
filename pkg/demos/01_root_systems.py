"""Root systems, dual vectors and midpoint loci.

Run with ``python demos/01_root_systems.py``.
"""
import numpy as np

from funkgeo import rootsys

# %% B2: the short root direction gives a longer closed geodesic
b2 = rootsys.build_root_system("B", 2)
for i in b2.positive:
    X = rootsys.dual_vector(b2, i)
    print(f"root {np.round(b2.roots[i], 4)}  |X| / pi = {X.length / np.pi:.6f}")

# %% pairing with the highest root, every system
for fam, rank in [("A", 3), ("B", 3), ("C", 3), ("D", 4), ("G2", 2), ("F4", 4), ("E8", 8)]:
    rep = rootsys.check_longest_root_pairing(rootsys.build_root_system(fam, rank))
    name = fam if fam[-1].isdigit() else f"{fam}{rank}"
    print(f"{name}: ok={rep.ok}  roots pairing to +-pi: {rep.n_plus_minus_pi}")

# %% midpoint loci of the compact rank-one spaces and a rank-two quadric
for d in rootsys.descriptor_table(3):
    dim = rootsys.midpoint_locus_dimension(d, d.antipode_vector())
    print(f"{d.name:>6}: dim {d.dimension:2d}, Helgason sphere "
          f"{rootsys.helgason_sphere_dimension(d)}, midpoint locus {dim}")
