"""Why the symbol rotation matters and how it is found.

Without a rotation, two constellation points that differ in only one real
coordinate produce a zero product distance and the code loses diversity.
The optimizer searches orthogonal matrices for the largest minimum product
distance over the full constellation difference set.
"""

import numpy as np

from stbc_lab import constellation as cn
from stbc_lab import rotation as rt
from stbc_lab.numerics import theta4

c4 = cn.make_qam(4)

print("=== the failure mode ===")
diffs = rt.qstbc_group_difference_set(c4)
print(f"4QAM group difference set: {diffs.shape[0]} vectors in R^4")
for name, R in (("identity", np.eye(4)), ("encoder Theta only", theta4())):
    dp = rt.product_distance(R, diffs)
    print(f"{name:20s} dp_min = {dp.dp_min:.6f}   "
          f"worst diff = {np.round(dp.argmin, 3)}")

print("\n=== optimized rotations (shipped defaults) ===")
for m in (2, 3, 4):
    R = rt.default_rotation(m)
    dp = rt.product_distance(R, rt.group_difference_set(c4, m))
    print(f"m={m}: dp_min = {dp.dp_min:.6f}")
print(rt.default_rotation(4).round(4))

print("\n=== running the search from scratch (small budget) ===")
for budget in (1, 4, 12):
    R = rt.optimize_rotation(4, c4, budget=budget, seed=3)
    dp = rt.product_distance(R, rt.group_difference_set(c4, 4)).dp_min
    print(f"budget {budget:2d}: dp_min = {dp:.6f}")
print("larger budgets plateau near 0.1175 for this difference set")

print("\n=== the 2-dim optimum carries over to 16QAM ===")
c16 = cn.make_qam(16)
diffs16 = rt.group_difference_set(c16, 2)
R = rt.optimize_rotation(2, c16, budget=8, seed=0)
print(f"searched on 16QAM: dp_min = "
      f"{rt.product_distance(R, diffs16).dp_min:.6f}; the shipped 2-dim "
      f"default scores {rt.product_distance(rt.default_rotation(2), diffs16).dp_min:.6f}"
      f" on the same set (the golden-angle rotation is optimal for any "
      f"square QAM in two dimensions)")
