"""Tour of the shipped code constructions.

Builds each space-time block code, prints one encoded matrix, and checks
the quasi-orthogonality condition that makes four-group decoding exact.
"""

import numpy as np

from stbc_lab import codebook as cb
from stbc_lab import constellation as cn

np.set_printoptions(precision=3, suppress=True, linewidth=120)

c4 = cn.make_qam(4)
rng = np.random.default_rng(0)

print("=== 4-antenna building block ===")
code = cb.mdc_qstbc_4()
s = c4.points[rng.integers(0, 4, code.K)]
print(f"symbols: {np.round(s, 3)}")
print(code.encode(s))

print("\n=== 8-antenna code (doubling construction) ===")
code = cb.qstbc_8()
s = c4.points[rng.integers(0, 4, code.K)]
print(code.encode(s))
print(f"real-symbol decoding groups: {code.groups}")

print("\n=== 6-antenna variant (columns 4 and 8 deleted, power renormalized) ===")
code = cb.qstbc_6()
print(f"T={code.T}, M={code.M}, scale={code.scale:.4f}")

print("\n=== SAST family (circulant blocks) ===")
for M in (4, 6, 8):
    code = cb.sast_4gp_code(M)
    info = cb.code_info(code)
    print(f"4gp-sast{M}: rate {info['rate']:g}, delay {info['delay']}, "
          f"largest real group {info['real_group_size']}")
code = cb.sast_4gp_code(4)
print(code.encode(c4.points[rng.integers(0, 4, code.K)]))

print("\n=== quasi-orthogonality check (cross-group Gram symmetrization) ===")
for name in ("mdc-qstbc4", "4gp-qstbc8", "4gp-qstbc6",
             "4gp-sast4", "4gp-sast6", "4gp-sast8"):
    check = cb.verify_group_decodable(cb.by_name(name))
    print(f"{name:12s} ok={check.ok}  max violation={check.max_violation:.2e}")

print("\n=== 16 antennas by doubling twice ===")
big = cb.double_code(cb.double_code(cb.mdc_qstbc_4()))
check = cb.verify_group_decodable(big)
print(f"T={big.T}, M={big.M}, K={big.K}, still 4-group decodable: {check.ok}")
