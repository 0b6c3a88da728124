"""Real orthogonal rotations for full diversity.

The per-group data vectors are rotated before encoding so that every nonzero
difference vector has all-nonzero coordinates after rotation; the figure of
merit is the minimum product distance dp_min = min over differences of
prod_k |beta_k|, beta = R delta. The module provides the evaluation, the
combined encoder-side precoders of both code families, a multi-restart
optimizer, and frozen optimizer outputs as named defaults.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .numerics import dft_matrix, is_orthogonal, theta4

ORTHOGONALITY_TOL = 1e-12


@dataclass(frozen=True)
class ProductDistance:
    dp_min: float
    argmin: np.ndarray


def difference_vectors(level_sets):
    """All nonzero difference vectors of a product lattice.

    level_sets: per-coordinate amplitude level arrays (m of them). The levels
    are reduced to their integer grid (divided by the common spacing), the
    per-axis differences enumerated exactly, and the scaling applied once.
    Returns (D, m) with D = prod(len(diffs_i)) - 1 rows.
    """
    axes = []
    for lv in level_sets:
        lv = np.asarray(lv, dtype=float)
        if lv.size < 1:
            raise ValueError("difference_vectors: empty level set")
        d = np.unique(np.round(lv[:, None] - lv[None, :], 12))
        axes.append(d)
    grids = np.meshgrid(*axes, indexing="ij")
    vecs = np.stack([g.ravel() for g in grids], axis=-1)
    vecs = vecs[np.any(vecs != 0.0, axis=-1)]
    if vecs.shape[0] == 0:
        raise ValueError("difference_vectors: no nonzero differences")
    return vecs


def group_difference_set(constellation, m, axis="real"):
    """Difference set of one decoding group: m coordinates all drawn from one
    axis of the constellation (SAST groups are all-real or all-imag)."""
    levels = constellation.real_levels if axis == "real" else constellation.imag_levels
    return difference_vectors([levels] * m)


def qstbc_group_difference_set(constellation):
    """Difference set of one 8-antenna-code group: coordinates
    (Re p, Re q, Im p, Im q) over constellation pairs (p, q)."""
    re, im = constellation.real_levels, constellation.imag_levels
    return difference_vectors([re, re, im, im])


def product_distance(R_combined, diffs):
    """Minimum product distance of the rotated difference set.

    R_combined maps a difference vector delta to beta; dp_min is the smallest
    prod_k |beta_k| over the set, with the attaining delta returned.
    """
    diffs = np.asarray(diffs, dtype=float)
    if diffs.ndim != 2 or diffs.shape[0] == 0:
        raise ValueError("product_distance: empty difference set")
    beta = diffs @ np.asarray(R_combined).T
    dp = np.prod(np.abs(beta), axis=-1)
    i = int(np.argmin(dp))
    return ProductDistance(float(dp[i]), diffs[i])


def combined_rotation_qstbc(R):
    """Encoder-side rotation for the 8-antenna code: Theta @ R.

    The decoder's Gram matrix is diagonalized by Theta, so the product
    distance that controls diversity is computed from beta = R delta; the
    extra Theta factor cancels against the diagonalizer.
    """
    R = np.asarray(R, dtype=float)
    if R.shape != (4, 4) or not is_orthogonal(R, ORTHOGONALITY_TOL):
        raise ValueError("combined_rotation_qstbc: need a 4x4 orthogonal matrix")
    return theta4() @ R


def combined_rotation_sast(R):
    """Complex precoder actually applied to each data vector of the
    IDFT-precoded circulant-block code: F^H @ R (unitary)."""
    R = np.asarray(R, dtype=float)
    if R.ndim != 2 or R.shape[0] != R.shape[1] or not is_orthogonal(R, ORTHOGONALITY_TOL):
        raise ValueError("combined_rotation_sast: need a square orthogonal matrix")
    return dft_matrix(R.shape[0]).conj().T @ R


def _random_orthogonal(m, rng):
    q, r = np.linalg.qr(rng.standard_normal((m, m)))
    return q * np.sign(np.diag(r))


def _givens(m, i, j, angle):
    G = np.eye(m)
    c, s = np.cos(angle), np.sin(angle)
    G[i, i] = c
    G[j, j] = c
    G[i, j] = -s
    G[j, i] = s
    return G


def _coordinate_descent(R, diffs, sweeps=12, coarse=64):
    """Maximize dp_min over Givens angles, one (i, j) plane at a time."""
    m = R.shape[0]
    best = product_distance(R, diffs).dp_min
    for _ in range(sweeps):
        improved = False
        for i in range(m):
            for j in range(i + 1, m):
                def negdp(t, i=i, j=j):
                    return -product_distance(_givens(m, i, j, t) @ R, diffs).dp_min
                ts = np.linspace(0.0, np.pi, coarse, endpoint=False)
                vals = [negdp(t) for t in ts]
                k = int(np.argmin(vals))
                span = np.pi / coarse
                res = minimize_scalar(negdp, bounds=(ts[k] - span, ts[k] + span),
                                      method="bounded",
                                      options={"xatol": 1e-10})
                if -res.fun > best + 1e-12:
                    R = _givens(m, i, j, float(res.x)) @ R
                    best = -res.fun
                    improved = True
        if not improved:
            break
    return R, best


def optimize_rotation(m, constellation, budget, seed=0):
    """Search for an m x m orthogonal rotation maximizing dp_min on the
    constellation's real-axis difference set.

    budget counts independent random restarts (coordinate descent on Givens
    angles from each); restarts are seeded (seed, k), and the best result is
    kept, so a larger budget never returns a worse rotation.
    """
    if budget < 1:
        raise ValueError("optimize_rotation: budget must be >= 1")
    if m < 1:
        raise ValueError("optimize_rotation: m must be >= 1")
    if m == 1:
        return np.array([[1.0]])
    diffs = group_difference_set(constellation, m)
    best_R, best_dp = None, -1.0
    for k in range(budget):
        rng = np.random.default_rng([seed, k])
        R0 = _random_orthogonal(m, rng)
        R, dp = _coordinate_descent(R0, diffs)
        if dp > best_dp:
            best_R, best_dp = R, dp
    return best_R


# Frozen optimize_rotation outputs on the 4QAM difference sets
# (m=2: seed 0, m=3: seed 1, m=4: seed 0; budget 40;
# dp_min 0.894427 / 0.404061 / 0.117502 for m = 2 / 3 / 4).
# Regenerate with: stbc-lab rotate --m <m> --constellation 4qam --budget 40
_DEFAULT_ROTATIONS = {
    2: np.array([
        [-0.8506508083580419, 0.5257311121094221],
        [0.5257311121094221, 0.850650808358042]]),
    3: np.array([
        [-0.32798527765551044, 0.5910090488956373, -0.7369762287650206],
        [-0.5910090488871006, -0.7369762287665294, -0.32798527766750396],
        [0.7369762287718663, -0.3279852776521214, -0.5910090488889816]]),
    4: np.array([
        [-0.5423962144705532, -0.6548376559240682, 0.4056524805360216, -0.33532082539988284],
        [0.49746616796717896, -0.1655786396924787, -0.26976997264556835, -0.8076727602590343],
        [0.6560717232395795, -0.5428883695297098, 0.3345238009430835, 0.4036532407864631],
        [-0.16704386316627423, -0.49904266019132393, -0.8066994815272749, 0.2688656125116774]]),
}


def default_rotation(m):
    """Shipped rotation for group size m (2, 3, 4)."""
    try:
        return _DEFAULT_ROTATIONS[m].copy()
    except KeyError:
        raise ValueError(f"no shipped default rotation for m={m}; "
                         f"run optimize_rotation or supply a file") from None


def save_rotation(R, path):
    """Plain-text format: first line m, then m rows of m decimals."""
    R = np.asarray(R, dtype=float)
    with open(path, "w") as f:
        f.write(f"{R.shape[0]}\n")
        for row in R:
            f.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def load_rotation(path):
    with open(path) as f:
        tokens = f.read().split()
    if not tokens:
        raise ValueError(f"rotation file {path}: empty")
    m = int(tokens[0])
    vals = [float(t) for t in tokens[1:]]
    if len(vals) != m * m:
        raise ValueError(f"rotation file {path}: expected {m * m} entries, "
                         f"got {len(vals)}")
    R = np.array(vals).reshape(m, m)
    if not is_orthogonal(R, 1e-9):
        raise ValueError(f"rotation file {path}: matrix is not orthogonal")
    return R
