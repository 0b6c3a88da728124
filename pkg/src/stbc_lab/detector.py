"""Decoder chains for the four-group codes, plus a joint-ML oracle.

Both chains follow the same outline: matched filter against the structured
equivalent channel, noise whitening by the inverse square root of the Gram
matrix, separation into four independent real-valued groups, and per-group ML
over a small candidate list. Group metrics use the model

    w = sqrt(rho) * scale * G^(1/2) R v + n,   n real, var 1/2 per dimension

where G is the Gram matrix, R the encoder-side rotation and v the per-group
real data vector.

Array arguments accept one leading batch dimension: y (B, T, N), h (B, M, N).
Single blocks may be passed as (T, N) / (M, N).
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .numerics import (bccb4, bccb4_eigenvalues, circulant, circulant_eigenvalues,
                       dft_matrix, pi_permutation, theta4)

SINGULAR_GRAM_TOL = 1e-12

QSTBC8_PERM = np.array([0, 2, 4, 6, 1, 3, 5, 7])


class DetectionFailureError(RuntimeError):
    """Gram matrix numerically singular (all-zero channel draw)."""


@dataclass(frozen=True)
class EquivalentChannel:
    """Diagonalized real channel seen by each symbol group after whitening.

    kind: "qstbc8" or "sast". eigenvalues holds the (batched) nonnegative
    spectrum of the Gram matrix in diagonalizer order; sqrt_gram is the
    equivalent channel matrix itself. group_maps lists, per group, the real
    symbol indices it detects.
    """
    kind: str
    eigenvalues: np.ndarray
    sqrt_gram: np.ndarray
    diagonalizer: np.ndarray
    group_maps: tuple


@dataclass(frozen=True)
class DetectionResult:
    symbols: np.ndarray
    per_group_metrics: np.ndarray
    method: str


def _with_rx_axis(a, T):
    """Normalize y/h input to (batch..., T, N); adds the N axis if absent."""
    a = np.asarray(a, dtype=complex)
    if a.shape[-1] == T and (a.ndim == 1 or a.shape[-2] != T):
        a = a[..., None]
    if a.shape[-2] != T:
        raise ValueError(f"expected {T} rows, got shape {a.shape}")
    return a


def _check_nonsingular(eig):
    if np.min(eig) < SINGULAR_GRAM_TOL:
        raise DetectionFailureError(
            f"Gram matrix numerically singular (min eigenvalue {np.min(eig):.3e})")


def qstbc8_equivalent_channel(h):
    """Equivalent channel of the 8-antenna four-group code.

    h: (..., 8) or (..., 8, N). The Gram matrix of the permuted code is
    G = conj(D1) D1 + conj(D2) D2 (summed over receive antennas), a real
    symmetric matrix diagonalized by the fixed 4x4 Hadamard-type matrix.
    """
    h = _with_rx_axis(h, 8)
    hp = h[..., QSTBC8_PERM, :]
    h1 = np.swapaxes(hp[..., :4, :], -1, -2)          # (..., N, 4)
    h2 = np.swapaxes(hp[..., 4:, :], -1, -2)
    lam1 = bccb4_eigenvalues(h1)
    lam2 = bccb4_eigenvalues(h2)
    mu = np.sum(np.abs(lam1) ** 2 + np.abs(lam2) ** 2, axis=-2)   # (..., 4)
    th = theta4()
    sqrt_gram = (th * np.sqrt(mu)[..., None, :]) @ th
    groups = (tuple((0, 2, 1, 3)), tuple((4, 6, 5, 7)),
              tuple((8, 10, 9, 11)), tuple((12, 14, 13, 15)))
    return EquivalentChannel("qstbc8", mu, sqrt_gram, th, groups)


def _qstbc8_front_end(y, h):
    """Matched-filter outputs ybar (..., 8) and Gram eigenvalues mu (..., 4)."""
    y = _with_rx_axis(y, 8)
    h = _with_rx_axis(h, 8)
    yp = y[..., QSTBC8_PERM, :]
    hp = h[..., QSTBC8_PERM, :]
    h1 = np.swapaxes(hp[..., :4, :], -1, -2)          # (..., N, 4)
    h2 = np.swapaxes(hp[..., 4:, :], -1, -2)
    H1 = bccb4(h1)                                    # (..., N, 4, 4)
    H2 = bccb4(h2)
    y1 = np.swapaxes(yp[..., :4, :], -1, -2)[..., None]
    y2 = np.conj(np.swapaxes(yp[..., 4:, :], -1, -2))[..., None]
    # block rows of Hbar^H, using symmetry of H1, H2
    yb1 = np.sum(np.conj(H1) @ y1 + H2 @ y2, axis=-3)[..., 0]
    yb2 = np.sum(np.conj(H2) @ y1 - H1 @ y2, axis=-3)[..., 0]
    lam1 = bccb4_eigenvalues(h1)
    lam2 = bccb4_eigenvalues(h2)
    mu = np.sum(np.abs(lam1) ** 2 + np.abs(lam2) ** 2, axis=-2)
    return np.concatenate([yb1, yb2], axis=-1), mu


def _pair_candidates(c):
    """All (p, q) constellation pairs as real 4-vectors (Re p, Re q, Im p, Im q)."""
    p = np.repeat(c.points, c.order)
    q = np.tile(c.points, c.order)
    V = np.stack([p.real, q.real, p.imag, q.imag], axis=-1)
    return V, p, q


def _group_argmin(w, lattice, strategy):
    """Nearest lattice point index per batch row: w (..., n), lattice (..., n, P)."""
    if strategy == "sphere":
        flat_w = w.reshape(-1, w.shape[-1])
        flat_l = np.broadcast_to(lattice, w.shape[:-1] + lattice.shape[-2:])
        flat_l = flat_l.reshape(-1, *lattice.shape[-2:])
        out_i = np.empty(flat_w.shape[0], dtype=int)
        out_m = np.empty(flat_w.shape[0])
        for b in range(flat_w.shape[0]):
            out_i[b], out_m[b] = sphere_detect(flat_l[b].T, flat_w[b])
        return out_i.reshape(w.shape[:-1]), out_m.reshape(w.shape[:-1])
    if strategy != "exhaustive":
        raise ValueError(f"unknown detector strategy {strategy!r}")
    d = w[..., :, None] - lattice
    metrics = np.sum(np.abs(d) ** 2, axis=-2)
    idx = np.argmin(metrics, axis=-1)
    return idx, np.take_along_axis(metrics, idx[..., None], axis=-1)[..., 0]


def sphere_detect(lattice_points, target):
    """Exact closest point in an explicit finite lattice, with partial-distance
    pruning against the best radius found so far (never returns "not found").

    lattice_points: (P, n); target: (n,). Returns (index, squared distance).
    """
    pts = np.asarray(lattice_points)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("sphere_detect: need a nonempty (P, n) candidate set")
    t = np.asarray(target)
    # visit candidates nearest-first along coordinate 0 so the radius shrinks fast
    order = np.argsort(np.abs(pts[:, 0] - t[0]))
    best_i, best_m = -1, np.inf
    for i in order:
        m = 0.0
        row = pts[i]
        for k in range(row.shape[0]):
            m += abs(row[k] - t[k]) ** 2
            if m >= best_m:
                break
        else:
            best_i, best_m = i, m
    return best_i, best_m


def qstbc8_detect(y, h, constellation, R=None, rho=1.0, scale=None,
                  strategy="exhaustive"):
    """Four-group ML detection for the 8-antenna code family.

    y: received block(s), h: channel vector(s) of length 8 (zero entries for
    deleted transmit antennas). R is the encoder-side 4x4 rotation applied to
    each group's real data vector (None = unrotated). scale is the encoder's
    power normalization (default 1/sqrt(8); pass the code's own scale when
    columns were deleted).
    """
    if scale is None:
        scale = 1.0 / np.sqrt(8.0)
    ybar, mu = _qstbc8_front_end(y, h)
    _check_nonsingular(mu)
    th = theta4()
    inv_sqrt = (th * (1.0 / np.sqrt(mu))[..., None, :]) @ th
    sqrt_gram = (th * np.sqrt(mu)[..., None, :]) @ th
    A = sqrt_gram if R is None else sqrt_gram @ R
    V, p_cand, q_cand = _pair_candidates(constellation)
    lattice = (np.sqrt(rho) * scale) * (A @ V.T)      # (..., 4, Q^2)
    # observations in group order: (s1,s2) <- Re ybar1, (s3,s4) <- Re ybar2,
    # (s5,s6) <- Im ybar1, (s7,s8) <- Im ybar2
    obs = (ybar[..., :4].real, ybar[..., 4:].real,
           ybar[..., :4].imag, ybar[..., 4:].imag)
    symbols = np.empty(ybar.shape[:-1] + (8,), dtype=complex)
    metrics = np.empty(ybar.shape[:-1] + (4,))
    for gi in range(4):
        w = np.einsum("...ij,...j->...i", inv_sqrt, obs[gi])
        idx, m = _group_argmin(w, lattice, strategy)
        symbols[..., 2 * gi] = p_cand[idx]
        symbols[..., 2 * gi + 1] = q_cand[idx]
        metrics[..., gi] = m
    return DetectionResult(symbols, metrics, strategy)


def sast_equivalent_channel(h):
    """Equivalent channel of the circulant-block code: Gram matrix
    H1^H H1 + H2^H H2 (summed over receive antennas), circulant with the DFT
    as diagonalizer; eigenvalues |lam1|^2 + |lam2|^2."""
    h = np.asarray(h, dtype=complex)
    M = h.shape[-2] if h.ndim >= 2 else h.shape[-1]
    if M % 2:
        raise ValueError("sast_equivalent_channel: M must be even")
    h = _with_rx_axis(h, M)
    mbar = M // 2
    h1 = np.swapaxes(h[..., :mbar, :], -1, -2)
    h2 = np.swapaxes(h[..., mbar:, :], -1, -2)
    lam1 = circulant_eigenvalues(h1)
    lam2 = circulant_eigenvalues(h2)
    lam = np.sum(np.abs(lam1) ** 2 + np.abs(lam2) ** 2, axis=-2)
    F = dft_matrix(mbar)
    sqrt_gram = F.conj().T @ (np.sqrt(lam)[..., :, None] * F)
    base = range(mbar)
    groups = (tuple(2 * k for k in base), tuple(2 * k + 1 for k in base),
              tuple(2 * mbar + 2 * k for k in base),
              tuple(2 * mbar + 2 * k + 1 for k in base))
    return EquivalentChannel("sast", lam, sqrt_gram, F, groups)


def _sast_front_end(y, h):
    """Matched-filter outputs (yhat1, yhat2), each (..., Mbar), and the
    circulant Gram eigenvalues (..., Mbar)."""
    h = np.asarray(h, dtype=complex)
    M = h.shape[-2] if h.ndim >= 2 else h.shape[-1]
    if M % 2:
        raise ValueError("SAST detection: M must be even")
    y = _with_rx_axis(y, M)
    h = _with_rx_axis(h, M)
    mbar = M // 2
    perm = pi_permutation(mbar)
    y1 = np.swapaxes(y[..., :mbar, :], -1, -2)[..., perm]   # (..., N, Mbar)
    y2 = np.conj(np.swapaxes(y[..., mbar:, :], -1, -2))
    h1 = np.swapaxes(h[..., :mbar, :], -1, -2)
    h2 = np.swapaxes(h[..., mbar:, :], -1, -2)
    H1 = circulant(h1)
    H2 = circulant(h2)
    H1h = np.conj(np.swapaxes(H1, -1, -2))
    H2h = np.conj(np.swapaxes(H2, -1, -2))
    y1 = y1[..., None]
    y2 = y2[..., None]
    yhat1 = np.sum(H1h @ y1 + H2 @ y2, axis=-3)[..., 0]
    yhat2 = np.sum(H2h @ y1 - H1 @ y2, axis=-3)[..., 0]
    lam1 = circulant_eigenvalues(h1)
    lam2 = circulant_eigenvalues(h2)
    lam = np.sum(np.abs(lam1) ** 2 + np.abs(lam2) ** 2, axis=-2)
    return yhat1, yhat2, lam


def _pam_candidates(levels, m):
    """All real m-vectors over the given amplitude levels: (len(levels)^m, m)."""
    grids = np.meshgrid(*([np.asarray(levels)] * m), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)


def sast_4gp_detect(y, h, constellation, R=None, rho=1.0, scale=None,
                    strategy="exhaustive"):
    """Four-group ML detection for the IDFT-precoded circulant-block code.

    Requires a product constellation (real/imag parts carry separate bits).
    R is the encoder-side Mbar x Mbar real rotation. Returns the M complex
    data symbols (pre-precoding).
    """
    if not constellation.is_product():
        raise ValueError(f"sast_4gp_detect: constellation "
                         f"{constellation.name!r} does not separate into "
                         f"independent real/imag parts")
    yhat1, yhat2, lam = _sast_front_end(y, h)
    _check_nonsingular(lam)
    mbar = lam.shape[-1]
    if scale is None:
        scale = 1.0 / np.sqrt(2.0 * mbar)
    F = dft_matrix(mbar)
    z1 = np.einsum("ij,...j->...i", F, yhat1) / np.sqrt(lam)
    z2 = np.einsum("ij,...j->...i", F, yhat2) / np.sqrt(lam)
    A = np.sqrt(lam)[..., :, None] * (np.eye(mbar) if R is None else R)
    re_cand = _pam_candidates(constellation.real_levels, mbar)
    im_cand = _pam_candidates(constellation.imag_levels, mbar)
    lat_re = (np.sqrt(rho) * scale) * (A @ re_cand.T)
    lat_im = (np.sqrt(rho) * scale) * (A @ im_cand.T)
    parts = []
    metrics = np.empty(lam.shape[:-1] + (4,))
    for gi, (w, lat, cand) in enumerate([
            (z1.real, lat_re, re_cand), (z1.imag, lat_im, im_cand),
            (z2.real, lat_re, re_cand), (z2.imag, lat_im, im_cand)]):
        idx, m = _group_argmin(w, lat, strategy)
        parts.append(cand[idx])
        metrics[..., gi] = m
    symbols = np.concatenate([parts[0] + 1j * parts[1],
                              parts[2] + 1j * parts[3]], axis=-1)
    return DetectionResult(symbols, metrics, strategy)


def sast_2gp_detect(y, h, constellation, rho=1.0, scale=None,
                    strategy="exhaustive"):
    """Two-group baseline: each half's Mbar complex symbols detected jointly
    over Q^Mbar candidates, no precoding or rotation."""
    yhat1, yhat2, lam = _sast_front_end(y, h)
    _check_nonsingular(lam)
    mbar = lam.shape[-1]
    if scale is None:
        scale = 1.0 / np.sqrt(2.0 * mbar)
    F = dft_matrix(mbar)
    grids = np.meshgrid(*([constellation.points] * mbar), indexing="ij")
    cand = np.stack([g.ravel() for g in grids], axis=-1)      # (Q^Mbar, Mbar)
    # whitened model: Lam^(-1/2) F yhat = sqrt(rho)*scale*Lam^(1/2) F s + noise
    lat = (np.sqrt(rho) * scale) * (np.sqrt(lam)[..., :, None]
                                    * np.einsum("ij,pj->ip", F, cand))
    halves = []
    metrics = np.empty(lam.shape[:-1] + (2,))
    for gi, yh in enumerate([yhat1, yhat2]):
        w = np.einsum("ij,...j->...i", F, yh) / np.sqrt(lam)
        idx, m = _group_argmin(w, lat, strategy)
        halves.append(cand[idx])
        metrics[..., gi] = m
    return DetectionResult(np.concatenate(halves, axis=-1), metrics, strategy)


JOINT_ML_GUARD = 1 << 20


def all_symbol_vectors(constellation, K):
    """Every length-K symbol vector over the constellation, (Q^K, K)."""
    if constellation.order ** K > JOINT_ML_GUARD:
        raise ValueError(f"joint ML search space {constellation.order}^{K} "
                         f"exceeds the {JOINT_ML_GUARD} candidate guard")
    combos = itertools.product(range(constellation.order), repeat=K)
    idx = np.fromiter((i for tup in combos for i in tup), dtype=int,
                      count=K * constellation.order ** K).reshape(-1, K)
    return constellation.points[idx]


def joint_ml_oracle(code, Y, H, rho, constellation, R=None, candidates=None):
    """Exhaustive Frobenius-metric minimization over all symbol vectors,
    including the encoder rotation. Single block only; intended as the
    correctness reference for the fast chains."""
    Y = np.asarray(Y, dtype=complex)
    H = np.asarray(H, dtype=complex)
    if candidates is None:
        candidates = all_symbol_vectors(constellation, code.K)
    X = code.encode_rotated(candidates, R)               # (P, T, M)
    diff = Y - np.sqrt(rho) * (X @ H)
    metrics = np.sum(np.abs(diff) ** 2, axis=(-1, -2))
    i = int(np.argmin(metrics))
    return DetectionResult(candidates[i], np.array([metrics[i]]), "oracle")
