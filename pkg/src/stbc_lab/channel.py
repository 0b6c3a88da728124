"""Quasi-static Rayleigh flat-fading MIMO channel with AWGN.

Model: Y = sqrt(rho) X H + Z with H (M x N) and Z (T x N) i.i.d. CN(0, 1),
X power-normalized so E||X||_F^2 = T. rho is then the average receive SNR
per antenna. All functions accept a leading batch dimension on their array
arguments (B blocks at once).
"""

import numpy as np


def complex_normal(rng, shape):
    """i.i.d. CN(0, 1) samples: real and imaginary parts N(0, 1/2)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def sample_channel(M, N, rng, blocks=None):
    """Draw a channel realization H (M x N), or a batch (blocks, M, N)."""
    if M < 1 or N < 1:
        raise ValueError("sample_channel: antenna counts must be positive")
    shape = (M, N) if blocks is None else (blocks, M, N)
    return complex_normal(rng, shape)


def transmit(X, H, rho, rng, noiseless=False):
    """Y = sqrt(rho) X H + Z with Z i.i.d. CN(0, 1).

    X: (..., T, M), H: (..., M, N); shapes must broadcast. rho is the linear
    SNR. noiseless=True drops Z (for round-trip checks).
    """
    X = np.asarray(X)
    H = np.asarray(H)
    if X.shape[-1] != H.shape[-2]:
        raise ValueError(f"transmit: X has {X.shape[-1]} columns, H has "
                         f"{H.shape[-2]} rows")
    if rho < 0:
        raise ValueError("transmit: rho must be nonnegative")
    Y = np.sqrt(rho) * (X @ H)
    if not noiseless:
        Y = Y + complex_normal(rng, Y.shape)
    return Y


def snr_db_to_linear(snr_db):
    return 10.0 ** (np.asarray(snr_db, dtype=float) / 10.0)
