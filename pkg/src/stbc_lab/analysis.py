"""Pairwise error probability: exact quadrature, high-SNR asymptotics,
diversity-slope extraction, worst-case scans, and the PAPR metric.

Conventions (fixed so the Monte Carlo oracle matches the closed forms):
transmit scaling sqrt(rho) on a power-normalized code matrix, complex noise
CN(0,1) so each real dimension has variance 1/2. The per-group error event
between data vectors differing by delta has conditional probability

    Q( sqrt( rho * sum_{i,j} beta_j^2 |lambda_ij|^2 / (4 m) ) )

with beta the rotated difference, i = 1, 2 the two channel-half eigenvalue
sets, and m the group dimension (4 for the 8-antenna code, Mbar for the
circulant-block code). Averaging over lambda_ij ~ CN(0, m) gives the exact
integral form used below.
"""

from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.special import erfc

_GL_NODES = 64


class DiversityDeficientError(ValueError):
    """Asymptotic PEP requested for a difference with a zero coordinate."""


@dataclass(frozen=True)
class PepQuery:
    """beta: rotated difference vector; rho: linear SNR; m: group dimension."""
    beta: np.ndarray
    rho: float
    m: int

    def __post_init__(self):
        beta = np.atleast_1d(np.asarray(self.beta, dtype=float))
        object.__setattr__(self, "beta", beta)
        if self.rho <= 0:
            raise ValueError("PepQuery: rho must be positive")
        if beta.shape[-1] != self.m:
            raise ValueError(f"PepQuery: beta length {beta.shape[-1]} != m={self.m}")


def _gl_grid(nodes):
    """Gauss-Legendre nodes/weights mapped onto (0, pi/2)."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    return (x + 1.0) * (np.pi / 4.0), w * (np.pi / 4.0)


def _pep_integral(beta, rho, nodes=_GL_NODES):
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    alpha, w = _gl_grid(nodes)
    s2 = np.sin(alpha) ** 2
    factors = 1.0 + (rho / 8.0) * beta[..., :, None] ** 2 / s2
    integrand = np.prod(factors ** -2.0, axis=-2)
    return float(np.dot(integrand, w) / np.pi)


def pep_exact_qstbc(q, nodes=_GL_NODES):
    """Exact average PEP of the 8-antenna code family,
    (1/pi) * integral over (0, pi/2) of prod_i (1 + rho beta_i^2 / (8 sin^2 a))^-2."""
    return _pep_integral(q.beta, q.rho, nodes)


def pep_exact_sast(q, nodes=_GL_NODES):
    """Exact average PEP of the circulant-block code; identical integrand with
    the product running over the m = Mbar coordinates."""
    return _pep_integral(q.beta, q.rho, nodes)


_C16_8 = comb(16, 8)   # 12870

# 2^7 * C(16, 8); equals (2^24 / pi) * int_0^{pi/2} sin^16 by the Wallis formula
# int sin^16 = (pi/2) * C(16, 8) / 2^16, i.e. the high-SNR limit of the exact
# integral with the +1 terms dropped: (1/pi) * 8^8 * int sin^16.
QSTBC_ASYMPTOTIC_CONSTANT = float(2 ** 7 * _C16_8)   # 1,647,360


def _check_full_diversity(beta):
    if np.any(beta == 0.0):
        raise DiversityDeficientError(
            "asymptotic PEP undefined: rotated difference has a zero "
            "coordinate (diversity loss)")


def pep_asymptotic_qstbc(q):
    """High-SNR approximation 2^7 C(16,8) rho^-8 prod |beta_i|^-4 (m = 4)."""
    _check_full_diversity(q.beta)
    return QSTBC_ASYMPTOTIC_CONSTANT * q.rho ** -8.0 * float(
        np.prod(np.abs(q.beta) ** -4.0))


def pep_asymptotic_sast(q):
    """High-SNR approximation 2^(6m) rho^(-2m) / 2^17 * C(16,8) * prod beta_i^-4.

    The printed constant C(16,8) and the 2^17 denominator come from the m = 4
    instance of the underlying integral (exponent 4m = 16); for m != 4 the
    rho^(-2m) slope is still correct but the constant is only indicative, and
    tests assert the slope via quadrature instead.
    """
    _check_full_diversity(q.beta)
    m = q.m
    return (2.0 ** (6 * m) * q.rho ** (-2.0 * m) / 2.0 ** 17 * _C16_8
            * float(np.prod(np.abs(q.beta) ** -4.0)))


def conditional_pep(beta, lambdas, rho, method="erfc"):
    """PEP conditioned on the channel eigenvalues lambdas (2, m):
    Q( sqrt( rho * sum_ij beta_j^2 |lambda_ij|^2 / (4 m) ) ).

    method "erfc" uses Q(x) = erfc(x / sqrt(2)) / 2; "craig" evaluates
    Q(x) = (1/pi) int_0^{pi/2} exp(-x^2 / (2 sin^2 a)) da by quadrature.
    The two agree to ~1e-12.
    """
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    lam = np.asarray(lambdas)
    m = beta.shape[-1]
    arg2 = rho * np.sum(beta ** 2 * np.abs(lam) ** 2, axis=(-1, -2)) / (4.0 * m)
    if method == "erfc":
        return 0.5 * erfc(np.sqrt(arg2 / 2.0))
    if method == "craig":
        alpha, w = _gl_grid(_GL_NODES)
        s2 = np.sin(alpha) ** 2
        vals = np.exp(-arg2[..., None] / (2.0 * s2))
        return np.dot(vals, w) / np.pi
    raise ValueError(f"conditional_pep: unknown method {method!r}")


def diversity_slope(curve):
    """Least-squares slope of log10(pep) against log10(rho)."""
    pts = np.asarray(curve, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise ValueError("diversity_slope: need at least two (rho, pep) points")
    return float(np.polyfit(np.log10(pts[:, 0]), np.log10(pts[:, 1]), 1)[0])


@dataclass(frozen=True)
class WorstCasePep:
    pep: float
    worst_delta: np.ndarray
    beta: np.ndarray
    diversity_deficient: bool


def worst_case_pep(diffs, R_combined, rho, m):
    """Largest exact PEP over a difference set after rotation by R_combined.

    diversity_deficient flags a worst-case beta with a (numerically) zero
    coordinate, in which case the asymptotic formulas do not apply.
    """
    diffs = np.asarray(diffs, dtype=float)
    beta = diffs @ np.asarray(R_combined).T
    alpha, w = _gl_grid(_GL_NODES)
    s2 = np.sin(alpha) ** 2
    factors = 1.0 + (rho / 8.0) * beta[:, :, None] ** 2 / s2
    peps = np.prod(factors ** -2.0, axis=1) @ w / np.pi
    i = int(np.argmax(peps))
    deficient = bool(np.min(np.abs(beta[i])) < 1e-9)
    return WorstCasePep(float(peps[i]), diffs[i], beta[i], deficient)


def papr(code, constellation, trials, rng, R=None):
    """Peak-to-average power ratio of the transmitted matrix entries:
    max |X_tm|^2 over sampled blocks divided by the ensemble mean |X_tm|^2
    (zero-padded antennas count toward the average)."""
    if trials < 1:
        raise ValueError("papr: trials must be >= 1")
    idx = rng.integers(0, constellation.order, size=(trials, code.K))
    X = code.encode_rotated(constellation.points[idx], R)
    p = np.abs(X) ** 2
    return float(np.max(p) / np.mean(p))
