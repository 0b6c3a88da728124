"""Small complex/real matrix primitives used by the code constructions and decoders.

Everything here is sized for the codes in this package (matrices up to 16x16),
so exact eigendecomposition-based methods are preferred over iterative ones.
All functions are pure and accept leading batch dimensions where noted.
"""

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_CLAMP = -1e-10


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when an inverse square root of a (numerically) singular matrix is requested."""


def circulant(x):
    """Right-circulant matrix: row 1 is x, row i is x cyclically shifted right (i-1) times.

    x may carry leading batch dimensions; the circulant is built on the last axis.
    """
    x = np.asarray(x)
    m = x.shape[-1]
    if m == 0:
        raise ValueError("circulant: empty vector")
    i, j = np.ogrid[:m, :m]
    return x[..., (j - i) % m]


def left_circulant(x):
    """Left-circulant matrix: row i is x cyclically shifted left (i-1) times."""
    x = np.asarray(x)
    m = x.shape[-1]
    if m == 0:
        raise ValueError("left_circulant: empty vector")
    i, j = np.ogrid[:m, :m]
    return x[..., (j + i) % m]


def pi_permutation(m):
    """Row permutation that maps a left circulant onto a right circulant.

    Rows i and m-i+2 are swapped for i = 2..ceil(m/2) (1-based), i.e. rows
    2..m are reversed. Returns the 0-based index array.
    """
    idx = np.arange(m)
    idx[1:] = idx[1:][::-1]
    return idx


def pi_permute(X):
    """Apply the row swap permutation to a matrix (or a vector, along its last axis).

    Satisfies pi_permute(left_circulant(x)) == circulant(x).
    """
    X = np.asarray(X)
    if X.ndim == 1:
        return X[pi_permutation(X.shape[0])]
    return X[..., pi_permutation(X.shape[-2]), :]


def dft_matrix(m):
    """Unitary DFT matrix F with F[k, l] = exp(-2j pi k l / m) / sqrt(m).

    For any right circulant C built by `circulant`, F C F^H is diagonal, with
    the diagonal given by `circulant_eigenvalues`.
    """
    if m < 1:
        raise ValueError("dft_matrix: m must be >= 1")
    k = np.arange(m)
    return np.exp(-2j * np.pi * np.outer(k, k) / m) / np.sqrt(m)


def circulant_eigenvalues(x):
    """Eigenvalues of circulant(x), ordered to match dft_matrix.

    Unnormalized convention: the all-ones vector maps to (m, 0, ..., 0).
    Equals m * ifft(x). Supports leading batch dimensions.
    """
    x = np.asarray(x)
    if x.shape[-1] == 0:
        raise ValueError("circulant_eigenvalues: empty vector")
    return np.fft.ifft(x, axis=-1) * x.shape[-1]


F2 = np.array([[1.0, 1.0], [1.0, -1.0]])


def theta4():
    """The real unitary 4x4 matrix (1/2) F2 (x) F2 that diagonalizes 4x4
    block circulants with circulant blocks. Symmetric and involutory."""
    return 0.5 * np.kron(F2, F2)


# Index pattern of a 4x4 block-circulant matrix with 2x2 circulant blocks:
# entry (i, j) carries x[(i-1) XOR (j-1)] (0-based: x[i ^ j]).
_BCCB4_IDX = np.arange(4)[:, None] ^ np.arange(4)[None, :]


def bccb4(x):
    """4x4 block-circulant-with-circulant-blocks matrix from a length-4 vector.

    Row 1 is x; the index pattern is the XOR table, so the matrix is symmetric
    and is diagonalized by theta4(). Supports leading batch dimensions.
    """
    x = np.asarray(x)
    if x.shape[-1] != 4:
        raise ValueError("bccb4: need a length-4 vector")
    return x[..., _BCCB4_IDX]


def bccb4_eigenvalues(x):
    """Eigenvalues of bccb4(x) in theta4() order: (F2 (x) F2) @ x."""
    x = np.asarray(x)
    return x @ np.kron(F2, F2).T


def _check_hermitian(A):
    A = np.asarray(A, dtype=complex)
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise ValueError("expected a square matrix")
    dev = np.max(np.abs(A - np.conj(np.swapaxes(A, -1, -2))))
    if dev > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return A


def hermitian_sqrt(A):
    """Principal square root of a Hermitian PSD matrix via eigendecomposition.

    Eigenvalues in [PSD_CLAMP, 0) are clamped to zero; anything more negative
    raises. The result B is Hermitian PSD with B @ B == A to ~1e-8.
    """
    A = _check_hermitian(A)
    w, V = np.linalg.eigh(A)
    if np.min(w) < PSD_CLAMP:
        raise ValueError(f"matrix is not PSD (min eigenvalue {np.min(w):.3e})")
    w = np.clip(w, 0.0, None)
    return (V * np.sqrt(w)[..., None, :]) @ np.conj(np.swapaxes(V, -1, -2))


def hermitian_inv_sqrt(A, tol=1e-12):
    """Inverse square root of a Hermitian positive definite matrix.

    Raises SingularMatrixError when the smallest eigenvalue is below tol.
    """
    A = _check_hermitian(A)
    w, V = np.linalg.eigh(A)
    if np.min(w) < tol:
        raise SingularMatrixError(
            f"matrix is numerically singular (min eigenvalue {np.min(w):.3e})")
    return (V / np.sqrt(w)[..., None, :]) @ np.conj(np.swapaxes(V, -1, -2))


def is_orthogonal(R, tol=1e-12):
    R = np.asarray(R)
    return np.max(np.abs(R.T @ R - np.eye(R.shape[0]))) <= tol
