"""Linear dispersion STBC constructions.

A code is a list of T x M dispersion matrices, one per real symbol, plus a
partition of the real symbols into decoding groups (ordered to match the
decoder's per-group data-vector convention). Real symbols are interleaved as
(Re s1, Im s1, Re s2, Im s2, ...).

Constructions: the 4x4 minimum-decoding-complexity quasi-orthogonal code, its
recursive doubling to 8/16/... antennas, column deletion, circulant-block
semi-orthogonal codes (two-group and IDFT-precoded four-group variants), and
the 2x2 orthogonal design as a baseline.
"""

import re
from dataclasses import dataclass

import numpy as np

from .numerics import circulant, dft_matrix

GROUP_DECODABLE_TOL = 1e-12


@dataclass(frozen=True)
class DispersionCode:
    """T x M linear code X = scale * sum_l c_l C_l over L real symbols c_l.

    groups: ordered index tuples into the real symbol vector; the order within
    each tuple is the decoder's per-group data-vector order. scale enforces
    E||X||_F^2 = T for unit-average-power complex symbols.
    """
    name: str
    T: int
    M: int
    dispersion: np.ndarray        # (L, T, M) complex
    groups: tuple                 # tuple of tuples, 0-based
    scale: float

    @property
    def L(self):
        return self.dispersion.shape[0]

    @property
    def K(self):
        return self.L // 2

    def real_view(self, s):
        """Interleave complex symbols into the real symbol vector
        (Re s1, Im s1, Re s2, Im s2, ...). Batched on leading axes."""
        s = np.asarray(s, dtype=complex)
        if s.shape[-1] != self.K:
            raise ValueError(f"{self.name}: expected {self.K} symbols, got {s.shape[-1]}")
        c = np.empty(s.shape[:-1] + (self.L,))
        c[..., 0::2] = s.real
        c[..., 1::2] = s.imag
        return c

    def complex_view(self, c):
        c = np.asarray(c)
        return c[..., 0::2] + 1j * c[..., 1::2]

    def encode_real(self, c):
        """X = scale * sum_l c_l C_l from the real symbol vector (batched)."""
        c = np.asarray(c)
        if c.shape[-1] != self.L:
            raise ValueError(f"{self.name}: expected {self.L} real symbols")
        return self.scale * np.tensordot(c, self.dispersion, axes=(-1, 0))

    def encode(self, s):
        """Encode complex symbols (unit average power) into the T x M matrix."""
        return self.encode_real(self.real_view(s))

    def rotate_groups(self, c, R):
        """Apply a real orthogonal matrix to each group's data vector.

        R may be a single matrix (same size for all groups) or None.
        """
        if R is None:
            return c
        c = np.array(c, copy=True)
        for g in self.groups:
            idx = np.array(g)
            if R.shape[0] != len(idx):
                raise ValueError(
                    f"{self.name}: rotation is {R.shape[0]}-dim, group size {len(idx)}")
            c[..., idx] = c[..., idx] @ R.T
        return c

    def encode_rotated(self, s, R):
        """Encode with the per-group rotation R applied to the real data vectors."""
        return self.encode_real(self.rotate_groups(self.real_view(s), R))


def _normalization(dispersion, T):
    # E||X||_F^2 = 0.5 * sum_l ||C_l||_F^2 for unit-power complex symbols.
    e = 0.5 * float(np.sum(np.abs(dispersion) ** 2))
    return np.sqrt(T / e)


def _make_code(name, dispersion, groups, T=None, M=None):
    dispersion = np.asarray(dispersion, dtype=complex)
    L, T_, M_ = dispersion.shape
    T = T or T_
    M = M or M_
    flat = [i for g in groups for i in g]
    if sorted(flat) != list(range(L)):
        raise ValueError(f"{name}: groups do not partition 0..{L - 1}")
    return DispersionCode(name, T, M, dispersion,
                          tuple(tuple(g) for g in groups),
                          _normalization(dispersion, T))


def dispersion_from_pairs(A, B, groups, name="custom"):
    """Build a code from per-complex-symbol matrix pairs (A_k for Re s_k,
    B_k for Im s_k); real symbols come out interleaved."""
    A = [np.asarray(a, dtype=complex) for a in A]
    B = [np.asarray(b, dtype=complex) for b in B]
    if len(A) == 0 or len(A) != len(B):
        raise ValueError("dispersion_from_pairs: need equal-sized, nonempty A/B lists")
    shape = A[0].shape
    for mat in A + B:
        if mat.shape != shape:
            raise ValueError("dispersion_from_pairs: dimension mismatch")
    dispersion = np.empty((2 * len(A),) + shape, dtype=complex)
    dispersion[0::2] = A
    dispersion[1::2] = B
    return _make_code(name, dispersion, groups)


@dataclass(frozen=True)
class GroupCheck:
    ok: bool
    max_violation: float


def verify_group_decodable(code, tol=GROUP_DECODABLE_TOL):
    """Check the quasi-orthogonality conditions C_p^H C_q + C_q^H C_p = 0 for
    every cross-group pair; returns ok and the largest Frobenius violation."""
    C = code.dispersion
    gram = np.einsum("pij,qik->pqjk", C.conj(), C)     # gram[p, q] = C_p^H C_q
    sym = gram + gram.transpose(1, 0, 2, 3)
    viol = np.sqrt(np.sum(np.abs(sym) ** 2, axis=(-1, -2)))
    group_of = np.empty(code.L, dtype=int)
    for gi, g in enumerate(code.groups):
        group_of[list(g)] = gi
    cross = group_of[:, None] != group_of[None, :]
    max_violation = float(np.max(viol[cross])) if cross.any() else 0.0
    return GroupCheck(max_violation <= tol, max_violation)


def f4_matrix(a, b):
    """The 4x4 minimum-decoding-complexity quasi-orthogonal code matrix,
    written out entry for entry in the paper-style real symbols a1..a4, b1..b4."""
    a1, a2, a3, a4 = a
    b1, b2, b3, b4 = b
    j = 1j
    return np.array([
        [a1 + j * a3,  a2 + j * a4,  b1 + j * b3,  b2 + j * b4],
        [-a2 + j * a4, a1 - j * a3, -b2 + j * b4,  b1 - j * b3],
        [b1 + j * b3,  b2 + j * b4,  a1 + j * a3,  a2 + j * a4],
        [-b2 + j * b4, b1 - j * b3, -a2 + j * a4,  a1 - j * a3],
    ])


def mdc_qstbc_4():
    """Four-antenna quasi-orthogonal code whose four complex symbols are
    single-symbol decodable.

    Complex symbol k is a_k + j b_k in f4_matrix's labels; that pairing is the
    unique one satisfying the group-decodability conditions (the coefficient
    matrices of a_k and b_k do not quasi-commute with each other, so Re and Im
    of one symbol must be detected jointly).
    """
    zeros = np.zeros(4)
    A, B = [], []
    for k in range(4):
        e = np.zeros(4)
        e[k] = 1.0
        A.append(f4_matrix(e, zeros))
        B.append(f4_matrix(zeros, e))
    groups = [(2 * k, 2 * k + 1) for k in range(4)]
    return dispersion_from_pairs(A, B, groups, name="mdc-qstbc4")


def double_code(code, name=None):
    """Antenna-doubling map: from a 4-group code for (T, M) with pairs
    (A_k, B_k), build the 4-group code for (2T, 2M) with pairs

        A'_{2k-1} = diag(A_k, A_k)   A'_{2k} = diag(B_k, B_k)
        B'_{2k-1} = adiag(A_k, A_k)  B'_{2k} = adiag(B_k, B_k)

    Each input group of complex symbols {k} becomes the output group
    {2k-1, 2k}, ordered real-parts-first to match the decoder.
    """
    check = verify_group_decodable(code)
    if not check.ok:
        raise ValueError(f"double_code: input code is not group decodable "
                         f"(violation {check.max_violation:.3e})")
    T, M, L = code.T, code.M, code.L
    Z = np.zeros((T, M), dtype=complex)
    A_out, B_out = [], []
    for k in range(code.K):
        Ak = code.dispersion[2 * k]
        Bk = code.dispersion[2 * k + 1]
        A_out.append(np.block([[Ak, Z], [Z, Ak]]))
        A_out.append(np.block([[Bk, Z], [Z, Bk]]))
        B_out.append(np.block([[Z, Ak], [Ak, Z]]))
        B_out.append(np.block([[Z, Bk], [Bk, Z]]))
    groups = []
    for g in code.groups:
        ks = sorted({i // 2 for i in g})
        out = [4 * k for k in ks] + [4 * k + 2 for k in ks]        # real parts
        out += [4 * k + 1 for k in ks] + [4 * k + 3 for k in ks]   # imag parts
        groups.append(tuple(out))
    return dispersion_from_pairs(A_out, B_out, groups,
                                 name=name or f"2x-{code.name}")


def qstbc_8():
    """Rate-one four-group code for 8 antennas, obtained by doubling the
    four-antenna code; matches the explicit 8x8 code matrix of the paper
    symbol for symbol, with groups (s1,s2), (s3,s4), (s5,s6), (s7,s8)."""
    return double_code(mdc_qstbc_4(), name="4gp-qstbc8")


def qstbc_8_permuted(x):
    """Permutation-equivalent form D of the 8-antenna code, from the 8
    intermediate complex variables x: D = [[D1, D2], [-D2*, D1*]] with D1, D2
    block circulants with circulant blocks (XOR index pattern)."""
    from .numerics import bccb4
    x = np.asarray(x, dtype=complex)
    if x.shape[-1] != 8:
        raise ValueError("qstbc_8_permuted: need 8 intermediates")
    D1 = bccb4(x[..., :4])
    D2 = bccb4(x[..., 4:])
    top = np.concatenate([D1, D2], axis=-1)
    bot = np.concatenate([-np.conj(D2), np.conj(D1)], axis=-1)
    return np.concatenate([top, bot], axis=-2)


QSTBC8_PERM = np.array([0, 2, 4, 6, 1, 3, 5, 7])  # column/row order (1,3,5,7,2,4,6,8)


def sast_encode(s1, s2):
    """Circulant-block semi-orthogonal code matrix (unnormalized):

        S = [[ C(s1),  C(s2)],
             [-C(s2)^H, C(s1)^H]]

    for two length-Mbar data vectors; M = 2 Mbar antennas, T = M. Batched.
    """
    s1 = np.asarray(s1, dtype=complex)
    s2 = np.asarray(s2, dtype=complex)
    if s1.shape != s2.shape:
        raise ValueError("sast_encode: length mismatch")
    C1 = circulant(s1)
    C2 = circulant(s2)
    C1h = np.conj(np.swapaxes(C1, -1, -2))
    C2h = np.conj(np.swapaxes(C2, -1, -2))
    top = np.concatenate([C1, C2], axis=-1)
    bot = np.concatenate([-C2h, C1h], axis=-1)
    return np.concatenate([top, bot], axis=-2)


def _sast_dispersion(M, precode):
    """Dispersion matrices of the circulant-block code for M antennas; when
    precode is given (Mbar x Mbar complex unitary), each data vector is
    premultiplied by it before entering the circulant blocks."""
    if M < 2 or M % 2:
        raise ValueError("SAST codes need an even number of antennas >= 2")
    mbar = M // 2
    P = np.eye(mbar, dtype=complex) if precode is None else precode
    dispersion = []
    zero = np.zeros(mbar, dtype=complex)
    for half in range(2):
        for k in range(mbar):
            v = P[:, k]
            for unit in (1.0, 1j):
                s1 = unit * v if half == 0 else zero
                s2 = unit * v if half == 1 else zero
                dispersion.append(sast_encode(s1, s2))
    return np.array(dispersion)


def sast_code(M):
    """Two-group-decodable circulant-block code: groups are the two data
    vectors (all 2*Mbar real symbols of each detected jointly)."""
    mbar = M // 2
    g1 = tuple(range(0, 2 * mbar))
    g2 = tuple(range(2 * mbar, 4 * mbar))
    return _make_code(f"sast{M}-2gp", _sast_dispersion(M, None), (g1, g2))


def sast_4gp_code(M):
    """Four-group-decodable variant: each data vector is premultiplied by the
    IDFT matrix, which makes the real and imaginary halves separately
    decodable. Groups (ordered): Re(s1-half), Im(s1-half), Re(s2), Im(s2)."""
    mbar = M // 2
    F = dft_matrix(mbar)
    disp = _sast_dispersion(M, F.conj().T)
    base = range(mbar)
    groups = (tuple(2 * k for k in base), tuple(2 * k + 1 for k in base),
              tuple(2 * mbar + 2 * k for k in base),
              tuple(2 * mbar + 2 * k + 1 for k in base))
    return _make_code(f"4gp-sast{M}", disp, groups)


def alamouti():
    """2x2 orthogonal design baseline: X^H X = (|s1|^2 + |s2|^2) I."""
    A1 = np.array([[1, 0], [0, 1]], dtype=complex)
    B1 = np.array([[1j, 0], [0, -1j]])
    A2 = np.array([[0, 1], [-1, 0]], dtype=complex)
    B2 = np.array([[0, 1j], [1j, 0]])
    return dispersion_from_pairs([A1, A2], [B1, B2],
                                 [(0, 1), (2, 3)], name="alamouti")


def delete_columns(code, cols, name=None):
    """Remove transmit antennas (0-based column indices) from every dispersion
    matrix; T, groups and symbol count are unchanged."""
    cols = sorted(set(int(c) for c in cols))
    if any(c < 0 or c >= code.M for c in cols):
        raise ValueError(f"delete_columns: column index out of range 0..{code.M - 1}")
    if len(cols) >= code.M:
        raise ValueError("delete_columns: cannot delete all columns")
    keep = [m for m in range(code.M) if m not in cols]
    disp = code.dispersion[:, :, keep]
    return _make_code(name or f"{code.name}-del{''.join(str(c + 1) for c in cols)}",
                      disp, code.groups)


def qstbc_6(cols=(3, 7)):
    """6-antenna code: the 8-antenna four-group code with columns 4 and 8
    (1-based) deleted, as used in the paper's simulations."""
    return delete_columns(qstbc_8(), cols, name="4gp-qstbc6")


def code_info(code):
    """Rate (complex symbols per channel use), decoding delay, and the size of
    the largest real-symbol decoding group."""
    return {
        "rate": code.K / code.T,
        "delay": code.T,
        "real_group_size": max(len(g) for g in code.groups),
    }


def by_name(name):
    """Resolve a CLI code name: alamouti, mdc-qstbc4, 4gp-qstbc8, 4gp-qstbc6,
    4gp-sastM (even M), sastM-2gp."""
    n = name.lower()
    if n == "alamouti":
        return alamouti()
    if n == "mdc-qstbc4":
        return mdc_qstbc_4()
    if n == "4gp-qstbc8":
        return qstbc_8()
    if n == "4gp-qstbc6":
        return qstbc_6()
    m = re.fullmatch(r"4gp-sast(\d+)", n)
    if m:
        return sast_4gp_code(int(m.group(1)))
    m = re.fullmatch(r"sast(\d+)-2gp", n)
    if m:
        return sast_code(int(m.group(1)))
    raise ValueError(f"unknown code name {name!r}")
