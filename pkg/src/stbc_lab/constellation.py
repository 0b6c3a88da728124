"""Finite complex signal sets with unit average power and bit labeling.

Supported sets (CLI names): 4qam, 16qam, 8qam-r, 8qam-s. QAM sets use Gray
labeling on each axis; the 8-point sets use the best labeling available for
their geometry.
"""

from dataclasses import dataclass, field

import numpy as np


def _gray_code(n_bits):
    """Gray sequence of length 2**n_bits as integer codewords."""
    return [i ^ (i >> 1) for i in range(1 << n_bits)]


def _bits_of(value, n_bits):
    return tuple((value >> (n_bits - 1 - k)) & 1 for k in range(n_bits))


@dataclass(frozen=True)
class Constellation:
    """Unit-average-power signal set with a bijective bit labeling.

    points[i] carries the bit tuple labels[i]. `scale` is the factor applied
    to the documented integer-grid coordinates (1.0 for non-grid sets).
    """
    name: str
    points: np.ndarray            # (Q,) complex
    labels: tuple                 # Q bit tuples
    bits_per_symbol: int
    scale: float = 1.0
    _label_to_index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_label_to_index",
                           {lab: i for i, lab in enumerate(self.labels)})

    @property
    def order(self):
        return len(self.points)

    @property
    def real_levels(self):
        return np.unique(np.round(self.points.real, 12))

    @property
    def imag_levels(self):
        return np.unique(np.round(self.points.imag, 12))

    def is_product(self):
        """True when the point set is the full Cartesian product of its real
        and imaginary level sets (needed for real/imag-separated detection)."""
        return len(self.real_levels) * len(self.imag_levels) == self.order

    def min_distance(self):
        d = np.abs(self.points[:, None] - self.points[None, :])
        return float(np.min(d[d > 0]))


def make_qam(order):
    """Square QAM (order 4 or 16) with Gray labeling, unit average power.

    Underlying coordinates are the odd-integer grid {+-1, +-3, ...}; the
    normalization is 1/sqrt(2) for 4QAM and 1/sqrt(10) for 16QAM.
    """
    if order not in (4, 16):
        raise ValueError(f"make_qam: unsupported order {order}")
    side = int(np.sqrt(order))
    bits_axis = side.bit_length() - 1
    levels = np.arange(-(side - 1), side, 2)          # odd integers
    gray = _gray_code(bits_axis)
    scale = 1.0 / np.sqrt(np.mean(levels ** 2) * 2)
    points, labels = [], []
    for gi, li in enumerate(levels):
        for gq, lq in enumerate(levels):
            points.append((li + 1j * lq) * scale)
            labels.append(_bits_of(gray[gi], bits_axis) + _bits_of(gray[gq], bits_axis))
    return Constellation(f"{order}qam", np.array(points), tuple(labels),
                         2 * bits_axis, scale)


def make_8qam_rect():
    """Rectangular 8QAM with points {+-1 +- j, +-3 +- j}, scaled by 1/sqrt(6).

    Product of a 4-level Gray-coded real axis and a 2-level imaginary axis,
    so the labeling is Gray.
    """
    re_levels = np.array([-3, -1, 1, 3])
    im_levels = np.array([-1, 1])
    gray = _gray_code(2)
    scale = 1.0 / np.sqrt(6.0)
    points, labels = [], []
    for gi, li in enumerate(re_levels):
        for gq, lq in enumerate(im_levels):
            points.append((li + 1j * lq) * scale)
            labels.append(_bits_of(gray[gi], 2) + (gq,))
    return Constellation("8qam-r", np.array(points), tuple(labels), 3, scale)


# Max-min-distance 8-point set: centre point, hexagonal ring of 6 at radius d,
# plus one second-shell point of the triangular lattice at radius d*sqrt(3).
# Minimum distance d; average power (6 d^2 + 3 d^2)/8 = 1 gives d = sqrt(8/9),
# so d_min^2 = 8/9 > 2/3 (the rectangular 8QAM value).
_8QAM_S_D = np.sqrt(8.0 / 9.0)
_8QAM_S_POINTS = _8QAM_S_D * np.array(
    [0.0]
    + [np.exp(1j * k * np.pi / 3) for k in range(6)]
    + [1.0 + np.exp(1j * np.pi / 3)]
)

# Quasi-Gray labels picked by exhaustive search over the 8! assignments,
# minimizing total Hamming distance across minimum-distance neighbor pairs.
_8QAM_S_LABELS = (
    (0, 0, 0),  # centre
    (0, 0, 1),  # d * exp(0)
    (0, 1, 1),  # d * exp(j pi/3)
    (0, 1, 0),  # d * exp(2j pi/3)
    (1, 1, 0),  # d * exp(j pi)
    (1, 0, 0),  # d * exp(4j pi/3)
    (1, 0, 1),  # d * exp(5j pi/3)
    (1, 1, 1),  # outer point
)


def make_8qam_s():
    """8-point constellation with the best minimum Euclidean distance at unit
    average power (hexagonal packing); coordinates documented above."""
    return Constellation("8qam-s", _8QAM_S_POINTS.copy(), _8QAM_S_LABELS, 3)


_FACTORIES = {
    "4qam": lambda: make_qam(4),
    "16qam": lambda: make_qam(16),
    "8qam-r": make_8qam_rect,
    "8qam-s": make_8qam_s,
}


def by_name(name):
    try:
        return _FACTORIES[name.lower()]()
    except KeyError:
        raise ValueError(f"unknown constellation {name!r}; "
                         f"choose from {sorted(_FACTORIES)}") from None


def bits_to_symbols(bits, c):
    """Map a flat bit array to constellation points, bits_per_symbol at a time."""
    bits = np.asarray(bits, dtype=int).reshape(-1)
    b = c.bits_per_symbol
    if bits.size % b:
        raise ValueError(f"bit count {bits.size} not divisible by {b}")
    groups = bits.reshape(-1, b)
    idx = np.array([c._label_to_index[tuple(g)] for g in groups], dtype=int)
    return c.points[idx]


def symbols_to_bits(symbols, c):
    """Inverse of bits_to_symbols: nearest constellation point, then its label."""
    symbols = np.asarray(symbols).reshape(-1)
    idx = nearest_index(symbols, c)
    if len(idx) == 0:
        return np.zeros(0, dtype=int)
    return np.concatenate([np.array(c.labels[i], dtype=int) for i in idx])


def nearest_index(symbols, c):
    symbols = np.asarray(symbols)
    return np.argmin(np.abs(symbols[..., None] - c.points), axis=-1)
