import itertools

import numpy as np
import pytest

from stbc_lab import constellation as cn
from stbc_lab import rotation as rt
from stbc_lab.numerics import is_orthogonal, theta4

C4 = cn.make_qam(4)


def test_difference_vectors_4qam_sizes():
    diffs = rt.group_difference_set(C4, 4)
    # per-axis differences {0, +-2*scale}: 3^4 - 1 vectors
    assert diffs.shape == (80, 4)
    assert not np.any(np.all(diffs == 0.0, axis=1))
    # closed under negation
    as_set = {tuple(np.round(d, 9)) for d in diffs}
    assert all(tuple(np.round(-np.asarray(d), 9)) in as_set for d in as_set)


def test_difference_vectors_16qam_sizes():
    c16 = cn.make_qam(16)
    diffs = rt.group_difference_set(c16, 2)
    assert diffs.shape == (7 * 7 - 1, 2)


def test_qstbc_group_difference_set_mixed_axes():
    c8 = cn.make_8qam_rect()
    diffs = rt.qstbc_group_difference_set(c8)
    # real axis has 4 levels (7 diffs), imag axis 2 levels (3 diffs)
    assert diffs.shape == (7 * 7 * 3 * 3 - 1, 4)


def test_product_distance_axis_aligned_is_zero():
    diffs = np.array([[2.0, 0.0, 0.0, 0.0], [0.0, 2.0, 0.0, 0.0]])
    assert rt.product_distance(np.eye(4), diffs).dp_min == 0.0
    P = np.eye(4)[[1, 0, 3, 2]]
    assert rt.product_distance(P, diffs).dp_min == 0.0


def test_product_distance_empty_raises():
    with pytest.raises(ValueError):
        rt.product_distance(np.eye(2), np.zeros((0, 2)))


def test_product_distance_matches_brute_force_over_symbol_pairs():
    """Oracle: enumerate every pair of per-group symbol vectors (p, q) for
    4QAM and minimize the product metric directly."""
    R = rt.default_rotation(4)
    best = np.inf
    for p1, q1, p2, q2 in itertools.product(C4.points, repeat=4):
        d = np.array([p1.real - p2.real, q1.real - q2.real,
                      p1.imag - p2.imag, q1.imag - q2.imag])
        if np.all(d == 0.0):
            continue
        best = min(best, np.prod(np.abs(R @ d)))
    pd = rt.product_distance(R, rt.qstbc_group_difference_set(C4))
    assert abs(pd.dp_min - best) < 1e-12


def test_unrotated_transmission_loses_diversity():
    # encoder rotation Theta alone: the effective beta map is Theta itself
    diffs = rt.qstbc_group_difference_set(C4)
    assert rt.product_distance(theta4(), diffs).dp_min == 0.0
    # optimized rotation restores a positive product distance
    assert rt.product_distance(rt.default_rotation(4), diffs).dp_min > 0.0


def test_combined_rotation_qstbc():
    assert np.allclose(rt.combined_rotation_qstbc(np.eye(4)), theta4())
    R = rt.default_rotation(4)
    C = rt.combined_rotation_qstbc(R)
    assert is_orthogonal(C, 1e-12)
    with pytest.raises(ValueError):
        rt.combined_rotation_qstbc(np.eye(3))
    with pytest.raises(ValueError):
        rt.combined_rotation_qstbc(2.0 * np.eye(4))


def test_combined_rotation_sast_unitary():
    assert np.allclose(rt.combined_rotation_sast(np.array([[1.0]])), [[1.0]])
    R = rt.default_rotation(3)
    U = rt.combined_rotation_sast(R)
    assert np.max(np.abs(U.conj().T @ U - np.eye(3))) < 1e-12


def test_optimizer_trivial_dimension():
    R = rt.optimize_rotation(1, C4, budget=1)
    assert np.array_equal(R, [[1.0]])


def test_optimizer_zero_budget():
    with pytest.raises(ValueError):
        rt.optimize_rotation(4, C4, budget=0)


def test_optimizer_monotone_in_budget():
    diffs = rt.group_difference_set(C4, 2)
    dp2 = rt.product_distance(rt.optimize_rotation(2, C4, budget=2, seed=5),
                              diffs).dp_min
    dp4 = rt.product_distance(rt.optimize_rotation(2, C4, budget=4, seed=5),
                              diffs).dp_min
    assert dp4 >= dp2 - 1e-15


def test_optimizer_self_consistency_m4():
    """Returned dp_min is positive and within 10% of the best over several
    independent seeds."""
    diffs = rt.group_difference_set(C4, 4)
    runs = [rt.product_distance(rt.optimize_rotation(4, C4, budget=1, seed=s),
                                diffs).dp_min for s in range(10)]
    best = max(runs)
    shipped = rt.product_distance(rt.default_rotation(4), diffs).dp_min
    assert shipped > 0.0
    assert shipped >= 0.9 * best


@pytest.mark.parametrize("m", [2, 3, 4])
def test_default_rotations_orthogonal_with_positive_dp(m):
    R = rt.default_rotation(m)
    assert is_orthogonal(R, 1e-12)
    assert rt.product_distance(R, rt.group_difference_set(C4, m)).dp_min > 0.0


def test_default_rotation_unknown_size():
    with pytest.raises(ValueError, match="no shipped default"):
        rt.default_rotation(5)


def test_rotation_file_roundtrip(tmp_path):
    R = rt.default_rotation(3)
    path = tmp_path / "r3.txt"
    rt.save_rotation(R, path)
    back = rt.load_rotation(path)
    assert np.allclose(back, R, atol=1e-15)


def test_rotation_file_rejects_garbage(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("2\n1 0\n0 2\n")          # not orthogonal
    with pytest.raises(ValueError, match="not orthogonal"):
        rt.load_rotation(path)
    path.write_text("3\n1 0 0\n")             # wrong count
    with pytest.raises(ValueError, match="expected"):
        rt.load_rotation(path)
    path.write_text("")
    with pytest.raises(ValueError, match="empty"):
        rt.load_rotation(path)
