import numpy as np
import pytest

from splitnoise import tanaka
from splitnoise.tanaka import (
    WalkPath,
    all_increment_patterns,
    check_identities,
    identities_hold,
    local_time,
    parity_signs,
    positions,
    recover_sign_parity,
    x_to_z,
    x_to_z_increments,
    z_to_x,
    z_to_x_increments,
)


def test_walkpath_string_roundtrip():
    w = WalkPath.from_string("+-+")
    assert np.array_equal(w.increments, [1, -1, 1])
    assert w.to_string() == "+-+"
    assert np.array_equal(w.positions, [0, 1, 0, 1])
    assert WalkPath.from_string("+−") == WalkPath.from_string("+-")
    with pytest.raises(ValueError):
        WalkPath([1, 2])


def test_x_to_z_examples():
    assert x_to_z(WalkPath([1, 1])) == WalkPath([1, 1])
    # sgn(X_0)=+1 gives -1; sgn(X_1)=sgn(-1)=-1 times +1 gives -1
    assert x_to_z(WalkPath([-1, 1])) == WalkPath([-1, -1])
    assert x_to_z(WalkPath([])) == WalkPath([])


def test_z_to_x_examples():
    x = z_to_x(WalkPath([-1, -1, 1]))
    assert np.array_equal(x.positions, [0, -1, 0, 1])
    assert np.array_equal(z_to_x(WalkPath([1, 1])).positions, [0, 1, 2])


def test_roundtrip_exhaustive_length_12():
    dx = all_increment_patterns(12)
    dz = x_to_z_increments(dx)
    assert np.array_equal(z_to_x_increments(dz), dx)
    assert np.array_equal(x_to_z_increments(z_to_x_increments(dx)), dx)


def test_transform_is_bijection():
    # measure preservation: the image of all patterns is all patterns
    dz = x_to_z_increments(all_increment_patterns(10))
    masks = ((dz < 0) << np.arange(10)).sum(axis=1)
    assert np.unique(masks).size == 1 << 10


def test_local_time_examples():
    assert np.array_equal(local_time(WalkPath([-1, 1])), [0, 1, 2])
    assert np.array_equal(local_time(WalkPath([1, 1])), [0, 0, 0])
    # pair {1,0} is not inside {0,-1}: no increment
    assert np.array_equal(local_time(WalkPath([1, -1])), [0, 0, 0])


def test_local_time_is_counting_process():
    dx = all_increment_patterns(10)
    lt = tanaka.local_time_positions(positions(dx))
    steps = np.diff(lt, axis=1)
    assert lt[:, 0].max() == 0
    assert steps.min() >= 0 and steps.max() <= 1


def test_identities_hand_example():
    x = WalkPath([-1, 1, 1])  # positions 0,-1,0,1; Z = 0,-1,-2,-1
    z = x_to_z(x)
    assert np.array_equal(z.positions, [0, -1, -2, -1])
    assert abs(1 + 0.5) - 0.5 == z.positions[3] + 2
    assert check_identities(x)


def test_identities_exhaustive_length_12():
    assert bool(identities_hold(all_increment_patterns(12)).all())


def test_identities_empty_path():
    assert check_identities(WalkPath([]))


def test_parity_rule_examples():
    z = WalkPath([-1, -1, 1])
    assert recover_sign_parity(z, 3) == 1  # r = 2, X_3 = 1
    assert recover_sign_parity(WalkPath([]), 0) == 1
    with pytest.raises(ValueError):
        recover_sign_parity(z, 4)


def test_parity_rule_exhaustive_length_14():
    dz = all_increment_patterns(14)
    z_pos = positions(dz)
    x_pos = positions(z_to_x_increments(dz))
    for n in range(15):
        got = parity_signs(z_pos[:, : n + 1])
        want = np.where(x_pos[:, n] >= 0, 1, -1)
        assert np.array_equal(got, want), f"parity mismatch at n={n}"


def test_sgn_convention():
    assert tanaka.sgn(0) == 1
    assert tanaka.sgn(-1) == -1
    assert np.array_equal(tanaka.sgn(np.array([-2, 0, 3])), [-1, 1, 1])
