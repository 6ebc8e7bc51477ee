"""Tour of the exact discrete model.

The driving walk Z determines the driven walk X: the reflection
identity recovers |X| and the parity of the last running-minimum time
of Z recovers the sign.  Everything is exact integer arithmetic, so we
can check the identities on every path of a given length.
"""

import numpy as np

from splitnoise.tanaka import (
    WalkPath,
    all_increment_patterns,
    identities_hold,
    local_time,
    parity_signs,
    positions,
    recover_sign_parity,
    x_to_z,
    z_to_x,
    z_to_x_increments,
)

print("A single path, by hand")
print("----------------------")
z = WalkPath.from_string("--+-++")
x = z_to_x(z)
print(f"Z increments : {z.to_string()}")
print(f"Z positions  : {z.positions}")
print(f"X positions  : {x.positions}")
print(f"local time   : {local_time(x)}")
print(f"Z + running max of -Z : {z.positions + np.maximum.accumulate(-z.positions)}")
print(f"|X + 1/2| - 1/2       : {np.abs(2 * x.positions + 1) // 2}")
print(f"round trip x_to_z(z_to_x(Z)) == Z : {x_to_z(x) == z}")
print()

print("Sign recovery from Z alone")
print("--------------------------")
for n in range(len(z) + 1):
    s = recover_sign_parity(z, n)
    print(f"  n={n}: parity sign {s:+d}   X_n = {x.positions[n]:+d}")
print()

print("Exhaustive check, all paths of length 12")
print("----------------------------------------")
dx = all_increment_patterns(12)
print(f"paths checked : {dx.shape[0]}")
print(f"identities    : {'all hold' if identities_hold(dx).all() else 'FAILED'}")

dz = all_increment_patterns(14)
x_pos = positions(z_to_x_increments(dz))
ok = True
for n in range(15):
    got = parity_signs(positions(dz)[:, : n + 1])
    ok &= bool(np.array_equal(got, np.where(x_pos[:, n] >= 0, 1, -1)))
print(f"parity rule   : {'matches sgn(X_n) for all 2^14 paths, n <= 14' if ok else 'FAILED'}")
