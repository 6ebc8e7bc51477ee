"""Exact discrete Tanaka model on the integer lattice.

A walk X with +-1 steps from 0 drives a walk Z through
Z_{k+1} - Z_k = sgn(X_k) (X_{k+1} - X_k) with sgn(a) = +1 for a >= 0,
-1 for a < 0.  Unlike the continuous-time analogue, Z determines X: the
reflection identity |X_n + 1/2| - 1/2 = Z_n + max_{k<=n}(-Z_k) recovers
|X| and the parity of the last running-minimum time of Z recovers the
sign.  Everything here is exact integer arithmetic on (optionally
batched) increment arrays, so the identities can be checked exhaustively.
"""

from __future__ import annotations

import numpy as np

STEP_CHARS = {1: "+", -1: "-"}


def sgn(a: np.ndarray | int) -> np.ndarray | int:
    """Sign with sgn(0) = +1 (the convention the whole model relies on)."""
    if np.isscalar(a):
        return 1 if a >= 0 else -1
    return np.where(np.asarray(a) >= 0, 1, -1)


class WalkPath:
    """A +-1-increment lattice path from 0; thin wrapper over an int array."""

    __slots__ = ("increments",)

    def __init__(self, increments):
        inc = np.asarray(increments, dtype=np.int64)
        if inc.size and not np.all(np.abs(inc) == 1):
            raise ValueError("increments must be +-1")
        self.increments = inc

    @classmethod
    def from_positions(cls, positions) -> "WalkPath":
        pos = np.asarray(positions, dtype=np.int64)
        if pos.size == 0 or pos[0] != 0:
            raise ValueError("positions must start at 0")
        return cls(np.diff(pos))

    @classmethod
    def from_string(cls, text: str) -> "WalkPath":
        """Parse a '+'/'-' step string (unicode minus accepted)."""
        table = {"+": 1, "-": -1, "−": -1}
        return cls([table[c] for c in text.strip()])

    def to_string(self) -> str:
        return "".join(STEP_CHARS[int(s)] for s in self.increments)

    @property
    def positions(self) -> np.ndarray:
        return np.concatenate(([0], np.cumsum(self.increments)))

    def __len__(self) -> int:
        return int(self.increments.size)

    def __eq__(self, other) -> bool:
        return isinstance(other, WalkPath) and np.array_equal(
            self.increments, other.increments
        )

    def __repr__(self) -> str:
        return f"WalkPath({self.to_string()!r})"


# -- array core (last axis = time; leading axes = batch) -----------------

def x_to_z_increments(dx: np.ndarray) -> np.ndarray:
    """Drive increments dZ_k = sgn(X_k) dX_k from walk increments."""
    dx = np.asarray(dx, dtype=np.int64)
    dz = np.empty_like(dx)
    x = np.zeros(dx.shape[:-1], dtype=np.int64)
    for k in range(dx.shape[-1]):
        dz[..., k] = sgn(x) * dx[..., k]
        x = x + dx[..., k]
    return dz

def z_to_x_increments(dz: np.ndarray) -> np.ndarray:
    """The unique walk with dX_k = sgn(X_k) dZ_k; inverse of x_to_z."""
    dz = np.asarray(dz, dtype=np.int64)
    dx = np.empty_like(dz)
    x = np.zeros(dz.shape[:-1], dtype=np.int64)
    for k in range(dz.shape[-1]):
        dx[..., k] = sgn(x) * dz[..., k]
        x = x + dx[..., k]
    return dx

def positions(increments: np.ndarray) -> np.ndarray:
    """Prepend the starting 0 and cumulate increments along the last axis."""
    inc = np.asarray(increments, dtype=np.int64)
    zeros = np.zeros(inc.shape[:-1] + (1,), dtype=np.int64)
    return np.concatenate([zeros, np.cumsum(inc, axis=-1)], axis=-1)

def local_time_positions(pos: np.ndarray) -> np.ndarray:
    """L_n = #{k < n : X_k and X_{k+1} both in {0,-1}}, L_0 = 0.

    Counts traversals/touches of the bond between 0 and -1, which is the
    unique reading under which the reflection identity holds pathwise.
    """
    pos = np.asarray(pos, dtype=np.int64)
    near = (pos == 0) | (pos == -1)
    hits = (near[..., :-1] & near[..., 1:]).astype(np.int64)
    zeros = np.zeros(pos.shape[:-1] + (1,), dtype=np.int64)
    return np.concatenate([zeros, np.cumsum(hits, axis=-1)], axis=-1)

def running_max_negated(pos: np.ndarray) -> np.ndarray:
    """max_{k<=n}(-Z_k) along the last axis."""
    return np.maximum.accumulate(-np.asarray(pos, dtype=np.int64), axis=-1)

def folded_positions(pos: np.ndarray) -> np.ndarray:
    """|X_n + 1/2| - 1/2 in exact integers, via doubled quantities."""
    pos = np.asarray(pos, dtype=np.int64)
    return (np.abs(2 * pos + 1) - 1) // 2

def identities_hold(dx: np.ndarray) -> np.ndarray:
    """Check the two pathwise reflection identities at every time.

    For each path: folded X equals both Z_n + L_n and
    Z_n + max_{k<=n}(-Z_k), for all n up to the path length.
    Returns a boolean per leading-axis entry (scalar True for 1-D input).
    """
    dx = np.asarray(dx, dtype=np.int64)
    x_pos = positions(dx)
    z_pos = positions(x_to_z_increments(dx))
    lhs2 = 2 * folded_positions(x_pos)
    ok_local = np.all(lhs2 == 2 * (z_pos + local_time_positions(x_pos)), axis=-1)
    ok_reflect = np.all(lhs2 == 2 * (z_pos + running_max_negated(z_pos)), axis=-1)
    return ok_local & ok_reflect

def last_min_index(z_pos: np.ndarray) -> np.ndarray:
    """r = max{k : Z_k = min_{j<=k} Z_j} along the last axis."""
    z_pos = np.asarray(z_pos, dtype=np.int64)
    at_min = z_pos == np.minimum.accumulate(z_pos, axis=-1)
    n = z_pos.shape[-1]
    idx = np.arange(n)
    return np.max(np.where(at_min, idx, -1), axis=-1)

def parity_signs(z_pos: np.ndarray) -> np.ndarray:
    """+1 if the last running-minimum time of Z is even, else -1.

    Recovers sgn(X_n + 1/2) for the walk X reconstructed from Z.
    """
    r = last_min_index(z_pos)
    return np.where(r % 2 == 0, 1, -1)


# -- WalkPath-level operations -------------------------------------------

def x_to_z(x: WalkPath) -> WalkPath:
    return WalkPath(x_to_z_increments(x.increments))

def z_to_x(z: WalkPath) -> WalkPath:
    return WalkPath(z_to_x_increments(z.increments))

def local_time(x: WalkPath) -> np.ndarray:
    """Local-time sequence L_0..L_n of the walk at the {0,-1} bond."""
    return local_time_positions(x.positions)

def check_identities(x: WalkPath) -> bool:
    """True iff both pathwise identities hold at every time along x."""
    if len(x) == 0:
        return True
    return bool(identities_hold(x.increments))

def recover_sign_parity(z: WalkPath, n: int) -> int:
    """Sign of X_n + 1/2 read off from Z alone, X = z_to_x(Z).

    Finds the last time r <= n with Z_r = min_{j<=r} Z_j and returns +1
    for even r, -1 for odd r.
    """
    if not 0 <= n <= len(z):
        raise ValueError(f"index {n} outside path of length {len(z)}")
    return int(parity_signs(z.positions[: n + 1]))


def all_increment_patterns(n: int) -> np.ndarray:
    """All 2**n +-1 increment rows, row i encoding bits of i (bit k set -> step k is -1)."""
    idx = np.arange(1 << n, dtype=np.uint32)
    bits = (idx[:, None] >> np.arange(n, dtype=np.uint32)[None, :]) & 1
    return (1 - 2 * bits.astype(np.int64))
