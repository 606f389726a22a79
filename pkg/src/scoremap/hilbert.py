"""Bijective, locality-preserving Hilbert index for d-dimensional lattices.

encode/decode map between lattice points with d coordinates of m bits
each and integers in [0, 2**(m*d)), walking a Hilbert curve: points
with consecutive indices are always lattice neighbors.  This is the
bridge that flattens an N-parameter generator space onto a 2-D map
while keeping nearby parameter settings nearby on screen.

The construction is the standard Gray-code / axis-exchange one
(Skilling's transpose formulation): O(m*d) bit operations per call,
i.e. logarithmic in the number of addressable cells.  `op_count`
exposes an instrumentation counter (one tick per axis per refinement
level) so tests can assert that cost directly.

Orientation is fixed by the algorithm and pinned by tests: for d=2,
m=1 the curve visits (0,0), (0,1), (1,1), (1,0).
"""

from __future__ import annotations

from typing import Sequence

D_MAX = 16
M_MAX = 31

# Instrumentation: incremented once per (level x axis) step inside
# encode/decode.  Single-threaded test scaffolding, not part of the API
# contract.
_ops = 0


def reset_op_count() -> None:
    global _ops
    _ops = 0


def op_count() -> int:
    return _ops


def _check_orders(m: int, d: int) -> None:
    if not 1 <= d <= D_MAX:
        raise ValueError(f"dimension d must be in [1, {D_MAX}], got {d}")
    if not 1 <= m <= M_MAX:
        raise ValueError(f"order m must be in [1, {M_MAX}], got {m}")


def encode(point: Sequence[int], m: int, d: int) -> int:
    """Hilbert index of a lattice point with d coords in [0, 2**m)."""
    global _ops
    _check_orders(m, d)
    if len(point) != d:
        raise ValueError(f"expected {d} coordinates, got {len(point)}")
    side = 1 << m
    x = []
    for c in point:
        c = int(c)
        if not 0 <= c < side:
            raise ValueError(f"coordinate {c} out of range [0, {side})")
        x.append(c)

    # Fold the axes into Skilling transpose form.
    q = 1 << (m - 1)
    while q > 1:
        p = q - 1
        for i in range(d):
            _ops += 1
            if x[i] & q:
                x[0] ^= p
            else:
                t = (x[0] ^ x[i]) & p
                x[0] ^= t
                x[i] ^= t
        q >>= 1

    # Gray encode.
    for i in range(1, d):
        x[i] ^= x[i - 1]
    t = 0
    q = 1 << (m - 1)
    while q > 1:
        _ops += 1
        if x[d - 1] & q:
            t ^= q - 1
        q >>= 1
    for i in range(d):
        x[i] ^= t

    # Interleave transpose bits, axis 0 most significant at each level.
    h = 0
    for j in range(m - 1, -1, -1):
        for i in range(d):
            h = (h << 1) | ((x[i] >> j) & 1)
    return h


def decode(index: int, m: int, d: int) -> tuple[int, ...]:
    """Lattice point at a Hilbert index; exact inverse of encode."""
    global _ops
    _check_orders(m, d)
    index = int(index)
    if not 0 <= index < (1 << (m * d)):
        raise ValueError(f"index {index} out of range [0, 2**{m * d})")

    # De-interleave into transpose form.
    x = [0] * d
    bit = m * d
    for j in range(m - 1, -1, -1):
        for i in range(d):
            bit -= 1
            x[i] |= ((index >> bit) & 1) << j

    # Gray decode.
    t = x[d - 1] >> 1
    for i in range(d - 1, 0, -1):
        x[i] ^= x[i - 1]
    x[0] ^= t

    # Unfold the transpose back into axes.
    q = 2
    side = 1 << m
    while q != side:
        p = q - 1
        for i in range(d - 1, -1, -1):
            _ops += 1
            if x[i] & q:
                x[0] ^= p
            else:
                t = (x[0] ^ x[i]) & p
                x[0] ^= t
                x[i] ^= t
        q <<= 1
    return tuple(x)


def window_to_params(u: float, v: float, descriptors, m2: int, mN: int) -> list[float]:
    """Map a unit-square position to a parameter vector along Hilbert curves.

    The pipeline: (u, v) locates a 2-D cell at order m2; that cell's 2-D
    Hilbert index, as a fraction of the curve, picks an index on the
    N-dimensional curve at order mN; decoding it gives one lattice cell
    per parameter, read off at its center within [min, max].

    `descriptors` is the ordered list of mapped parameters (anything
    with .min/.max attributes); its length is the dimension d.  Index
    arithmetic is kept within 64 bits, hence the m2*2 <= 62 and
    mN*d <= 62 preconditions.
    """
    d = len(descriptors)
    if d < 1:
        raise ValueError("window_to_params: need at least one descriptor")
    if m2 * 2 > 62:
        raise ValueError(f"m2={m2} too large: m2*2 must be <= 62")
    if mN * d > 62:
        raise ValueError(f"mN={mN} too large for d={d}: mN*d must be <= 62")
    if not (0.0 <= u < 1.0 and 0.0 <= v < 1.0):
        raise ValueError(f"(u, v) must lie in [0, 1) x [0, 1), got ({u}, {v})")

    side2 = 1 << m2
    cu = min(int(u * side2), side2 - 1)
    cv = min(int(v * side2), side2 - 1)
    h = encode((cu, cv), m2, 2)

    # i = floor((h + 0.5) / 4**m2 * 2**(mN*d)), computed exactly in ints.
    cells_nd = 1 << (mN * d)
    i = ((2 * h + 1) * cells_nd) // (2 << (2 * m2))
    coords = decode(i, mN, d)

    cell_n = 1 << mN
    return [
        desc.min + (c + 0.5) * (desc.max - desc.min) / cell_n
        for desc, c in zip(descriptors, coords)
    ]
