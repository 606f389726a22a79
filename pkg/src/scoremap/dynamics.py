"""Escape-time computation for the quadratic recurrence z' = z*z + c.

Scalar orbits feed the Julia orbit generator; vectorized grids feed the
Julia plot generator.  Both paths evaluate the recurrence with the same
explicit real arithmetic (zr*zr - zi*zi + cr, 2*zr*zi + ci) and the same
squared-modulus bailout test, so a grid cell is bit-identical to the
scalar escape_time at that cell's center.

Conventions (the escape-time literature varies; these are pinned here
and relied on by tests):

* bailout default 2.0 — any |z| > 2 provably diverges for this family;
* ``iterations`` counts recurrence applications performed when |z|
  first exceeds the bailout; a starting point already outside the
  bailout escapes with iterations = 0;
* pixel (i, j) samples the center of its cell, row j = 0 at im_min.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_BAILOUT = 2.0

# Raw orbits stop before squaring anything bigger than this, so every
# stored value stays finite in double precision.
ORBIT_ABORT = 1e150

Region = tuple[float, float, float, float]  # (re_min, re_max, im_min, im_max)


@dataclass(frozen=True)
class EscapeResult:
    escaped: bool
    iterations: int


@dataclass(frozen=True)
class EscapeGrid:
    """Escape-time results over a rectangular grid of the complex plane.

    ``escaped`` and ``iterations`` are (height, width) arrays; cell
    (i, j) is column i, row j, with row 0 at im_min.
    """

    width: int
    height: int
    region: Region
    max_iter: int
    bailout: float
    escaped: np.ndarray
    iterations: np.ndarray

    def cell(self, i: int, j: int) -> EscapeResult:
        return EscapeResult(bool(self.escaped[j, i]), int(self.iterations[j, i]))


def iterate_orbit(z0: complex, c: complex, n: int) -> list[complex]:
    """First n+1 orbit values z0, z1, ..., zn of z' = z*z + c.

    Truncated early if |z| exceeds ORBIT_ABORT, to avoid overflowing
    the next squaring.
    """
    if n < 0:
        raise ValueError("iterate_orbit: n must be >= 0")
    zr, zi = z0.real, z0.imag
    orbit = [complex(zr, zi)]
    for _ in range(n):
        if zr * zr + zi * zi > ORBIT_ABORT * ORBIT_ABORT:
            break
        zr, zi = zr * zr - zi * zi + c.real, 2.0 * zr * zi + c.imag
        orbit.append(complex(zr, zi))
    return orbit


def escape_time(z0: complex, c: complex, max_iter: int, bailout: float = DEFAULT_BAILOUT) -> EscapeResult:
    """Smallest k <= max_iter with |z_k| > bailout, or bounded if none."""
    if max_iter < 1:
        raise ValueError("escape_time: max_iter must be >= 1")
    if bailout <= 0:
        raise ValueError("escape_time: bailout must be > 0")
    b2 = bailout * bailout
    zr, zi = z0.real, z0.imag
    if zr * zr + zi * zi > b2:
        return EscapeResult(True, 0)
    cr, ci = c.real, c.imag
    for k in range(1, max_iter + 1):
        zr, zi = zr * zr - zi * zi + cr, 2.0 * zr * zi + ci
        if zr * zr + zi * zi > b2:
            return EscapeResult(True, k)
    return EscapeResult(False, max_iter)


def _check_region(region: Region) -> None:
    re_min, re_max, im_min, im_max = region
    if not (re_min < re_max and im_min < im_max):
        raise ValueError(f"degenerate region: {region}")


def _pixel_centers(region: Region, width: int, height: int) -> tuple[np.ndarray, np.ndarray]:
    re_min, re_max, im_min, im_max = region
    d_re = (re_max - re_min) / width
    d_im = (im_max - im_min) / height
    res = re_min + (np.arange(width) + 0.5) * d_re
    ims = im_min + (np.arange(height) + 0.5) * d_im
    return np.broadcast_to(res, (height, width)), np.broadcast_to(ims[:, None], (height, width))


def _escape_grid(zr0, zi0, cr, ci, max_iter: int, bailout: float) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized escape loop; inputs broadcast to a common shape."""
    b2 = bailout * bailout
    zr = np.array(np.broadcast_to(zr0, np.broadcast(zr0, zi0, cr, ci).shape), dtype=np.float64)
    zi = np.array(np.broadcast_to(zi0, zr.shape), dtype=np.float64)
    cr = np.broadcast_to(np.asarray(cr, dtype=np.float64), zr.shape)
    ci = np.broadcast_to(np.asarray(ci, dtype=np.float64), zr.shape)
    iterations = np.full(zr.shape, max_iter, dtype=np.int64)
    escaped = zr * zr + zi * zi > b2
    iterations[escaped] = 0
    active = ~escaped
    for k in range(1, max_iter + 1):
        if not active.any():
            break
        azr, azi = zr[active], zi[active]
        nzr = azr * azr - azi * azi + cr[active]
        nzi = 2.0 * azr * azi + ci[active]
        zr[active] = nzr
        zi[active] = nzi
        now = np.zeros_like(active)
        now[active] = nzr * nzr + nzi * nzi > b2
        iterations[now] = k
        escaped |= now
        active &= ~now
    return escaped, iterations


def mandelbrot_grid(
    region: Region, width: int, height: int, max_iter: int, bailout: float = DEFAULT_BAILOUT
) -> EscapeGrid:
    """Escape grid with z0 = 0 and c at each pixel center."""
    if width < 1 or height < 1:
        raise ValueError("grid dimensions must be >= 1")
    _check_region(region)
    cr, ci = _pixel_centers(region, width, height)
    escaped, iterations = _escape_grid(np.float64(0.0), np.float64(0.0), cr, ci, max_iter, bailout)
    return EscapeGrid(width, height, region, max_iter, bailout, escaped, iterations)


def julia_grid(
    c: complex, region: Region, width: int, height: int, max_iter: int, bailout: float = DEFAULT_BAILOUT
) -> EscapeGrid:
    """Escape grid with fixed c and z0 at each pixel center."""
    if width < 1 or height < 1:
        raise ValueError("grid dimensions must be >= 1")
    _check_region(region)
    zr0, zi0 = _pixel_centers(region, width, height)
    escaped, iterations = _escape_grid(zr0, zi0, np.float64(c.real), np.float64(c.imag), max_iter, bailout)
    return EscapeGrid(width, height, region, max_iter, bailout, escaped, iterations)


def to_pgm(grid: EscapeGrid) -> bytes:
    """8-bit binary PGM: min(iterations, 255) where escaped, 0 where bounded."""
    levels = np.where(grid.escaped, np.minimum(grid.iterations, 255), 0).astype(np.uint8)
    header = f"P5\n{grid.width} {grid.height}\n255\n".encode("ascii")
    return header + levels.tobytes()


def to_jsonable(grid: EscapeGrid) -> dict:
    """Plain-dict form of the grid, for JSON test fixtures."""
    return {
        "width": grid.width,
        "height": grid.height,
        "region": list(grid.region),
        "max_iter": grid.max_iter,
        "bailout": grid.bailout,
        "escaped": grid.escaped.astype(int).tolist(),
        "iterations": grid.iterations.tolist(),
    }
