import numpy as np
import pytest

from scoremap.dynamics import (
    EscapeResult,
    escape_time,
    iterate_orbit,
    julia_grid,
    mandelbrot_grid,
    to_pgm,
)


def brute_escape(z0: complex, c: complex, max_iter: int, bailout: float = 2.0):
    """Independent oracle: plain Python complex arithmetic and abs()."""
    z = z0
    if abs(z) > bailout:
        return True, 0
    for k in range(1, max_iter + 1):
        z = z * z + c
        if abs(z) > bailout:
            return True, k
    return False, max_iter


class TestOrbit:
    def test_fixed_point_origin(self):
        assert iterate_orbit(0j, 0j, 3) == [0j, 0j, 0j, 0j]

    def test_period_two_cycle(self):
        # Hand iteration: 0, -1, 0, -1, 0.
        orbit = iterate_orbit(0j, complex(-1, 0), 4)
        assert orbit == [0j, complex(-1, 0), 0j, complex(-1, 0), 0j]

    def test_fixed_point_one(self):
        assert iterate_orbit(complex(1, 0), 0j, 3) == [complex(1, 0)] * 4

    def test_negative_n_rejected(self):
        with pytest.raises(ValueError):
            iterate_orbit(0j, 0j, -1)

    def test_early_abort_keeps_values_finite(self):
        orbit = iterate_orbit(complex(1e140, 0), complex(0, 0), 10)
        assert len(orbit) < 11
        assert all(np.isfinite(z.real) and np.isfinite(z.imag) for z in orbit)


class TestEscapeTime:
    def test_origin_bounded(self):
        assert escape_time(0j, 0j, 100, 2.0) == EscapeResult(False, 100)

    def test_c_one_escapes_at_three(self):
        # Hand iteration: 0, 1, 2, 5; |5| > 2 after the third application.
        assert escape_time(0j, complex(1, 0), 100, 2.0) == EscapeResult(True, 3)

    def test_c_i_bounded(self):
        # Hand iteration enters the cycle -1+i, -i with modulus <= sqrt(2).
        assert escape_time(0j, complex(0, 1), 1000, 2.0).escaped is False

    def test_far_start_escapes_immediately(self):
        assert escape_time(complex(3, 0), 0j, 10, 2.0) == EscapeResult(True, 0)

    def test_matches_brute_oracle(self, rng):
        for _ in range(200):
            c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            z0 = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            got = escape_time(z0, c, 64, 2.0)
            want = brute_escape(z0, c, 64, 2.0)
            assert (got.escaped, got.iterations) == want

    def test_escape_index_minimality(self, rng):
        for _ in range(100):
            c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            res = escape_time(0j, c, 128, 2.0)
            if not res.escaped:
                continue
            orbit = iterate_orbit(0j, c, res.iterations)
            k = res.iterations
            if k > 0:
                prev = orbit[k - 1]
                assert prev.real**2 + prev.imag**2 <= 4.0
            last = orbit[k]
            assert last.real**2 + last.imag**2 > 4.0

    def test_monotone_refinement(self, rng):
        for _ in range(100):
            c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            lo = escape_time(0j, c, 20, 2.0)
            hi = escape_time(0j, c, 200, 2.0)
            if lo.escaped:
                assert hi.escaped and hi.iterations == lo.iterations

    def test_conjugation_symmetry(self, rng):
        for _ in range(100):
            c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            assert escape_time(0j, c, 64) == escape_time(0j, c.conjugate(), 64)


class TestMandelbrotGrid:
    def test_single_cell_origin(self):
        g = mandelbrot_grid((-1.0, 1.0, -1.0, 1.0), 1, 1, 100)
        assert g.cell(0, 0) == EscapeResult(False, 100)

    def test_three_cells_on_real_axis(self):
        # Centers -1.75, -0.75, 0.25; brute-force oracle says all bounded.
        g = mandelbrot_grid((-2.25, 0.75, -0.1, 0.1), 3, 1, 1000)
        centers = [-1.75, -0.75, 0.25]
        for i, cr in enumerate(centers):
            want = brute_escape(0j, complex(cr, 0.0), 1000)
            assert want[0] is False
            assert g.cell(i, 0).escaped is False

    def test_mirror_symmetry_about_real_axis(self):
        g = mandelbrot_grid((-2.0, 1.0, -1.5, 1.5), 32, 24, 64)
        assert np.array_equal(g.escaped, g.escaped[::-1, :])
        assert np.array_equal(g.iterations, g.iterations[::-1, :])

    def test_matches_scalar_per_cell(self):
        g = mandelbrot_grid((-2.0, 1.0, -1.25, 1.25), 16, 12, 50)
        re_min, re_max, im_min, im_max = g.region
        for j in range(g.height):
            for i in range(g.width):
                c = complex(
                    re_min + (i + 0.5) * (re_max - re_min) / g.width,
                    im_min + (j + 0.5) * (im_max - im_min) / g.height,
                )
                assert g.cell(i, j) == escape_time(0j, c, 50)

    def test_degenerate_region(self):
        with pytest.raises(ValueError):
            mandelbrot_grid((1.0, 1.0, -1.0, 1.0), 4, 4, 10)

    def test_bad_dims(self):
        with pytest.raises(ValueError):
            mandelbrot_grid((-1.0, 1.0, -1.0, 1.0), 0, 4, 10)


class TestJuliaGrid:
    def test_single_cell_c_zero(self):
        g = julia_grid(0j, (-1.0, 1.0, -1.0, 1.0), 1, 1, 100)
        assert g.cell(0, 0).escaped is False

    def test_far_pixel_iterations_zero(self):
        g = julia_grid(0j, (2.5, 4.5, -1.0, 1.0), 1, 1, 100)
        assert g.cell(0, 0) == EscapeResult(True, 0)

    def test_origin_symmetry(self, rng):
        for _ in range(3):
            c = complex(rng.uniform(-1.5, 0.5), rng.uniform(-1.0, 1.0))
            g = julia_grid(c, (-2.0, 2.0, -2.0, 2.0), 32, 32, 64)
            assert np.array_equal(g.escaped, g.escaped[::-1, ::-1])
            assert np.array_equal(g.iterations, g.iterations[::-1, ::-1])

    def test_matches_scalar_per_cell(self):
        c = complex(-0.8, 0.156)
        g = julia_grid(c, (-2.0, 2.0, -2.0, 2.0), 16, 16, 64)
        for j in range(16):
            for i in range(16):
                z0 = complex(-2.0 + (i + 0.5) * 0.25, -2.0 + (j + 0.5) * 0.25)
                assert g.cell(i, j) == escape_time(z0, c, 64)


class TestPgm:
    def test_header_and_size(self):
        g = mandelbrot_grid((-2.0, 1.0, -1.0, 1.0), 8, 4, 30)
        pgm = to_pgm(g)
        assert pgm.startswith(b"P5\n8 4\n255\n")
        assert len(pgm) == len(b"P5\n8 4\n255\n") + 32

    def test_bounded_is_black(self):
        g = julia_grid(0j, (-0.5, 0.5, -0.5, 0.5), 2, 2, 30)
        body = to_pgm(g)[len(b"P5\n2 2\n255\n"):]
        assert set(body) == {0}


class TestJsonForm:
    def test_grid_roundtrips_through_json(self):
        import json

        from scoremap.dynamics import to_jsonable

        g = mandelbrot_grid((-2.0, 1.0, -1.0, 1.0), 4, 3, 25)
        d = json.loads(json.dumps(to_jsonable(g)))
        assert d["width"] == 4 and d["height"] == 3
        assert d["iterations"][1][2] == int(g.iterations[1, 2])
        assert d["escaped"][0][0] == int(g.escaped[0, 0])
