import numpy as np
import pytest
from hypothesis import given, strategies as st

from kdvreservoir.grid import SpatialGrid
from kdvreservoir.waves import (
    CnoidalParams,
    SolitonParams,
    WindowParams,
    build_initial_condition,
    cnoidal_profile,
    cnoidal_velocity,
    soliton_profile,
    soliton_velocity,
    super_gaussian,
)

GRID = SpatialGrid.centered(80.0, 512)


class TestSoliton:
    def test_paper_parameters_give_speed_4_3(self):
        assert soliton_velocity(1.0, 1.0, 0.5, 1.0 / 3.0) == pytest.approx(4.0 / 3.0)
        assert SolitonParams().velocity == pytest.approx(4.0 / 3.0)

    def test_peak_height_at_center(self):
        params = SolitonParams(center=0.0)
        field = soliton_profile(params, GRID, 0.0)
        i_center = np.argmin(np.abs(GRID.points))
        assert field.heights[i_center] == pytest.approx(2.0, abs=1e-12)

    def test_far_field_decays_to_rest_height(self):
        params = SolitonParams(center=0.0)
        field = soliton_profile(params, GRID, 0.0)
        far = np.abs(GRID.points) > 30.0
        np.testing.assert_allclose(field.heights[far], 1.0, atol=1e-10)

    def test_invalid_parameters_rejected(self):
        with pytest.raises(ValueError):
            SolitonParams(us=-1.0)
        with pytest.raises(ValueError):
            SolitonParams(ks=0.0)


class TestCnoidalVelocity:
    @pytest.mark.parametrize(
        "epsilon,k,expected",
        [
            (1.0, 0.5, 4.0 / 3.0),
            (0.0, 0.5, 2.0 / 3.0),
            (0.0, 1e-9, 1.0),
        ],
    )
    def test_formula_values(self, epsilon, k, expected):
        assert cnoidal_velocity(epsilon, k, u0=1.0, dispersion=1.0 / 3.0) == pytest.approx(expected)

    @given(
        epsilon=st.floats(0.0, 3.0),
        k=st.floats(0.01, 5.0),
        u0=st.floats(0.0, 2.0),
    )
    def test_params_velocity_matches_formula_bitwise(self, epsilon, k, u0):
        params = CnoidalParams(epsilon, k, u0=u0)
        assert params.velocity == cnoidal_velocity(epsilon, k, u0, params.dispersion)


class TestCnoidalProfile:
    def test_height_at_phase_center(self):
        params = CnoidalParams(0.7, 1.0, phase_center=GRID.points[100])
        field = cnoidal_profile(params, GRID, 0.0)
        assert field.heights[100] == pytest.approx(0.7, abs=1e-12)

    def test_zero_amplitude_gives_zero_field(self):
        field = cnoidal_profile(CnoidalParams(0.0, 1.0), GRID, 0.0)
        np.testing.assert_array_equal(field.heights, 0.0)

    def test_quarter_wavelength_node(self):
        k = 1.0
        center = GRID.points[200]
        params = CnoidalParams(0.5, k, phase_center=center)
        field = cnoidal_profile(params, GRID, 0.0)
        x_node = center + np.pi / (2 * k)
        heights = np.interp(x_node, GRID.points, field.heights)
        assert heights == pytest.approx(0.0, abs=1e-3)


class TestWindow:
    def test_center_scale_and_tail_values(self):
        grid = SpatialGrid.centered(80.0, 1024)
        w = super_gaussian(grid, WindowParams(scale=20.0, order=8))
        x = grid.points
        assert w[np.argmin(np.abs(x))] == pytest.approx(1.0)
        assert np.interp(20.0, x, w) == pytest.approx(np.exp(-1.0), abs=1e-3)
        assert np.interp(40.0, x, w) == pytest.approx(0.0, abs=1e-30)

    def test_symmetry(self):
        w = super_gaussian(GRID, WindowParams())
        x = GRID.points
        for xi in (3.7, 11.0, 19.5):
            assert np.interp(xi, x, w) == pytest.approx(np.interp(-xi, x, w), rel=1e-6)

    def test_odd_order_rejected(self):
        with pytest.raises(ValueError):
            WindowParams(order=7)


class TestInitialCondition:
    soliton = SolitonParams(center=-20.0)
    window = WindowParams()

    def test_empty_wave_list_gives_pure_soliton(self):
        field = build_initial_condition([], self.soliton, self.window, GRID)
        expected = soliton_profile(self.soliton, GRID, 0.0)
        np.testing.assert_array_equal(field.heights, expected.heights)

    def test_zero_amplitudes_give_pure_soliton(self):
        waves = [CnoidalParams(0.0, 1.0), CnoidalParams(0.0, 2.0)]
        field = build_initial_condition(waves, self.soliton, self.window, GRID)
        expected = soliton_profile(self.soliton, GRID, 0.0)
        np.testing.assert_allclose(field.heights, expected.heights, atol=1e-15)

    def test_single_wave_pointwise_value(self):
        # at x=0 the window is 1 and the distant soliton contributes ~u0
        wave = CnoidalParams(0.5, 1.0)
        field = build_initial_condition([wave], self.soliton, self.window, GRID)
        i0 = np.argmin(np.abs(GRID.points))
        x0 = GRID.points[i0]
        expected = 1.0 + 0.5 * np.cos(wave.k * x0) ** 2
        assert field.heights[i0] == pytest.approx(expected, abs=1e-6)

    def test_superposition_linearity(self):
        a = [CnoidalParams(0.3, 0.8), CnoidalParams(0.2, 1.5)]
        b = [CnoidalParams(0.6, 2.2)]
        base = soliton_profile(self.soliton, GRID, 0.0).heights
        combined = build_initial_condition(a + b, self.soliton, self.window, GRID).heights
        window = super_gaussian(GRID, self.window)
        parts = sum(cnoidal_profile(w, GRID, 0.0).heights for w in a + b)
        np.testing.assert_allclose(combined - base, window * parts, atol=1e-12)
