import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from linfstab.core import (
    FourierSignal,
    NormKind,
    RadialField,
    RadialGrid,
    TorusField,
    TorusGrid,
    analyze,
    norm,
    sup_grid_size,
    synthesize,
)

from conftest import direct_synthesis


def random_signal(rng, n, real=False):
    c = rng.standard_normal(2 * n + 1) + 1j * rng.standard_normal(2 * n + 1)
    if real:
        c = 0.5 * (c + np.conj(c[::-1]))
    return FourierSignal(n, c, real)


class TestFourierSignal:
    def test_length_checked(self):
        with pytest.raises(ValueError):
            FourierSignal(2, np.zeros(4))

    def test_symmetry_checked(self):
        with pytest.raises(ValueError):
            FourierSignal(1, [1.0, 0.0, 2.0], real_symmetric=True)
        FourierSignal(1, [1 - 1j, 3.0, 1 + 1j], real_symmetric=True)

    def test_coefficients_are_read_only(self):
        s = FourierSignal.zeros(3)
        with pytest.raises(ValueError):
            s.coeffs[0] = 1

    def test_indexing_and_padding(self):
        s = FourierSignal.from_dict({-1: 2.0, 1: 3.0}, 1)
        assert s[-1] == 2 and s[1] == 3 and s[0] == 0
        p = s.padded(4)
        assert p.max_index == 4 and p[1] == 3 and p[4] == 0
        assert p.truncated(1)[-1] == 2

    def test_add_pads_to_common_band(self):
        a = FourierSignal.from_dict({0: 1.0}, 0)
        b = FourierSignal.from_dict({2: 1.0}, 2)
        c = a + b
        assert c.max_index == 2 and c[0] == 1 and c[2] == 1


class TestSynthesis:
    def test_constant(self):
        s = FourierSignal.from_dict({0: 1.0}, 3, True)
        np.testing.assert_allclose(synthesize(s, TorusGrid(7)), 1.0)

    def test_cosine(self):
        s = FourierSignal.from_dict({1: 0.5, -1: 0.5}, 1, True)
        g = TorusGrid(8)
        out = synthesize(s, g)
        assert np.isrealobj(out)
        np.testing.assert_allclose(out, np.cos(2 * np.pi * g.points), atol=1e-15)

    def test_aliasing_grid_rejected(self):
        with pytest.raises(ValueError, match="alias"):
            synthesize(FourierSignal.zeros(4), TorusGrid(8))

    def test_matches_direct_summation(self, rng):
        s = random_signal(rng, 16)
        g = TorusGrid(64)
        np.testing.assert_allclose(
            synthesize(s, g), direct_synthesis(s.coeffs, 16, g.points), atol=1e-11
        )

    def test_round_trip(self, rng):
        for _ in range(100):
            s = random_signal(rng, 16)
            back = analyze(synthesize(s, TorusGrid(64)), 16)
            assert np.max(np.abs(back.coeffs - s.coeffs)) < 1e-10

    def test_analyze_constant_and_cosine(self):
        c = analyze(np.ones(9), 2)
        np.testing.assert_allclose(c.coeffs, [0, 0, 1, 0, 0], atol=1e-15)
        t = TorusGrid(16).points
        c = analyze(np.cos(2 * np.pi * t), 3)
        assert abs(c[1] - 0.5) < 1e-15 and abs(c[-1] - 0.5) < 1e-15
        assert c.real_symmetric


class TestNorms:
    def test_l2_of_constant(self):
        assert norm(FourierSignal.from_dict({0: 3.0}, 2), NormKind.L2_TORUS) == 3.0

    def test_spike_with_unit_energy(self):
        # height n on a set of measure n^-2: unit L2 norm, sup norm n
        n, m = 4, 64
        v = np.zeros(m)
        v[: m // n**2] = n
        f = TorusField(TorusGrid(m), v)
        assert norm(f, NormKind.L2_TORUS) == pytest.approx(1.0, abs=1e-14)
        assert norm(f, NormKind.SUP_GRID) == n

    def test_radial_l2_of_unit_ball(self):
        g = RadialGrid(2.0, 20001)
        f = RadialField(g, (g.points <= 1.0).astype(float))
        assert norm(f, NormKind.L2_RADIAL_3D) == pytest.approx(np.sqrt(4 * np.pi / 3), abs=1e-3)

    def test_kind_mismatch_rejected(self):
        with pytest.raises(TypeError):
            norm(FourierSignal.zeros(1), NormKind.L2_RADIAL_3D)
        with pytest.raises(TypeError):
            norm(RadialField(RadialGrid(1.0, 3), np.zeros(3)), NormKind.L2_TORUS)

    def test_sup_grid_is_dense_power_of_two(self):
        for n in (0, 1, 7, 100, 2048):
            m = sup_grid_size(n)
            assert m >= 8 * (2 * n + 1) and m & (m - 1) == 0

    def test_sup_norm_of_cosine(self):
        s = FourierSignal.from_dict({3: 0.5, -3: 0.5}, 3, True)
        assert norm(s, NormKind.SUP_GRID) == pytest.approx(1.0, abs=1e-12)


class TestGrids:
    def test_torus_grid(self):
        g = TorusGrid(10)
        assert g.points[0] == 0 and np.all(np.diff(g.points) > 0)
        np.testing.assert_allclose(np.diff(g.points), 0.1)

    def test_radial_grid_endpoints(self):
        g = RadialGrid.with_spacing(2.5, 0.01)
        assert g.points[0] == 0.0 and g.points[-1] == 2.5
        np.testing.assert_allclose(np.diff(g.points), g.spacing)

    def test_radial_field_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            RadialField(RadialGrid(1.0, 3), [0.0, np.nan, 1.0])
        with pytest.raises(ValueError):
            RadialField(RadialGrid(1.0, 3), [0.0, 1.0])


bandwidths = st.integers(min_value=0, max_value=24)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@given(bandwidths, seeds, st.integers(min_value=4, max_value=8))
def test_parseval(n, seed, factor):
    s = random_signal(np.random.default_rng(seed), n)
    m = factor * (2 * n + 1)
    rms = np.sqrt(np.mean(np.abs(synthesize(s, TorusGrid(m))) ** 2))
    assert abs(norm(s, NormKind.L2_TORUS) - rms) < 1e-8


@given(bandwidths, seeds)
def test_analyze_inverts_synthesize(n, seed):
    s = random_signal(np.random.default_rng(seed), n)
    back = analyze(synthesize(s, TorusGrid(sup_grid_size(n, 2))), n)
    assert np.max(np.abs(back.coeffs - s.coeffs)) < 1e-10


scalars = st.floats(-1e3, 1e3, allow_nan=False).filter(lambda x: x == 0 or abs(x) > 1e-100)


@given(bandwidths, seeds, scalars)
def test_norm_homogeneous(n, seed, lam):
    rng = np.random.default_rng(seed)
    s = random_signal(rng, n, real=True)
    for kind in (NormKind.L2_TORUS, NormKind.SUP_GRID):
        assert norm(s * lam, kind) == pytest.approx(abs(lam) * norm(s, kind), rel=1e-12, abs=1e-300)
    g = RadialGrid(1.0, 33)
    f = RadialField(g, rng.standard_normal(33))
    for kind in (NormKind.L2_RADIAL_3D, NormKind.SUP_RADIAL):
        assert norm(f * lam, kind) == pytest.approx(abs(lam) * norm(f, kind), rel=1e-12, abs=1e-300)


@given(bandwidths, seeds)
def test_real_symmetric_synthesizes_real(n, seed):
    s = random_signal(np.random.default_rng(seed), n, real=True)
    assert np.isrealobj(synthesize(s, TorusGrid(sup_grid_size(n))))
