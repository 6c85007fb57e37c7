import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import smooth_image, textured_image
from oracles import hermitian_random_spectrum, loop_psnr, naive_dft2, naive_idft2
from specmix.spectral import (
    Layout,
    MixupStrategy,
    NonHermitianSpectrumError,
    Orientation,
    Spectrum,
    baseline_mix,
    centered_amplitudes,
    decompose,
    dft_forward,
    dft_inverse,
    dft_inverse_raw,
    gaussian_soft_map,
    hermitian_part,
    inverse_shift,
    mix_amplitudes,
    psnr,
    radial_amplitude_profile,
    recompose,
    shift,
    smu_mix,
)

SIZES = [1, 2, 3, 4, 7, 8]
# G at (0, 0) of a 112x112 grid with d0 = 60; evaluated independently as
# math.exp(-(56**2 + 56**2) / (2 * 60**2))
CORNER_112_D60 = 0.41848630604256454


def image_arrays(max_side=8):
    shape = st.tuples(
        st.integers(1, max_side), st.integers(1, max_side), st.sampled_from([1, 3])
    )
    return shape.flatmap(
        lambda s: arrays(np.float64, s, elements=st.floats(0, 1, allow_nan=False))
    )


class TestForward:
    def test_constant_image_has_only_dc(self):
        spec = dft_forward(np.full((2, 2, 1), 0.5))
        assert spec.layout is Layout.DC_AT_ORIGIN
        assert spec.coeffs[0, 0, 0] == 2.0 + 0j
        rest = spec.coeffs.copy()
        rest[0, 0, 0] = 0
        assert np.all(rest == 0)

    def test_impulse_is_flat(self):
        img = np.zeros((4, 4, 1))
        img[0, 0, 0] = 1.0
        np.testing.assert_allclose(np.abs(dft_forward(img).coeffs), 1.0, atol=1e-15)

    def test_random_4x4_matches_naive_sum(self, rng):
        img = rng.random((4, 4, 1))
        np.testing.assert_allclose(
            dft_forward(img).coeffs[:, :, 0], naive_dft2(img[:, :, 0]), rtol=0, atol=1e-10
        )

    @pytest.mark.parametrize("m", SIZES)
    @pytest.mark.parametrize("n", SIZES)
    def test_oracle_all_sizes(self, rng, m, n):
        img = rng.random((m, n, 3))
        got = dft_forward(img).coeffs
        for ch in range(3):
            np.testing.assert_allclose(got[:, :, ch], naive_dft2(img[:, :, ch]), rtol=0, atol=1e-9)

    def test_hermitian_symmetry(self, rng):
        m, n = 5, 6
        f = dft_forward(rng.random((m, n, 1))).coeffs[:, :, 0]
        for u in range(m):
            for v in range(n):
                mirror = np.conj(f[(m - u) % m, (n - v) % n])
                assert abs(f[u, v] - mirror) <= 1e-9 * max(1.0, abs(f[u, v]))

    def test_rejects_empty_and_out_of_range(self):
        with pytest.raises(ValueError):
            dft_forward(np.zeros((0, 3, 1)))
        with pytest.raises(ValueError):
            dft_forward(np.full((2, 2, 1), 1.5))
        with pytest.raises(ValueError):
            dft_forward(np.zeros((2, 2, 2)))


class TestInverse:
    def test_dc_only_spectrum(self):
        coeffs = np.zeros((3, 5, 1), complex)
        coeffs[0, 0, 0] = 15 * 0.25
        np.testing.assert_allclose(dft_inverse(Spectrum(coeffs)), 0.25, atol=1e-15)

    @pytest.mark.parametrize("m,n", [(3, 4), (4, 4), (7, 2)])
    def test_matches_naive_inverse(self, rng, m, n):
        spec = hermitian_random_spectrum(rng, m, n)
        got = dft_inverse_raw(Spectrum(spec[:, :, None]))[:, :, 0]
        np.testing.assert_allclose(got, naive_idft2(spec).real, rtol=0, atol=1e-10)

    def test_public_variant_clamps(self):
        coeffs = np.zeros((2, 2, 1), complex)
        coeffs[0, 0, 0] = 4 * 1.7
        raw = dft_inverse_raw(Spectrum(coeffs))
        assert raw.max() == pytest.approx(1.7)
        assert dft_inverse(Spectrum(coeffs)).max() == 1.0

    def test_non_hermitian_input_reported(self):
        coeffs = np.zeros((4, 4, 1), complex)
        coeffs[1, 0, 0] = 1j * 10
        with pytest.raises(NonHermitianSpectrumError):
            dft_inverse(Spectrum(coeffs))

    def test_requires_origin_layout(self, rng):
        spec = shift(dft_forward(rng.random((4, 4, 1))))
        with pytest.raises(ValueError):
            dft_inverse(spec)

    @settings(max_examples=60, deadline=None)
    @given(image_arrays())
    def test_round_trip(self, img):
        back = dft_inverse(dft_forward(img))
        assert np.max(np.abs(back - img.reshape(back.shape))) <= 1e-6

    @settings(max_examples=60, deadline=None)
    @given(image_arrays())
    def test_parseval(self, img):
        f = dft_forward(img).coeffs
        m, n = f.shape[:2]
        energy = np.sum(img**2)
        spec_energy = np.sum(np.abs(f) ** 2) / (m * n)
        assert abs(energy - spec_energy) <= 1e-9 * max(energy, 1e-300)


class TestShift:
    def _marker(self, m, n):
        c = np.zeros((m, n, 1), complex)
        c[0, 0, 0] = 1
        return Spectrum(c)

    def test_4x4_origin_goes_to_center(self):
        s = shift(self._marker(4, 4))
        assert s.layout is Layout.DC_CENTERED
        assert s.coeffs[2, 2, 0] == 1

    def test_3x3_origin_goes_to_1_1(self):
        s = shift(self._marker(3, 3))
        assert s.coeffs[1, 1, 0] == 1

    def test_even_shift_twice_is_identity(self, rng):
        c = rng.random((4, 6, 1)) + 0j
        twice = np.roll(shift(Spectrum(c)).coeffs, (2, 3), axis=(0, 1))
        np.testing.assert_array_equal(twice, c)

    @pytest.mark.parametrize("m,n", [(1, 1), (3, 3), (3, 4), (5, 8), (8, 8)])
    def test_inverse_shift_undoes_shift(self, rng, m, n):
        s = Spectrum(rng.random((m, n, 2)) + 1j * rng.random((m, n, 2)))
        back = inverse_shift(shift(s))
        assert back.layout is Layout.DC_AT_ORIGIN
        np.testing.assert_array_equal(back.coeffs, s.coeffs)

    def test_matches_numpy_fftshift(self, rng):
        c = rng.random((5, 6, 1)) + 0j
        np.testing.assert_array_equal(
            shift(Spectrum(c)).coeffs, np.fft.fftshift(c, axes=(0, 1))
        )


class TestDecompose:
    def test_three_four_five(self):
        a, p = decompose(Spectrum(np.array([[[3 + 4j]]])))
        assert a[0, 0, 0] == 5.0
        assert p[0, 0, 0] == pytest.approx(0.927295, abs=1e-6)

    def test_negative_real_has_phase_pi(self):
        a, p = decompose(Spectrum(np.array([[[-1 + 0j]]])))
        assert a[0, 0, 0] == 1.0
        assert p[0, 0, 0] == pytest.approx(math.pi)

    def test_zero_amplitude_phase_is_zero(self):
        _, p = decompose(Spectrum(np.array([[[complex(-0.0, 0.0)]]])))
        assert p[0, 0, 0] == 0.0

    def test_phase_range(self, rng):
        c = rng.normal(size=(6, 6, 1)) + 1j * rng.normal(size=(6, 6, 1))
        _, p = decompose(Spectrum(c))
        assert np.all(p > -math.pi) and np.all(p <= math.pi)

    def test_recompose_reconstructs(self, rng):
        c = rng.normal(size=(5, 7, 3)) + 1j * rng.normal(size=(5, 7, 3))
        spec = Spectrum(c, Layout.DC_CENTERED)
        a, p = decompose(spec)
        back = recompose(a, p, spec.layout)
        assert back.layout is Layout.DC_CENTERED
        np.testing.assert_allclose(back.coeffs, c, rtol=1e-9, atol=0)


class TestSoftMap:
    @pytest.mark.parametrize("m,n,d0", [(1, 1, 1.0), (4, 7, 3.0), (112, 112, 60.0), (5, 5, 0.1)])
    def test_center_is_exactly_one(self, m, n, d0):
        assert gaussian_soft_map(m, n, d0)[m // 2, n // 2] == 1.0

    def test_value_at_cutoff_radius(self):
        g = gaussian_soft_map(64, 64, 10.0)
        assert abs(g[32 + 10, 32] - math.exp(-0.5)) <= 1e-12
        assert abs(g[32, 32 - 10] - 0.606531) <= 1e-6

    def test_112_corner(self):
        g = gaussian_soft_map(112, 112, 60.0)
        assert g[0, 0] == pytest.approx(CORNER_112_D60, abs=1e-12)
        assert abs(g[0, 0] - 0.41845) <= 1e-4

    @pytest.mark.parametrize("d0", [0.0, -1.0, float("nan"), float("inf")])
    def test_rejects_bad_cutoff(self, d0):
        with pytest.raises(ValueError):
            gaussian_soft_map(8, 8, d0)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 24), st.integers(1, 24), st.floats(0.05, 200))
    def test_radially_non_increasing_and_positive(self, m, n, d0):
        g = gaussian_soft_map(m, n, d0)
        u = np.arange(m)[:, None] - m // 2
        v = np.arange(n)[None, :] - n // 2
        dist = (u * u + v * v).ravel()
        vals = g.ravel()
        order = np.argsort(dist, kind="stable")
        d_sorted, g_sorted = dist[order], vals[order]
        assert np.all(vals > 0) and np.all(vals <= 1)
        # strictly larger distance never gives a larger weight
        assert np.all(np.diff(g_sorted)[np.diff(d_sorted) > 0] <= 0)

    @pytest.mark.parametrize("m,n", [(4, 4), (8, 6), (112, 112)])
    def test_reflection_symmetry_even(self, m, n):
        g = gaussian_soft_map(m, n, 3.0)
        cu, cv = m // 2, n // 2
        for du in range(-(m // 2) + 1, m // 2):
            for dv in range(-(n // 2) + 1, n // 2):
                assert g[cu + du, cv + dv] == g[cu - du, cv - dv]

    def test_monotone_in_d0(self):
        maps = [gaussian_soft_map(112, 112, d) for d in (15, 30, 45, 60)]
        for lo, hi in zip(maps, maps[1:]):
            assert np.all(lo <= hi)


class TestSmu:
    def test_self_mix_is_identity(self, rng):
        x = textured_image(rng)
        for d0 in (15, 30, 45, 60):
            assert np.max(np.abs(smu_mix(x, x, d0) - x)) <= 1e-4

    def test_huge_cutoff_keeps_syn(self, rng):
        syn, real = smooth_image(rng), textured_image(rng)
        assert psnr(smu_mix(syn, real, 1e6), syn) > 60

    def test_zero_map_equals_phase_swap(self, rng):
        syn, real = smooth_image(rng), textured_image(rng)
        a = smu_mix(syn, real, 60, soft_map=np.zeros((32, 32)))
        b = baseline_mix(syn, real, MixupStrategy("phase-swap"))
        assert np.max(np.abs(a - b)) <= 1e-6

    def test_convexity_is_exact(self, rng):
        syn, real = smooth_image(rng), textured_image(rng)
        a_syn, a_real, _ = centered_amplitudes(syn, real)
        for d0 in (0.3, 15, 60):
            mixed = mix_amplitudes(a_syn, a_real, gaussian_soft_map(32, 32, d0))
            assert np.all(mixed >= np.minimum(a_syn, a_real))
            assert np.all(mixed <= np.maximum(a_syn, a_real))

    @pytest.mark.parametrize("shape", [(32, 32), (31, 20)])
    def test_phase_preserved(self, rng, shape):
        syn = smooth_image(rng, *shape)
        real = textured_image(rng, *shape)
        raw = smu_mix(syn, real, 10, raw=True)
        a_mix, p_out = decompose(dft_forward_raw(raw))
        _, p_syn = decompose(dft_forward(syn))
        sel = a_mix > 1e-6
        diff = np.angle(np.exp(1j * (p_out - p_syn)))
        assert np.max(np.abs(diff[sel])) <= 1e-4

    def test_resamples_real(self, rng):
        syn = smooth_image(rng, 32, 32)
        real = textured_image(rng, 48, 40)
        out = smu_mix(syn, real, 15)
        assert out.shape == syn.shape

    def test_channel_mismatch(self, rng):
        with pytest.raises(ValueError, match="channel"):
            smu_mix(smooth_image(rng), smooth_image(rng, c=1), 30)

    def test_invalid_d0(self, rng):
        x = smooth_image(rng)
        with pytest.raises(ValueError):
            smu_mix(x, x, 0)

    def test_output_in_unit_range(self, rng):
        out = smu_mix(smooth_image(rng), textured_image(rng), 5)
        assert out.min() >= 0 and out.max() <= 1


def dft_forward_raw(arr):
    """Transform an unclamped array (may leave [0, 1])."""
    return Spectrum(np.fft.fft2(arr, axes=(0, 1)))


class TestHermitianProjection:
    def test_idempotent_on_real_image(self, rng):
        spec = dft_forward(textured_image(rng, 9, 12))
        np.testing.assert_allclose(hermitian_part(spec).coeffs, spec.coeffs, atol=1e-12)

    def test_result_inverts_cleanly(self, rng):
        coeffs = rng.standard_normal((8, 7, 1)) + 1j * rng.standard_normal((8, 7, 1))
        spec = hermitian_part(Spectrum(coeffs, Layout.DC_AT_ORIGIN))
        assert np.abs(np.fft.ifft2(spec.coeffs, axes=(0, 1)).imag).max() < 1e-12

    @pytest.mark.parametrize("shape", [(16, 16), (15, 16), (9, 13)])
    def test_flat_synthetic_mixes(self, rng, shape):
        syn = np.full((*shape, 3), 0.5)
        real = textured_image(rng, *shape)
        assert np.all(np.isfinite(smu_mix(syn, real, 15)))
        for kind in MixupStrategy.KINDS[1:]:
            for orientation in Orientation:
                out = baseline_mix(syn, real, MixupStrategy(kind, radius=3, orientation=orientation))
                assert out.shape == syn.shape


class TestBaselines:
    def test_weighted_sum_zero_is_identity(self, rng):
        syn, real = smooth_image(rng), textured_image(rng)
        out = baseline_mix(syn, real, MixupStrategy("weighted-sum", lam=0.0))
        assert np.max(np.abs(out - syn)) <= 1e-4

    @pytest.mark.parametrize("kind", ["hard-low-swap", "band-interp"])
    def test_zero_radius_is_identity(self, rng, kind):
        syn, real = smooth_image(rng), textured_image(rng)
        out = baseline_mix(syn, real, MixupStrategy(kind, radius=0, lam=1.0))
        assert np.max(np.abs(out - syn)) <= 1e-4

    def test_weighted_sum_one_is_phase_swap(self, rng):
        syn, real = smooth_image(rng), textured_image(rng)
        a = baseline_mix(syn, real, MixupStrategy("weighted-sum", lam=1.0))
        b = baseline_mix(syn, real, MixupStrategy("phase-swap"))
        assert np.max(np.abs(a - b)) <= 1e-6

    def test_orientation_swaps_band(self, rng):
        syn, real = smooth_image(rng), textured_image(rng)
        low = baseline_mix(syn, real, MixupStrategy("hard-low-swap", radius=4))
        high = baseline_mix(
            syn, real,
            MixupStrategy("hard-low-swap", radius=4, orientation=Orientation.KEEP_SYN_LOW),
        )
        a_syn, a_real, _ = centered_amplitudes(syn, real)
        a_low = np.fft.fftshift(np.abs(np.fft.fft2(low, axes=(0, 1))), axes=(0, 1))
        a_high = np.fft.fftshift(np.abs(np.fft.fft2(high, axes=(0, 1))), axes=(0, 1))
        # DC comes from real in the original orientation, from syn in the swapped one
        assert a_low[16, 16, 0] == pytest.approx(a_real[16, 16, 0], rel=0.05)
        assert a_high[16, 16, 0] == pytest.approx(a_syn[16, 16, 0], rel=0.05)

    def test_keep_syn_low_zero_radius_is_phase_swap(self, rng):
        syn, real = smooth_image(rng), textured_image(rng)
        a = baseline_mix(
            syn, real,
            MixupStrategy("hard-low-swap", radius=0, orientation=Orientation.KEEP_SYN_LOW),
        )
        b = baseline_mix(syn, real, MixupStrategy("phase-swap"))
        assert np.max(np.abs(a - b)) <= 1e-6

    @pytest.mark.parametrize(
        "kwargs", [{"lam": -0.1}, {"lam": 1.5}, {"radius": -1}, {"d0": 0}, {"d0_choices": (15, -1)}]
    )
    def test_invalid_parameters(self, kwargs):
        with pytest.raises(ValueError):
            MixupStrategy("band-interp", **kwargs)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            MixupStrategy("amplitude-dropout")

    def test_d0_sampler_draws_from_set(self, rng):
        s = MixupStrategy("smu", d0_choices=(15, 30, 45, 60))
        draws = {s.resolve_d0(rng) for _ in range(200)}
        assert draws == {15.0, 30.0, 45.0, 60.0}


class TestPsnr:
    def test_identical_is_infinite(self, rng):
        x = rng.random((4, 4, 3))
        assert psnr(x, x) == math.inf

    def test_constant_offset(self):
        a = np.full((5, 5, 3), 0.3)
        assert psnr(a, a + 0.1) == pytest.approx(20.0, abs=1e-9)

    def test_matches_loop_oracle(self, rng):
        for _ in range(5):
            a, b = rng.random((9, 7, 3)), rng.random((9, 7, 3))
            assert abs(psnr(a, b) - loop_psnr(a, b)) <= 1e-9

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            psnr(np.zeros((2, 2, 1)), np.zeros((2, 3, 1)))

    def test_decreases_with_noise(self, rng):
        x = 0.25 + 0.5 * rng.random((64, 64, 3))
        values = []
        for var in (1e-4, 1e-3, 1e-2):
            noisy = x + np.random.default_rng(7).normal(0, math.sqrt(var), x.shape)
            values.append(psnr(noisy, x))
        assert values[0] > values[1] > values[2]


class TestRadialProfile:
    def test_constant_image(self):
        prof = radial_amplitude_profile(np.full((16, 16, 1), 0.5), 6)
        assert prof[0] > 0
        assert np.all(prof[1:] == 0)

    def test_impulse_is_flat(self):
        img = np.zeros((16, 16, 1))
        img[0, 0, 0] = 1.0
        prof = radial_amplitude_profile(img, 6)
        np.testing.assert_allclose(prof, math.log(2.0), rtol=1e-12)

    def test_white_noise_roughly_flat(self):
        profiles = [
            radial_amplitude_profile(np.random.default_rng(s).random((64, 64, 1)), 8)
            for s in range(10)
        ]
        mean_prof = np.mean(profiles, axis=0)
        assert np.max(np.abs(mean_prof - mean_prof.mean())) < 0.2 * mean_prof.mean()

    def test_length_and_validation(self, rng):
        assert len(radial_amplitude_profile(rng.random((8, 8, 3)), 5)) == 5
        with pytest.raises(ValueError):
            radial_amplitude_profile(rng.random((8, 8, 3)), 0)
