"""Frequency-domain operations: transforms, amplitude/phase, soft maps, mixup.

Spectra use the unnormalized forward DFT and a ``1/(M*N)`` inverse, so
Parseval reads ``sum|x|^2 == sum|F|^2 / (M*N)``.  Every multi-channel
image is transformed one channel at a time.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .image import as_image, clamp, resize_bilinear


class Layout(enum.Enum):
    DC_AT_ORIGIN = "dc-at-origin"
    DC_CENTERED = "dc-centered"


class NonHermitianSpectrumError(ValueError):
    """Raised when an inverse transform would discard a large imaginary part."""


@dataclass(frozen=True)
class Spectrum:
    coeffs: np.ndarray  # complex, (M, N, C)
    layout: Layout = Layout.DC_AT_ORIGIN

    @property
    def shape(self):
        return self.coeffs.shape


def dft_forward(image):
    img = as_image(image)
    return Spectrum(np.fft.fft2(img, axes=(0, 1)), Layout.DC_AT_ORIGIN)


def dft_inverse_raw(spec, imag_tol=1e-6):
    """Inverse transform without clamping; returns the real part.

    Raises NonHermitianSpectrumError when the discarded imaginary part
    exceeds ``imag_tol`` times the largest coefficient magnitude.
    """
    if spec.layout is not Layout.DC_AT_ORIGIN:
        raise ValueError("dft_inverse needs a DC_AT_ORIGIN spectrum; call inverse_shift first")
    out = np.fft.ifft2(spec.coeffs, axes=(0, 1))
    peak = float(np.abs(spec.coeffs).max()) if spec.coeffs.size else 0.0
    leak = float(np.abs(out.imag).max()) if out.size else 0.0
    if leak > imag_tol * max(peak, np.finfo(float).tiny):
        raise NonHermitianSpectrumError(
            f"imaginary residue {leak:.3g} exceeds {imag_tol:g} x max amplitude {peak:.3g}"
        )
    return out.real


def dft_inverse(spec, imag_tol=1e-6):
    return clamp(dft_inverse_raw(spec, imag_tol))


def _center_shifts(m, n):
    return m // 2, n // 2


def shift(spec):
    """Toggle layout by a cyclic roll of (M//2, N//2) or its inverse."""
    m, n = spec.coeffs.shape[:2]
    dm, dn = _center_shifts(m, n)
    if spec.layout is Layout.DC_AT_ORIGIN:
        return Spectrum(np.roll(spec.coeffs, (dm, dn), axis=(0, 1)), Layout.DC_CENTERED)
    return Spectrum(np.roll(spec.coeffs, (-dm, -dn), axis=(0, 1)), Layout.DC_AT_ORIGIN)


def inverse_shift(spec):
    if spec.layout is not Layout.DC_CENTERED:
        raise ValueError("inverse_shift expects a DC_CENTERED spectrum")
    return shift(spec)


def center_grid(grid):
    """``fftshift`` over the two spatial axes of a plain array."""
    return np.fft.fftshift(grid, axes=(0, 1))


def uncenter_grid(grid):
    return np.fft.ifftshift(grid, axes=(0, 1))


def decompose(spec):
    """Split a spectrum into amplitude and phase grids (layout carried through).

    Phase uses the quadrant-aware arctangent, and is pinned to 0 where the
    amplitude is exactly zero.
    """
    amp = np.abs(spec.coeffs)
    phase = np.arctan2(spec.coeffs.imag, spec.coeffs.real)
    phase[amp == 0] = 0.0
    return amp, phase


def recompose(amplitude, phase, layout=Layout.DC_AT_ORIGIN):
    return Spectrum(amplitude * np.exp(1j * phase), layout)


def gaussian_soft_map(m, n, d0):
    """Gaussian low-pass weights on a DC-centered ``m x n`` grid.

    ``G = exp(-D^2 / (2 d0^2))`` with ``D`` the distance in bins from
    ``(m//2, n//2)``.
    """
    if m < 1 or n < 1:
        raise ValueError(f"grid must be at least 1x1, got {m}x{n}")
    if not d0 > 0 or not math.isfinite(d0):
        raise ValueError(f"cut-off d0 must be a positive finite number, got {d0!r}")
    cu, cv = _center_shifts(m, n)
    u = np.arange(m, dtype=np.float64)[:, None] - cu
    v = np.arange(n, dtype=np.float64)[None, :] - cv
    dist_sq = u * u + v * v
    # floor keeps far bins strictly positive when exp underflows
    return np.maximum(np.exp(-dist_sq / (2.0 * d0 * d0)), np.finfo(np.float64).tiny)


def distance_grid(m, n):
    cu, cv = _center_shifts(m, n)
    u = np.arange(m, dtype=np.float64)[:, None] - cu
    v = np.arange(n, dtype=np.float64)[None, :] - cv
    return np.sqrt(u * u + v * v)


def disk_mask(m, n, radius):
    """Binary centered disk ``D < radius``; empty for radius 0."""
    return (distance_grid(m, n) < radius).astype(np.float64)


def _match_pair(syn, real):
    syn = as_image(syn)
    real = as_image(real)
    if syn.shape[2] != real.shape[2]:
        raise ValueError(
            f"channel mismatch: synthetic has {syn.shape[2]}, real has {real.shape[2]}"
        )
    if syn.shape[:2] != real.shape[:2]:
        real = resize_bilinear(real, *syn.shape[:2])
    return syn, real


def centered_amplitudes(syn, real):
    """Return (A_syn, A_real, P_syn) with both amplitudes DC-centered."""
    a_syn, p_syn = decompose(dft_forward(syn))
    a_real, _ = decompose(dft_forward(real))
    return center_grid(a_syn), center_grid(a_real), p_syn


def hermitian_part(spec):
    """Project a DC-at-origin spectrum onto the nearest Hermitian one.

    Phases of near-zero coefficients are round-off noise and need not be
    antisymmetric; once a larger amplitude is attached to them the
    spectrum would no longer describe a real image.
    """
    c = spec.coeffs
    mirrored = np.roll(c[::-1, ::-1], (1, 1), axis=(0, 1))
    return Spectrum(0.5 * (c + np.conj(mirrored)), spec.layout)


def _synthesize(centered_amp, phase):
    spec = recompose(uncenter_grid(centered_amp), phase)
    return dft_inverse_raw(hermitian_part(spec))


def mix_amplitudes(a_syn, a_real, weights):
    """Pointwise ``w * a_syn + (1 - w) * a_real`` on DC-centered grids.

    ``weights`` broadcasts over the channel axis.  The result lies between
    the two inputs at every bin.
    """
    w = weights[:, :, None] if weights.ndim == 2 else weights
    mixed = w * a_syn + (1.0 - w) * a_real
    # clip absorbs the last-ulp overshoot of the affine blend so convexity is exact
    return np.clip(mixed, np.minimum(a_syn, a_real), np.maximum(a_syn, a_real))


def smu_mix(syn, real, d0, soft_map=None, raw=False):
    """Keep the synthetic phase and low-frequency amplitude, take high
    frequencies of the amplitude from ``real``.

    ``soft_map`` replaces the Gaussian weights when given (DC-centered,
    shape ``(M, N)``).  With ``raw=True`` the unclamped inverse is returned.
    """
    syn, real = _match_pair(syn, real)
    m, n, _ = syn.shape
    weights = gaussian_soft_map(m, n, d0) if soft_map is None else np.asarray(soft_map, float)
    if weights.shape != (m, n):
        raise ValueError(f"soft map shape {weights.shape} does not match image {m}x{n}")
    a_syn, a_real, p_syn = centered_amplitudes(syn, real)
    out = _synthesize(mix_amplitudes(a_syn, a_real, weights), p_syn)
    return out if raw else clamp(out)


class Orientation(enum.Enum):
    KEEP_SYN_LOW = "keep-syn-low"  # real supplies high frequencies
    KEEP_SYN_HIGH = "keep-syn-high"  # real supplies low frequencies (original baselines)


@dataclass(frozen=True)
class MixupStrategy:
    """One frequency-mixup recipe.

    kind is one of ``smu``, ``phase-swap``, ``hard-low-swap``,
    ``weighted-sum``, ``band-interp``.  ``d0_choices`` turns SMU's cut-off
    into a uniform draw over the given values.
    """

    kind: str
    d0: float = 60.0
    d0_choices: tuple = ()
    radius: float = 0.0
    lam: float = 0.5
    orientation: Orientation = field(default=Orientation.KEEP_SYN_HIGH)

    KINDS = ("smu", "phase-swap", "hard-low-swap", "weighted-sum", "band-interp")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown mixup kind {self.kind!r}; choose from {self.KINDS}")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must be in [0, 1], got {self.lam}")
        if self.radius < 0:
            raise ValueError(f"radius must be >= 0, got {self.radius}")
        for d in (self.d0, *self.d0_choices):
            if not d > 0:
                raise ValueError(f"d0 must be positive, got {d}")

    def resolve_d0(self, rng=None):
        if not self.d0_choices:
            return float(self.d0)
        if rng is None:
            raise ValueError("a random generator is needed to draw d0 from its sample set")
        return float(self.d0_choices[rng.integers(len(self.d0_choices))])

    def label(self):
        o = self.orientation.value
        if self.kind == "smu":
            if self.d0_choices:
                return "smu(d0~U{" + ",".join(f"{d:g}" for d in self.d0_choices) + "})"
            return f"smu(d0={self.d0:g})"
        if self.kind == "phase-swap":
            return "phase-swap"
        if self.kind == "weighted-sum":
            return f"weighted-sum(lambda={self.lam:g})"
        if self.kind == "hard-low-swap":
            return f"hard-low-swap(radius={self.radius:g},{o})"
        return f"band-interp(radius={self.radius:g},lambda={self.lam:g},{o})"


def strategy_weights(strategy, m, n, d0=None):
    """Per-bin weight on the synthetic amplitude (DC-centered)."""
    kind = strategy.kind
    if kind == "smu":
        return gaussian_soft_map(m, n, strategy.d0 if d0 is None else d0)
    if kind == "phase-swap":
        return np.zeros((m, n))
    if kind == "weighted-sum":
        return np.full((m, n), 1.0 - strategy.lam)
    disk = disk_mask(m, n, strategy.radius)
    # region of the grid where real content enters
    band = disk if strategy.orientation is Orientation.KEEP_SYN_HIGH else 1.0 - disk
    if kind == "hard-low-swap":
        return 1.0 - band
    return 1.0 - strategy.lam * band


def baseline_mix(syn, real, strategy, d0=None):
    """Mix amplitudes according to ``strategy`` while keeping the synthetic phase."""
    syn, real = _match_pair(syn, real)
    if strategy.kind == "phase-swap":
        _, p_syn = decompose(dft_forward(syn))
        a_real, _ = decompose(dft_forward(real))
        return dft_inverse(hermitian_part(recompose(a_real, p_syn)))
    m, n, _ = syn.shape
    weights = strategy_weights(strategy, m, n, d0)
    a_syn, a_real, p_syn = centered_amplitudes(syn, real)
    return clamp(_synthesize(mix_amplitudes(a_syn, a_real, weights), p_syn))


def psnr(a, b, max_value=1.0):
    """Peak signal-to-noise ratio in dB; ``math.inf`` for identical inputs."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(max_value * max_value / mse)


def radial_amplitude_profile(image, bins):
    """Mean ``log(1 + A)`` over ``bins`` equal-width annuli around DC.

    Channels are averaged together.  Annuli with no frequency bins, and
    bins carrying no energy, sit at the floor value 0.
    """
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    img = as_image(image)
    m, n, _ = img.shape
    amp, _ = decompose(dft_forward(img))
    logamp = np.log1p(center_grid(amp)).mean(axis=2)
    dist = distance_grid(m, n)
    r_max = dist.max()
    if r_max == 0:
        idx = np.zeros((m, n), dtype=int)
    else:
        idx = np.minimum((dist / r_max * bins).astype(int), bins - 1)
    sums = np.bincount(idx.ravel(), weights=logamp.ravel(), minlength=bins)
    counts = np.bincount(idx.ravel(), minlength=bins)
    return np.divide(sums, counts, out=np.zeros(bins), where=counts > 0)


def log_amplitude_image(image):
    """DC-centered ``log(1 + A)`` per channel, min-max scaled to [0, 1].

    A flat spectrum has no range to stretch and maps to mid-gray.
    """
    amp, _ = decompose(dft_forward(image))
    logamp = np.log1p(center_grid(amp))
    out = np.empty_like(logamp)
    for ch in range(logamp.shape[2]):
        plane = logamp[:, :, ch]
        lo, hi = plane.min(), plane.max()
        if hi - lo <= 1e-12 * max(1.0, abs(hi)):
            out[:, :, ch] = 128.0 / 255.0
        else:
            out[:, :, ch] = (plane - lo) / (hi - lo)
    return out
