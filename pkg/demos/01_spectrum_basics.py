"""
Amplitude and phase of an image
===============================

Take a small image apart in the frequency domain, put it back together,
and look at how its energy is spread from low to high frequencies.
"""

import numpy as np
from scipy import ndimage

import specmix

rng = np.random.default_rng(0)

# a smooth blob standing in for a rendered face crop
yy, xx = np.mgrid[0:112, 0:112]
blob = np.exp(-(((yy - 56) / 40.0) ** 2 + ((xx - 56) / 30.0) ** 2))
image = np.clip(np.stack([blob, 0.8 * blob, 0.6 * blob], axis=2), 0, 1)

# forward transform, split into amplitude and phase, then rebuild
spec = specmix.dft_forward(image)
amplitude, phase = specmix.decompose(spec)
rebuilt = specmix.dft_inverse(specmix.recompose(amplitude, phase))
print("round-trip max error:", np.abs(rebuilt - image).max())

# the DC term carries the channel sums
print("DC of channel 0:", amplitude[0, 0, 0], "pixel sum:", image[:, :, 0].sum())

# shifting moves DC to the grid centre, as fftshift does
centred = specmix.shift(spec)
print("DC after shift sits at:", np.unravel_index(np.abs(centred.coeffs[:, :, 0]).argmax(), (112, 112)))

# a grainy copy has more energy in the outer annuli
grainy = np.clip(image + 0.1 * rng.standard_normal(image.shape), 0, 1)
smooth_profile = specmix.radial_amplitude_profile(image, 8)
grainy_profile = specmix.radial_amplitude_profile(grainy, 8)
for i, (a, b) in enumerate(zip(smooth_profile, grainy_profile)):
    print(f"annulus {i}: smooth {a:6.3f}  grainy {b:6.3f}")

# the soft map that later decides which frequencies to keep
soft = specmix.gaussian_soft_map(112, 112, 30)
print("soft map at centre:", soft[56, 56], "at a corner:", soft[0, 0])

# blurring removes high-frequency energy, visible in the last annulus
blurred = ndimage.gaussian_filter(grainy, sigma=(1.5, 1.5, 0))
print("last annulus after blur:", specmix.radial_amplitude_profile(blurred, 8)[-1])
