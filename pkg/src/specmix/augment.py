"""Spatial augmentation operations.

Every random op takes an explicit ``numpy.random.Generator``; nothing
touches global random state.  Parameters may be forced through keyword
arguments, which is how the identity cases are reached.
"""

import enum

import numpy as np
from scipy import ndimage

from .image import as_image, clamp, crop_resize, sample_bilinear

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])
NOISE_VARIANCE = 0.01
BLUR_KERNEL_SIZE = 7
BLUR_SIGMA_RANGE = (0.1, 2.0)
PERSPECTIVE_SCALE_RANGE = (0.0, 0.5)
AFFINE_DEGREES = (-30.0, 30.0)
AFFINE_TRANSLATE = (0.0, 0.5)  # max |dx| / W, max |dy| / H
AFFINE_SCALE = (0.4, 0.5)
CROP_FRACTION = (0.5, 1.0)
LOWRES_FACTOR = (2.0, 8.0)
PHOTOMETRIC_FACTOR = (0.6, 1.4)


class AugOp(str, enum.Enum):
    """Augmentation kinds, valued by their probability-key names."""

    CROP = "crop"
    LOW_RESOLUTION = "lr"
    PHOTOMETRIC = "pho"
    GRAYSCALE = "gray"
    GAUSSIAN_NOISE = "gn"
    GAUSSIAN_BLUR = "gb"
    CHANNEL_SHUFFLE = "cs"
    HISTOGRAM_EQUALIZATION = "he"
    AUTOCONTRAST = "ac"
    RANDOM_AFFINE = "ra"
    RANDOM_PERSPECTIVE = "rp"


def rng_stream(master_seed, image_index, op_index):
    """Independent generator for one (seed, image, op) triple."""
    ss = np.random.SeedSequence([int(master_seed) & (2**64 - 1), int(image_index), int(op_index)])
    return np.random.default_rng(ss)


def _need_rgb(img, name):
    if img.shape[2] != 3:
        raise ValueError(f"{name} needs a 3-channel image, got {img.shape[2]} channel(s)")


def grayscale3(image):
    """BT.601 luma copied into all three channels."""
    img = as_image(image)
    _need_rgb(img, "grayscale3")
    y = clamp(img @ LUMA_WEIGHTS)
    return np.repeat(y[:, :, None], 3, axis=2)


def _to_levels(plane):
    return np.floor(plane * 255.0 + 0.5).astype(np.int64)


def equalize_lut(hist):
    """8-bit equalization table, or None when the histogram is degenerate."""
    nonzero = np.flatnonzero(hist)
    step = (int(hist.sum()) - int(hist[nonzero[-1]])) // 255
    if step == 0:
        return None
    cum = np.concatenate([[0], np.cumsum(hist)[:-1]])
    return np.clip((cum + step // 2) // step, 0, 255)


def equalize_histogram(image):
    img = as_image(image)
    out = img.copy()
    for ch in range(img.shape[2]):
        levels = _to_levels(img[:, :, ch])
        lut = equalize_lut(np.bincount(levels.ravel(), minlength=256))
        if lut is not None:
            out[:, :, ch] = lut[levels] / 255.0
    return out


def autocontrast(image):
    img = as_image(image)
    out = img.copy()
    for ch in range(img.shape[2]):
        plane = img[:, :, ch]
        lo, hi = plane.min(), plane.max()
        if hi > lo:
            out[:, :, ch] = clamp((plane - lo) / (hi - lo))
    return out


def add_gaussian_noise(image, rng, variance=NOISE_VARIANCE):
    img = as_image(image)
    return clamp(img + rng.normal(0.0, np.sqrt(variance), size=img.shape))


def gaussian_kernel1d(sigma, size=BLUR_KERNEL_SIZE):
    half = (size - 1) / 2.0
    x = np.linspace(-half, half, size)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def gaussian_blur(image, rng, sigma=None):
    """Separable 7x7 Gaussian blur with half-sample symmetric borders.

    Symmetric padding with a symmetric kernel keeps the image sum fixed.
    """
    img = as_image(image)
    if img.shape[0] < BLUR_KERNEL_SIZE or img.shape[1] < BLUR_KERNEL_SIZE:
        raise ValueError(
            f"image {img.shape[0]}x{img.shape[1]} is smaller than the "
            f"{BLUR_KERNEL_SIZE}x{BLUR_KERNEL_SIZE} blur kernel"
        )
    if sigma is None:
        sigma = rng.uniform(*BLUR_SIGMA_RANGE)
    k = gaussian_kernel1d(sigma)
    out = ndimage.correlate1d(img, k, axis=0, mode="reflect")
    out = ndimage.correlate1d(out, k, axis=1, mode="reflect")
    # convex combination of inputs; clip only the rounding residue
    lo = img.min(axis=(0, 1))
    hi = img.max(axis=(0, 1))
    return np.clip(out, lo, hi)


def channel_shuffle(image, rng, perm=None):
    img = as_image(image)
    _need_rgb(img, "channel_shuffle")
    if perm is None:
        perm = rng.permutation(3)
    return img[:, :, list(perm)].copy()


def homography_from_points(src, dst):
    """3x3 projective matrix H with H @ [x, y, 1] ~ dst for each src point."""
    a = []
    b = []
    for (x, y), (u, v) in zip(src, dst):
        a.append([x, y, 1, 0, 0, 0, -u * x, -u * y])
        a.append([0, 0, 0, x, y, 1, -v * x, -v * y])
        b.extend([u, v])
    h = np.linalg.solve(np.asarray(a, float), np.asarray(b, float))
    return np.append(h, 1.0).reshape(3, 3)


def warp_projective(img, out_to_src):
    """Resample ``img`` through the output->source matrix, zero outside."""
    h, w, _ = img.shape
    ys, xs = np.mgrid[0:h, 0:w].astype(np.float64)
    pts = np.stack([xs.ravel(), ys.ravel(), np.ones(h * w)])
    src = out_to_src @ pts
    sx = (src[0] / src[2]).reshape(h, w)
    sy = (src[1] / src[2]).reshape(h, w)
    return clamp(sample_bilinear(img, sy, sx))


def perspective_corners(h, w, scale, rng):
    """Original and displaced corners (x, y), each pulled inward by up to
    ``scale * dim / 2`` along each axis."""
    half_w = scale * w / 2.0
    half_h = scale * h / 2.0
    start = np.array([[0, 0], [w - 1, 0], [w - 1, h - 1], [0, h - 1]], dtype=float)
    dx = rng.uniform(0.0, half_w, size=4) if half_w > 0 else np.zeros(4)
    dy = rng.uniform(0.0, half_h, size=4) if half_h > 0 else np.zeros(4)
    inward = np.array([[1, 1], [-1, 1], [-1, -1], [1, -1]], dtype=float)
    end = start + inward * np.stack([dx, dy], axis=1)
    return start, end


def random_perspective(image, rng, distortion_scale=None):
    img = as_image(image)
    if distortion_scale is None:
        distortion_scale = rng.uniform(*PERSPECTIVE_SCALE_RANGE)
    h, w, _ = img.shape
    start, end = perspective_corners(h, w, distortion_scale, rng)
    if np.array_equal(start, end):
        return img.copy()
    return warp_projective(img, homography_from_points(end, start))


def draw_affine_params(rng, h, w):
    angle = rng.uniform(*AFFINE_DEGREES)
    max_dx = AFFINE_TRANSLATE[0] * w
    max_dy = AFFINE_TRANSLATE[1] * h
    tx = rng.uniform(-max_dx, max_dx)
    ty = rng.uniform(-max_dy, max_dy)
    scale = rng.uniform(*AFFINE_SCALE)
    return angle, (tx, ty), scale


def affine_matrix(h, w, angle, translate, scale):
    """Forward (source->output) matrix: rotate and scale about the image center, then translate."""
    cx, cy = (w - 1) / 2.0, (h - 1) / 2.0
    t = np.deg2rad(angle)
    c, s = np.cos(t) * scale, np.sin(t) * scale
    tx, ty = translate
    return np.array([
        [c, -s, cx - c * cx + s * cy + tx],
        [s, c, cy - s * cx - c * cy + ty],
        [0.0, 0.0, 1.0],
    ])


def random_affine(image, rng, params=None):
    """Rotation, translation and zoom-out; ``params`` is (angle, (tx, ty), scale)."""
    img = as_image(image)
    h, w, _ = img.shape
    angle, translate, scale = params if params is not None else draw_affine_params(rng, h, w)
    fwd = affine_matrix(h, w, angle, translate, scale)
    if np.allclose(fwd, np.eye(3), rtol=0, atol=1e-12):
        return img.copy()
    return warp_projective(img, np.linalg.inv(fwd))


def random_crop(image, rng, box=None):
    """Crop a random sub-rectangle and resize it back; ``box`` is (top, left, height, width)."""
    img = as_image(image)
    h, w, _ = img.shape
    if box is None:
        ch = rng.uniform(*CROP_FRACTION) * h
        cw = rng.uniform(*CROP_FRACTION) * w
        top = rng.uniform(0.0, h - ch)
        left = rng.uniform(0.0, w - cw)
        box = (top, left, ch, cw)
    return clamp(crop_resize(img, *box, h, w))


def low_resolution(image, rng, factor=None):
    img = as_image(image)
    h, w, _ = img.shape
    if factor is None:
        factor = rng.uniform(*LOWRES_FACTOR)
    sh = max(1, int(round(h / factor)))
    sw = max(1, int(round(w / factor)))
    if (sh, sw) == (h, w):
        return img.copy()
    small = crop_resize(img, 0, 0, h, w, sh, sw)
    return clamp(crop_resize(small, 0, 0, sh, sw, h, w))


def photometric(image, rng, factors=None):
    """Brightness, contrast, then saturation jitter; ``factors`` is a 3-tuple."""
    img = as_image(image)
    b, c, s = factors if factors is not None else rng.uniform(*PHOTOMETRIC_FACTOR, size=3)
    out = clamp(img * b)
    gray = out @ LUMA_WEIGHTS if out.shape[2] == 3 else out[:, :, 0]
    mean = gray.mean()
    out = clamp((out - mean) * c + mean)
    if out.shape[2] == 3:
        gray = (out @ LUMA_WEIGHTS)[:, :, None]
        out = clamp((out - gray) * s + gray)
    return out


def base_augment(image, kind, rng, **forced):
    """Dispatch one of the base appearance ops (crop, low resolution, photometric)."""
    if kind is AugOp.CROP:
        return random_crop(image, rng, **forced)
    if kind is AugOp.LOW_RESOLUTION:
        return low_resolution(image, rng, **forced)
    if kind is AugOp.PHOTOMETRIC:
        return photometric(image, rng, **forced)
    raise ValueError(f"{kind!r} is not a base augmentation")
