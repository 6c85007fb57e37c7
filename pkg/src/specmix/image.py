"""Image buffer validation and bilinear resampling helpers.

Images are plain ``float64`` numpy arrays of shape ``(H, W, C)`` with
``C`` in ``{1, 3}`` and samples in ``[0, 1]``.  A 2-D array is accepted
on input and treated as a single channel.
"""

import numpy as np
from scipy import ndimage


def as_image(data, copy=False):
    """Validate ``data`` and return it as an ``(H, W, C)`` float64 array."""
    arr = np.array(data, dtype=np.float64, copy=copy) if copy else np.asarray(data, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3:
        raise ValueError(f"image must be 2-D or 3-D, got shape {arr.shape}")
    h, w, c = arr.shape
    if h < 1 or w < 1:
        raise ValueError(f"image must be at least 1x1, got {h}x{w}")
    if c not in (1, 3):
        raise ValueError(f"image must have 1 or 3 channels, got {c}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains non-finite samples")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("image samples must lie in [0, 1]")
    return arr


def clamp(img):
    return np.clip(img, 0.0, 1.0)


def sample_bilinear(img, rows, cols):
    """Bilinearly sample every channel of ``img`` at (rows, cols).

    Coordinates are in pixel-index units; points outside the source
    frame read as 0.
    """
    out = np.empty(rows.shape + (img.shape[2],), dtype=np.float64)
    coords = np.stack([rows, cols])
    for ch in range(img.shape[2]):
        out[..., ch] = ndimage.map_coordinates(
            img[:, :, ch], coords, order=1, mode="constant", cval=0.0
        )
    return out


def _axis_coords(start, length, n_out):
    # align-corners mapping: first/last output samples hit the region edges
    if n_out == 1:
        return np.array([start + (length - 1) / 2.0])
    return start + np.arange(n_out) * ((length - 1) / (n_out - 1))


def crop_resize(img, top, left, height, width, out_h, out_w):
    """Resample the rectangle (top, left, height, width) to ``out_h x out_w``."""
    r = _axis_coords(top, height, out_h)
    c = _axis_coords(left, width, out_w)
    rows, cols = np.meshgrid(r, c, indexing="ij")
    # rectangle is always inside the frame, so clamp float round-off at the far edge
    rows = np.clip(rows, 0, img.shape[0] - 1)
    cols = np.clip(cols, 0, img.shape[1] - 1)
    return sample_bilinear(img, rows, cols)


def resize_bilinear(img, out_h, out_w):
    img = as_image(img)
    h, w, _ = img.shape
    if (h, w) == (out_h, out_w):
        return img.copy()
    return crop_resize(img, 0, 0, h, w, out_h, out_w)
