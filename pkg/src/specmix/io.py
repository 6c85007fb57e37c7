"""Image files, corpus scanning and the real-image bank."""

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .image import as_image, resize_bilinear
from .spectral import log_amplitude_image

READ_EXTENSIONS = (".png", ".jpg", ".jpeg")
DEFAULT_REAL_SIZE = (112, 112)
# separates real-bank draws from the pipeline's per-stage streams
REAL_BANK_STREAM = 1_000_003


def load_image(path):
    """Read an 8-bit raster as an (H, W, C) float image with C in {1, 3}."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such image file: {path}")
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode in ("L", "RGB"):
                pass
            elif mode == "LA":
                im = im.convert("L")
            elif mode in ("RGBA", "P", "CMYK", "YCbCr"):
                im = im.convert("RGB")
            elif mode == "1":
                im = im.convert("L")
            else:
                raise ValueError(f"{path}: unsupported image mode {mode!r}")
            arr = np.asarray(im, dtype=np.uint8)
    except (OSError, SyntaxError) as exc:
        raise ValueError(f"{path}: cannot decode image ({exc})") from exc
    if arr.ndim == 2:
        arr = arr[:, :, None]
    return arr.astype(np.float64) / 255.0


def to_bytes(image):
    """Quantize to uint8 with round-half-up."""
    img = as_image(image)
    return np.floor(img * 255.0 + 0.5).astype(np.uint8)


def quantize(image):
    return to_bytes(image).astype(np.float64) / 255.0


def save_image(image, path):
    """Write a lossless PNG; the parent directory must exist."""
    data = to_bytes(image)
    if data.shape[2] == 1:
        data = data[:, :, 0]
    path = Path(path)
    if not path.parent.is_dir():
        raise FileNotFoundError(f"output directory does not exist: {path.parent}")
    Image.fromarray(data).save(path, format="PNG")


def export_spectrum_png(image, path):
    save_image(log_amplitude_image(as_image(image)), path)


@dataclass(frozen=True)
class Corpus:
    root: Path
    entries: tuple

    @property
    def count(self):
        return len(self.entries)

    def relative(self, entry):
        return Path(entry).relative_to(self.root)


def scan_corpus(root, max_images=None):
    """Recursively collect image files under ``root`` in sorted order."""
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus directory does not exist: {root}")
    found = []
    for dirpath, _, filenames in os.walk(root):
        for name in filenames:
            if name.lower().endswith(READ_EXTENSIONS):
                found.append(Path(dirpath) / name)
    found.sort(key=lambda p: p.relative_to(root).as_posix())
    if max_images is not None:
        found = found[:max_images]
    return Corpus(root, tuple(found))


@dataclass(frozen=True)
class RealBank:
    """Real images used only for their amplitude spectra; no labels kept."""

    images: tuple
    seed: int = 0

    def __len__(self):
        return len(self.images)


def load_real_bank(root, seed=0, size=DEFAULT_REAL_SIZE, max_images=None):
    """Load every image under ``root``, resized to ``size`` unless it is None."""
    corpus = scan_corpus(root, max_images=max_images)
    images = []
    for entry in corpus.entries:
        img = load_image(entry)
        if size is not None:
            img = resize_bilinear(img, *size)
        images.append(img)
    return RealBank(tuple(images), seed)


def sample_index(bank, image_index):
    if len(bank) == 0:
        raise ValueError("real-image bank is empty")
    ss = np.random.SeedSequence([int(bank.seed) & (2**64 - 1), int(image_index), REAL_BANK_STREAM])
    return int(np.random.default_rng(ss).integers(len(bank)))


def sample_real(bank, image_index, shape=None):
    """Deterministic uniform draw from the bank, optionally resized to ``shape`` (H, W)."""
    img = bank.images[sample_index(bank, image_index)]
    if shape is not None and tuple(shape[:2]) != img.shape[:2]:
        img = resize_bilinear(img, shape[0], shape[1])
    return img
