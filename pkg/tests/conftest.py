import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def smooth_image(rng, h=32, w=32, c=3):
    """Low-frequency random image in [0, 1], face-crop-like in spectrum shape."""
    base = rng.random((h // 4 + 1, w // 4 + 1, c))
    from scipy import ndimage

    up = ndimage.zoom(base, (h / base.shape[0], w / base.shape[1], 1), order=3)[:h, :w]
    up = (up - up.min()) / (up.max() - up.min() + 1e-12)
    return np.clip(up, 0, 1)


def textured_image(rng, h=32, w=32, c=3):
    """Smooth content with fine grain, resembling a real photograph crop."""
    img = 0.8 * smooth_image(rng, h, w, c) + 0.2 * rng.random((h, w, c))
    return np.clip(img, 0, 1)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_report():
    """Call with (criterion, passed, detail); the line is echoed in the summary."""

    def report(name, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] {name}" + (f" :: {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
