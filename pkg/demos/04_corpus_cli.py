"""
Augmenting a folder from the command line
=========================================

Write a tiny synthetic corpus and a real bank to a temporary folder, then
run the ``specmix`` command on them the same way a shell user would.
"""

import tempfile
from pathlib import Path

import numpy as np

from specmix import io as sio
from specmix.cli import main

rng = np.random.default_rng(3)
work = Path(tempfile.mkdtemp(prefix="specmix-demo-"))
(work / "syn").mkdir()
(work / "real").mkdir()

for i in range(6):
    sio.save_image(rng.random((48, 48, 3)) * 0.4 + 0.3, work / "syn" / f"id{i}.png")
for i in range(3):
    sio.save_image(rng.random((80, 80, 3)), work / "real" / f"r{i}.png")

main(["list-presets"])
main(["explain", "--preset", "SA-B6-O4"])

main([
    "augment", "--syn-dir", str(work / "syn"), "--real-dir", str(work / "real"),
    "--out-dir", str(work / "out"), "--preset", "SA-B6-O4",
    "--smu-d0", "15,30,45,60", "--seed", "42", "--workers", "2",
])
print((work / "out" / "manifest.txt").read_text())

main([
    "psnr-report", "--syn", str(work / "syn" / "id0.png"), "--real", str(work / "real" / "r0.png"),
    "--out-table", str(work / "psnr.csv"),
])
print((work / "psnr.csv").read_text())
print("outputs written under", work)
