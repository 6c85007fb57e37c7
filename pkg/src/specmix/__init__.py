"""Frequency-domain spectrum mixup and spatial augmentation for synthetic images."""

from .augment import AugOp, rng_stream
from .image import as_image
from .pipeline import (
    PipelineConfig,
    SmuSettings,
    build_preset,
    explain_pipeline,
    run_pipeline,
    sample_gate,
)
from .spectral import (
    Layout,
    MixupStrategy,
    Orientation,
    Spectrum,
    baseline_mix,
    decompose,
    dft_forward,
    dft_inverse,
    gaussian_soft_map,
    inverse_shift,
    psnr,
    radial_amplitude_profile,
    recompose,
    shift,
    smu_mix,
)

__version__ = "0.1.0"
