"""Preset catalog, probability gates and the composed augmentation pipeline."""

import configparser
import hashlib
import json
from dataclasses import dataclass, field, replace

from . import augment as aug
from .augment import AugOp
from .image import as_image
from .spectral import smu_mix

# Stage indices seed the per-stage random streams.  They are fixed so that
# changing one probability never moves another stage's draws.
STAGE_GRAY_FIRST = 0
STAGE_HE_FIRST = 1
STAGE_AC = 2
STAGE_BASE = {
    AugOp.LOW_RESOLUTION: 3,
    AugOp.CROP: 4,
    AugOp.PHOTOMETRIC: 5,
    AugOp.GAUSSIAN_BLUR: 6,
    AugOp.GAUSSIAN_NOISE: 7,
    AugOp.CHANNEL_SHUFFLE: 8,
}
STAGE_GEOMETRY = 9
STAGE_GRAY_LAST = 10
STAGE_HE_LAST = 11
STAGE_SMU = 12

SHORT_NAMES = {
    AugOp.LOW_RESOLUTION: "LR",
    AugOp.CROP: "Crop",
    AugOp.PHOTOMETRIC: "Pho",
    AugOp.GRAYSCALE: "Gray",
    AugOp.GAUSSIAN_NOISE: "GN",
    AugOp.GAUSSIAN_BLUR: "GB",
    AugOp.CHANNEL_SHUFFLE: "CS",
    AugOp.HISTOGRAM_EQUALIZATION: "HE",
    AugOp.AUTOCONTRAST: "AC",
    AugOp.RANDOM_AFFINE: "Aff",
    AugOp.RANDOM_PERSPECTIVE: "Per",
}


@dataclass(frozen=True)
class SmuSettings:
    probability: float = 1.0
    d0: float = 60.0
    d0_choices: tuple = ()

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"SMU probability must be in [0, 1], got {self.probability}")
        for d in (self.d0, *self.d0_choices):
            if not d > 0:
                raise ValueError(f"d0 must be positive, got {d}")

    def describe(self):
        if self.d0_choices:
            return "d0~U{" + ",".join(f"{d:g}" for d in self.d0_choices) + "}"
        return f"d0={self.d0:g}"


@dataclass(frozen=True)
class PipelineConfig:
    """Immutable augmentation recipe.

    ``probabilities`` maps every AugOp to a gate probability; missing ops
    default to 0.  Ordering flags place grayscale and equalization before
    and/or after the rest of the chain.
    """

    probabilities: dict = field(default_factory=dict)
    gray_first: bool = False
    gray_last: bool = False
    he_first: bool = False
    he_last: bool = False
    smu: SmuSettings = None
    master_seed: int = 0

    def __post_init__(self):
        probs = {op: 0.0 for op in AugOp}
        for key, p in self.probabilities.items():
            op = AugOp(key)
            p = float(p)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability for {op.value} must be in [0, 1], got {p}")
            probs[op] = p
        object.__setattr__(self, "probabilities", probs)
        if probs[AugOp.GRAYSCALE] > 0 and not (self.gray_first or self.gray_last):
            raise ValueError("grayscale has p > 0 but neither gray_first nor gray_last is set")
        if probs[AugOp.HISTOGRAM_EQUALIZATION] > 0 and not (self.he_first or self.he_last):
            raise ValueError("equalization has p > 0 but neither he_first nor he_last is set")
        if probs[AugOp.RANDOM_AFFINE] > 0 and probs[AugOp.RANDOM_PERSPECTIVE] > 0:
            raise ValueError("choose either random affine or random perspective, not both")

    def p(self, op):
        return self.probabilities[AugOp(op)]

    @property
    def geometry(self):
        if self.p(AugOp.RANDOM_PERSPECTIVE) > 0:
            return AugOp.RANDOM_PERSPECTIVE
        if self.p(AugOp.RANDOM_AFFINE) > 0:
            return AugOp.RANDOM_AFFINE
        return None

    def with_updates(self, **kwargs):
        probs = kwargs.pop("probabilities", None)
        merged = dict(self.probabilities)
        if probs:
            merged.update({AugOp(k): v for k, v in probs.items()})
        return replace(self, probabilities=merged, **kwargs)

    def to_dict(self):
        return {
            "probabilities": {op.value: self.probabilities[op] for op in AugOp},
            "order": {
                "gray_first": self.gray_first,
                "gray_last": self.gray_last,
                "he_first": self.he_first,
                "he_last": self.he_last,
            },
            "smu": None if self.smu is None else {
                "probability": self.smu.probability,
                "d0": self.smu.d0,
                "d0_choices": list(self.smu.d0_choices),
            },
            "seed": self.master_seed,
        }

    def digest(self):
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


# ---------------------------------------------------------------------------
# preset catalog


def _row(lr=0.0, crop=0.0, pho=0.0, **others):
    return {"lr": lr, "crop": crop, "pho": pho, **others}


_B0 = _row(0.2, 0.2, 0.2)
_B1 = _row(0.5, 0.5, 0.5)
_B1_G1 = {**_B1, "gray": 0.2}  # alias SA-B2
_B1_G2 = {**_B1, "gray": 0.4}
_B3 = {**_B1_G2, "gb": 0.4, "gn": 0.4}  # SA-B3-GB1-GN1, alias SA-B4
_B4_PER1 = {**_B3, "rp": 0.4}  # alias SA-B5
_B5_G3_HE3 = {**_B4_PER1, "gray": 1.0, "he": 1.0}  # alias SA-B6

_ORDER_ROWS = {
    "SA-B6-O1": (True, False, False, True),
    "SA-B6-O2": (False, True, False, True),
    "SA-B6-O3": (False, True, True, False),
    "SA-B6-O4": (True, True, True, False),
    "SA-B6-O5": (False, True, True, True),
    "SA-B6-O6": (True, False, True, True),
    "SA-B6-O7": (True, True, False, True),
    "SA-B6-O8": (True, True, True, True),
}

# name -> (description, probabilities, (gray_first, gray_last, he_first, he_last))
PRESETS = {
    "SA-B0": ("base augmentation (AdaFace default)", _B0, None),
    "SA-B1": ("stronger base augmentation", _B1, None),
    "SA-B0-G0": ("SA-B0 + grayscale 0.01", {**_B0, "gray": 0.01}, None),
    "SA-B0-G1": ("SA-B0 + grayscale 0.2", {**_B0, "gray": 0.2}, None),
    "SA-B1-G1": ("SA-B1 + grayscale 0.2", _B1_G1, None),
    "SA-B1-G2": ("SA-B1 + grayscale 0.4", _B1_G2, None),
    "SA-B0-CS0": ("SA-B0 + channel shuffle 0.01", {**_B0, "cs": 0.01}, None),
    "SA-B1-CS1": ("SA-B1 + channel shuffle 0.2", {**_B1, "cs": 0.2}, None),
    "SA-B2-CS1": ("SA-B1-G1 + channel shuffle 0.2", {**_B1_G1, "cs": 0.2}, None),
    "SA-B2-GB0": ("SA-B1-G1 + blur 0.2", {**_B1_G1, "gb": 0.2}, None),
    "SA-B2-GN0": ("SA-B1-G1 + noise 0.2", {**_B1_G1, "gn": 0.2}, None),
    "SA-B2-GB0-GN0": ("SA-B1-G1 + blur 0.2 + noise 0.2", {**_B1_G1, "gb": 0.2, "gn": 0.2}, None),
    "SA-B3-GB1-GN1": ("SA-B1-G2 + blur 0.4 + noise 0.4", _B3, None),
    "SA-B1-Per0": ("SA-B1 + perspective 0.2", {**_B1, "rp": 0.2}, None),
    "SA-B1-Aff0": ("SA-B1 + affine 0.2", {**_B1, "ra": 0.2}, None),
    "SA-B4-Per1": ("SA-B3-GB1-GN1 + perspective 0.4", _B4_PER1, None),
    "SA-B4-Aff1": ("SA-B3-GB1-GN1 + affine 0.4", {**_B3, "ra": 0.4}, None),
    "SA-B0-HE0": ("SA-B0 + equalization 0.05", {**_B0, "he": 0.05}, None),
    "SA-B0-HE1": ("SA-B0 + equalization 0.2", {**_B0, "he": 0.2}, None),
    "SA-B1-HE1": ("SA-B1 + equalization 0.2", {**_B1, "he": 0.2}, None),
    "SA-B1-HE2": ("SA-B1 + equalization 0.4", {**_B1, "he": 0.4}, None),
    "SA-B0-HE3": ("SA-B0 + equalization 1.0", {**_B0, "he": 1.0}, None),
    "SA-B1-HE3": ("SA-B1 + equalization 1.0", {**_B1, "he": 1.0}, None),
    "SA-B0-AC0": ("SA-B0 + autocontrast 0.05", {**_B0, "ac": 0.05}, None),
    "SA-B0-AC1": ("SA-B0 + autocontrast 0.2", {**_B0, "ac": 0.2}, None),
    "SA-B1-AC1": ("SA-B1 + autocontrast 0.2", {**_B1, "ac": 0.2}, None),
    "SA-B1-AC2": ("SA-B1 + autocontrast 0.4", {**_B1, "ac": 0.4}, None),
    "SA-B0-AC3": ("SA-B0 + autocontrast 1.0", {**_B0, "ac": 1.0}, None),
    "SA-B1-AC3": ("SA-B1 + autocontrast 1.0", {**_B1, "ac": 1.0}, None),
    "SA-B5-HE3": ("SA-B4-Per1 + equalization 1.0", {**_B4_PER1, "he": 1.0}, None),
    "SA-B5-G3-HE3": ("SA-B4-Per1 + grayscale 1.0 + equalization 1.0", _B5_G3_HE3, None),
    **{
        name: (
            "SA-B5-G3-HE3 with gray first/last, HE first/last = "
            + " ".join("T" if f else "F" for f in flags),
            _B5_G3_HE3,
            flags,
        )
        for name, flags in _ORDER_ROWS.items()
    },
    "DA-S0": ("original AdaFace augmentation", _B0, None),
    "DA-S1": ("weakest SA", {**_B0, "gray": 0.01}, None),
    "DA-S2": ("fourth strongest SA", {**_B1, "gray": 0.2}, None),
    "DA-S3": ("third strongest SA", {**_B1, "gray": 0.4}, None),
    "DA-S4": ("second strongest SA", {**_B1, "gray": 0.4, "rp": 0.4}, None),
    "DA-S5": ("strongest SA", {**_B1, "gray": 0.4, "rp": 0.4, "gb": 0.4, "gn": 0.4}, None),
}

FINAL_SA = "SA-B6-O4"


def preset_names():
    return list(PRESETS)


def build_preset(name, master_seed=0, smu=None):
    """Resolve a catalog name into a full PipelineConfig.

    Presets outside the ordering study put grayscale and equalization first.
    """
    try:
        _, probs, flags = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}") from None
    if flags is None:
        flags = (probs.get("gray", 0) > 0, False, probs.get("he", 0) > 0, False)
    gf, gl, hf, hl = flags
    return PipelineConfig(
        probabilities=dict(probs),
        gray_first=gf,
        gray_last=gl,
        he_first=hf,
        he_last=hl,
        smu=smu,
        master_seed=master_seed,
    )


# ---------------------------------------------------------------------------
# config files

_BOOL = {"true": True, "t": True, "yes": True, "1": True, "false": False, "f": False, "no": False, "0": False}


def _parse_bool(text, key):
    try:
        return _BOOL[text.strip().lower()]
    except KeyError:
        raise ValueError(f"[order] {key}: expected true/false, got {text!r}") from None


def config_from_text(text, base=None):
    """Parse an INI-style configuration.

    Sections: ``[preset] name``, ``[probabilities]`` keyed by op names,
    ``[order]`` flags, ``[smu] probability / d0`` (a comma list means a
    uniform draw) and ``[seed] value``.  Explicit keys override the preset.
    """
    parser = configparser.ConfigParser()
    parser.read_string(text)
    known = {"preset", "probabilities", "order", "smu", "seed"}
    unknown = set(parser.sections()) - known
    if unknown:
        raise ValueError(f"unknown config section(s): {sorted(unknown)}")

    name = parser.get("preset", "name", fallback=None)
    cfg = build_preset(name) if name else (base or PipelineConfig())
    probs = dict(cfg.probabilities)
    if parser.has_section("probabilities"):
        for key, value in parser.items("probabilities"):
            try:
                op = AugOp(key)
            except ValueError:
                raise ValueError(f"unknown probability key {key!r}") from None
            probs[op] = float(value)

    order = {
        "gray_first": cfg.gray_first,
        "gray_last": cfg.gray_last,
        "he_first": cfg.he_first,
        "he_last": cfg.he_last,
    }
    explicit_order = set()
    if parser.has_section("order"):
        for key, value in parser.items("order"):
            if key not in order:
                raise ValueError(f"unknown order key {key!r}")
            order[key] = _parse_bool(value, key)
            explicit_order.add(key)
    # grayscale/equalization default to the front of the chain
    if probs[AugOp.GRAYSCALE] > 0 and not (order["gray_first"] or order["gray_last"]):
        if not explicit_order & {"gray_first", "gray_last"}:
            order["gray_first"] = True
    if probs[AugOp.HISTOGRAM_EQUALIZATION] > 0 and not (order["he_first"] or order["he_last"]):
        if not explicit_order & {"he_first", "he_last"}:
            order["he_first"] = True

    smu = cfg.smu
    if parser.has_section("smu"):
        sec = parser["smu"]
        enabled = _parse_bool(sec.get("enabled", "true"), "enabled")
        if enabled:
            smu = SmuSettings(
                probability=float(sec.get("probability", 1.0)),
                **parse_d0_spec(sec.get("d0", "60")),
            )
        else:
            smu = None

    seed = cfg.master_seed
    if parser.has_section("seed"):
        seed = int(parser.get("seed", "value"))

    return PipelineConfig(probabilities=probs, smu=smu, master_seed=seed, **order)


def load_config(path, base=None):
    with open(path, encoding="utf-8") as fh:
        return config_from_text(fh.read(), base=base)


def parse_d0_spec(text):
    """``"60"`` -> fixed cut-off; ``"15,30,45,60"`` -> uniform over the set."""
    values = [float(v) for v in str(text).split(",") if v.strip()]
    if not values:
        raise ValueError("empty d0 specification")
    if len(values) == 1:
        return {"d0": values[0], "d0_choices": ()}
    return {"d0": values[0], "d0_choices": tuple(values)}


# ---------------------------------------------------------------------------
# execution


def sample_gate(p, rng):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {p}")
    if p == 0.0:
        return False
    if p == 1.0:
        return True
    return bool(rng.random() < p)


def _geometry_fn(op):
    if op is AugOp.RANDOM_PERSPECTIVE:
        return aug.random_perspective
    return aug.random_affine


def _stages(cfg):
    """Ordered (stage index, label, op, probability) for every scheduled stage."""
    out = []
    pg = cfg.p(AugOp.GRAYSCALE)
    phe = cfg.p(AugOp.HISTOGRAM_EQUALIZATION)
    if cfg.gray_first and pg > 0:
        out.append((STAGE_GRAY_FIRST, AugOp.GRAYSCALE, pg))
    if cfg.he_first and phe > 0:
        out.append((STAGE_HE_FIRST, AugOp.HISTOGRAM_EQUALIZATION, phe))
    if cfg.p(AugOp.AUTOCONTRAST) > 0:
        out.append((STAGE_AC, AugOp.AUTOCONTRAST, cfg.p(AugOp.AUTOCONTRAST)))
    for op, idx in STAGE_BASE.items():
        if cfg.p(op) > 0:
            out.append((idx, op, cfg.p(op)))
    geo = cfg.geometry
    if geo is not None:
        out.append((STAGE_GEOMETRY, geo, cfg.p(geo)))
    if cfg.gray_last and pg > 0:
        out.append((STAGE_GRAY_LAST, AugOp.GRAYSCALE, pg))
    if cfg.he_last and phe > 0:
        out.append((STAGE_HE_LAST, AugOp.HISTOGRAM_EQUALIZATION, phe))
    return out


def explain_pipeline(cfg):
    """Human-readable stage list, in execution order, e.g. ``"LR@0.2"``."""
    lines = [f"{SHORT_NAMES[op]}@{p:g}" for _, op, p in _stages(cfg)]
    if cfg.smu is not None:
        lines.append(f"SMU@{cfg.smu.probability:g}({cfg.smu.describe()})")
    return lines


def _apply(op, img, rng):
    if op is AugOp.GRAYSCALE:
        # single-channel images are already gray
        return aug.grayscale3(img) if img.shape[2] == 3 else img
    if op is AugOp.HISTOGRAM_EQUALIZATION:
        return aug.equalize_histogram(img)
    if op is AugOp.AUTOCONTRAST:
        return aug.autocontrast(img)
    if op is AugOp.GAUSSIAN_BLUR:
        return aug.gaussian_blur(img, rng)
    if op is AugOp.GAUSSIAN_NOISE:
        return aug.add_gaussian_noise(img, rng)
    if op is AugOp.CHANNEL_SHUFFLE:
        return aug.channel_shuffle(img, rng) if img.shape[2] == 3 else img
    if op in (AugOp.CROP, AugOp.LOW_RESOLUTION, AugOp.PHOTOMETRIC):
        return aug.base_augment(img, op, rng)
    return _geometry_fn(op)(img, rng)


def run_pipeline(syn, real, cfg, image_index, record=None):
    """Augment one synthetic image.

    ``record``, if a list, receives one ``(stage_label, fired, detail)``
    tuple per scheduled stage in execution order.
    """
    img = as_image(syn, copy=True)
    if cfg.smu is not None and real is None:
        raise ValueError("SMU is enabled but no real image was supplied")
    for idx, op, p in _stages(cfg):
        rng = aug.rng_stream(cfg.master_seed, image_index, idx)
        fired = sample_gate(p, rng)
        if fired:
            img = _apply(op, img, rng)
        if record is not None:
            record.append((SHORT_NAMES[op], fired, None))
    if cfg.smu is not None:
        rng = aug.rng_stream(cfg.master_seed, image_index, STAGE_SMU)
        fired = sample_gate(cfg.smu.probability, rng)
        d0 = None
        if fired:
            s = cfg.smu
            d0 = float(s.d0_choices[rng.integers(len(s.d0_choices))]) if s.d0_choices else s.d0
            img = smu_mix(img, real, d0)
        if record is not None:
            record.append(("SMU", fired, d0))
    return img


def executed_trace(record):
    return [label for label, fired, _ in record if fired]


def force_open(cfg):
    """Copy of ``cfg`` with every non-zero gate raised to 1."""
    probs = {op: (1.0 if p > 0 else 0.0) for op, p in cfg.probabilities.items()}
    smu = None if cfg.smu is None else replace(cfg.smu, probability=1.0)
    return replace(cfg, probabilities=probs, smu=smu)

