"""Seeded synthetic fixation datasets with planted group structure.

Each group fixes a per-participant target band for fixation duration and
saccade amplitude; participants draw their personal means from that band
and every scanpath jitters around them. Groups with disjoint bands are
therefore recoverable by clustering on AvgFix/AvgSac, which gives tests a
known ground truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ingest import Dataset, EntityAxis, Fixation, Scanpath, serialize_dataset

CANVAS = (1024.0, 768.0)

# Preset bands: focal watchers dwell long and hop short, ambient watchers
# the reverse, mirroring the two attention styles the K coefficient tells
# apart.
PRESETS = {
    "focal": ((280.0, 380.0), (40.0, 80.0)),
    "ambient": ((90.0, 170.0), (220.0, 340.0)),
}
DEFAULT_GROUPS = "focal:20,ambient:20"


@dataclass(frozen=True)
class GroupSpec:
    name: str
    size: int
    fix_ms: tuple[float, float]  # participant-mean fixation duration band
    sac_px: tuple[float, float]  # participant-mean saccade amplitude band
    fix_count: tuple[int, int] = (20, 40)  # fixations per scanpath

    def __post_init__(self) -> None:
        if not self.name or any(c in self.name for c in ",:"):
            raise ValueError(f"bad group name {self.name!r}")
        if self.size < 1:
            raise ValueError("group size must be positive")
        for lo, hi in (self.fix_ms, self.sac_px, self.fix_count):
            if not (0 < lo <= hi):
                raise ValueError(f"bad range ({lo}, {hi})")


def _parse_range(text: str, what: str) -> tuple[float, float]:
    lo, sep, hi = text.partition("-")
    if not sep:
        raise ValueError(f"{what} range must look like lo-hi, got {text!r}")
    return float(lo), float(hi)


def parse_group_spec(text: str) -> tuple[GroupSpec, ...]:
    """Comma list of groups. Each group is either a preset ``name:size``
    (names: focal, ambient) or explicit ``name:size:fixlo-fixhi:saclo-sachi``
    with an optional trailing ``:countlo-counthi``."""
    groups = []
    for entry in text.split(","):
        parts = entry.strip().split(":")
        if len(parts) == 2:
            name, size = parts
            if name not in PRESETS:
                raise ValueError(
                    f"unknown preset {name!r}; presets are {sorted(PRESETS)} "
                    "(or give explicit ranges)"
                )
            fix_ms, sac_px = PRESETS[name]
            groups.append(GroupSpec(name, int(size), fix_ms, sac_px))
        elif len(parts) in (4, 5):
            name, size = parts[0], int(parts[1])
            fix_ms = _parse_range(parts[2], "fixation duration")
            sac_px = _parse_range(parts[3], "saccade amplitude")
            if len(parts) == 5:
                lo, hi = _parse_range(parts[4], "fixation count")
                groups.append(GroupSpec(name, size, fix_ms, sac_px, (int(lo), int(hi))))
            else:
                groups.append(GroupSpec(name, size, fix_ms, sac_px))
        else:
            raise ValueError(f"bad group entry {entry!r}")
    if not groups:
        raise ValueError("no groups given")
    if len({g.name for g in groups}) != len(groups):
        raise ValueError("group names must be unique")
    return tuple(groups)


def _fold(v: float, hi: float) -> float:
    """Reflect into [0, hi] so walks stay on a bounded canvas."""
    period = 2.0 * hi
    v = math.fmod(v, period)
    if v < 0:
        v += period
    return v if v <= hi else period - v


@dataclass(frozen=True)
class SynthResult:
    dataset: Dataset
    csv_bytes: bytes
    labels: dict[str, str]  # participant id -> group name


def generate(
    groups: tuple[GroupSpec, ...],
    n_stimuli: int = 3,
    seed: int = 0,
) -> SynthResult:
    if n_stimuli < 1:
        raise ValueError("need at least one stimulus")
    rng = np.random.default_rng(seed)
    stimuli = tuple(f"s{j + 1:02d}" for j in range(n_stimuli))
    width, height = CANVAS

    scanpaths = []
    labels: dict[str, str] = {}
    for group in groups:
        for j in range(group.size):
            pid = f"{group.name}{j + 1:02d}"
            labels[pid] = group.name
            mean_fix = rng.uniform(*group.fix_ms)
            mean_sac = rng.uniform(*group.sac_px)
            for sid in stimuli:
                n = int(rng.integers(group.fix_count[0], group.fix_count[1] + 1))
                durations = np.clip(
                    rng.normal(mean_fix, 0.08 * mean_fix, n), 5.0, None
                )
                amps = np.clip(
                    rng.normal(mean_sac, 0.12 * mean_sac, max(n - 1, 0)), 1.0, None
                )
                gaps = rng.uniform(20.0, 60.0, max(n - 1, 0))
                angles = rng.uniform(0.0, 2.0 * math.pi, max(n - 1, 0))
                x = float(rng.uniform(0.2 * width, 0.8 * width))
                y = float(rng.uniform(0.2 * height, 0.8 * height))
                t = float(rng.uniform(0.0, 50.0))
                fixations = []
                for i in range(n):
                    fixations.append(
                        Fixation(round(x, 3), round(y, 3), round(t, 3), round(float(durations[i]), 3))
                    )
                    if i < n - 1:
                        x = _fold(x + float(amps[i]) * math.cos(float(angles[i])), width)
                        y = _fold(y + float(amps[i]) * math.sin(float(angles[i])), height)
                        t += float(durations[i]) + float(gaps[i])
                scanpaths.append(Scanpath(pid, sid, tuple(fixations)))

    scanpaths.sort(key=lambda s: (s.participant_id, s.stimulus_id))
    dataset = Dataset(
        scanpaths=tuple(scanpaths),
        participants=tuple(sorted(labels)),
        stimuli=stimuli,
        entity_axis=EntityAxis.PARTICIPANT,
        trial_durations=(),
    )
    return SynthResult(dataset, serialize_dataset(dataset), labels)
