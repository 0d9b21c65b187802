"""Fixation-sequence ingestion: CSV parsing, validation, and indexing.

Input schema (header required, comma-separated, '.' decimal):

    participant_id, stimulus_id, x, y, onset_ms, duration_ms

Rows are grouped into one scanpath per (participant, stimulus) pair and
sorted by onset. Parsing is deterministic and the resulting Dataset is
immutable, so it is safe to share across threads.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, replace

REQUIRED_COLUMNS = ("participant_id", "stimulus_id", "x", "y", "onset_ms", "duration_ms")

SIDECAR_COLUMNS = ("participant_id", "stimulus_id", "trial_duration_ms")


class EntityAxis(enum.Enum):
    """Which identifier downstream modules group by; the other is averaged over."""

    PARTICIPANT = "participant"
    STIMULUS = "stimulus"


@dataclass(frozen=True)
class Fixation:
    x: float
    y: float
    onset_ms: float
    duration_ms: float


@dataclass(frozen=True)
class Scanpath:
    """Time-ordered fixation sequence of one participant on one stimulus."""

    participant_id: str
    stimulus_id: str
    fixations: tuple[Fixation, ...]

    def xs(self) -> list[float]:
        return [f.x for f in self.fixations]

    def ys(self) -> list[float]:
        return [f.y for f in self.fixations]

    def durations(self) -> list[float]:
        return [f.duration_ms for f in self.fixations]


@dataclass(frozen=True)
class Dataset:
    scanpaths: tuple[Scanpath, ...]
    participants: tuple[str, ...]
    stimuli: tuple[str, ...]
    entity_axis: EntityAxis = EntityAxis.PARTICIPANT
    # Optional sidecar override of derived completion times, keyed by
    # (participant_id, stimulus_id).
    trial_durations: tuple[tuple[tuple[str, str], float], ...] = ()

    def entities(self) -> tuple[str, ...]:
        if self.entity_axis is EntityAxis.PARTICIPANT:
            return self.participants
        return self.stimuli

    def scanpaths_for(self, entity_id: str) -> tuple[Scanpath, ...]:
        if self.entity_axis is EntityAxis.PARTICIPANT:
            return tuple(s for s in self.scanpaths if s.participant_id == entity_id)
        return tuple(s for s in self.scanpaths if s.stimulus_id == entity_id)

    def scanpath(self, participant_id: str, stimulus_id: str) -> Scanpath | None:
        key = (participant_id, stimulus_id)
        for s in self.scanpaths:
            if (s.participant_id, s.stimulus_id) == key:
                return s
        return None

    def trial_duration(self, participant_id: str, stimulus_id: str) -> float | None:
        for key, value in self.trial_durations:
            if key == (participant_id, stimulus_id):
                return value
        return None


@dataclass(frozen=True)
class ValidationReport:
    """Row-indexed problems found while parsing; errors empty iff accepted.

    Row numbers are 1-based data-row indices (the header is not counted);
    file-level problems use row 0.
    """

    errors: tuple[tuple[int, str], ...] = ()
    warnings: tuple[tuple[int, str], ...] = ()
    n_participants: int = 0
    n_stimuli: int = 0
    n_fixations: int = 0

    @property
    def ok(self) -> bool:
        return not self.errors


def parse_fixation_csv(data: bytes, strict: bool = False) -> tuple[Dataset | None, ValidationReport]:
    """Parse CSV bytes into a Dataset, or report errors.

    Returns (dataset, report); dataset is None exactly when the report has
    errors. Out-of-order fixations are re-sorted with a warning (an error
    under strict=True); overlapping fixations are kept with a warning.
    """
    errors: list[tuple[int, str]] = []
    warnings: list[tuple[int, str]] = []

    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        return None, ValidationReport(errors=((0, f"not valid UTF-8: {exc}"),))

    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        return None, ValidationReport(errors=((0, "empty file"),))

    header = [h.strip() for h in header]
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        return None, ValidationReport(
            errors=((0, f"missing required column(s): {', '.join(missing)}"),)
        )
    col = {name: header.index(name) for name in REQUIRED_COLUMNS}

    rows: dict[tuple[str, str], list[tuple[int, Fixation]]] = {}
    seen_onsets: set[tuple[str, str, float]] = set()
    n_rows = 0
    for row_idx, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        n_rows += 1
        if len(row) < len(header):
            errors.append((row_idx, f"expected {len(header)} fields, got {len(row)}"))
            continue
        pid = row[col["participant_id"]].strip()
        sid = row[col["stimulus_id"]].strip()
        if not pid or not sid:
            errors.append((row_idx, "empty participant_id or stimulus_id"))
            continue
        values = {}
        bad = False
        for name in ("x", "y", "onset_ms", "duration_ms"):
            token = row[col[name]].strip()
            try:
                values[name] = float(token)
            except ValueError:
                errors.append((row_idx, f"non-numeric {name}: {token!r}"))
                bad = True
                break
        if bad:
            continue
        if not (math.isfinite(values["x"]) and math.isfinite(values["y"])):
            errors.append((row_idx, "x or y not finite"))
            continue
        if not math.isfinite(values["onset_ms"]):
            errors.append((row_idx, "onset_ms not finite"))
            continue
        if not (math.isfinite(values["duration_ms"]) and values["duration_ms"] > 0):
            errors.append((row_idx, f"duration_ms must be > 0, got {values['duration_ms']}"))
            continue
        onset_key = (pid, sid, values["onset_ms"])
        if onset_key in seen_onsets:
            errors.append(
                (row_idx, f"duplicate (participant, stimulus, onset) = ({pid}, {sid}, {values['onset_ms']})")
            )
            continue
        seen_onsets.add(onset_key)
        fixation = Fixation(values["x"], values["y"], values["onset_ms"], values["duration_ms"])
        rows.setdefault((pid, sid), []).append((row_idx, fixation))

    if n_rows == 0 and not errors:
        errors.append((0, "no data rows"))
    if errors:
        return None, ValidationReport(errors=tuple(errors), warnings=tuple(warnings))

    scanpaths = []
    for (pid, sid) in sorted(rows):
        group = rows[(pid, sid)]
        onsets = [f.onset_ms for _, f in group]
        if onsets != sorted(onsets):
            first_bad = next(i for i in range(1, len(onsets)) if onsets[i] < onsets[i - 1])
            row_idx = group[first_bad][0]
            if strict:
                errors.append((row_idx, f"fixations out of onset order for ({pid}, {sid})"))
                continue
            warnings.append((row_idx, f"fixations re-sorted by onset for ({pid}, {sid})"))
            group = sorted(group, key=lambda item: item[1].onset_ms)
        fixations = tuple(f for _, f in group)
        for (_, prev), (row_idx, nxt) in zip(group, group[1:]):
            if nxt.onset_ms < prev.onset_ms + prev.duration_ms:
                warnings.append(
                    (row_idx, f"overlapping fixations in ({pid}, {sid}); saccade duration clamps to 0")
                )
                break
        if len(fixations) == 1:
            warnings.append((0, f"single-fixation scanpath ({pid}, {sid}); saccade metrics undefined"))
        scanpaths.append(Scanpath(pid, sid, fixations))

    if errors:
        return None, ValidationReport(errors=tuple(errors), warnings=tuple(warnings))

    participants = tuple(sorted({s.participant_id for s in scanpaths}))
    stimuli = tuple(sorted({s.stimulus_id for s in scanpaths}))
    dataset = Dataset(tuple(scanpaths), participants, stimuli)
    report = ValidationReport(
        warnings=tuple(warnings),
        n_participants=len(participants),
        n_stimuli=len(stimuli),
        n_fixations=sum(len(s.fixations) for s in scanpaths),
    )
    return dataset, report


def parse_sidecar_csv(data: bytes) -> tuple[tuple[tuple[str, str], float], ...]:
    """Parse the optional trial-metadata sidecar (trial_duration_ms overrides)."""
    reader = csv.reader(io.StringIO(data.decode("utf-8")))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ValueError("sidecar: empty file")
    missing = [c for c in SIDECAR_COLUMNS if c not in header]
    if missing:
        raise ValueError(f"sidecar: missing column(s): {', '.join(missing)}")
    col = {name: header.index(name) for name in SIDECAR_COLUMNS}
    out: dict[tuple[str, str], float] = {}
    for row_idx, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        pid = row[col["participant_id"]].strip()
        sid = row[col["stimulus_id"]].strip()
        try:
            dur = float(row[col["trial_duration_ms"]].strip())
        except ValueError:
            raise ValueError(f"sidecar row {row_idx}: non-numeric trial_duration_ms")
        if not (math.isfinite(dur) and dur > 0):
            raise ValueError(f"sidecar row {row_idx}: trial_duration_ms must be > 0")
        out[(pid, sid)] = dur
    return tuple(sorted(out.items()))


def with_sidecar(dataset: Dataset, overrides: tuple[tuple[tuple[str, str], float], ...]) -> Dataset:
    return replace(dataset, trial_durations=overrides)


def serialize_dataset(dataset: Dataset) -> bytes:
    """Canonical CSV form; parse(serialize(parse(x))) round-trips exactly."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(REQUIRED_COLUMNS)
    for s in sorted(dataset.scanpaths, key=lambda s: (s.participant_id, s.stimulus_id)):
        for f in s.fixations:
            writer.writerow(
                [s.participant_id, s.stimulus_id, repr(f.x), repr(f.y), repr(f.onset_ms), repr(f.duration_ms)]
            )
    return out.getvalue().encode("utf-8")


def pivot_entities(dataset: Dataset, axis: EntityAxis) -> Dataset:
    """Choose which identifier is the grouped variable; involutive."""
    return replace(dataset, entity_axis=axis)
