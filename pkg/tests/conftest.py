"""Shared fixtures and hypothesis strategies."""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from gazegroup.ingest import Dataset, EntityAxis, Fixation, Scanpath

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def make_scanpath(rows, participant="p1", stimulus="s1"):
    """rows: (x, y, onset_ms, duration_ms) tuples, onset-sorted."""
    return Scanpath(
        participant, stimulus, tuple(Fixation(x, y, t, d) for x, y, t, d in rows)
    )


def make_dataset(scanpaths):
    participants = tuple(sorted({s.participant_id for s in scanpaths}))
    stimuli = tuple(sorted({s.stimulus_id for s in scanpaths}))
    ordered = tuple(sorted(scanpaths, key=lambda s: (s.participant_id, s.stimulus_id)))
    return Dataset(ordered, participants, stimuli, EntityAxis.PARTICIPANT, ())


coord = st.floats(min_value=-2000.0, max_value=2000.0, allow_nan=False, width=32)
duration = st.floats(min_value=0.5, max_value=2000.0, allow_nan=False, width=32)
gap = st.floats(min_value=0.0, max_value=500.0, allow_nan=False, width=32)


@st.composite
def fixation_rows(draw, min_size=1, max_size=12):
    """Onset-sorted (x, y, onset, duration) rows with nonnegative gaps."""
    n = draw(st.integers(min_value=min_size, max_value=max_size))
    t = draw(st.floats(min_value=0.0, max_value=1000.0, allow_nan=False, width=32))
    rows = []
    for _ in range(n):
        d = draw(duration)
        rows.append((draw(coord), draw(coord), t, d))
        t += d + draw(gap)
    return rows


@st.composite
def scanpaths(draw, min_fix=1, max_fix=12):
    return make_scanpath(draw(fixation_rows(min_fix, max_fix)))


@pytest.fixture
def rng():
    return np.random.default_rng(20180511)


def rows_to_csv(rows_by_scanpath):
    """rows_by_scanpath: {(pid, sid): [(x, y, onset, duration), ...]}."""
    lines = ["participant_id,stimulus_id,x,y,onset_ms,duration_ms"]
    for (pid, sid), rows in rows_by_scanpath.items():
        for x, y, t, d in rows:
            lines.append(f"{pid},{sid},{x},{y},{t},{d}")
    return ("\n".join(lines) + "\n").encode("utf-8")
