import pytest
from hypothesis import given, strategies as st

from conftest import fixation_rows, make_dataset, make_scanpath, rows_to_csv
from gazegroup.ingest import (
    EntityAxis,
    parse_fixation_csv,
    parse_sidecar_csv,
    pivot_entities,
    serialize_dataset,
    with_sidecar,
)

GOOD = (
    b"participant_id,stimulus_id,x,y,onset_ms,duration_ms\n"
    b"p1,s1,0,0,0,100\n"
    b"p1,s1,3,4,150,200\n"
    b"p2,s1,10,10,0,80\n"
    b"p2,s1,20,10,120,90\n"
)


def test_happy_path():
    ds, report = parse_fixation_csv(GOOD)
    assert report.ok and ds is not None
    assert ds.participants == ("p1", "p2")
    assert ds.stimuli == ("s1",)
    assert report.n_fixations == 4
    sp = ds.scanpath("p1", "s1")
    assert [f.onset_ms for f in sp.fixations] == [0.0, 150.0]


def test_header_columns_may_be_reordered():
    csv = (
        b"duration_ms,x,y,participant_id,stimulus_id,onset_ms\n"
        b"100,1,2,p1,s1,0\n"
        b"100,4,6,p1,s1,150\n"
    )
    ds, report = parse_fixation_csv(csv)
    assert report.ok
    assert ds.scanpath("p1", "s1").fixations[0].x == 1.0


@pytest.mark.parametrize(
    "data,fragment",
    [
        (b"", "empty file"),
        (b"\xff\xfe\x00bogus", "not valid UTF-8"),
        (b"participant_id,stimulus_id,x,y\np,s,1,2\n", "missing required column"),
        (GOOD + b"p3,s1,1\n", "expected 6 fields"),
        (GOOD + b",s1,1,2,0,100\n", "empty participant_id or stimulus_id"),
        (GOOD + b"p3,s1,oops,2,0,100\n", "non-numeric x"),
        (GOOD + b"p3,s1,inf,2,0,100\n", "x or y not finite"),
        (GOOD + b"p3,s1,1,2,nan,100\n", "onset_ms not finite"),
        (GOOD + b"p3,s1,1,2,0,0\n", "duration_ms must be > 0"),
        (GOOD + b"p3,s1,1,2,0,-5\n", "duration_ms must be > 0"),
        (b"participant_id,stimulus_id,x,y,onset_ms,duration_ms\n", "no data rows"),
    ],
)
def test_rejections(data, fragment):
    ds, report = parse_fixation_csv(data)
    assert ds is None
    assert any(fragment in msg for _, msg in report.errors)


def test_error_rows_are_one_based_data_rows():
    data = GOOD + b"p3,s1,oops,2,0,100\n"
    _, report = parse_fixation_csv(data)
    assert report.errors[0][0] == 5


def test_duplicate_onset_rejected():
    data = GOOD + b"p2,s1,5,5,120,50\n"
    ds, report = parse_fixation_csv(data)
    assert ds is None
    assert any("duplicate" in msg for _, msg in report.errors)


def test_out_of_order_resorted_with_warning():
    data = (
        b"participant_id,stimulus_id,x,y,onset_ms,duration_ms\n"
        b"p1,s1,0,0,500,100\n"
        b"p1,s1,1,1,0,100\n"
    )
    ds, report = parse_fixation_csv(data)
    assert report.ok
    assert any("re-sorted" in msg for _, msg in report.warnings)
    assert [f.onset_ms for f in ds.scanpath("p1", "s1").fixations] == [0.0, 500.0]


def test_out_of_order_is_error_when_strict():
    data = (
        b"participant_id,stimulus_id,x,y,onset_ms,duration_ms\n"
        b"p1,s1,0,0,500,100\n"
        b"p1,s1,1,1,0,100\n"
    )
    ds, report = parse_fixation_csv(data, strict=True)
    assert ds is None
    assert any("out of onset order" in msg for _, msg in report.errors)


def test_overlap_and_single_fixation_warnings():
    data = (
        b"participant_id,stimulus_id,x,y,onset_ms,duration_ms\n"
        b"p1,s1,0,0,0,200\n"
        b"p1,s1,1,1,100,50\n"  # starts before the previous fixation ends
        b"p2,s1,0,0,0,100\n"
    )
    ds, report = parse_fixation_csv(data)
    assert report.ok
    assert any("overlapping" in msg for _, msg in report.warnings)
    assert any("single-fixation" in msg for _, msg in report.warnings)
    assert len(ds.scanpath("p2", "s1").fixations) == 1


def test_blank_lines_skipped():
    ds, report = parse_fixation_csv(GOOD + b"\n\n")
    assert report.ok and report.n_fixations == 4


def test_sidecar_roundtrip():
    sidecar = b"participant_id,stimulus_id,trial_duration_ms\np1,s1,5000\n"
    overrides = parse_sidecar_csv(sidecar)
    assert overrides == ((("p1", "s1"), 5000.0),)
    ds, _ = parse_fixation_csv(GOOD)
    ds2 = with_sidecar(ds, overrides)
    assert ds2.trial_duration("p1", "s1") == 5000.0
    assert ds2.trial_duration("p2", "s1") is None


def test_sidecar_rejects_bad_header():
    with pytest.raises(ValueError):
        parse_sidecar_csv(b"a,b,c\n1,2,3\n")


def test_pivot_is_involutive():
    ds, _ = parse_fixation_csv(GOOD)
    assert ds.entity_axis is EntityAxis.PARTICIPANT
    assert ds.entities() == ("p1", "p2")
    flipped = pivot_entities(ds, EntityAxis.STIMULUS)
    assert flipped.entities() == ("s1",)
    assert len(flipped.scanpaths_for("s1")) == 2
    back = pivot_entities(flipped, EntityAxis.PARTICIPANT)
    assert back.entities() == ds.entities()


def test_serialize_parse_identity():
    ds, _ = parse_fixation_csv(GOOD)
    data = serialize_dataset(ds)
    ds2, report = parse_fixation_csv(data)
    assert report.ok
    assert ds2 == ds
    assert serialize_dataset(ds2) == data


@given(
    st.lists(fixation_rows(min_size=1, max_size=6), min_size=1, max_size=4),
)
def test_serialize_parse_identity_random(rowsets):
    scanpaths = [
        make_scanpath(rows, participant=f"p{i}", stimulus="s1")
        for i, rows in enumerate(rowsets)
    ]
    ds = make_dataset(scanpaths)
    data = serialize_dataset(ds)
    parsed, report = parse_fixation_csv(data)
    assert report.ok
    assert parsed == ds


@given(st.lists(fixation_rows(min_size=2, max_size=8), min_size=1, max_size=3))
def test_parsed_fixations_always_onset_sorted(rowsets):
    csv = rows_to_csv(
        {(f"p{i}", "s1"): rows for i, rows in enumerate(rowsets)}
    )
    ds, report = parse_fixation_csv(csv)
    assert report.ok
    for sp in ds.scanpaths:
        onsets = [f.onset_ms for f in sp.fixations]
        assert onsets == sorted(onsets)
