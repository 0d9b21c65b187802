"""Top-level acceptance checks, one test per release criterion.

Each test name carries its criterion number so a verbose run prints one
pass/fail line per criterion. Tolerances are stated inline; everything
here runs against public package APIs plus the naive oracles in
tests/oracles.py.
"""

import os
import subprocess
import sys
import time

import numpy as np
import pytest
from sklearn.metrics import adjusted_rand_score

from gazegroup.clustering import agglomerate, cut, leaf_order
from gazegroup.colorspace import in_srgb_gamut, lab_to_srgb8
from gazegroup.hilbert import d2xy, side_length
from gazegroup.ingest import parse_fixation_csv
from gazegroup.layout import (
    DEFAULT_CHROMA,
    assign_colors,
    assign_subgrid,
    build_matrix_layout,
)
from gazegroup.metrics import (
    METRIC_IDS,
    MetricTable,
    WeightVector,
    aggregate,
    k_coefficient,
    merge_metrics,
    normalize,
    scanpath_metrics,
)
from gazegroup.similarity import DistanceMatrix, combined_distance, pairwise_similarity
from gazegroup.synth import generate, parse_group_spec
from tests.conftest import make_scanpath
from tests.oracles import (
    LAB_SRGB_REFERENCES,
    naive_k_coefficient,
    naive_linkage,
    naive_saccade_lengths,
    naive_scanpath_metrics,
)


def _random_scanpath(rng, n_fix, tag):
    rows = []
    onset = 0.0
    for _ in range(n_fix):
        duration = float(rng.uniform(40, 600))
        rows.append(
            (float(rng.uniform(0, 1280)), float(rng.uniform(0, 960)), onset, duration)
        )
        onset += duration + float(rng.uniform(0, 120))
    return make_scanpath(rows, participant=tag), rows


def test_criterion_01_metric_oracle_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(101)
    for i in range(100):
        sp, rows = _random_scanpath(rng, int(rng.integers(1, 30)), f"p{i}")
        got = scanpath_metrics(sp)
        want = naive_scanpath_metrics(rows)
        for metric in METRIC_IDS:
            expected = want[metric]
            if expected is None:
                assert not got.is_defined(metric), metric
            else:
                assert got.is_defined(metric), metric
                assert got.value(metric) == _approx(expected, 1e-9), metric

    worked = make_scanpath([(0, 0, 0, 100), (3, 4, 150, 100), (3, 12, 300, 100)])
    v = scanpath_metrics(worked)
    assert v.value("ScanLen") == 13.0
    assert v.value("AvgFix") == 100.0
    assert v.value("FixRate") == 7.5
    assert time.perf_counter() - start < 1.0


def _approx(expected, tol):
    return pytest.approx(expected, rel=0.0, abs=tol)


def test_criterion_02_k_coefficient_conventions():
    # equal durations and equal amplitudes: both spreads are zero, K = 0
    flat = make_scanpath([(0, 0, 0, 100), (10, 0, 120, 100), (20, 0, 240, 100)])
    assert k_coefficient(flat) == 0.0

    focal = make_scanpath([(0, 0, 0, 500), (10, 0, 520, 500), (300, 0, 1040, 100)])
    ambient = make_scanpath([(0, 0, 0, 100), (300, 0, 120, 100), (310, 0, 240, 500)])
    assert k_coefficient(focal) > 0.0
    assert k_coefficient(ambient) < 0.0

    rng = np.random.default_rng(202)
    for i in range(50):
        sp, rows = _random_scanpath(rng, int(rng.integers(2, 25)), f"k{i}")
        want = naive_k_coefficient(
            [r[3] for r in rows], naive_saccade_lengths(rows)
        )
        assert k_coefficient(sp) == _approx(want, 1e-9)


def test_criterion_03_pairwise_tensor_brute_force():
    rng = np.random.default_rng(303)
    norm = rng.random((10, 16))
    table = MetricTable(
        entities=tuple(f"e{i}" for i in range(10)), values=norm.copy(), normalized=norm
    )
    tensor = pairwise_similarity(table)
    sv = tensor.values
    assert sv.shape == (10, 10, 16)

    assert np.array_equal(sv, sv.transpose(1, 0, 2))
    assert np.all(sv[np.arange(10), np.arange(10), :] == 0.0)

    pairs_checked = 0
    for m in range(16):
        for a in range(10):
            for b in range(a + 1, 10):
                brute = abs(norm[a, m] - norm[b, m])
                assert abs(sv[a, b, m] - brute) <= 1e-12
                if m == 0:
                    pairs_checked += 1
    assert pairs_checked == 45  # C(10, 2) pairs per metric slice

    for m in range(16):
        d = sv[:, :, m]
        via = (d[:, :, None] + d[None, :, :]).min(axis=1)
        assert np.all(via + 1e-12 >= d)


def test_criterion_04_clustering_matches_naive_oracle():
    rng = np.random.default_rng(404)
    for p in range(2, 9):
        for linkage in ("single", "complete", "average"):
            for _ in range(30):
                raw = rng.random((p, p))
                sym = (raw + raw.T) / 2.0
                np.fill_diagonal(sym, 0.0)
                dm = DistanceMatrix(sym, tuple(f"e{i}" for i in range(p)), "test")
                got = agglomerate(dm, linkage)
                want = naive_linkage(sym, linkage)
                assert len(got.merges) == len(want)
                for merge, (left, right, height, size) in zip(got.merges, want):
                    assert merge.left == left
                    assert merge.right == right
                    assert merge.size == size
                    assert abs(merge.height - height) <= 1e-9


def test_criterion_05_planted_group_recovery():
    start = time.perf_counter()
    result = generate(parse_group_spec("focal:20,ambient:20"), n_stimuli=3, seed=1)
    dataset, report = parse_fixation_csv(result.csv_bytes)
    assert report.ok and dataset is not None

    table = normalize(aggregate(dataset))
    assert table.n_entities == 40
    dm = combined_distance(table, WeightVector({"AvgFix": 0.5, "AvgSac": 0.5}))
    dendro = agglomerate(dm, "average")
    labels = cut(dendro, 2)

    planted = [result.labels[e] for e in table.entities]
    assert adjusted_rand_score(planted, labels) == 1.0

    order = leaf_order(dendro)
    runs = []
    for idx in order:
        group = planted[idx]
        if not runs or runs[-1] != group:
            runs.append(group)
    assert len(runs) == 2  # each planted group is one contiguous block
    assert time.perf_counter() - start < 1.0


def test_criterion_06_hilbert_walk_properties():
    for order in range(1, 5):
        side = side_length(order)
        total = side * side
        seen = set()
        prev = None
        for d in range(total):
            x, y = d2xy(order, d)
            assert 0 <= x < side and 0 <= y < side
            seen.add((x, y))
            if prev is not None:
                assert abs(x - prev[0]) + abs(y - prev[1]) == 1
            prev = (x, y)
        assert len(seen) == total
    assert d2xy(2, 0) == (0, 0)
    assert d2xy(2, 15) == (3, 0)


def test_criterion_07_matrix_layout_structure():
    rng = np.random.default_rng(707)
    norm = rng.random((8, 16))
    table = MetricTable(
        entities=tuple(f"e{i}" for i in range(8)), values=norm.copy(), normalized=norm
    )
    subgrid = assign_subgrid(METRIC_IDS)
    assert subgrid.side == 4  # 16 metrics stack into 4x4 sub-cells
    layout = build_matrix_layout(
        pairwise_similarity(table), tuple(range(8)), subgrid
    )
    assert layout.colors.shape == (8, 8, 16, 3)

    short = assign_subgrid(METRIC_IDS[:10])
    assert set(short.empty_cells()) == {d2xy(2, d) for d in range(10, 16)}

    spec = assign_colors(METRIC_IDS)
    lightnesses = [spec.lightness(d) for d in np.linspace(0.0, 1.0, 101)]
    assert all(a > b for a, b in zip(lightnesses, lightnesses[1:]))

    for k in range(16):
        hue = (20.0 * k) % 360.0
        for lightness in np.linspace(30.0, 90.0, 25):
            assert in_srgb_gamut(float(lightness), DEFAULT_CHROMA, hue)


def test_criterion_08_lab_to_srgb_references():
    for (lab_l, lab_a, lab_b), (r, g, b) in LAB_SRGB_REFERENCES:
        got = lab_to_srgb8(lab_l, lab_a, lab_b)
        for channel, expected in zip(got, (r, g, b)):
            assert abs(channel - expected) <= 1


def test_criterion_09_weighted_average_merge():
    rng = np.random.default_rng(909)
    norm = rng.random((5, 16))
    table = MetricTable(
        entities=tuple(f"e{i}" for i in range(5)), values=norm.copy(), normalized=norm
    )
    weights = WeightVector({"AvgFix": 0.7, "AvgSac": 0.3})
    wavg = merge_metrics(table, weights)

    i_fix = METRIC_IDS.index("AvgFix")
    i_sac = METRIC_IDS.index("AvgSac")
    for row in range(5):
        hand = 0.7 * norm[row, i_fix] + 0.3 * norm[row, i_sac]
        assert abs(wavg[row] - hand) <= 1e-12

    kept = {e for e, v in zip(table.entities, wavg) if v <= 0.3}
    brute = {
        table.entities[row]
        for row in range(5)
        if 0.7 * float(norm[row, i_fix]) + 0.3 * float(norm[row, i_sac]) <= 0.3
    }
    assert kept == brute


DRIVER = (
    "import sys\n"
    "from gazegroup.cli import main\n"
    "d = sys.argv[1]\n"
    "assert main(['synth', '--seed', '1', '--output', d + '/fix.csv']) == 0\n"
    "assert main(['metrics', '--input', d + '/fix.csv',"
    " '--output', d + '/table.csv']) == 0\n"
    "assert main(['matrix', '--input', d + '/fix.csv',"
    " '--weights', 'SkewX=0.15,SkewY=0.15,KurtX=0.35,KurtY=0.35',"
    " '--k', '2', '--output', d + '/dssm.svg']) == 0\n"
)


def _pipeline_outputs(run_dir, threads):
    run_dir.mkdir()
    env = dict(os.environ)
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        env[var] = str(threads)
    subprocess.run(
        [sys.executable, "-c", DRIVER, str(run_dir)],
        env=env,
        check=True,
        capture_output=True,
    )
    return {
        name: (run_dir / name).read_bytes()
        for name in ("fix.csv", "table.csv", "dssm.svg")
    }


def test_criterion_10_end_to_end_determinism(tmp_path):
    first = _pipeline_outputs(tmp_path / "run1", threads=1)
    second = _pipeline_outputs(tmp_path / "run2", threads=1)
    threaded = _pipeline_outputs(tmp_path / "run4", threads=4)
    assert first == second
    assert first == threaded
    assert first["fix.csv"].startswith(b"participant_id,")
    assert first["table.csv"].startswith(b"entity_id,")
    assert b"<svg" in first["dssm.svg"]
