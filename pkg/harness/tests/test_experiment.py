import json
import shutil

import pytest
from synth import bar_classes, make_variant_root, write_idx_pair

from edgebench import (ConfigError, ExperimentSpec, render_table,
                       run_experiment, write_report)

FAST = dict(seeds=(0,), epochs=1, batch_size=64)


@pytest.fixture(scope="module")
def roots(tmp_path_factory):
    base = tmp_path_factory.mktemp("variants")
    raw = make_variant_root(base / "raw",
                            bar_classes(160, seed=1), bar_classes(64, seed=2))
    other = make_variant_root(base / "other",
                              bar_classes(160, seed=8), bar_classes(64, seed=9))
    return raw, other


def test_spec_requires_seeds(roots):
    raw, other = roots
    with pytest.raises(ConfigError, match="seed"):
        ExperimentSpec(raw_root=raw, enhanced_root=other, seeds=())


def test_subset_must_be_positive(roots):
    raw, other = roots
    with pytest.raises(ConfigError, match="subset_size"):
        ExperimentSpec(raw_root=raw, enhanced_root=other, subset_size=0)


def test_subset_cannot_exceed_dataset(roots):
    raw, other = roots
    spec = ExperimentSpec(raw_root=raw, enhanced_root=other,
                          subset_size=1000, **FAST)
    with pytest.raises(ConfigError, match="exceeds"):
        run_experiment(spec)


def test_missing_split_rejected(roots, tmp_path):
    raw, _ = roots
    bare = tmp_path / "bare"
    write_idx_pair(bare / "train", *bar_classes(10, seed=0))
    spec = ExperimentSpec(raw_root=raw, enhanced_root=bare, **FAST)
    with pytest.raises(ConfigError, match="missing test"):
        run_experiment(spec)


def test_shape_mismatch_rejected(roots, tmp_path):
    raw, _ = roots
    wide = make_variant_root(tmp_path / "wide",
                             bar_classes(20, seed=3, size=16),
                             bar_classes(8, seed=4, size=16))
    spec = ExperimentSpec(raw_root=raw, enhanced_root=wide, **FAST)
    with pytest.raises(ConfigError, match="shapes differ"):
        run_experiment(spec)


def test_identity_variant_matches_raw(roots, tmp_path):
    raw, _ = roots
    copy = tmp_path / "copy"
    shutil.copytree(raw, copy)
    spec = ExperimentSpec(raw_root=raw, enhanced_root=copy,
                          seeds=(0, 1), epochs=1, batch_size=64)
    report = run_experiment(spec)
    by_variant = {}
    for row in report.rows:
        by_variant.setdefault(row["variant"], {})[row["seed"]] = row["accuracy"]
    assert by_variant["enhanced"] == by_variant["raw"]
    assert report.delta == 0.0


def test_rows_ordered_enhanced_first(roots):
    raw, other = roots
    spec = ExperimentSpec(raw_root=raw, enhanced_root=other,
                          seeds=(0, 1), epochs=1, batch_size=64)
    report = run_experiment(spec)
    assert [r["variant"] for r in report.rows] == ["enhanced"] * 2 + ["raw"] * 2
    assert set(report.means) == {"enhanced", "raw"}
    assert report.config["epochs"] == 1
    assert report.config["seeds"] == [0, 1]


def test_repeat_run_identical(roots):
    raw, other = roots
    spec = ExperimentSpec(raw_root=raw, enhanced_root=other, **FAST)
    assert run_experiment(spec).to_dict() == run_experiment(spec).to_dict()


def test_variant_symmetry(roots):
    """Swapping which root is called raw swaps the numbers and nothing else."""
    raw, other = roots
    forward = run_experiment(ExperimentSpec(raw_root=raw, enhanced_root=other, **FAST))
    swapped = run_experiment(ExperimentSpec(raw_root=other, enhanced_root=raw, **FAST))
    flip = {"raw": "enhanced", "enhanced": "raw"}
    assert {(flip[r["variant"]], r["seed"], r["accuracy"]) for r in forward.rows} \
        == {(r["variant"], r["seed"], r["accuracy"]) for r in swapped.rows}
    assert forward.means["raw"] == swapped.means["enhanced"]
    assert forward.delta == -swapped.delta


def test_full_subset_equals_no_subset(roots):
    raw, other = roots
    plain = run_experiment(ExperimentSpec(raw_root=raw, enhanced_root=other, **FAST))
    capped = run_experiment(ExperimentSpec(raw_root=raw, enhanced_root=other,
                                           subset_size=160, test_subset_size=64,
                                           **FAST))
    assert plain.rows == capped.rows


def test_write_report_files(roots, tmp_path):
    raw, other = roots
    report = run_experiment(ExperimentSpec(raw_root=raw, enhanced_root=other, **FAST))
    json_path, text_path = write_report(report, tmp_path / "out")
    assert json.loads(json_path.read_text()) == report.to_dict()
    table = text_path.read_text().splitlines()
    assert table[0].split() == ["variant", "mean", "seed", "0"]
    assert table[1].split()[0] == "enhanced"
    assert table[2].split()[0] == "raw"
    assert table[3].startswith("delta")
    assert render_table(report) + "\n" == text_path.read_text()
