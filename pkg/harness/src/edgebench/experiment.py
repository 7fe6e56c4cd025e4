"""Raw-vs-enhanced comparison experiments.

A variant root holds two emitted datasets, `train/` and `test/`, in any
layout datasets.load_dataset understands.  The experiment trains the same
network with the same seeds on both variants and reports per-seed and mean
test accuracies.  The accuracy delta is part of the report, never a pass or
fail condition.
"""
import json
from dataclasses import dataclass, field
from pathlib import Path

from .datasets import load_dataset
from .errors import ConfigError
from .train import TrainConfig, train_and_score

VARIANT_ORDER = ("enhanced", "raw")  # enhanced rows come first in reports


@dataclass(frozen=True)
class ExperimentSpec:
    raw_root: Path
    enhanced_root: Path
    seeds: tuple[int, ...] = (0, 1, 2)
    epochs: int = 3
    batch_size: int = 128
    learning_rate: float = 1e-3
    subset_size: int | None = None       # cap on training items, first N
    test_subset_size: int | None = None  # cap on test items, first N

    def __post_init__(self):
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        for name in ("subset_size", "test_subset_size"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ConfigError(f"{name} must be >= 1, got {value}")

    def train_config(self) -> TrainConfig:
        return TrainConfig(self.epochs, self.batch_size, self.learning_rate)


@dataclass
class Report:
    rows: list[dict] = field(default_factory=list)  # {variant, seed, accuracy}
    means: dict = field(default_factory=dict)
    delta: float = 0.0  # mean(enhanced) - mean(raw)
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"rows": self.rows, "means": self.means,
                "delta_enhanced_minus_raw": self.delta, "config": self.config}


def _load_variant(root: Path, spec: ExperimentSpec):
    splits = {}
    for split in ("train", "test"):
        path = Path(root) / split
        if not path.is_dir():
            raise ConfigError(f"{root}: missing {split}/ dataset")
        images, labels, _ = load_dataset(path)
        cap = spec.subset_size if split == "train" else spec.test_subset_size
        if cap is not None:
            if cap > len(images):
                raise ConfigError(
                    f"{path}: subset of {cap} exceeds {len(images)} items")
            images, labels = images[:cap], labels[:cap]
        splits[split] = (images, labels)
    return splits


def run_experiment(spec: ExperimentSpec) -> Report:
    variants = {"raw": _load_variant(spec.raw_root, spec),
                "enhanced": _load_variant(spec.enhanced_root, spec)}
    for split in ("train", "test"):
        shapes = {v: variants[v][split][0].shape for v in variants}
        if shapes["raw"][1:] != shapes["enhanced"][1:]:
            raise ConfigError(
                f"{split} image shapes differ between variants: "
                f"raw {shapes['raw'][1:]} vs enhanced {shapes['enhanced'][1:]}")

    config = spec.train_config()
    report = Report(config={
        "seeds": list(spec.seeds), "epochs": spec.epochs,
        "batch_size": spec.batch_size, "learning_rate": spec.learning_rate,
        "subset_size": spec.subset_size, "test_subset_size": spec.test_subset_size,
        "raw_root": str(spec.raw_root), "enhanced_root": str(spec.enhanced_root),
    })
    for variant in VARIANT_ORDER:
        (x_train, y_train), (x_test, y_test) = (
            variants[variant]["train"], variants[variant]["test"])
        for seed in spec.seeds:
            accuracy = train_and_score(x_train, y_train, x_test, y_test, seed, config)
            report.rows.append(
                {"variant": variant, "seed": seed, "accuracy": accuracy})
    for variant in VARIANT_ORDER:
        scores = [r["accuracy"] for r in report.rows if r["variant"] == variant]
        report.means[variant] = sum(scores) / len(scores)
    report.delta = report.means["enhanced"] - report.means["raw"]
    return report


def render_table(report: Report) -> str:
    seeds = report.config["seeds"]
    header = ["variant", "mean"] + [f"seed {s}" for s in seeds]
    lines = ["  ".join(f"{h:>10}" for h in header)]
    for variant in VARIANT_ORDER:
        by_seed = {r["seed"]: r["accuracy"] for r in report.rows
                   if r["variant"] == variant}
        cells = [f"{variant:>10}", f"{report.means[variant]:>10.4f}"]
        cells += [f"{by_seed[s]:>10.4f}" for s in seeds]
        lines.append("  ".join(cells))
    lines.append(f"delta (enhanced - raw): {report.delta:+.4f}")
    return "\n".join(lines)


def write_report(report: Report, out_dir) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / "report.json"
    text_path = out_dir / "report.txt"
    with open(json_path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2)
    text_path.write_text(render_table(report) + "\n")
    return json_path, text_path
