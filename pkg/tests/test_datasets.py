import itertools
import json
import struct

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import make_cifar_batch, make_idx_pair, make_image_dir
from wavedge.datasets import (
    CIFAR_CLASSES,
    read_cifar_bin,
    read_idx,
    read_image_dir,
    write_enhanced,
)
from wavedge.errors import FormatError
from wavedge.image import Image
from wavedge.naive import NaiveConfig, enhance_naive
from wavedge.datasets import LabeledImage


def test_read_idx_known_bytes(tmp_path):
    images = np.array([
        [[0, 128, 255], [10, 20, 30]],
        [[1, 2, 3], [4, 5, 6]],
    ], dtype=np.uint8)
    images_path, labels_path = make_idx_pair(tmp_path, images, [7, 2])
    manifest, items = read_idx(images_path, labels_path)
    assert manifest.format == "idx"
    assert manifest.image_shape == (3, 2, 1)
    assert manifest.num_items == 2
    assert manifest.label_names == tuple(str(d) for d in range(10))

    got = list(items)
    assert [it.label for it in got] == [7, 2]
    assert_allclose(got[0].image.plane(0), images[0] / 255.0, rtol=0)
    assert_allclose(got[1].image.plane(0), images[1] / 255.0, rtol=0)


def test_read_idx_is_lazy(tmp_path, rng):
    images = rng.integers(0, 256, size=(50, 4, 4), dtype=np.uint8)
    paths = make_idx_pair(tmp_path, images, list(range(10)) * 5)
    _, items = read_idx(*paths)
    first_two = list(itertools.islice(items, 2))
    assert len(first_two) == 2  # nothing forced the remaining 48


def test_read_idx_bad_magics(tmp_path):
    images = np.zeros((1, 2, 2), dtype=np.uint8)
    images_path, labels_path = make_idx_pair(tmp_path, images, [0])

    broken = tmp_path / "broken-images"
    broken.write_bytes(b"\x00\x00\x08\x04" + images_path.read_bytes()[4:])
    with pytest.raises(FormatError, match="magic"):
        read_idx(broken, labels_path)

    broken_l = tmp_path / "broken-labels"
    broken_l.write_bytes(b"\x00\x00\x08\x03" + labels_path.read_bytes()[4:])
    with pytest.raises(FormatError, match="magic"):
        read_idx(images_path, broken_l)


def test_read_idx_count_mismatch(tmp_path):
    images = np.zeros((2, 2, 2), dtype=np.uint8)
    images_path, _ = make_idx_pair(tmp_path, images, [0, 1])
    labels_path = tmp_path / "labels-short"
    labels_path.write_bytes(struct.pack(">II", 0x00000801, 1) + bytes([0]))
    with pytest.raises(FormatError, match="count"):
        read_idx(images_path, labels_path)


def test_read_idx_truncated_payload(tmp_path):
    images = np.zeros((2, 3, 3), dtype=np.uint8)
    images_path, labels_path = make_idx_pair(tmp_path, images, [0, 1])
    images_path.write_bytes(images_path.read_bytes()[:-4])
    with pytest.raises(FormatError, match="bytes"):
        read_idx(images_path, labels_path)


def test_read_idx_rejects_out_of_range_label(tmp_path):
    images = np.zeros((1, 2, 2), dtype=np.uint8)
    images_path, labels_path = make_idx_pair(tmp_path, images, [10])
    _, items = read_idx(images_path, labels_path)
    with pytest.raises(FormatError, match="label"):
        list(items)


def _cifar_record(rng, label):
    return label, rng.integers(0, 256, size=3072, dtype=np.uint8).tobytes()


def test_read_cifar_known_record(tmp_path, rng):
    label, planes = _cifar_record(rng, 6)
    path = make_cifar_batch(tmp_path / "batch.bin", [(label, planes)])
    manifest, items = read_cifar_bin([path])
    assert manifest.format == "cifar_bin"
    assert manifest.image_shape == (32, 32, 3)
    assert manifest.num_items == 1
    assert manifest.label_names == CIFAR_CLASSES

    item = next(iter(items))
    assert item.label == 6
    expected = np.frombuffer(planes, dtype=np.uint8).reshape(3, 32, 32) / 255.0
    assert_allclose(item.image.planes, expected, rtol=0)


def test_read_cifar_multiple_files_and_meta(tmp_path, rng):
    a = make_cifar_batch(tmp_path / "a.bin", [_cifar_record(rng, 0), _cifar_record(rng, 1)])
    b = make_cifar_batch(tmp_path / "b.bin", [_cifar_record(rng, 2)])
    names = [f"class{i}" for i in range(10)]
    (tmp_path / "batches.meta.txt").write_text("\n".join(names) + "\n")
    manifest, items = read_cifar_bin([a, b])
    assert manifest.num_items == 3
    assert manifest.records_per_file == (2, 1)
    assert manifest.label_names == tuple(names)
    assert [it.label for it in items] == [0, 1, 2]


def test_read_cifar_rejects_partial_record(tmp_path):
    path = tmp_path / "bad.bin"
    path.write_bytes(bytes(3073 + 100))
    with pytest.raises(FormatError, match="3073"):
        read_cifar_bin([path])


def test_read_cifar_rejects_label_out_of_range(tmp_path, rng):
    path = make_cifar_batch(tmp_path / "bad.bin", [_cifar_record(rng, 11)])
    _, items = read_cifar_bin([path])
    with pytest.raises(FormatError, match="label"):
        list(items)


def test_read_image_dir_ordering_and_counts(tmp_path):
    def gray(seed):
        return Image(np.random.default_rng(seed).random((1, 5, 4)))

    root = make_image_dir(tmp_path / "ds", {
        "b": [gray(1), gray(2), gray(3)],
        "a": [gray(4), gray(5)],
    })
    manifest, items = read_image_dir(root)
    assert manifest.num_items == 5
    assert manifest.label_names == ("a", "b")  # lexicographic rank
    assert manifest.image_shape == (4, 5, 1)
    labels = [it.label for it in items]
    assert labels == [0, 0, 1, 1, 1]


def test_read_image_dir_rejects_empty_and_mixed(tmp_path, rng):
    empty = tmp_path / "empty"
    empty.mkdir()
    with pytest.raises(FormatError, match="class"):
        read_image_dir(empty)

    (empty / "a").mkdir()
    with pytest.raises(FormatError, match="no P5/P6"):
        read_image_dir(empty)

    mixed = make_image_dir(tmp_path / "mixed", {
        "a": [Image(rng.random((1, 4, 4)))],
        "b": [Image(rng.random((1, 6, 6)))],
    })
    _, items = read_image_dir(mixed)
    with pytest.raises(FormatError, match="shape"):
        list(items)


def test_write_enhanced_identity_idx_round_trip(tmp_path, rng):
    images = rng.integers(0, 256, size=(6, 5, 5), dtype=np.uint8)
    paths = make_idx_pair(tmp_path, images, [0, 1, 2, 0, 1, 2])
    manifest, items = read_idx(*paths)
    out_root = tmp_path / "out"
    record = write_enhanced(items, manifest, out_root, codec="same")
    assert (out_root / "images-idx3-ubyte").read_bytes() == paths[0].read_bytes()
    assert (out_root / "labels-idx1-ubyte").read_bytes() == paths[1].read_bytes()
    assert record["enhancement"] == {"method": "identity", "params": {}}

    written = json.loads((out_root / "manifest.json").read_text())
    assert written == record
    assert written["format"] == "idx"
    assert written["shape"] == [5, 5, 1]
    assert written["count"] == 6
    assert len(written["classes"]) == 10
    assert "tool_version" in written


def test_write_enhanced_identity_cifar_round_trip(tmp_path, rng):
    a = make_cifar_batch(tmp_path / "a.bin", [_cifar_record(rng, 3), _cifar_record(rng, 9)])
    b = make_cifar_batch(tmp_path / "b.bin", [_cifar_record(rng, 5)])
    manifest, items = read_cifar_bin([a, b])
    out_root = tmp_path / "out"
    write_enhanced(items, manifest, out_root, codec="same")
    assert (out_root / "a.bin").read_bytes() == a.read_bytes()
    assert (out_root / "b.bin").read_bytes() == b.read_bytes()


def test_write_enhanced_records_method_params(tmp_path, rng):
    images = rng.integers(0, 256, size=(2, 8, 8), dtype=np.uint8)
    paths = make_idx_pair(tmp_path, images, [4, 4])
    manifest, items = read_idx(*paths)
    cfg = NaiveConfig(levels=2)
    enhanced = (LabeledImage(enhance_naive(it.image, cfg), it.label) for it in items)
    record = write_enhanced(
        enhanced, manifest, tmp_path / "out", codec="same",
        enhancement={"method": "naive", "params": {"levels": cfg.levels,
                                                   "renormalize": cfg.renormalize}},
    )
    assert record["enhancement"]["method"] == "naive"
    assert record["enhancement"]["params"]["levels"] == 2


def test_write_enhanced_image_dir_codec(tmp_path, rng):
    images = rng.integers(0, 256, size=(4, 6, 6), dtype=np.uint8)
    paths = make_idx_pair(tmp_path, images, [0, 3, 3, 9])
    manifest, items = read_idx(*paths)
    out_root = tmp_path / "as_dir"
    record = write_enhanced(items, manifest, out_root, codec="image_dir")
    assert record["format"] == "image_dir"
    assert sorted(p.name for p in (out_root / "3").iterdir()) == ["000001.pgm", "000002.pgm"]

    back, back_items = read_image_dir(out_root)
    labels = sorted(it.label for it in back_items)
    assert back.num_items == 4
    # label distribution preserved: classes 0, 3, 3, 9
    assert [back.label_names[i] for i in labels] == ["0", "3", "3", "9"]


def test_write_enhanced_label_distribution_preserved(tmp_path, rng):
    images = rng.integers(0, 256, size=(30, 4, 4), dtype=np.uint8)
    labels = list(rng.integers(0, 10, size=30))
    paths = make_idx_pair(tmp_path, images, labels)
    manifest, items = read_idx(*paths)
    out_root = tmp_path / "out"
    write_enhanced(items, manifest, out_root, codec="same")
    _, back = read_idx(out_root / "images-idx3-ubyte", out_root / "labels-idx1-ubyte")
    assert [it.label for it in back] == labels


def test_write_enhanced_rejects_short_stream(tmp_path, rng):
    images = rng.integers(0, 256, size=(3, 4, 4), dtype=np.uint8)
    paths = make_idx_pair(tmp_path, images, [0, 1, 2])
    manifest, items = read_idx(*paths)
    short = itertools.islice(items, 2)
    with pytest.raises((FormatError, RuntimeError)):
        write_enhanced(short, manifest, tmp_path / "out", codec="same")


def test_write_enhanced_rejects_unknown_codec(tmp_path, rng):
    images = rng.integers(0, 256, size=(1, 4, 4), dtype=np.uint8)
    paths = make_idx_pair(tmp_path, images, [0])
    manifest, items = read_idx(*paths)
    with pytest.raises(FormatError):
        write_enhanced(items, manifest, tmp_path / "out", codec="tar")
