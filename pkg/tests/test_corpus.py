"""Curation stages, split arithmetic, manifests, and dataset generation."""

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from brokeneyes import corpus, raster
from brokeneyes.corpus import (
    CurationConfig,
    ImageRecord,
    Manifest,
    SourceCorpus,
    balance_classes,
    dedup_by_hash,
    filter_min_resolution,
    generate_dataset,
    read_manifest,
    scan_directory,
    stratified_split,
    write_manifest,
)
from brokeneyes.errors import (
    EmptyClassError,
    InvalidParameterError,
    ManifestParseError,
    NotFoundError,
)
from brokeneyes.filters import Condition, FilterParams

from conftest import synth_image, write_corpus


def fake_records(n: int, label: str = "human") -> list[ImageRecord]:
    return [
        ImageRecord(
            path=f"img{i:05d}.png",
            class_label=label,
            sha256=f"{i:064x}",
            width=100,
            height=100,
        )
        for i in range(n)
    ]


class TestScan:
    def test_missing_directory(self, tmp_path):
        with pytest.raises(NotFoundError):
            scan_directory(tmp_path / "absent", "human")

    def test_empty_directory(self, tmp_path):
        assert scan_directory(tmp_path, "human") == []

    def test_corrupt_file_warned_not_fatal(self, tmp_path):
        write_corpus(tmp_path, 3, seed=1)
        (tmp_path / "broken.png").write_bytes(b"not an image at all")
        warnings = []
        records = scan_directory(tmp_path, "human", on_warning=warnings.append)
        assert len(records) == 3
        assert len(warnings) == 1 and "broken.png" in warnings[0]

    def test_sorted_and_repeatable(self, tmp_path):
        write_corpus(tmp_path, 5, seed=2)
        a = scan_directory(tmp_path, "human")
        b = scan_directory(tmp_path, "human")
        assert a == b
        assert [r.path for r in a] == sorted(r.path for r in a)

    def test_records_carry_hash_and_size(self, tmp_path):
        write_corpus(tmp_path, 1, seed=3, size=(60, 40))
        rec = scan_directory(tmp_path, "human")[0]
        assert rec.width == 40 and rec.height == 60
        assert len(rec.sha256) == 64
        import hashlib

        assert rec.sha256 == hashlib.sha256((tmp_path / rec.path).read_bytes()).hexdigest()


class TestResolutionFilter:
    def test_below_threshold_removed(self):
        recs = [ImageRecord("a.png", "human", sha256="0" * 64, width=32, height=500)]
        assert filter_min_resolution(recs, 64) == []

    def test_boundary_inclusive(self):
        recs = [ImageRecord("a.png", "human", sha256="0" * 64, width=64, height=64)]
        assert filter_min_resolution(recs, 64) == recs

    def test_zero_threshold_keeps_all(self):
        recs = fake_records(5)
        assert filter_min_resolution(recs, 0) == recs


class TestDedup:
    def test_duplicate_content_dropped(self):
        a = ImageRecord("a.png", "human", sha256="f" * 64)
        b = ImageRecord("b.png", "human", sha256="f" * 64)
        assert dedup_by_hash([a, b]) == [a]

    def test_distinct_unchanged(self):
        recs = fake_records(4)
        assert dedup_by_hash(recs) == recs

    def test_idempotent(self):
        recs = fake_records(3) + fake_records(3)
        once = dedup_by_hash(recs)
        assert dedup_by_hash(once) == once

    @given(st.permutations(list(range(6))))
    def test_permutation_keeps_same_hash_set(self, order):
        recs = fake_records(3) + fake_records(3)
        shuffled = [recs[i] for i in order]
        kept = dedup_by_hash(shuffled)
        assert {r.sha256 for r in kept} == {r.sha256 for r in recs}
        assert len(kept) == 3


class TestBalance:
    def test_reference_scale_counts_pass_untouched(self):
        human = fake_records(1414, "human")
        non_human = fake_records(1309, "non_human")
        h, n = balance_classes(human, non_human, 0.10)
        assert (len(h), len(n)) == (1414, 1309)

    def test_equal_classes_unchanged(self):
        h, n = balance_classes(fake_records(100), fake_records(100, "non_human"), 0.10)
        assert (len(h), len(n)) == (100, 100)

    def test_truncation_to_ceiling(self):
        h, n = balance_classes(fake_records(300), fake_records(100, "non_human"), 0.10)
        assert (len(h), len(n)) == (110, 100)

    def test_truncation_deterministic(self):
        big = fake_records(50)
        small = fake_records(10, "non_human")
        h1, _ = balance_classes(big, small, 0.10, seed=7)
        h2, _ = balance_classes(big, small, 0.10, seed=7)
        assert h1 == h2
        h3, _ = balance_classes(big, small, 0.10, seed=8)
        assert {r.path for r in h1} != {r.path for r in h3}

    def test_empty_class_rejected(self):
        with pytest.raises(EmptyClassError):
            balance_classes([], fake_records(5, "non_human"), 0.10)


class TestSplit:
    RATIOS = (0.70, 0.15, 0.15)

    def test_reference_corpus_split_size(self):
        recs = stratified_split(fake_records(2723), self.RATIOS, seed=0)
        sizes = {s: sum(r.split == s for r in recs) for s in ("train", "val", "test")}
        assert sizes == {"train": 1906, "val": 408, "test": 409}

    def test_ten_records_split_7_1_2(self):
        recs = stratified_split(fake_records(10), self.RATIOS, seed=0)
        sizes = {s: sum(r.split == s for r in recs) for s in ("train", "val", "test")}
        assert sizes == {"train": 7, "val": 1, "test": 2}

    def test_deterministic(self):
        a = stratified_split(fake_records(97), self.RATIOS, seed=5)
        b = stratified_split(fake_records(97), self.RATIOS, seed=5)
        assert a == b

    def test_per_class_floor_rule(self):
        recs = fake_records(1414, "human") + fake_records(1309, "non_human")
        out = stratified_split(recs, self.RATIOS, seed=1)
        for label, n in (("human", 1414), ("non_human", 1309)):
            group = [r for r in out if r.class_label == label]
            n_train = sum(r.split == "train" for r in group)
            n_val = sum(r.split == "val" for r in group)
            n_test = sum(r.split == "test" for r in group)
            # floor(0.70 n), floor(0.15 n), remainder, in exact integer form
            assert (n_train, n_val, n_test) == (
                7 * n // 10,
                3 * n // 20,
                n - 7 * n // 10 - 3 * n // 20,
            )

    @given(st.integers(min_value=1, max_value=400))
    def test_partition_property(self, n):
        recs = stratified_split(fake_records(n), self.RATIOS, seed=3)
        assert len(recs) == n
        assert all(r.split in ("train", "val", "test") for r in recs)
        n_train = sum(r.split == "train" for r in recs)
        n_val = sum(r.split == "val" for r in recs)
        assert n_train == 7 * n // 10
        assert n_val == 3 * n // 20

    def test_order_preserved(self):
        recs = fake_records(20)
        out = stratified_split(recs, self.RATIOS, seed=2)
        assert [r.path for r in out] == [r.path for r in recs]

    def test_empty_rejected(self):
        with pytest.raises(EmptyClassError):
            stratified_split([], self.RATIOS, seed=0)


class TestManifestIO:
    def test_round_trip(self, tmp_path):
        records = [
            ImageRecord("amd/human/a.png", "human", Condition.AMD, "train", "a" * 64, 224, 224),
            ImageRecord(
                "normal/non_human/b.png", "non_human", Condition.NORMAL, "test", "b" * 64, 224, 224
            ),
        ]
        path = tmp_path / "manifest.jsonl"
        write_manifest(Manifest(records=records), path)
        assert read_manifest(path) == Manifest(records=records)

    def test_empty_manifest_is_empty_file(self, tmp_path):
        path = tmp_path / "m.jsonl"
        write_manifest(Manifest(records=[]), path)
        assert path.read_bytes() == b""
        assert read_manifest(path).records == []

    def test_field_order_fixed(self, tmp_path):
        path = tmp_path / "m.jsonl"
        write_manifest(
            Manifest(records=[ImageRecord("x.png", "human", Condition.NORMAL, "train", "c" * 64, 10, 10)]),
            path,
        )
        keys = list(json.loads(path.read_text().splitlines()[0]).keys())
        assert keys == ["path", "class", "condition", "split", "sha256", "width", "height"]

    def test_missing_field_names_line(self, tmp_path):
        path = tmp_path / "m.jsonl"
        good = {
            "path": "a.png", "class": "human", "condition": "normal",
            "split": "train", "sha256": "d" * 64, "width": 10, "height": 10,
        }
        bad = {k: v for k, v in good.items() if k != "sha256"}
        path.write_text(json.dumps(good) + "\n" + json.dumps(bad) + "\n")
        with pytest.raises(ManifestParseError, match="line 2.*sha256"):
            read_manifest(path)

    def test_invalid_json_names_line(self, tmp_path):
        path = tmp_path / "m.jsonl"
        path.write_text("{not json\n")
        with pytest.raises(ManifestParseError, match="line 1"):
            read_manifest(path)


class TestCurationConfig:
    def test_ratio_sum_enforced(self):
        with pytest.raises(InvalidParameterError):
            CurationConfig(split_ratios=(0.5, 0.2, 0.2))

    def test_digest_stable(self):
        assert CurationConfig().digest() == CurationConfig().digest()
        assert CurationConfig(global_seed=1).digest() != CurationConfig().digest()


class TestGenerateDataset:
    def _sources(self, tmp_path, n_human=2, n_non=2):
        write_corpus(tmp_path / "h", n_human, seed=10, size=(70, 80))
        write_corpus(tmp_path / "n", n_non, seed=20, size=(90, 60))
        human = scan_directory(tmp_path / "h", "human")
        non = scan_directory(tmp_path / "n", "non_human")
        recs = stratified_split(human + non, (0.70, 0.15, 0.15), seed=0)
        return (
            SourceCorpus(tmp_path / "h", [r for r in recs if r.class_label == "human"]),
            SourceCorpus(tmp_path / "n", [r for r in recs if r.class_label == "non_human"]),
        )

    def test_fan_out_and_counts(self, tmp_path):
        human, non = self._sources(tmp_path)
        manifest = generate_dataset(
            human, non, FilterParams(), 7, tmp_path / "out", target_size=64, threads=2
        )
        assert len(manifest.records) == (2 + 2) * 6
        counts = corpus.condition_counts(manifest.records)
        for condition in Condition:
            assert counts[condition] == {"human": 2, "non_human": 2}

    def test_single_image_yields_six_records(self, tmp_path):
        write_corpus(tmp_path / "h", 1, seed=1)
        write_corpus(tmp_path / "n", 1, seed=2)
        manifest = generate_dataset(
            SourceCorpus(tmp_path / "h", scan_directory(tmp_path / "h", "human")),
            SourceCorpus(tmp_path / "n", scan_directory(tmp_path / "n", "non_human")),
            FilterParams(),
            0,
            tmp_path / "out",
            target_size=48,
        )
        human_recs = [r for r in manifest.records if r.class_label == "human"]
        assert len(human_recs) == 6
        assert {r.condition for r in human_recs} == set(Condition)

    def test_rerun_byte_identical_across_thread_counts(self, tmp_path):
        human, non = self._sources(tmp_path, 3, 2)
        m1 = generate_dataset(
            human, non, FilterParams(), 5, tmp_path / "o1", target_size=64, threads=1
        )
        m2 = generate_dataset(
            human, non, FilterParams(), 5, tmp_path / "o2", target_size=64, threads=8
        )
        assert m1 == m2
        for rec in m1.records:
            assert (tmp_path / "o1" / rec.path).read_bytes() == (
                tmp_path / "o2" / rec.path
            ).read_bytes()

    def test_normal_files_are_resized_sources(self, tmp_path):
        human, non = self._sources(tmp_path)
        generate_dataset(human, non, FilterParams(), 3, tmp_path / "out", target_size=64)
        src = raster.load_image(tmp_path / "h" / human.records[0].path)
        expected = corpus.resize_image(src, 64)
        got = raster.load_image(tmp_path / "out" / f"normal/human/{human.records[0].path}")
        assert np.array_equal(got, expected)

    def test_manifest_paths_relative(self, tmp_path):
        human, non = self._sources(tmp_path)
        manifest = generate_dataset(human, non, FilterParams(), 3, tmp_path / "out", target_size=48)
        for rec in manifest.records:
            assert not rec.path.startswith("/")
            assert (tmp_path / "out" / rec.path).is_file()


class TestResize:
    def test_identity(self, img224):
        assert np.array_equal(corpus.resize_image(img224, 224), img224)

    def test_target_square(self):
        img = synth_image(1, 100, 180)
        out = corpus.resize_image(img, 64)
        assert out.shape == (64, 64, 3)
