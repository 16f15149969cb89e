"""Bundled fixture files: discovery, parsing, and spot re-verification."""

from __future__ import annotations

import random

import pytest

from sudoku_l1.datasets import bundle_names, fixtures_by_label, load_bundle
from sudoku_l1.puzzle import solve_exact
from sudoku_l1.uniqueness import ClassLabel, classify


def test_all_expected_bundles_are_present():
    assert set(bundle_names()) >= {"fig1", "mixed_1000", "seventeen_25", "typeii_200"}


def test_bundle_shapes(mixed_bundle, typeii_bundle, seventeen_bundle):
    assert len(mixed_bundle) == 1000
    assert len(typeii_bundle) == 200
    assert len(seventeen_bundle) == 25


def test_mixed_bundle_composition(mixed_bundle):
    typei = [r for r in mixed_bundle if r.label is ClassLabel.TYPE_I]
    assert len(typei) == 849


def test_seventeen_bundle_is_all_seventeen_clue(seventeen_bundle):
    for rec in seventeen_bundle:
        assert len(rec.puzzle.clue_cells()) == 17
    texts = {rec.text for rec in seventeen_bundle}
    assert len(texts) == 25


def test_typeii_bundle_has_only_type_ii(typeii_bundle):
    assert all(r.label is ClassLabel.TYPE_II for r in typeii_bundle)


def test_typeii_bundle_is_disjoint_from_mixed(mixed_bundle, typeii_bundle):
    mixed_texts = {r.text for r in mixed_bundle}
    assert not mixed_texts & {r.text for r in typeii_bundle}


def test_fig1_bundle_matches_canonical_fixture(fig1):
    (rec,) = load_bundle("fig1")
    assert rec.puzzle == fig1
    assert rec.label is ClassLabel.TYPE_II


def test_fixtures_by_label_filters(mixed_bundle):
    typeii = fixtures_by_label("mixed_1000", ClassLabel.TYPE_II)
    assert len(typeii) == 151
    assert all(r.label is ClassLabel.TYPE_II for r in typeii)


def test_unknown_bundle_raises():
    with pytest.raises(FileNotFoundError):
        load_bundle("no_such_bundle")


def test_recorded_labels_spot_check(mixed_bundle):
    rng = random.Random(11)
    for rec in rng.sample(mixed_bundle, 6):
        assert solve_exact(rec.puzzle, count_cap=2).solution_count == 1
        result = classify(rec.puzzle)
        assert result.label is rec.label
        assert result.certificate.residual == pytest.approx(
            rec.residual, abs=1e-9
        )
