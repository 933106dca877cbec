import numpy as np
import pytest

import sigpath as sp
from sigpath.sig_regression import (
    dataset_from_json,
    dataset_to_json,
    evaluate,
    functional_from_json,
    functional_to_json,
)

from helpers import random_path


def test_feature_count():
    assert sp.feature_count(2, 0) == 1
    assert sp.feature_count(2, 2) == 7
    assert sp.feature_count(3, 2) == 13
    assert sp.feature_count(1, 4) == 5


def test_featurize_trivial_path():
    o = sp.constant_path(2)
    x = sp.featurize(o, 2)
    expected = np.zeros(7)
    expected[0] = 1.0
    assert np.array_equal(x, expected)


def test_featurize_prefix_property():
    # deeper featurization extends the shallower one bitwise
    rng = np.random.default_rng(0)
    for _ in range(10):
        p = random_path(rng, dim=2)
        shallow = sp.featurize(p, 2)
        deep = sp.featurize(p, 4)
        assert np.array_equal(deep[: len(shallow)], shallow)


def test_linear_functional_shapes():
    w = np.zeros(7)
    w[0] = 2.0
    f = sp.LinearFunctional(dim=2, depth=2, weights=w)
    assert f.weights.shape == (7, 1)
    o = sp.constant_path(2)
    assert np.array_equal(f.evaluate(sp.signature(o, 2)), np.array([2.0]))
    with pytest.raises(ValueError):
        sp.LinearFunctional(dim=2, depth=2, weights=np.zeros(6))
    with pytest.raises(ValueError):
        sp.LinearFunctional(dim=2, depth=2, weights=np.zeros((7, 1, 1)))


def test_predict_matches_per_path():
    field, y0 = sp.demo_field()
    ds = sp.generate_dataset(field, y0, n_paths=12, segment_count=3, r=1.0,
                             noise_scale=0.0, seed=0)
    f = sp.fit(ds, depth=2)
    batched = f.predict(ds.features)
    single = np.stack([f.predict_path(p) for p in ds.paths])
    assert np.allclose(batched, single, atol=1e-13)


def test_generate_dataset_reproducible():
    field, y0 = sp.demo_field()
    a = sp.generate_dataset(field, y0, n_paths=8, segment_count=3, r=1.0,
                            noise_scale=0.0, seed=5)
    b = sp.generate_dataset(field, y0, n_paths=8, segment_count=3, r=1.0,
                            noise_scale=0.0, seed=5)
    assert np.array_equal(a.features, b.features)
    assert np.array_equal(a.responses, b.responses)
    c = sp.generate_dataset(field, y0, n_paths=8, segment_count=3, r=1.0,
                            noise_scale=0.0, seed=6)
    assert not np.array_equal(a.features, c.features)


def test_generate_dataset_respects_radius():
    field, y0 = sp.demo_field()
    for r in (0.5, 1.0):
        ds = sp.generate_dataset(field, y0, n_paths=20, segment_count=4, r=r,
                                 noise_scale=0.0, seed=1)
        assert all(p.length <= r + 1e-12 for p in ds.paths)


def test_noise_only_perturbs_responses():
    field, y0 = sp.demo_field()
    clean = sp.generate_dataset(field, y0, n_paths=10, segment_count=3, r=1.0,
                                noise_scale=0.0, seed=2)
    noisy = sp.generate_dataset(field, y0, n_paths=10, segment_count=3, r=1.0,
                                noise_scale=0.1, seed=2)
    assert np.array_equal(clean.features, noisy.features)
    assert not np.array_equal(clean.responses, noisy.responses)
    gap = np.abs(clean.responses - noisy.responses).max()
    assert 0.0 < gap < 1.0


def test_realisable_recovery():
    # responses generated by a depth-2 functional are recovered exactly
    field, y0 = sp.demo_field()
    ds = sp.generate_dataset(field, y0, n_paths=60, segment_count=3, r=1.0,
                             noise_scale=0.0, seed=3)
    target = sp.truncated_functional_LN(field, y0, 2)
    responses = np.stack([target.evaluate(sp.signature(p, 2)) for p in ds.paths])
    realised = sp.RegressionDataset(
        paths=ds.paths, features=ds.features, responses=responses,
        depth=ds.depth, noise_scale=0.0, seed=3,
    )
    f = sp.fit(realised, depth=2)
    assert not f.rank_deficient
    assert np.abs(f.weights - target.weights).max() <= 1e-8
    metrics = evaluate(f, realised)
    assert metrics["rmse_train"] <= 1e-8


def test_heldout_rmse_decreases_with_depth():
    field, y0 = sp.demo_field()
    train = sp.generate_dataset(field, y0, n_paths=200, segment_count=4, r=1.0,
                                noise_scale=0.0, seed=0)
    held = sp.generate_dataset(field, y0, n_paths=100, segment_count=4, r=1.0,
                               noise_scale=0.0, seed=1)
    prev = np.inf
    for depth in (1, 2, 3, 4):
        f = sp.fit(train, depth=depth)
        metrics = evaluate(f, train, heldout=held)
        assert metrics["rmse_heldout"] < prev
        prev = metrics["rmse_heldout"]


def test_evaluate_metric_keys():
    field, y0 = sp.demo_field()
    ds = sp.generate_dataset(field, y0, n_paths=10, segment_count=3, r=1.0,
                             noise_scale=0.0, seed=4)
    f = sp.fit(ds, depth=1)
    m = evaluate(f, ds)
    assert set(m) == {"rmse_train", "max_abs_train", "uniform_gap_train"}
    assert m["uniform_gap_train"] >= m["rmse_train"] - 1e-15
    m2 = evaluate(f, ds, heldout=ds)
    assert m2["rmse_heldout"] == m["rmse_train"]


def test_scaling_equivariance_bitwise():
    field, y0 = sp.demo_field()
    ds = sp.generate_dataset(field, y0, n_paths=30, segment_count=3, r=1.0,
                             noise_scale=0.0, seed=6)
    scaled = sp.RegressionDataset(
        paths=ds.paths, features=ds.features, responses=ds.responses * 4.0,
        depth=ds.depth, noise_scale=0.0, seed=6,
    )
    f1 = sp.fit(ds, depth=3)
    f2 = sp.fit(scaled, depth=3)
    assert np.array_equal(f2.weights, f1.weights * 4.0)
    p = ds.paths[0]
    assert np.array_equal(f2.predict_path(p), f1.predict_path(p) * 4.0)


def test_rank_deficiency_flag_and_ridge():
    field, y0 = sp.demo_field()
    small = sp.generate_dataset(field, y0, n_paths=5, segment_count=3, r=1.0,
                                noise_scale=0.0, seed=7)
    f = sp.fit(small, depth=3)
    assert f.rank_deficient
    g = sp.fit(small, depth=3, ridge=1e-6)
    assert not g.rank_deficient
    with pytest.raises(ValueError):
        sp.fit(small, depth=3, ridge=-1.0)
    with pytest.raises(ValueError):
        sp.fit(small, depth=5)  # beyond generation depth


def test_feature_injectivity_on_corpus():
    field, y0 = sp.demo_field()
    ds = sp.generate_dataset(field, y0, n_paths=60, segment_count=4, r=1.0,
                             noise_scale=0.0, seed=8)
    feats = ds.features
    for i in range(len(feats)):
        gaps = np.linalg.norm(feats[i + 1 :] - feats[i], axis=1)
        assert gaps.size == 0 or gaps.min() > 1e-9


def test_demo_field_properties():
    field, y0 = sp.demo_field()
    assert field.input_dim == 2 and field.state_dim == 2
    assert field.growth_constant == pytest.approx(0.99, rel=1e-12)
    A1, A2 = field.matrices
    assert np.abs(A1 @ A2 - A2 @ A1).max() > 1e-3  # genuinely non-commuting
    assert y0.shape == (2,)


def test_serialisation_round_trips():
    field, y0 = sp.demo_field()
    ds = sp.generate_dataset(field, y0, n_paths=6, segment_count=3, r=1.0,
                             noise_scale=0.0, seed=9)
    f = sp.fit(ds, depth=2)

    f2 = functional_from_json(functional_to_json(f))
    assert np.array_equal(f.weights, f2.weights)
    assert (f.dim, f.depth, f.rank_deficient) == (f2.dim, f2.depth, f2.rank_deficient)

    ds2 = dataset_from_json(dataset_to_json(ds))
    assert np.array_equal(ds.features, ds2.features)
    assert np.array_equal(ds.responses, ds2.responses)
    assert all(
        np.array_equal(p.segments, q.segments) for p, q in zip(ds.paths, ds2.paths)
    )
    with pytest.raises(ValueError):
        functional_from_json("{\"dim\": 2}")
