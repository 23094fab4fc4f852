import json
import math

import numpy as np
import pytest

import tcow


@pytest.fixture(scope="module")
def container_scene():
    return tcow.generate_container_script(seed=7, width=96, height=72)


def test_generators_are_deterministic():
    a = tcow.generate_random_clutter(seed=3, n_static=4, n_dynamic=2, frames=6, width=64, height=48)
    b = tcow.generate_random_clutter(seed=3, n_static=4, n_dynamic=2, frames=6, width=64, height=48)
    assert a == b
    assert len(tcow.load_scene(a)["objects"]) == 6
    assert a != tcow.generate_random_clutter(seed=4, n_static=4, n_dynamic=2, frames=6, width=64, height=48)


def test_render_shapes_and_visible_subset_of_xray(container_scene):
    visible, xray = tcow.render(container_scene)
    assert visible.dtype == np.uint16 and xray.dtype == np.uint8
    t, k, h, w = xray.shape
    assert visible.shape == (t, h, w) and (t, h, w) == (36, 72, 96)
    for i in range(1, k + 1):
        assert not np.any((visible == i) & (xray[:, i - 1] == 0))
    assert visible.max() <= k


def test_annotate_container_script_has_one_containment_event(container_scene):
    a = tcow.annotate(container_scene, target=1, samples=4000, seed=7)
    assert a["events"]["containment_events"] == 1
    assert a["events"]["containment"][0]["partner"] == 2
    assert a["triplet"].shape == (36, 3, 72, 96)
    onset = a["events"]["containment"][0]["onset"]
    assert a["triplet"][onset:, 2].reshape(36 - onset, -1).any(axis=1).all()
    assert "difficulty" in a


def test_containment_fraction():
    ident = [1, 0, 0, 0]
    assert tcow.containment_fraction([0, 0, 0], [1, 1, 1], ident, [0, 0, 0], [1, 1, 1], ident) == 1.0
    half = tcow.containment_fraction([0, 0, 0], [1, 1, 1], ident, [1, 0, 0], [1, 1, 1], ident, samples=50000)
    assert abs(half - 0.5) < 0.02


def test_metric_and_loss_identities():
    gt = np.zeros((4, 4), dtype=np.uint8)
    gt[1:3, 1:3] = 1
    assert tcow.frame_iou(gt.astype(np.float32), gt) == 1.0
    assert tcow.frame_iou(np.zeros((4, 4), np.float32), np.zeros((4, 4), np.uint8)) == 1.0
    pred = np.full((4, 4), 0.5, dtype=np.float32)
    assert math.isclose(tcow.bce(pred, gt), math.log(2.0), rel_tol=1e-12)
    rng = np.random.default_rng(0)
    p = rng.random((8, 8)).astype(np.float32)
    assert math.isclose(tcow.bootstrapped_bce(p, gt.repeat(2, 0).repeat(2, 1), 1.0), tcow.bce(p, gt.repeat(2, 0).repeat(2, 1)), rel_tol=1e-12)
    b = (rng.random((8, 8)) > 0.5).astype(np.uint8)
    assert math.isclose(tcow.soft_jaccard(b.astype(np.float32), gt.repeat(2, 0).repeat(2, 1)),
                        1.0 - tcow.frame_iou(b.astype(np.float32), gt.repeat(2, 0).repeat(2, 1)), abs_tol=1e-12)
    assert tcow.occlusion_weight(1.0) == 5.0
    assert tcow.bootstrap_schedule(0.0) == 1.0 and tcow.bootstrap_schedule(0.5) == 0.15
    assert tcow.default_loss_config()["beta"] == 5.0
    with pytest.raises(ValueError):
        tcow.bootstrapped_bce(p, gt.repeat(2, 0).repeat(2, 1), 0.0)


def test_cli_round_trip(tmp_path):
    scene = tmp_path / "scene.json"
    code, out, _ = tcow.run_cli(["generate", "occlusion-pass", "--seed", "2", "--out", str(scene)])
    assert code == 0 and "seed=2" in out
    assert tcow.run_cli(["render", "--scene", str(scene), "--out", str(tmp_path / "m")])[0] == 0
    assert tcow.run_cli(["label", "--scene", str(scene), "--masks", str(tmp_path / "m"), "--target", "1",
                         "--out", str(tmp_path / "a")])[0] == 0
    code, out, _ = tcow.run_cli(["eval", "--pred", str(tmp_path / "a"), "--gt", str(tmp_path / "a"),
                                 "--out", str(tmp_path / "r.json")])
    assert code == 0 and "J_tgt,all" in out
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["aggregate"]["J_tgt_all"] == 1.0
    assert tcow.run_cli(["render", "--scene", str(tmp_path / "missing.json"), "--out", str(tmp_path / "x")])[0] == 1
    assert tcow.run_cli(["generate", "container-script", "--out", "x", "--stdout"])[0] == 2
