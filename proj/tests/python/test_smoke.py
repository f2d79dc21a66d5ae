import numpy as np
import pytest

import histofeat as hf

DIMS = {"ch1": 36, "ch2": 36, "lm": 36, "zm": 12, "har": 13, "lbp": 36, "hist": 7, "ac": 256, "haar": 240}


def gradient(rng, size):
    angle = rng.uniform(0, 2 * np.pi)
    yy, xx = np.mgrid[0:size, 0:size]
    ramp = np.cos(angle) * xx + np.sin(angle) * yy
    ramp = (ramp - ramp.min()) / max(np.ptp(ramp), 1e-9)
    return (40 + 150 * ramp).astype(np.uint8)


def textured(rng, size):
    return rng.integers(64, 192, size=(size, size), dtype=np.uint8)


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("data")
    rng = np.random.default_rng(7)
    for cls, make in (("normal", gradient), ("abnormal", textured)):
        (root / cls).mkdir()
        for i in range(8):
            hf.write_png(make(rng, 48), str(root / cls / f"img{i:03d}.png"))
    return root


def test_descriptor_catalogue():
    assert hf.descriptors() == list(DIMS)
    for name, dim in DIMS.items():
        assert hf.descriptor_dim(name) == dim


def test_extract_shapes_and_rotation(dataset):
    img = hf.decode_gray(str(dataset / "abnormal" / "img000.png"))
    assert img.shape == (48, 48) and img.dtype == np.uint8
    for name, dim in DIMS.items():
        v = hf.extract(name, img)
        assert v.shape == (dim,)
        assert np.all(np.isfinite(v))
    rotated = np.ascontiguousarray(np.rot90(img))
    assert np.array_equal(hf.extract("lbp", img), hf.extract("lbp", rotated))
    assert np.array_equal(hf.extract("har", img), hf.extract("har", rotated))


def test_errors_map_to_exception():
    with pytest.raises(hf.HistofeatError):
        hf.extract("sift", np.zeros((8, 8), np.uint8))
    with pytest.raises(hf.HistofeatError):
        hf.decode_gray("/nonexistent.png")


def test_folds_are_stratified():
    labels = [0] * 10 + [1] * 15
    folds = hf.stratified_folds(labels, 5, 3)
    assert folds == hf.stratified_folds(labels, 5, 3)
    for f in range(5):
        members = [labels[i] for i, a in enumerate(folds) if a == f]
        assert members.count(0) == 2 and members.count(1) == 3


def test_metrics():
    m = hf.compute_metrics(3, 1, 2, 4)
    assert m["a"] == pytest.approx(0.7)
    assert m["mcc"] == pytest.approx(0.40824829, abs=1e-8)


def test_fit_predict_and_model_bytes(tmp_path):
    rng = np.random.default_rng(1)
    x = np.vstack([rng.normal(0, 1, (30, 2)), rng.normal(6, 1, (30, 2))])
    y = [0] * 30 + [1] * 30
    for clf in ("dt", "knn", "svm", "rf"):
        model = hf.fit(x, y, clf=clf, trees=15)
        assert model.kind == clf
        pred = model.predict(x)
        assert np.mean(np.array(pred) == np.array(y)) >= 0.95
        model.save(str(tmp_path / f"{clf}.hfm"))
        assert hf.Model.load(str(tmp_path / f"{clf}.hfm")).predict(x) == pred
        assert hf.Model.from_bytes(model.to_bytes()).to_bytes()[:4] == b"HFM1"
    r = hf.cross_validate(x, y, clf="rf", folds=5, seed=2, trees=15)
    assert r["a"] >= 0.95 and sum(r["confusion"]) == 60


def test_csv_round_trip(tmp_path):
    x = np.array([[0.5, -2.25], [1 / 3, 1e-20]])
    hf.write_feature_csv(str(tmp_path / "demo.csv"), "demo", ["normal/b.png", "abnormal/a.png"], [0, 1], x)
    text = (tmp_path / "demo.csv").read_text()
    assert text.splitlines()[1] == "abnormal/a.png,abnormal,0.333333333,1e-20"
    t = hf.read_feature_csv(str(tmp_path / "demo.csv"))
    assert t["ids"] == ["abnormal/a.png", "normal/b.png"] and t["labels"] == [1, 0]


def test_cli_extract_and_evaluate(dataset, tmp_path):
    out = str(tmp_path / "run")
    code, _, err = hf.run_cli(["extract", "--root", str(dataset), "--desc", "lbp", "--out", out])
    assert code == 0, err
    code, md, err = hf.run_cli(
        ["evaluate", "--root", str(dataset), "--desc", "lbp", "--clf", "rf", "--folds", "4", "--out", out]
    )
    assert code == 0, err
    assert "| Desc |" in md
    lines = (tmp_path / "run" / "report.csv").read_text().splitlines()
    assert lines[0] == "classifier,descriptor,a,p,r,s,f1,mcc,bacc,seed"
    assert lines[1].startswith("rf,lbp,")
    ids, labels = hf.load_dataset(str(dataset))
    assert len(ids) == 16 and labels.count(0) == 8
