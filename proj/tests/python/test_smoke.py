import pytest

import sarve


@pytest.fixture(scope="module")
def data():
    return sarve.generate(seed=1)


def test_generated_shape(data):
    assert len(data.presenters) == 60
    assert len(data.participants) == 78
    assert data.contact_count == 300
    assert data.t_total == 720
    assert data.validate() == []


def test_text_round_trip(data):
    text = data.to_text()
    assert sarve.Dataset.parse(text).to_text() == text


def test_formulas():
    assert sarve.f_measure(0.096, 0.810) == pytest.approx(0.1717, abs=5e-4)
    assert sarve.f_measure(0.0, 0.0) is None
    d = sarve.Dataset.parse(
        "[meta]\nt_total 660\nrooms RoomA\n[persons]\np presenter\nx participant\n"
        "[items]\na\nb\nc\n[ratings]\np a 4\np b 2\np c 5\nx a 3\nx b 1\nx c 4\n"
        "[contacts]\np x 60 5\n"
    )
    assert sarve.tie_strength(d, "p", "x") == pytest.approx(300 / 660, rel=1e-12)
    assert sarve.pearson(d, "p", "x") == pytest.approx(1.0)
    assert sarve.degree(d, "p") == 1


def test_recommend_is_worker_independent(data):
    one = sarve.recommend(data, workers=1)
    four = sarve.recommend(data, workers=4)
    assert one == four
    assert {r["stream"] for r in one} <= {"context", "relations"}
    assert all(r["rank"] >= 1 for r in one)


def test_evaluate_and_sweep(data):
    rep = sarve.evaluate(data, seed=3)
    assert len(rep["rows"]) == 4
    assert all(r["e"] + r["f"] + r["g"] + r["h"] == rep["universe"] for r in rep["rows"])
    sw = sarve.sweep(data, "gamma", "0.6:1.0:0.1")
    assert len(sw["points"]) == 5
    assert sw["shrinkage_holds"]


def test_errors():
    with pytest.raises(sarve.ParseError):
        sarve.Dataset.parse("[bogus]\n")
    with pytest.raises(sarve.ConfigError):
        sarve.recommend(sarve.generate(), gamma=3.0)
    bad = sarve.Dataset.parse("[meta]\nt_total 720\n[items]\nk\n[persons]\nx participant\n[ratings]\nx k 9\n")
    assert bad.validate()[0][0] == "rating in [1,5]"
    with pytest.raises(sarve.DataError):
        sarve.recommend(bad)
