import json
import os
from pathlib import Path

import jsonschema
import pytest

import zipfstrat as zs

SCHEMAS = Path(os.environ.get("ZIPFSTRAT_SCHEMA_DIR", Path(__file__).resolve().parents[2] / "schemas"))


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def markov_bars(n=900, stay=0.7, seed=3):
    import random

    rng = random.Random(seed)
    up = rng.random() < 0.5
    bars = []
    for i in range(n):
        if i and rng.random() >= stay:
            up = not up
        move = rng.randint(1, 10) * (1 if up else -1)
        day = f"{2000 + i // 300:04d}-{1 + (i // 25) % 12:02d}-{1 + i % 25:02d}"
        bars.append(zs.PriceBar(day, 1000, 1000 + move))
    return zs.PriceSeries(bars)


def test_version():
    assert zs.__version__


def test_worked_futures_example():
    bars = zs.PriceSeries([zs.PriceBar("2008-05-08", "2500", "2550")])
    spec = zs.ContractSpec(contracts=2)
    result = zs.execute([zs.Prediction("2008-05-08", zs.Direction.up)], bars, spec)
    trade = result.trades[0]
    assert str(trade.margin) == "5000"
    assert str(trade.net) == "1000"
    assert str(trade.return_on_margin()) == "0.2"
    assert str(result.roi) == "0.2"


def test_count_and_fit():
    table = zs.count_words(zs.SymbolSequence("uduudduu"), 2)
    assert [(e.word, e.count, e.rank) for e in table.entries] == [("uu", 2, 1), ("dd", 1, 2), ("ud", 1, 3)]
    fit = zs.fit_power_law([1, 2, 3, 4, 5], [k ** -1.0 for k in range(1, 6)])
    assert fit.zeta == pytest.approx(1.0, abs=1e-12)
    assert zs.zeta_from_hurst(0.75) == pytest.approx(0.5)
    jsonschema.validate(json.loads(table.to_json()), schema("rank_table"))


def test_symbolize_and_shuffle():
    inc = zs.IncrementSeries(["1.5", "-0.3", "2.0"])
    assert str(zs.symbolize(inc)) == "udu"
    three = zs.symbolize(zs.IncrementSeries(["0.7", "-0.2", "-1.0"]), zs.Alphabet.three_state("0.5"))
    assert str(three) == "usd"
    seq = zs.SymbolSequence("uuuddudduddd")
    a = zs.shuffle(seq, 5)
    assert sorted(str(a)) == sorted(str(seq))
    assert str(a) == str(zs.shuffle(seq, 5))


def test_predict_rule():
    ranks = zs.CandidateRanks([zs.CandidateRank("d", 5), zs.CandidateRank("u", 2)])
    p = zs.predict(ranks, 0.4)
    assert p.p_up == pytest.approx(0.590616924501578, abs=1e-14)
    assert p.direction == zs.Direction.up
    jsonschema.validate(json.loads(p.to_json()), schema("prediction"))


def test_walkforward_and_sweep(tmp_path):
    bars = markov_bars()
    text = zs.symbolize(zs.daylight_increments(bars))
    cfg = zs.StrategyConfig()
    cfg.m = 4
    cfg.w = 400
    preds = zs.run_walkforward(text, cfg)
    assert len(preds) == len(text) - 400
    cells = zs.sweep(bars, m_values=[4, 5], w_values=[400, 500])
    assert [(c.w, c.m) for c in cells] == [(400, 4), (400, 5), (500, 4), (500, 5)]
    assert len({c.first_date for c in cells}) == 1
    files = zs.emit_summary(cells, tmp_path, config=[("m", "4,5")], seeds=[0])
    assert len(files) == 3
    jsonschema.validate(json.loads((tmp_path / "summary.json").read_text()), schema("summary"))
    jsonschema.validate(json.loads((tmp_path / "manifest.json").read_text()), schema("manifest"))
    assert zs.emit_equity(cells[0], tmp_path).name == "equity_w400_m4.tsv"


def test_rank_plot_files(tmp_path):
    text = zs.symbolize(zs.daylight_increments(markov_bars()))
    real = zs.count_words(text, 4, window=400)
    shuffled = zs.count_words(zs.shuffle(zs.SymbolSequence(str(text)[-400:]), 1), 4)
    tsv, side = zs.emit_rank_plot_data(real, shuffled, 400, 4, tmp_path, seed=1)
    rows = tsv.read_text().splitlines()
    assert len(rows) == 1 + max(len(real), len(shuffled))
    jsonschema.validate(json.loads(side.read_text()), schema("rank_plot"))
    sweep_rows = zs.zeta_vs_window_sweep(text, 4, [400, 500])
    assert zs.emit_zeta_sweep(sweep_rows, 4, tmp_path).exists()


def test_errors_map_to_python_exceptions(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("date,open,close\n2008-05-08,2900,abc\n")
    with pytest.raises(ValueError, match="line 2"):
        zs.load_csv(bad)
    with pytest.raises(ValueError):
        zs.zeta_from_hurst(1.5)
    with pytest.raises(ValueError):
        zs.fit_zipf(zs.count_words(zs.SymbolSequence("uuuu"), 2))
    with pytest.raises(ValueError):
        zs.candidate_words("ud", 4, 1)


def test_csv_round_trip(tmp_path):
    bars = markov_bars(50)
    path = tmp_path / "prices.csv"
    path.write_text(bars.to_csv())
    back = zs.load_csv(path)
    assert back.to_csv() == bars.to_csv()
    assert len(zs.sha256_file(path)) == 64
