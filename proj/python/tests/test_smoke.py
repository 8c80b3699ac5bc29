# Copyright 2026 The mlmbias Authors
# SPDX-License-Identifier: Apache-2.0

import json
import math
import os
import subprocess

import pytest

import mlmbias


def test_normalize_and_align():
    dis = mlmbias.split_tokens(mlmbias.normalize("The poor are lazy."))
    adv = mlmbias.split_tokens(mlmbias.normalize("The rich are lazy."))
    a = mlmbias.align_pair(dis, adv)
    assert [dis[i] for i in a["modified_dis"]] == ["poor"]
    assert [adv[i] for i in a["modified_adv"]] == ["rich"]


def test_token_measures():
    r = mlmbias.TokenPredictionRecord()
    r.sentence_id, r.model_id = "s", "m"
    r.gt_rank, r.top_logprob, r.gt_logprob = 3, -1.0, -3.5
    r.attention, r.vocab_size = 1.0, 100
    mlmbias.validate_record(r)
    assert mlmbias.crr_token(r) == pytest.approx(2.0 / 3.0)
    assert mlmbias.dp_token(r) == pytest.approx(2.5)
    assert mlmbias.crra_token(r) == pytest.approx(1.0 + math.log(3.0))
    back = mlmbias.TokenPredictionRecord.from_json_line(r.to_json_line())
    assert back == r


def test_bad_record_raises():
    r = mlmbias.TokenPredictionRecord()
    r.sentence_id, r.model_id = "s", "m"
    r.gt_rank, r.top_logprob, r.gt_logprob = 0, -1.0, -1.0
    with pytest.raises(mlmbias.ValidationError):
        mlmbias.validate_record(r)


def test_mock_records_and_sentence_measures():
    recs = mlmbias.mock_sentence_records("x/dis", ["the", "poor", "are", "lazy"], True, seed=3)
    again = mlmbias.mock_sentence_records("x/dis", ["the", "poor", "are", "lazy"], True, seed=3)
    assert [r.to_json_line() for r in recs] == [r.to_json_line() for r in again]
    m = mlmbias.sentence_measures(recs)
    assert set(m) == {"crr", "crra", "dp", "dpa", "aul", "aula"}
    assert 0.0 <= m["crr"] <= 1.0


def test_scores_and_stats():
    assert mlmbias.bspt([0.1, -0.2, 0.0, 0.3]) == 50.0
    assert mlmbias.bsrt([1.0, 2.0], [1.0, 2.0]) == 0.0
    w = mlmbias.welch_t([1.0, 2.0, 3.0, 4.0], [2.0, 3.0, 4.0, 5.5])
    assert w["test"] == "welch-t" and 0.0 < w["p_value"] < 1.0
    assert mlmbias.mcnemar(0, 0)["p_value"] == 1.0
    xs, fr = mlmbias.ecdf([3.0, 1.0, 2.0, 2.0])
    assert xs == [1.0, 2.0, 3.0] and fr == [0.25, 0.75, 1.0]
    _, diff = mlmbias.ecdf_diff([0.0, 1.0], [0.0, 1.0])
    assert diff == [0.0, 0.0]
    c = mlmbias.roc([0.9, 0.8, 0.3, 0.1], [True, True, False, False])
    assert c["auc"] == 1.0


def test_commands(tmp_path):
    csv = tmp_path / "cps.csv"
    rows = [",sent_more,sent_less,stereo_antistereo,bias_type,annotations,anon_writer,anon_annotators"]
    for i in range(6):
        ann = "[['gender'], ['gender'], ['gender'], [], []]" if i % 2 else "[[], [], [], [], []]"
        rows.append(f'{i},Women{i} are bad at math.,Men{i} are bad at math.,stereo,gender,"{ann}",a,"[]"')
    csv.write_text("\n".join(rows) + "\n")
    code, _ = mlmbias.mock(dataset=str(csv), out=str(tmp_path / "mock"), seed=1)
    assert code == 0
    recs = str(tmp_path / "mock" / "records.jsonl")
    code, report = mlmbias.bias_score(dataset=str(csv), records=[recs], out=str(tmp_path / "b"))
    assert code == 0 and report.startswith("bias_type,")
    data = json.loads((tmp_path / "b" / "bias_scores.json").read_text())
    assert data["rows"][-1]["bias_type"] == "overall"
    code, _ = mlmbias.roc_command(dataset=str(csv), records=[recs], out=str(tmp_path / "r"),
                                  measures=["crr"])
    assert code == 0
    code, _ = mlmbias.validate_dataset(dataset=str(csv), out=str(tmp_path / "v"))
    assert code == 2
    with pytest.raises(mlmbias.IoError):
        mlmbias.score(dataset=str(tmp_path / "missing.csv"), records=[recs])
    with pytest.raises(TypeError):
        mlmbias.score(bogus=1)


@pytest.mark.skipif("MLMBIAS_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_version():
    out = subprocess.run([os.environ["MLMBIAS_CLI"], "--version"], capture_output=True, text=True)
    assert out.returncode == 0
    assert mlmbias.__version__ in out.stdout
