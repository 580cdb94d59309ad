# Copyright (c) 2026 The corpusforge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import json
import math
import random

import pytest

import corpusforge as cf


def test_cer_counts_code_points():
    assert cf.char_error_rate("kočka", "kočka") == 0.0
    assert cf.char_error_rate("kocka", "kočka") == pytest.approx(0.2)
    with pytest.raises(cf.CorpusforgeError):
        cf.char_error_rate("abc", "")


def test_validation_cer_ignores_case_and_punctuation():
    assert cf.validation_cer("Dobrý den!", "dobrý  den") == 0.0
    assert cf.normalize_transcript("Ahoj [smích] světe") == "ahoj světe"
    assert cf.ensure_terminal_punct("Ahoj  ") == "Ahoj."
    assert cf.ensure_terminal_punct("Ahoj?") == "Ahoj?"


def test_snr_orders_clean_above_noisy():
    rng = random.Random(7)
    sr = 16000
    speech = [0.1 * math.sin(2 * math.pi * 180 * i / sr) * (1 + math.sin(i / 900.0))
              for i in range(sr * 2)]
    clean = cf.estimate_snr(speech, sr)
    noisy = cf.estimate_snr([s + rng.gauss(0, 0.05) for s in speech], sr)
    assert clean > noisy
    with pytest.raises(cf.CorpusforgeError):
        cf.estimate_snr([0.0] * 100, sr)


def _words():
    out, t = [], 0.0
    for i in range(12):
        gap = 1.5 if i == 6 else 0.1
        out.append(cf.Word(f"w{i}", t, t + 2.0, terminal_after=(i == 5)))
        t += 2.0 + gap
    return out


def test_segmentation_respects_length_limit():
    words = _words()
    cuts, objective = cf.choose_cuts(words, max_len_s=15.0)
    assert 5 in cuts
    assert objective > 0
    segments = cf.optimal_segmentation(words, words[-1].end_s + 1.0, max_len_s=15.0)
    assert segments[0].first_word == 0 and segments[-1].last_word == len(words) - 1
    for a, b in zip(segments, segments[1:]):
        assert b.first_word == a.last_word + 1
    for s in segments:
        assert words[s.last_word].end_s - words[s.first_word].start_s <= 15.0
    assert len(cf.score_pauses(words)) == len(words) - 1


def test_eer_and_cosine():
    threshold, eer = cf.calibrate_threshold_eer([0.9, 0.8, 0.7], [0.1, 0.2, 0.3])
    assert eer == 0.0 and 0.3 < threshold <= 0.7
    assert cf.cosine_similarity([1, 0], [2, 0]) == pytest.approx(1.0)
    assert cf.cosine_similarity([1, 0], [0, 3]) == pytest.approx(0.0)
    with pytest.raises(cf.CorpusforgeError):
        cf.cosine_similarity([0, 0], [1, 0])


def test_clean_pages_report_balances():
    good = ["Dnes ráno jsme šli do lesa na houby.", "Našli jsme hodně hřibů a kozáků.",
            "Potom jsme se vrátili domů na oběd.", "Babička uvařila výbornou smaženici.",
            "Večer jsme ještě hráli karty u stolu."]
    pages = [("http://a.cz", good + ["Povolte cookies pro lepší zážitek."]),
             ("http://b.cz", ["too short"])]
    kept, report = cf.clean_pages(pages, blacklist=["kasino"])
    assert [url for url, _ in kept] == ["http://a.cz"]
    assert kept[0][1] == [line.lower() for line in good]
    assert report["pages_examined"] == 2 and report["pages_retained"] == 1
    assert report["lines_examined"] == 7 and report["lines_retained"] == 5
    assert sum(report["lines_removed"].values()) == 2


def test_stats_from_manifest(tmp_path):
    rows = [{"id": f"u{i}", "audio": f"u{i}.wav", "sample_rate": 16000, "duration_s": 1800.0,
             "transcript": "jedna dva tři", "dataset": "radio" if i < 3 else "talk"}
            for i in range(4)]
    path = tmp_path / "m.jsonl"
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    tables = cf.compute_stats(path)
    assert len(tables) == 1
    total = tables[0]["total"]
    assert total["files"] == 4 and total["words"] == 12
    assert total["hours"] == pytest.approx(2.0)
    text = cf.format_stats(str(path))
    lines = text.splitlines()
    assert lines[0] == "dataset\thours\tfiles\twords"
    assert lines[1] == "radio\t1.5\t3\t9"
