import json
from pathlib import Path

import pytest

import hiarg

DATA = Path(__file__).resolve().parents[2] / "data" / "mini"

KILL = "(k / kill-01 :ARG0 (g / gun) :ARG1 (p / person))"
RECOMMEND = "(r / recommend-01 :ARG1 (b / ban-01 :ARG0 (w / we) :ARG1 (g / gun)))"


def two_sentence_store():
    s = hiarg.Store()
    s.add_sentence("d1#0", "We should ban guns.", RECOMMEND, "w:0-1 r:1-2 b:2-3 g:3-4",
                   doc="d1", position=0, conclusion="ban guns", stance="pro")
    s.add_sentence("d1#1", "Guns kill people.", KILL, "g:0-1 k:1-2 p:2-3",
                   doc="d1", position=1, conclusion="ban guns", stance="pro")
    s.merge()
    return s


def test_penman_round_trip():
    g = hiarg.parse_penman(KILL)
    assert g["root"] == "k"
    assert ("k", ":ARG0", "g") in g["edges"]
    back = hiarg.parse_penman(hiarg.serialize_penman(g))
    assert sorted(n[2] for n in back["nodes"]) == ["gun", "kill-01", "person"]
    assert hiarg.validate_graph(g) == []


def test_parse_error():
    with pytest.raises(hiarg.ParseError):
        hiarg.parse_penman("(a / b")


def test_store_merge_and_save(tmp_path):
    s = two_sentence_store()
    assert (s.node_count, s.edge_count, s.top_count) == (6, 5, 2)
    assert s.stats()["nodes"] == "6"
    path = tmp_path / "fixture.hiarg"
    s.save(str(path))
    assert hiarg.Store.load(str(path)) == s
    assert hiarg.validate_path(str(path)) == []


def test_sample_relatives_frequency():
    cands = [("a", 0.3), ("b", 0.1)]
    hits = sum(hiarg.sample_relatives(cands, 1, seed)[0] == "a" for seed in range(4000))
    assert abs(hits / 4000 - 0.75) < 0.03


def test_config_overrides():
    text = hiarg.format_config("budget = 128\n", seed=5, symmetric=True)
    assert "budget = 128" in text
    assert "seed = 5" in text
    with pytest.raises(hiarg.ConfigError):
        hiarg.format_config("", mask_ratio=2.0)


def test_run_all_and_shards(tmp_path):
    out = tmp_path / "run"
    summary = hiarg.run_all(str(DATA / "corpus.jsonl"), str(DATA / "graphs.penman"), str(out),
                            seed=42, mix_probability=0.5, jobs=2)
    assert "samples:" in summary
    shard = out / "samples" / "shard-00000.jsonl"
    records = hiarg.load_shard(shard)
    assert records
    first = records[0]
    for key in ("tokens", "sentence_boundaries", "doc_boundaries", "nodes", "edges", "link_order",
                "mlm", "mnm", "mem", "gcl", "top", "dir", "rsd", "kind", "seed"):
        assert key in first
    assert len(first["tokens"]) == 512
    assert hiarg.validate_path(str(out / "samples")) == []

    # Same seed, same bytes.
    again = tmp_path / "again"
    hiarg.run_all(str(DATA / "corpus.jsonl"), str(DATA / "graphs.penman"), str(again),
                  seed=42, mix_probability=0.5, jobs=1)
    assert shard.read_bytes() == (again / "samples" / "shard-00000.jsonl").read_bytes()


def test_leak_is_reported(tmp_path):
    out = tmp_path / "run"
    hiarg.run_all(str(DATA / "corpus.jsonl"), str(DATA / "graphs.penman"), str(out), seed=3)
    line = (out / "samples" / "shard-00000.jsonl").read_text().splitlines()[0]
    record = json.loads(line)
    assert record["mnm"]
    record["mlm"] = []
    findings = hiarg.validate_record(json.dumps(record))
    assert any("leak" in f for f in findings)
