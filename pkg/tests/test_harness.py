from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from stablefrag.harness import cli
from stablefrag.harness.exact import (
    enumerate_conditioned_trees,
    fragmented_counts_law,
    modified_walk_law,
)
from stablefrag.harness.experiment import ExperimentConfig, run_convergence, run_pipeline
from stablefrag.harness.figure import figure_tables
from stablefrag.harness.stats import ks_two_sample, size_biased_l1, uniformity_pvalue
from stablefrag.harness.streams import replicate_rng, resolve_threads, run_replicates, side_seeds
from stablefrag.offspring import law_from_tag, make_geometric_half

from conftest import GOLDEN


def test_ks_examples():
    assert ks_two_sample([3, 1, 2], [3, 1, 2]) == 0.0
    assert ks_two_sample([0, 0], [1, 1]) == 1.0
    assert ks_two_sample([1, 2, 3], [2, 3, 4]) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        ks_two_sample([], [1])


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=40),
    st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=40),
)
def test_ks_matches_scipy(a, b):
    assert ks_two_sample(a, b) == pytest.approx(stats.ks_2samp(a, b, method="asymp").statistic, abs=1e-12)


def test_size_biased_l1_zero_on_identical():
    sample = [np.array([0.5, 0.5]), np.array([1.0])]
    assert size_biased_l1(sample * 10, sample * 10) == 0.0
    assert size_biased_l1([np.array([1.0])] * 50, [np.full(10, 0.1)] * 50) == pytest.approx(0.9)


def test_uniformity_pvalue():
    rng = np.random.default_rng(0)
    assert uniformity_pvalue(rng.random(10_000)) > 0.001
    assert uniformity_pvalue(rng.random(10_000) ** 2) < 1e-6


def test_streams_deterministic_and_distinct():
    a = replicate_rng(5, 3).random(4)
    assert np.array_equal(a, replicate_rng(5, 3).random(4))
    assert not np.array_equal(a, replicate_rng(5, 4).random(4))
    assert not np.array_equal(a, replicate_rng(6, 3).random(4))
    s = side_seeds(5)
    assert s == side_seeds(5) and s[0] != s[1]


def test_thread_count_does_not_change_results(monkeypatch):
    fn = lambda r, rng: (r, float(rng.random()))  # noqa: E731
    one = run_replicates(fn, 20, seed=9, threads=1)
    assert run_replicates(fn, 20, seed=9, threads=4) == one
    monkeypatch.setenv("FRAG_THREADS", "3")
    assert resolve_threads(None) == 3
    assert run_replicates(fn, 20, seed=9) == one
    with pytest.raises(ValueError):
        resolve_threads(0)
    with pytest.raises(ValueError):
        run_replicates(fn, 0, seed=9)


def test_enumeration_examples():
    law = make_geometric_half()
    trees = enumerate_conditioned_trees(law, 1)
    assert len(trees) == 1 and trees[0][1] == 1.0
    assert [p for _, p in enumerate_conditioned_trees(law, 3)] == [0.5, 0.5]
    for tag in ("poisson-one", "stable-tail:1.5", "table:[0.3,0.45,0.2,0.05]"):
        for n in range(1, 9):
            assert abs(sum(p for _, p in enumerate_conditioned_trees(law_from_tag(tag), n)) - 1) < 1e-12
    with pytest.raises(ValueError):
        enumerate_conditioned_trees(law, 9)


def test_fragmented_law_edges():
    law = make_geometric_half()
    # at t = 1 nothing is cut; at t = 0 everything is
    full = fragmented_counts_law(law, 4, 1.0)
    assert all(sum(k) == 3 for k in full)
    assert fragmented_counts_law(law, 4, 0.0) == {(0, 0, 0, 0): pytest.approx(1.0)}
    assert sum(modified_walk_law(law, 4, 0.3).values()) == pytest.approx(1.0)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(reps=0)
    with pytest.raises(ValueError):
        ExperimentConfig(times=[-1.0])
    with pytest.raises(ValueError):
        ExperimentConfig(pipelines=["nope"])
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"bogus": 1})
    cfg = ExperimentConfig(sizes=[10, 20], pipelines=["bernoulli-fragment", "poisson-cut"])
    assert cfg.side(0) == ("bernoulli-fragment", 10) and cfg.side(1) == ("poisson-cut", 20)


@pytest.mark.parametrize("pipeline", ["bernoulli-fragment", "poisson-cut", "drift-ladder", "brownian-excursion"])
def test_pipelines_conserve_mass(pipeline):
    law = law_from_tag("stable-tail:1.5")
    res = run_pipeline(pipeline, law, 300, [0.0, 1.0, 3.0], 5, seed=1)
    for states in res:
        assert states[0].masses.tolist() == [1.0]
        assert all(m.conserved for m in states)


def test_same_seed_gives_zero_ks():
    cfg = ExperimentConfig(sizes=[200], times=[0.5, 1.0], reps=40, side_seeds=[3, 3])
    rep = run_convergence(cfg)
    assert all(r.ks_largest == 0 and r.ks_second == 0 and r.ks_count == 0 for r in rep.times)
    assert rep.passed and rep.to_dict()["passed"]


def test_report_fields():
    cfg = ExperimentConfig(sizes=[100, 200], times=[1.0], reps=30, seed=4)
    rep = run_convergence(cfg)
    r = rep.times[0]
    assert 0 <= r.ks_largest <= 1 and 0 <= r.ks_second <= 1 and r.l1_size_biased >= 0
    assert rep.sides[0]["size"] == 100 and rep.sides[1]["size"] == 200
    assert rep.runtime > 0


def test_figure_tables_match_golden():
    for name, text in figure_tables().items():
        assert text == (GOLDEN / name).read_text(encoding="utf-8")


def _run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr().out


def test_cli_fragment_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    args = ["fragment", "--law", "stable-tail:1.5", "--n", "100", "--times", "0.5,1,2", "--reps", "4"]
    assert cli.main(["--seed", "7", "--out", str(a)] + args) == 0
    assert cli.main(args + ["--seed", "7", "--out", str(b), "--threads", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = [json.loads(x) for x in a.read_text().splitlines()]
    assert len(lines) == 12 and lines[0]["rep"] == 0 and lines[0]["t"] == 0.5
    assert all(abs(sum(r["masses"]) - 1) < 1e-12 for r in lines)


def test_cli_sample_tree(capsys):
    code, out = _run(["--seed", "1", "sample-tree", "--law", "poisson-one", "--n", "12"], capsys)
    assert code == 0
    header, *rows = out.splitlines()
    meta = json.loads(header[2:])
    assert meta["n"] == 12 and meta["B_n"] == pytest.approx(12**0.5)
    assert rows[0] == "k,W_lex,c" and rows[-1] == "12,-1,"


def test_cli_excursion_and_cut(capsys):
    code, out = _run(["excursion", "--mode", "lattice", "--law", "geometric-half", "--m", "64", "--t", "0,1"], capsys)
    assert code == 0 and len(out.splitlines()) == 2
    code, out = _run(["crt-cut", "--n", "64", "--t", "1", "--reps", "3"], capsys)
    assert code == 0 and len(out.splitlines()) == 3


def test_cli_intensity(capsys):
    code, out = _run(["intensity", "--alpha", "2", "--t", "1", "--z", "1", "--check-moment"], capsys)
    d = json.loads(out)
    assert code == 0 and d["intensity"][0] == pytest.approx(0.24197072451914337)
    assert abs(d["moment"]["residual"]) < 1e-6


def test_cli_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 30, "reps": 2, "times": [1.0], "seed": 3}))
    code, out = _run(["fragment", "--config", str(cfg)], capsys)
    assert code == 0 and len(out.splitlines()) == 2
    code2, out2 = _run(["fragment", "--config", str(cfg), "--seed", "3"], capsys)
    assert out2 == out


def test_cli_converge_exit_codes(tmp_path, capsys):
    ok = ["converge", "--sizes", "50", "--times", "1", "--reps", "20"]
    cfg = tmp_path / "same.json"
    cfg.write_text(json.dumps({"side_seeds": [1, 1]}))
    code, out = _run(ok + ["--config", str(cfg)], capsys)
    assert code == 0 and json.loads(out)["passed"]
    # small trees against large trees at a late time differ clearly
    bad = ["converge", "--sizes", "20,2000", "--times", "3", "--reps", "300", "--threshold", "0.05"]
    code, out = _run(bad, capsys)
    assert code == 2 and not json.loads(out)["passed"]


def test_cli_errors_exit_one(capsys):
    assert cli.main(["fragment"]) == 1
    assert cli.main(["fragment", "--n", "10", "--law", "nonsense"]) == 1
    assert cli.main(["intensity", "--alpha", "3"]) == 1


def test_cli_reproduce_figure(tmp_path, capsys):
    assert cli.main(["--out", str(tmp_path), "reproduce-figure"]) == 0
    for name in ("tree.csv", "paths.csv", "masses.csv"):
        assert (tmp_path / name).read_bytes() == (GOLDEN / name).read_bytes()
