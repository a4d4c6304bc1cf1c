import math

import numpy as np
import pytest
import torch

import graphvrnn.training as training
from graphvrnn.datasets import gen_dataset
from graphvrnn.errors import BandwidthError, DataError, NumericError
from graphvrnn.graphio import save_graphs
from graphvrnn.graphs import Graph
from graphvrnn.model import ModelConfig
from graphvrnn.nn import load_checkpoint
from graphvrnn.rng import derive
from graphvrnn.training import (
    METRICS_HEADER,
    TrainConfig,
    _encode_fresh,
    lr_at_step,
    train_run,
)

from helpers import star_graph, triangle


def _dataset_file(tmp_path, name="ego-surrogate", count=8, size_range=(4, 7), seed=0):
    graphs = gen_dataset(name, count, derive(seed), size_range=size_range)
    path = tmp_path / "train.graphs"
    save_graphs(graphs, path, {"dataset": name})
    return path, graphs


def _config(tmp_path, data_path, steps=6, variant="graphvrnn", **overrides):
    model = ModelConfig(
        variant,
        m=overrides.pop("m", 6),
        node_hidden=overrides.pop("node_hidden", 8),
        edge_hidden=4,
        node_layers=2,
        edge_layers=2,
        d_z=3,
        k=overrides.pop("k", 0),
        beta=overrides.pop("beta", 1.0),
    )
    base = dict(
        steps=steps,
        dataset_path=str(data_path),
        model=model,
        out_dir=str(tmp_path / overrides.pop("out_name", "run")),
        batch_size=4,
        log_every=overrides.pop("log_every", 2),
        checkpoint_every=overrides.pop("checkpoint_every", 1000),
        seed=overrides.pop("seed", 0),
    )
    base.update(overrides)
    return TrainConfig(**base)


class TestLrSchedule:
    def _cfg(self):
        return TrainConfig(
            steps=1, dataset_path="x", model=ModelConfig("graphrnn", m=2), out_dir="y"
        )

    def test_decay_boundaries(self):
        cfg = self._cfg()
        assert lr_at_step(cfg, 0) == 0.001
        assert lr_at_step(cfg, 12799) == 0.001
        assert math.isclose(lr_at_step(cfg, 12800), 0.0003, rel_tol=1e-12)
        assert math.isclose(lr_at_step(cfg, 31999), 0.0003, rel_tol=1e-12)
        assert math.isclose(lr_at_step(cfg, 32000), 0.00009, rel_tol=1e-12)
        assert math.isclose(lr_at_step(cfg, 10**6), 0.00009, rel_tol=1e-12)

    def test_negative_step_rejected(self):
        with pytest.raises(DataError):
            lr_at_step(self._cfg(), -1)


class TestTrainConfigValidation:
    def test_bad_values_rejected(self):
        model = ModelConfig("graphrnn", m=2)
        with pytest.raises(DataError):
            TrainConfig(steps=0, dataset_path="x", model=model, out_dir="y")
        with pytest.raises(DataError):
            TrainConfig(steps=1, dataset_path="x", model=model, out_dir="y", batch_size=0)
        with pytest.raises(DataError):
            TrainConfig(
                steps=1, dataset_path="x", model=model, out_dir="y",
                decay_steps=(100, 50),
            )

    def test_to_dict_is_json_ready(self):
        model = ModelConfig("graphrnn", m=2)
        cfg = TrainConfig(steps=1, dataset_path="x", model=model, out_dir="y")
        d = cfg.to_dict()
        assert d["model"]["variant"] == "graphrnn"
        assert d["decay_steps"] == [12800, 32000]


class TestEncodeFresh:
    def test_redraws_until_bandwidth_fits(self):
        # hub-start orders of a star need lookback n-1; leaf starts fit m=3
        g = star_graph(5)
        rng = derive(1)
        for _ in range(40):
            seq = _encode_fresh(g, 3, rng, retries=100)
            assert seq.n == 5 and seq.m == 3

    def test_gives_up_after_bounded_retries(self):
        with pytest.raises(DataError, match="re-estimate"):
            _encode_fresh(triangle(), 1, derive(2), retries=25)

    def test_passes_through_fresh_orders(self):
        g = star_graph(6)
        rng = derive(3)
        rows = {tuple(map(tuple, _encode_fresh(g, 5, rng, 100).s_rows)) for _ in range(20)}
        assert len(rows) > 1


class TestTrainRun:
    def test_smoke_and_metrics_format(self, tmp_path):
        data, _ = _dataset_file(tmp_path)
        cfg = _config(tmp_path, data, steps=6)
        result = train_run(cfg)
        lines = open(result.metrics_path).read().splitlines()
        assert lines[0] == METRICS_HEADER
        assert len(lines) == 1 + 3
        first = lines[1].split("\t")
        assert first[0] == "2" and len(first) == 6
        assert [row["step"] for row in result.history] == [2, 4, 6]
        ck = load_checkpoint(result.checkpoint_path)
        assert ck.step == 6
        assert ck.config == cfg.model.to_dict()
        assert ck.extra["max_nodes"] >= 4
        assert ck.params.step_count == 6

    def test_loss_decreases_on_tiny_corpus(self, tmp_path):
        graphs = [triangle() for _ in range(4)]
        path = tmp_path / "tri.graphs"
        save_graphs(graphs, path)
        cfg = _config(tmp_path, path, steps=60, m=2, log_every=10, lr0=0.01)
        result = train_run(cfg)
        first, last = result.history[0], result.history[-1]
        assert last["bce"] < first["bce"]
        assert last["bce"] < 1.5

    def test_two_runs_are_byte_identical(self, tmp_path):
        data, _ = _dataset_file(tmp_path)
        a = train_run(_config(tmp_path, data, out_name="a", seed=9))
        b = train_run(_config(tmp_path, data, out_name="b", seed=9))
        assert open(a.metrics_path, "rb").read() == open(b.metrics_path, "rb").read()
        assert (
            open(a.checkpoint_path, "rb").read() == open(b.checkpoint_path, "rb").read()
        )

    def test_seed_changes_the_run(self, tmp_path):
        data, _ = _dataset_file(tmp_path)
        a = train_run(_config(tmp_path, data, out_name="a", seed=1))
        b = train_run(_config(tmp_path, data, out_name="b", seed=2))
        assert a.history[-1]["total"] != b.history[-1]["total"]

    def test_resume_matches_uninterrupted_run(self, tmp_path):
        data, _ = _dataset_file(tmp_path)
        straight = train_run(_config(tmp_path, data, steps=8, out_name="full"))

        part = _config(tmp_path, data, steps=8, out_name="part", checkpoint_every=4)
        # run to completion once to materialize the mid-run checkpoint
        train_run(part)
        mid = tmp_path / "part" / "ckpt_000004.ckpt"
        assert mid.exists()
        resumed_cfg = _config(tmp_path, data, steps=8, out_name="resumed")
        resumed = train_run(resumed_cfg, resume_from=str(mid))
        assert (
            open(straight.checkpoint_path, "rb").read()
            == open(resumed.checkpoint_path, "rb").read()
        )
        assert [row["step"] for row in resumed.history] == [6, 8]
        assert resumed.history[-1] == straight.history[-1]

    def test_resume_rejects_mismatched_config(self, tmp_path):
        data, _ = _dataset_file(tmp_path)
        done = train_run(_config(tmp_path, data, steps=4, out_name="src"))
        other = _config(tmp_path, data, steps=8, out_name="dst", node_hidden=16, m=6)
        with pytest.raises(DataError, match="config"):
            train_run(other, resume_from=done.checkpoint_path)

    def test_fixed_order_runs_and_differs_from_fresh(self, tmp_path):
        data, _ = _dataset_file(tmp_path)
        fresh = train_run(_config(tmp_path, data, out_name="fr", seed=5))
        fixed = train_run(_config(tmp_path, data, out_name="fx", seed=5, fixed_order=True))
        assert fixed.history[-1]["total"] != fresh.history[-1]["total"]

    def test_bandwidth_below_estimate_rejected(self, tmp_path):
        graphs = [star_graph(8) for _ in range(3)]
        path = tmp_path / "star.graphs"
        save_graphs(graphs, path)
        cfg = _config(tmp_path, path, m=2)
        with pytest.raises(DataError, match="below the training split's estimate"):
            train_run(cfg)

    def test_empty_dataset_rejected(self, tmp_path):
        path = tmp_path / "none.graphs"
        save_graphs([], path)
        with pytest.raises(DataError, match="no graphs"):
            train_run(_config(tmp_path, path))

    def test_attr_dimension_mismatch_rejected(self, tmp_path):
        graphs = [triangle(np.zeros((3, 2)))]
        path = tmp_path / "attr.graphs"
        save_graphs(graphs + graphs, path)
        cfg = _config(tmp_path, path, m=2, k=0)
        with pytest.raises(DataError, match="does not match model k"):
            train_run(cfg)

    def test_nonfinite_loss_aborts_with_diagnostic(self, tmp_path, monkeypatch):
        data, _ = _dataset_file(tmp_path)
        real = training.elbo_loss
        calls = {"n": 0}

        def poisoned(outputs, targets, beta):
            calls["n"] += 1
            total, bce, mse, kl = real(outputs, targets, beta)
            if calls["n"] == 3:
                total = total * torch.tensor(float("nan"), dtype=torch.float64)
            return total, bce, mse, kl

        monkeypatch.setattr(training, "elbo_loss", poisoned)
        cfg = _config(tmp_path, data, steps=10, out_name="boom")
        with pytest.raises(NumericError, match="non-finite loss at step 3"):
            train_run(cfg)
        diag = tmp_path / "boom" / "diagnostic_step3.ckpt"
        assert diag.exists()
        ck = load_checkpoint(diag)
        assert ck.extra == {"reason": "non-finite loss"}
        assert not (tmp_path / "boom" / "final.ckpt").exists()

    def test_single_thread_enforced(self, tmp_path):
        torch.set_num_threads(2)
        data, _ = _dataset_file(tmp_path)
        train_run(_config(tmp_path, data, steps=1))
        assert torch.get_num_threads() == 1
