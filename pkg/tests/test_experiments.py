import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

from kdvreservoir.cli import main
from kdvreservoir.experiments import (
    CompareReport,
    ExperimentConfig,
    compare_encodings,
    read_archive_csv,
    replay,
    run_experiment,
    write_archive_csv,
)

# cheap profile for experiment-level tests
FAST = dict(
    num_points=128,
    dt=0.05,
    t_max=4.0,
    budget=40,
    init_count=40,
)


def fast_config(tmp_path, **overrides):
    return ExperimentConfig(out_dir=str(tmp_path / "run"), **{**FAST, **overrides})


@pytest.fixture(scope="module")
def xnor_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("xnor")
    config = fast_config(out, task="xnor", scheme="amplitude", seeds=(1,))
    manifest = run_experiment(config)
    return config, manifest


class TestRunExperiment:
    def test_outputs_exist_and_manifest_replays(self, xnor_run):
        config, manifest = xnor_run
        out = Path(config.out_dir)
        assert (out / "manifest.json").exists()
        assert (out / "archive_seed1.csv").exists()
        assert (out / "log_seed1.csv").exists()
        entries = read_archive_csv(out / "archive_seed1.csv")
        assert len(entries) >= 1

    def test_repeat_run_is_byte_identical(self, tmp_path, xnor_run):
        config, _ = xnor_run
        config2 = ExperimentConfig.from_dict(
            {**config.to_dict(), "out_dir": str(tmp_path / "again")}
        )
        run_experiment(config2)
        original = Path(config.out_dir, "archive_seed1.csv").read_bytes()
        repeat = Path(tmp_path, "again", "archive_seed1.csv").read_bytes()
        assert original == repeat

    def test_worker_count_does_not_change_outputs(self, tmp_path, xnor_run):
        config, _ = xnor_run
        config2 = ExperimentConfig.from_dict(
            {**config.to_dict(), "out_dir": str(tmp_path / "workers2"), "workers": 2}
        )
        run_experiment(config2)
        original = Path(config.out_dir, "archive_seed1.csv").read_bytes()
        parallel = Path(tmp_path, "workers2", "archive_seed1.csv").read_bytes()
        assert original == parallel

    def test_regression_run_writes_fitness_mse(self, tmp_path):
        config = fast_config(tmp_path, task="regression", seeds=(0,), test_count=20)
        run_experiment(config)
        path = Path(config.out_dir, "fitness_mse_seed0.csv")
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert rows
        for row in rows:
            assert math.isfinite(float(row["test_mse"]))


class TestReplay:
    def test_replay_reproduces_archived_fitness(self, xnor_run):
        config, _ = xnor_run
        summary = replay(Path(config.out_dir) / "manifest.json", seed=1, genotype_id="best")
        assert summary["replayed_fitness"] == summary["archived_fitness"]

    def test_trace_row_count_spans_full_window(self, xnor_run):
        config, _ = xnor_run
        replay(Path(config.out_dir) / "manifest.json", seed=1, genotype_id="best")
        trace = Path(config.out_dir) / "replay_seed1_best_obs0_trace.csv"
        with open(trace, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == math.ceil(config.t_max / config.dt) + 1
        assert sum(int(r["is_readout"]) for r in rows) >= 1

    def test_unknown_cell_rejected(self, xnor_run):
        config, _ = xnor_run
        with pytest.raises(KeyError):
            replay(Path(config.out_dir) / "manifest.json", seed=1, genotype_id="999,999")


def write_fake_archive(path, fitnesses):
    from kdvreservoir.encoding import AMPLITUDE, Genotype
    from kdvreservoir.evolution import Archive, Descriptor, Individual

    archive = Archive((64, 1), (0.0, 1.0), (0.0, 0.5))
    for i, f in enumerate(fitnesses):
        g = Genotype(times=np.zeros(2), genes=np.full(3, 0.5), scheme=AMPLITUDE)
        archive.cells[(i, 0)] = Individual(g, float(f), Descriptor(i / 64, 0.1), i)
    write_archive_csv(archive, path)


class TestCompare:
    def test_identical_distributions_give_large_p(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        values = np.linspace(0.1, 1.0, 30)
        write_fake_archive(a, values)
        write_fake_archive(b, values)
        report = compare_encodings([a], [b])
        assert report.p_value > 0.4

    def test_complete_separation_gives_small_p(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_fake_archive(a, np.full(30, 1.0))
        write_fake_archive(b, np.full(30, 1e-6))
        report = compare_encodings([a], [b])
        assert report.p_value < 1e-6
        assert report.amplitude_median > report.frequency_median

    def test_empty_archive_set_rejected(self, tmp_path):
        a = tmp_path / "a.csv"
        write_fake_archive(a, [])
        with pytest.raises(ValueError):
            compare_encodings([a], [a])


class TestCli:
    def test_run_and_replay_subcommands(self, tmp_path):
        out = tmp_path / "cli"
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps(FAST))
        code = main(
            [
                "run",
                "--task",
                "xnor",
                "--scheme",
                "amplitude",
                "--seeds",
                "0",
                "--config",
                str(cfg),
                "--out",
                str(out),
            ]
        )
        assert code == 0
        assert (out / "archive_seed0.csv").exists()
        assert main(["replay", str(out / "manifest.json"), "--seed", "0"]) == 0

    def test_export_dataset(self, tmp_path):
        out = tmp_path / "xnor.csv"
        assert main(["export-dataset", "--task", "xnor", "--out", str(out)]) == 0
        with open(out, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 4
        assert rows[0]["y"] == "1.0"

    def test_compare_subcommand(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_fake_archive(a, np.linspace(0.5, 1.0, 20))
        write_fake_archive(b, np.linspace(0.0, 0.1, 20))
        report_path = tmp_path / "report.json"
        code = main(
            ["compare", "--amplitude", str(a), "--frequency", str(b), "--out", str(report_path)]
        )
        assert code == 0
        payload = json.loads(report_path.read_text())
        assert payload["p_value"] < 0.01

    def test_invalid_config_exits_nonzero(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["run", "--task", "xnor", "--budget", "-5", "--out", str(tmp_path / "x")])
        assert exc.value.code != 0
