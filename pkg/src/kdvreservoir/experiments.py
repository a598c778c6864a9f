"""Experiment orchestration: configured runs, persistence, and replay.

Every run writes, per seed, an archive CSV and an evaluation-log CSV,
plus a JSON manifest capturing the effective configuration so the run
can be reproduced byte-for-byte.  Regression runs additionally score
every final-archive elite on a fixed seeded test set.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from scipy import stats

from . import __version__
from .encoding import AMPLITUDE, EncodingBounds, Genotype, SCHEMES, readout_times
from .evolution import Archive, EvoConfig, LogEntry, run as evolve
from .grid import SpatialGrid
from .reservoir import ReservoirConfig, ReservoirEvaluator, train
from .solver import DetectionConfig, SolverParams, integrate_probe
from .tasks import Dataset, mse, sigmoid, sigmoid_dataset, test_points, xnor_dataset
from .waves import SolitonParams, WindowParams, build_initial_condition

TASKS = ("xnor", "regression")


def _fmt(value) -> str:
    """Locale-independent, round-trippable float formatting."""
    return repr(float(value))


@dataclass(frozen=True)
class ExperimentConfig:
    task: str = "xnor"
    scheme: str = AMPLITUDE
    budget: int = 2000
    seeds: tuple[int, ...] = (0,)
    out_dir: str = "runs/experiment"
    workers: int = 1
    init_count: int = 100
    sigma: float = 0.1
    archive_shape: tuple[int, int] = (32, 32)
    # physical profile (desk scale by default)
    length: float = 80.0
    num_points: int = 256
    dt: float = 0.04
    dispersion: float = 1.0 / 3.0
    detection_position: float = 25.0
    soliton_center: float = -20.0
    rest_height: float = 1.0
    soliton_height: float = 1.0
    soliton_wavenumber: float = 0.5
    window_scale: float = 20.0
    window_order: int = 8
    amp_range: tuple[float, float] = (0.0, 1.5)
    freq_range: tuple[float, float] = (0.1, 3.0)
    t_max: float = 30.0
    # regression specifics
    n_train: int = 8
    digit_precision: int = 3
    test_count: int = 200
    test_seed: int = 12345
    debug_fields: bool = False

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not self.seeds:
            raise ValueError("need at least one seed")
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        for key in ("seeds", "archive_shape", "amp_range", "freq_range"):
            if key in data and isinstance(data[key], list):
                data[key] = tuple(data[key])
        return cls(**data)

    def reservoir_config(self) -> ReservoirConfig:
        return ReservoirConfig(
            grid=SpatialGrid.centered(self.length, self.num_points),
            solver=SolverParams(dispersion=self.dispersion, dt=self.dt),
            detection=DetectionConfig(self.detection_position),
            soliton=SolitonParams(
                u0=self.rest_height,
                us=self.soliton_height,
                ks=self.soliton_wavenumber,
                center=self.soliton_center,
                dispersion=self.dispersion,
            ),
            window=WindowParams(self.window_scale, self.window_order),
            bounds=EncodingBounds(self.amp_range, self.freq_range, self.t_max),
        )

    def dataset(self) -> Dataset:
        if self.task == "xnor":
            return xnor_dataset()
        return sigmoid_dataset(self.n_train, self.digit_precision)

    def evaluator(self) -> ReservoirEvaluator:
        return ReservoirEvaluator(self.reservoir_config(), self.dataset(), self.scheme)

    def evo_config(self, seed: int) -> EvoConfig:
        return EvoConfig(
            budget=self.budget,
            init_count=min(self.init_count, self.budget),
            sigma=self.sigma,
            seed=seed,
            grid_shape=self.archive_shape,
            workers=self.workers,
        )


@dataclass
class RunManifest:
    config: dict
    version: str
    seed_outputs: dict
    timings: dict

    def save(self, path: Path) -> None:
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path: Path) -> "RunManifest":
        return cls(**json.loads(Path(path).read_text()))


ARCHIVE_HEADER = [
    "cell_row",
    "cell_col",
    "desc_mean",
    "desc_std",
    "fitness",
    "eval_index",
    "scheme",
    "num_time_genes",
    "genes",
]


def write_archive_csv(archive: Archive, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(ARCHIVE_HEADER)
        for (row, col), ind in sorted(archive.cells.items()):
            genes = ";".join(_fmt(v) for v in ind.genotype.as_vector())
            writer.writerow(
                [
                    row,
                    col,
                    _fmt(ind.descriptor.mean),
                    _fmt(ind.descriptor.std),
                    _fmt(ind.fitness),
                    ind.eval_index,
                    ind.genotype.scheme,
                    ind.genotype.times.size,
                    genes,
                ]
            )


def read_archive_csv(path: Path) -> list[dict]:
    entries = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            vec = np.array([float(v) for v in row["genes"].split(";")])
            entries.append(
                {
                    "cell": (int(row["cell_row"]), int(row["cell_col"])),
                    "desc_mean": float(row["desc_mean"]),
                    "desc_std": float(row["desc_std"]),
                    "fitness": float(row["fitness"]),
                    "eval_index": int(row["eval_index"]),
                    "genotype": Genotype.from_vector(
                        vec, int(row["num_time_genes"]), row["scheme"]
                    ),
                }
            )
    return entries


def write_log_csv(log: list[LogEntry], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["eval_index", "fitness", "cell_row", "cell_col", "accepted", "status"])
        for entry in log:
            row, col = entry.cell if entry.cell is not None else ("", "")
            writer.writerow(
                [entry.eval_index, _fmt(entry.fitness), row, col, int(entry.accepted), entry.status]
            )


def score_archive_mse(
    archive: Archive, evaluator: ReservoirEvaluator, xs: np.ndarray
) -> list[tuple[tuple[int, int], float, float]]:
    """Test-set MSE of every elite: [(cell, fitness, mse), ...]."""
    targets = sigmoid(xs)
    out = []
    for (row, col), ind in sorted(archive.cells.items()):
        readout, _ = evaluator.train_on_dataset(ind.genotype)
        preds = evaluator.predict(readout, ind.genotype, xs[:, None])
        out.append(((row, col), ind.fitness, mse(preds, targets)))
    return out


def run_experiment(config: ExperimentConfig) -> RunManifest:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    evaluator = config.evaluator()
    seed_outputs: dict = {}
    timings: dict = {}
    for seed in config.seeds:
        t0 = time.perf_counter()
        archive, log = evolve(evaluator, config.evo_config(seed))
        paths = {
            "archive": str(out / f"archive_seed{seed}.csv"),
            "log": str(out / f"log_seed{seed}.csv"),
        }
        write_archive_csv(archive, Path(paths["archive"]))
        write_log_csv(log, Path(paths["log"]))
        if config.task == "regression":
            xs = test_points(config.test_count, config.test_seed)
            scored = score_archive_mse(archive, evaluator, xs)
            paths["fitness_mse"] = str(out / f"fitness_mse_seed{seed}.csv")
            with open(paths["fitness_mse"], "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["cell_row", "cell_col", "fitness", "test_mse"])
                for (row, col), fit, err in scored:
                    writer.writerow([row, col, _fmt(fit), _fmt(err)])
        seed_outputs[str(seed)] = paths
        timings[str(seed)] = time.perf_counter() - t0
    manifest = RunManifest(
        config=config.to_dict(),
        version=__version__,
        seed_outputs=seed_outputs,
        timings=timings,
    )
    manifest.save(out / "manifest.json")
    return manifest


def _select_entry(entries: list[dict], genotype_id: str) -> dict:
    if genotype_id == "best":
        return max(entries, key=lambda e: e["fitness"])
    try:
        row, col = (int(v) for v in genotype_id.split(","))
    except ValueError:
        raise KeyError(f"bad genotype id {genotype_id!r}; use 'best' or 'row,col'")
    for entry in entries:
        if entry["cell"] == (row, col):
            return entry
    raise KeyError(f"no elite stored in cell ({row}, {col})")


def replay(manifest_path: Path, seed: int, genotype_id: str = "best") -> dict:
    """Re-simulate one archived genotype and export its figure data.

    Writes per-observation probe traces over the full [0, t_max] window
    (with the readout instants marked), the readout matrix, and, for
    regression runs, test-set predictions.  Returns a summary dict.
    """
    manifest_path = Path(manifest_path)
    manifest = RunManifest.load(manifest_path)
    config = ExperimentConfig.from_dict(manifest.config)
    out = manifest_path.parent
    entries = read_archive_csv(Path(manifest.seed_outputs[str(seed)]["archive"]))
    entry = _select_entry(entries, genotype_id)
    genotype = entry["genotype"]

    evaluator = config.evaluator()
    cfg = evaluator.config
    times = readout_times(genotype, cfg.bounds)
    rows = []
    tag = f"seed{seed}_{genotype_id.replace(',', '-')}"
    for i, x in enumerate(evaluator.dataset.observations):
        waves = evaluator.encode_observation(x, genotype)
        initial = build_initial_condition(waves, cfg.soliton, cfg.window, cfg.grid)
        if config.debug_fields:
            snap = out / f"replay_{tag}_obs{i}_field.csv"
            with open(snap, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["xi", "u"])
                for xi, u in zip(cfg.grid.points, initial.heights):
                    writer.writerow([_fmt(xi), _fmt(u)])
        step_times, series = integrate_probe(
            initial.heights, cfg.grid, cfg.solver, cfg.detection, cfg.bounds.t_max
        )
        trace_path = out / f"replay_{tag}_obs{i}_trace.csv"
        with open(trace_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["time", "height", "is_readout"])
            marks = {int(round(t / cfg.solver.dt)) for t in times}
            for s, (t, h) in enumerate(zip(step_times, series)):
                writer.writerow([_fmt(t), _fmt(h), int(s in marks)])
        rows.append(np.interp(times, step_times, series))

    readout_matrix = np.array(rows)
    matrix_path = out / f"replay_{tag}_readout_matrix.csv"
    with open(matrix_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([_fmt(t) for t in times])
        for row in readout_matrix:
            writer.writerow([_fmt(v) for v in row])

    summary = {
        "genotype_id": genotype_id,
        "seed": seed,
        "archived_fitness": entry["fitness"],
        "replayed_fitness": float(abs(np.linalg.det(readout_matrix))),
        "readout_times": [float(t) for t in times],
        "readout_matrix": str(matrix_path),
    }
    if config.task == "regression":
        xs = test_points(config.test_count, config.test_seed)
        readout = train(readout_matrix, evaluator.dataset.targets)
        preds = evaluator.predict(readout, genotype, xs[:, None])
        pred_path = out / f"replay_{tag}_predictions.csv"
        with open(pred_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "target", "prediction"])
            for x, t, p in zip(xs, sigmoid(xs), preds):
                writer.writerow([_fmt(x), _fmt(t), _fmt(p)])
        summary["test_mse"] = mse(preds, sigmoid(xs))
        summary["predictions"] = str(pred_path)
    summary_path = out / f"replay_{tag}_summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary


@dataclass
class CompareReport:
    """One-sided Mann-Whitney comparison: amplitude > frequency."""

    u_statistic: float
    p_value: float
    amplitude_median: float
    frequency_median: float
    n_amplitude: int
    n_frequency: int
    histogram_edges: list
    amplitude_counts: list
    frequency_counts: list


def pooled_fitness(archive_paths) -> np.ndarray:
    values = []
    for path in archive_paths:
        values.extend(entry["fitness"] for entry in read_archive_csv(Path(path)))
    return np.array(values)


def compare_encodings(amp_archives, freq_archives, n_bins: int = 40) -> CompareReport:
    amp = pooled_fitness(amp_archives)
    freq = pooled_fitness(freq_archives)
    if amp.size == 0 or freq.size == 0:
        raise ValueError("both archive sets must contain at least one elite")
    u_stat, p = stats.mannwhitneyu(amp, freq, alternative="greater")
    edges = np.histogram_bin_edges(np.concatenate([amp, freq]), bins=n_bins)
    return CompareReport(
        u_statistic=float(u_stat),
        p_value=float(p),
        amplitude_median=float(np.median(amp)),
        frequency_median=float(np.median(freq)),
        n_amplitude=int(amp.size),
        n_frequency=int(freq.size),
        histogram_edges=[float(e) for e in edges],
        amplitude_counts=np.histogram(amp, bins=edges)[0].tolist(),
        frequency_counts=np.histogram(freq, bins=edges)[0].tolist(),
    )


def export_dataset_csv(dataset: Dataset, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        n_feat = dataset.observations.shape[1]
        writer.writerow([f"x{i}" for i in range(n_feat)] + ["y"])
        for x, y in zip(dataset.observations, dataset.targets):
            writer.writerow([_fmt(v) for v in x] + [_fmt(y)])
