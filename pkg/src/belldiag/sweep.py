"""Sweep driver: parameterize -> build -> simulate -> tomograph -> measure.

A sweep walks a deterministic list of target states (tetrahedron lattice,
Werner line, or a single point), pushes each through the configured circuit
template and pipeline, and collects one row of coordinates + fidelity +
measures per state.  Row seeds derive from the config seed and row index,
so parallel and serial execution emit identical artifacts.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import circuits, measures, states, tomography
from .seeding import derive_seed
from .simulator import NoiseModel, evolve, principal_density

MODES = ("tetrahedron", "werner-line", "single")
TEMPLATES = ("four-qubit", "two-qubit", "four-qubit-ancilla", "werner-special")
ENCODERS = ("compact", "canonical")
PIPELINES = ("exact", "shots-tomography")
FORMATS = ("csv", "json")

CSV_COLUMNS = (
    "t1", "t2", "t3",
    "p00", "p01", "p10", "p11",
    "w",
    "fidelity",
    "eof", "concurrence", "chsh_M", "chsh_L", "steering3",
    "mutual_info", "classical_corr", "discord", "ppt_min_eig",
    "seed",
)


class ConfigError(ValueError):
    """Invalid sweep configuration; `field` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"config field '{field_name}': {message}")
        self.field = field_name


def _default_noise_path():
    from importlib.resources import files

    return files("belldiag.data").joinpath("noise_default.json")


def load_noise(spec) -> NoiseModel | None:
    """Resolve a config noise reference: None, "default", a file path, or
    an inline parameter dict."""
    if spec is None:
        return None
    if isinstance(spec, NoiseModel):
        return spec
    if isinstance(spec, dict):
        return NoiseModel.from_dict(spec)
    if spec == "default":
        return NoiseModel.from_dict(json.loads(_default_noise_path().read_text()))
    return NoiseModel.from_file(spec)


@dataclass
class SweepConfig:
    mode: str
    template: str = "two-qubit"
    encoder: str = "compact"
    pipeline: str = "exact"
    shots: int = 1024
    seed: int = 2020
    noise: NoiseModel | None = None
    n_side: int = 11
    n_points: int = 100
    single: dict | None = None
    output_path: str | None = None
    output_format: str = "csv"
    plot: bool = False
    plot_dir: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError("mode", f"{self.mode!r} not in {MODES}")
        if self.template not in TEMPLATES:
            raise ConfigError("template", f"{self.template!r} not in {TEMPLATES}")
        if self.encoder not in ENCODERS:
            raise ConfigError("encoder", f"{self.encoder!r} not in {ENCODERS}")
        if self.pipeline not in PIPELINES:
            raise ConfigError("pipeline", f"{self.pipeline!r} not in {PIPELINES}")
        if self.output_format not in FORMATS:
            raise ConfigError("output.format", f"{self.output_format!r} not in {FORMATS}")
        if self.shots < 1:
            raise ConfigError("shots", "must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers", "must be >= 1")
        if self.template == "werner-special":
            if self.mode == "tetrahedron" or (
                self.mode == "single" and "w" not in (self.single or {})
            ):
                raise ConfigError(
                    "template",
                    "werner-special requires werner-line mode or a single-w point",
                )
        if self.mode == "single" and not self.single:
            raise ConfigError("single", "single mode needs a point ('t', 'p' or 'w')")

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        known = {
            "mode", "template", "encoder", "pipeline", "shots", "seed",
            "noise", "grid", "single", "output", "plot", "workers",
        }
        unknown = set(d) - known
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown config key")
        if "mode" not in d:
            raise ConfigError("mode", "required")
        grid = d.get("grid") or {}
        output = d.get("output") or {}
        plot = d.get("plot") or {}
        if isinstance(plot, bool):
            plot = {"enabled": plot}
        try:
            noise = load_noise(d.get("noise"))
        except (OSError, ValueError) as exc:
            raise ConfigError("noise", str(exc)) from exc
        return cls(
            mode=d["mode"],
            template=d.get("template", "two-qubit"),
            encoder=d.get("encoder", "compact"),
            pipeline=d.get("pipeline", "exact"),
            shots=int(d.get("shots", 1024)),
            seed=int(d.get("seed", 2020)),
            noise=noise,
            n_side=int(grid.get("n_side", 11)),
            n_points=int(grid.get("n_points", 100)),
            single=d.get("single"),
            output_path=output.get("path"),
            output_format=output.get("format", "csv"),
            plot=bool(plot.get("enabled", False)),
            plot_dir=plot.get("dir"),
            workers=int(d.get("workers", 1)),
        )

    @classmethod
    def from_file(cls, path) -> "SweepConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("<json>", f"{path}: line {exc.lineno}: {exc.msg}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("<root>", "config must be a JSON object")
        return cls.from_dict(doc)


@dataclass
class SweepRow:
    t: np.ndarray
    p: np.ndarray
    w: float  # nan when the state is off the Werner line
    fidelity: float
    report: measures.MeasureReport
    seed: int
    template: str
    encoder: str
    runtime_s: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        d = {
            "t1": self.t[0], "t2": self.t[1], "t3": self.t[2],
            "p00": self.p[0], "p01": self.p[1], "p10": self.p[2], "p11": self.p[3],
            "w": self.w,
            "fidelity": self.fidelity,
        }
        rep = self.report.to_dict()
        for name in measures.MeasureReport.FIELD_ORDER:
            d[name] = rep[name]
        d["seed"] = self.seed
        return d


def target_states(cfg: SweepConfig):
    """Deterministic (p, w) list for the configured mode; w is nan off the
    Werner line."""
    out = []
    if cfg.mode == "tetrahedron":
        for p in states.tetrahedron_grid(cfg.n_side):
            out.append((p, math.nan))
    elif cfg.mode == "werner-line":
        for w in states.werner_line(cfg.n_points):
            out.append((states.t_to_probs((-w, -w, -w)), float(w)))
    else:
        point = cfg.single or {}
        if "w" in point:
            w = float(point["w"])
            out.append((states.t_to_probs((-w, -w, -w)), w))
        elif "t" in point:
            out.append((states.t_to_probs(point["t"]), math.nan))
        elif "p" in point:
            out.append((states.check_probabilities(point["p"]), math.nan))
        else:
            raise ConfigError("single", "needs one of 't', 'p' or 'w'")
    return out


def prepare_circuit(cfg: SweepConfig, p, w: float) -> circuits.Circuit:
    if cfg.template == "werner-special":
        return circuits.build_werner_circuit(w)
    return circuits.build_preparation(p, cfg.template, cfg.encoder)


def run_point(cfg: SweepConfig, index: int, p, w: float) -> SweepRow:
    """Run one target state through the configured pipeline."""
    start = time.perf_counter()
    row_seed = derive_seed(cfg.seed, index)
    target = states.bds_density(p)
    circuit = prepare_circuit(cfg, p, w)
    if cfg.pipeline == "exact":
        rho = principal_density(evolve(circuit, cfg.noise), circuit.principal)
    else:
        rho = tomography.reconstruct(circuit, cfg.shots, row_seed, cfg.noise)
    rep = measures.report(rho, target=target)
    return SweepRow(
        t=states.probs_to_t(p),
        p=np.asarray(p, dtype=float),
        w=w,
        fidelity=rep.fidelity_vs_target,
        report=rep,
        seed=row_seed,
        template=cfg.template,
        encoder=cfg.encoder,
        runtime_s=time.perf_counter() - start,
    )


def run_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """All rows for the configured sweep, in grid order."""
    points = target_states(cfg)
    if cfg.workers == 1:
        return [run_point(cfg, i, p, w) for i, (p, w) in enumerate(points)]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        futures = [pool.submit(run_point, cfg, i, p, w) for i, (p, w) in enumerate(points)]
        return [f.result() for f in futures]


COMPARE_COMBOS = (
    ("four-qubit", "compact"),
    ("four-qubit", "canonical"),
    ("two-qubit", "compact"),
    ("two-qubit", "canonical"),
    ("werner-special", "-"),
)


def compare_templates(cfg_base: SweepConfig) -> list[dict]:
    """Werner-line fidelity comparison of every template/encoder combination.

    Returns one summary dict (mean and standard deviation of fidelity) per
    combination, using the base config's line resolution, shots, seed and
    noise model.
    """
    summaries = []
    for template, encoder in COMPARE_COMBOS:
        cfg = SweepConfig(
            mode="werner-line",
            template=template,
            encoder=encoder if encoder != "-" else "compact",
            pipeline=cfg_base.pipeline,
            shots=cfg_base.shots,
            seed=cfg_base.seed,
            noise=cfg_base.noise,
            n_points=cfg_base.n_points,
            workers=cfg_base.workers,
        )
        fids = np.array([row.fidelity for row in run_sweep(cfg)])
        summaries.append(
            {
                "template": template,
                "encoder": encoder,
                "mean_fidelity": float(fids.mean()),
                "std_fidelity": float(fids.std()),
                "n_points": len(fids),
            }
        )
    return summaries


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".10g")


def rows_to_csv(rows) -> str:
    """Fixed-header CSV with 10-significant-digit numeric formatting."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        d = row.to_dict()
        writer.writerow([_fmt(d[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def rows_to_json(rows) -> str:
    docs = []
    for row in rows:
        d = row.to_dict()
        doc = {}
        for c in CSV_COLUMNS:
            v = d[c]
            if c == "seed":
                doc[c] = int(v)
            else:
                v = float(v)
                doc[c] = None if math.isnan(v) else float(_fmt(v))
        doc["template"] = row.template
        doc["encoder"] = row.encoder
        doc["method"] = row.report.method
        docs.append(doc)
    return json.dumps(docs, indent=2) + "\n"


def emit(rows, output_format: str, path) -> str:
    """Write rows as CSV or JSON; identical config means identical bytes."""
    if output_format not in FORMATS:
        raise ConfigError("output.format", f"{output_format!r} not in {FORMATS}")
    text = rows_to_csv(rows) if output_format == "csv" else rows_to_json(rows)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write sweep output to {path}: {exc}") from exc
    return text


def parse_csv(text: str) -> list[dict]:
    """Re-parse an emitted CSV into per-row dicts of floats (seed as int)."""
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for rec in reader:
        rows.append(
            {k: (int(v) if k == "seed" else float(v)) for k, v in rec.items()}
        )
    return rows
