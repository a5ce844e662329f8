"""Experiment grids: F1 against the number of traces.

A grid names graph specs, algorithms, trace counts and repetitions. Every
(graph, algorithm, ell, rep) cell yields one CSV row. Rows are cached on
disk under a hash of the cell so interrupted sweeps resume; set
``TRACEINFER_CACHE_DIR`` or pass ``cache_dir`` to enable the cache.

Repetition ``r`` of a graph always uses the same trace stream, so larger
``ell`` values extend smaller ones.
"""
from __future__ import annotations

import csv
import hashlib
import json
import logging
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import rng as _rng
from .bdd import ScoreConfig, reconstruct_bdd
from .cascade import CascadeParams, simulate_many
from .errors import ParameterError, TraceInferError
from .evaluate import evaluate
from .firstedge import FirstEdgePlusConfig, first_edge, first_edge_plus
from .graph import GraphSpec, generate
from .tree import reconstruct_tree

log = logging.getLogger(__name__)

CACHE_ENV = "TRACEINFER_CACHE_DIR"
ALGORITHMS = ("first-edge", "first-edge+", "tree", "bdd")
COLUMNS = ["family", "n", "graph_id", "algorithm", "ell", "rep", "seed", "lambda", "p",
           "precision", "recall", "f1", "tp", "fp", "fn", "status"]
CACHE_VERSION = 1


def log_grid(lo: int, hi: int, per_decade: int = 4) -> list[int]:
    """Integers spaced evenly in log10 from ``lo`` to ``hi`` inclusive."""
    if lo < 1 or hi < lo:
        raise ParameterError("need 1 <= lo <= hi")
    k = max(2, int(round(np.log10(hi / lo) * per_decade)) + 1)
    return sorted({int(round(x)) for x in np.logspace(np.log10(lo), np.log10(hi), k)})


@dataclass
class SweepGrid:
    graphs: list[GraphSpec]
    algorithms: list[str]
    ells: list[int]
    reps: int = 1
    seed: int = 0
    lam: float = 1.0
    p: float = 1.0
    delta_max: int = 3
    threshold: float = 0.5
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ParameterError(f"unknown algorithm {a!r}; choose from {', '.join(ALGORITHMS)}")
        if any(e < 0 for e in self.ells) or self.reps < 1:
            raise ParameterError("ells must be non-negative and reps >= 1")
        CascadeParams(self.lam, self.p)
        for g in self.graphs:
            g.validate()

    @classmethod
    def from_dict(cls, d: dict) -> "SweepGrid":
        d = dict(d)
        graphs = [GraphSpec.from_dict(g) for g in d.pop("graphs")]
        ells = d.pop("ells")
        if isinstance(ells, dict):
            ells = log_grid(ells["lo"], ells["hi"], ells.get("per_decade", 4))
        return cls(graphs=graphs, ells=list(ells), **d)

    @classmethod
    def load(cls, path: str | Path) -> "SweepGrid":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def _cell_key(cell: dict) -> str:
    blob = json.dumps({"v": CACHE_VERSION, **cell}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _trace_seed(master: int, graph_index: int, rep: int) -> int:
    return int(_rng.generator(master, "sweep", graph_index, rep).integers(2 ** 62))


def run_algorithm(name: str, ts, *, seed: int, delta_max: int = 3, threshold: float = 0.5):
    if name == "first-edge":
        return first_edge(ts)
    if name == "first-edge+":
        return first_edge_plus(ts, FirstEdgePlusConfig.from_traces(ts, threshold), seed)
    if name == "tree":
        return reconstruct_tree(ts)
    if name == "bdd":
        return reconstruct_bdd(ts, ScoreConfig(lam=ts.params.lam, delta_max=delta_max))
    raise ParameterError(f"unknown algorithm {name!r}")


def _run_job(job):
    """All missing cells for one (graph, rep): simulate once, slice by ell."""
    spec_d, gi, rep, cells, grid_d = job
    spec = GraphSpec.from_dict(spec_d)
    g = generate(spec)
    seed = _trace_seed(grid_d["seed"], gi, rep)
    params = CascadeParams(grid_d["lam"], grid_d["p"])
    ell_max = max(c["ell"] for c in cells)
    full = simulate_many(g, params, ell_max, seed)
    truth = g
    rows = []
    for c in cells:
        ts = full.head(c["ell"])
        row = {"family": spec.family, "n": g.n, "graph_id": g.graph_id, "algorithm": c["algorithm"],
               "ell": c["ell"], "rep": rep, "seed": seed, "lambda": params.lam, "p": params.p}
        try:
            res = run_algorithm(c["algorithm"], ts, seed=seed, delta_max=grid_d["delta_max"],
                                threshold=grid_d["threshold"])
            rep_ = evaluate(res, truth)
            row.update(precision=rep_.precision, recall=rep_.recall, f1=rep_.f1,
                       tp=rep_.tp, fp=rep_.fp, fn=rep_.fn, status="ok")
        except TraceInferError as exc:
            row.update(precision="", recall="", f1="", tp="", fp="", fn="",
                       status=type(exc).__name__)
        rows.append((c["key"], row))
    return rows


def _cache_read(path: Path, key: str):
    try:
        with open(path) as fh:
            data = json.load(fh)
        if data.get("key") != key or set(data["row"]) != set(COLUMNS):
            raise ValueError("key or schema mismatch")
        return data["row"]
    except FileNotFoundError:
        return None
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        log.warning("corrupt cache entry %s (%s); re-running cell", path.name, exc)
        return None


def _cache_write(directory: Path, key: str, row: dict) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    with os.fdopen(fd, "w") as fh:
        json.dump({"key": key, "row": row}, fh, sort_keys=True)
    os.replace(tmp, directory / f"{key}.json")


def sweep(grid: SweepGrid, *, workers: int = 1, cache_dir: str | Path | None = None) -> list[dict]:
    """Rows in grid order: graph, then rep, then algorithm, then ell."""
    if cache_dir is None and os.environ.get(CACHE_ENV):
        cache_dir = os.environ[CACHE_ENV]
    cache = Path(cache_dir) if cache_dir else None
    grid_d = {"seed": grid.seed, "lam": grid.lam, "p": grid.p, "delta_max": grid.delta_max,
              "threshold": grid.threshold}
    order: list[str] = []
    rows: dict[str, dict] = {}
    jobs = []
    for gi, spec in enumerate(grid.graphs):
        spec_d = spec.to_dict()
        for rep in range(grid.reps):
            missing = []
            for algo in grid.algorithms:
                for ell in grid.ells:
                    cell = {"graph": spec_d, "graph_index": gi, "rep": rep, "algorithm": algo,
                            "ell": ell, **grid_d}
                    key = _cell_key(cell)
                    order.append(key)
                    hit = _cache_read(cache / f"{key}.json", key) if cache else None
                    if hit is not None:
                        rows[key] = hit
                    else:
                        missing.append({"algorithm": algo, "ell": ell, "key": key})
            if missing:
                jobs.append((spec_d, gi, rep, missing, grid_d))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_job, jobs))
    else:
        results = [_run_job(j) for j in jobs]
    for res in results:
        for key, row in res:
            rows[key] = row
            if cache:
                _cache_write(cache, key, row)
    return [rows[k] for k in order]


def write_csv(rows: list[dict], path_or_fh) -> None:
    def _write(fh):
        w = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})

    if hasattr(path_or_fh, "write"):
        _write(path_or_fh)
    else:
        with open(path_or_fh, "w", newline="") as fh:
            _write(fh)


def grid_to_dict(grid: SweepGrid) -> dict:
    d = asdict(grid)
    d["graphs"] = [g.to_dict() for g in grid.graphs]
    return d
