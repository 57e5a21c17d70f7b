"""
Box-counting dimension of the MST of the giant
"""

from typing import List

import numpy as np
from loguru import logger

from ..config import ExperimentConfig
from ..graphgen import sample_ensemble
from ..metrics import ball_scale, dim_estimate
from ..mst import TreeStructure, mst_of_giant
from ..utils.stats import loglog_fit
from ..weights import WeightSequence
from .common import TABLE_KEY, ExperimentResult, replica_seed, run_and_write, tagged, weight_sequences
from .output import plot_loglog, write_csv
from .runner import ReplicaJob, Row

DIMENSION_TABLE = "dimension"
DIMENSION_COLUMNS = ("seed", "replica", "n", "tau", "model", "giant_vertices", "slope", "intercept", "r_squared",
                     "window_low", "window_high", "degenerate", "target")
COUNTS_TABLE = "dimension_counts"
COUNTS_COLUMNS = ("seed", "replica", "n", "tau", "model", "radius", "count")
PATH_SLOPE_TOLERANCE = 0.05


def path_tree(m: int) -> TreeStructure:
    """The path 1 - 2 - ... - m rooted at 1"""
    return TreeStructure.from_edges(range(1, m + 1), [(i, i + 1) for i in range(1, m)], root=1)


def _report_rows(cfg: ExperimentConfig, replica: int, n: int, model: str, tree: TreeStructure,
                 target: float) -> List[Row]:
    report = dim_estimate(tree, cfg.scale_grid, cfg.trim)
    base = {"seed": cfg.seed, "replica": replica, "n": n, "tau": cfg.tau, "model": model}
    rows = [tagged(DIMENSION_TABLE, {
        **base, "giant_vertices": tree.size, "slope": report.slope, "intercept": report.intercept,
        "r_squared": report.r_squared, "window_low": report.window[0], "window_high": report.window[1],
        "degenerate": report.degenerate, "target": target,
    })]
    rows.extend(tagged(COUNTS_TABLE, {**base, "radius": r, "count": c}) for r, c in zip(report.radii, report.counts))
    return rows


def dimension_replica(cfg: ExperimentConfig, n_index: int, seq: WeightSequence, replica: int) -> List[Row]:
    """Covering counts of the giant's MST over the scale grid and the fitted slope"""
    seed = replica_seed(cfg, n_index)
    ens = sample_ensemble(seq, cfg.kernel, seed, replica, edge_cap=cfg.edge_cap)
    tree = mst_of_giant(ens, seq, ()).tree
    target = (seq.tau - 1.0) / (seq.tau - 3.0)
    return _report_rows(cfg, replica, seq.n, "mst", tree, target)


async def run_dimension(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Fit log N(r) against log(1 / (2r + 1)) for the MST of the giant

    The MST slope is a labelled diagnostic only; a path of comparable size is
    fitted alongside as the calibration model, whose dimension is 1; a path
    slope further than PATH_SLOPE_TOLERANCE from 1 fails the run.
    """
    result = ExperimentResult(name=cfg.name)
    sequences = weight_sequences(cfg)
    jobs = [
        ReplicaJob(key=(k, r), label=f"n={seq.n} replica={r}", func=dimension_replica, args=(cfg, k, seq, r))
        for k, seq in sequences for r in range(cfg.replicas)
    ]
    headers = {DIMENSION_TABLE: DIMENSION_COLUMNS, COUNTS_TABLE: COUNTS_COLUMNS}
    replica_tables = await run_and_write(cfg, jobs, {}, result)

    n_path = sequences[0][1].n
    path_rows = _report_rows(cfg, 0, n_path, "path", path_tree(n_path), 1.0)
    tables = {table: replica_tables.get(table, []) for table in headers}
    for row in path_rows:
        tables[row[TABLE_KEY]].append(row)
    for table, header in headers.items():
        result.files.append(await write_csv(cfg.out_dir / f"{table}.csv", header, tables[table]))

    mst_rows = [row for row in tables[DIMENSION_TABLE] if row["model"] == "mst"]
    slopes = [row["slope"] for row in mst_rows if not row["degenerate"]]
    path_slope = next(row["slope"] for row in path_rows if row[TABLE_KEY] == DIMENSION_TABLE)
    result.summary = {
        "mean_slope": float(np.mean(slopes)) if slopes else float("nan"),
        "target": (cfg.tau - 1.0) / (cfg.tau - 3.0),
        "path_slope": path_slope,
        "path_within_tolerance": bool(abs(path_slope - 1.0) <= PATH_SLOPE_TOLERANCE),
        "degenerate": len(mst_rows) - len(slopes),
    }
    if not result.summary["path_within_tolerance"]:
        result.failures.append(f"path calibration slope {path_slope:.4f} is not within {PATH_SLOPE_TOLERANCE} of 1 "
                               f"(n={n_path}, window {cfg.scale_grid})")
    logger.info(f"Covering slope {result.summary['mean_slope']:.4f} (diagnostic; "
                f"target {result.summary['target']:.4f}), path calibration slope {path_slope:.4f}")

    if cfg.plot and mst_rows:
        counts = [row for row in tables[COUNTS_TABLE] if row["model"] == "mst"]
        radii = sorted({row["radius"] for row in counts})
        mean_counts = [float(np.mean([row["count"] for row in counts if row["radius"] == r])) for r in radii]
        inverse = [1.0 / ball_scale(r) for r in radii]
        try:
            fit = loglog_fit(inverse, mean_counts)
        except ValueError:
            fit = None
        result.files.append(plot_loglog(cfg.out_dir / f"{DIMENSION_TABLE}.svg", inverse, mean_counts, fit,
                                        title=f"Covering numbers of the MST, tau={cfg.tau}", xlabel="1/(2r+1)",
                                        ylabel="N(r)", reference_slope=result.summary["target"]))
    return result
