"""
Typical-distance scaling of the MST of the giant component
"""

from typing import List

import numpy as np
from loguru import logger

from ..config import ExperimentConfig
from ..graphgen import sample_ensemble
from ..metrics import tree_diameter, typical_distance
from ..mst import mst_of_giant
from ..utils.rng import STREAM_PAIRS, substream
from ..utils.stats import loglog_fit
from ..weights import WeightSequence
from .common import ExperimentResult, replica_seed, run_and_write, tagged, weight_sequences
from .output import plot_loglog, write_csv
from .runner import ReplicaJob, Row

SCALING_TABLE = "scaling"
SCALING_COLUMNS = ("seed", "replica", "n", "tau", "edges", "giant_vertices", "mean_distance", "diameter")
SUMMARY_COLUMNS = ("seed", "tau", "points", "slope", "ci_low", "ci_high", "r_squared", "eta", "tolerance",
                   "within_tolerance")
# Finite-size slack on the recovered exponent
SLOPE_TOLERANCE = 0.08


def scaling_replica(cfg: ExperimentConfig, n_index: int, seq: WeightSequence, replica: int) -> List[Row]:
    """Mean typical distance and diameter of the giant's MST for one (n, replica)"""
    seed = replica_seed(cfg, n_index)
    ens = sample_ensemble(seq, cfg.kernel, seed, replica, edge_cap=cfg.edge_cap)
    tree = mst_of_giant(ens, seq, ()).tree
    if tree.size >= 2:
        distances = typical_distance(tree, cfg.pairs, substream(seed, replica, STREAM_PAIRS))
        mean_distance = float(distances.mean())
        diameter = tree_diameter(tree)
    else:
        mean_distance, diameter = float("nan"), 0
    return [tagged(SCALING_TABLE, {
        "seed": cfg.seed, "replica": replica, "n": seq.n, "tau": seq.tau, "edges": ens.m,
        "giant_vertices": tree.size, "mean_distance": mean_distance, "diameter": diameter,
    })]


async def run_scaling(cfg: ExperimentConfig) -> ExperimentResult:
    """Regress log(mean typical MST distance) on log n across the configured sizes"""
    result = ExperimentResult(name=cfg.name)
    sequences = weight_sequences(cfg)
    jobs = [
        ReplicaJob(key=(k, r), label=f"n={seq.n} replica={r}", func=scaling_replica, args=(cfg, k, seq, r))
        for k, seq in sequences for r in range(cfg.replicas)
    ]
    tables = await run_and_write(cfg, jobs, {SCALING_TABLE: SCALING_COLUMNS}, result)
    rows = tables.get(SCALING_TABLE, [])

    sizes = sorted({row["n"] for row in rows})
    means = [np.nanmean([row["mean_distance"] for row in rows if row["n"] == n]) for n in sizes]
    eta = sequences[0][1].constants.eta
    summary = {"seed": cfg.seed, "tau": cfg.tau, "points": len(sizes), "eta": eta, "tolerance": SLOPE_TOLERANCE}
    try:
        fit = loglog_fit(sizes, means)
    except ValueError as e:
        logger.warning(f"Scaling fit unavailable: {e}")
        fit = None
        summary.update({"slope": float("nan"), "ci_low": float("nan"), "ci_high": float("nan"),
                        "r_squared": float("nan"), "within_tolerance": False})
    else:
        summary.update({"slope": fit.slope, "ci_low": fit.ci_low, "ci_high": fit.ci_high,
                        "r_squared": fit.r_squared, "within_tolerance": abs(fit.slope - eta) <= SLOPE_TOLERANCE})
        logger.success(f"Distance exponent {fit.slope:.4f} (CI {fit.ci_low:.4f}..{fit.ci_high:.4f}), "
                       f"target eta = {eta:.4f}")

    result.summary = summary
    result.files.append(await write_csv(cfg.out_dir / f"{SCALING_TABLE}_summary.csv", SUMMARY_COLUMNS, [summary]))
    if cfg.plot and fit is not None:
        result.files.append(plot_loglog(cfg.out_dir / f"{SCALING_TABLE}.svg", sizes, means, fit,
                                        title=f"Typical MST distance, tau={cfg.tau}", xlabel="n",
                                        ylabel="mean distance", reference_slope=eta))
    return result
