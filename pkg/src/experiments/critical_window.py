"""
Critical-window experiment: nested MST distances, component masses and surpluses across lambda
"""

import math
from typing import Any, Dict, List, Sequence

import numpy as np
from loguru import logger

from ..config import ExperimentConfig
from ..exploration import root_s
from ..graphgen import components, giant, sample_ensemble, sample_outside_graph, sample_poisson_graph
from ..metrics import graph_diameter, hausdorff_nested
from ..mst import mst_of_giant
from ..utils.rng import derive_seed
from ..weights import WeightSequence, derived_stats, p_lambda
from .common import ExperimentResult, replica_seed, run_and_write, tagged, weight_sequences
from .output import write_csv
from .runner import ReplicaJob, Row

WINDOW_TABLE = "critical_window"
WINDOW_COLUMNS = (
    "seed", "replica", "n", "tau", "lambda", "p", "giant_vertices", "sub_vertices", "hausdorff",
    "hausdorff_scaled", "sub_mass", "s_lambda", "mass_ratio", "poisson_vertices", "surplus",
    "surplus_scaled", "mass_x", "outside_vertices", "outside_max_surplus", "outside_diameter",
    "outside_diameter_exact", "outside_diameter_scaled",
)
SUMMARY_TABLE = "critical_window_summary"
SUMMARY_COLUMNS = (
    "seed", "n", "tau", "lambda", "replicas", "median_hausdorff_scaled", "median_mass_ratio",
    "median_surplus_scaled", "surplus2_frequency", "median_outside_diameter_scaled",
)
TAIL_TABLE = "critical_window_mass_tail"
TAIL_COLUMNS = ("seed", "n", "tau", "lambda", "multiplier", "threshold", "frequency")
SURPLUS_SPREAD_LIMIT = 3.0


def window_replica(cfg: ExperimentConfig, n_index: int, seq: WeightSequence, replica: int,
                   roots: Sequence[float]) -> List[Row]:
    """All critical-window statistics of one replica, one row per lambda"""
    seed = replica_seed(cfg, n_index)
    derived, _, consts = derived_stats(seq)
    n = seq.n
    n_eta = n ** consts.eta
    mass_unit = math.sqrt(derived.sigma2) * n ** consts.rho

    ens = sample_ensemble(seq, cfg.kernel, seed, replica, edge_cap=cfg.edge_cap)
    nested = mst_of_giant(ens, seq, cfg.lambdas)

    rows = []
    for k, lam in enumerate(cfg.lambdas):
        sub = nested.vertex_sets[k]
        distance = hausdorff_nested(nested.tree, sub.tolist())
        sub_mass = float(seq.weights_of(sub).sum())
        s = roots[k]

        seed_k = derive_seed(seed, replica, k)
        poisson = sample_poisson_graph(seq, p_lambda(seq, lam), seed_k, replica)
        component = giant(poisson, seq)
        mass_x = component.mass / mass_unit
        surplus_unit = lam ** (1.0 / consts.eta) if lam > 0 else float("nan")

        outside = sample_outside_graph(seq, lam, cfg.delta1, component.vertices, seed_k, replica)
        if outside.num_vertices:
            outside_surplus = components(outside, seq).surplus()
            max_surplus = int(outside_surplus.max()) if outside_surplus.size else 0
        else:
            max_surplus = 0
        diameter = graph_diameter(outside)
        diameter_unit = n_eta / lam ** (1.0 - cfg.Delta) if lam > 0 else float("nan")

        rows.append(tagged(WINDOW_TABLE, {
            "seed": cfg.seed, "replica": replica, "n": n, "tau": seq.tau, "lambda": lam,
            "p": nested.p_values[k], "giant_vertices": nested.tree.size, "sub_vertices": int(sub.size),
            "hausdorff": distance, "hausdorff_scaled": distance / n_eta, "sub_mass": sub_mass,
            "s_lambda": s, "mass_ratio": sub_mass / (s * mass_unit) if s > 0 else float("nan"),
            "poisson_vertices": component.count, "surplus": component.surplus,
            "surplus_scaled": component.surplus / surplus_unit, "mass_x": mass_x,
            "outside_vertices": outside.num_vertices, "outside_max_surplus": max_surplus,
            "outside_diameter": diameter.value, "outside_diameter_exact": diameter.exact,
            "outside_diameter_scaled": diameter.value / diameter_unit,
        }))
    logger.debug(f"Critical-window replica {replica} (n={n}): hausdorff "
                 f"{[row['hausdorff'] for row in rows]}")
    return rows


def _nonincreasing(values: Sequence[float]) -> bool:
    return all(b <= a for a, b in zip(values, values[1:]))


def summarize_window(cfg: ExperimentConfig, rows: List[Row]) -> Dict[str, List[Row]]:
    """Per-lambda medians and frequencies, and the mass-tail exceedance table"""
    summary_rows: List[Row] = []
    tail_rows: List[Row] = []
    for n in sorted({row["n"] for row in rows}):
        for lam in cfg.lambdas:
            group = [row for row in rows if row["n"] == n and row["lambda"] == lam]
            if not group:
                continue
            column = lambda key: np.array([row[key] for row in group], dtype=float)  # noqa: E731
            summary_rows.append({
                "seed": cfg.seed, "n": n, "tau": cfg.tau, "lambda": lam, "replicas": len(group),
                "median_hausdorff_scaled": float(np.median(column("hausdorff_scaled"))),
                "median_mass_ratio": float(np.nanmedian(column("mass_ratio"))),
                "median_surplus_scaled": float(np.nanmedian(column("surplus_scaled"))),
                "surplus2_frequency": float(np.mean(column("outside_max_surplus") >= 2)),
                "median_outside_diameter_scaled": float(np.nanmedian(column("outside_diameter_scaled"))),
            })
            masses = column("mass_x")
            for multiplier in cfg.mass_multipliers:
                threshold = multiplier * lam ** (1.0 / (cfg.tau - 3.0))
                tail_rows.append({
                    "seed": cfg.seed, "n": n, "tau": cfg.tau, "lambda": lam, "multiplier": multiplier,
                    "threshold": threshold, "frequency": float(np.mean(masses >= threshold)),
                })
    return {SUMMARY_TABLE: summary_rows, TAIL_TABLE: tail_rows}


def _spread(values: Sequence[float]) -> float:
    """max / min of the positive finite values, nan when there are none"""
    usable = [v for v in values if math.isfinite(v) and v > 0]
    return max(usable) / min(usable) if usable else float("nan")


def window_flags(summary_rows: List[Row]) -> Dict[str, Any]:
    """
    Monotonicity and boundedness of the per-lambda summaries, judged within each n

    ``surplus_spread`` is the largest per-n spread of the median scaled surplus;
    it is bounded when it stays within SURPLUS_SPREAD_LIMIT.
    """
    by_n: Dict[int, List[Row]] = {}
    for row in summary_rows:
        by_n.setdefault(row["n"], []).append(row)
    spreads = {n: _spread([r["median_surplus_scaled"] for r in group]) for n, group in by_n.items()}
    finite = [s for s in spreads.values() if math.isfinite(s)]
    spread = max(finite) if finite else float("nan")
    return {
        "hausdorff_nonincreasing": all(_nonincreasing([r["median_hausdorff_scaled"] for r in group])
                                       for group in by_n.values()),
        "surplus2_nonincreasing": all(_nonincreasing([r["surplus2_frequency"] for r in group])
                                      for group in by_n.values()),
        "surplus_spread": spread,
        "surplus_bounded": bool(finite) and spread <= SURPLUS_SPREAD_LIMIT,
    }


async def run_critical_window(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Per (replica, lambda): the nested Hausdorff distance, normalized masses and surpluses

    The experiment checks that the median distance between the MST and its
    critical-window restriction decays along the lambda list.
    """
    result = ExperimentResult(name=cfg.name)
    sequences = weight_sequences(cfg)
    jobs = []
    for k, seq in sequences:
        roots = tuple(root_s(seq, lam) if lam > 0 else 0.0 for lam in cfg.lambdas)
        jobs.extend(
            ReplicaJob(key=(k, r), label=f"n={seq.n} replica={r}", func=window_replica,
                       args=(cfg, k, seq, r, roots))
            for r in range(cfg.replicas)
        )

    tables = await run_and_write(cfg, jobs, {WINDOW_TABLE: WINDOW_COLUMNS}, result)
    summaries = summarize_window(cfg, tables.get(WINDOW_TABLE, []))
    result.files.append(await write_csv(cfg.out_dir / f"{SUMMARY_TABLE}.csv", SUMMARY_COLUMNS,
                                        summaries[SUMMARY_TABLE]))
    result.files.append(await write_csv(cfg.out_dir / f"{TAIL_TABLE}.csv", TAIL_COLUMNS, summaries[TAIL_TABLE]))

    summary_rows = summaries[SUMMARY_TABLE]
    medians = [row["median_hausdorff_scaled"] for row in summary_rows]
    result.summary = window_flags(summary_rows)
    if result.summary["hausdorff_nonincreasing"]:
        logger.success(f"Median nested Hausdorff distances nonincreasing in lambda: {medians}")
    else:
        logger.warning(f"Median nested Hausdorff distances not monotone in lambda: {medians}")
    if not result.summary["surplus_bounded"]:
        logger.warning(f"Median scaled surplus spread {result.summary['surplus_spread']:.3f} exceeds "
                       f"{SURPLUS_SPREAD_LIMIT} within one n")
    return result
