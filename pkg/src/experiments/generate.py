"""
The generate and mst experiments: sampled ensembles, their statistics and nested MSTs
"""

from typing import List

import numpy as np
from loguru import logger

from ..config import ExperimentConfig
from ..graphgen import expected_edge_count, giant, sample_ensemble
from ..metrics import degree_tail_exponent, graph_stats, hausdorff_nested, tree_diameter
from ..mst import algorithm1_attach, mst_of_giant
from ..utils.rng import STREAM_CHECKS, substream
from ..weights import WeightSequence, derived_stats
from .common import ExperimentResult, replica_seed, run_and_write, tagged, weight_sequences
from .runner import ReplicaJob, Row

GENERATE_TABLE = "generate"
GENERATE_COLUMNS = (
    "seed", "replica", "n", "tau", "lambda", "p", "vertices", "edges", "expected_edges", "components",
    "total_surplus", "max_surplus", "max_mass", "leaf_fraction", "max_degree", "mean_degree",
    "giant_vertices", "giant_mass", "tau_estimate",
)
MST_TABLE = "mst"
MST_COLUMNS = ("seed", "replica", "n", "tau", "giant_vertices", "total_weight", "height", "diameter",
               "max_degree", "leaf_fraction")
NESTED_TABLE = "mst_nested"
NESTED_COLUMNS = ("seed", "replica", "n", "tau", "lambda", "p", "sub_vertices", "sub_mass", "hausdorff",
                  "attach_checks", "attach_consistent")
# Vertices per (replica, lambda) grown by greedy attachment
ATTACH_SAMPLES = 8


def _stem(seq: WeightSequence, replica: int) -> str:
    return f"n{seq.n}_r{replica}"


def generate_replica(cfg: ExperimentConfig, n_index: int, seq: WeightSequence, replica: int) -> List[Row]:
    """Write the ensemble of one replica and summarize it, unpercolated and at each lambda"""
    seed = replica_seed(cfg, n_index)
    ens = sample_ensemble(seq, cfg.kernel, seed, replica, edge_cap=cfg.edge_cap)
    ens.to_file(cfg.out_dir / f"ensemble_{_stem(seq, replica)}.txt")
    expected = expected_edge_count(seq, cfg.kernel)

    levels = [(None, 1.0, ens.graph)]
    for lam in cfg.lambdas:
        p = derived_stats(seq, lam)[1].p_lambda
        levels.append((lam, p, ens.percolate(p)))

    rows = []
    for lam, p, g in levels:
        report = graph_stats(g, seq, cfg.seed, lam, replica)
        component = giant(g, seq)
        try:
            tau_estimate, _ = degree_tail_exponent(g)
        except ValueError as e:
            logger.debug(f"No degree tail estimate at lambda={lam}: {e}")
            tau_estimate = float("nan")
        rows.append(tagged(GENERATE_TABLE, {
            **report.row(), "p": p, "expected_edges": expected if lam is None else float("nan"),
            "giant_vertices": component.count, "giant_mass": component.mass, "tau_estimate": tau_estimate,
        }))
    return rows


async def run_generate(cfg: ExperimentConfig) -> ExperimentResult:
    """Sample ensembles, write them with their weight sequences and tabulate graph statistics"""
    result = ExperimentResult(name=cfg.name)
    sequences = weight_sequences(cfg)
    for _, seq in sequences:
        path = cfg.out_dir / f"weights_n{seq.n}.txt"
        seq.to_file(path)
        result.files.append(path)

    jobs = [
        ReplicaJob(key=(k, r), label=f"n={seq.n} replica={r}", func=generate_replica, args=(cfg, k, seq, r))
        for k, seq in sequences for r in range(cfg.replicas)
    ]
    tables = await run_and_write(cfg, jobs, {GENERATE_TABLE: GENERATE_COLUMNS}, result)
    result.summary = {"rows": len(tables.get(GENERATE_TABLE, []))}
    return result


def mst_replica(cfg: ExperimentConfig, n_index: int, seq: WeightSequence, replica: int) -> List[Row]:
    """
    MST of the giant with its critical-window restrictions

    For each lambda a few MST vertices outside the restriction are grown by
    greedy attachment; every edge it adds must be an MST edge.
    """
    seed = replica_seed(cfg, n_index)
    ens = sample_ensemble(seq, cfg.kernel, seed, replica, edge_cap=cfg.edge_cap)
    nested = mst_of_giant(ens, seq, cfg.lambdas)
    tree = nested.tree
    tree.to_file(cfg.out_dir / f"mst_{_stem(seq, replica)}.txt")

    degrees = np.array([len(tree.adjacency[v]) for v in tree.vertices])
    rows = [tagged(MST_TABLE, {
        "seed": cfg.seed, "replica": replica, "n": seq.n, "tau": seq.tau, "giant_vertices": tree.size,
        "total_weight": tree.total_weight(), "height": tree.height(), "diameter": tree_diameter(tree),
        "max_degree": int(degrees.max()) if tree.size > 1 else 0,
        "leaf_fraction": float(np.mean(degrees == 1)) if tree.size > 1 else 0.0,
    })]

    tree_edges = tree.edge_set()
    rng = substream(seed, replica, STREAM_CHECKS)
    for k, lam in enumerate(nested.lambdas):
        sub = nested.vertex_sets[k]
        outside = np.setdiff1d(np.asarray(tree.vertices, dtype=np.int64), sub)
        picks = rng.choice(outside, size=min(ATTACH_SAMPLES, outside.size), replace=False) if outside.size else []
        consistent = True
        for v in picks:
            attach = algorithm1_attach(ens, seq, lam, int(v))
            if not attach.attached or not set(attach.edges) <= tree_edges:
                consistent = False
                logger.warning(f"Greedy attachment of vertex {int(v)} at lambda={lam} left the MST: "
                               f"{attach.outcome}, {len(attach.edges)} edge(s)")
        rows.append(tagged(NESTED_TABLE, {
            "seed": cfg.seed, "replica": replica, "n": seq.n, "tau": seq.tau, "lambda": lam,
            "p": nested.p_values[k], "sub_vertices": int(sub.size),
            "sub_mass": float(seq.weights_of(sub).sum()), "hausdorff": hausdorff_nested(tree, sub.tolist()),
            "attach_checks": len(picks), "attach_consistent": consistent,
        }))
    return rows


async def run_mst(cfg: ExperimentConfig) -> ExperimentResult:
    """Write the MST of the giant per replica and tabulate it with its nested restrictions"""
    result = ExperimentResult(name=cfg.name)
    jobs = [
        ReplicaJob(key=(k, r), label=f"n={seq.n} replica={r}", func=mst_replica, args=(cfg, k, seq, r))
        for k, seq in weight_sequences(cfg) for r in range(cfg.replicas)
    ]
    tables = await run_and_write(cfg, jobs, {MST_TABLE: MST_COLUMNS, NESTED_TABLE: NESTED_COLUMNS}, result)
    nested_rows = tables.get(NESTED_TABLE, [])
    result.summary = {"attach_consistent": all(row["attach_consistent"] for row in nested_rows)}
    if not result.summary["attach_consistent"]:
        result.failures.append("greedy attachment added an edge outside the MST")
    return result
