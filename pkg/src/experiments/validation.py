"""
Validation suite: oracle checks of every stochastic component against exact or brute-force laws

The ``full`` profile runs each Monte-Carlo check at its published sample size
against a fixed TV threshold. The ``quick`` profile runs ``cfg.trials``
samples per check and widens each threshold to the Monte-Carlo error at that
size; it is a smoke run, not an acceptance run.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np
from loguru import logger
from scipy.stats import chisquare
from tqdm import tqdm

from ..branching import AliasTable, SizeBiasedOffspring, poi_vn_tail_estimate
from ..coalescent import mc_graph_equivalence
from ..config import PROFILE_FULL, PROFILE_QUICK, ExperimentConfig
from ..exploration import hitting_mass_check, root_scaling
from ..graphgen import SparseGraph
from ..metrics import covering_number, hausdorff_nested, tree_diameter, uniform_minima_check
from ..mst import TreeStructure, cbd_law_distance, kruskal, spanning_trees, verify_minimax
from ..tilted import (
    ProbabilityVector,
    construction_law,
    exact_connected_law,
    exact_ptree_law,
    graph_key,
    rejection_connected,
    rooted_key,
    sample_connected,
    sample_ptree,
    two_stage_sample,
)
from ..utils.rng import STREAM_CHECKS, derive_seed, substream
from ..utils.stats import empirical_law, tv_distance
from ..weights import WeightFileError, WeightSequence, build_power_law
from .common import ExperimentResult
from .output import write_csv

VALIDATION_TABLE = "validation"
VALIDATION_COLUMNS = ("name", "passed", "message", "seed")

EXACT_TOLERANCE = 1e-9
HITTING_TOLERANCE = 1e-9
HITTING_TRIALS = 1000
CHISQUARE_LEVEL = 1e-4
MINIMA_INSTANCES = 6

# Sample sizes of the full profile
FULL_TRIALS = {
    "cbd-monte-carlo": 100_000,
    "coalescent-equivalence": 1_000_000,
    "alias-table": 100_000,
    "ptree-law": 100_000,
    "tilted-sampler": 100_000,
    "two-stage": 100_000,
    "uniform-minima": 100_000,
}
TV_THRESHOLDS = {
    "cbd-monte-carlo": 0.02,
    "coalescent-equivalence": 0.01,
    "ptree-law": 0.01,
    "tilted-sampler": 0.03,
    "two-stage": 0.03,
}

# (graphs, max vertices, max edges beyond a spanning tree) per profile
MINIMAX_GRAPHS = {PROFILE_FULL: (1000, 12, 4), PROFILE_QUICK: (50, 7, 4)}
# (trees, max vertices) per profile
COVERING_TREES = {PROFILE_FULL: (30, 20), PROFILE_QUICK: (30, 10)}
TREE_METRIC_TREES = {PROFILE_FULL: (100, 50), PROFILE_QUICK: (30, 30)}

# The diamond: 4 vertices, 5 edges, 8 spanning trees
CBD_GRAPH_EDGES = ((1, 2), (1, 3), (1, 4), (2, 3), (3, 4))
COALESCENT_WEIGHTS = (1.0, 0.5, 0.25)
COALESCENT_TIME = 0.7
PTREE_MASSES = (0.5, 0.3, 0.2)
TILTED_A = 1.5
TWO_STAGE_WEIGHTS = (1.0, 0.8, 0.6, 0.4)
TWO_STAGE_TIME = 0.5

ROOT_TAU = 3.5
ROOT_N = 1_000_000
ROOT_LAMBDAS = (8.0, 16.0, 32.0, 64.0)
ROOT_RESIDUAL = 1e-10
ROOT_SPREAD = 3.0
TAIL_TAU = 3.5
TAIL_N = 100_000
TAIL_DRAWS = 1_000_000
TAIL_GRID = (3, 4, 5, 6)
TAIL_SLOPE_TOLERANCE = 0.15


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one oracle check and the seed that reproduces it"""
    name: str
    passed: bool
    message: str
    seed: int

    def row(self) -> Dict:
        return {"name": self.name, "passed": self.passed, "message": self.message, "seed": self.seed}


def mc_tolerance(support: int, trials: int, floor: float = 0.02) -> float:
    """
    TV tolerance for an empirical law with ``support`` atoms against its exact law

    The expected TV is at most 0.4 sqrt(support / trials); the tolerance
    allows about four times that, and never less than ``floor``.
    """
    return max(floor, 1.5 * math.sqrt(support / trials))


def random_tree(m: int, rng: np.random.Generator) -> TreeStructure:
    """Random recursive tree on 1..m rooted at 1"""
    edges = [(int(rng.integers(1, v)), v) for v in range(2, m + 1)]
    return TreeStructure.from_edges(range(1, m + 1), edges, root=1)


def random_connected_graph(rng: np.random.Generator, max_vertices: int = 12, max_extra: int = 4) -> SparseGraph:
    """Random tree plus up to ``max_extra`` random extra edges, with distinct uniform edge weights"""
    n = int(rng.integers(3, max_vertices + 1))
    edges = set(random_tree(n, rng).edges())
    spare = [pair for pair in itertools.combinations(range(1, n + 1), 2) if pair not in edges]
    extra = int(rng.integers(0, min(len(spare), max_extra) + 1))
    for index in rng.choice(len(spare), size=extra, replace=False):
        edges.add(spare[int(index)])
    weights = rng.random(len(edges))
    while np.unique(weights).size != weights.size:
        weights = rng.random(len(edges))
    return SparseGraph.from_edge_list(n, sorted(edges), weights)


def brute_force_covering(t: TreeStructure, radius: int) -> int:
    """Smallest number of radius balls covering ``t``, over all center subsets"""
    vertices = list(t.vertices)
    balls = [sum(1 << k for k, v in enumerate(vertices) if t.distance(c, v) <= radius) for c in vertices]
    full = (1 << len(vertices)) - 1
    for k in range(1, len(vertices) + 1):
        for centers in itertools.combinations(balls, k):
            covered = 0
            for ball in centers:
                covered |= ball
            if covered == full:
                return k
    return len(vertices)


def static_graph_law(weights, t: float) -> Dict[Tuple, float]:
    """Exact law of G(([n], w), t) over all labeled graphs"""
    w = np.asarray(weights, dtype=np.float64)
    pairs = list(itertools.combinations(range(1, w.size + 1), 2))
    probs = [-math.expm1(-t * w[i - 1] * w[j - 1]) for i, j in pairs]
    law = {}
    for mask in itertools.product((False, True), repeat=len(pairs)):
        key = tuple(pair for pair, present in zip(pairs, mask) if present)
        law[key] = math.prod(p if present else 1.0 - p for p, present in zip(probs, mask))
    return law


class ValidationSuite:
    """Runs the oracle checks; each check returns ``(passed, message)``"""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.profile = cfg.profile
        self.checks: List[Tuple[str, Callable[[np.random.Generator], Tuple[bool, str]]]] = [
            ("minimax-uniqueness", self.check_minimax),
            ("cbd-exact", self.check_cbd_exact),
            ("cbd-monte-carlo", self.check_cbd_monte_carlo),
            ("coalescent-equivalence", self.check_coalescent),
            ("hitting-time", self.check_hitting),
            ("offspring-mean", self.check_offspring_mean),
            ("offspring-tail", self.check_offspring_tail),
            ("root-scaling", self.check_root_scaling),
            ("alias-table", self.check_alias),
            ("ptree-law", self.check_ptree),
            ("construction-law", self.check_construction_law),
            ("tilted-sampler", self.check_tilted_sampler),
            ("two-stage", self.check_two_stage),
            ("covering-brute-force", self.check_covering),
            ("tree-metrics-brute-force", self.check_tree_metrics),
            ("uniform-minima", self.check_uniform_minima),
        ]
        if cfg.weights_file is not None:
            self.checks.append(("weights-file", self.check_weights_file))
        if self.profile != PROFILE_FULL:
            logger.warning(f"Validation profile {self.profile!r}: {cfg.trials} samples per Monte-Carlo check "
                           f"and widened thresholds")

    def trials(self, name: str) -> int:
        """Sample size of a Monte-Carlo check under the active profile"""
        return FULL_TRIALS[name] if self.profile == PROFILE_FULL else self.cfg.trials

    def tolerance(self, name: str, support: int, samples: int = 1) -> float:
        """
        TV threshold of a Monte-Carlo check

        ``samples`` is 2 when two empirical laws are compared with each other.
        """
        threshold = TV_THRESHOLDS[name]
        if self.profile == PROFILE_FULL:
            return threshold
        return mc_tolerance(support, self.trials(name), floor=threshold) * math.sqrt(samples)

    def check_minimax(self, rng: np.random.Generator) -> Tuple[bool, str]:
        graphs, max_vertices, max_extra = MINIMAX_GRAPHS[self.profile]
        for index in range(graphs):
            g = random_connected_graph(rng, max_vertices, max_extra)
            (tree,) = kruskal(g)
            if not verify_minimax(g, None, tree):
                return False, f"graph {index}: Kruskal tree fails the minimax property"
            weights = g.edge_weight_map()
            passing = [
                edges for edges in spanning_trees(g)
                if verify_minimax(g, None, TreeStructure.from_edges(
                    g.vertex_set().tolist(), edges, weights={e: weights[e] for e in edges}))
            ]
            if passing != [tree.edge_set()]:
                return False, f"graph {index}: {len(passing)} spanning trees pass the minimax property"
        return True, f"{graphs} graphs with n <= {max_vertices}: Kruskal tree is the unique minimax tree"

    def check_cbd_exact(self, rng: np.random.Generator) -> Tuple[bool, str]:
        g = SparseGraph.from_edge_list(4, CBD_GRAPH_EDGES)
        result = cbd_law_distance(g, 0, rng, mode="exact")
        return result.tv < EXACT_TOLERANCE, f"exact TV {result.tv:.3g} over {result.support} trees"

    def check_cbd_monte_carlo(self, rng: np.random.Generator) -> Tuple[bool, str]:
        name, trials = "cbd-monte-carlo", self.trials("cbd-monte-carlo")
        g = SparseGraph.from_edge_list(4, CBD_GRAPH_EDGES)
        result = cbd_law_distance(g, trials, rng, mode="monte-carlo")
        tolerance = self.tolerance(name, result.support)
        return result.tv < tolerance, f"TV {result.tv:.4f} < {tolerance:.4f} over {trials} samples"

    def check_coalescent(self, rng: np.random.Generator) -> Tuple[bool, str]:
        name, trials = "coalescent-equivalence", self.trials("coalescent-equivalence")
        result = mc_graph_equivalence(COALESCENT_WEIGHTS, COALESCENT_TIME, trials, rng)
        tolerance = self.tolerance(name, len(result.graph_law))
        return result.tv < tolerance, f"TV {result.tv:.4f} < {tolerance:.4f} over {trials} runs"

    def _sequence(self) -> WeightSequence:
        n = self.cfg.n_values[0] if self.cfg.n_values else 100
        return build_power_law(n, self.cfg.c, self.cfg.tau)

    def check_hitting(self, rng: np.random.Generator) -> Tuple[bool, str]:
        seq = self._sequence()
        trials = HITTING_TRIALS if self.profile == PROFILE_FULL else min(self.cfg.trials, HITTING_TRIALS)
        result = hitting_mass_check(seq, 1.0, trials, rng)
        return (result.max_discrepancy < HITTING_TOLERANCE,
                f"max |hitting time - mass| {result.max_discrepancy:.3g} over {result.trials} trials (n={seq.n})")

    def check_offspring_mean(self, rng: np.random.Generator) -> Tuple[bool, str]:
        mean = SizeBiasedOffspring.from_weights(self._sequence()).mean()
        return abs(mean - 1.0) < 1e-12, f"E[V_n] - 1 = {mean - 1.0:.3g}"

    def check_offspring_tail(self, rng: np.random.Generator) -> Tuple[bool, str]:
        exponent = TAIL_TAU - 2.0
        off = SizeBiasedOffspring.from_weights(build_power_law(TAIL_N, self.cfg.c, TAIL_TAU))
        est = poi_vn_tail_estimate(off, TAIL_GRID, TAIL_DRAWS, rng, exponent=exponent)
        if est.fit is None:
            return False, f"no tail fit over u in {TAIL_GRID}"
        gap = abs(est.fit.slope + exponent)
        return (gap <= TAIL_SLOPE_TOLERANCE,
                f"tail slope {est.fit.slope:.3f} vs {-exponent:.3f} (n={TAIL_N}, {TAIL_DRAWS} draws)")

    def check_root_scaling(self, rng: np.random.Generator) -> Tuple[bool, str]:
        seq = build_power_law(ROOT_N, self.cfg.c, ROOT_TAU)
        scaling = root_scaling(seq, ROOT_LAMBDAS)
        exponent = 1.0 / (ROOT_TAU - 3.0)
        increasing = all(a < b for a, b in zip(scaling.roots, scaling.roots[1:]))
        spread = scaling.reduced_spread(exponent)
        ok = scaling.max_residual <= ROOT_RESIDUAL and increasing and spread <= ROOT_SPREAD
        return ok, (f"max |Phi(s)| / (lambda s) {scaling.max_residual:.3g}; slope {scaling.fit.slope:.3f}, "
                    f"reduced slope {scaling.reduced_fit.slope:.3f}, reduced spread {spread:.3f} (n={ROOT_N})")

    def check_alias(self, rng: np.random.Generator) -> Tuple[bool, str]:
        trials = self.trials("alias-table")
        p = rng.dirichlet(np.full(10, 2.0))
        table = AliasTable(p)
        gap = float(np.max(np.abs(table.law() - p)))
        if gap > 1e-12:
            return False, f"alias law differs from its input by {gap:.3g}"
        counts = np.bincount(table.sample(trials, rng), minlength=p.size)
        pvalue = chisquare(counts, f_exp=p * trials).pvalue
        return pvalue > CHISQUARE_LEVEL, f"chi-square p-value {pvalue:.4g} over {trials} draws"

    def check_ptree(self, rng: np.random.Generator) -> Tuple[bool, str]:
        name, trials = "ptree-law", self.trials("ptree-law")
        pv = ProbabilityVector.from_masses(PTREE_MASSES, 1.0)
        exact = exact_ptree_law(pv)
        sampled = empirical_law(rooted_key(sample_ptree(pv, rng)) for _ in range(trials))
        tv = tv_distance(exact, sampled)
        tolerance = self.tolerance(name, len(exact))
        return tv < tolerance, f"TV {tv:.4f} < {tolerance:.4f} over {trials} p-trees"

    def check_construction_law(self, rng: np.random.Generator) -> Tuple[bool, str]:
        worst = 0.0
        for pv in (ProbabilityVector.uniform(3, TILTED_A), ProbabilityVector.from_masses(PTREE_MASSES, TILTED_A)):
            worst = max(worst, tv_distance(construction_law(pv), exact_connected_law(pv)))
        return worst < EXACT_TOLERANCE, f"construction vs connected law TV {worst:.3g}"

    def check_tilted_sampler(self, rng: np.random.Generator) -> Tuple[bool, str]:
        name, trials = "tilted-sampler", self.trials("tilted-sampler")
        pv = ProbabilityVector.uniform(3, TILTED_A)
        sampled = empirical_law(graph_key(sample_connected(pv, rng)) for _ in range(trials))
        rejected = empirical_law(graph_key(rejection_connected(pv, rng)) for _ in range(trials))
        tv = tv_distance(sampled, rejected)
        tolerance = self.tolerance(name, len(exact_connected_law(pv)), samples=2)
        return tv < tolerance, f"TV {tv:.4f} < {tolerance:.4f} against rejection sampling over {trials} components"

    def check_two_stage(self, rng: np.random.Generator) -> Tuple[bool, str]:
        name, trials = "two-stage", self.trials("two-stage")
        exact = static_graph_law(TWO_STAGE_WEIGHTS, TWO_STAGE_TIME)
        sampled = empirical_law(
            graph_key(two_stage_sample(TWO_STAGE_WEIGHTS, TWO_STAGE_TIME, rng)) for _ in range(trials)
        )
        tv = tv_distance(exact, sampled)
        tolerance = self.tolerance(name, len(exact))
        return tv < tolerance, f"TV {tv:.4f} < {tolerance:.4f} over {trials} graphs"

    def check_covering(self, rng: np.random.Generator) -> Tuple[bool, str]:
        trees, max_vertices = COVERING_TREES[self.profile]
        for index in range(trees):
            t = random_tree(int(rng.integers(1, max_vertices + 1)), rng)
            for radius in (1, 2, 3):
                fast, slow = covering_number(t, radius), brute_force_covering(t, radius)
                if fast != slow:
                    return False, f"tree {index} (size {t.size}), radius {radius}: {fast} != brute force {slow}"
        return True, f"{trees} trees with n <= {max_vertices} match brute force at radii 1..3"

    def check_tree_metrics(self, rng: np.random.Generator) -> Tuple[bool, str]:
        trees, max_vertices = TREE_METRIC_TREES[self.profile]
        for index in range(trees):
            t = random_tree(int(rng.integers(2, max_vertices + 1)), rng)
            vertices = list(t.vertices)
            diameter = max(t.distance(a, b) for a in vertices for b in vertices)
            if tree_diameter(t) != diameter:
                return False, f"tree {index}: diameter {tree_diameter(t)} != all pairs {diameter}"
            sub = rng.choice(vertices, size=int(rng.integers(1, len(vertices) + 1)), replace=False).tolist()
            hausdorff = max(min(t.distance(v, s) for s in sub) for v in vertices)
            if hausdorff_nested(t, sub) != hausdorff:
                return False, f"tree {index}: hausdorff {hausdorff_nested(t, sub)} != brute force {hausdorff}"
        return True, f"{trees} trees with n <= {max_vertices} match all-pairs diameter and brute-force hausdorff"

    def check_uniform_minima(self, rng: np.random.Generator) -> Tuple[bool, str]:
        trials = self.trials("uniform-minima")
        tight = uniform_minima_check(1, 0.3, [0.3], trials, rng)
        if not tight.passed or abs(tight.probability - 0.5) > 4.0 * tight.stderr:
            return False, f"symmetric case: probability {tight.probability:.4f}, expected 1/2"
        for index in range(MINIMA_INSTANCES):
            m0 = int(rng.integers(1, 5))
            x0 = float(rng.uniform(0.0, 0.5))
            xs = rng.uniform(x0, 0.9, size=int(rng.integers(1, 5)))
            result = uniform_minima_check(m0, x0, xs, trials, rng)
            if not result.passed:
                return False, (f"instance {index} (m0={m0}, k={xs.size}): probability {result.probability:.4f} "
                               f"below bound {result.bound:.4f}")
        return True, f"bound m0/(m0+k) holds on {MINIMA_INSTANCES} random instances and the symmetric case"

    def check_weights_file(self, rng: np.random.Generator) -> Tuple[bool, str]:
        try:
            seq = WeightSequence.from_file(self.cfg.weights_file, self.cfg.tau)
        except WeightFileError as e:
            return False, str(e)
        except OSError as e:
            return False, f"{self.cfg.weights_file}: {e}"
        return True, f"{seq.n} weights read from {self.cfg.weights_file}"

    def run(self, show_progress: bool = True) -> List[CheckResult]:
        """Run every check with its own seed; exceptions count as failures"""
        results: List[CheckResult] = []
        passed = 0
        failed = 0
        overall = tqdm(
            total=len(self.checks),
            desc="🔄 Validation",
            unit="check",
            bar_format="{l_bar}{bar}| {n_fmt}/{total_fmt} [{elapsed}<{remaining}, {rate_fmt}] {postfix}",
            disable=not show_progress,
        )
        try:
            for index, (name, check) in enumerate(self.checks):
                seed = derive_seed(self.cfg.seed, STREAM_CHECKS, index)
                try:
                    ok, message = check(substream(seed))
                except Exception as e:
                    ok, message = False, f"{type(e).__name__}: {e}"
                results.append(CheckResult(name=name, passed=bool(ok), message=message, seed=seed))
                if ok:
                    passed += 1
                    logger.success(f"✅ {name}: {message}")
                else:
                    failed += 1
                    logger.error(f"❌ {name}: {message} (seed {seed})")
                overall.set_postfix_str(f"✅{passed} ❌{failed}")
                overall.update(1)
        finally:
            overall.close()
        return results


async def run_validate(cfg: ExperimentConfig, show_progress: bool = True) -> ExperimentResult:
    """Run the oracle suite and write one row per check; any failing check is a failure"""
    result = ExperimentResult(name=cfg.name)
    checks = ValidationSuite(cfg).run(show_progress=show_progress)
    result.files.append(await write_csv(cfg.out_dir / f"{VALIDATION_TABLE}.csv", VALIDATION_COLUMNS,
                                        [check.row() for check in checks]))
    result.failures.extend(f"{c.name}: {c.message} (seed {c.seed})" for c in checks if not c.passed)
    result.summary = {"checks": len(checks), "passed": sum(c.passed for c in checks), "profile": cfg.profile}
    return result
