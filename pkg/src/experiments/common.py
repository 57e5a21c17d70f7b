"""
Shared plumbing for experiments: weight construction, seeding and table emission
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple

from loguru import logger

from ..config import ExperimentConfig
from ..utils.rng import derive_seed
from ..weights import WeightSequence, build_power_law
from .output import write_csv
from .runner import ReplicaJob, ReplicaRunner, Row, collect_rows

TABLE_KEY = "_table"


@dataclass
class ExperimentResult:
    """Files written by an experiment, its failures and summary statistics"""
    name: str
    files: List[Path] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return not self.failures


def weight_sequences(cfg: ExperimentConfig) -> List[Tuple[int, WeightSequence]]:
    """
    One weight sequence per configured n, or the single sequence of the weights file

    Raises:
        WeightFileError: if the weights file cannot be parsed
    """
    if cfg.weights_file is not None:
        seq = WeightSequence.from_file(cfg.weights_file, cfg.tau)
        logger.info(f"Loaded {seq.n} weights from {cfg.weights_file}")
        return [(0, seq)]
    return [(k, build_power_law(n, cfg.c, cfg.tau)) for k, n in enumerate(cfg.n_values)]


def replica_seed(cfg: ExperimentConfig, n_index: int) -> int:
    """Seed of the n-th system size; replicas are sub-streams of it"""
    return derive_seed(cfg.seed, n_index)


def tagged(table: str, row: Row) -> Row:
    return {TABLE_KEY: table, **row}


def split_tables(rows: Sequence[Row]) -> Dict[str, List[Row]]:
    tables: Dict[str, List[Row]] = {}
    for row in rows:
        tables.setdefault(row.get(TABLE_KEY, ""), []).append(row)
    return tables


async def run_and_write(cfg: ExperimentConfig, jobs: List[ReplicaJob], headers: Dict[str, Sequence[str]],
                        result: ExperimentResult) -> Dict[str, List[Row]]:
    """
    Run the jobs, write one CSV per table and return the rows by table

    Tables are written even when a replica failed so finished rows survive.
    """
    outcomes = await ReplicaRunner(cfg.threads).run(jobs, progress_desc=cfg.name)
    rows, failures = collect_rows(outcomes)
    result.failures.extend(failures)
    tables = split_tables(rows)
    for table, header in headers.items():
        path = cfg.out_dir / f"{table}.csv"
        result.files.append(await write_csv(path, header, tables.get(table, [])))
    return tables
