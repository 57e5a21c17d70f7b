"""
Async replica runner with a bounded worker pool and progress tracking
"""

import asyncio
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from loguru import logger
from tqdm.asyncio import tqdm

Row = Dict[str, Any]


@dataclass(frozen=True)
class ReplicaJob:
    """One unit of work: ``func(*args)`` returns the rows of a replica"""
    key: Tuple[int, ...]
    label: str
    func: Callable[..., List[Row]]
    args: Tuple[Any, ...] = ()


@dataclass
class ReplicaOutcome:
    """Result of one job in the ``(success, message)`` form plus its rows"""
    key: Tuple[int, ...]
    success: bool
    message: str
    rows: List[Row] = field(default_factory=list)


class ReplicaRunner:
    """
    Runs replica jobs concurrently and keeps finished rows when a job fails

    With ``threads > 1`` jobs go to a process pool through
    ``loop.run_in_executor``; otherwise they run in the event-loop thread.
    A failure stops jobs that have not started yet.
    """

    def __init__(self, threads: int = 1):
        if threads < 1:
            raise ValueError(f"threads must be at least 1, got {threads}")
        self.threads = threads
        self.aborted = False

    async def run_job(self, job: ReplicaJob, semaphore: asyncio.Semaphore,
                      executor: Optional[Executor]) -> ReplicaOutcome:
        """Run a single job, converting exceptions into a failed outcome"""
        async with semaphore:
            if self.aborted:
                return ReplicaOutcome(job.key, False, f"Skipped after an earlier failure: {job.label}")
            logger.debug(f"Starting replica {job.label}")
            try:
                if executor is None:
                    rows = job.func(*job.args)
                else:
                    loop = asyncio.get_running_loop()
                    rows = await loop.run_in_executor(executor, job.func, *job.args)
            except Exception as e:
                self.aborted = True
                logger.error(f"Replica {job.label} failed: {e}")
                return ReplicaOutcome(job.key, False, f"Error in {job.label}: {e}")
            logger.debug(f"Finished replica {job.label} with {len(rows)} rows")
            return ReplicaOutcome(job.key, True, f"Completed: {job.label}", list(rows))

    async def run(self, jobs: List[ReplicaJob], progress_desc: str = "Replicas") -> List[ReplicaOutcome]:
        """Run every job; outcomes come back sorted by job key"""
        if not jobs:
            return []

        logger.info(f"Starting {len(jobs)} replica jobs ({self.threads} worker(s))")
        self.aborted = False
        semaphore = asyncio.Semaphore(self.threads)
        executor = ProcessPoolExecutor(max_workers=self.threads) if self.threads > 1 else None

        outcomes: List[ReplicaOutcome] = []
        completed = 0
        failed = 0
        overall = tqdm(
            total=len(jobs),
            desc=f"🔄 {progress_desc}",
            unit="replica",
            bar_format="{l_bar}{bar}| {n_fmt}/{total_fmt} [{elapsed}<{remaining}, {rate_fmt}] {postfix}",
            position=0,
        )
        try:
            tasks = [self.run_job(job, semaphore, executor) for job in jobs]
            for coro in asyncio.as_completed(tasks):
                outcome = await coro
                outcomes.append(outcome)
                if outcome.success:
                    completed += 1
                else:
                    failed += 1
                overall.set_postfix_str(f"✅{completed} ❌{failed}")
                overall.update(1)
        finally:
            overall.close()
            if executor is not None:
                executor.shutdown(wait=True, cancel_futures=True)

        outcomes.sort(key=lambda o: o.key)
        logger.info(f"Replica batch finished: {completed} completed, {failed} failed")
        return outcomes


def collect_rows(outcomes: List[ReplicaOutcome]) -> Tuple[List[Row], List[str]]:
    """Rows of the successful outcomes in key order, and the failure messages"""
    rows: List[Row] = []
    failures: List[str] = []
    for outcome in outcomes:
        if outcome.success:
            rows.extend(outcome.rows)
        else:
            failures.append(outcome.message)
    return rows, failures
