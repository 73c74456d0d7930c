"""
Index Policy Evaluation Toolkit

Module: runner.py

Replicate-level parallelism. Tasks are independent and carry their own seed
sequence, so results do not depend on how many workers run them. Results
come back in task order (ordered imap), which keeps every downstream
aggregation deterministic.
"""

import os
import sys
from multiprocessing import Pool, cpu_count
from typing import Callable, List, Optional, Sequence, TypeVar

import numpy as np
from tqdm import tqdm

from src.core.errors import ConfigurationError
from src.utils.logger import LoggerType, get_logger

T = TypeVar("T")
R = TypeVar("R")

WORKERS_ENV = "POLICY_EVAL_WORKERS"


def default_workers() -> int:
    """
    Worker count from the POLICY_EVAL_WORKERS variable, else half the CPUs.

    Raises:
        ConfigurationError: If the variable is set but not a positive integer
    """
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        try:
            workers = int(raw)
        except ValueError:
            raise ConfigurationError(f"{WORKERS_ENV} must be a positive integer, got '{raw}'") from None
        if workers < 1:
            raise ConfigurationError(f"{WORKERS_ENV} must be a positive integer, got '{raw}'")
        return workers
    return max(1, cpu_count() // 2)


def spawn_seeds(seed: int, count: int, stream: int = 1) -> List[np.random.SeedSequence]:
    """
    Child seed sequences of one stream of a root seed.

    Stream 0 feeds the estimand oracle and stream 1 the trial replicates, so
    changing the number of estimand cohorts never shifts the trials.
    """
    streams = np.random.SeedSequence(seed).spawn(2)
    return streams[stream].spawn(count)


class ReplicateRunner:
    """
    Maps a picklable function over replicate tasks.

    Attributes:
        num_workers (int): Worker processes; 1 runs inline
        chunk_size (int, optional): Tasks per dispatch, computed when None
        progress (bool): Show a progress bar on interactive terminals
        logger: Logger for status messages
    """

    def __init__(
        self,
        num_workers: Optional[int] = None,
        chunk_size: Optional[int] = None,
        progress: bool = True,
        logger: Optional[LoggerType] = None,
    ):
        if logger is None:
            logger = get_logger(name="experiments")
        self.num_workers = num_workers or default_workers()
        self.chunk_size = chunk_size
        self.progress = progress
        self.logger = logger

    def _chunk_size(self, total: int) -> int:
        if self.chunk_size is not None:
            return self.chunk_size
        return max(1, total // (self.num_workers * 4))

    def map(self, function: Callable[[T], R], tasks: Sequence[T], desc: str = "Replicates") -> List[R]:
        """
        Apply function to every task.

        Args:
            function: Top-level function, picklable for worker processes
            tasks: Task arguments
            desc: Progress-bar label

        Returns:
            list: Results in task order
        """
        total = len(tasks)
        disable = not self.progress or not sys.stderr.isatty()
        if self.num_workers == 1 or total <= 1:
            self.logger.debug(f"{desc}: running {total} tasks inline")
            return [function(task) for task in tqdm(tasks, desc=desc, total=total, disable=disable)]

        chunk_size = self._chunk_size(total)
        self.logger.info(f"[+] {desc}: {total} tasks on {self.num_workers} workers (chunks of {chunk_size})")
        with Pool(processes=self.num_workers) as pool:
            iterator = pool.imap(function, tasks, chunksize=chunk_size)
            return list(tqdm(iterator, desc=desc, total=total, disable=disable))
