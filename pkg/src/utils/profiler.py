"""
Index Policy Evaluation Toolkit

Module: profiler.py

Wall-clock timing of command stages, reported at the end of a run.
"""

import time
from contextlib import contextmanager
from typing import Dict, Iterator, Optional


class Profiler:
    """
    Stage timings for one command.

    Stages that run more than once under the same name accumulate.

    Attributes:
        timings (dict): Stage name to elapsed seconds, in first-seen order
        start_time (float): perf_counter value when the run started
        end_time (float): perf_counter value when the run ended, None while running
    """
    def __init__(self):
        self.timings: Dict[str, float] = {}
        self.start_time: Optional[float] = None
        self.end_time: Optional[float] = None

    @contextmanager
    def timer(self, stage: str) -> Iterator[None]:
        """
        Time the enclosed block as `stage`.

        Example:
            with profiler.timer("Estimand"):
                monte_carlo_estimand(plan)
        """
        began = time.perf_counter()
        try:
            yield
        finally:
            self.timings[stage] = self.timings.get(stage, 0.0) + time.perf_counter() - began

    def start_global_timer(self) -> None:
        self.start_time = time.perf_counter()
        self.end_time = None

    def end_global_timer(self) -> None:
        self.end_time = time.perf_counter()

    def get_global_time(self) -> float:
        if self.start_time is None:
            return 0.0
        stop = time.perf_counter() if self.end_time is None else self.end_time
        return stop - self.start_time

    def generate_report(self) -> str:
        """Plain-text breakdown of stage timings and the whole-run time."""
        width = max((len(stage) for stage in self.timings), default=0)
        lines = ["=== Timing Breakdown ==="]
        lines += [f"{stage:<{width}}  {seconds:.4f}s" for stage, seconds in self.timings.items()]
        lines.append(f"Stages: {sum(self.timings.values()):.4f}s, run: {self.get_global_time():.4f}s")
        return "\n".join(lines)
