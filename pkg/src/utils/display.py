"""
Index Policy Evaluation Toolkit

Module: display.py

Console tables for experiment results. Tables go to stdout; the banner goes
to stderr so piped command output stays machine-readable.
"""

import sys
from typing import Any, Iterable, Optional

from src.core.types import CoverageSummary


def display_banner(command: str) -> None:
    """Print the run banner for a command."""
    print("=" * 60, file=sys.stderr)
    print("=" * 15 + " Index Policy Evaluation " + "=" * 20, file=sys.stderr)
    print(f"Command: {command}", file=sys.stderr)
    print("=" * 60, file=sys.stderr)


def _number(value: Optional[float], width: int = 10, digits: int = 4) -> str:
    if value is None or value != value:
        return "-".rjust(width)
    return f"{value:{width}.{digits}f}"


def display_coverage_table(summaries: Iterable[CoverageSummary]) -> None:
    """
    Print coverage summaries, one row per estimator and grid value.
    """
    summaries = list(summaries)
    swept = any(s.sweep_axis is not None for s in summaries)
    print("\n=== Coverage ===")
    header = f"{'estimator':<20}" + (f"{'value':>10}" if swept else "")
    header += f"{'below':>10}{'covered':>10}{'above':>10}{'half-width':>12}{'estimand':>12}{'reps':>7}{'fail':>6}"
    print(header)
    for s in summaries:
        row = f"{s.estimator:<20}" + (_number(s.sweep_value, 10, 4) if swept else "")
        row += _number(s.below, 10, 3) + _number(s.covered, 10, 3) + _number(s.above, 10, 3)
        row += _number(s.mean_half_width, 12, 4) + _number(s.estimand, 12, 5)
        row += f"{s.replicates:>7}{s.failures:>6}"
        print(row)


def display_corner_case_table(results: Iterable[Any]) -> None:
    print("\n=== Corner Case ===")
    print(f"{'estimator':<12}{'mean':>10}{'std':>10}{'CI width':>10}{'oracle':>10}{'coverage':>10}{'reps':>7}")
    for r in results:
        print(
            f"{r.estimator:<12}" + _number(r.mean_point) + _number(r.std_point) + _number(r.mean_ci_width)
            + _number(r.oracle_width) + _number(r.coverage, 10, 3) + f"{r.replicates:>7}"
        )
