"""
Index Policy Evaluation Toolkit

Module: io.py

External file formats.

Dataset CSV: one row per agent with the columns
    agent_id, arm, index, treat_week, covariate_0..covariate_{m-1}, reward_t0..reward_t{H-1}
ordered policy arm first, then control arm, each by agent_id. Reals are
written with 17 significant digits so a dataset re-parses to the same
floats. A sidecar <name>.meta.json records alpha, rounds, horizon, seed and
domain.

Transition pool CSV: columns t{a}_{s}{s'} for action a, state s and next
state s' (t0_00 .. t1_11). Count-table CSV: columns n_{s}{a}{s'} with
non-negative counts.

Result files: estimate reports as JSON with 9 significant digits, coverage
summaries as CSV, and plot-ready series as JSON.
"""

import json
import os
import re
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.core.errors import DataInvariantError, InputFormatError
from src.core.types import (
    Arm,
    ArmTable,
    CoverageSummary,
    DomainTag,
    EstimateReport,
    RctDataset,
    TransitionModel,
)
from src.utils.logger import LoggerType, get_logger


FIXED_COLUMNS = ("agent_id", "arm", "index", "treat_week")
TRANSITION_COLUMNS = tuple(f"t{a}_{s}{t}" for a in (0, 1) for s in (0, 1) for t in (0, 1))
COUNT_COLUMNS = tuple(f"n_{s}{a}{t}" for s in (0, 1) for a in (0, 1) for t in (0, 1))
ROW_SUM_TOL = 1e-9
REPORT_DIGITS = 9

_FLOAT_FORMAT = "%.17g"
_POOL_FLOAT_FORMAT = "%.12f"


def _get_logger(logger: Optional[LoggerType]) -> LoggerType:
    if logger is None:
        logger = get_logger(name="io")
    return logger


def _ensure_parent(path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)


def meta_path(dataset_path: str) -> str:
    """Sidecar metadata path of a dataset file."""
    return os.path.splitext(dataset_path)[0] + ".meta.json"


# --- Datasets ---

def dataset_frame(data: RctDataset) -> pd.DataFrame:
    """
    Dataset as a DataFrame in file column and row order.
    """
    frames = []
    for arm, table in ((Arm.POLICY, data.policy_arm), (Arm.CONTROL, data.control_arm)):
        order = np.argsort(table.agent_ids, kind="stable")
        columns: Dict[str, Any] = {
            "agent_id": table.agent_ids[order],
            "arm": [arm.value] * table.n,
            "index": table.indices[order],
            "treat_week": table.treat_weeks[order],
        }
        for j in range(table.covariate_dim):
            columns[f"covariate_{j}"] = table.covariates[order, j]
        for t in range(table.horizon):
            columns[f"reward_t{t}"] = table.rewards[order, t]
        frames.append(pd.DataFrame(columns))
    return pd.concat(frames, ignore_index=True)


def write_dataset_csv(
    data: RctDataset,
    path: str,
    domain: Optional[DomainTag] = None,
    logger: Optional[LoggerType] = None,
) -> str:
    """
    Write a dataset and its metadata sidecar.

    Args:
        data: Dataset to write
        path: Destination CSV path
        domain: Domain the dataset was simulated from
        logger: Logger for status messages

    Returns:
        str: The CSV path
    """
    logger = _get_logger(logger)
    _ensure_parent(path)
    frame = dataset_frame(data)
    frame.to_csv(path, index=False, float_format=_FLOAT_FORMAT, lineterminator="\n", encoding="utf-8")

    meta = {
        "n": data.n,
        "alpha": data.alpha,
        "rounds": data.rounds,
        "horizon": data.horizon,
        "seed": data.seed,
        "domain": DomainTag(domain).value if domain is not None else None,
    }
    with open(meta_path(path), "w", encoding="utf-8") as f:
        json.dump(meta, f, indent=2)
        f.write("\n")
    logger.info(f"[+] Wrote dataset with {2 * data.n} rows to {path}")
    return path


def read_dataset_meta(path: str) -> Optional[Dict[str, Any]]:
    """Sidecar metadata of a dataset, None when there is no sidecar."""
    sidecar = meta_path(path)
    if not os.path.exists(sidecar):
        return None
    try:
        with open(sidecar, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"{sidecar}: invalid JSON: {e.msg}", line=e.lineno) from e


def _read_frame(path: str) -> pd.DataFrame:
    try:
        return pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError as e:
        raise InputFormatError(f"{path}: file is empty", line=1) from e
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        line = int(match.group(1)) if match else None
        raise InputFormatError(f"{path}: malformed CSV row", line=line) from e
    except UnicodeDecodeError as e:
        raise InputFormatError(f"{path}: file is not UTF-8 text") from e


def _numeric_column(frame: pd.DataFrame, column: str, integer: bool = False) -> np.ndarray:
    raw = frame[column]
    values = pd.to_numeric(raw, errors="coerce").to_numpy(dtype=float)
    bad = np.flatnonzero(~np.isfinite(values))
    if integer and bad.size == 0:
        bad = np.flatnonzero(values != np.round(values))
    if bad.size:
        row = int(bad[0])
        kind = "an integer" if integer else "a finite number"
        # header is line 1
        raise InputFormatError(f"column '{column}' expects {kind}, got '{raw.iloc[row]}'", line=row + 2)
    return values.astype(np.int64) if integer else values


def _check_header(columns: Sequence[str]) -> Tuple[List[str], List[str]]:
    columns = list(columns)
    if tuple(columns[:4]) != FIXED_COLUMNS:
        raise InputFormatError(f"header must start with {', '.join(FIXED_COLUMNS)}", line=1)
    rest = columns[4:]
    covariates = [c for c in rest if c.startswith("covariate_")]
    rewards = [c for c in rest if c.startswith("reward_t")]
    expected = [f"covariate_{j}" for j in range(len(covariates))] + [f"reward_t{t}" for t in range(len(rewards))]
    if rest != expected:
        raise InputFormatError(
            "header columns after treat_week must be covariate_0.. then reward_t0.. in order", line=1
        )
    if not rewards:
        raise InputFormatError("header has no reward_t columns", line=1)
    return covariates, rewards


def read_dataset_csv(
    path: str,
    alpha: Optional[float] = None,
    rounds: Optional[int] = None,
    logger: Optional[LoggerType] = None,
) -> RctDataset:
    """
    Parse a dataset CSV.

    alpha and rounds come from the arguments, else the metadata sidecar.
    Without either, rounds is the largest treat_week and alpha is the share
    of agents treated in round 1.

    Args:
        path: Dataset CSV path
        alpha: Treatment fraction override
        rounds: Allocation rounds override
        logger: Logger for status messages

    Returns:
        RctDataset: The parsed dataset

    Raises:
        InputFormatError: If the file is not a well-formed dataset CSV
        DataInvariantError: If the parsed rows violate a dataset invariant
    """
    logger = _get_logger(logger)
    frame = _read_frame(path)
    covariate_columns, reward_columns = _check_header(frame.columns)
    if frame.empty:
        raise InputFormatError("dataset has no data rows", line=2)

    arms = frame["arm"].to_numpy()
    unknown = np.flatnonzero(~np.isin(arms, [Arm.POLICY.value, Arm.CONTROL.value]))
    if unknown.size:
        row = int(unknown[0])
        raise InputFormatError(f"arm must be 'policy' or 'control', got '{arms[row]}'", line=row + 2)

    agent_ids = _numeric_column(frame, "agent_id", integer=True)
    indices = _numeric_column(frame, "index")
    treat_weeks = _numeric_column(frame, "treat_week", integer=True)
    covariates = np.column_stack(
        [_numeric_column(frame, c) for c in covariate_columns]
    ) if covariate_columns else np.zeros((len(frame), 0))
    rewards = np.column_stack([_numeric_column(frame, c) for c in reward_columns])

    tables = {}
    for arm in (Arm.POLICY, Arm.CONTROL):
        rows = np.flatnonzero(arms == arm.value)
        rows = rows[np.argsort(agent_ids[rows], kind="stable")]
        tables[arm] = ArmTable(
            agent_ids=agent_ids[rows],
            indices=indices[rows],
            treat_weeks=treat_weeks[rows],
            rewards=rewards[rows],
            covariates=covariates[rows],
        )

    meta = read_dataset_meta(path) or {}
    seed = meta.get("seed")
    seed = -1 if seed is None else int(seed)
    if rounds is None:
        rounds = meta.get("rounds")
    if rounds is None:
        rounds = max(1, int(tables[Arm.POLICY].treat_weeks.max(initial=0)))
    if alpha is None:
        alpha = meta.get("alpha")
    if alpha is None:
        n = tables[Arm.POLICY].n
        if n == 0:
            raise DataInvariantError("equal_arms", "the policy arm has no agents")
        alpha = int(np.count_nonzero(tables[Arm.POLICY].treat_weeks == 1)) / n
        logger.warning(f"[!] No metadata for {path}; inferred alpha = {alpha:.6g} from round-1 treatments")
        if alpha == 0.0:
            raise DataInvariantError("round_budget", "no policy-arm agent is treated in round 1")

    data = RctDataset(
        policy_arm=tables[Arm.POLICY],
        control_arm=tables[Arm.CONTROL],
        alpha=float(alpha),
        horizon=len(reward_columns),
        rounds=int(rounds),
        seed=seed,
    )
    logger.info(f"[+] Read dataset {path}: n={data.n}, horizon={data.horizon}, alpha={data.alpha:.6g}")
    return data


# --- Transition pools ---

def ingest_transitions_csv(path: str, logger: Optional[LoggerType] = None) -> List[TransitionModel]:
    """
    Parse a pool of externally fitted transition matrices.

    Rows whose (action, state) probabilities sum to 1 within 1e-9 are
    renormalised exactly.

    Raises:
        InputFormatError: If a column is missing or a value is not a probability
        DataInvariantError: If a row sum is off by more than 1e-9 (names the data row)
    """
    logger = _get_logger(logger)
    frame = _read_frame(path)
    missing = [c for c in TRANSITION_COLUMNS if c not in frame.columns]
    if missing:
        raise InputFormatError(f"missing transition columns: {', '.join(missing)}", line=1)
    if frame.empty:
        raise InputFormatError("transition pool has no rows", line=2)

    values = np.column_stack([_numeric_column(frame, c) for c in TRANSITION_COLUMNS]).reshape(-1, 2, 2, 2)
    negative = np.flatnonzero(np.any(values < 0.0, axis=(1, 2, 3)))
    if negative.size:
        row = int(negative[0]) + 1
        raise DataInvariantError("row_stochastic", "transition probabilities must be non-negative", row=row)
    sums = values.sum(axis=-1)
    off = np.flatnonzero(np.any(np.abs(sums - 1.0) > ROW_SUM_TOL, axis=(1, 2)))
    if off.size:
        row = int(off[0]) + 1
        worst = float(np.max(np.abs(sums[off[0]] - 1.0)))
        raise DataInvariantError(
            "row_stochastic", f"transition rows must sum to 1 within {ROW_SUM_TOL:g} (off by {worst:.3g})", row=row
        )
    pool = [TransitionModel(model / model.sum(axis=-1, keepdims=True)) for model in values]
    logger.info(f"[+] Ingested {len(pool)} transition models from {path}")
    return pool


def ingest_count_tables_csv(path: str, logger: Optional[LoggerType] = None) -> List[np.ndarray]:
    """
    Parse a pool of (state, action, next state) count tables.

    Returns:
        list: Arrays of shape (2, 2, 2) indexed [state, action, next_state]

    Raises:
        InputFormatError: If a column is missing or a value is not a number
        DataInvariantError: If a count is negative (names the data row)
    """
    logger = _get_logger(logger)
    frame = _read_frame(path)
    missing = [c for c in COUNT_COLUMNS if c not in frame.columns]
    if missing:
        raise InputFormatError(f"missing count columns: {', '.join(missing)}", line=1)
    if frame.empty:
        raise InputFormatError("count-table pool has no rows", line=2)

    values = np.column_stack([_numeric_column(frame, c) for c in COUNT_COLUMNS]).reshape(-1, 2, 2, 2)
    negative = np.flatnonzero(np.any(values < 0.0, axis=(1, 2, 3)))
    if negative.size:
        raise DataInvariantError("count_sign", "counts must be non-negative", row=int(negative[0]) + 1)
    pool = [table for table in values]
    logger.info(f"[+] Ingested {len(pool)} count tables from {path}")
    return pool


def export_transitions_csv(pool: Sequence[TransitionModel], path: str) -> str:
    """Write transition models in the ingest format with 12 decimals."""
    _ensure_parent(path)
    rows = np.array([model.flatten() for model in pool]).reshape(-1, 8)
    frame = pd.DataFrame(rows, columns=list(TRANSITION_COLUMNS))
    frame.to_csv(path, index=False, float_format=_POOL_FLOAT_FORMAT, lineterminator="\n", encoding="utf-8")
    return path


def export_count_tables_csv(pool: Sequence[np.ndarray], path: str) -> str:
    """Write count tables in the ingest format."""
    _ensure_parent(path)
    rows = np.array([np.asarray(table).reshape(8) for table in pool]).reshape(-1, 8)
    frame = pd.DataFrame(rows, columns=list(COUNT_COLUMNS))
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n", encoding="utf-8")
    return path


# --- Results ---

def reports_to_json(reports: Sequence[EstimateReport], digits: int = REPORT_DIGITS) -> str:
    """One JSON object per report, one per line."""
    return "\n".join(json.dumps(report.to_dict(digits=digits)) for report in reports)


def write_reports_json(reports: Sequence[EstimateReport], path: str, digits: int = REPORT_DIGITS) -> str:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump([report.to_dict(digits=digits) for report in reports], f, indent=2)
        f.write("\n")
    return path


def read_report_json(path: str, estimator: Optional[str] = None) -> EstimateReport:
    """
    Load one report from a report JSON file.

    The file may hold a single report object, a list of them, or one object
    per line as printed by the estimate command. With several reports,
    estimator picks one by name.

    Raises:
        InputFormatError: If the file does not parse or no report matches
    """
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    try:
        payload = json.loads(text)
    except json.JSONDecodeError:
        payload = []
        for number, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                payload.append(json.loads(line))
            except json.JSONDecodeError as e:
                raise InputFormatError(f"{path}: invalid JSON: {e.msg}", line=number) from e
    candidates = payload if isinstance(payload, list) else [payload]
    if estimator is not None:
        candidates = [c for c in candidates if isinstance(c, dict) and c.get("estimator") == estimator]
    if len(candidates) != 1:
        found = "no" if not candidates else f"{len(candidates)}"
        raise InputFormatError(f"{path}: {found} matching reports; select one with --estimator")
    try:
        return EstimateReport.from_dict(candidates[0])
    except (TypeError, ValueError) as e:
        raise InputFormatError(f"{path}: not an estimate report: {e}") from e


def write_coverage_csv(summaries: Sequence[CoverageSummary], path: str) -> str:
    """One row per summary, sweep rows carrying their axis and value."""
    _ensure_parent(path)
    frame = pd.DataFrame([summary.to_row() for summary in summaries])
    frame.to_csv(path, index=False, float_format="%.9g", lineterminator="\n", encoding="utf-8")
    return path


def coverage_series(summaries: Sequence[CoverageSummary]) -> Dict[str, Any]:
    """
    Plot-ready series: per estimator, parallel lists over the sweep grid.
    """
    axis = next((s.sweep_axis for s in summaries if s.sweep_axis is not None), None)
    series: Dict[str, Dict[str, List[Any]]] = {}
    for summary in summaries:
        entry = series.setdefault(
            summary.estimator,
            {"x": [], "below": [], "covered": [], "above": [], "mean_half_width": [], "estimand": [], "replicates": []},
        )
        entry["x"].append(summary.sweep_value)
        for key in ("below", "covered", "above", "mean_half_width", "estimand"):
            value = getattr(summary, key)
            entry[key].append(None if value != value else float(f"{value:.9g}"))
        entry["replicates"].append(summary.replicates)
    return {"axis": axis, "series": series}


def write_series_json(payload: Dict[str, Any], path: str) -> str:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")
    return path


def write_rows_csv(rows: Sequence[Dict[str, Any]], path: str) -> str:
    """Plain table of result rows."""
    _ensure_parent(path)
    pd.DataFrame(list(rows)).to_csv(path, index=False, float_format="%.9g", lineterminator="\n", encoding="utf-8")
    return path
