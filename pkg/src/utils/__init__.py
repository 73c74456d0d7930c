from .logger import setup_logger, get_logger
from .profiler import Profiler
from .bootstrap import (
    DEFAULT_CONFIG,
    FULL_SCALE,
    load_config,
    save_config,
    validate_config,
    apply_override,
    apply_overrides,
    resolve_workers,
)
from .display import display_banner, display_coverage_table, display_corner_case_table
from .io import (
    read_dataset_csv,
    write_dataset_csv,
    read_dataset_meta,
    ingest_transitions_csv,
    ingest_count_tables_csv,
    export_transitions_csv,
    export_count_tables_csv,
    read_report_json,
    write_reports_json,
    write_coverage_csv,
    coverage_series,
)
