from .errors import (
    PolicyEvalError,
    ConfigurationError,
    ArgumentError,
    InputFormatError,
    DataInvariantError,
    NumericalError,
    DegenerateDataError,
    DegenerateVarianceError,
    ConvergenceError,
    RankDeficiencyError,
)
from .types import (
    Arm,
    DomainTag,
    IndexKind,
    EstimatorName,
    TransitionModel,
    Agent,
    AgentCohort,
    PolicySpec,
    RctRecord,
    ArmTable,
    RctDataset,
    EstimateReport,
    CoverageSummary,
    budget_per_round,
    check_truncation,
    total_reward,
    transitions_from_good_probs,
)
