"""Scrolling speed and accuracy benchmark toolkit."""

from .config import StudyConfig, load_config, save_config
from .design import (
    CONDITIONS,
    DEFAULT_TECHNIQUE_IDS,
    DEFAULT_TECHNIQUES,
    DISTANCES,
    FRAME_FACTORS,
    SessionPlan,
    Technique,
    TrialSpec,
    assign_devices,
    generate_session_plan,
    group_distance,
)
from .errors import (
    AgentDivergedError,
    DesignError,
    GeometryError,
    StoreError,
    TraceError,
)
from .geometry import TrialGeometry, band_contains, compute_target_band
from .metrics import (
    DEFAULT_EPSILON_PX,
    TrialMetrics,
    compute_metrics,
    detect_trial_end,
    switchbacks_after_first_overshoot,
)
from .oracle import replay_oracle
from .report import Report, TrialRow, aggregate_report
from .simulate import (
    AgentParams,
    SimSession,
    SimTrial,
    calibrate_agent_to_coefficients,
    default_agents,
    simulate_study,
    simulate_trial,
)
from .stats import (
    AnovaResult,
    ModelComparison,
    RegressionFit,
    TukeyGrouping,
    anova_oneway,
    compare_fits,
    fit_linear,
    fit_log2,
    pearson,
    tukey_hsd,
)
from .store import SessionStore, persist_simulation
from .trace import DEFAULT_QUIESCENCE_MS, ScrollEvent, TrialTrace

__version__ = "0.1.0"
