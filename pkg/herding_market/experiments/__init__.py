from .scenario import (
    DAYS_PER_YEAR,
    DisequilibriumMessage,
    DisequilibriumRequest,
    RunScenarioRequest,
    ScenarioComponent,
    ScenarioError,
    SimulationOutput,
    horizon_steps,
    max_abs_sigma,
    run_scenario,
)
from .sweep import (
    DEFAULT_CMAX_VALUES,
    SweepPoint,
    SweepResult,
    bifurcation_sweep,
    sweep_params,
)
