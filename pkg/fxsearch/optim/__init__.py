"""Black-box optimizers for the search stage."""

from fxsearch.models.results import SearchBudget, budget_trials
from fxsearch.optim.base import Objective, OptimizerRun
from fxsearch.optim.cmaes import DEFAULT_SIGMA0, cmaes_maximize
from fxsearch.optim.tpe import tpe_maximize
from fxsearch.optim.trace import read_trace_csv, write_trace_csv

__all__ = [
    "DEFAULT_SIGMA0",
    "Objective",
    "OptimizerRun",
    "SearchBudget",
    "budget_trials",
    "cmaes_maximize",
    "read_trace_csv",
    "tpe_maximize",
    "write_trace_csv",
]
