"""Network inference from epidemic traces."""
from .cascade import CascadeParams, Trace, TraceSet, simulate_many, simulate_one
from .errors import (BudgetError, EstimateUnavailable, InconsistencyError, ParameterError,
                     ParseError, TraceInferError, ValidationError, VersionError)
from .evaluate import EvalReport, InferenceResult, evaluate
from .graph import Graph, GraphSpec, generate

__version__ = "0.1.0"

__all__ = [
    "BudgetError", "CascadeParams", "EstimateUnavailable", "EvalReport", "Graph", "GraphSpec",
    "InconsistencyError", "InferenceResult", "ParameterError", "ParseError", "Trace",
    "TraceInferError", "TraceSet", "ValidationError", "VersionError", "evaluate", "generate",
    "simulate_many", "simulate_one",
]
