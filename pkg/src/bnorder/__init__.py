"""Order-space MCMC structure learning for discrete Bayesian networks."""
from .errors import (BNError, CapacityError, ConfigurationError, CyclicGraphError, DataError,
                     EmptyWorkError, LimitError, ProposalError, RankError, ValidationError)
from .model import (Dag, Dataset, Order, PriorMatrix, RunConfig, consistent, is_acyclic,
                    pset_mask, pset_members, topological_order)
from .scoring import (Hyperparams, ScoreCache, ScoredGraph, build_score_cache, local_score,
                      ppf, score_graph, score_order)
from .engine import ScoringEngine, parallel_score_order
from .sampler import BestGraphTracker, McmcResult, run_mcmc

__version__ = "0.1.0"

__all__ = [
    "BNError", "CapacityError", "ConfigurationError", "CyclicGraphError", "DataError",
    "EmptyWorkError", "LimitError", "ProposalError", "RankError", "ValidationError",
    "Dag", "Dataset", "Order", "PriorMatrix", "RunConfig", "consistent", "is_acyclic",
    "pset_mask", "pset_members", "topological_order",
    "Hyperparams", "ScoreCache", "ScoredGraph", "build_score_cache", "local_score", "ppf",
    "score_graph", "score_order", "ScoringEngine", "parallel_score_order",
    "BestGraphTracker", "McmcResult", "run_mcmc",
]
