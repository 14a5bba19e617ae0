"""Exact verification of the random Simons inequality on finite probability spaces."""

from .errors import DomainError, HypothesisFailed, ParseError, ResourceError, StructuralError
from .fileio import dumps_instance, generate, loads_instance, parse_instance
from .instance import (
    BaseFunction,
    Instance,
    Selection,
    check_hypothesis,
    distinct_functions,
    enumerate_E,
    evaluate,
    validate,
)
from .l0 import (
    Event,
    EventuallyPeriodicSeq,
    ProbSpace,
    Rv,
    concatenate,
    ess_inf,
    ess_liminf,
    ess_limsup,
    ess_sup,
    in_ball,
    rv_leq,
    rv_leq_on,
    rv_lt,
)
from .minimax import MixtureWeights, PayoffMatrix, essinf_over_hull, game_value, game_value_per_atom, mix
from .verifier import (
    ProofTrace,
    VerifierResult,
    choose_lambda,
    compute_lhs,
    compute_M,
    compute_rhs,
    construct_g_sequence,
    gamma_n,
    trace_proof,
    verify,
)

__version__ = "0.1.0"
