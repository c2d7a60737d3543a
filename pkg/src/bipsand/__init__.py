"""Sandpile dynamics on complete bipartite graphs with a dedicated sink.

Two models share the same state space: deterministic toppling (asm) and
Bernoulli edge toppling (ssm).  Recurrent states of each model are
recognized in linear time and mapped bijectively onto Ferrers diagram
pairs, parallelogram polyominoes, and Motzkin-like lattice words.
"""
from .enumeration import (
    CSV_HEADER,
    CensusRow,
    census,
    empirical_support,
    enumerate_recurrent,
    enumerate_stable,
    spanning_tree_count,
)
from .errors import GuardError, TopplingStallError
from .ferrers import (
    FerrersDag,
    FerrersDiagram,
    FerrersPair,
    LabelledFerrersPair,
    add,
    apply_sequence,
    build_dag,
    config_to_labelled_pair,
    config_to_pair,
    dag_to_dot,
    is_compatible,
    is_strongly_compatible,
    labelled_pair_to_config,
    legal_adds,
    legal_shifts,
    pair_to_config,
    shift,
    witness_sequence,
)
from .model import (
    MODELS,
    POLICIES,
    BipartiteShape,
    Configuration,
    ToppleOracle,
    Vertex,
    add_grain,
    is_stable,
    markov_step,
    simulate,
    stabilize_deterministic,
    stabilize_stochastic,
    topple_deterministic,
    topple_stochastic,
    trajectory,
)
from .motzkin import (
    MotzkinWord,
    config_to_motzkin,
    motzkin_to_config,
    motzkin_to_polyomino,
    polyomino_to_motzkin,
)
from .polyomino import (
    ParallelogramPolyomino,
    config_to_polyomino,
    pair_to_polyomino,
    polyomino_to_config,
)
from .recurrence import (
    ForbiddenWitness,
    counts_below,
    forbidden_witness_asm,
    forbidden_witness_ssm,
    is_deterministically_recurrent,
    is_recurrent,
    is_stochastically_recurrent,
    level,
    sort_config,
)

__version__ = "0.1.0"

__all__ = [
    "BipartiteShape",
    "CSV_HEADER",
    "CensusRow",
    "Configuration",
    "FerrersDag",
    "FerrersDiagram",
    "FerrersPair",
    "ForbiddenWitness",
    "GuardError",
    "LabelledFerrersPair",
    "MODELS",
    "MotzkinWord",
    "POLICIES",
    "ParallelogramPolyomino",
    "ToppleOracle",
    "TopplingStallError",
    "Vertex",
    "add",
    "add_grain",
    "apply_sequence",
    "build_dag",
    "census",
    "config_to_labelled_pair",
    "config_to_motzkin",
    "config_to_pair",
    "config_to_polyomino",
    "counts_below",
    "dag_to_dot",
    "empirical_support",
    "enumerate_recurrent",
    "enumerate_stable",
    "forbidden_witness_asm",
    "forbidden_witness_ssm",
    "is_compatible",
    "is_deterministically_recurrent",
    "is_recurrent",
    "is_stable",
    "is_stochastically_recurrent",
    "is_strongly_compatible",
    "labelled_pair_to_config",
    "legal_adds",
    "legal_shifts",
    "level",
    "markov_step",
    "motzkin_to_config",
    "motzkin_to_polyomino",
    "pair_to_config",
    "pair_to_polyomino",
    "polyomino_to_config",
    "polyomino_to_motzkin",
    "shift",
    "simulate",
    "sort_config",
    "spanning_tree_count",
    "stabilize_deterministic",
    "stabilize_stochastic",
    "topple_deterministic",
    "topple_stochastic",
    "trajectory",
    "witness_sequence",
]
