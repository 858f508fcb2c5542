"""Deciders for reversibility and surjectivity of one-dimensional
cellular automata under null boundary conditions."""

from ._backend import backend_name, set_backend, use_backend
from .amoroso import (
    AmorosoGraph,
    SurjectivityVerdict,
    check_image_covering,
    decide_surjective,
    graph_to_text,
    successor_node,
    successor_node_full,
)
from .core import (
    DEFAULT_WIDTH_CAP,
    Alphabet,
    Bucket,
    LocalRule,
    Neighborhood,
    Node,
    SequenceIndex,
    decode_sequence,
    encode_sequence,
    is_left_zero,
    is_right_zero,
    mirror_rule,
    rule_from_digits,
    rule_from_number,
    rule_to_number,
)
from .errors import (
    BudgetError,
    CapacityError,
    CarevError,
    CheckpointError,
    InvalidArgumentError,
    InvalidStateError,
    RuleNumberOverflowError,
)
from .evolution import (
    DEFAULT_ORACLE_BUDGET,
    brute_force_reversible,
    count_preimages,
    evolve_null,
)
from .nullboundary import (
    DEFAULT_MAX_BUCKETS,
    ReversibilityFunction,
    StrictVerdict,
    StrictWitness,
    count_right_zero,
    initial_node,
    reversibility_function,
    strict_equals_allones,
    strictly_reversible,
)
from .sweep import (
    SweepReport,
    SweepSpec,
    sample_rule_numbers,
    sweep,
    table2_report,
    table5_report,
)

__version__ = "0.1.0"
