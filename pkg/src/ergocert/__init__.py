"""Analysis of backward products of row-stochastic matrices.

Validates matrix sequences, checks the four convergence conditions
(entry lower bound, eventual positivity, complete reducibility, and a
common sink-free aperiodic spanning pattern), and produces explicit
contraction certificates and disagreement trajectories.
"""

from .convergence import (
    ColumnOnsets,
    ConvergenceCertificate,
    ProductState,
    SupportProfile,
    ToleranceRun,
    consensus_row,
    contraction_certificate,
    disagreement_trajectory,
    find_saturation_K,
    iter_products,
    partial_product,
    run_to_tolerance,
    saturation_floor,
    support_onsets,
    support_profile,
)
from .digraph import (
    AperiodicityReport,
    Digraph,
    SccPartition,
    complete_digraph,
    exact_exponent,
    intersection,
    is_aperiodic,
    is_completely_reducible_pattern,
    is_subgraph,
    scc_period,
    sinks,
    strongly_connected_components,
    time_varying_walk_exists,
    wielandt_bound,
    wielandt_graph,
)
from .errors import (
    CertificationRefused,
    ContractViolation,
    DimensionError,
    NegativityError,
    StochasticityError,
)
from .generate import PRESETS, generate_sequence
from .hypotheses import (
    CoreSearch,
    HypothesisReport,
    MatrixSequence,
    analyze,
    check_complete_reducibility,
    check_eventual_positivity,
    find_aperiodic_core,
    search_aperiodic_core,
)
from .seqfile import (
    SequenceFile,
    SequenceFileError,
    format_sequence,
    parse_sequence_text,
    read_sequence_file,
    write_sequence_file,
)
from .stochastic import (
    StochasticMatrix,
    apply,
    digraph_of,
    identity_matrix,
    matrix_seminorm,
    min_positive_entry,
    multiply,
    validate_stochastic,
    vector_seminorm,
)

__version__ = "0.1.0"
