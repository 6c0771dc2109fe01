"""Gallager A decoding toolkit for column-weight-three LDPC codes."""

from .analysis import (BudgetExceededError, FailureConfiguration, BadCountBoundCheck,
                       BadCountSweepResult, MinSearchResult, SweepSpec,
                       VerificationReport, check_bad_count_bounds,
                       exhaustive_verify, extract_failure_configuration,
                       find_min_uncorrectable, bad_count_bound_sweep,
                       shortest_cycles)
from .alist import AlistError, from_alist, load_alist, save_alist, to_alist
from .construct import (ConstructionSpec, EmbedResult, InfeasibleSpecError,
                        PegResult, embed_weight4_codeword, peg_construct)
from .decoder import (BatchDecoder, DecodeOutcome, DecoderConfig, MessageState,
                      check_update, decode, decode_with_trace, estimate,
                      message_trace, pattern_from_support, syndrome,
                      trace_records, variable_update)
from .simulate import (PointResult, SimResult, SimSpec, fit_slope,
                       frame_seeds, simulate)
from .graph import (CHK, VAR, DirectedEdge, GraphError, NeighborhoodStats,
                    NeighborhoodTree, TannerGraph, count_bad,
                    directed_neighborhood, girth, node_neighborhood,
                    validate_column_weight)

__version__ = "0.1.0"
