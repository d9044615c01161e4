"""Bundle-based single-source shortest paths on undirected non-negative graphs.

The solver keeps only a sampled vertex subset R in its priority queue and
finalizes whole bundles of vertices per extraction, with every addition and
comparison of weight-derived values routed through a cost meter.  Includes
degree-reduction transforms, a reference Dijkstra oracle, deterministic graph
generators, and a verification/benchmark CLI.
"""

from .graph import (GenSpec, Graph, GraphSummary, Infeasible, ParseError,
                    OutOfRange, BadWeight, build_graph, generate, parse_graph,
                    validate, write_graph)
from .metering import CostMeter, NullMeter, UNREACHED
from .pq import AddressablePQ, DuplicateKey, Empty, KeyIncrease, NotFound
from .transform import (BadCap, InternalInconsistency, TransformedGraph,
                        constant_degree_transform, degree_cap_transform,
                        identity_transform, lift_distances)
from .bundles import (BadR, BundleStructure, KChoice, TruncationOutcome,
                      bundle_stats, choose_k, construct_from_R,
                      construct_improved, construct_simple, sample_R1,
                      threshold_for, truncated_dijkstra)
from .solver import (BadBundleStructure, InvariantViolation, RunTrace,
                     SolveConfig, SolveResult, Violation, bundle_dijkstra,
                     check_run_invariants, dijkstra_reference,
                     distance_checksum, format_distance, solve)
from .report import RunReport

__version__ = "0.1.0"
