"""Sensor placement on graphs via grouped independent support extraction.

The pipeline: parse a graph, encode failure detection plus a cardinality
bound into CNF with one two-variable group per node, then greedily drop
groups whose variables are functionally defined by the rest, checked with
incremental satisfiability queries.  The surviving groups are the sensors.
"""

from .graph import (Graph, GraphParseError, build_graph, closed_neighborhood,
                    closed_neighborhood_set, parse_graph, parse_graph_file)
from .satcore import (CdclSolver, CnfFormula, ModelCapExceeded, SolveOutcome,
                      SolveStatus, check_model, enumerate_models_projected,
                      make_engine, read_dimacs, solve, write_dimacs)
from .encoder import (EncodedInstance, GroupPartition, VarMap,
                      encode_cardinality, encode_detection, encode_instance)
from .definability import (DefinabilityContext, build_definability_base,
                           padoa_query)
from .gismo import (GismoConfig, GisResult, GroupLog, QueryRecord,
                    VerifyReport, run_gismo, verify_result)
from .oracle import (EnumerationBudgetError, Signature, failure_set_count,
                     find_signature_collision, is_gics, is_gis_bruteforce,
                     min_gics_exhaustive, projected_models, signature)

__version__ = "0.1.0"
