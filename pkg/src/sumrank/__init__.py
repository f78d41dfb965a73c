"""Sum-rank metric codes, their geometric systems, linear sets and exact predictors."""

__version__ = "0.1.0"

from .errors import (CapExceeded, DegenerateCodeError, FieldError, FormatError,  # noqa: E402
                     InvariantViolation, PreconditionError, SumRankError)
from .gf import (ExpansionBasis, FieldElement, FieldTower, arith, build_tower, expand,  # noqa: E402
                 reconstruct, tower_for)
from .subspace import (FqSubspace, dual_weight_identity_check, fqm_line, join, meet,  # noqa: E402
                       perp_prime, rank_q, span)
from .code import (AnalysisReport, BlockShape, Codeword, SumRankCode, apply_isometry,  # noqa: E402
                   check_constant_rank_list_structure, classify_flags, is_msrd, min_distance,
                   projection, rank_list, rank_profile, singleton_defect, support, weight)
from .geometry import (LinearSet, System, blocking_set_check, classify_lines,  # noqa: E402
                       code_from_system, geometric_dual, linear_set, msrd_check,
                       one_weight_msrd_check, system_from_code, weight_via_hyperplanes)
from .constructions import (block_simplex, dim2_point_partition, dim2_profile,  # noqa: E402
                            dual_profile, repeat_code, simplex_rank)
from .analysis import (dim3_bounds_check, dim3_predict, exhaustive_search,  # noqa: E402
                       m2_nonexistence, profile_identity_check, q2_nonexistence)
