"""sl2lab: a desk-scale workbench for SL2 over small finite commutative rings.

Exact, exhaustively verified computations: ring/ideal arithmetic via CRT into
chain local rings, full SL2 enumeration, conjugation-invariant word norms and
the Delta_k invariants, normal-subgroup sandwich checks, abelianization
structure, and the splitting invariants of real quadratic integer rings.
"""

from .config import Config, load_config
from .errors import (CapExceeded, LevelZeroError, ManyUnitsFailedError,
                     NotAUnitError, ParseError, Sl2LabError)
from .finring import (AdditiveSubgroup, ChainLocalRing, FiniteRing, Ideal,
                      additive_closure, has_many_units, has_stable_range_one,
                      ideal_from_generators, maximal_ideals, parse_ring_spec,
                      quotient_ring, units, vn2)
from .groups import (AbelianInvariants, CosetGroup, GroupHom, SL2Group,
                     Subgroup, abelianization, derived_subgroup, enumerate_sl2,
                     is_perfect, normal_closure, quotient_group, reduction_hom,
                     subgroup_closure)
from .norms import (BoundProbe, DeltaReport, GenerationVerdict,
                    GeneratorConstruction, NormProfile, bound_search,
                    construct_generators, delta_k, level_sum,
                    norm_and_diameter, normally_generates, pi_set)
from .quadfields import (DeltaVerdict, SplittingReport, delta_verdict,
                         scan_range, splitting_of_2, splitting_of_3, v_profile)
from .sandwich import (AdditiveHom, SandwichReport, UnitClasses, G_of_N,
                       U_of_N, f3_hom, hq_hom, in_G_JU, in_G_P, is_radix,
                       q_hom, rho_subgroup, sandwich_check, z4_hom)
from .sl2 import (Mat2, comm, conj, level_ideal, parse_matrix,
                  parse_matrix_list, rho_family, selfrep_shift_check)

__version__ = "0.1.0"
