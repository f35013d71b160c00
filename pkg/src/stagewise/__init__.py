"""Finite-stage constructions of monotone machines with prescribed
output probabilities.

Everything is exact: measures are dyadic rationals, prefix-free sets are
tries with cached weights, and machines are explicit stage tables.
"""
from .errors import ConstructionError
from .measure_core import ONE, ZERO, Dyadic
from .prefix_sets import AllocationRequest, PrefixFreeSet, kc_allocate, set_measure
from .approximations import (Axiom, CanonicalApproximation, MockCEOperator,
                             MockHaltingSet, build_canonical)
from .reals import DCERealApprox, MonotoneRealApprox
from .machines import (MonotoneMachine, build_padding_machine, build_totality_machine,
                       make_machine_cor34, make_machine_cor36, splice)
from .probability import (ENDS_IN_ZEROS, TOTAL, ClassSpec, ml_test_member,
                          stage_measure, trace)
from .orchestration import make_universal_dce, make_universal_leftce

__version__ = "0.1.0"
