"""Extensions, coordinate descent and existential transfer."""

from .descent import (DescentError, DescentResult, LiftResult, VariableInventory, coefficient_frame,
                      descend_equichar, descend_mixed, descent_identity_check, frame_in,
                      lift_identity_check, lift_polynomial_witt, residue_embedding)
from .procedure import (GrowthStep, TransferError, TransferResult, existential_transfer, grow,
                        growth_degrees, identity_hom, inclusion, transfer_equichar)
from .systems import DEFAULT_BUDGET, PolySystem, solve_bruteforce, solve_field_system
from .structure import StructureReport, extension_structure_check
from .examples import AmalgamReport, ExampleReport, amalgam_search, example_1_8
