"""Set gradings on so(2n) built from Steiner systems S(2,4,n).

Exact integer arithmetic throughout: lattices and Smith forms, the D_n root
system, the matrix Lie algebra, designs and difference families, gradings,
and the universal group of a set grading.
"""

from .designs import Design, develop_difference_family, pg2_f3, search_base_blocks, validate
from .errors import InputError, PreconditionError
from .gradings import (
    SetGrading,
    grading_from_design,
    grading_from_subgroup,
    verify_group_grading,
    verify_set_grading,
)
from .unigroup import realizability_verdict

__all__ = [
    "Design",
    "InputError",
    "PreconditionError",
    "SetGrading",
    "develop_difference_family",
    "grading_from_design",
    "grading_from_subgroup",
    "pg2_f3",
    "realizability_verdict",
    "search_base_blocks",
    "validate",
    "verify_group_grading",
    "verify_set_grading",
]
