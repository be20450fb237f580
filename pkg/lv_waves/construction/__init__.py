from .iteration import IterationOptions, IterationTrace, monotone_iterate
from .pair import (
    UpperLowerReport,
    OrderedPair,
    UpperLowerConfig,
    build_pair,
    check_upper_lower_inequalities,
    choose_l,
    find_shift_nu,
)

__all__ = [
    "UpperLowerReport",
    "IterationOptions",
    "IterationTrace",
    "OrderedPair",
    "UpperLowerConfig",
    "build_pair",
    "check_upper_lower_inequalities",
    "choose_l",
    "find_shift_nu",
    "monotone_iterate",
]
