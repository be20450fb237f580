from .bvp import banded_operator, manufactured_error, solve_banded_bvp, solve_linear_bvp
from .grid import Grid, SampledFunction, WaveProfile
from .residual import discrete_residual, residual_arrays

__all__ = [
    "Grid",
    "SampledFunction",
    "WaveProfile",
    "banded_operator",
    "discrete_residual",
    "manufactured_error",
    "residual_arrays",
    "solve_banded_bvp",
    "solve_linear_bvp",
]
