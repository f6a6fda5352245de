"""
Numerical defaults shared by all modules.

Operations take explicit keyword arguments; when they are omitted the values of ``DEFAULT_TOLERANCES`` are used.
"""

from __future__ import annotations

from dataclasses import dataclass

TOLERANCE_ENV_VAR = "EXP_PERIODS_TOL"
"""Environment variable read by the command line interface to override the default quadrature tolerance."""


@dataclass(frozen=True)
class Tolerances:
    """
    The collection of thresholds used throughout the package.

    :attr quadrature: (float): Default absolute error target of a single period.
    :attr max_subdivisions: (int): Maximum number of panels the adaptive rule may create for one path piece.
    :attr rank_factor: (float): Relative singular value threshold used for numerical rank decisions.
    :attr parallel_angle: (float): Largest angle (radians) between two kernel vectors that still counts as parallel.
    :attr class_norm: (float): Relative norm below which a de Rham class counts as zero.
    :attr reduction_guard: (float): Relative residual above which a reduction certificate is rejected.
    :attr residue_block: (int): Number of consecutive series terms grouped into one block for tail estimates.
    :attr residue_span: (int): Number of trailing blocks inspected by the decay heuristic.
    :attr point_merge: (float): Distance below which two numerically computed points of the sphere are identified.
    """

    quadrature: float = 1e-10
    max_subdivisions: int = 4000
    rank_factor: float = 1e-8
    parallel_angle: float = 1e-6
    class_norm: float = 1e-8
    reduction_guard: float = 1e-9
    residue_block: int = 4
    residue_span: int = 3
    point_merge: float = 1e-6

    def __post_init__(self) -> None:
        assert self.quadrature > 0, f"The quadrature tolerance must be positive, got {self.quadrature}"
        assert self.max_subdivisions >= 1, f"At least one panel is needed, got {self.max_subdivisions}"
        assert self.residue_block >= 1, f"A residue block has at least one term, got {self.residue_block}"
        assert self.residue_span >= 2, f"The decay heuristic compares at least two blocks, got {self.residue_span}"


DEFAULT_TOLERANCES = Tolerances()
