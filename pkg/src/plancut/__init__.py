"""Sparsest cut on planar graphs, end to end.

The pieces, in pipeline order: embedded graphs and their duals
(:mod:`.planar`), instance normalization (:mod:`.reductions`),
low-diameter ball carving (:mod:`.ldd`) feeding the hierarchical
clustering tree (:mod:`.ndhc`), profile enumeration (:mod:`.profiles`),
the lifted linear program (:mod:`.lp`), top-down rounding and the
driver (:mod:`.rounding`).  Brute force lives in :mod:`.oracle`, the
patching harness in :mod:`.patch_verify`, and :mod:`.cli` wraps it all
for the shell.
"""

from __future__ import annotations

from .errors import PlancutError
from .families import (
    cycle_graph,
    duality_fixture_set,
    grid_graph,
    k4,
    stellated_pair,
    theta_graph,
    wheel_graph,
    with_demands,
)
from .instances import generate_instance, read_instance, write_instance
from .ldd import ldd
from .lp import alpha_grid, build_lp, solve_lp
from .ndhc import NDHC, Caps
from .oracle import all_simple_cycles, brute_force_sparsest
from .patch_verify import patch, run_virtual
from .planar import (
    CutResult,
    DualGraph,
    EmbeddedPlanarGraph,
    cut_result,
    simplify_cut,
    sparsity,
)
from .profiles import all_profiles
from .reductions import normalize
from .rounding import PipelineConfig, PipelineResult, pipeline, round_topdown
from .suites import run_suite

__version__ = "0.1.0"

__all__ = [
    "PlancutError",
    "EmbeddedPlanarGraph",
    "DualGraph",
    "CutResult",
    "cut_result",
    "simplify_cut",
    "sparsity",
    "cycle_graph",
    "grid_graph",
    "wheel_graph",
    "theta_graph",
    "k4",
    "stellated_pair",
    "with_demands",
    "duality_fixture_set",
    "generate_instance",
    "read_instance",
    "write_instance",
    "normalize",
    "ldd",
    "NDHC",
    "Caps",
    "all_profiles",
    "all_simple_cycles",
    "brute_force_sparsest",
    "alpha_grid",
    "build_lp",
    "solve_lp",
    "patch",
    "run_virtual",
    "PipelineConfig",
    "PipelineResult",
    "pipeline",
    "round_topdown",
    "run_suite",
    "__version__",
]
