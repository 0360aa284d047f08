"""Randomised, fully re-verified constructions of induced subdivisions."""

from .lemmas import cleaning_step, unbalanced_step
from .main import main_theorem
from .params import DESK, PAPER, PROFILES, MaderParameters, Profile, corollary_parameters, mader_parameters, resolve_profile
from .robust import (
    BranchWitness,
    PathSystem,
    assemble_subdivision,
    branch_witnesses,
    build_path_system,
    check_witness,
    core_with_retained_degrees,
    induced_mader,
    sample_aux_graph,
    separated_roots,
)
from .trace import DuplicateAuxEdge, PipelineResult, PipelineTrace, PreconditionError

__all__ = [
    "BranchWitness", "DESK", "DuplicateAuxEdge", "MaderParameters", "PAPER", "PROFILES", "PathSystem",
    "PipelineResult", "PipelineTrace", "PreconditionError", "Profile", "assemble_subdivision",
    "branch_witnesses", "build_path_system", "check_witness", "cleaning_step", "core_with_retained_degrees",
    "corollary_parameters", "induced_mader", "mader_parameters", "main_theorem", "resolve_profile",
    "sample_aux_graph", "separated_roots", "unbalanced_step",
]
