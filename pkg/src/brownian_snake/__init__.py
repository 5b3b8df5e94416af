"""Discrete Brownian snakes, their excursions above the minimum, and Monte
Carlo checks of the associated exact laws."""
from ._rng import RandomStream, RngState
from .errors import ArgumentError, MalformedInputError, SamplingError
from .tree_core import (DiscreteTree, FinitePath, TreeLikePath, build_discrete_tree,
                        lca_time, pseudo_distance, treelike_to_snake_path)
from .transforms import (ReflectedPair, assign_signs, reflect_min, reroot, scale,
                         translate, truncate)
from .sampler import Sampler, SamplerOptions, SamplingTarget, TargetKind, sample
from .excursions import ExcursionRecord, extract_excursion, find_debuts, first_excursion
from .exit_measures import (ExitProfile, estimate_boundary_size, estimate_exit_mass,
                            exit_profile)
from .csbp_levy import (CSBPPath, LevyPath, lamperti_csbp_from_levy, lamperti_levy_from_csbp,
                        sample_levy)

__version__ = "0.1.0"

__all__ = [
    "ArgumentError", "CSBPPath", "DiscreteTree", "ExcursionRecord", "ExitProfile",
    "FinitePath", "LevyPath", "MalformedInputError", "RandomStream", "ReflectedPair",
    "RngState", "Sampler", "SamplerOptions", "SamplingError", "SamplingTarget", "TargetKind",
    "TreeLikePath", "assign_signs", "build_discrete_tree", "estimate_boundary_size",
    "estimate_exit_mass", "exit_profile", "extract_excursion", "find_debuts",
    "first_excursion", "lamperti_csbp_from_levy", "lamperti_levy_from_csbp", "lca_time",
    "pseudo_distance", "reflect_min", "reroot", "sample", "sample_levy", "scale",
    "translate", "treelike_to_snake_path", "truncate",
]
