"""Finite models, semantics, simulations and the entailment oracle."""

from .core import *  # noqa: F401,F403
from .core import __all__ as _core_all
from .core import enumerate_frames  # noqa: F401
from .entailment import EntailmentResult, entails, k_tree_bound
from .simulation import SimulationRelation, find_sigma_simulation, is_bisimilar

__all__ = list(_core_all) + [
    "enumerate_frames", "EntailmentResult", "entails", "k_tree_bound",
    "SimulationRelation", "find_sigma_simulation", "is_bisimilar",
]
