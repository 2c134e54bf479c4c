"""Exact decision and certification of Sherali-Adams, Lovasz-Schrijver and
lift-and-project emptiness for symmetric 0/1 polytopes."""
from .config import Limits, ResourceLimit, limits, reset_limits, set_limits
from .errors import ConditionAFails, InternalConsistencyError, NotIntegerEmpty
from .perm_group import Permutation, PermGroup
from .polytope import CubeFace, HPolytope, VPolytope
from .sa_hierarchy import SAVector

__all__ = [
    "Limits",
    "ResourceLimit",
    "limits",
    "reset_limits",
    "set_limits",
    "ConditionAFails",
    "InternalConsistencyError",
    "NotIntegerEmpty",
    "Permutation",
    "PermGroup",
    "CubeFace",
    "HPolytope",
    "VPolytope",
    "SAVector",
]
__version__ = "0.1.0"
