"""Exact computations with transfer systems and bi-incomplete Tambara functors.

The public surface re-exports the main types; submodules stay importable
directly for the less common entry points.
"""

from .errors import (
    DomainError,
    GatingError,
    ResourceError,
    SpecError,
    TransferkitError,
)
from .groups import (
    Group,
    Subgroup,
    SubgroupLattice,
    builtin_group,
    builtin_lattice,
    group_from_generators,
)

__all__ = [
    "DomainError",
    "GatingError",
    "Group",
    "ResourceError",
    "SpecError",
    "Subgroup",
    "SubgroupLattice",
    "TransferkitError",
    "builtin_group",
    "builtin_lattice",
    "group_from_generators",
]

__version__ = "0.1.0"
