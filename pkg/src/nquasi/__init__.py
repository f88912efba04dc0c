"""Finite multary quasigroups: Latin hypercubes, their graphs (distance-2 MDS
codes), retracts, isotopy, permutable reducibility and reconstruction through
a maximal irreducible retract."""

__version__ = "0.1.0"

from .core import (
    QPredicate,
    QTable,
    RetractSpec,
    SuperpositionSpec,
    ValidationReport,
    from_codewords,
    from_predicate,
    invert,
    min_distance,
    retract,
    superpose,
    superpose_predicate,
    to_predicate,
    validate,
)
from .decompose import (
    DecompositionTree,
    GroupingDecomposition,
    decomposition_tree,
    is_reducible,
    lemma3_normalize,
    lemma4_agreement,
    try_group,
)
from .errors import ConsistencyError, ParseError, PredicateError, StructureError, TheoremViolation
from .isotopy import IsotopyMap, apply, are_isotopic, find_isotopy, retract_family_isotopy_check
from .kernels import BACKEND
from .theorem import (
    GroupMap,
    TheoremDecomposition,
    TheoremInstance,
    check_two_group_retract,
    corollary_check,
    group_map,
    max_irreducible_retract,
    reconstruct,
)
