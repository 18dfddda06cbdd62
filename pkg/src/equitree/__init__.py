"""equitree: rank-bounded logical equivalence and tree-representation kernels.

The package decides FO/MSO rank-m equivalence of finite relational
structures, shrinks tree-represented structures (words, trees, nested
words, cographs, n-partite cographs) to small equivalent kernels, runs the
resulting fixed-parameter model-checking pipeline, applies quantifier-free
translation schemes, and produces self-similar substructure chains.
"""

from .budgets import Budgets, DEFAULT_BUDGETS
from .errors import (
    BudgetExceeded,
    CompositionConflict,
    EquitreeError,
    FormatError,
    PreconditionError,
    ValidationError,
    VocabularyMismatch,
)
from .structures import (
    PointedStructure,
    Structure,
    Vocabulary,
    disjoint_sum,
    find_embedding,
    induced_substructure,
    is_embedding,
    isomorphic,
    validate,
    with_point,
)
from .logic import FO, MSO, evaluate, format_formula, parse_formula, rank
from .equivalence import (
    ClassRegistry,
    ef_game_decide,
    equivalent,
    mtype,
    realized_classes,
)
from .trees import Tree, TreeAlphabet, as_structure, leaf, node

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
