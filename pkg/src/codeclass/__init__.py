"""Classification of linear codes over small prime fields up to monomial equivalence."""
from .gf import FieldSpec, GFVec, add_scaled, scalar_multiples, weight
from .linear_code import LinearCode, WeightEnumerator, systematize
from .canon import build_digraph, canonical_cert, dedup, equivalent
from .extend import ExtensionTask, enumerate_children, extend_matrix, normalize_b
from .covrad import CoveringQuery, covering_radius, covers_at_least
from .db import CodeDB, verify_db
from .journal import RunJournal
from .bounds import BoundsFact, derive_bounds

__version__ = "0.1.0"
