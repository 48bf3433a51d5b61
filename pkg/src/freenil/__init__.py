"""Exact computations around free nilpotent quotients of surface groups.

Modules:
  words       free-group words over the surface generators
  magnus      truncated noncommutative power series and the Magnus expansion
  lie         Hall-basis free Lie algebra and word/series conversions
  zlinalg     exact integer linear algebra (Smith normal form and friends)
  filtration  graded bracket maps, kernel ranks, and the rank table
  nilaut      automorphisms of free nilpotent quotients and their filtration
  cylmodel    symbolic homology-cylinder models and their composition law
  suites      named verification suites
  service     HTTP facade (FastAPI)
  cli         command-line client
"""

from .words import Signature, Word, WordError, boundary_word, commutator, parse_word
from .magnus import (
    AtLeast,
    DepthTooSmall,
    TruncatedSeries,
    depth,
    equal_mod,
    expand,
    leading_part,
)
from .lie import (
    HallRegistry,
    LieVector,
    NotLie,
    bracket,
    hall_basis,
    lie_to_series,
    lie_to_word,
    series_to_lie,
    witt_rank,
    word_normal_form,
)
from .filtration import (
    GradedTuple,
    RankTable,
    dk_basis,
    dk_rank,
    h3_rank,
    pk_apply,
    pk_matrix,
    rank_table,
)
from .nilaut import (
    AutStarCertificate,
    NilAut,
    NotAutomorphism,
    NotMember,
    aut_star_H_member,
    aut_star_membership,
    invert,
    realize,
    theta,
)
from .cylmodel import (
    CylModel,
    InadmissibleModel,
    compose,
    derive_eta,
    frame_normalize,
    framing,
    is_zero_framed,
    random_model,
    split_projection_f,
)

__version__ = "1.0.0"
