"""Exact word metrics and dead-end depth in lamplighter-style groups.

The package has four layers: GF(2) lamp algebra (``lamps``), canonical
group elements (``groups``), the breadth-first metric engine
(``metric``), and the diagonal-path machinery with witness words and
escape moves (``paths``).  ``verify`` bundles the desk-scale checks of
the headline distance and depth facts; ``cli`` exposes everything as a
command line.
"""

from .lamps import (
    Gf2System,
    LaurentPolyZ2,
    LocalizedLamp,
    NotDivisibleError,
    div_onepx,
    gf2_solve,
    loc_add,
    loc_canonicalize,
    loc_scale,
    mul_onepx,
    pascal_row,
    poly_add,
    poly_shift,
)
from .groups import (
    GROUPS,
    GElem,
    GenSet,
    GroupMismatchError,
    HElem,
    IllegalLetterError,
    KElem,
    LLElem,
    NonPolynomialLampsError,
    ZElem,
    act_on_state,
    builtin_genset,
    button_effect,
    genset_from_json,
    in_Dn,
    in_Hn,
    in_Pn,
    in_Tn,
    retract_H_to_LL,
    retract_K_to_G,
    special_element,
    word_inverse,
)
from .metric import (
    AtLeast,
    Beyond,
    DistMap,
    ElementLimitExceeded,
    Exact,
    ball,
    cached_ball,
    depth,
    distance,
    eval_tokens,
    geodesic_word,
    tokens_to_word,
    verify_region_claim,
)
from .paths import (
    DecoratedBPath,
    DecoratedDPath,
    NoEscapeError,
    NotWordlikeError,
    PathNotWordlikeError,
    WitnessPath,
    WitnessPreconditionError,
    UnsupportedNegativePError,
    bpath_from_word,
    d_C_analytic,
    d_D_analytic,
    dpath_from_word,
    dpath_min_length,
    escape_move,
    normalize_decorated,
    witness_H,
    witness_K,
    word_from_bpath,
    word_from_dpath,
)
from .verify import SUITES, run_suite

__version__ = "0.1.0"
