"""Exact k-Markov numbers, computed both from the Vieta tree and from
weighted fence posets attached to lattice arcs."""

from .contfrac import cf_eval, cf_numerator, cf_skein_check
from .errors import InvariantViolation, KMarkovError, UnsupportedFeature, UsageError
from .lattice import (
    Crossing,
    CrossingWord,
    PolylineArc,
    arc_length,
    crossing_word_polyline,
    crossing_word_segment,
    poset_from_word,
)
from .markov import (
    MarkovTriple,
    compare_orders,
    farey_node,
    farey_path,
    k_markov_check,
    markov_distance,
    markov_number,
    tree_node,
    verify_aigner,
    verify_ptolemy,
    verify_recurrences,
    vieta_step,
)
from .poset import (
    FencePoset,
    extend_poset,
    fence,
    ideal_count,
    ideals_enumerate,
    induced_interval,
    poset_from_shape,
    reverse_poset,
    shape_of,
    weighted_ideal_sum,
)
from .skein import (
    CrossingOverlap,
    Resolution,
    find_crossing_overlaps,
    resolve_type0,
    resolve_type1,
    resolve_type2,
    verify_resolution_identity,
)

__version__ = "0.1.0"
