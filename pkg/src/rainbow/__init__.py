"""Rainbow matchings in properly edge-colored multigraphs.

Build large rainbow matchings with the layered augmenting-path procedure,
check them against an exact branch-and-bound solver, and generate the
extremal instances that show the bounds are tight.
"""

from rainbow.core import (
    Edge,
    Instance,
    Kind,
    ParseError,
    RainbowError,
    RainbowMatching,
    Side,
    ValidationReport,
    VertexRef,
    Violation,
    greedy_rainbow,
    guaranteed_k,
    is_rainbow_matching,
    parse_instance,
    parse_matching,
    serialize_instance,
    serialize_matching,
    theorem_bound,
    validate_instance,
)
from rainbow.constructive import (
    AugmentingPath,
    Augmented,
    Exhausted,
    InternalContradiction,
    InvalidState,
    Layer,
    LayerState,
    NotBipartite,
    SearchResult,
    augment_once,
    check_counting_certificate,
    find_rainbow,
)
from rainbow.exact import (
    SolveResult,
    SolverConfig,
    TooLarge,
    brute_force_max_rainbow,
    has_rainbow_of_size,
    max_rainbow,
)
from rainbow.generators import (
    RandomModel,
    cyclic_factorization,
    drisko_instance,
    random_instance,
    remark_general_instance,
)

__version__ = "0.1.0"
