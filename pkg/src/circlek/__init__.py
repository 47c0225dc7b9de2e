"""Exact rational nonstable K-groups of limits of circle algebras.

Circle algebras are modelled by their summand sizes, homomorphisms by
signature matrices (multiplicity and total winding per block), and the
degree-m invariants by exact rational matrices whose colimit dimensions
are computed with integer arithmetic throughout.  Stability checkers
decide slow dimension growth and rational K-stability, which coincide
with K-stability for these systems.
"""

from .algebras import (
    CircleAlgebra,
    FiniteDimAlgebra,
    amplify,
    min_dim,
    quotient_at_one,
    split_by_size,
)
from .colim import ColimitReport, colim_dim, fm_of_system
from .docio import (
    DocumentError,
    HomGrid,
    emit_system,
    parse_hom,
    parse_system,
    parse_system_document,
)
from .fm import FmSpace, fm_circle, fm_finite_dim, fm_induced
from .homs import (
    BlockError,
    DiagonalBlock,
    SignatureMatrix,
    SignaturePair,
    TypeABlock,
    compose,
    identity_signature,
    reduce_to_diagonal,
    signature_of,
    validate,
)
from .paths import (
    CirclePath,
    PathError,
    PowerPath,
    SampledPath,
    lift_increment,
    winding_number,
)
from .ratmat import RatMatrix, rank
from .realize import GridFunction, RealizeError, numeric_signature, realize
from .stability import (
    Bounds,
    MultiplicityDigraph,
    StabilityReport,
    StabilityContradiction,
    Verdict,
    check_rational_k_stability,
    check_sdg,
    fm_of_af_system,
    k_stability_report,
    multiplicity_digraph,
    orphan_eliminate,
    quotient_system,
)
from .systems import (
    AFSystem,
    InductiveSystem,
    PeriodicTail,
    SystemError,
    amplify_system,
    generate_prefix,
)

__version__ = "0.1.0"

__all__ = [
    "CircleAlgebra",
    "FiniteDimAlgebra",
    "quotient_at_one",
    "amplify",
    "min_dim",
    "split_by_size",
    "PowerPath",
    "SampledPath",
    "CirclePath",
    "PathError",
    "winding_number",
    "lift_increment",
    "TypeABlock",
    "DiagonalBlock",
    "SignaturePair",
    "SignatureMatrix",
    "BlockError",
    "reduce_to_diagonal",
    "signature_of",
    "compose",
    "identity_signature",
    "validate",
    "GridFunction",
    "RealizeError",
    "realize",
    "numeric_signature",
    "RatMatrix",
    "rank",
    "FmSpace",
    "fm_finite_dim",
    "fm_circle",
    "fm_induced",
    "ColimitReport",
    "colim_dim",
    "fm_of_system",
    "InductiveSystem",
    "PeriodicTail",
    "AFSystem",
    "SystemError",
    "generate_prefix",
    "amplify_system",
    "Verdict",
    "Bounds",
    "StabilityReport",
    "MultiplicityDigraph",
    "StabilityContradiction",
    "orphan_eliminate",
    "check_sdg",
    "check_rational_k_stability",
    "k_stability_report",
    "quotient_system",
    "fm_of_af_system",
    "multiplicity_digraph",
    "DocumentError",
    "HomGrid",
    "parse_system",
    "parse_system_document",
    "emit_system",
    "parse_hom",
]
