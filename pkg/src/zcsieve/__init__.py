"""Period/index invariants of curves over Q and a Mordell-Weil sieve with
machine-checkable certificates."""

__version__ = "0.1.0"

from .arith import (  # noqa: F401
    CosetLattice,
    ExtField,
    FieldElement,
    PrimeField,
    REAL_PLACE,
    hilbert_symbol,
    intersect_cosets,
    legendre,
    sqrt_mod,
)
from .curves import (  # noqa: F401
    Conic,
    EllipticCurve,
    HyperellipticCurve,
    PlaneCubic,
    ReductionInfo,
    count_points,
    curve_from_dict,
    curve_to_dict,
    discriminant,
    enumerate_points,
    reduction_type,
)
from .jacobian import (  # noqa: F401
    ECPoint,
    MordellWeilBasis,
    MumfordDivisor,
    cantor_add,
    ec_add,
    jacobian_order,
    quotient_map,
    reduce_point,
)
from .local import (  # noqa: F401
    everywhere_locally_soluble,
    local_index,
    qp_soluble,
    real_soluble,
)
from .sieve import (  # noqa: F401
    EmbeddingBase,
    SieveConfig,
    admissible_cosets,
    image_set,
    sieve_run,
    verify_certificate,
)
