"""Exact rearrangement-invariant function spaces on finite-partition measure spaces."""

from symspace.errors import (
    IndeterminateForm,
    InfiniteBlock,
    InvalidConstant,
    NegativeValues,
    NoConvergence,
    NormInfinite,
    NotAChain,
    NotAMember,
    QuasiNormSpec,
    SpaceMismatch,
    SymspaceError,
    TailPresent,
    WeightNotIntegrable,
)
from symspace.measure import (
    INF,
    MeasureSpace,
    PartitionMap,
    StepFunction,
    canonicalize,
    conditional_expectation,
    delta0_metric,
    integrate,
    pointwise,
)
from symspace.rearrange import (
    DecreasingProfile,
    ThresholdProfile,
    TransportMap,
    cutoff_sequences,
    distribution,
    distribution_of_profile,
    equimeasurable,
    rearrangement,
    rearrangement_from_distribution,
    transport_map,
    verify_transport,
    xi_infinity,
)
from symspace.norms import (
    NormSpec,
    NormValue,
    aoki_rolewicz_exponent,
    decompose_l1_linf,
    embedding_check,
    fundamental_function,
    norm,
    norm_of_profile,
    p_subadditivity_check,
)
from symspace.duality import (
    DualNormResult,
    associate_norm,
    dual_norm_oracle,
    fatou_check,
    hl_pairing,
    property_C_gap,
    second_associate_norm,
    third_associate_norm,
)
from symspace.stone import (
    FiniteBooleanAlgebra,
    Ultrafilter,
    WeightedSpace,
    ZetaPartition,
    factor_space,
    generate_algebra,
    point_ultrafilter,
    standardize,
    stone_map,
    ultrafilters,
    zeta_partition,
)

__version__ = "0.1.0"
