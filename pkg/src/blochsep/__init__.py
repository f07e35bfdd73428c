"""Bloch correlation tensors and tensor-norm separability bounds."""

from .bloch import CorrelationTensor, PurityExpansion, all_tensors, correlation_tensor, purity_expansion, reconstruct
from .bounds import (
    BlockFactor,
    block_factor,
    equal_dims_bound,
    entanglement_measure_bound,
    entanglement_measure,
    pair_factor,
    single_factor,
    multi_factor,
)
from .classifier import SeparabilityReport, ThresholdTable, classify, noise_thresholds, shape_bound
from .errors import BlochSepError, DomainError, ResourceError, ShapeError
from .generators import GeneratorSet, build_generators, decompose_hermitian
from .partitions import (
    Partition,
    PartitionShape,
    assignment_count,
    check_block_constraints,
    enumerate_assignments,
    enumerate_shapes,
    partition_from_blocks,
)
from .states import (
    DimsProfile,
    MultiState,
    StateFamily,
    family_from_spec,
    from_ket,
    maximally_mixed,
    mix,
    partial_trace,
    permute_parties,
    purity,
    state_from_spec,
)

__version__ = "0.1.0"
