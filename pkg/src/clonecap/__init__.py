"""Capacities, complementary channels and degrading maps of qubit cloning channels."""
from .capacity import (
    CapacityReport,
    EntropySpec,
    cloning_capacity_closed_form,
    coherent_information_max,
    covariant_capacity,
    holevo_bruteforce,
    min_output_entropy,
    renyi_entropy,
    von_neumann_entropy,
)
from .channels import (
    ChannelHandle,
    ChoiMatrix,
    CloningIsometry,
    PureQubitInput,
    apply_cloning,
    apply_complement,
    apply_via_choi,
    check_covariance,
    check_intertwining,
    choi_of,
    cloning_channel,
    cloning_isometry,
    complement_channel,
    depolarizing,
    direct_sum_channel,
)
from .degradability import (
    ConjugacyReport,
    DegradingMapAnsatz,
    PptReport,
    build_degrading_map,
    bures_fidelity_2d,
    check_choi_commutation,
    generator_lift,
    ppt_check,
    separable_decomposition,
    uhlmann_fidelity,
    verify_conjugate_degradability,
)
from .linalg import (
    EigenSystem,
    hermitian_eigensystem,
    matrix_sqrt_psd,
    partial_trace,
    partial_transpose,
    tensor_product,
    trace_distance,
)
from .su2 import (
    CgDecomposition,
    IrrepElement,
    Su2Generators,
    cg_projectors,
    expand_in_generator_basis,
    generators,
    irrep_element,
)
from .unruh import (
    UnruhEnsemble,
    direct_sum_moe_check,
    ensemble,
    fock_oracle,
    truncated_unruh_channel,
    unruh_capacity,
)

__version__ = "0.1.0"
