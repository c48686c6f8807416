"""Proton-spin isomer states of water as two-qubit density matrices."""
from .channels import (
    KrausChannel,
    UnitarySampler,
    WernerParams,
    apply,
    block_dephasing,
    collective_unitary,
    depolarizing,
    haar_su2,
    singlet_damping,
    verify_cptp,
    werner_twirl_exact,
    werner_twirl_mc,
)
from .isomer import (
    GasMixParams,
    IsomerReport,
    adsorption_event,
    collective_spin,
    gas_to_liquid,
    is_entangled,
    magnetization,
    negativity,
    ortho_para_ratio,
    para_fraction,
    report,
    rho_gas,
    rho_gas_mixed_variant,
    rho_liq,
)
from .qcore import (
    BipartiteSplit,
    DensityMatrix,
    Observable,
    PureState,
    ValidationError,
    basis_ket,
    bell_psi,
    density_from_ket,
    eigvals_hermitian,
    expectation,
    fidelity_with_ket,
    gas_pure_state,
    partial_trace,
    purify,
    purity,
    tensor,
    trace_distance,
    von_neumann_entropy,
)

__version__ = "0.1.0"
