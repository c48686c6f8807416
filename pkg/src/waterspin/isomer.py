"""Proton-spin states of H2O: gas and liquid mixtures, para/ortho accounting,
adsorption entanglement, the gas-to-liquid transition and NMR observables."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import channels
from .channels import WernerParams, werner_state
from .qcore import (
    I2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DensityMatrix,
    Observable,
    PureState,
    State,
    _density,
    basis_ket,
    bell_psi,
    density_from_ket,
    eigvals_hermitian,
    expectation,
    fidelity_with_ket,
    partial_trace,
    partial_transpose,
    purify,
    purity,
    singlet,
    von_neumann_entropy,
)

ENTANGLEMENT_TOL = 1e-10
PARA_FLOOR = 1e-12


@dataclass(frozen=True)
class GasMixParams:
    """Weight p of the singlet (para) portion of the gas-phase mixture."""

    p: float

    def __post_init__(self):
        p = float(self.p)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"gas singlet weight must lie in [0, 1], got {self.p!r}")
        object.__setattr__(self, "p", p)


def _gas(params) -> GasMixParams:
    return params if isinstance(params, GasMixParams) else GasMixParams(params)


@dataclass(frozen=True)
class IsomerReport:
    para_fraction: float
    ortho_fraction: float
    ortho_para_ratio: float  # math.inf when the state has no para weight
    werner_p_prime: Optional[float]
    negativity: float
    entangled: bool
    magnetization_xyz: tuple[float, float, float]
    purity: float
    entropy_bits: float


def triplet_sum() -> np.ndarray:
    """Unnormalized |v> = |Psi+> + |00> + |11>, with <v|v> = 3."""
    return bell_psi("+").amplitudes + basis_ket(4, 0).amplitudes + basis_ket(4, 3).amplitudes


def rho_gas(params: GasMixParams | float) -> DensityMatrix:
    """p |Psi-><Psi-| + (1-p)/3 |v><v|, the triplet portion kept coherent."""
    p = _gas(params).p
    v = triplet_sum()
    s = density_from_ket(singlet()).matrix
    return DensityMatrix(p * s + (1.0 - p) / 3.0 * np.outer(v, v.conj()))


def rho_gas_mixed_variant(params: GasMixParams | float) -> DensityMatrix:
    """Same weights as :func:`rho_gas` but an incoherent, uniform triplet mixture."""
    p = _gas(params).p
    triplet = sum(
        density_from_ket(k).matrix for k in (bell_psi("+"), basis_ket(4, 0), basis_ket(4, 3))
    )
    s = density_from_ket(singlet()).matrix
    return DensityMatrix(p * s + (1.0 - p) / 3.0 * triplet)


def rho_liq(w: WernerParams | float) -> DensityMatrix:
    """Two-qubit Werner state p'|Psi-><Psi-| + (1 - p') I/4."""
    return werner_state(w)


def para_fraction(rho: State) -> float:
    return fidelity_with_ket(rho, singlet())


def ortho_para_ratio(rho: State) -> float:
    para = para_fraction(rho)
    if para <= PARA_FLOOR:
        return math.inf
    return (1.0 - para) / para


def adsorption_event(target: GasMixParams | float) -> tuple[PureState, DensityMatrix]:
    """Joint molecule-surface pure state and the mixed state of the freed molecule.

    The surface partner is the second 4-dim factor of the returned 16-dim ket.
    """
    joint = purify(rho_gas(target))
    reduced = partial_trace(joint, (4, 4), keep="A")
    return joint, reduced


def gas_to_liquid(
    rho: State,
    method: str = "exact",
    mc_samples: int = 100_000,
    seed: int = 0,
    damping: float = 1.0,
    workers: int = 1,
) -> tuple[WernerParams, DensityMatrix]:
    """Collective twirl of a gas-phase state followed by optional singlet damping."""
    rho = _density(rho)
    if not 0.0 <= damping <= 1.0:
        raise ValueError(f"damping must lie in [0, 1], got {damping!r}")
    if method == "exact":
        w, _ = channels.werner_twirl_exact(rho)
        w = channels.singlet_damping(w, damping)
        return w, werner_state(w)
    if method == "mc":
        if mc_samples < 1:
            raise ValueError("mc_samples must be positive")
        twirled = channels.werner_twirl_mc(rho, mc_samples, seed, workers=workers)
        w = channels.singlet_damping((4.0 * para_fraction(twirled) - 1.0) / 3.0, damping)
        m = damping * twirled.matrix + (1.0 - damping) * np.eye(4) / 4.0
        return w, DensityMatrix(m)
    raise ValueError(f"unknown method {method!r}; expected 'exact' or 'mc'")


def negativity(rho: State) -> float:
    """Sum of |negative eigenvalues| of the partial transpose on the second spin."""
    lam = eigvals_hermitian(partial_transpose(rho, (2, 2)))
    return float(-np.sum(lam[lam < 0.0]))


def is_entangled(rho: State) -> bool:
    # PPT is necessary and sufficient for two qubits
    return negativity(rho) > ENTANGLEMENT_TOL


_PAULI_BY_AXIS = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


def collective_spin(axis: str) -> Observable:
    """(sigma (x) I + I (x) sigma)/2 in units of hbar."""
    try:
        s = _PAULI_BY_AXIS[axis.lower()]
    except (KeyError, AttributeError):
        raise ValueError(f"axis must be one of x, y, z; got {axis!r}") from None
    return Observable((np.kron(s, I2) + np.kron(I2, s)) / 2.0)


def magnetization(rho: State, axis: str) -> float:
    return expectation(rho, collective_spin(axis))


def report(rho: State, w: WernerParams | float | None = None) -> IsomerReport:
    rho = _density(rho)
    para = para_fraction(rho)
    neg = negativity(rho)
    if w is not None and not isinstance(w, WernerParams):
        w = WernerParams(w)
    return IsomerReport(
        para_fraction=para,
        ortho_fraction=1.0 - para,
        ortho_para_ratio=ortho_para_ratio(rho),
        werner_p_prime=None if w is None else w.p_prime,
        negativity=neg,
        entangled=neg > ENTANGLEMENT_TOL,
        magnetization_xyz=tuple(magnetization(rho, a) for a in "xyz"),
        purity=purity(rho),
        entropy_bits=von_neumann_entropy(rho),
    )


__all__ = [
    "GasMixParams",
    "IsomerReport",
    "WernerParams",
    "adsorption_event",
    "collective_spin",
    "gas_to_liquid",
    "is_entangled",
    "magnetization",
    "negativity",
    "ortho_para_ratio",
    "para_fraction",
    "report",
    "rho_gas",
    "rho_gas_mixed_variant",
    "rho_liq",
    "triplet_sum",
]
