"""Dense complex linear algebra for small two-spin Hilbert spaces.

Basis ordering is fixed as |00>, |01>, |10>, |11>: the first tensor factor
(proton 1) is the slowest-varying index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

TOL = 1e-10
MAX_DIM = 16

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


class ValidationError(ValueError):
    """A value violates a state/channel invariant (Hermiticity, trace, PSD, norm)."""


def _as_complex_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return a


def _frozen(a: np.ndarray) -> np.ndarray:
    a = a.copy()
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized ket. ``amplitudes`` is a read-only complex vector."""

    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if v.size == 0 or not np.all(np.isfinite(v)):
            raise ValidationError("amplitudes must be a non-empty finite vector")
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > TOL:
            raise ValidationError(f"ket is not normalized (norm={norm!r})")
        object.__setattr__(self, "amplitudes", _frozen(v))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix.

    Construction validates all three invariants at ``TOL``; the stored matrix
    is read-only.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_complex_matrix(self.matrix)
        validate_density(m)
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True, eq=False)
class Observable:
    matrix: np.ndarray

    def __post_init__(self):
        m = _as_complex_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"observable must be square, got {m.shape}")
        if hermiticity_error(m) > TOL:
            raise ValidationError("observable is not Hermitian")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class BipartiteSplit:
    dim_a: int
    dim_b: int

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValueError("split dimensions must be positive")

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b


State = Union[DensityMatrix, PureState]


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def validate_density(m: np.ndarray, tol: float = TOL) -> None:
    """Raise ValidationError unless ``m`` is a valid density matrix."""
    if m.shape[0] != m.shape[1]:
        raise ValidationError(f"density matrix must be square, got {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise ValidationError(f"dimension {m.shape[0]} exceeds supported size")
    herr = hermiticity_error(m)
    if herr > tol:
        raise ValidationError(f"not Hermitian (max asymmetry {herr:.3g})")
    tr = np.trace(m)
    if abs(tr - 1.0) > tol:
        raise ValidationError(f"trace is {tr.real:.12g}, expected 1")
    lam_min = eigvals_hermitian(m)[0]
    if lam_min < -tol:
        raise ValidationError(f"not positive semidefinite (min eigenvalue {lam_min:.3g})")


def _density(rho: State) -> DensityMatrix:
    if isinstance(rho, PureState):
        return density_from_ket(rho)
    if isinstance(rho, DensityMatrix):
        return rho
    return DensityMatrix(rho)


def _matrix(m) -> np.ndarray:
    if isinstance(m, (DensityMatrix, Observable)):
        return m.matrix
    return _as_complex_matrix(m)


# --- Hermitian eigensolver -------------------------------------------------


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def eigh_hermitian(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors as columns. Each eigenvector's phase is fixed so that its
    largest-magnitude component (first one on ties) is real and positive.
    """
    a = _matrix(m).copy()
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"matrix must be square, got {a.shape}")
    if hermiticity_error(a) > TOL:
        raise ValueError("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    tiny = 1e-300 * scale

    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) < JACOBI_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = complex(a[p, q])
                mag = abs(apq)
                if mag < tiny:
                    a[p, q] = a[q, p] = 0.0
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                # J = diag(1, conj(phase)) makes the pivot real, then a real rotation zeroes it:
                # J = [[c, s], [-s*conj(phase), c*conj(phase)]], A <- J^H A J, V <- V J
                sp = s * phase.conjugate()
                cp = c * phase.conjugate()
                cp_, q_ = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp_ - sp * q_
                a[:, q] = s * cp_ + cp * q_
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - sp.conjugate() * rq
                a[q, :] = s * rp + cp.conjugate() * rq
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - sp * vq
                v[:, q] = s * vp + cp * vq

    vals = np.real(np.diag(a)).copy()
    order = np.argsort(vals, kind="stable")
    vals, v = vals[order], v[:, order]
    for k in range(n):
        col = v[:, k]
        i = int(np.argmax(np.abs(col) - 1e-12 * np.arange(n)))
        v[:, k] = col * (abs(col[i]) / col[i])
    return vals, v


def eigvals_hermitian(m) -> np.ndarray:
    return eigh_hermitian(m)[0]


# --- constructors ----------------------------------------------------------


def basis_ket(dim: int, index: int) -> PureState:
    if dim < 1:
        raise ValueError("dim must be positive")
    if not 0 <= index < dim:
        raise ValueError(f"index {index} out of range for dim {dim}")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return PureState(v)


def bell_psi(sign: str) -> PureState:
    """|Psi+-> = (|01> +- |10>)/sqrt(2)."""
    if sign in ("+", "plus"):
        s = 1.0
    elif sign in ("-", "minus", "−"):
        s = -1.0
    else:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    r = 1.0 / np.sqrt(2.0)
    return PureState(np.array([0.0, r, s * r, 0.0], dtype=complex))


def singlet() -> PureState:
    return bell_psi("-")


def gas_pure_state() -> PureState:
    """Equal-weight superposition |Psi->/2 + (|Psi+> + |00> + |11>)/2."""
    v = (
        0.5 * bell_psi("-").amplitudes
        + 0.5 * bell_psi("+").amplitudes
        + 0.5 * basis_ket(4, 0).amplitudes
        + 0.5 * basis_ket(4, 3).amplitudes
    )
    return PureState(v)


def density_from_ket(k: PureState) -> DensityMatrix:
    if not isinstance(k, PureState):
        k = PureState(k)
    a = k.amplitudes
    return DensityMatrix(np.outer(a, a.conj()))


def maximally_mixed(dim: int) -> DensityMatrix:
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


def tensor(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


# --- tensor structure ------------------------------------------------------


def partial_trace(rho: State, split: BipartiteSplit | tuple[int, int], keep: str = "A") -> DensityMatrix:
    """Reduced state on factor ``keep`` ("A" = first, "B" = second)."""
    if not isinstance(split, BipartiteSplit):
        split = BipartiteSplit(*split)
    rho = _density(rho)
    if split.dim != rho.dim:
        raise ValueError(f"split {split.dim_a}x{split.dim_b} inconsistent with dim {rho.dim}")
    t = rho.matrix.reshape(split.dim_a, split.dim_b, split.dim_a, split.dim_b)
    if keep.upper() == "A":
        red = np.einsum("ibjb->ij", t)
    elif keep.upper() == "B":
        red = np.einsum("aiaj->ij", t)
    else:
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    return DensityMatrix(red)


def partial_transpose(rho: State, split: BipartiteSplit | tuple[int, int] = (2, 2)) -> np.ndarray:
    """Transpose on the second factor. Returns a plain Hermitian matrix (not a state)."""
    if not isinstance(split, BipartiteSplit):
        split = BipartiteSplit(*split)
    rho = _density(rho)
    if split.dim != rho.dim:
        raise ValueError(f"split {split.dim_a}x{split.dim_b} inconsistent with dim {rho.dim}")
    da, db = split.dim_a, split.dim_b
    t = rho.matrix.reshape(da, db, da, db).transpose(0, 3, 2, 1)
    return t.reshape(da * db, da * db)


def purify(rho: State) -> PureState:
    """Pure state on dim**2 whose reduced state on the first factor is ``rho``.

    Builds sum_i sqrt(l_i) |e_i> (x) |i> with eigenvalues taken in descending
    order, so the largest eigenvalue's eigenvector pairs with ancilla |0>.
    The ancilla is the second tensor factor.
    """
    rho = _density(rho)
    vals, vecs = eigh_hermitian(rho.matrix)
    vals, vecs = vals[::-1], vecs[:, ::-1]
    d = rho.dim
    psi = np.zeros(d * d, dtype=complex)
    for i in range(d):
        lam = max(vals[i], 0.0)
        if lam == 0.0:
            continue
        psi += np.sqrt(lam) * np.kron(vecs[:, i], np.eye(d)[i])
    return PureState(psi / np.linalg.norm(psi))


# --- scalar functionals ----------------------------------------------------


def _check_dims(a, b) -> None:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def purity(rho: State) -> float:
    m = _density(rho).matrix
    return float(np.real(np.sum(m * m.T)))


def von_neumann_entropy(rho: State) -> float:
    """Entropy in bits; zero eigenvalues contribute nothing."""
    lam = eigvals_hermitian(_density(rho).matrix)
    lam = lam[lam > 1e-15]
    return float(max(-np.sum(lam * np.log2(lam)), 0.0))


def fidelity_with_ket(rho: State, k: PureState) -> float:
    rho = _density(rho)
    _check_dims(rho, k)
    a = k.amplitudes
    val = a.conj() @ rho.matrix @ a
    return float(val.real)


def expectation(rho: State, obs: Observable) -> float:
    rho = _density(rho)
    if not isinstance(obs, Observable):
        obs = Observable(obs)
    _check_dims(rho, obs)
    return float(np.real(np.trace(rho.matrix @ obs.matrix)))


def trace_distance(a: State, b: State) -> float:
    a, b = _density(a), _density(b)
    _check_dims(a, b)
    lam = eigvals_hermitian(a.matrix - b.matrix)
    return float(0.5 * np.sum(np.abs(lam)))


# --- Pauli matrices --------------------------------------------------------

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, SIGMA_X, SIGMA_Y, SIGMA_Z)
for _m in PAULIS:
    _m.setflags(write=False)
