"""Operator-sum channels on two-spin states, Haar sampling and the U(x)U twirl."""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .qcore import (
    PAULIS,
    TOL,
    DensityMatrix,
    State,
    ValidationError,
    _density,
    density_from_ket,
    fidelity_with_ket,
    singlet,
)

_MC_CHUNK = 8192


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Channel rho -> sum_k K rho K^dagger.

    Completeness is not enforced here so that broken channels can be built
    and rejected by :func:`verify_cptp`; :func:`apply` refuses them.
    """

    kraus_ops: tuple

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.kraus_ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        for k in ops:
            if k.shape != (d, d):
                raise ValueError(f"Kraus operators must all be {d}x{d}, got {k.shape}")
            if not np.all(np.isfinite(k)):
                raise ValidationError("Kraus operator has non-finite entries")
            k.setflags(write=False)
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def dim(self) -> int:
        return self.kraus_ops[0].shape[0]

    def completeness_error(self) -> float:
        s = sum(k.conj().T @ k for k in self.kraus_ops)
        return float(np.max(np.abs(s - np.eye(self.dim))))


@dataclass(frozen=True)
class WernerParams:
    """Singlet weight p' of p'|Psi-><Psi-| + (1 - p') I/4, valid on [-1/3, 1]."""

    p_prime: float

    def __post_init__(self):
        p = float(self.p_prime)
        if not np.isfinite(p) or p < -1.0 / 3.0 - TOL or p > 1.0 + TOL:
            raise ValidationError(f"Werner parameter {p!r} outside [-1/3, 1]")
        object.__setattr__(self, "p_prime", min(max(p, -1.0 / 3.0), 1.0))


def _werner(w) -> WernerParams:
    return w if isinstance(w, WernerParams) else WernerParams(w)


def werner_state(w: WernerParams | float) -> DensityMatrix:
    p = _werner(w).p_prime
    s = density_from_ket(singlet()).matrix
    return DensityMatrix(p * s + (1.0 - p) * np.eye(4) / 4.0)


def verify_cptp(ch: KrausChannel, tol: float = TOL) -> bool:
    return ch.completeness_error() <= tol


def apply(ch: KrausChannel, rho: State) -> DensityMatrix:
    rho = _density(rho)
    if ch.dim != rho.dim:
        raise ValueError(f"channel dim {ch.dim} does not match state dim {rho.dim}")
    if not verify_cptp(ch):
        raise ValidationError(f"channel is not trace preserving (error {ch.completeness_error():.3g})")
    m = rho.matrix
    out = sum(k @ m @ k.conj().T for k in ch.kraus_ops)
    return DensityMatrix(out)


def identity_channel(dim: int = 4) -> KrausChannel:
    return KrausChannel((np.eye(dim),))


def is_unitary(u, tol: float = TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))) <= tol


def collective_unitary(u) -> KrausChannel:
    """Both spins rotated by the same 2x2 unitary: single Kraus operator U (x) U."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 unitary, got shape {u.shape}")
    if not is_unitary(u):
        raise ValueError("matrix is not unitary")
    return KrausChannel((np.kron(u, u),))


def singlet_projector() -> np.ndarray:
    return density_from_ket(singlet()).matrix


def block_dephasing() -> KrausChannel:
    """Removes coherences between the singlet line and the triplet block."""
    ps = singlet_projector()
    return KrausChannel((ps, np.eye(4) - ps))


def depolarizing(q: float) -> KrausChannel:
    """rho -> (1 - q) rho + q I/4 via the 16 two-qubit Pauli products."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"depolarizing strength must lie in [0, 1], got {q!r}")
    ops = []
    for i, (a, b) in enumerate(itertools.product(PAULIS, PAULIS)):
        weight = 1.0 - 15.0 * q / 16.0 if i == 0 else q / 16.0
        ops.append(np.sqrt(weight) * np.kron(a, b))
    return KrausChannel(tuple(ops))


# --- Haar sampling ---------------------------------------------------------


def _su2_from_raw(raw: np.ndarray) -> np.ndarray:
    """Map blocks of 4 uint64 words to SU(2) matrices, shape (n, 2, 2).

    Box-Muller turns each block into two independent standard complex
    Gaussians (a, b); normalizing gives a uniform point on S^3 and
    [[a, -b*], [b, a*]] is then Haar distributed on SU(2).
    """
    u = ((raw.reshape(-1, 4) >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53
    r1 = np.sqrt(-2.0 * np.log(u[:, 0]))
    r2 = np.sqrt(-2.0 * np.log(u[:, 2]))
    a = r1 * np.exp(2j * np.pi * u[:, 1])
    b = r2 * np.exp(2j * np.pi * u[:, 3])
    norm = np.sqrt(np.abs(a) ** 2 + np.abs(b) ** 2)
    a, b = a / norm, b / norm
    out = np.empty((a.size, 2, 2), dtype=complex)
    out[:, 0, 0] = a
    out[:, 0, 1] = -b.conj()
    out[:, 1, 0] = b
    out[:, 1, 1] = a.conj()
    return out


def haar_su2_batch(seed: int, start: int, count: int) -> np.ndarray:
    """Unitaries for counters ``start .. start+count-1``.

    Sample ``i`` is drawn from Philox block ``i`` under key ``seed``, so any
    sample can be regenerated independently of how the range is chunked.
    """
    if count < 0 or start < 0:
        raise ValueError("start and count must be non-negative")
    bitgen = np.random.Philox(key=int(seed) & 0xFFFFFFFFFFFFFFFF)
    if start:
        bitgen.advance(int(start))
    return _su2_from_raw(bitgen.random_raw(4 * count))


@dataclass
class UnitarySampler:
    seed: int = 0
    counter: int = field(default=0)

    def __post_init__(self):
        if not 0 <= self.seed < 2**64 or not 0 <= self.counter < 2**64:
            raise ValueError("seed and counter must be 64-bit unsigned integers")


def haar_su2(sampler: UnitarySampler) -> np.ndarray:
    """Draw the unitary at ``sampler.counter`` and advance the counter."""
    u = haar_su2_batch(sampler.seed, sampler.counter, 1)[0]
    sampler.counter += 1
    return u


# --- twirling ----------------------------------------------------------------


def _twirl_chunk(m: np.ndarray, seed: int, start: int, count: int) -> np.ndarray:
    us = haar_su2_batch(seed, start, count)
    uu = np.einsum("nab,ncd->nacbd", us, us).reshape(count, 4, 4)
    return np.einsum("nij,jk,nlk->il", uu, m, uu.conj())


def werner_twirl_mc(rho: State, n_samples: int, seed: int = 0, workers: int = 1) -> DensityMatrix:
    """Monte-Carlo average of (U(x)U) rho (U(x)U)^dagger over Haar U.

    Chunks are summed in index order, so the result does not depend on
    ``workers``.
    """
    rho = _density(rho)
    if rho.dim != 4:
        raise ValueError("the collective twirl acts on two-qubit (dim 4) states")
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    m = rho.matrix
    starts = range(0, n_samples, _MC_CHUNK)
    jobs = [(s, min(_MC_CHUNK, n_samples - s)) for s in starts]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda j: _twirl_chunk(m, seed, *j), jobs))
    else:
        parts = [_twirl_chunk(m, seed, *j) for j in jobs]
    total = np.zeros((4, 4), dtype=complex)
    for part in parts:
        total += part
    avg = total / n_samples
    return DensityMatrix(0.5 * (avg + avg.conj().T))


def werner_twirl_exact(rho: State) -> tuple[WernerParams, DensityMatrix]:
    """Closed-form twirl: keeps the singlet fidelity F, p' = (4F - 1)/3."""
    f = fidelity_with_ket(rho, singlet())
    w = WernerParams((4.0 * f - 1.0) / 3.0)
    return w, werner_state(w)


def singlet_damping(w: WernerParams | float, lam: float) -> WernerParams:
    """Scale p' by ``lam``, interpolating toward I/4."""
    w = _werner(w)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"damping must lie in [0, 1], got {lam!r}")
    return WernerParams(lam * w.p_prime)
