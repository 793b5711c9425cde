"""Entropies, minimum output entropy and capacities for qubit-input channels.

All logarithms are base 2; entropies are in bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .channels import (
    ChannelHandle,
    PureQubitInput,
    bloch_state,
    check_covariance,
    cloning_channel,
    complement_channel,
)
from .errors import CovarianceViolation, DomainError
from .linalg import check_density, clamp_spectrum, dagger, eigvalsh, hermitian_eigensystem

ZERO_EIGENVALUE = 1e-14
COVARIANCE_TOL = 1e-8


# --------------------------------------------------------------------------
# entropies


def entropy_from_spectrum(w, p: float = 1.0) -> float:
    """Renyi entropy of order ``p`` (von Neumann at ``p = 1``) of a spectrum."""
    w = clamp_spectrum(np.asarray(w, dtype=float))
    w = w[w > ZERO_EIGENVALUE]
    if p <= 0:
        raise DomainError(f"Renyi order must be > 0, got {p}")
    if p == 1:
        return float(max(0.0, -np.sum(w * np.log2(w))))
    if np.isinf(p):
        return float(-np.log2(w.max()))
    return float(max(0.0, np.log2(np.sum(w**p)) / (1.0 - p)))


def von_neumann_entropy(rho: np.ndarray, check: bool = True) -> float:
    if check:
        rho = check_density(rho)
    return entropy_from_spectrum(eigvalsh(rho))


def renyi_entropy(rho: np.ndarray, p: float, check: bool = True) -> float:
    """``S_p = log2(Tr rho^p) / (1 - p)``; ``p = 1`` gives von Neumann, ``inf`` min-entropy."""
    if p <= 0:
        raise DomainError(f"Renyi order must be > 0, got {p}")
    if check:
        rho = check_density(rho)
    return entropy_from_spectrum(eigvalsh(rho), p)


@dataclass(frozen=True)
class EntropySpec:
    """Entropy functional of Renyi order ``order`` (``1`` means von Neumann), in bits."""

    order: float = 1.0

    def __post_init__(self):
        if not self.order > 0:
            raise DomainError(f"Renyi order must be > 0, got {self.order}")

    def __call__(self, rho: np.ndarray) -> float:
        return renyi_entropy(rho, self.order)


def shannon_entropy(q) -> float:
    return entropy_from_spectrum(np.asarray(q, dtype=float))


# --------------------------------------------------------------------------
# minimum output entropy


class MoeResult(NamedTuple):
    value: float
    witness: PureQubitInput | np.ndarray
    evaluations: int


def _bloch_ket(x) -> np.ndarray:
    theta, phi = x
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def _real_ket(x) -> np.ndarray:
    d = x.size // 2
    psi = x[:d] + 1j * x[d:]
    return psi / np.linalg.norm(psi)


def output_entropy(channel: ChannelHandle, rho: np.ndarray, p: float = 1.0) -> float:
    return entropy_from_spectrum(eigvalsh(channel.apply(rho)), p)


def min_output_entropy(
    channel: ChannelHandle, p: float = 1.0, restarts: int = 16, seed: int = 0
) -> MoeResult:
    """Minimise ``S_p(N(psi))`` over pure inputs by multi-start Nelder-Mead.

    Qubit inputs are parametrised by Bloch angles and the witness is a
    :class:`PureQubitInput`; larger inputs use ``2 d`` real coordinates of an
    unnormalised ket and the witness is the normalised ket.
    """
    rng = np.random.default_rng(seed)
    qubit = channel.d_in == 2
    ket = _bloch_ket if qubit else _real_ket
    nfev = 0

    def objective(x):
        psi = ket(x)
        return output_entropy(channel, np.outer(psi, psi.conj()), p)

    best_val, best_x = np.inf, None
    for _ in range(max(1, restarts)):
        if qubit:
            x0 = np.array([np.arccos(rng.uniform(-1, 1)), rng.uniform(0, 2 * np.pi)])
        else:
            x0 = rng.normal(size=2 * channel.d_in)
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000 * len(x0)},
        )
        nfev += res.nfev
        if res.fun < best_val:
            best_val, best_x = float(res.fun), res.x
    witness = PureQubitInput.from_ket(_bloch_ket(best_x)) if qubit else _real_ket(best_x)
    return MoeResult(best_val, witness, nfev)


# --------------------------------------------------------------------------
# capacities


def delta(ell: int) -> float:
    return ell * (ell - 1) / 2


def sum_k_log_k(ell: int) -> float:
    """``sum_{k=0}^{ell-1} k log2 k`` with ``0 log 0 = 0``."""
    k = np.arange(2, ell, dtype=float)
    return math.fsum(k * np.log2(k))


def cloning_capacity_closed_form(ell: int) -> float:
    """``1 - log2(l-1) + (1/Delta_l) sum_k k log2 k``."""
    if ell < 2:
        raise DomainError(f"cloning capacity needs ell >= 2, got {ell}")
    return 1.0 - math.log2(ell - 1) + sum_k_log_k(ell) / delta(ell)


def cloning_capacity_table(ell_max: int) -> np.ndarray:
    """Closed-form capacities for ``ell = 2..ell_max`` (index ``ell - 2``)."""
    ell = np.arange(2, ell_max + 1, dtype=float)
    k = np.arange(0, ell_max, dtype=float)
    klogk = np.zeros_like(k)
    klogk[2:] = k[2:] * np.log2(k[2:])
    partial = np.cumsum(klogk)  # partial[m] = sum_{k<=m}
    s = partial[(ell - 1).astype(int)]
    return 1.0 - np.log2(ell - 1) + s / (ell * (ell - 1) / 2)


@dataclass(frozen=True)
class CapacityReport:
    descriptor: tuple
    c_hol: float
    s_min: float
    log_f: float
    method: str
    diagnostics: dict = field(default_factory=dict)


def covariant_capacity(
    channel: ChannelHandle,
    restarts: int = 16,
    seed: int = 0,
    covariance_trials: int = 20,
) -> CapacityReport:
    """Holevo capacity of a covariant qubit channel, ``S(N(1/2)) - S_min``.

    For an irreducible output representation ``S(N(1/2)) = log2 d_out``; for a
    direct sum of covariant blocks it is the entropy of the block-wise
    maximally mixed output.
    """
    violation = check_covariance(channel, covariance_trials, seed)
    if violation > COVARIANCE_TOL:
        raise CovarianceViolation(
            f"channel {channel.descriptor} violates covariance by {violation:.3e}"
        )
    moe = min_output_entropy(channel, 1.0, restarts, seed)
    log_f = output_entropy(channel, np.eye(2, dtype=np.complex128) / 2)
    return CapacityReport(
        channel.descriptor,
        log_f - moe.value,
        moe.value,
        log_f,
        "covariant-closed-form",
        {
            "restarts": restarts,
            "evaluations": moe.evaluations,
            "covariance_violation": violation,
            "witness": (moe.witness.alpha, moe.witness.beta),
        },
    )


# --------------------------------------------------------------------------
# brute-force Holevo quantity


class HolevoResult(NamedTuple):
    value: float
    weights: np.ndarray
    angles: np.ndarray
    iterations: int


def _log2_psd(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    w, v = hermitian_eigensystem(m)
    w = clamp_spectrum(w)
    logw = np.where(w > ZERO_EIGENVALUE, np.log2(np.where(w > 0, w, 1.0)), 0.0)
    return w, v, logw


def holevo_quantity(outputs: list[np.ndarray], weights: np.ndarray) -> float:
    avg = sum(q * s for q, s in zip(weights, outputs))
    return entropy_from_spectrum(eigvalsh(avg)) - sum(
        q * entropy_from_spectrum(eigvalsh(s)) for q, s in zip(weights, outputs)
    )


def _relative_entropies(outputs, avg) -> np.ndarray:
    _, v, logw = _log2_psd(avg)
    log_avg = (v * logw) @ dagger(v)
    return np.array(
        [-entropy_from_spectrum(eigvalsh(s)) - np.trace(s @ log_avg).real for s in outputs]
    )


def holevo_bruteforce(
    channel: ChannelHandle,
    m: int = 4,
    restarts: int = 32,
    seed: int = 0,
    max_rounds: int = 40,
) -> HolevoResult:
    """Lower bound on the Holevo capacity by direct ensemble search.

    Alternates multiplicative (exponentiated-gradient) weight updates with
    per-state Nelder-Mead moves on the Bloch sphere.
    """
    if channel.d_in != 2:
        raise DomainError("ensemble search is implemented for qubit inputs")
    if m < 2:
        raise DomainError(f"ensemble size must be >= 2, got {m}")
    rng = np.random.default_rng(seed)

    def outputs_of(angles):
        out = []
        for x in angles:
            psi = _bloch_ket(x)
            out.append(channel.apply(np.outer(psi, psi.conj())))
        return out

    best = HolevoResult(-np.inf, np.array([]), np.array([]), 0)
    for _ in range(restarts):
        angles = np.column_stack(
            [np.arccos(rng.uniform(-1, 1, size=m)), rng.uniform(0, 2 * np.pi, size=m)]
        )
        weights = np.full(m, 1.0 / m)
        outs = outputs_of(angles)
        chi = holevo_quantity(outs, weights)
        rounds = 0
        for rounds in range(1, max_rounds + 1):
            prev = chi
            for _ in range(10):
                avg = sum(q * s for q, s in zip(weights, outs))
                d = _relative_entropies(outs, avg)
                weights = weights * np.exp2(d - d.max())
                weights /= weights.sum()
            for i in range(m):

                def neg_chi(x, i=i):
                    trial = list(outs)
                    psi = _bloch_ket(x)
                    trial[i] = channel.apply(np.outer(psi, psi.conj()))
                    return -holevo_quantity(trial, weights)

                res = minimize(
                    neg_chi,
                    angles[i],
                    method="Nelder-Mead",
                    options={"xatol": 1e-9, "fatol": 1e-14, "maxiter": 400},
                )
                if -res.fun >= holevo_quantity(outs, weights):
                    angles[i] = res.x
                    outs = outputs_of(angles)
            chi = holevo_quantity(outs, weights)
            if chi - prev < 1e-13:
                break
        if chi > best.value:
            best = HolevoResult(chi, weights.copy(), angles.copy(), rounds)
    return best


# --------------------------------------------------------------------------
# coherent information


def coherent_information(ell: int, rho: np.ndarray) -> float:
    """``S(Cl(rho)) - S(S^c(rho))`` for the 1 -> (ell-1) cloning channel."""
    return output_entropy(cloning_channel(ell), rho) - output_entropy(complement_channel(ell), rho)


def coherent_information_max(ell: int, direction=(0.0, 0.0, 1.0)) -> tuple[float, float]:
    """Maximise coherent information over Bloch radius ``r`` along ``direction``.

    Returns ``(max value, argmax r)``.  Covariance makes the direction
    irrelevant, so a bounded 1-D search suffices.
    """
    if ell < 2:
        raise DomainError(f"ell must be >= 2, got {ell}")

    def neg(r):
        return -coherent_information(ell, bloch_state(r, direction))

    res = minimize_scalar(neg, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-10})
    value, r_star = -res.fun, float(res.x)
    # endpoints win ties so that an exact boundary optimum is reported as such
    for r in (0.0, 1.0):
        v = -neg(r)
        if v >= value - 1e-12:
            value, r_star = max(v, value), r
            break
    return float(value), r_star
