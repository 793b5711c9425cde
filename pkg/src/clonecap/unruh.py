"""Unruh channel: block weights, truncated direct sum, capacity series and a Fock-space oracle.

The channel output is block diagonal with block ``l`` (dimension ``l``)
carrying weight ``p_l = (1-z)^3 z^(l-2) l(l-1)/2`` times the ``1 -> (l-1)``
cloning output, for ``0 <= z < 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .capacity import (
    cloning_capacity_table,
    min_output_entropy,
    shannon_entropy,
)
from .channels import (
    ChannelHandle,
    direct_sum_channel,
    cloning_channel,
    identity_channel,
    tensor_channel,
)
from .errors import DomainError, TruncationError

Z_MAX = 1.0 - 1e-6
DEFAULT_TAIL = 1e-9


def _check_z(z: float) -> float:
    z = float(z)
    if not 0.0 <= z < 1.0:
        raise DomainError(f"z must lie in [0, 1), got {z}")
    return z


def weight(ell: int, z: float) -> float:
    """Block weight ``p_l``."""
    if ell < 2:
        raise DomainError(f"block index must be >= 2, got {ell}")
    z = _check_z(z)
    return (1.0 - z) ** 3 * z ** (ell - 2) * ell * (ell - 1) / 2


def weights(z: float, K: int) -> np.ndarray:
    """``p_l`` for ``l = 2..K`` (index ``l - 2``)."""
    z = _check_z(z)
    ell = np.arange(2, K + 1, dtype=float)
    return (1.0 - z) ** 3 * z ** (ell - 2) * ell * (ell - 1) / 2


def partial_sum_closed_form(z: float, K: int) -> float:
    """``c_K = (2 + 2(K^2-1) z^K - K(K+1) z^(K-1) - K(K-1) z^(K+1)) / 2``."""
    z = _check_z(z)
    if K < 2:
        raise DomainError(f"K must be >= 2, got {K}")
    return 0.5 * (
        2.0 + 2.0 * (K * K - 1) * z**K - K * (K + 1) * z ** (K - 1) - K * (K - 1) * z ** (K + 1)
    )


def tail(z: float, K: int) -> float:
    """``1 - c_K`` as a sum of positive terms (no cancellation near ``c_K = 1``).

    The weights are a negative-binomial law, so the tail is a three-term
    binomial probability.
    """
    z = _check_z(z)
    if K < 2:
        raise DomainError(f"K must be >= 2, got {K}")
    y = 1.0 - z
    return z ** (K - 1) * (z * z + (K + 1) * y * z + K * (K + 1) / 2 * y * y)


@dataclass(frozen=True)
class UnruhEnsemble:
    z: float
    K: int
    weights: np.ndarray
    tail: float

    @property
    def ells(self) -> np.ndarray:
        return np.arange(2, self.K + 1)

    @property
    def partial_sum(self) -> float:
        return math.fsum(self.weights)


def ensemble(z: float, epsilon_tail: float = DEFAULT_TAIL) -> UnruhEnsemble:
    """Smallest truncation ``K`` whose neglected weight is at most ``epsilon_tail``."""
    z = _check_z(z)
    if not epsilon_tail > 0:
        raise DomainError(f"epsilon_tail must be positive, got {epsilon_tail}")
    # the tail is decreasing in K; jump geometrically, then bisect
    hi = 2
    while tail(z, hi) > epsilon_tail:
        hi *= 2
    lo = max(2, hi // 2)
    if tail(z, lo) <= epsilon_tail:
        K = lo
    else:
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if tail(z, mid) <= epsilon_tail:
                hi = mid
            else:
                lo = mid
        K = hi
    w = weights(z, K)
    w.setflags(write=False)
    return UnruhEnsemble(z, K, w, tail(z, K))


def truncated_unruh_channel(ens: UnruhEnsemble) -> ChannelHandle:
    """Direct sum of cloning channels with weights ``p_l / c_K``."""
    keep = [(ell, p) for ell, p in zip(ens.ells, ens.weights) if p > 0]
    total = math.fsum(p for _, p in keep)
    return direct_sum_channel([(p / total, cloning_channel(int(ell))) for ell, p in keep])


class UnruhCapacity(NamedTuple):
    value: float
    error_bar: float
    K: int


def unruh_capacity(z: float, epsilon_tail: float = DEFAULT_TAIL) -> UnruhCapacity:
    """Holevo capacity ``sum_l p_l C(Cl_{l-1})`` truncated at the ensemble's ``K``.

    Every block capacity lies in ``(0, 1]``, so the neglected part is in
    ``[0, tail]``; the returned value is the truncated sum and the error bar is
    the tail weight.
    """
    ens = ensemble(z, epsilon_tail)
    caps = cloning_capacity_table(ens.K)
    return UnruhCapacity(math.fsum(ens.weights * caps), ens.tail, ens.K)


def large_ell_limit() -> float:
    """``lim_{l -> inf} C(Cl_{l-1}) = 1 - 1/(2 ln 2)``."""
    return 1.0 - 1.0 / (2.0 * math.log(2.0))


# --------------------------------------------------------------------------
# Fock-space oracle


@dataclass(frozen=True)
class FockState:
    """Truncated four-mode state; keys are occupations ``(n_a, n_b, n_c, n_d)``."""

    cutoff: int
    amplitudes: dict
    norm_deficit: float


class FockBlock(NamedTuple):
    ell: int
    weight: float
    state: np.ndarray


class FockReport(NamedTuple):
    blocks: list[FockBlock]
    norm_deficit: float
    cutoff: int


def fock_state(alpha: complex, beta: complex, z: float, cutoff: int) -> FockState:
    """Expand ``(1-z)^(3/2) (beta b+ + alpha a+) exp[t (a+c+ + b+d+)] |vac>``, ``t = sqrt z``.

    ``exp[t a+c+] |00> = sum_n t^n |n, n>``, so only pair-correlated terms
    appear; every occupation is kept at most ``cutoff``.  Amplitudes are exact
    (not renormalised) and the missing norm is reported.
    """
    z = _check_z(z)
    if cutoff < 2:
        raise DomainError(f"cutoff must be >= 2, got {cutoff}")
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-12:
        raise DomainError("input amplitudes are not normalised")
    t = math.sqrt(z)
    pref = (1.0 - z) ** 1.5
    amps: dict = {}
    for n in range(cutoff + 1):
        for m in range(cutoff + 1):
            c = pref * t ** (n + m)
            if n + 1 <= cutoff and alpha != 0:
                key = (n + 1, m, n, m)
                amps[key] = amps.get(key, 0.0) + alpha * math.sqrt(n + 1) * c
            if m + 1 <= cutoff and beta != 0:
                key = (n, m + 1, n, m)
                amps[key] = amps.get(key, 0.0) + beta * math.sqrt(m + 1) * c
    norm = math.fsum(abs(a) ** 2 for a in amps.values())
    return FockState(cutoff, amps, max(0.0, 1.0 - norm))


def fock_oracle(
    alpha: complex,
    beta: complex,
    z: float,
    cutoff: int,
    max_deficit: float | None = None,
) -> FockReport:
    """Trace out modes ``c, d`` and regroup by photon number in ``a, b``.

    Block ``l`` collects ``n_a + n_b = l - 1`` in the basis ``|l-1-i, i>``,
    ``i = 0..l-1``.  Only blocks with ``l <= cutoff + 1`` are complete under
    the cutoff and are returned.  ``max_deficit`` turns an insufficient cutoff
    into a :class:`TruncationError`.
    """
    st = fock_state(alpha, beta, z, cutoff)
    if max_deficit is not None and st.norm_deficit > max_deficit:
        raise TruncationError(
            f"cutoff {cutoff} leaves norm deficit {st.norm_deficit:.3e} > {max_deficit:.3e}",
            bound=st.norm_deficit,
            requested=max_deficit,
        )
    # environment occupation (n_c, n_d) fixes the block: n_a + n_b = n_c + n_d + 1
    env: dict = {}
    for (na, nb, nc, nd), a in st.amplitudes.items():
        ell = na + nb + 1
        if ell > cutoff + 1:
            continue
        vec = env.setdefault((nc, nd), np.zeros(ell, dtype=np.complex128))
        vec[nb] += a
    blocks: dict[int, np.ndarray] = {}
    for vec in env.values():
        ell = vec.size
        acc = blocks.setdefault(ell, np.zeros((ell, ell), dtype=np.complex128))
        acc += np.outer(vec, vec.conj())
    out = []
    for ell in sorted(blocks):
        w = float(np.trace(blocks[ell]).real)
        if w > 0:
            out.append(FockBlock(ell, w, blocks[ell] / w))
    return FockReport(out, st.norm_deficit, cutoff)


# --------------------------------------------------------------------------
# direct-sum minimum output entropy


class DirectSumMoeReport(NamedTuple):
    direct: float
    formula: float
    discrepancy: float
    auxiliary: str | None


def direct_sum_moe_check(
    components: Sequence[tuple[float, ChannelHandle]],
    auxiliary: str | None = None,
    restarts: int = 8,
    seed: int = 0,
) -> DirectSumMoeReport:
    """Compare the directly minimised output entropy of ``(+) q_i N_i`` with
    ``H(q) + sum_i q_i S_min(N_i)``.

    With ``auxiliary="identity"`` the direct side is ``S_min(G (x) id_2)``,
    minimised over entangled two-qubit inputs; the identity contributes zero
    minimum output entropy, so the formula side is unchanged.
    """
    g = direct_sum_channel(components)
    q = [c[0] for c in components]
    formula = shannon_entropy(q) + sum(
        qi * min_output_entropy(ch, 1.0, restarts, seed).value for qi, ch in components
    )
    target = g
    if auxiliary is not None:
        if auxiliary != "identity":
            raise DomainError(f"unsupported auxiliary channel {auxiliary!r}")
        target = tensor_channel(g, identity_channel(2))
        if target.d_in * target.d_out > 64 * 64:
            raise DomainError("product channel too large for the desk-scale check")
    direct = min_output_entropy(target, 1.0, restarts, seed).value
    return DirectSumMoeReport(direct, formula, abs(direct - formula), auxiliary)

