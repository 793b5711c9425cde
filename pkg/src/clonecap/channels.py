"""Cloning channels, their complements, depolarizing maps and Choi calculus.

A 1 -> (l-1) cloning channel sends a qubit into an l-dimensional output ``E``;
its complement lands in the (l-1)-dimensional environment ``H``.  Both are
obtained from one isometry ``W : C^2 -> E (x) H``.  The ``E`` basis is ordered
by descending photon number in mode ``a`` (equivalently descending ``J_z``),
and ``H`` by ascending ``n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import block_diag

from .errors import ConsistencyError, CovarianceViolation, DomainError, ShapeError
from .linalg import (
    check_density,
    dagger,
    ket_to_density,
    partial_trace,
    random_density,
    random_pure,
    trace_distance,
)
from .su2 import conjugate_irrep, generators, irrep, random_angles

PATH_AGREEMENT_TOL = 1e-9


# --------------------------------------------------------------------------
# inputs


@dataclass(frozen=True)
class PureQubitInput:
    alpha: complex
    beta: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"|alpha|^2 + |beta|^2 = {norm!r}, expected 1")

    @classmethod
    def from_bloch(cls, theta: float, phi: float) -> "PureQubitInput":
        return cls(complex(np.cos(theta / 2)), complex(np.exp(1j * phi) * np.sin(theta / 2)))

    @classmethod
    def from_ket(cls, psi) -> "PureQubitInput":
        psi = np.asarray(psi, dtype=np.complex128).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(complex(psi[0]), complex(psi[1]))

    @classmethod
    def random(cls, rng: np.random.Generator) -> "PureQubitInput":
        return cls.from_ket(random_pure(2, rng))

    @property
    def ket(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=np.complex128)

    @property
    def density(self) -> np.ndarray:
        return ket_to_density(self.ket)

    @property
    def stokes(self) -> np.ndarray:
        a, b = self.alpha, self.beta
        ab = a * np.conj(b)
        return np.array([2 * ab.real, -2 * ab.imag, abs(a) ** 2 - abs(b) ** 2])

    @property
    def conj_stokes(self) -> np.ndarray:
        return self.stokes * np.array([1.0, -1.0, 1.0])


def pauli_eigenstates() -> list[PureQubitInput]:
    s = 1 / np.sqrt(2)
    return [
        PureQubitInput(1, 0),
        PureQubitInput(0, 1),
        PureQubitInput(s, s),
        PureQubitInput(s, -s),
        PureQubitInput(s, 1j * s),
        PureQubitInput(s, -1j * s),
    ]


def spanning_inputs() -> list[np.ndarray]:
    """The six Pauli eigenstates plus one fixed mixed qubit state."""
    mixed = np.array([[0.7, 0.1 - 0.2j], [0.1 + 0.2j, 0.3]], dtype=np.complex128)
    return [p.density for p in pauli_eigenstates()] + [mixed]


def stokes_of(rho: np.ndarray) -> np.ndarray:
    """Bloch vector of a qubit operator, ``rho = (Tr rho) 1/2 + n . J``."""
    rho = np.asarray(rho)
    return np.array([2 * rho[0, 1].real, -2 * rho[0, 1].imag, (rho[0, 0] - rho[1, 1]).real])


# --------------------------------------------------------------------------
# the isometry


@dataclass(frozen=True)
class CloningIsometry:
    ell: int
    matrix: np.ndarray

    @property
    def k(self) -> int:
        return self.ell - 2

    @property
    def K(self) -> int:
        return 2 * (self.k + 1)

    def blocks(self) -> tuple[np.ndarray, np.ndarray]:
        """Columns reshaped to ``E x H`` matrices, one per input basis ket."""
        h = self.ell - 1
        return self.matrix[:, 0].reshape(self.ell, h), self.matrix[:, 1].reshape(self.ell, h)


@lru_cache(maxsize=None)
def cloning_isometry(ell: int) -> CloningIsometry:
    if ell < 2:
        raise DomainError(f"cloning isometry needs ell >= 2, got {ell}")
    k = ell - 2
    h = ell - 1
    scale = np.sqrt(2.0 / ((k + 1) * (k + 2)))
    w = np.zeros((ell * h, 2), dtype=np.complex128)
    for n in range(k + 1):
        # |0> -> |a = k-n+1>_E |n>_H, |1> -> |a = k-n>_E |n>_H; E index = ell-1-a
        w[n * h + n, 0] = np.sqrt(k - n + 1) * scale
        w[(n + 1) * h + n, 1] = np.sqrt(n + 1) * scale
    w.setflags(write=False)
    return CloningIsometry(ell, w)


@lru_cache(maxsize=None)
def _output_tensors(ell: int) -> tuple[np.ndarray, np.ndarray]:
    # out[a, b] = Tr_H(w_a w_b^dag), env[a, b] = Tr_E(w_a w_b^dag)
    blocks = cloning_isometry(ell).blocks()
    out = np.array([[ba @ dagger(bb) for bb in blocks] for ba in blocks])
    env = np.array([[ba.T @ bb.conj() for bb in blocks] for ba in blocks])
    out.setflags(write=False)
    env.setflags(write=False)
    return out, env


def _cloning_linear(ell: int, x: np.ndarray) -> np.ndarray:
    return np.einsum("ab,abij->ij", x, _output_tensors(ell)[0])


def _complement_linear(ell: int, x: np.ndarray) -> np.ndarray:
    return np.einsum("ab,abij->ij", x, _output_tensors(ell)[1])


def cloning_output_analytic(ell: int, stokes) -> np.ndarray:
    """Stokes-form channel output ``(2/(l(l-1))) ((l-1)/2 1 + n . J)``."""
    g = generators(ell)
    n = np.asarray(stokes, dtype=float)
    body = (ell - 1) / 2 * np.eye(ell) + n[0] * g.jx + n[1] * g.jy + n[2] * g.jz
    return 2.0 / (ell * (ell - 1)) * body


def complement_output_analytic(ell: int, conj_stokes) -> np.ndarray:
    """Stokes-form complementary output, dimension ``l - 1``."""
    if ell == 2:
        return np.ones((1, 1), dtype=np.complex128)
    g = generators(ell - 1)
    n = np.asarray(conj_stokes, dtype=float)
    body = ell / 2 * np.eye(ell - 1) + n[0] * g.jx + n[1] * g.jy + n[2] * g.jz
    return 2.0 / (ell * (ell - 1)) * body


def _dual_path(direct: np.ndarray, analytic: np.ndarray, what: str) -> np.ndarray:
    gap = trace_distance(direct, analytic)
    if gap > PATH_AGREEMENT_TOL:
        raise ConsistencyError(f"{what}: isometry and Stokes paths differ by {gap:.3e}")
    return check_density(direct)


def apply_cloning(ell: int, phi: PureQubitInput) -> np.ndarray:
    """Channel output for a pure qubit, cross-checked against the Stokes form."""
    w = cloning_isometry(ell).matrix
    psi = w @ phi.ket
    direct = partial_trace(np.outer(psi, psi.conj()), (ell, ell - 1), keep=0)
    return _dual_path(direct, cloning_output_analytic(ell, phi.stokes), f"Cl_{ell - 1}")


def apply_complement(ell: int, phi: PureQubitInput) -> np.ndarray:
    """Complementary output for a pure qubit, cross-checked against the Stokes form."""
    w = cloning_isometry(ell).matrix
    psi = w @ phi.ket
    direct = partial_trace(np.outer(psi, psi.conj()), (ell, ell - 1), keep=1)
    return _dual_path(direct, complement_output_analytic(ell, phi.conj_stokes), f"S^c_{ell - 1}")


# --------------------------------------------------------------------------
# channel handles and Choi matrices


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi state ``(1/d_in) sum_ij |i><j| (x) N(|i><j|)`` (input factor first)."""

    d_in: int
    d_out: int
    matrix: np.ndarray
    normalization: str = "state"

    def __post_init__(self):
        n = self.d_in * self.d_out
        if self.matrix.shape != (n, n):
            raise ShapeError(f"Choi matrix must be {n}x{n}, got {self.matrix.shape}")
        if self.normalization not in ("state", "unnormalized"):
            raise ValueError(f"unknown normalization {self.normalization!r}")

    def as_state(self) -> "ChoiMatrix":
        if self.normalization == "state":
            return self
        return ChoiMatrix(self.d_in, self.d_out, self.matrix / self.d_in, "state")

    def input_marginal(self) -> np.ndarray:
        return partial_trace(self.matrix, (self.d_in, self.d_out), keep=0)


@dataclass(frozen=True, eq=False)
class ChannelHandle:
    """A linear map on ``d_in x d_in`` operators with optional covariance data.

    ``reps`` holds ``(input_rep, output_rep)``: callables from rotation angles
    to the unitary irreps under which the channel is declared covariant.
    """

    d_in: int
    d_out: int
    apply: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    descriptor: tuple
    reps: tuple[Callable, Callable] | None = field(default=None, repr=False)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=np.complex128)
        if rho.shape != (self.d_in, self.d_in):
            raise ShapeError(f"channel expects {self.d_in}x{self.d_in} input, got {rho.shape}")
        return self.apply(rho)

    @cached_property
    def choi(self) -> ChoiMatrix:
        return choi_of(self)


def cloning_channel(ell: int) -> ChannelHandle:
    cloning_isometry(ell)
    return ChannelHandle(
        2,
        ell,
        lambda x: _cloning_linear(ell, x),
        ("cloning", ell),
        (lambda t: irrep(2, t), lambda t: irrep(ell, t)),
    )


def complement_channel(ell: int) -> ChannelHandle:
    cloning_isometry(ell)
    return ChannelHandle(
        2,
        ell - 1,
        lambda x: _complement_linear(ell, x),
        ("complement", ell),
        (lambda t: irrep(2, t), lambda t: conjugate_irrep(ell - 1, t)),
    )


def depolarizing(d: int, lam: float) -> ChannelHandle:
    """``P(X) = lam X + (1 - lam) Tr(X) 1/d``."""
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    lo = -1.0 / (d * d - 1) if d > 1 else -np.inf
    if not lo - 1e-15 <= lam <= 1.0 + 1e-15:
        raise DomainError(f"depolarizing parameter {lam} outside [{lo}, 1] for d={d}")
    eye = np.eye(d, dtype=np.complex128) / d

    def apply(x):
        return lam * x + (1.0 - lam) * np.trace(x) * eye

    return ChannelHandle(
        d, d, apply, ("depolarizing", d, float(lam)), (lambda t: irrep(d, t), lambda t: irrep(d, t))
    )


def identity_channel(d: int) -> ChannelHandle:
    return depolarizing(d, 1.0)


def isometric_channel(v: np.ndarray, d_out: int, keep: str = "out") -> ChannelHandle:
    """Channel ``X -> Tr_env(V X V^dag)`` for ``V : C^d_in -> out (x) env``."""
    v = np.asarray(v, dtype=np.complex128)
    d_in = v.shape[1]
    d_env = v.shape[0] // d_out
    if d_out * d_env != v.shape[0]:
        raise ShapeError(f"isometry rows {v.shape[0]} not divisible by d_out={d_out}")
    which = 0 if keep == "out" else 1

    def apply(x):
        return partial_trace(v @ x @ dagger(v), (d_out, d_env), keep=which)

    dims = (d_in, d_out if which == 0 else d_env)
    return ChannelHandle(dims[0], dims[1], apply, ("isometric", keep))


def choi_channel(choi: ChoiMatrix, descriptor: tuple = ("choi",), reps=None) -> ChannelHandle:
    return ChannelHandle(
        choi.d_in, choi.d_out, lambda x: apply_via_choi(choi, x), descriptor, reps
    )


def compose(outer: ChannelHandle, inner: ChannelHandle) -> ChannelHandle:
    """``outer o inner``."""
    if outer.d_in != inner.d_out:
        raise ShapeError(f"cannot compose: inner outputs {inner.d_out}, outer takes {outer.d_in}")
    reps = None
    if outer.reps is not None and inner.reps is not None:
        reps = (inner.reps[0], outer.reps[1])
    return ChannelHandle(
        inner.d_in,
        outer.d_out,
        lambda x: outer.apply(inner.apply(x)),
        ("composed", outer.descriptor, inner.descriptor),
        reps,
    )


def direct_sum_channel(components: Sequence[tuple[float, ChannelHandle]]) -> ChannelHandle:
    """``rho -> q_1 N_1(rho) (+) q_2 N_2(rho) (+) ...`` (block diagonal)."""
    if not components:
        raise DomainError("direct sum needs at least one component")
    weights = np.array([float(q) for q, _ in components])
    chans = [c for _, c in components]
    if np.any(weights <= 0):
        raise DomainError("direct-sum weights must be positive")
    if abs(weights.sum() - 1.0) > 1e-12:
        raise DomainError(f"direct-sum weights sum to {weights.sum()!r}")
    d_in = chans[0].d_in
    if any(c.d_in != d_in for c in chans):
        raise ShapeError("direct-sum components must share the input dimension")
    d_out = sum(c.d_out for c in chans)

    def apply(x):
        return block_diag(*(q * c.apply(x) for q, c in zip(weights, chans)))

    reps = None
    if all(c.reps is not None for c in chans):
        reps = (
            chans[0].reps[0],
            lambda t: block_diag(*(c.reps[1](t) for c in chans)),
        )
    desc = ("direct-sum", tuple((float(q), c.descriptor) for q, c in zip(weights, chans)))
    return ChannelHandle(d_in, d_out, apply, desc, reps)


def _unit_images(channel: ChannelHandle) -> np.ndarray:
    d = channel.d_in
    out = np.empty((d, d, channel.d_out, channel.d_out), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=np.complex128)
            e[i, j] = 1.0
            out[i, j] = channel.apply(e)
    return out


def tensor_channel(first: ChannelHandle, second: ChannelHandle) -> ChannelHandle:
    """``first (x) second`` acting on the product of the two inputs."""
    a, b = _unit_images(first), _unit_images(second)
    d1, d2 = first.d_in, second.d_in
    n_out = first.d_out * second.d_out

    def apply(x):
        x4 = x.reshape(d1, d2, d1, d2)
        return np.einsum("ikjl,ijac,klbd->abcd", x4, a, b).reshape(n_out, n_out)

    reps = None
    if first.reps is not None and second.reps is not None:
        reps = (
            lambda t: np.kron(first.reps[0](t), second.reps[0](t)),
            lambda t: np.kron(first.reps[1](t), second.reps[1](t)),
        )
    return ChannelHandle(
        d1 * d2, n_out, apply, ("tensor", first.descriptor, second.descriptor), reps
    )


def choi_of(channel: ChannelHandle) -> ChoiMatrix:
    d = channel.d_in
    n = d * channel.d_out
    r = np.zeros((n, n), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=np.complex128)
            e[i, j] = 1.0
            r += np.kron(e, channel.apply(e))
    return ChoiMatrix(d, channel.d_out, r / d, "state")


def apply_via_choi(choi: ChoiMatrix, rho: np.ndarray) -> np.ndarray:
    """``N(rho) = d_in Tr_in[(rho^T (x) 1) R]`` for a trace-one Choi state ``R``."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (choi.d_in, choi.d_in):
        raise ShapeError(f"input must be {choi.d_in}x{choi.d_in}, got {rho.shape}")
    r = choi.as_state().matrix.reshape(choi.d_in, choi.d_out, choi.d_in, choi.d_out)
    # (rho^T)_{ji} = rho_{ij}
    return choi.d_in * np.einsum("ij,iajb->ab", rho, r)


# --------------------------------------------------------------------------
# structural checks


def check_covariance(channel: ChannelHandle, trials: int = 50, seed: int = 0) -> float:
    """Largest trace-distance violation of ``N(r1 rho r1^dag) = r2 N(rho) r2^dag``."""
    if channel.reps is None:
        raise CovarianceViolation(f"channel {channel.descriptor} declares no irreps")
    rep_in, rep_out = channel.reps
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        theta = random_angles(rng)
        rho = ket_to_density(random_pure(channel.d_in, rng))
        u_in, u_out = rep_in(theta), rep_out(theta)
        lhs = channel.apply(u_in @ rho @ dagger(u_in))
        rhs = u_out @ channel.apply(rho) @ dagger(u_out)
        worst = max(worst, trace_distance(lhs, rhs))
    return worst


def intertwining_lambda(ell: int) -> float:
    return (ell - 1) / (ell + 1)


def check_intertwining(ell: int) -> float:
    """Max trace distance between ``P_l o Cl`` and ``Cl o P_2`` on the spanning set."""
    lam = intertwining_lambda(ell)
    cl = cloning_channel(ell)
    left = compose(depolarizing(ell, lam), cl)
    right = compose(cl, depolarizing(2, lam))
    return max(trace_distance(left(x), right(x)) for x in spanning_inputs())


def check_depolarized_complement(ell: int) -> float:
    """Max distance between conj(P_l o Cl_{l-1}) and the complement of Cl_l."""
    lam = intertwining_lambda(ell)
    left = compose(depolarizing(ell, lam), cloning_channel(ell))
    right = complement_channel(ell + 1)
    return max(trace_distance(np.conj(left(x)), right(x)) for x in spanning_inputs())


def random_qubit_channel(d_out: int, d_env: int, rng: np.random.Generator) -> ChannelHandle:
    """Channel from a Haar-like random isometry ``C^2 -> C^d_out (x) C^d_env``."""
    z = rng.normal(size=(d_out * d_env, 2)) + 1j * rng.normal(size=(d_out * d_env, 2))
    q, _ = np.linalg.qr(z)
    return isometric_channel(q, d_out)


def random_mixed_qubit(rng: np.random.Generator) -> np.ndarray:
    return random_density(2, rng)


def bloch_state(r: float, direction=(0.0, 0.0, 1.0)) -> np.ndarray:
    """Qubit ``(1 + r n . sigma)/2`` for a unit direction ``n``."""
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    return 0.5 * np.array(
        [[1 + r * n[2], r * (n[0] - 1j * n[1])], [r * (n[0] + 1j * n[1]), 1 - r * n[2]]],
        dtype=np.complex128,
    )
