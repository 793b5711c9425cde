"""Entanglement-breaking certificates and degrading maps for cloning channels.

Conventions: Choi states put the map's input factor first.  The Schur-form
Choi matrix ``sum_d w_d P_d / d`` over the isotypic projectors of
``[l] x [l-1]`` defines the degrading map ``D`` with ``D o Cl = S^c``; its
output partial transpose defines the conjugate degrading map ``D'`` with
``D' o Cl = conj(S^c)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .channels import (
    ChoiMatrix,
    apply_via_choi,
    choi_of,
    cloning_channel,
    complement_channel,
    pauli_eigenstates,
    spanning_inputs,
)
from .errors import DomainError, LiftInconsistency, ShapeError
from .linalg import (
    check_density,
    dagger,
    eigvalsh,
    ket_to_density,
    matrix_sqrt_psd,
    partial_transpose,
    random_pure,
    trace_distance,
)
from .su2 import (
    cg_projectors,
    coherent_state,
    conjugate_irrep,
    expand_in_generator_basis,
    from_generator_basis,
    irrep,
    random_angles,
)

PPT_TOL = 1e-12
LIFT_TOL = 1e-9
FIDELITY_TOL = 1e-9


def _check_ell(ell: int, lo: int = 2) -> int:
    ell = int(ell)
    if ell < lo:
        raise DomainError(f"ell must be >= {lo}, got {ell}")
    return ell


# --------------------------------------------------------------------------
# fidelities


def bures_fidelity_2d(a: np.ndarray, b: np.ndarray) -> float:
    """``Tr[ab] + 2 sqrt(det a det b)`` for qubit states."""
    a, b = check_density(a), check_density(b)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise DomainError(f"two-dimensional form needs 2x2 states, got {a.shape}, {b.shape}")
    dets = max(0.0, np.linalg.det(a).real) * max(0.0, np.linalg.det(b).real)
    return float(np.trace(a @ b).real + 2.0 * np.sqrt(dets))


def uhlmann_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """``(Tr sqrt(sqrt(a) b sqrt(a)))^2``."""
    a, b = np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ShapeError(f"fidelity of {a.shape} and {b.shape}")
    sa = matrix_sqrt_psd(a)
    m = sa @ b @ sa
    w = eigvalsh(0.5 * (m + dagger(m)))
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)


# --------------------------------------------------------------------------
# entanglement breaking


@dataclass(frozen=True)
class PptReport:
    ell: int
    choi: ChoiMatrix
    min_pt_eigenvalue: float
    verdict: str


def ppt_check(ell: int) -> PptReport:
    """Partial transpose (input factor) of the complement's Choi state."""
    ell = _check_ell(ell)
    choi = choi_of(complement_channel(ell))
    pt = partial_transpose(choi.matrix, (choi.d_in, choi.d_out), on=0)
    lo = float(eigvalsh(pt)[0])
    return PptReport(ell, choi, lo, "PPT" if lo >= -PPT_TOL else "NPT")


class GeneratorLift(NamedTuple):
    choi: ChoiMatrix
    c: float
    mu: np.ndarray
    mu_deviation: float
    agreement: float


def _output_identity_scale(ell: int) -> float:
    # the complement output is (1/Delta)(l/2 * 1 + n.J); scaling the identity
    # basis element by l/2 makes the coefficient table independent of l
    return ell / 2


def generator_lift(ell: int) -> GeneratorLift:
    """Lift the two-dimensional complement's Choi state to dimension ``l - 1``.

    The qubit-output Choi state is expanded over ``{B_k (x) B_l}`` with
    ``B = (s 1, Jx, Jy, Jz)``; substituting the spin ``(l-2)/2`` generators on
    the output factor and renormalising by ``c`` must reproduce the direct
    Choi state, with the same coefficient table.
    """
    ell = _check_ell(ell, 3)
    scales2 = (1.0, _output_identity_scale(3))
    scales = (1.0, _output_identity_scale(ell))
    mu = expand_in_generator_basis(choi_of(complement_channel(3)).matrix, 2, 2, scales2)
    lifted = from_generator_basis(mu, 2, ell - 1, scales)
    c = float(np.trace(lifted).real)
    lifted = lifted / c
    direct = choi_of(complement_channel(ell))
    agreement = float(np.max(np.abs(lifted - direct.matrix)))
    table = expand_in_generator_basis(direct.matrix * c, 2, ell - 1, scales)
    padded = np.zeros_like(table)
    padded[:4, :4] = mu
    mu_dev = float(np.max(np.abs(table - padded)))
    if agreement > LIFT_TOL or mu_dev > LIFT_TOL:
        raise LiftInconsistency(
            f"lift for l={ell}: Choi gap {agreement:.3e}, coefficient gap {mu_dev:.3e}"
        )
    return GeneratorLift(ChoiMatrix(2, ell - 1, lifted), c, mu, mu_dev, agreement)


class SeparableDecomposition(NamedTuple):
    weights: np.ndarray
    input_kets: np.ndarray
    output_kets: np.ndarray
    reconstruction_error: float

    def matrix(self) -> np.ndarray:
        a = np.einsum("n,ni,nj->nij", self.weights, self.input_kets, self.input_kets.conj())
        b = np.einsum("ni,nj->nij", self.output_kets, self.output_kets.conj())
        return np.einsum("nij,nkl->ikjl", a, b).reshape(
            a.shape[1] * b.shape[1], a.shape[1] * b.shape[1]
        )


def separable_decomposition(ell: int) -> SeparableDecomposition:
    """Explicit product-state decomposition of the complement's Choi state.

    The complement is a measure-and-prepare map: measure the qubit with the
    coherent-state POVM ``2|m><m| dm/4pi`` and prepare the spin-coherent state
    ``|m~>`` (``m~ = (m_x, -m_y, m_z)``) in dimension ``l - 1``.  The sphere
    integral has polynomial degree ``l - 1``, so Gauss-Legendre nodes in
    ``cos theta`` times equispaced azimuths integrate it exactly.
    """
    ell = _check_ell(ell)
    d = ell - 1
    n_theta = (d + 1) // 2 + 1
    n_phi = d + 2
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    phis = 2 * np.pi * np.arange(n_phi) / n_phi
    w, kin, kout = [], [], []
    for xi, wi in zip(x, wx):
        th = float(np.arccos(xi))
        for ph in phis:
            # Choi input factor carries conj(|m>) = |m~>
            w.append(wi / (2 * n_phi))
            kin.append(coherent_state(2, th, -ph))
            kout.append(coherent_state(d, th, -ph))
    dec = SeparableDecomposition(np.array(w), np.array(kin), np.array(kout), 0.0)
    err = float(np.max(np.abs(dec.matrix() - choi_of(complement_channel(ell)).matrix)))
    return dec._replace(reconstruction_error=err)


# --------------------------------------------------------------------------
# degrading maps


@dataclass(frozen=True, eq=False)
class DegradingMapAnsatz:
    """Schur-form degrading map ``sum_d w_d P_d / d`` on ``[l] x [l-1]``.

    ``weights`` are nonnegative and sum to one, which is exactly the
    trace-preservation constraint because ``Tr_out P_d = (d/l) 1``.
    """

    ell: int
    blocks: tuple[tuple[int, np.ndarray], ...]
    weights: tuple[float, ...]

    @property
    def dims(self) -> tuple[int, int]:
        return (self.ell, self.ell - 1)

    @property
    def coefficients(self) -> tuple[float, ...]:
        """Projector coefficients ``c_d = w_d / d`` of the trace-one Choi state."""
        return tuple(w / d for w, (d, _) in zip(self.weights, self.blocks))

    @cached_property
    def schur_choi(self) -> ChoiMatrix:
        m = sum(c * p for c, (_, p) in zip(self.coefficients, self.blocks))
        return ChoiMatrix(self.ell, self.ell - 1, np.asarray(m, dtype=np.complex128))

    @cached_property
    def choi(self) -> ChoiMatrix:
        """Choi state of the conjugate degrading map (output partial transpose)."""
        pt = partial_transpose(self.schur_choi.matrix, self.dims, on=1)
        return ChoiMatrix(self.ell, self.ell - 1, pt)

    def degrade(self, rho: np.ndarray) -> np.ndarray:
        return apply_via_choi(self.schur_choi, rho)

    def conjugate_degrade(self, rho: np.ndarray) -> np.ndarray:
        return apply_via_choi(self.choi, rho)


def _ansatz(ell: int, weights) -> DegradingMapAnsatz:
    blocks = cg_projectors(ell, ell - 1).blocks
    return DegradingMapAnsatz(ell, blocks, tuple(float(w) for w in weights))


def _block_outputs(ell: int, inputs) -> np.ndarray:
    """``out[d, i]``: conjugate-degraded ``Cl(x_i)`` through the single irrep ``d``."""
    blocks = cg_projectors(ell, ell - 1).blocks
    cl = cloning_channel(ell)
    eps = [cl(x) for x in inputs]
    out = []
    for d, p in blocks:
        single = ChoiMatrix(ell, ell - 1, partial_transpose(p / d, (ell, ell - 1), on=1))
        out.append([apply_via_choi(single, e) for e in eps])
    return np.array(out)


def _fidelities(block_outs: np.ndarray, targets, weights) -> np.ndarray:
    mixed = np.einsum("d,dijk->ijk", np.asarray(weights, dtype=float), block_outs)
    return np.array([uhlmann_fidelity(m, t) for m, t in zip(mixed, targets)])


class DegradingMapResult(NamedTuple):
    ansatz: DegradingMapAnsatz
    fidelity: float
    ok: bool


def build_degrading_map(ell: int, mode: str = "ansatz") -> DegradingMapResult:
    """Degrading map by the highest-irrep ansatz or by fidelity maximisation.

    ``mode="optimize"`` evaluates every single-irrep vertex of the weight
    simplex, then refines by golden-section line searches along the edges
    from the incumbent until the mean fidelity stops improving.  The returned
    fidelity is the minimum over the spanning inputs; ``ok`` flags whether it
    reaches ``1 - 1e-9``.
    """
    ell = _check_ell(ell)
    n = len(cg_projectors(ell, ell - 1).blocks)
    inputs = spanning_inputs()
    block_outs = _block_outputs(ell, inputs)
    sc = complement_channel(ell)
    targets = [np.conj(sc(x)) for x in inputs]
    if mode == "ansatz":
        w = np.zeros(n)
        w[-1] = 1.0
    elif mode == "optimize":
        w = _optimize_weights(lambda v: float(_fidelities(block_outs, targets, v).mean()), n)
    else:
        raise DomainError(f"unknown mode {mode!r}; use 'ansatz' or 'optimize'")
    fid = float(_fidelities(block_outs, targets, w).min())
    return DegradingMapResult(_ansatz(ell, w), fid, fid >= 1.0 - FIDELITY_TOL)


def _optimize_weights(mean_fid, n: int) -> np.ndarray:
    vertices = np.eye(n)
    scores = [mean_fid(v) for v in vertices]
    best_w = vertices[int(np.argmax(scores))].copy()
    best = max(scores)
    for _ in range(20):
        improved = False
        for k in range(n):
            target = vertices[k]
            if np.allclose(best_w, target):
                continue
            start = best_w.copy()

            def neg(t, start=start, target=target):
                return -mean_fid((1.0 - t) * start + t * target)

            res = minimize_scalar(neg, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-12})
            for t, val in ((float(res.x), -res.fun), (1.0, scores[k])):
                if val > best + 1e-14:
                    best, best_w, improved = val, (1.0 - t) * start + t * target, True
        if not improved:
            break
    return best_w


@dataclass(frozen=True)
class ConjugacyReport:
    ell: int
    deviation: float
    n_inputs: int


def verify_conjugate_degradability(
    ell: int, amap: DegradingMapAnsatz, n_random: int = 20, seed: int = 0
) -> ConjugacyReport:
    """Max trace distance between ``D'(Cl(phi))`` and ``conj(S^c(phi))``."""
    ell = _check_ell(ell)
    if amap.ell != ell:
        raise DomainError(f"map was built for l={amap.ell}, not {ell}")
    rng = np.random.default_rng(seed)
    inputs = [p.density for p in pauli_eigenstates()]
    inputs += [ket_to_density(random_pure(2, rng)) for _ in range(n_random)]
    cl, sc = cloning_channel(ell), complement_channel(ell)
    dev = max(trace_distance(amap.conjugate_degrade(cl(x)), np.conj(sc(x))) for x in inputs)
    return ConjugacyReport(ell, float(dev), len(inputs))


def check_choi_commutation(ell: int, amap: DegradingMapAnsatz, trials: int = 25, seed: int = 0) -> float:
    """Max spectral norm of ``[R', r_l (x) conj(r_{l-1})]`` over random rotations.

    ``R'`` is the conjugate degrading map's Choi state; the output-conjugate
    irrep appears because the output partial transpose conjugates the
    symmetry of the Schur form.
    """
    ell = _check_ell(ell)
    rng = np.random.default_rng(seed)
    r = amap.choi.matrix
    worst = 0.0
    for _ in range(trials):
        t = random_angles(rng)
        u = np.kron(irrep(ell, t), conjugate_irrep(ell - 1, t))
        worst = max(worst, float(np.linalg.norm(r @ u - u @ r, 2)))
    return worst


class DegradabilityWitness(NamedTuple):
    min_choi_eigenvalue: float
    deviation: float


def degradability_witness(ell: int, amap: DegradingMapAnsatz) -> DegradabilityWitness:
    """Conjugation composed with ``D'`` is the linear map ``D``: its Choi state must
    be PSD and ``D o Cl = S^c`` on the spanning inputs."""
    lo = float(eigvalsh(amap.schur_choi.matrix)[0])
    cl, sc = cloning_channel(ell), complement_channel(ell)
    dev = max(trace_distance(amap.degrade(cl(x)), sc(x)) for x in spanning_inputs())
    return DegradabilityWitness(lo, float(dev))
