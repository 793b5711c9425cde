"""su(2) generators, group irreps and Clebsch-Gordan projectors.

Every irrep is written in the basis of descending magnetic number, so that
``J_z = diag(j, j-1, ..., -j)`` with ``j = (dim - 1) / 2`` and the ladder
operators are real.  Generators obey ``[J+, J-] = 2 J_z``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConsistencyError, DomainError, ShapeError
from .linalg import dagger, hermitian_eigensystem

CASIMIR_TOL = 1e-8


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Su2Generators:
    dim: int
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray
    jplus: np.ndarray
    jminus: np.ndarray

    @property
    def spin(self) -> float:
        return (self.dim - 1) / 2

    def components(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.jx, self.jy, self.jz


@dataclass(frozen=True)
class IrrepElement:
    dim: int
    theta: tuple[float, float, float]
    matrix: np.ndarray


@dataclass(frozen=True)
class CgDecomposition:
    dims: tuple[int, int]
    blocks: tuple[tuple[int, np.ndarray], ...]

    @property
    def irrep_dims(self) -> list[int]:
        return [d for d, _ in self.blocks]

    def projector(self, irrep_dim: int) -> np.ndarray:
        for d, p in self.blocks:
            if d == irrep_dim:
                return p
        raise KeyError(f"no irrep of dimension {irrep_dim} in {self.dims}")


@lru_cache(maxsize=None)
def generators(dim: int) -> Su2Generators:
    """Spin-(dim-1)/2 generators built from the ladder operators."""
    if dim < 1:
        raise DomainError(f"irrep dimension must be >= 1, got {dim}")
    j = (dim - 1) / 2
    m = j - np.arange(dim)
    jplus = np.zeros((dim, dim), dtype=np.complex128)
    for i in range(1, dim):
        jplus[i - 1, i] = np.sqrt(j * (j + 1) - m[i] * (m[i] + 1))
    jminus = dagger(jplus).copy()
    jx = (jplus + jminus) / 2
    jy = -0.5j * (jplus - jminus)
    jz = np.diag(m).astype(np.complex128)
    return Su2Generators(
        dim, *(_frozen(a) for a in (jx, jy, jz, jplus, jminus))
    )


def irrep_element(dim: int, theta) -> IrrepElement:
    """``exp(-i (tx Jx + ty Jy + tz Jz))`` by spectral exponentiation."""
    theta = tuple(float(t) for t in theta)
    if len(theta) != 3 or not all(np.isfinite(theta)):
        raise DomainError(f"rotation parameters must be 3 finite reals, got {theta}")
    g = generators(dim)
    h = theta[0] * g.jx + theta[1] * g.jy + theta[2] * g.jz
    if not np.any(h):
        return IrrepElement(dim, theta, np.eye(dim, dtype=np.complex128))
    w, v = hermitian_eigensystem(h)
    u = (v * np.exp(-1j * w)) @ dagger(v)
    return IrrepElement(dim, theta, u)


def irrep(dim: int, theta) -> np.ndarray:
    return irrep_element(dim, theta).matrix


def conjugate_irrep(dim: int, theta) -> np.ndarray:
    return np.conj(irrep_element(dim, theta).matrix)


def random_angles(rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(0.0, 2.0 * np.pi, size=3)


def coherent_state(dim: int, theta: float, phi: float) -> np.ndarray:
    """Spin-coherent ket: the top weight vector rotated to polar angles ``(theta, phi)``."""
    top = np.zeros(dim, dtype=np.complex128)
    top[0] = 1.0
    return irrep(dim, (0.0, 0.0, phi)) @ (irrep(dim, (0.0, theta, 0.0)) @ top)


def total_generators(d1: int, d2: int) -> list[np.ndarray]:
    g1, g2 = generators(d1), generators(d2)
    e1, e2 = np.eye(d1), np.eye(d2)
    return [np.kron(a, e2) + np.kron(e1, b) for a, b in zip(g1.components(), g2.components())]


@lru_cache(maxsize=None)
def cg_projectors(d1: int, d2: int) -> CgDecomposition:
    """Isotypic projectors of ``[d1] x [d2]`` from the total Casimir.

    The Casimir commutes with total ``J_z``, so it is diagonalised sector by
    sector (fixed ``m1 + m2``), and eigenvectors are grouped by ``j(j+1)``.
    """
    if d1 < 1 or d2 < 1:
        raise DomainError(f"dimensions must be >= 1, got ({d1}, {d2})")
    jt = total_generators(d1, d2)
    casimir = sum(t @ t for t in jt)
    n = d1 * d2
    i1, i2 = np.divmod(np.arange(n), d2)
    sector = i1 + i2
    acc: dict[int, np.ndarray] = {}
    for s in np.unique(sector):
        idx = np.flatnonzero(sector == s)
        w, v = hermitian_eigensystem(casimir[np.ix_(idx, idx)])
        for lam, vec in zip(w, v.T):
            j = (-1.0 + np.sqrt(1.0 + 4.0 * max(lam, 0.0))) / 2.0
            two_j = int(round(2 * j))
            if abs(lam - (two_j / 2) * (two_j / 2 + 1)) > CASIMIR_TOL:
                raise ConsistencyError(f"Casimir eigenvalue {lam} is not of the form j(j+1)")
            full = np.zeros(n, dtype=np.complex128)
            full[idx] = vec
            p = acc.setdefault(two_j + 1, np.zeros((n, n), dtype=np.complex128))
            p += np.outer(full, full.conj())
    blocks = tuple((d, _frozen(acc[d])) for d in sorted(acc))
    expected = list(range(abs(d1 - d2) + 1, d1 + d2, 2))
    if [d for d, _ in blocks] != expected:
        raise ConsistencyError(f"irreps {[d for d, _ in blocks]} != expected {expected}")
    return CgDecomposition((d1, d2), blocks)


def _gell_mann_candidates(d: int):
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=np.complex128)
            s[j, k] = s[k, j] = 1.0
            yield s
            a = np.zeros((d, d), dtype=np.complex128)
            a[j, k] = -1j
            a[k, j] = 1j
            yield a
    for k in range(1, d):
        diag = np.zeros(d)
        diag[:k] = 1.0
        diag[k] = -k
        yield np.diag(diag).astype(np.complex128)


@lru_cache(maxsize=None)
def generator_basis(d: int, identity_scale: float = 1.0) -> tuple[np.ndarray, ...]:
    """Hilbert-Schmidt orthogonal Hermitian basis ``[s*1, Jx, Jy, Jz, ...]``.

    The su(2) generators come first; for ``d > 2`` the set is completed by
    Gram-Schmidt over generalised Gell-Mann matrices (unit norm).
    """
    basis = [identity_scale * np.eye(d, dtype=np.complex128)]
    if d >= 2:
        basis.extend(np.array(j) for j in generators(d).components())
    for cand in _gell_mann_candidates(d):
        if len(basis) == d * d:
            break
        r = cand.copy()
        for b in basis:
            r -= (np.vdot(b, r) / np.vdot(b, b)) * b
        nrm = np.linalg.norm(r)
        if nrm > 1e-8:
            basis.append(r / nrm)
    if len(basis) != d * d:
        raise ConsistencyError(f"basis completion produced {len(basis)} elements for d={d}")
    return tuple(_frozen(b) for b in basis)


def expand_in_generator_basis(m: np.ndarray, d1: int, d2: int, identity_scales=(1.0, 1.0)) -> np.ndarray:
    """Coefficients ``mu[k, l]`` of ``m = sum mu[k, l] B_k (x) B_l``."""
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (d1 * d2, d1 * d2):
        raise ShapeError(f"expected a {d1 * d2}x{d1 * d2} matrix, got {m.shape}")
    b1 = np.array(generator_basis(d1, float(identity_scales[0])))
    b2 = np.array(generator_basis(d2, float(identity_scales[1])))
    n1 = np.einsum("kij,kij->k", b1.conj(), b1).real
    n2 = np.einsum("kij,kij->k", b2.conj(), b2).real
    m4 = m.reshape(d1, d2, d1, d2)
    mu = np.einsum("kij,lab,iajb->kl", b1.conj(), b2.conj(), m4)
    return mu / np.outer(n1, n2)


def from_generator_basis(mu: np.ndarray, d1: int, d2: int, identity_scales=(1.0, 1.0)) -> np.ndarray:
    """Inverse of :func:`expand_in_generator_basis`; ``mu`` may be truncated."""
    b1 = np.array(generator_basis(d1, float(identity_scales[0])))
    b2 = np.array(generator_basis(d2, float(identity_scales[1])))
    mu = np.asarray(mu)
    full = np.zeros((d1 * d1, d2 * d2), dtype=np.complex128)
    full[: mu.shape[0], : mu.shape[1]] = mu
    m4 = np.einsum("kl,kij,lab->iajb", full, b1, b2)
    return m4.reshape(d1 * d2, d1 * d2)
