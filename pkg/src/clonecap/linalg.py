"""Dense complex matrix primitives.

Matrices are plain ``numpy.ndarray`` of dtype complex128. Bipartite operators
follow one ordering everywhere: the first tensor factor is the channel input
(or reference) system, the second is the channel output.
"""
from __future__ import annotations

from functools import reduce
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import ContractError, NotPSDError, ShapeError

HERMITIAN_TOL = 1e-10
DENSITY_HERMITIAN_TOL = 1e-12
DENSITY_TRACE_TOL = 1e-12
CLAMP_TOL = 1e-10


class EigenSystem(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _square(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {m.shape}")
    return m


def _subsystem(which) -> int:
    if which in (0, "A", "a", "in", "input"):
        return 0
    if which in (1, "B", "b", "out", "output"):
        return 1
    raise ValueError(f"unknown subsystem {which!r}; use 0/'A' or 1/'B'")


def _bipartite(m: np.ndarray, dims) -> np.ndarray:
    m = _square(m)
    d_a, d_b = (int(d) for d in dims)
    if m.shape[0] != d_a * d_b:
        raise ShapeError(f"matrix of size {m.shape[0]} does not act on {d_a}x{d_b}")
    return m.reshape(d_a, d_b, d_a, d_b)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def hermiticity_error(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_error(m) <= tol


def tensor_product(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of any number of matrices (or vectors)."""
    if not factors:
        raise ValueError("tensor_product needs at least one factor")
    return reduce(np.kron, (np.asarray(f, dtype=np.complex128) for f in factors))


def partial_trace(m: np.ndarray, dims, keep=0) -> np.ndarray:
    """Trace out one factor of a bipartite operator, keeping ``keep``."""
    t = _bipartite(m, dims)
    if _subsystem(keep) == 0:
        return np.einsum("ijkj->ik", t)
    return np.einsum("ijil->jl", t)


def partial_transpose(m: np.ndarray, dims, on=1) -> np.ndarray:
    """Transpose one tensor factor of a bipartite operator."""
    t = _bipartite(m, dims)
    d = t.shape[0] * t.shape[1]
    if _subsystem(on) == 0:
        return t.transpose(2, 1, 0, 3).reshape(d, d)
    return t.transpose(0, 3, 2, 1).reshape(d, d)


def hermitian_eigensystem(m: np.ndarray) -> EigenSystem:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues are ascending and eigenvectors are the orthonormal columns
    of the returned matrix.
    """
    m = _square(m)
    err = hermiticity_error(m)
    if err > HERMITIAN_TOL * max(1.0, float(np.max(np.abs(m)))):
        raise ContractError(f"matrix is not Hermitian (max asymmetry {err:.3e})")
    w, v, _ = _kernels.jacobi_eigh(0.5 * (m + dagger(m)))
    return EigenSystem(w, v)


def eigvalsh(m: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (tridiagonal QL kernel)."""
    m = _square(m)
    return _kernels.tridiag_eigvalsh(0.5 * (m + dagger(m)))


def clamp_spectrum(w: np.ndarray, tol: float = CLAMP_TOL) -> np.ndarray:
    """Zero eigenvalues in ``[-tol, 0)``; anything more negative is an error."""
    w = np.asarray(w, dtype=float)
    if w.size and w.min() < -tol:
        raise NotPSDError(f"eigenvalue {w.min():.3e} below -{tol:g}")
    return np.where(w < 0.0, 0.0, w)


def matrix_sqrt_psd(m: np.ndarray) -> np.ndarray:
    w, v = hermitian_eigensystem(m)
    w = clamp_spectrum(w)
    return (v * np.sqrt(w)) @ dagger(v)


def trace_norm(m: np.ndarray) -> float:
    return float(np.sum(np.abs(eigvalsh(m))))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    a = _square(a, "a")
    b = _square(b, "b")
    if a.shape != b.shape:
        raise ShapeError(f"trace distance of {a.shape} and {b.shape}")
    return 0.5 * trace_norm(a - b)


def check_density(m: np.ndarray) -> np.ndarray:
    """Validate a density operator and return it as a complex array."""
    m = _square(m, "density operator")
    err = hermiticity_error(m)
    if err > DENSITY_HERMITIAN_TOL:
        raise ContractError(f"density operator not Hermitian (asymmetry {err:.3e})")
    tr = np.trace(m).real
    if abs(tr - 1.0) > DENSITY_TRACE_TOL:
        raise ContractError(f"density operator has trace {tr!r}")
    lo = eigvalsh(m)[0]
    if lo < -CLAMP_TOL:
        raise NotPSDError(f"density operator has eigenvalue {lo:.3e}")
    return m


def ket_to_density(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    return np.outer(psi, psi.conj())


def random_pure(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector in C^d."""
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    return psi / np.linalg.norm(psi)


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random full-rank (or given-rank) density operator of Hilbert-Schmidt type."""
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))
